from lyacert.expr.errors import (
    ExpressionError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
    VariableIndexError,
    ExpressionDomainError,
    NonSmoothError,
)
from lyacert.expr.nodes import (
    Expression,
    Constant,
    Variable,
    BinaryOp,
    FunctionCall,
    evaluate,
    gradient,
    hessian,
    laplacian,
)
from lyacert.expr.parser import parse
