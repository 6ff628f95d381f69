from typing import Dict, List, NamedTuple, Optional
import re
import math
from lyacert.expr.errors import (
    ExpressionSyntaxError,
    UnknownIdentifierError,
    VariableIndexError,
)
from lyacert.expr.nodes import (
    FUNCTIONS,
    BinaryOp,
    Constant,
    Expression,
    FunctionCall,
    Variable,
)

NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}
_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)
_VARIABLE = re.compile(r"x(\d+)$")


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens, position = [], 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            rest = text[position:].lstrip()
            if not rest:
                break
            raise ExpressionSyntaxError("Unexpected character", text, len(text) - len(rest))
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    """
    Recursive descent parser for the expression grammar.

        expr   := term (('+' | '-') term)*
        term   := unary (('*' | '/') unary)*
        unary  := ('-' | '+') unary | power
        power  := atom ('^' unary)?
        atom   := number | name | name '(' expr ')' | '(' expr ')'

    `^` is right associative and binds tighter than unary minus, so `-x1^2`
    is `-(x1^2)`. There is no implicit multiplication.

    Parameters
    ----------
    text : `str`, required
        Source text.
    m : `int`, required
        Dimension: valid variables are `x1..xm`.
    aliases : `Dict[str, int]`, optional (default = `None`)
        Extra variable names mapped to indices, e.g. `{"i": 1}` for rate
        expressions of birth-death chains.
    """

    def __init__(self, text: str, m: int, aliases: Optional[Dict[str, int]] = None) -> None:
        self._text = text
        self._m = m
        self._aliases = aliases or {}
        self._tokens = tokenize(text)
        self._cursor = 0

    def parse(self) -> Expression:
        expression = self._expr()
        token = self._peek()
        if token.kind != "end":
            raise ExpressionSyntaxError(f"Unexpected `{token.text}`", self._text, token.position)
        return expression

    def _peek(self) -> Token:
        return self._tokens[self._cursor]

    def _advance(self) -> Token:
        token = self._tokens[self._cursor]
        self._cursor += 1
        return token

    def _expect(self, text: str) -> None:
        token = self._advance()
        if token.text != text:
            found = token.text or "end of input"
            raise ExpressionSyntaxError(
                f"Expected `{text}` but found `{found}`", self._text, token.position
            )

    def _expr(self) -> Expression:
        node = self._term()
        while self._peek().text in ("+", "-"):
            op = self._advance().text
            node = BinaryOp(op, node, self._term())
        return node

    def _term(self) -> Expression:
        node = self._unary()
        while self._peek().text in ("*", "/"):
            op = self._advance().text
            node = BinaryOp(op, node, self._unary())
        return node

    def _unary(self) -> Expression:
        if self._peek().text == "-":
            self._advance()
            return FunctionCall("neg", self._unary())
        if self._peek().text == "+":
            self._advance()
            return self._unary()
        return self._power()

    def _power(self) -> Expression:
        base = self._atom()
        if self._peek().text == "^":
            self._advance()
            return BinaryOp("^", base, self._unary())
        return base

    def _atom(self) -> Expression:
        token = self._advance()
        if token.kind == "number":
            return Constant(float(token.text))
        if token.text == "(":
            node = self._expr()
            self._expect(")")
            return node
        if token.kind == "name":
            return self._name(token)
        found = token.text or "end of input"
        raise ExpressionSyntaxError(f"Unexpected `{found}`", self._text, token.position)

    def _name(self, token: Token) -> Expression:
        name = token.text
        if self._peek().text == "(":
            if name not in FUNCTIONS:
                raise UnknownIdentifierError(name, token.position)
            self._advance()
            arg = self._expr()
            self._expect(")")
            return FunctionCall(name, arg)
        if name in self._aliases:
            return self._variable(self._aliases[name])
        match = _VARIABLE.match(name)
        if match is not None:
            return self._variable(int(match.group(1)))
        if name in NAMED_CONSTANTS:
            return Constant(NAMED_CONSTANTS[name])
        raise UnknownIdentifierError(name, token.position)

    def _variable(self, index: int) -> Expression:
        if not 1 <= index <= self._m:
            raise VariableIndexError(index, self._m)
        return Variable(index)


def parse(text: str, m: int, aliases: Optional[Dict[str, int]] = None) -> Expression:
    """Parse `text` into an expression over `x1..xm`."""
    return Parser(text, m, aliases=aliases).parse()
