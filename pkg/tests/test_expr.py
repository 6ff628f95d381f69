import math
import pytest
import numpy as np
from lyacert.expr import (
    Constant,
    ExpressionDomainError,
    ExpressionSyntaxError,
    FunctionCall,
    NonSmoothError,
    UnknownIdentifierError,
    Variable,
    VariableIndexError,
    evaluate,
    gradient,
    hessian,
    laplacian,
    parse,
)


@pytest.mark.parametrize(
    "text, point, expected",
    [
        ("x1^2/2", [3.0], 4.5),
        ("2^3^2", [0.0], 512.0),
        ("-x1^2", [3.0], -9.0),
        ("(-x1)^2", [3.0], 9.0),
        ("1 - 2 - 3", [0.0], -4.0),
        ("8 / 4 / 2", [0.0], 1.0),
        ("exp(x1) * log(x2)", [0.0, math.e], 1.0),
        ("sqrt(x1^2 + x2^2)", [3.0, 4.0], 5.0),
        ("abs(x1) + pi", [-1.0], 1.0 + math.pi),
        ("2.5e-1 * x1", [4.0], 1.0),
    ],
)
def test_parse_and_evaluate(text, point, expected):
    m = len(point)
    assert evaluate(parse(text, m), point) == pytest.approx(expected)


def test_evaluate_batch_has_one_value_per_point():
    expression = parse("x1 * x2 + 1", 2)
    values = evaluate(expression, np.array([[1.0, 2.0, 3.0], [1.0, 1.0, 2.0]]))
    assert values.shape == (3,)
    assert values.tolist() == pytest.approx([2.0, 3.0, 7.0])
    constant = evaluate(Constant(2.0), np.zeros((1, 4)))
    assert constant.tolist() == [2.0] * 4


def test_scalar_point_is_one_dimensional():
    assert evaluate(parse("x1 + 1", 1), 2.0) == pytest.approx(3.0)


@pytest.mark.parametrize(
    "text, error",
    [
        ("x1 +", ExpressionSyntaxError),
        ("(x1", ExpressionSyntaxError),
        ("x1 x2", ExpressionSyntaxError),
        ("x1 # 2", ExpressionSyntaxError),
        ("foo(x1)", UnknownIdentifierError),
        ("y", UnknownIdentifierError),
        ("x3", VariableIndexError),
        ("x0", VariableIndexError),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse(text, 2)


def test_syntax_error_reports_position():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("x1 + )", 1)
    assert info.value.position == 5


def test_aliases_map_names_to_variables():
    assert parse("i^2 + 1", 1, aliases={"i": 1}) == parse("x1^2 + 1", 1)


def test_trees_are_hashable_values():
    assert parse("x1 + 1", 1) == parse("x1+1", 1)
    assert len({parse("x1", 1), Variable(1)}) == 1


@pytest.mark.parametrize(
    "text, point, reason",
    [
        ("log(x1)", [0.0], "Logarithm"),
        ("sqrt(x1)", [-1.0], "Square root"),
        ("1 / x1", [0.0], "Division"),
        ("x1^0.5", [-1.0], "Negative base"),
    ],
)
def test_domain_errors(text, point, reason):
    with pytest.raises(ExpressionDomainError) as info:
        evaluate(parse(text, 1), point)
    assert reason in info.value.message


def test_gradient_of_quadratic():
    grad = gradient(parse("x1^2 + 3 * x1 * x2", 2), 2)
    assert evaluate(grad[0], [1.0, 2.0]) == pytest.approx(8.0)
    assert evaluate(grad[1], [1.0, 2.0]) == pytest.approx(3.0)


def test_hessian_is_symmetric():
    rows = hessian(parse("x1^2 * x2 + exp(x2)", 2), 2)
    point = [1.5, 0.5]
    assert evaluate(rows[0][0], point) == pytest.approx(1.0)
    assert evaluate(rows[0][1], point) == pytest.approx(3.0)
    assert evaluate(rows[1][0], point) == pytest.approx(3.0)
    assert evaluate(rows[1][1], point) == pytest.approx(math.exp(0.5))


@pytest.mark.parametrize(
    "text, point, expected",
    [
        ("x1^2/2", [0.7], 1.0),
        ("exp(x1^2/4)", [1.0], (0.5 + 0.25) * math.exp(0.25)),
        ("log(1 + x1^2)", [1.0], 0.0),
        ("x1^2 + x2^2", [2.0, -3.0], 4.0),
    ],
)
def test_laplacian(text, point, expected):
    m = len(point)
    assert evaluate(laplacian(parse(text, m), m), point) == pytest.approx(expected)


def test_symbolic_power_rule_matches_finite_differences():
    expression = parse("x1^x1", 1)
    derivative = gradient(expression, 1)[0]
    x, h = 1.3, 1e-6
    numeric = (evaluate(expression, [x + h]) - evaluate(expression, [x - h])) / (2 * h)
    assert evaluate(derivative, [x]) == pytest.approx(numeric, rel=1e-6)


def test_derivative_of_abs_at_kink_is_non_smooth():
    derivative = gradient(parse("abs(x1)", 1), 1)[0]
    assert derivative == FunctionCall("sgn", Variable(1))
    assert evaluate(derivative, [-2.0]) == -1.0
    with pytest.raises(NonSmoothError):
        evaluate(derivative, [0.0])
