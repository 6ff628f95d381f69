import math
import pytest
import numpy as np
from lyacert.errors import DeltaRejectedError
from lyacert.expr import evaluate, parse
from lyacert.diffusion import GridSpec, InvalidConstantsError, LyapunovConstants
from lyacert.unbounded import (
    MatrixNotPositiveDefiniteError,
    UnboundedProblem,
    bump,
    drift_from_A_V,
    fit_unbounded_constants,
    generator_a_apply,
    invariance_check,
    lambda_max,
    lambda_max_envelope,
    unbounded_defect,
    verify_unbounded_lyapunov,
    weighted_certificate,
)

GRID = GridSpec(-10.0, 10.0, 401)


@pytest.fixture
def problem():
    return UnboundedProblem.from_upper([[parse("1 + x1^2", 1)]], parse("x1^2", 1), 1)


@pytest.fixture
def weight():
    return parse("exp(x1^2/4)", 1)


def test_drift_keeps_measure_invariant(problem):
    # b = (a' - a V') / 2 = -x^3 for a = 1 + x^2 and V = x^2.
    drift = drift_from_A_V(problem, 1)
    assert evaluate(drift, [2.0]) == pytest.approx(-8.0)


def test_generator(problem, weight):
    x = 1.5
    expected = (0.25 + 3 * x ** 2 / 8 - 3 * x ** 4 / 8) * math.exp(x ** 2 / 4)
    assert generator_a_apply(problem, weight, [x]) == pytest.approx(expected)


def test_defect_for_given_constants(problem, weight):
    k = LyapunovConstants(c=0.375, b=0.75)
    defect, points, w = unbounded_defect(problem, weight, k, GRID)
    assert defect == pytest.approx(-w / 2)
    verification = verify_unbounded_lyapunov(problem, weight, k, GRID)
    assert verification.passed
    assert verification.violations == []
    assert verification.max_defect == pytest.approx(-0.5)


def test_violations_for_too_large_rate(problem, weight):
    verification = verify_unbounded_lyapunov(
        problem, weight, LyapunovConstants(c=0.5, b=0.75), GridSpec(-5.0, 5.0, 101)
    )
    assert not verification.passed
    assert verification.violations


def test_fit_unbounded_constants(problem, weight):
    k, verification = fit_unbounded_constants(problem, weight, GRID)
    assert k.c == pytest.approx(0.375, rel=1e-3)
    assert k.c <= 0.375
    assert verification.passed


def test_lambda_max_in_two_dimensions():
    upper = [[parse("2", 2), parse("1", 2)], [parse("2 + x1^2", 2)]]
    p = UnboundedProblem.from_upper(upper, parse("x1^2 + x2^2", 2), 2)
    assert lambda_max(p, [0.0, 0.0]) == pytest.approx(3.0)
    assert evaluate(p.matrix[1][0], [0.0, 0.0]) == pytest.approx(1.0)


def test_lambda_max_envelope(problem):
    envelope = lambda_max_envelope(problem, GridSpec(-2.0, 2.0, 5))
    assert envelope.pointwise.tolist() == pytest.approx([5.0, 2.0, 1.0, 2.0, 5.0])
    assert envelope.conservative.tolist() == pytest.approx([5.0, 5.0, 2.0, 5.0, 5.0])


def test_matrix_must_be_positive_definite():
    p = UnboundedProblem.from_upper([[parse("x1", 1)]], parse("x1^2", 1), 1)
    with pytest.raises(MatrixNotPositiveDefiniteError) as info:
        p.check_positive_definite(np.array([[1.0, -1.0]]))
    assert info.value.point == [-1.0]


def test_matrix_shape_is_checked():
    with pytest.raises(InvalidConstantsError):
        UnboundedProblem.from_upper([[parse("1", 2)]], parse("x1^2 + x2^2", 2), 2)


def test_invariance_check(problem):
    table = invariance_check(problem)
    assert list(table.columns) == ["center", "width", "value", "error"]
    assert np.all(np.abs(table["value"]) < 1e-6)


def test_bump_is_compact(problem):
    f = bump(problem, 1.0, 0.5)
    assert evaluate(f, [1.0]) == pytest.approx(math.exp(-1.0))
    assert evaluate(f, [1.0 + 0.5 * (1 - 1e-9)]) == 0.0
    assert evaluate(f, [0.75]) == pytest.approx(math.exp(-4 / 3))


def test_weighted_certificate(problem):
    certified = weighted_certificate(problem, LyapunovConstants(c=0.375, b=0.75), 0.5)
    # mu(lambda_max) = E(1 + x^2) = 3/2 under N(0, 1/2).
    assert certified.mass.value == pytest.approx(1.5, rel=1e-8)
    assert certified.tail.value == pytest.approx(2 * math.sqrt(2.0), rel=1e-6)
    assert certified.bound >= certified.tail.value
    data = certified.to_dict()
    assert data["weighted_bound"] == pytest.approx(certified.bound)
    assert data["mu_lambda_max"]["source"] == "oracle"


def test_weighted_certificate_rejects_large_delta(problem):
    with pytest.raises(DeltaRejectedError):
        weighted_certificate(problem, LyapunovConstants(c=0.375, b=0.75), 0.62)
