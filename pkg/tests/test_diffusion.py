import math
import pytest
import numpy as np
from lyacert.expr import evaluate, parse
from lyacert.utils import collect_discrepancies
from lyacert.diffusion import (
    DiffusionProblem,
    GridSpec,
    InvalidConstantsError,
    LyapunovConstants,
    LyapunovFitError,
    LyapunovPreconditionError,
    check_U_form,
    check_weak_form,
    derive_weak_constants,
    fit_constants,
    lyapunov_defect,
    remark_scan,
    scan_defect,
    weighted_poincare_residual,
)

GRID = GridSpec(-10.0, 10.0, 401)


@pytest.fixture
def ou():
    return DiffusionProblem.at_origin(parse("x1^2/2", 1), 1)


@pytest.fixture
def ou_weight():
    return parse("exp(x1^2/4)", 1)


def test_generator_of_ou_weight(ou, ou_weight):
    # LW = (1/2 - x^2/4) W for W = exp(x^2/4).
    for x in (0.0, 1.0, 3.0):
        expected = (0.5 - x ** 2 / 4) * math.exp(x ** 2 / 4)
        assert evaluate(ou.generator(ou_weight), [x]) == pytest.approx(expected)


def test_defect_vanishes_for_exact_constants(ou, ou_weight):
    k = LyapunovConstants(c=0.25, b=0.5)
    assert lyapunov_defect(ou, ou_weight, k, [2.0]) == pytest.approx(0.0, abs=1e-12)
    assert scan_defect(ou, ou_weight, k, GRID) == []


def test_scan_reports_every_violating_point(ou, ou_weight):
    violations = scan_defect(ou, ou_weight, LyapunovConstants(c=0.3, b=0.5), GRID)
    assert len(violations) == 400
    assert all(v.defect > 0 for v in violations)
    assert (0.0,) not in [v.point for v in violations]
    assert violations[0].to_dict()["point"] == [-10.0]


def test_weight_below_one_is_rejected(ou):
    with pytest.raises(LyapunovPreconditionError):
        lyapunov_defect(ou, parse("exp(-x1^2)", 1), LyapunovConstants(0.25, 0.5), [1.0])


@pytest.mark.parametrize("c, b", [(0.0, 1.0), (-1.0, 1.0), (1.0, -1.0)])
def test_invalid_constants(c, b):
    with pytest.raises(InvalidConstantsError):
        LyapunovConstants(c=c, b=b)


def test_base_point_dimension_is_checked():
    with pytest.raises(InvalidConstantsError):
        DiffusionProblem(parse("x1^2", 2), 2, (0.0,))


def test_fit_recovers_ou_constants(ou, ou_weight):
    k, violations = fit_constants(ou, ou_weight, GRID)
    assert k.c == pytest.approx(0.25, rel=1e-9)
    assert k.b == pytest.approx(0.5, rel=1e-9)
    assert violations == []


def test_fit_fails_without_decay():
    p = DiffusionProblem.at_origin(parse("x1^2/2", 1), 1)
    with pytest.raises(LyapunovFitError):
        fit_constants(p, parse("exp(x1^2)", 1), GridSpec(-5.0, 5.0, 101))


def test_u_form_of_ou(ou):
    U = parse("x1^2/4", 1)
    k = LyapunovConstants(c=0.25, b=0.5)
    for x in (0.0, 1.5, 10.0):
        assert check_U_form(ou, U, k, [x]) == pytest.approx(0.0, abs=1e-12)


def test_remark_scan_logs_growth(ou):
    U = parse("x1^2/4", 1)
    with collect_discrepancies() as found:
        table = remark_scan(ou, U, LyapunovConstants(c=0.3, b=0.5))
    assert table["value"].tolist() == pytest.approx([5.0, 500.0, 50000.0])
    assert table["exponent"].iloc[-1] == pytest.approx(2.0)
    assert [record["name"] for record in found] == ["u_form_growth"]


def test_weak_constants(ou, ou_weight):
    k = LyapunovConstants(c=0.25, b=0.5)
    weak = derive_weak_constants(k, ou, ou_weight, GRID)
    assert weak.c_prime == 0.25
    assert weak.R == pytest.approx(math.sqrt(3.0))
    # LW + c' W = (3/4 - x^2/4) W peaks at the origin on the ball.
    assert weak.b_prime == pytest.approx(0.75)
    assert check_weak_form(ou, ou_weight, weak, GRID) == []


@pytest.mark.parametrize(
    "text, lhs, rhs", [("1", 1.0, 2.0), ("x1", 3.0, 6.0), ("x1^2", 15.0, 22.0)]
)
def test_weighted_poincare_for_ou(ou, text, lhs, rhs):
    residual = weighted_poincare_residual(ou, parse(text, 1), LyapunovConstants(0.25, 0.5))
    assert residual.lhs == pytest.approx(lhs, rel=1e-7)
    assert residual.rhs == pytest.approx(rhs, rel=1e-7)
    assert residual.holds()


def test_grid_avoiding_kinks_misses_origin():
    nodes = GridSpec(-1.0, 1.0, 3, avoid_kinks=True).axis()
    assert not np.any(nodes == 0.0)
    assert GridSpec(-1.0, 1.0, 3).points(2).shape == (2, 9)
