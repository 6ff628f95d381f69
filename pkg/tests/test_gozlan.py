import math
import pytest
import numpy as np
from lyacert.errors import DeltaRejectedError
from lyacert.expr import parse
from lyacert.gozlan import (
    A_GOZLAN,
    ConditionVerdict,
    GozlanConditionError,
    GozlanConstraintError,
    GozlanParameters,
    check_condition,
    closed_form_delta,
    condition_value,
    cutoff_derivative_bound,
    cutoff_phi,
    d_omega,
    default_parameters,
    directions,
    eps1_cap,
    gozlan_certificate,
    lambda_constants,
    lemma_residual,
    omega,
    omega_props,
    optimize_parameters,
)


def example_parameters(**changes):
    values = dict(m=1, eps=0.1, eps1=0.1, eps2=0.01, eps3=4 / 27 - 0.13, R=1.0)
    values.update(changes)
    return GozlanParameters(**values)


def test_omega_properties():
    props = omega_props()
    assert props.omega_prime_at_0 == pytest.approx(1.0)
    assert props.sup_ratio == pytest.approx(1.0)
    assert omega(0.0) == 0.0
    assert omega(-2.0) == pytest.approx(-omega(2.0))


def test_omega_distance():
    assert d_omega([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert d_omega(1.0, 0.0) == pytest.approx(omega(1.0))


def test_cutoff():
    assert cutoff_phi(0.5, 1.0, 2.0) == (1.0, 0.0)
    assert cutoff_phi(4.0, 1.0, 2.0) == (0.0, 0.0)
    value, derivative = cutoff_phi(2.0, 1.0, 2.0)
    assert value == pytest.approx(0.5)
    assert derivative == pytest.approx(-cutoff_derivative_bound(2.0))


def test_directions_are_unit_vectors():
    units = directions(3, count=16)
    assert units.shape == (3, 22)
    assert np.linalg.norm(units, axis=0) == pytest.approx(np.ones(22))
    assert directions(1).tolist() == [[1.0, -1.0]]


def test_condition_value():
    # (4 a x^2 - 2) / (1 + x^2) for V = x^2.
    assert condition_value(parse("x1^2", 1), [1.0]) == pytest.approx((4 * A_GOZLAN - 2) / 2)


def test_condition_passes_for_gaussian():
    check = check_condition(parse("x1^2", 1), 1)
    assert check.verdict == ConditionVerdict.PASS
    assert check.R == 2.0
    assert check.liminf == pytest.approx(4 * A_GOZLAN, rel=1e-3)
    assert check.to_dict()["verdict"] == "pass"


def test_condition_fails_for_flat_potential():
    check = check_condition(parse("x1^2/4", 1), 1)
    assert check.verdict == ConditionVerdict.FAIL
    assert check.R is None
    assert not check.passed


def test_condition_in_two_dimensions():
    assert check_condition(parse("x1^4 + x2^4", 2), 2, count=64).R == 2.0
    # Along an axis the other coordinate contributes -2: the liminf is 4 a - 2 < 2.
    gaussian = check_condition(parse("x1^2 + x2^2", 2), 2, count=64)
    assert gaussian.verdict == ConditionVerdict.FAIL
    assert gaussian.liminf == pytest.approx(4 * A_GOZLAN - 2, rel=1e-3)


def test_lambda_constants():
    constants = lambda_constants(example_parameters())
    assert constants.lambda1 == pytest.approx(12.5)
    assert constants.lambda2 == pytest.approx(376.125)
    assert constants.lambda1p == pytest.approx(12.5)
    assert constants.lambda2p == pytest.approx(376.125 * 4)
    assert constants.delta_bound == pytest.approx(1 / math.sqrt(12.5))
    assert set(constants.to_dict()) == {"lambda1", "lambda2", "lambda1p", "lambda2p", "deltaBound"}


@pytest.mark.parametrize(
    "changes, constraint",
    [
        ({"eps1": 0.2}, "eps1_cap"),
        ({"eps": 0.0}, "positivity"),
        ({"eps3": 0.05}, "budget"),
        (
            {"m": 2, "eps": 1e-3, "eps1": 0.074, "eps2": 1e-3, "eps3": 4 / 27 - 0.077},
            "feasibility",
        ),
    ],
)
def test_parameter_constraints(changes, constraint):
    with pytest.raises(GozlanConstraintError) as info:
        lambda_constants(example_parameters(**changes))
    assert info.value.constraint == constraint


def test_eps1_cap():
    assert eps1_cap(1) == pytest.approx(4 / 27)
    assert eps1_cap(2) == pytest.approx(2 / 27)


@pytest.mark.parametrize("m, expected", [(1, 0.38490), (2, 0.11274)])
def test_optimizer_matches_closed_form(m, expected):
    optimized = optimize_parameters(m)
    assert closed_form_delta(m) == pytest.approx(expected, abs=1e-5)
    assert optimized.delta == pytest.approx(expected, abs=1e-4)
    assert optimized.eps1 + optimized.eps3 == pytest.approx(1 - A_GOZLAN)
    assert "trace" not in optimized.to_dict()


def test_default_parameters_are_feasible():
    params = default_parameters(2, R=5.0)
    constants = lambda_constants(params)
    assert params.eps1 + 3 * params.eps2 + params.eps3 == pytest.approx(1 - A_GOZLAN)
    assert constants.delta_bound < closed_form_delta(2)


def test_gozlan_certificate():
    certified = gozlan_certificate(parse("x1^2", 1), 1, 0.3)
    assert certified.params.R == 2.0
    assert 0.3 < certified.constants.delta_bound < closed_form_delta(1)
    assert certified.certificate.kind == "gozlan"
    assert math.isfinite(certified.certificate.log_exp_bound)
    data = certified.to_dict()
    assert data["condition"]["verdict"] == "pass"
    assert data["gozlan_constants"]["deltaBound"] == certified.constants.delta_bound


def test_gozlan_certificate_rejections():
    with pytest.raises(DeltaRejectedError):
        gozlan_certificate(parse("x1^2", 1), 1, 0.39)
    with pytest.raises(GozlanConditionError):
        gozlan_certificate(parse("x1^2/4", 1), 1, 0.1)


@pytest.mark.parametrize("text", ["1", "x1", "x1^2"])
def test_lemma_residual(text):
    constants = lambda_constants(example_parameters(R=2.0))
    residual = lemma_residual(parse("x1^2", 1), constants, 2.0, parse(text, 1))
    assert residual.holds()
