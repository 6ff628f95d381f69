import math
import pytest
import numpy as np
from lyacert.errors import OracleError
from lyacert.expr import parse
from lyacert.oracle import (
    Verdict,
    audit_random,
    expectation,
    finite_diff_audit,
    gaussian_tail_integral,
    integrate_1d,
    mc_expectation,
    series_sum,
)


def test_integrate_gaussian():
    report = integrate_1d(parse("exp(-x1^2)", 1), -10.0, 10.0)
    assert report.is_finite
    assert report.value == pytest.approx(math.sqrt(math.pi), rel=1e-9)
    assert report.to_dict()["source"] == "oracle"


def test_integrate_polynomial_is_exact():
    report = integrate_1d(parse("x1^3 - x1", 1), 0.0, 2.0)
    assert report.value == pytest.approx(2.0, rel=1e-12)


def test_expectation_of_second_moment():
    report = expectation(parse("x1^2/2", 1), parse("x1^2", 1))
    assert report.value == pytest.approx(1.0, rel=1e-8)


def test_expectation_two_dimensional():
    report = expectation(parse("(x1^2 + x2^2)/2", 2), parse("x1^2 + x2^2", 2), m=2)
    assert report.evidence["route"] == "polar"
    assert report.value == pytest.approx(2.0, rel=1e-4)


def test_expectation_two_dimensional_off_center():
    V = parse("((x1 - 1)^2 + 4 * x2^2)/2", 2)
    report = expectation(V, parse("x1^2 + x2^2", 2), m=2, rtol=1e-10)
    assert report.value == pytest.approx(2.25, rel=1e-7)
    assert report.error_estimate < 1e-6


def test_expectation_needs_seed_in_high_dimension():
    with pytest.raises(OracleError):
        expectation(parse("x1^2 + x2^2 + x3^2", 3), None, m=3)


def test_gaussian_tail_below_threshold_is_finite():
    report = gaussian_tail_integral(parse("x1^2/2", 1), 0.4)
    assert report.verdict == Verdict.FINITE
    assert report.value == pytest.approx(math.sqrt(5.0), rel=1e-6)
    assert report.evidence["truncations"] == [5.0, 10.0, 20.0, 40.0]


def test_gaussian_tail_above_threshold_is_divergent():
    report = gaussian_tail_integral(parse("x1^2/2", 1), 0.6)
    assert report.is_divergent
    assert math.isnan(report.value)
    assert report.to_dict()["value"] is None


@pytest.mark.parametrize(
    "truncations", [(5.0, 10.0, 20.0, 40.0), (5.0, 10.0, 20.0, 40.0, 80.0, 160.0)]
)
def test_gaussian_tail_growing_only_far_out_is_divergent(truncations):
    # delta |x|^2 - V only starts to increase beyond |x| = 50 for V = (1 + x^2)^(1/2).
    report = gaussian_tail_integral(parse("(1 + x1^2)^(1/2)", 1), 0.01, truncations=truncations)
    assert report.is_divergent
    assert report.evidence["truncations"][-1] > 100
    assert report.evidence["boundary_rising"]


def test_gaussian_tail_verdicts_are_monotone_in_delta():
    deltas = [0.1 * k for k in range(8)]
    verdicts = [gaussian_tail_integral(parse("x1^2/2", 1), delta).verdict for delta in deltas]
    assert verdicts[:5] == [Verdict.FINITE] * 5
    first = verdicts.index(Verdict.DIVERGENT)
    assert all(verdict == Verdict.DIVERGENT for verdict in verdicts[first:])
    assert gaussian_tail_integral(parse("x1^2/2", 1), 0.0).value == pytest.approx(1.0)


def test_gaussian_tail_rejects_non_normalizable_potential():
    with pytest.raises(OracleError):
        gaussian_tail_integral(parse("log(1 + x1^2)/2", 1), 0.1)


def test_gaussian_tail_with_base_point():
    report = gaussian_tail_integral(parse("(x1 - 1)^2/2", 1), 0.25, x0=[1.0], m=1)
    assert report.value == pytest.approx(math.sqrt(2.0), rel=1e-6)


def test_gaussian_tail_dimension_mismatch():
    with pytest.raises(OracleError):
        gaussian_tail_integral(parse("x1^2", 2), 0.1, x0=[0.0], m=2)


def test_series_inverse_squares():
    report = series_sum(lambda i: -2 * np.log(i), i_max=10 ** 6, i_min=1)
    assert report.is_finite
    assert report.value == pytest.approx(math.pi ** 2 / 6, rel=1e-4)
    assert report.evidence["tail_slope"] == pytest.approx(-2.0)


def test_series_harmonic_is_divergent():
    report = series_sum(parse("-log(x1)", 1), i_max=10 ** 5, i_min=1)
    assert report.is_divergent
    assert report.evidence["tail_slope"] == pytest.approx(-1.0)


def test_series_sum_beyond_double_range():
    report = series_sum(lambda i: 800.0 - 2 * np.log(i), i_max=10 ** 4, i_min=1)
    assert report.is_finite
    assert report.value == math.inf
    expected = 800.0 + math.log(math.pi ** 2 / 6)
    assert report.evidence["log_value"] == pytest.approx(expected, abs=1e-3)
    assert report.to_dict()["value"] is None


def test_series_sums_in_log_space():
    report = series_sum(lambda i: 600.0 - i, i_max=10 ** 4)
    expected = 600.0 - math.log1p(-math.exp(-1.0))
    assert report.evidence["log_partial_sum"] == pytest.approx(expected)


def test_series_empty_range():
    with pytest.raises(OracleError):
        series_sum(lambda i: -2 * np.log(i), i_max=1, i_min=5)


def test_metropolis_is_reproducible():
    V = parse("(x1^2 + x2^2 + x3^2)/2", 3)

    def f(points):
        return np.sum(points ** 2, axis=0)

    first = mc_expectation(V, f, m=3, seed=7, steps=4000)
    second = mc_expectation(V, f, m=3, seed=7, steps=4000)
    assert first.value == second.value
    assert first.value == pytest.approx(3.0, rel=0.1)
    assert first.evidence["seed"] == 7


@pytest.mark.parametrize("text", ["x1^2 * x2", "exp(x1) * x2", "sqrt(1 + x1^2) * x2^3"])
def test_finite_diff_audit_passes(text):
    result = finite_diff_audit(parse(text, 2), [0.3, -0.7], h=1e-3)
    assert result.passed
    assert result.max_relative_error < 1e-6


def test_audit_random_table():
    table = audit_random(count=20, seed=0, m=2, depth=3)
    assert list(table.columns) == [
        "expression",
        "point",
        "relative_error",
        "order",
        "round_trip",
        "passed",
    ]
    assert len(table) == 20
    assert table["round_trip"].all()
