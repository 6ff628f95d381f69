import math
import pytest
import numpy as np
from lyacert.expr import parse
from lyacert.utils import collect_discrepancies
from lyacert.problems import Problem
from lyacert.jump import (
    AdmissibilityError,
    BirthDeathChain,
    Boundedness,
    ChainDefinitionError,
    DivergentMeasureError,
    best_cutoff,
    carre_du_champ_rho,
    convergence_threshold,
    delta_search,
    dirichlet_form,
    eta2,
    fit_jump_lyapunov,
    gaussian_series,
    generator_nu_apply,
    generator_pairing,
    generator_ratio,
    intrinsic_rho,
    jump_metric_K,
    parse_rule,
    series_table,
    stationary_measure,
)


@pytest.fixture
def geometric():
    # b_i = 1, d_i = 2: r_i = 2^-i.
    return BirthDeathChain.from_strings("1", "2")


@pytest.fixture
def square_rates():
    return BirthDeathChain.from_strings("(i + 1)^2", "i^2")


@pytest.fixture
def power_chain():
    return BirthDeathChain.from_strings("(i + 1)^(1/2)", "i * (i + 1)^(1/2)")


@pytest.fixture
def square_geometric():
    # b_{i-1} / d_i = 1/2 with rho(i, 0) = H_i.
    return BirthDeathChain.from_strings("(i + 1)^2", "2 * i^2")


def test_rules_use_the_index_alias():
    assert parse_rule("i^2 + 1") == parse("x1^2 + 1", 1)


def test_rates(geometric):
    assert geometric.death_rates(np.arange(3)).tolist() == [0.0, 2.0, 2.0]
    assert geometric.birth_rates(np.arange(3)).tolist() == [1.0, 1.0, 1.0]


def test_birth_overrides():
    chain = BirthDeathChain.from_strings("i^2", "i^2", {"0": 1})
    assert chain.birth_rates(np.arange(3)).tolist() == [1.0, 1.0, 4.0]


def test_non_positive_rates_are_rejected():
    with pytest.raises(ChainDefinitionError):
        BirthDeathChain.from_strings("i", "i").birth_rates(np.arange(3))
    with pytest.raises(ChainDefinitionError):
        BirthDeathChain.from_strings("1", "i - 1").death_rates(np.arange(3))


def test_tabulated_rates_are_bounded():
    chain = BirthDeathChain(np.array([1.0, 2.0, 3.0]), np.array([0.0, 1.0, 1.0]))
    assert chain.birth_rates(np.arange(3)).tolist() == [1.0, 2.0, 3.0]
    with pytest.raises(ChainDefinitionError):
        chain.birth_rates(np.arange(5))


def test_log_r_and_stationary_measure(geometric):
    assert geometric.log_r(3)[3] == pytest.approx(-3 * math.log(2))
    measure = stationary_measure(geometric, 200)
    assert measure.log_normalizer == pytest.approx(math.log(2))
    assert measure.mu[0] == pytest.approx(0.5)


def test_symmetric_walk_has_no_stationary_measure():
    with pytest.raises(DivergentMeasureError):
        stationary_measure(BirthDeathChain.from_strings("1", "1"), 1000)


def test_generator(geometric):
    W = parse_rule("2^i")
    assert generator_nu_apply(geometric, W, 0) == pytest.approx(1.0)
    # b (W(i+1) - W(i)) + d (W(i-1) - W(i)) = 2^i - 2^i.
    assert generator_nu_apply(geometric, W, 5) == pytest.approx(0.0)


def test_log_weight_ratio_matches_plain_ratio(geometric):
    idx = np.arange(20)
    plain = generator_ratio(geometric, parse_rule("2^i"), idx)
    logged = generator_ratio(geometric, parse_rule("i * log(2)"), idx, log_weight=True)
    assert logged == pytest.approx(plain, abs=1e-12)
    assert logged[0] == pytest.approx(1.0)


def test_dirichlet_form_matches_generator_pairing(geometric):
    i = parse_rule("i")
    assert dirichlet_form(geometric, i, i, 200) == pytest.approx(1.0)
    assert generator_pairing(geometric, i, i, 200) == pytest.approx(1.0)


def test_intrinsic_metric(square_rates):
    # rho(i, 0) is the harmonic number H_i for b_i = (i + 1)^2.
    assert intrinsic_rho(square_rates, 3) == pytest.approx(1 + 1 / 2 + 1 / 3)
    assert intrinsic_rho(square_rates, 1, 3) == pytest.approx(1 / 2 + 1 / 3)


def test_jump_metric_bounded(square_rates):
    metric = jump_metric_K(square_rates, i_max=1000)
    assert metric.verdict == Boundedness.BOUNDED
    assert metric.K == pytest.approx(1.25)
    assert metric.argmax == 1
    assert metric.to_dict()["verdict"] == "bounded"


def test_jump_metric_unbounded(geometric):
    metric = jump_metric_K(geometric, i_max=1000)
    assert metric.verdict == Boundedness.UNBOUNDED
    assert metric.tail_slope == pytest.approx(1.0, abs=0.05)


def test_carre_du_champ_within_one(square_rates):
    with collect_discrepancies() as found:
        profile, sup = carre_du_champ_rho(square_rates, 100)
    assert sup == pytest.approx(1.0)
    assert profile[0] == pytest.approx(0.5)
    assert found == []


def test_carre_du_champ_above_one_is_a_discrepancy():
    chain = BirthDeathChain.from_strings("(i + 1)^2", "(i + 1)^2")
    with collect_discrepancies() as found:
        _, sup = carre_du_champ_rho(chain, 100)
    assert sup == pytest.approx(2.5)
    assert [record["name"] for record in found] == ["carre_du_champ"]


def test_fit_jump_lyapunov(power_chain):
    fit = fit_jump_lyapunov(power_chain, parse_rule("i * log(2)"), (10, 10000), log_weight=True)
    assert fit.passed
    assert 0.2 < fit.c < 0.35
    assert fit.b >= 0
    assert list(fit.profile.columns) == ["i", "rho", "ratio", "q"]


def test_fit_jump_lyapunov_without_decay():
    chain = BirthDeathChain.from_strings("1", "1")
    fit = fit_jump_lyapunov(chain, parse_rule("1 + i"), (10, 1000))
    assert not fit.passed
    assert fit.c == 0.0


def test_delta_search_without_jumps():
    admissibility = delta_search(1.0, 0.0)
    expected = 1 / math.sqrt(0.5 + 36 * math.e ** 2)
    assert admissibility.delta_star == pytest.approx(expected, rel=1e-9)
    assert admissibility.delta_star == pytest.approx(0.06125, abs=1e-5)
    assert admissibility.total == pytest.approx(1.0, rel=1e-6)


def test_delta_search_shrinks_with_jump_size():
    assert delta_search(1.0, 1.0).delta_star < delta_search(1.0, 0.0).delta_star
    with pytest.raises(AdmissibilityError):
        delta_search(0.0, 1.0)
    with pytest.raises(AdmissibilityError):
        delta_search(1.0, math.inf)


def test_best_cutoff():
    assert best_cutoff(0.1, 1.0, 0.0) == pytest.approx(10.0, rel=1e-6)


@pytest.mark.parametrize("delta, c, K", [(0.1, 1.0, 0.0), (0.02, 0.05, 3.8), (0.3, 2.0, 10.0)])
def test_best_cutoff_minimizes_eta2(delta, c, K):
    n_star = best_cutoff(delta, c, K)
    assert n_star == pytest.approx(1 / delta)
    for factor in (0.9, 0.99, 1.01, 1.1):
        assert eta2(delta, n_star, c, K) <= eta2(delta, factor * n_star, c, K)


def test_gaussian_series(square_geometric):
    report = gaussian_series(square_geometric, 0.1, i_max=1000)
    assert report.is_finite
    assert report.value > 1.0
    assert report.evidence["delta"] == 0.1


def test_gaussian_series_divergence(geometric):
    assert gaussian_series(geometric, 0.1, i_max=1000).is_divergent


def test_series_table(square_geometric):
    table = series_table(square_geometric, 0.1, 1000, indices=[0, 1, 2])
    assert list(table.columns) == ["i", "mu", "rho", "term", "partial_sum"]
    assert table["partial_sum"].is_monotonic_increasing


def test_convergence_threshold_discrepancy(geometric):
    with collect_discrepancies() as found:
        table = convergence_threshold(geometric, deltas=(0.05, 0.1), i_max=1000, claimed=1.0)
    assert table.attrs["threshold"] == pytest.approx(0.05)
    assert table["verdict"].tolist() == ["divergent", "divergent"]
    assert [record["name"] for record in found] == ["rho_threshold"]


def test_delta_search_is_monotone_in_constants():
    cs = np.geomspace(0.01, 10.0, 10)
    ks = np.linspace(0.0, 10.0, 10)
    grid = np.array([[delta_search(c, K).delta_star for K in ks] for c in cs])
    assert np.all(grid > 0)
    assert np.all(np.diff(grid, axis=1) <= 1e-12 * grid[:, :-1])
    assert np.all(np.diff(grid, axis=0) >= -1e-12 * grid[:-1, :])


def square_log_chain(problems_dir, alpha: str):
    path = problems_dir / "jump_chain.jsonnet"
    return Problem.from_file(path, ext_vars={"a": "2", "alpha": alpha})


@pytest.mark.slow
def test_square_log_chain_metric_and_series(problems_dir):
    problem = square_log_chain(problems_dir, "1")
    metric = jump_metric_K(problem.chain, i_max=10 ** 6)
    assert metric.verdict == Boundedness.BOUNDED
    assert metric.K == pytest.approx(3.84494, rel=1e-4)
    below = gaussian_series(problem.chain, 0.2, i_max=10 ** 6)
    assert below.is_finite
    assert below.value == pytest.approx(2.35329, rel=2e-3)
    assert gaussian_series(problem.chain, 0.3, i_max=10 ** 6).is_divergent
    table = convergence_threshold(problem.chain, deltas=(0.2, 0.25, 0.3), i_max=10 ** 6)
    assert 0.2 < table.attrs["threshold"] <= 0.3


@pytest.mark.slow
@pytest.mark.parametrize("delta", [0.05, 0.1, 0.15, 0.2])
def test_square_log_chain_series_matches_direct_sum(problems_dir, delta):
    problem = square_log_chain(problems_dir, "1")
    i_max = 10 ** 6
    i = np.arange(1, i_max + 1, dtype=float)
    births = np.concatenate([[1.0], i[:-1] ** 2 * np.log(i[:-1] + 1)])
    r = np.concatenate([[1.0], 1 / (i ** 2 * np.log(i + 1))])
    rho = np.concatenate([[0.0], np.cumsum(births ** -0.5)])
    direct = math.fsum(r * np.exp(delta * rho ** 2)) / math.fsum(r)
    report = gaussian_series(problem.chain, delta, i_max=i_max)
    assert not report.is_divergent
    assert math.exp(report.evidence["log_partial_sum"]) == pytest.approx(direct, rel=1e-9)
    assert report.value >= direct * (1 - 1e-12)


@pytest.mark.slow
def test_square_log_chain_lyapunov_fit(problems_dir):
    problem = square_log_chain(problems_dir, "1")
    fit = fit_jump_lyapunov(problem.chain, problem.W, i_range=problem.i_range)
    assert fit.passed
    assert fit.c == pytest.approx(0.05157, rel=2e-2)
    weak = square_log_chain(problems_dir, "0.5")
    assert not fit_jump_lyapunov(weak.chain, weak.W, i_range=weak.i_range).passed


@pytest.mark.slow
def test_power_chain_metric_is_unbounded(problems_dir):
    problem = Problem.from_file(problems_dir / "jump_power.json")
    metric = jump_metric_K(problem.chain, i_max=problem.horizon)
    assert metric.verdict == Boundedness.UNBOUNDED
    assert metric.tail_slope == pytest.approx(0.5, abs=0.05)
