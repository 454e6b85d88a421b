import math

import pytest

from qgk.complexity import (
    DEFAULT_BENCHMARKS,
    benchmark_csv,
    benchmark_table,
    breakeven_n,
    compression_bound,
    efficiency_bound,
    efficiency_csv,
    efficiency_table,
    qgk_cost,
)

EB_GAMMA_1 = {2: 1.76, 3: 3.49, 4: 3.75, 5: 7.30, 6: 11.75, 7: 23.26, 8: 43.75}
EB_GAMMA_ETA = {2: 0.66, 3: 0.53, 4: 0.38, 5: 0.38, 6: 0.38, 7: 0.46, 8: 0.59}
PAPER_ROWS = {
    "moons": (1.50e5, 6.56e4),
    "circles": (1.50e5, 6.56e4),
    "bank": (1.92e5, 5.25e5),
    "mnist": (1.32e8, 6.43e8),
    "cifar10": (3.45e8, 2.52e9),
}


def test_cost_components():
    model = qgk_cost(eta=2, n=200, d=2, g=15)
    assert model.generator == 16
    assert model.projection == 200 * 2 * 15
    assert model.embedding == 200 * 64
    assert model.gram == 200 * 200 * 4
    assert model.classical == 200 * 200 * 2
    assert model.gamma == pytest.approx(2 / 15)
    assert model.total == 16 + 6000 + 12800 + 160000


def test_cost_zero_samples():
    model = qgk_cost(eta=3, n=0, d=5, g=21)
    assert model.projection == 0 and model.embedding == 0 and model.gram == 0
    assert model.total == model.generator


def test_benchmark_rows_match_reference_within_one_percent():
    for row in benchmark_table():
        expected_qgk, expected_classical = PAPER_ROWS[row.name]
        assert abs(row.qgk_total - expected_qgk) / expected_qgk < 0.01
        assert abs(row.classical_total - expected_classical) / expected_classical < 0.01


def test_breakeven_moons_configuration():
    result = breakeven_n(eta=2, gamma=1.0, g=15)
    assert result.feasible
    assert result.a == -11 and result.b == 289 and result.c == 16
    assert math.sqrt(result.b**2 - 4 * result.a * result.c) == pytest.approx(290.215, abs=1e-3)
    assert result.n_star == pytest.approx(26.33, abs=0.01)


def test_breakeven_small_qubit_feasible():
    result = breakeven_n(eta=1, gamma=1.0, g=3)
    assert result.a == -1
    assert result.feasible
    assert math.isfinite(result.n_star)


def test_breakeven_never_case():
    result = breakeven_n(eta=4, gamma=0.1, g=51)  # gamma*g = 5.1 < 16
    assert not result.feasible
    assert math.isinf(result.n_star)


@pytest.mark.parametrize("eta,expected", sorted(EB_GAMMA_1.items()))
def test_efficiency_bound_gamma_one(eta, expected):
    assert efficiency_bound(eta, 1.0).exact == pytest.approx(expected, abs=0.01)


@pytest.mark.parametrize("eta,expected", sorted(EB_GAMMA_ETA.items()))
def test_efficiency_bound_gamma_eta(eta, expected):
    assert efficiency_bound(eta, float(eta)).exact == pytest.approx(expected, abs=0.01)


def test_efficiency_bound_approximation_gamma_one():
    # closed form 3/2 + 2^eta/6 tracks the exact root loosely at small eta
    bound = efficiency_bound(5, 1.0)
    assert bound.approx == pytest.approx(1.5 + 32 / 6, abs=1e-12)
    assert bound.approx != pytest.approx(bound.exact, abs=1e-3)


def test_compression_bound_values():
    assert compression_bound(5) == pytest.approx(4.0)
    assert compression_bound(2) == pytest.approx(2 * math.sqrt(8) / 3, abs=1e-12)
    values = [compression_bound(eta) for eta in range(1, 9)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_compression_bound_gives_subunit_efficiency():
    for eta in range(2, 9):
        gamma = compression_bound(eta)
        assert efficiency_bound(eta, gamma).exact < 1.0


def test_cost_model_consistent_with_breakeven_root():
    for eta in range(2, 9):
        from qgk.grouping import GroupScaling, group_count

        g = group_count(eta, GroupScaling.EXPONENTIAL)
        d = g  # gamma = 1
        threshold = breakeven_n(eta, 1.0, g)
        assert threshold.feasible
        below = math.floor(threshold.n_star)
        above = math.ceil(threshold.n_star) + 1
        assert qgk_cost(eta, below, d, g).total >= below**2 * d
        assert qgk_cost(eta, above, d, g).total < above**2 * d


def test_csv_emitters():
    rows = efficiency_table(etas=[2, 3])
    text = efficiency_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "eta,gamma,g,n_star,eb_exact,eb_approx"
    assert len(lines) == 5
    bench = benchmark_csv(benchmark_table())
    assert bench.startswith("name,eta,d,n,g,qgk_total,classical_total")
    assert len(bench.strip().splitlines()) == len(DEFAULT_BENCHMARKS) + 1


def test_infeasible_renders_never():
    from qgk.complexity import EfficiencyBound

    row = EfficiencyBound(eta=2, gamma=0.01, g=15, d=0.15,
                          n_star=math.inf, exact=math.inf, approx=1.0)
    assert "never" in efficiency_csv([row])
