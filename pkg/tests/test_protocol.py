import dataclasses
import math

import numpy as np
import pytest

from qguess.errors import InvalidConfig
from qguess.game import BipartiteState, Ensemble, Verdict, build_instance, solve_optimal_instance
from qguess.linalg import KET0, KET1, projector
from qguess.protocol import (
    SHARD_SIZE,
    SimConfig,
    SimResult,
    certificate,
    estimate_payoff,
    hoeffding_gap,
    simulate_game,
    tally,
)

ZERO, ONE = projector(KET0), projector(KET1)


@pytest.fixture(scope="module")
def b08():
    return solve_optimal_instance(0.8)


@pytest.fixture(scope="module")
def orthogonal():
    return build_instance(
        KET0, KET1, 0.0,
        Ensemble((0.5, 0.5), (ZERO, ONE)),
        Ensemble((0.5, 0.5), (ONE, ZERO)),
        (ZERO, ONE),
    )


def product_version(inst):
    """Same measurements, but the shared state replaced by |0><0| ⊗ ρ_B."""
    return dataclasses.replace(inst, state=BipartiteState.from_density(np.kron(ZERO, inst.rho_b)))


def test_config_validation():
    with pytest.raises(InvalidConfig):
        SimConfig(shots=0)
    with pytest.raises(InvalidConfig):
        SimConfig(shots=10, seed=-1)
    with pytest.raises(InvalidConfig):
        SimConfig(shots=10, alpha=1.0)
    with pytest.raises(InvalidConfig):
        SimConfig(shots=2.5)


def test_single_shot_estimate_is_binary(b08):
    for seed in range(50):
        res = simulate_game(b08, SimConfig(shots=1, seed=seed))
        assert res.payoff_estimate in (0.0, 1.0)
        assert res.shots_used == 1
        assert res.verdict is Verdict.INCONCLUSIVE


def test_orthogonal_instance_is_deterministic(orthogonal):
    for seed in range(20):
        res = simulate_game(orthogonal, SimConfig(shots=2000, seed=seed))
        assert res.payoff_estimate == 1.0


def test_b08_estimate_within_three_sigma(b08):
    res = simulate_game(b08, SimConfig(shots=100_000, seed=42))
    assert abs(res.payoff_estimate - 0.9) <= 3 * res.std_error
    assert res.counts.sum() == res.shots_used == 100_000
    assert 0 <= res.payoff_estimate <= 1
    # both designated groups succeed with probability 0.9, so the stratified
    # error reduces to the binomial form with n_eff
    p_hat = res.payoff_estimate
    assert res.std_error == pytest.approx(math.sqrt(p_hat * (1 - p_hat) / res.n_eff), rel=0.05)


def test_tally_counts_follow_assemblage(b08):
    counts = tally(b08, SimConfig(shots=200_000, seed=1))
    # setting choice is a fair coin; outcome 0 occurs with probability q
    per_setting = counts.sum(axis=(1, 2))
    assert abs(per_setting[0] / 200_000 - 0.5) < 0.005
    q = b08.q1
    for a in range(2):
        assert abs(counts[a, 0].sum() / per_setting[a] - q) < 0.01
    # the residual states are never confused: tr(E₁σ_ψ) = tr(E₂σ_φ) = 0
    assert counts[0, 1, 0] == 0 and counts[1, 1, 1] == 0


def test_determinism_across_workers(b08):
    cfg = SimConfig(shots=5 * SHARD_SIZE + 123, seed=2024)
    r1 = simulate_game(b08, cfg, workers=1)
    r4 = simulate_game(b08, cfg, workers=4)
    assert np.array_equal(r1.counts, r4.counts)
    assert r1 == dataclasses.replace(r4, counts=r1.counts)
    assert np.array_equal(simulate_game(b08, cfg).counts, r1.counts)


def test_different_seeds_differ(b08):
    a = tally(b08, SimConfig(shots=10_000, seed=1))
    b = tally(b08, SimConfig(shots=10_000, seed=2))
    assert not np.array_equal(a, b)


def test_hoeffding_examples():
    assert hoeffding_gap(1e5, 1e-6) == pytest.approx(math.sqrt(math.log(1e6) / 2e5))
    assert hoeffding_gap(1e5, 1e-6) == pytest.approx(0.0083, abs=1e-4)
    assert hoeffding_gap(10, 1e-6) == pytest.approx(0.831, abs=1e-3)
    assert hoeffding_gap(0, 0.1) == math.inf


def _fake_result(estimate, bound, n_eff):
    return SimResult(
        shots_used=int(n_eff), counts=np.zeros((2, 2, 2), dtype=int), payoff_estimate=estimate,
        std_error=0.0, n_eff=n_eff, bound=bound, verdict=Verdict.INCONCLUSIVE, p_value_bound=1.0,
    )


def test_certificate_examples():
    c = certificate(_fake_result(0.9, 0.82, 1e5), 1e-6)
    assert c.verdict is Verdict.NONLOCAL
    assert c.p_value_bound == pytest.approx(math.exp(-2e5 * 0.08**2))
    assert certificate(_fake_result(0.82, 0.82, 1e5), 0.5).verdict is Verdict.INCONCLUSIVE
    assert certificate(_fake_result(0.82, 0.82, 1e5), 0.5).p_value_bound == 1.0
    assert certificate(_fake_result(0.9, 0.82, 10), 1e-6).verdict is Verdict.INCONCLUSIVE


def test_estimate_handles_missing_groups():
    counts = np.zeros((2, 2, 2), dtype=int)
    assert estimate_payoff(counts, (0.5, 0.5)) == (0.0, 0.0, 0.0)
    counts[0, 0, 0] = 3
    counts[0, 0, 1] = 1
    est, se, n_eff = estimate_payoff(counts, (0.5, 0.5))
    assert est == 0.75 and n_eff == 0.0


def test_estimate_weights_groups_by_priors():
    counts = np.zeros((2, 2, 2), dtype=int)
    counts[0, 0] = [90, 10]   # 0.9 success on the first state
    counts[1, 0] = [50, 150]  # 0.75 success on the second
    est, se, n_eff = estimate_payoff(counts, (0.25, 0.75))
    assert est == pytest.approx(0.25 * 0.9 + 0.75 * 0.75)
    assert n_eff == pytest.approx(1 / (0.25**2 / 100 + 0.75**2 / 200))
    assert se == pytest.approx(math.sqrt(0.25**2 * 0.09 / 100 + 0.75**2 * 0.1875 / 200))


def test_consistency_at_large_shots(b08):
    analytic = b08.achieved_payoff()
    inside = 0
    for seed in range(100):
        res = simulate_game(b08, SimConfig(shots=1_000_000, seed=seed))
        inside += abs(res.payoff_estimate - analytic) <= 4 * res.std_error
    assert inside >= 99


def test_soundness_product_state(b08):
    prod = product_version(b08)
    for seed in range(1000):
        res = simulate_game(prod, SimConfig(shots=10_000, seed=seed, alpha=1e-3))
        assert res.verdict is Verdict.INCONCLUSIVE
        assert certificate(res, 1e-3).verdict is Verdict.INCONCLUSIVE
