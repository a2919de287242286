"""Finite-shot simulation of the three-measurement certification protocol.

Each shot: Alice picks one of her two settings uniformly, obtains an outcome
from her steered assemblage, and Bob measures the conditional state with his
single fixed POVM. Only the designated outcomes (outcome 0 of either setting,
which prepare the two states being discriminated) are scored.

Random numbers come from numpy's PCG64 generator. Shots are split into fixed
size shards; shard ``i`` draws from ``SeedSequence(seed, spawn_key=(i,))``, so
tallies do not depend on how shards are distributed over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig
from .game import GameInstance, Verdict, steered_assemblage
from .linalg import expectation

SHARD_SIZE = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    shots: int
    seed: int = 0
    alpha: float = 1e-6

    def __post_init__(self):
        if not isinstance(self.shots, (int, np.integer)) or self.shots < 1:
            raise InvalidConfig(f"shots must be a positive integer, got {self.shots!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidConfig("seed must be an unsigned 64-bit integer")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidConfig(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class SimResult:
    """Tallies and estimates from one simulated run.

    ``counts[a, x, y]`` counts shots with Alice setting ``a``, Alice outcome ``x``
    and Bob outcome ``y``. ``n_eff`` is the effective sample size entering the
    Hoeffding bound, ``1 / Σᵢ pᵢ²/nᵢ`` over the two designated groups.
    """

    shots_used: int
    counts: np.ndarray
    payoff_estimate: float
    std_error: float
    n_eff: float
    bound: float
    verdict: Verdict
    p_value_bound: float
    seed: int = 0
    alpha: float = 1e-6


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    gap: float
    required_gap: float
    p_value_bound: float


def hoeffding_gap(n_eff: float, alpha: float) -> float:
    """Smallest estimate-minus-bound that certifies at level ``alpha``."""
    if n_eff <= 0:
        return math.inf
    return math.sqrt(math.log(1.0 / alpha) / (2.0 * n_eff))


def _p_value(gap: float, n_eff: float) -> float:
    if gap <= 0 or n_eff <= 0:
        return 1.0
    return math.exp(-2.0 * n_eff * gap * gap)


def certificate(res: SimResult, alpha: float) -> Certificate:
    """One-sided Hoeffding test of ``true payoff > bound``."""
    gap = res.payoff_estimate - res.bound
    required = hoeffding_gap(res.n_eff, alpha)
    p_value = _p_value(gap, res.n_eff)
    nonlocal_ = gap > 0 and gap >= required
    return Certificate(Verdict.NONLOCAL if nonlocal_ else Verdict.INCONCLUSIVE, gap, required, p_value)


def _sampling_tables(inst: GameInstance) -> tuple[np.ndarray, np.ndarray]:
    asm = steered_assemblage(inst.state, inst.alice_povms)
    n_x = max(len(p) for p in asm.probs)
    alice_cum = np.ones((2, n_x))
    bob_first = np.zeros((2, n_x))
    e0 = inst.bob_povm[0]
    for a in range(2):
        probs = asm.probs[a] / asm.probs[a].sum()
        alice_cum[a, : len(probs)] = np.cumsum(probs)
        alice_cum[a, len(probs) - 1 :] = 1.0
        for x, sigma in enumerate(asm.states[a]):
            bob_first[a, x] = min(max(expectation(e0, sigma), 0.0), 1.0)
    return alice_cum, bob_first


def _run_shard(seed: int, index: int, n: int, alice_cum: np.ndarray, bob_first: np.ndarray) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))
    n_x = alice_cum.shape[1]
    setting = rng.integers(0, 2, size=n)
    u = rng.random(n)
    v = rng.random(n)
    x = np.minimum((u[:, None] >= alice_cum[setting]).sum(axis=1), n_x - 1)
    y = (v >= bob_first[setting, x]).astype(np.int64)
    flat = (setting * n_x + x) * 2 + y
    return np.bincount(flat, minlength=2 * n_x * 2).reshape(2, n_x, 2)


def tally(inst: GameInstance, cfg: SimConfig, workers: int = 1) -> np.ndarray:
    """Counts ``[setting, alice_outcome, bob_outcome]`` for ``cfg.shots`` shots."""
    alice_cum, bob_first = _sampling_tables(inst)
    n_shards = -(-cfg.shots // SHARD_SIZE)
    sizes = [min(SHARD_SIZE, cfg.shots - i * SHARD_SIZE) for i in range(n_shards)]
    seed = int(cfg.seed)

    def job(i):
        return _run_shard(seed, i, sizes[i], alice_cum, bob_first)

    if workers > 1 and n_shards > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(n_shards)))
    else:
        parts = [job(i) for i in range(n_shards)]
    return np.sum(parts, axis=0)


def estimate_payoff(counts: np.ndarray, priors: tuple[float, float]) -> tuple[float, float, float]:
    """Stratified payoff estimate from tallies.

    Returns ``(estimate, std_error, n_eff)``. The per-group success rates are
    recombined with the exact priors; if a designated group was never observed
    the estimate falls back to the observed group alone and ``n_eff`` is 0.
    """
    # designated groups: (setting 0, outcome 0) scored by Bob outcome 0,
    # (setting 1, outcome 0) scored by Bob outcome 1
    n = np.array([counts[0, 0].sum(), counts[1, 0].sum()], dtype=float)
    hits = np.array([counts[0, 0, 0], counts[1, 0, 1]], dtype=float)
    p = np.asarray(priors, dtype=float)
    seen = n > 0
    if not seen.any():
        return 0.0, 0.0, 0.0
    rate = np.divide(hits, n, out=np.zeros(2), where=seen)
    if not seen.all():
        est = float(rate[seen][0])
        return est, 0.0, 0.0
    est = float(p @ rate)
    var = float(np.sum(p**2 * rate * (1 - rate) / n))
    n_eff = float(1.0 / np.sum(p**2 / n))
    return est, math.sqrt(var), n_eff


def simulate_game(inst: GameInstance, cfg: SimConfig, workers: int = 1) -> SimResult:
    counts = tally(inst, cfg, workers=workers)
    est, se, n_eff = estimate_payoff(counts, inst.priors)
    gap = est - inst.nc_bound
    required = hoeffding_gap(n_eff, cfg.alpha)
    verdict = Verdict.NONLOCAL if gap > 0 and gap >= required else Verdict.INCONCLUSIVE
    return SimResult(
        shots_used=int(counts.sum()),
        counts=counts,
        payoff_estimate=est,
        std_error=se,
        n_eff=n_eff,
        bound=inst.nc_bound,
        verdict=verdict,
        p_value_bound=_p_value(gap, n_eff),
        seed=int(cfg.seed),
        alpha=cfg.alpha,
    )
