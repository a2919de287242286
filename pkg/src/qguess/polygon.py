"""Regular-polygon generalized probabilistic theories.

States of the ``n``-gon model are ``ω_j = (k cos(2πj/n), k sin(2πj/n), 1)``
and extremal effects ``e_j = ½(k cos((2j−1)π/n), k sin((2j−1)π/n), 1)`` with
``k = √sec(π/n)``; probabilities are plain ℝ³ dot products. Indices run over
``1..n`` (``ω_n`` sits at angle 0) to keep tables readable.

For the hexagon, ``σ₁ = pω₁ + (1−p)ω₆`` and ``σ₂ = pω₅ + (1−p)ω₆`` are
discriminated with success ``(1+p)/2`` by ``M₃ = {e₂, e₅}``, above the
noncontextual ceiling ``1 − min{p₁,p₂}(1 − p/2)``. The brute-force oracle
only visits extremal binary measurements: the objective is linear in the
effect, so its maximum over the effect polytope sits at an extreme point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMeasurement, InvalidP, OddNUnsupported, OutOfRange

GPT_TOL = 1e-12
UNIT = np.array([0.0, 0.0, 1.0])
ZERO = np.zeros(3)


@dataclass(frozen=True)
class PolygonTheory:
    n: int
    k: float
    states: np.ndarray
    effects: np.ndarray
    unit: np.ndarray

    def state(self, j: int) -> np.ndarray:
        """``ω_j`` with ``j`` taken mod ``n`` into ``1..n``."""
        return self.states[(j - 1) % self.n]

    def effect(self, j: int) -> np.ndarray:
        return self.effects[(j - 1) % self.n]

    def probability_matrix(self) -> np.ndarray:
        """``[i, j] = e_{i+1}·ω_{j+1}``."""
        return self.effects @ self.states.T


def polygon_theory(n: int) -> PolygonTheory:
    if n % 2:
        raise OddNUnsupported(f"only even polygons are supported, got n={n}")
    if not 4 <= n <= 64:
        raise OutOfRange(f"n must lie in [4, 64], got {n}")
    k = float(np.sqrt(1.0 / np.cos(np.pi / n)))
    j = np.arange(1, n + 1)
    states = np.column_stack([k * np.cos(2 * np.pi * j / n), k * np.sin(2 * np.pi * j / n), np.ones(n)])
    ang = (2 * j - 1) * np.pi / n
    effects = 0.5 * np.column_stack([k * np.cos(ang), k * np.sin(ang), np.ones(n)])
    return PolygonTheory(n, k, states, effects, UNIT.copy())


def gpt_prob(e, w, strict: bool = False) -> float:
    """Outcome probability ``e·ω``.

    With ``strict=True`` the caller asserts both vectors come from a valid
    theory, and a value outside ``[0, 1]`` raises :class:`OutOfRange`.
    """
    value = float(np.dot(np.asarray(e, dtype=float), np.asarray(w, dtype=float)))
    if strict and not -GPT_TOL <= value <= 1 + GPT_TOL:
        raise OutOfRange(f"probability {value} outside [0, 1]")
    return value


@dataclass(frozen=True)
class HexagonScenario:
    p: float
    sigma1: np.ndarray
    sigma1_perp: np.ndarray
    sigma2: np.ndarray
    sigma2_perp: np.ndarray
    measurements: dict
    c_value: float
    s_value: float
    theory: PolygonTheory


def _check_p(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise InvalidP(f"p must lie in [0, 1], got {p}")
    return float(p)


def hexagon_scenario(p: float) -> HexagonScenario:
    p = _check_p(p)
    hexa = polygon_theory(6)
    w = hexa.state
    e = hexa.effect
    return HexagonScenario(
        p=p,
        sigma1=p * w(1) + (1 - p) * w(6),
        sigma1_perp=p * w(4) + (1 - p) * w(3),
        sigma2=p * w(5) + (1 - p) * w(6),
        sigma2_perp=p * w(2) + (1 - p) * w(3),
        measurements={"M1": (e(1), e(4)), "M2": (e(3), e(6)), "M3": (e(2), e(5))},
        c_value=1 - p / 2,
        s_value=(1 + p) / 2,
        theory=hexa,
    )


def polygon_scenario(n: int, p: float) -> HexagonScenario:
    """``σ₁ = pω₁ + (1−p)ω_n``, ``σ₂ = pω_{n−1} + (1−p)ω_n`` for an even ``n``-gon.

    For ``n = 6`` this is :func:`hexagon_scenario`. The perpendicular partners
    are the antipodal mixtures, and no named measurements are attached.
    """
    if n == 6:
        return hexagon_scenario(p)
    p = _check_p(p)
    th = polygon_theory(n)
    w = th.state
    half = n // 2
    return HexagonScenario(
        p=p,
        sigma1=p * w(1) + (1 - p) * w(n),
        sigma1_perp=p * w(1 + half) + (1 - p) * w(half),
        sigma2=p * w(n - 1) + (1 - p) * w(n),
        sigma2_perp=p * w(n - 1 + half) + (1 - p) * w(half),
        measurements={},
        c_value=float("nan"),
        s_value=float("nan"),
        theory=th,
    )


TABLE1_ROWS = ("e1", "e6", "e2")
TABLE1_COLS = ("sigma1", "sigma2", "sigma1_perp", "sigma2_perp")


def table1(p: float) -> np.ndarray:
    """Probabilities of ``e₁, e₆, e₂`` (rows) on ``σ₁, σ₂, σ₁⊥, σ₂⊥`` (columns)."""
    sc = hexagon_scenario(p)
    e = sc.theory.effect
    cols = (sc.sigma1, sc.sigma2, sc.sigma1_perp, sc.sigma2_perp)
    return np.array([[gpt_prob(e(i), s) for s in cols] for i in (1, 6, 2)])


def table1_pattern(p: float) -> np.ndarray:
    """The closed-form layout of :func:`table1` in terms of ``C = 1 − p/2``, ``S = (1+p)/2``."""
    c, s = 1 - p / 2, (1 + p) / 2
    return np.array([[1, c, 0, 1 - c], [c, 1, 1 - c, 0], [s, 1 - s, 1 - s, s]])


def gpt_success(scenario: HexagonScenario, p1: float, measurement) -> float:
    """``p₁·e(σ₁) + p₂·ē(σ₂)`` for a binary measurement ``(e, ē)``."""
    e, e_bar = (np.asarray(v, dtype=float) for v in measurement)
    if np.max(np.abs(e + e_bar - UNIT)) > GPT_TOL:
        raise InvalidMeasurement("effects do not sum to the unit effect")
    if not 0.0 <= p1 <= 1.0:
        raise InvalidP(f"prior p1={p1} outside [0, 1]")
    return p1 * gpt_prob(e, scenario.sigma1) + (1 - p1) * gpt_prob(e_bar, scenario.sigma2)


def hexagon_nc_bound(p: float, p1: float) -> float:
    p = _check_p(p)
    if not 0.0 <= p1 <= 1.0:
        raise InvalidP(f"prior p1={p1} outside [0, 1]")
    return 1.0 - min(p1, 1 - p1) * (1 - p / 2)


def extremal_binary_measurements(theory: PolygonTheory) -> list[tuple[str, tuple[np.ndarray, np.ndarray]]]:
    """``(e_j, u − e_j)`` for every ``j``, plus ``(u, 0)`` and ``(0, u)``."""
    out = [(f"e{j}", (theory.effect(j), theory.unit - theory.effect(j))) for j in range(1, theory.n + 1)]
    out.append(("unit", (theory.unit, ZERO)))
    out.append(("zero", (ZERO, theory.unit)))
    return out


def gpt_brute_force(scenario: HexagonScenario, p1: float, theory: PolygonTheory | None = None) -> float:
    return gpt_brute_force_argmax(scenario, p1, theory)[1]


def gpt_brute_force_argmax(scenario: HexagonScenario, p1: float, theory: PolygonTheory | None = None):
    """Best extremal binary measurement as ``(label, value)``; first label wins ties."""
    th = scenario.theory if theory is None else theory
    best_label, best = None, -np.inf
    for label, m in extremal_binary_measurements(th):
        v = gpt_success(scenario, p1, m)
        if v > best + GPT_TOL:
            best_label, best = label, v
    return best_label, best


@dataclass(frozen=True)
class AdvantageRow:
    p: float
    p1: float
    success: float
    nc_bound: float | None
    advantage: float | None


def advantage_scan(p_grid, p1_grid, n: int = 6) -> list[AdvantageRow]:
    """Theory success against the noncontextual ceiling on a ``(p, p₁)`` grid.

    For the hexagon the success is that of ``M₃``. For other even ``n`` the
    success is the extremal-measurement optimum and no ceiling is reported.
    """
    rows = []
    for p in p_grid:
        for p1 in p1_grid:
            p, p1 = float(p), float(p1)
            if n == 6:
                sc = hexagon_scenario(p)
                success = gpt_success(sc, p1, sc.measurements["M3"])
                bound = hexagon_nc_bound(p, p1)
                rows.append(AdvantageRow(p, p1, success, bound, success - bound))
            else:
                sc = polygon_scenario(n, p)
                rows.append(AdvantageRow(p, p1, gpt_brute_force(sc, p1), None, None))
    return rows
