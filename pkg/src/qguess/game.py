"""Two-ensemble guessing game that certifies nonlocality with three measurements.

Alice holds half of a shared two-qubit state and uses one of two measurements
to prepare Bob's marginal ``ρ_B`` as one of two ensembles,
``q₁ρ₁ + (1−q₁)σ₁`` or ``q₂ρ₂ + (1−q₂)σ₂``. Bob performs a single two-outcome
measurement and the payoff is his success at telling ``ρ₁`` from ``ρ₂`` with
priors ``qᵢ/(q₁+q₂)``. A payoff above the noncontextual ceiling rules out any
preparation-noncontextual (hence any local-hidden-state) account.

Optimal instance, ``|ψ⟩ = |0⟩`` versus ``|φ⟩ = a|0⟩ + b|1⟩``
--------------------------------------------------------------

:func:`solve_optimal_instance` finds Bob's angle by root-finding on the
no-signalling constraint (single shared weight ``q``, residual states
``σ_ψ = |χ⊥⟩⟨χ⊥|``, ``σ_φ = |χ⟩⟨χ|`` with ``|χ⟩ = cos θ|0⟩ − sin θ|1⟩``).
The solver reproduces, to ~1e-15, the closed forms

* ``tan 2θ = a/b`` (so ``cos 2θ = b``): Bob measures in the Helstrom basis;
* ``q = 1/(1+b)``;
* ``ρ_B = [[1 − b/2, ab/(2(1+b))], [ab/(2(1+b)), b/2]]``;
* spectrum of ``ρ_B``: ``β± = ½(1 ± √((1−b)/(1+b)))``, e.g. ``{2/3, 1/3}`` at ``b = 0.8``;
* payoff ``½(1+b)``, noncontextual ceiling ``1 − a²/2``, margin ``b(1−b)/2``.

These are documented results of the numerical solve; the code never uses them
as inputs. ``tan 2θ = b/a`` would put Bob's projector off the Helstrom basis.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .discrimination import overlap
from .errors import (
    InvalidInstance,
    InvalidPovm,
    InvalidState,
    InvalidWeights,
    MarginalMismatch,
    NoSolution,
    QGuessError,
    RankDeficient,
)
from .linalg import (
    I2,
    KET0,
    check_density,
    check_povm,
    expectation,
    hermitian_eig,
    partial_trace,
    projector,
)

NS_TOL = 1e-9
ROOT_TOL = 1e-12
ZERO_PROB = 1e-12
FULL_RANK_TOL = 1e-9


class Verdict(str, enum.Enum):
    NONLOCAL = "Nonlocal"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Ensemble:
    """Weighted qubit states ``{(wᵢ, σᵢ)}``."""

    weights: tuple[float, ...]
    states: tuple[np.ndarray, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != len(self.states) or not w:
            raise InvalidWeights("need one weight per state")
        if min(w) < 0 or abs(sum(w) - 1.0) > 1e-12:
            raise InvalidWeights(f"ensemble weights {w} are not a probability vector")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", tuple(check_density(s, dims=(2,)) for s in self.states))

    def average(self) -> np.ndarray:
        return sum(w * s for w, s in zip(self.weights, self.states))


@dataclass(frozen=True)
class BipartiteState:
    """Two-qubit state, Alice ⊗ Bob.

    For pure entangled states built by :func:`schmidt_state`, ``schmidt_weights``
    holds the eigenvalues ``βᵢ`` of Bob's marginal (descending), with Schmidt
    amplitudes ``√βᵢ`` on ``alice_basis[:, i] ⊗ bob_basis[:, i]``. States given only
    as a density matrix leave the Schmidt fields as ``None``.
    """

    dense: np.ndarray
    schmidt_weights: np.ndarray | None = None
    alice_basis: np.ndarray | None = None
    bob_basis: np.ndarray | None = None

    @classmethod
    def from_density(cls, rho) -> "BipartiteState":
        return cls(check_density(rho, dims=(4,)))

    @property
    def rho_b(self) -> np.ndarray:
        return partial_trace(self.dense, keep="B")

    @property
    def rho_a(self) -> np.ndarray:
        return partial_trace(self.dense, keep="A")

    def entanglement_entropy(self) -> float:
        """Von Neumann entropy of Bob's marginal in bits (meaningful for pure states)."""
        lam = hermitian_eig(self.rho_b)[0]
        lam = lam[lam > 1e-15]
        return float(-np.sum(lam * np.log2(lam)))


def schmidt_state(weights, bob_basis, alice_basis=None) -> BipartiteState:
    """Pure state ``Σᵢ √βᵢ |β′ᵢ⟩_A ⊗ |βᵢ⟩_B``; Alice's basis defaults to computational."""
    beta = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    if abs(beta.sum() - 1.0) > 1e-10:
        raise InvalidState("Schmidt weights must sum to 1")
    bob = np.asarray(bob_basis, dtype=complex)
    alice = np.eye(2, dtype=complex) if alice_basis is None else np.asarray(alice_basis, dtype=complex)
    vec = sum(np.sqrt(b) * np.kron(alice[:, i], bob[:, i]) for i, b in enumerate(beta))
    return BipartiteState(projector(vec), beta, alice, bob)


def purification(rho_b) -> BipartiteState:
    """Purify Bob's state in its eigenbasis with Alice's computational basis."""
    lam, vecs = hermitian_eig(check_density(rho_b, dims=(2,)))
    lam = np.clip(lam, 0.0, None)
    return schmidt_state(lam / lam.sum(), vecs)


def _dense(state) -> np.ndarray:
    return state.dense if isinstance(state, BipartiteState) else np.asarray(state, dtype=complex)


@dataclass(frozen=True)
class Assemblage:
    """Bob's conditional states per Alice setting.

    ``probs[a][x]`` is ``P(x|a)`` and ``states[a][x]`` is ``σ_{x|a}``. Outcomes with
    ``P(x|a) < 1e-12`` carry the maximally mixed state and ``placeholder[a][x]``.
    """

    probs: tuple[np.ndarray, ...]
    states: tuple[tuple[np.ndarray, ...], ...]
    placeholder: tuple[tuple[bool, ...], ...] = ()

    def marginal(self, a: int) -> np.ndarray:
        return sum(p * s for p, s in zip(self.probs[a], self.states[a]))


@dataclass(frozen=True)
class CertificateVerdict:
    payoff: float
    bound: float
    margin: float
    verdict: Verdict


@dataclass(frozen=True)
class GameInstance:
    """One fully specified game.

    Outcome conventions used everywhere: Alice's setting 0 and outcome 0 prepare
    ``ρ₁ = |ψ⟩⟨ψ|``; setting 1 and outcome 0 prepare ``ρ₂ = |φ⟩⟨φ|``. Bob's effect 0
    guesses ``ρ₁`` and effect 1 guesses ``ρ₂``.
    """

    psi: np.ndarray
    phi: np.ndarray
    a: float
    b: float
    theta: float
    q1: float
    q2: float
    sigma_psi: np.ndarray
    sigma_phi: np.ndarray
    bob_povm: tuple[np.ndarray, np.ndarray]
    rho_b: np.ndarray
    state: BipartiteState
    alice_povms: tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]
    payoff_opt: float
    nc_bound: float
    ensembles: tuple[Ensemble, Ensemble] = field(default=())

    @property
    def rho1(self) -> np.ndarray:
        return projector(self.psi)

    @property
    def rho2(self) -> np.ndarray:
        return projector(self.phi)

    @property
    def priors(self) -> tuple[float, float]:
        return _priors(self.q1, self.q2)

    def achieved_payoff(self) -> float:
        e1, e2 = self.bob_povm
        return payoff(e1, e2, self.rho1, self.rho2, self.q1, self.q2)


def _priors(q1: float, q2: float) -> tuple[float, float]:
    if not (0.0 < q1 <= 1.0 and 0.0 < q2 <= 1.0):
        raise InvalidWeights(f"weights must lie in (0, 1], got q1={q1}, q2={q2}")
    total = q1 + q2
    return q1 / total, q2 / total


def payoff(e1, e2, rho1, rho2, q1: float, q2: float) -> float:
    """Bob's score ``q₁/(q₁+q₂)·tr(E₁ρ₁) + q₂/(q₁+q₂)·tr(E₂ρ₂)``."""
    p1, p2 = _priors(q1, q2)
    e1, e2 = check_povm((e1, e2), dim=2)
    return p1 * expectation(e1, rho1) + p2 * expectation(e2, rho2)


def optimal_payoff(rho1, rho2, q1: float, q2: float) -> float:
    """``½(1 + √(1 − 4q₁q₂ tr(ρ₁ρ₂)/(q₁+q₂)²))``; the Helstrom value for pure states."""
    p1, p2 = _priors(q1, q2)
    arg = 1.0 - 4.0 * p1 * p2 * overlap(rho1, rho2)
    return 0.5 * (1.0 + np.sqrt(max(arg, 0.0)))


def game_nc_bound(rho1, rho2, q1: float, q2: float) -> float:
    """Ceiling on the payoff for any unsteerable (noncontextual) explanation."""
    p1, p2 = _priors(q1, q2)
    return 1.0 - min(p1, p2) * overlap(rho1, rho2)


def certify(payoff_value: float, bound: float) -> CertificateVerdict:
    """Exact comparison, no statistical slack."""
    margin = payoff_value - bound
    verdict = Verdict.NONLOCAL if margin > 0 else Verdict.INCONCLUSIVE
    return CertificateVerdict(payoff_value, bound, margin, verdict)


def _chi(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), -np.sin(theta)], dtype=complex)


def _chi_perp(theta: float) -> np.ndarray:
    return np.array([np.sin(theta), np.cos(theta)], dtype=complex)


def _ns_weight(theta: float, b: float) -> float:
    # diagonal (|0⟩⟨0|) component of the no-signalling equality, solved for q
    c2 = np.cos(2.0 * theta)
    return c2 / (b * b + c2)


def _ns_mismatch(theta: float, a: float, b: float) -> np.ndarray:
    q = _ns_weight(theta, b)
    phi = np.array([a, b], dtype=complex)
    lhs = q * projector(KET0) + (1 - q) * projector(_chi_perp(theta))
    rhs = q * projector(phi) + (1 - q) * projector(_chi(theta))
    return lhs - rhs


def ns_off_diagonal_residual(theta: float, b: float) -> float:
    """Off-diagonal mismatch of the two ensemble averages at angle ``theta``."""
    a = np.sqrt(1.0 - b * b)
    return float(np.real(_ns_mismatch(theta, a, b)[0, 1]))


def solve_optimal_instance(b: float) -> GameInstance:
    """Construct the optimal game for ``|φ⟩ = a|0⟩ + b|1⟩``, ``0 < b < 1``.

    Bob's angle is bracketed in ``(0, π/4]`` and refined until the off-diagonal
    no-signalling residual is at most 1e-12.
    """
    if not 0.0 < b < 1.0:
        raise InvalidInstance(f"b must lie strictly between 0 and 1, got {b}")
    a = float(np.sqrt(1.0 - b * b))
    lo, hi = 0.0, np.pi / 4
    f_lo, f_hi = ns_off_diagonal_residual(lo, b), ns_off_diagonal_residual(hi, b)
    if not f_lo < 0.0 < f_hi:
        raise NoSolution(f"no sign change of the residual on (0, pi/4] for b={b}")
    theta = brentq(ns_off_diagonal_residual, lo, hi, args=(b,), xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    if abs(ns_off_diagonal_residual(theta, b)) > ROOT_TOL:
        raise NoSolution(f"root-finder stalled at residual {ns_off_diagonal_residual(theta, b):.3g}")
    q = float(_ns_weight(theta, b))

    psi = KET0.copy()
    phi = np.array([a, b], dtype=complex)
    chi, chi_perp = _chi(theta), _chi_perp(theta)
    sigma_psi, sigma_phi = projector(chi_perp), projector(chi)
    ens1 = Ensemble((q, 1 - q), (projector(psi), sigma_psi))
    ens2 = Ensemble((q, 1 - q), (projector(phi), sigma_phi))
    rho_b = ens1.average()
    if np.max(np.abs(rho_b - ens2.average())) > NS_TOL:
        raise NoSolution("ensemble averages disagree after root-finding")
    bob_povm = (projector(chi), projector(chi_perp))
    return build_instance(psi, phi, theta, ens1, ens2, bob_povm)


def build_instance(psi, phi, theta, ens1: Ensemble, ens2: Ensemble, bob_povm) -> GameInstance:
    """Assemble a game from two ensembles of the same ``ρ_B`` and Bob's measurement.

    Each ensemble's first member is the state to be discriminated. The shared
    state is the purification of ``ρ_B`` and Alice's measurements come from
    :func:`ghjw_povm`.
    """
    rho_b = ens1.average()
    if np.max(np.abs(rho_b - ens2.average())) > NS_TOL:
        raise MarginalMismatch("the two ensembles average to different states")
    state = purification(rho_b)
    alice = (ghjw_povm(ens1, state), ghjw_povm(ens2, state))
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    q1, q2 = ens1.weights[0], ens2.weights[0]
    rho1, rho2 = projector(psi), projector(phi)
    b = float(abs(phi[1]))
    return GameInstance(
        psi=psi,
        phi=phi,
        a=float(np.sqrt(max(0.0, 1.0 - b * b))),
        b=b,
        theta=float(theta),
        q1=q1,
        q2=q2,
        sigma_psi=ens1.states[1] if len(ens1.states) > 1 else rho1,
        sigma_phi=ens2.states[1] if len(ens2.states) > 1 else rho2,
        bob_povm=check_povm(bob_povm, dim=2),
        rho_b=rho_b,
        state=state,
        alice_povms=alice,
        payoff_opt=optimal_payoff(rho1, rho2, q1, q2),
        nc_bound=game_nc_bound(rho1, rho2, q1, q2),
        ensembles=(ens1, ens2),
    )


def ghjw_povm(target: Ensemble, state: BipartiteState) -> tuple[np.ndarray, ...]:
    """Alice's POVM that remotely prepares ``target`` on Bob's side.

    In the eigenbasis of ``ρ_B`` the effects are the transposes of
    ``ρ_B^{-1/2} wₓσₓ ρ_B^{-1/2}``, written in Alice's Schmidt basis.
    """
    if state.schmidt_weights is None:
        raise InvalidState("remote preparation needs a Schmidt-form pure state")
    rho_b = state.rho_b
    if np.max(np.abs(target.average() - rho_b)) > NS_TOL:
        raise MarginalMismatch("target ensemble does not average to Bob's marginal")
    beta = np.asarray(state.schmidt_weights, dtype=float)
    if beta.min() <= FULL_RANK_TOL:
        raise RankDeficient(f"Bob's marginal is rank deficient (min eigenvalue {beta.min():.3g})")
    inv_root = 1.0 / np.sqrt(beta)
    v = state.bob_basis
    u = state.alice_basis
    effects = []
    for w, sigma in zip(target.weights, target.states):
        in_eigbasis = v.conj().T @ (w * sigma) @ v
        local = (inv_root[:, None] * in_eigbasis * inv_root[None, :]).T
        eff = u @ local @ u.conj().T
        effects.append(0.5 * (eff + eff.conj().T))
    return tuple(effects)


def steered_assemblage(state, povms) -> Assemblage:
    """Bob's conditional states ``σ_{x|a} = tr_A[(E_{x|a}⊗I)ρ_AB]/P(x|a)``."""
    rho = _dense(state)
    probs, states, flags = [], [], []
    for povm in povms:
        try:
            effects = check_povm(povm, dim=2)
        except QGuessError as exc:
            raise InvalidPovm(str(exc)) from exc
        p_row, s_row, f_row = [], [], []
        for e in effects:
            unnorm = partial_trace(np.kron(e, I2) @ rho, keep="B")
            p = float(np.real(np.trace(unnorm)))
            if p < ZERO_PROB:
                p_row.append(0.0)
                s_row.append(I2 / 2)
                f_row.append(True)
            else:
                p_row.append(p)
                sig = unnorm / p
                s_row.append(0.5 * (sig + sig.conj().T))
                f_row.append(False)
        probs.append(np.array(p_row))
        states.append(tuple(s_row))
        flags.append(tuple(f_row))
    return Assemblage(tuple(probs), tuple(states), tuple(flags))


def ns_residual(asm: Assemblage) -> float:
    """Largest entrywise difference between Bob's marginals across settings."""
    marginals = [asm.marginal(a) for a in range(len(asm.probs))]
    worst = 0.0
    for i in range(len(marginals)):
        for j in range(i + 1, len(marginals)):
            worst = max(worst, float(np.max(np.abs(marginals[i] - marginals[j]))))
    return worst


@dataclass(frozen=True)
class ProfileRow:
    b: float
    schmidt_weights: tuple[float, float]
    entanglement_entropy: float
    payoff_opt: float
    nc_bound: float
    margin: float


def _profile_row(b: float) -> ProfileRow:
    inst = solve_optimal_instance(b)
    beta = inst.state.schmidt_weights
    return ProfileRow(
        b=b,
        schmidt_weights=(float(beta[0]), float(beta[1])),
        entanglement_entropy=inst.state.entanglement_entropy(),
        payoff_opt=inst.payoff_opt,
        nc_bound=inst.nc_bound,
        margin=inst.payoff_opt - inst.nc_bound,
    )


def entanglement_profile(b_grid, workers: int = 1) -> list[ProfileRow]:
    """One row per ``b``, in input order."""
    grid = [float(b) for b in b_grid]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_profile_row, grid))
    return [_profile_row(b) for b in grid]
