"""Minimal-error discrimination of two qubit states.

Three bounds live here: the quantum optimum (trace-norm form), the bound that
any preparation-noncontextual model must obey, and the classical guessing
probability for two distributions over a finite label set. Each has an
independent brute-force counterpart used by the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import InvalidDistribution, InvalidInstance, InvalidPovm, InvalidState
from .linalg import I2, check_density, check_povm, expectation, hermitian_eig, trace_norm

DIST_TOL = 1e-12


@dataclass(frozen=True)
class DiscriminationInstance:
    """Two qubit states ``rho1``, ``rho2`` with prior ``p1`` on the first."""

    rho1: np.ndarray
    rho2: np.ndarray
    p1: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.p1 <= 1.0:
            raise InvalidInstance(f"prior p1={self.p1} outside [0, 1]")
        try:
            object.__setattr__(self, "rho1", check_density(self.rho1, dims=(2,)))
            object.__setattr__(self, "rho2", check_density(self.rho2, dims=(2,)))
        except InvalidState as exc:
            raise InvalidInstance(str(exc)) from exc

    @property
    def p2(self) -> float:
        return 1.0 - self.p1

    def swapped(self) -> "DiscriminationInstance":
        return DiscriminationInstance(self.rho2, self.rho1, self.p2)


def overlap(rho1, rho2) -> float:
    """Hilbert-Schmidt overlap ``tr(ρ₁ρ₂)`` by direct product."""
    return expectation(rho1, rho2)


def _weighted_difference(inst: DiscriminationInstance) -> np.ndarray:
    return inst.p1 * inst.rho1 - inst.p2 * inst.rho2


def helstrom_bound(inst: DiscriminationInstance) -> float:
    """Optimal success probability ``½(1 + ‖p₁ρ₁ − p₂ρ₂‖₁)``."""
    return 0.5 * (1.0 + trace_norm(_weighted_difference(inst)))


def helstrom_bound_pure(inst: DiscriminationInstance) -> float:
    """Closed form ``½(1 + √(1 − 4p₁p₂ tr(ρ₁ρ₂)))``, exact only for pure states."""
    arg = 1.0 - 4.0 * inst.p1 * inst.p2 * overlap(inst.rho1, inst.rho2)
    return 0.5 * (1.0 + np.sqrt(max(arg, 0.0)))


def helstrom_measurement(inst: DiscriminationInstance) -> tuple[np.ndarray, np.ndarray]:
    """Two-outcome POVM achieving :func:`helstrom_bound`.

    ``E₁`` projects onto the strictly positive eigenspace of ``p₁ρ₁ − p₂ρ₂``;
    zero eigenvalues are assigned to the second outcome.
    """
    lam, vecs = hermitian_eig(_weighted_difference(inst))
    pos = vecs[:, lam > 0]
    e1 = pos @ pos.conj().T
    return e1, I2 - e1


def nc_bound(inst: DiscriminationInstance) -> float:
    """Preparation-noncontextual ceiling ``1 − min{p₁,p₂} tr(ρ₁ρ₂)``."""
    return 1.0 - min(inst.p1, inst.p2) * overlap(inst.rho1, inst.rho2)


def success_probability(inst: DiscriminationInstance, povm) -> float:
    """Average success ``p₁ tr(E₁ρ₁) + p₂ tr(E₂ρ₂)`` of a fixed measurement."""
    if len(povm) != 2:
        raise InvalidPovm(f"expected two effects, got {len(povm)}")
    e1, e2 = check_povm(povm, dim=2)
    return inst.p1 * expectation(e1, inst.rho1) + inst.p2 * expectation(e2, inst.rho2)


def brute_force_optimal(inst: DiscriminationInstance, grid_steps: int = 2000) -> float:
    """Maximise success over projective qubit measurements on a Bloch grid.

    The grid is ``grid_steps + 1`` polar angles in ``[0, π]`` times
    ``grid_steps`` azimuths in ``[0, 2π)``, plus the two trivial measurements.
    No eigendecomposition is involved.
    """
    if grid_steps < 100:
        raise ValueError("grid_steps must be at least 100")
    gamma = _weighted_difference(inst)
    g00, g11, g01 = gamma[0, 0].real, gamma[1, 1].real, gamma[0, 1]
    theta = np.linspace(0.0, np.pi, grid_steps + 1)
    phi = np.linspace(0.0, 2.0 * np.pi, grid_steps, endpoint=False)
    c2 = np.cos(theta / 2) ** 2
    s2 = np.sin(theta / 2) ** 2
    cs = np.cos(theta / 2) * np.sin(theta / 2)
    phase = np.exp(1j * phi)
    # ⟨χ|Γ|χ⟩ for χ = (cos θ/2, e^{iφ} sin θ/2)
    cross = 2.0 * np.real(np.outer(cs, g01 * phase))
    values = (g00 * c2 + g11 * s2)[:, None] + cross
    best = float(values.flat[np.argmax(values)])
    # E₁ = I and E₁ = 0
    return max(inst.p2 + best, inst.p1, inst.p2)


@dataclass(frozen=True)
class ClassicalGuessInstance:
    """Two finite distributions ``dist_a``, ``dist_b`` with priors."""

    prior_a: float
    prior_b: float
    dist_a: np.ndarray
    dist_b: np.ndarray

    def __post_init__(self):
        da = np.asarray(self.dist_a, dtype=float)
        db = np.asarray(self.dist_b, dtype=float)
        if da.shape != db.shape or da.ndim != 1:
            raise InvalidDistribution("distributions must be 1-D over the same labels")
        for name, d in (("dist_a", da), ("dist_b", db)):
            if np.any(d < 0) or abs(d.sum() - 1.0) > DIST_TOL:
                raise InvalidDistribution(f"{name} is not a probability vector")
        if min(self.prior_a, self.prior_b) < 0 or abs(self.prior_a + self.prior_b - 1.0) > DIST_TOL:
            raise InvalidDistribution("priors must be nonnegative and sum to 1")
        object.__setattr__(self, "dist_a", da)
        object.__setattr__(self, "dist_b", db)


def classical_guess_prob(inst: ClassicalGuessInstance) -> float:
    """``1 − Σ_λ min{p(λ|a)p(a), p(λ|b)p(b)}``."""
    joint_a = inst.dist_a * inst.prior_a
    joint_b = inst.dist_b * inst.prior_b
    return float(1.0 - np.minimum(joint_a, joint_b).sum())


def classical_guess_exhaustive(inst: ClassicalGuessInstance) -> float:
    """Best deterministic guess ``g: Λ → {a, b}`` by enumerating all ``2^|Λ|`` maps."""
    n = inst.dist_a.shape[0]
    if n > 20:
        raise ValueError("exhaustive search limited to 20 labels")
    joint_a = inst.dist_a * inst.prior_a
    joint_b = inst.dist_b * inst.prior_b
    best = 0.0
    for guess in product((0, 1), repeat=n):
        g = np.array(guess, dtype=bool)
        best = max(best, float(joint_a[g].sum() + joint_b[~g].sum()))
    return best
