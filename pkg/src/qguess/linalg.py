"""Small-dimension complex linear algebra (qubits and qubit pairs).

Operators are plain ``numpy`` complex arrays of shape ``(2, 2)`` or ``(4, 4)``.
Kets are 1-D complex arrays. Bipartite operators are ordered Alice ⊗ Bob.

The eigensolver is self-contained: a closed form for 2x2 and cyclic complex
Jacobi sweeps for 4x4, so results do not depend on the LAPACK build.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, InvalidPovm, InvalidState, NotHermitian, NotPsd

HERM_TOL = 1e-12
PSD_TOL = 1e-10
RECON_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
DEGENERACY_GAP = 1e-9

SUPPORTED_DIMS = (2, 4)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)


def as_operator(m, dims=SUPPORTED_DIMS) -> np.ndarray:
    """Return ``m`` as a finite square complex array of a supported size."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise DimMismatch(f"expected square matrix with dim in {dims}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def is_hermitian(m, tol: float = HERM_TOL) -> bool:
    a = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def _check_hermitian(m) -> np.ndarray:
    a = as_operator(m)
    if not is_hermitian(a):
        raise NotHermitian(f"matrix is not Hermitian (max asymmetry {np.max(np.abs(a - a.conj().T)):.3g})")
    # symmetrize so round-off in the input cannot leak into the spectrum
    return 0.5 * (a + a.conj().T)


def _eig2(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p, d = a[0, 0].real, a[1, 1].real
    z = a[0, 1]
    mean = 0.5 * (p + d)
    half = 0.5 * (p - d)
    r = np.hypot(half, abs(z))
    lam = np.array([mean + r, mean - r])
    if abs(z) == 0.0:
        if p >= d:
            vecs = np.eye(2, dtype=complex)
        else:
            vecs = np.array([[0, 1], [1, 0]], dtype=complex)
        return lam, vecs
    # two algebraically equivalent null vectors of (A - λ₊); keep the better conditioned one
    u = np.array([z, lam[0] - p], dtype=complex)
    w = np.array([lam[0] - d, np.conj(z)], dtype=complex)
    v = u if np.linalg.norm(u) >= np.linalg.norm(w) else w
    v = v / np.linalg.norm(v)
    v2 = np.array([-np.conj(v[1]), np.conj(v[0])])
    return lam, np.column_stack([v, v2])


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi eigensolver for a Hermitian matrix.

    Returns unsorted eigenvalues and the accumulated unitary whose columns are
    the eigenvectors. Sweeps stop once the off-diagonal Frobenius norm falls
    below ``JACOBI_TOL`` (relative to the matrix norm when that exceeds 1).
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        if _offdiag_norm(a) < JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                a = rot.conj().T @ a @ rot
                v = v @ rot
    return np.real(np.diag(a)).copy(), v


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a 2x2 or 4x4 Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted descending
    and eigenvectors as orthonormal columns, so ``m = V diag(λ) V†``.
    Within a degenerate cluster the individual vectors are arbitrary.
    """
    a = _check_hermitian(m)
    if a.shape[0] == 2:
        lam, vecs = _eig2(a)
    else:
        lam, vecs = jacobi_eig(a)
    order = np.argsort(-lam, kind="stable")
    lam, vecs = lam[order], vecs[:, order]
    return lam, _orthonormalize_clusters(lam, vecs)


def _orthonormalize_clusters(lam: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    out = vecs.copy()
    start = 0
    n = len(lam)
    while start < n:
        stop = start + 1
        while stop < n and lam[stop - 1] - lam[stop] < DEGENERACY_GAP:
            stop += 1
        if stop - start > 1:
            q, _ = np.linalg.qr(out[:, start:stop])
            out[:, start:stop] = q
        start = stop
    return out


def eigvalsh(m) -> np.ndarray:
    return hermitian_eig(m)[0]


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(eigvalsh(m))))


def tensor_product(a, b) -> np.ndarray:
    a = as_operator(a, dims=(2,))
    b = as_operator(b, dims=(2,))
    return np.kron(a, b)


def partial_trace(m, keep: str = "B") -> np.ndarray:
    """Reduce a two-qubit operator (Alice ⊗ Bob) to one side.

    ``keep="B"`` traces out Alice and returns Bob's operator, and vice versa.
    """
    a = as_operator(m, dims=(4,)).reshape(2, 2, 2, 2)
    if keep == "B":
        return np.einsum("ijik->jk", a)
    if keep == "A":
        return np.einsum("jiki->jk", a)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def matrix_sqrt_and_pinv_sqrt(m) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(√m, pinv(√m))`` for a Hermitian PSD matrix.

    Eigenvalues below ``PSD_TOL`` are treated as zero, so the pseudo-inverse
    acts only on the support.
    """
    lam, v = hermitian_eig(m)
    if lam[-1] < -PSD_TOL:
        raise NotPsd(f"matrix has negative eigenvalue {lam[-1]:.3g}")
    lam = np.where(lam < PSD_TOL, 0.0, lam)
    root = np.sqrt(lam)
    inv_root = np.divide(1.0, root, out=np.zeros_like(root), where=root > 0)
    return (v * root) @ v.conj().T, (v * inv_root) @ v.conj().T


def projector(ket) -> np.ndarray:
    k = np.asarray(ket, dtype=complex)
    return np.outer(k, k.conj())


def normalize(ket) -> np.ndarray:
    k = np.asarray(ket, dtype=complex)
    norm = np.linalg.norm(k)
    if norm == 0:
        raise InvalidState("zero vector cannot be normalized")
    return k / norm


def check_ket(ket, tol: float = HERM_TOL) -> np.ndarray:
    k = np.asarray(ket, dtype=complex)
    if k.ndim != 1 or k.shape[0] not in SUPPORTED_DIMS:
        raise DimMismatch(f"ket must be 1-D of length 2 or 4, got shape {k.shape}")
    if abs(np.linalg.norm(k) - 1.0) > tol:
        raise InvalidState(f"ket is not unit norm (norm {np.linalg.norm(k):.15g})")
    return k


def check_density(m, dims=SUPPORTED_DIMS) -> np.ndarray:
    """Validate a density matrix and return it as a symmetrized array."""
    try:
        a = as_operator(m, dims=dims)
    except ValueError as exc:
        raise InvalidState(str(exc)) from exc
    if not is_hermitian(a):
        raise InvalidState("density matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    if abs(np.trace(a).real - 1.0) > PSD_TOL:
        raise InvalidState(f"trace is {np.trace(a).real:.15g}, expected 1")
    if eigvalsh(a)[-1] < -PSD_TOL:
        raise InvalidState("density matrix has a negative eigenvalue")
    return a


def is_density(m) -> bool:
    try:
        check_density(m)
    except ValueError:
        return False
    return True


def check_povm(effects, dim: int | None = None) -> tuple[np.ndarray, ...]:
    """Validate a list of effects: Hermitian, PSD, summing to the identity."""
    effects = tuple(np.asarray(e, dtype=complex) for e in effects)
    if not effects:
        raise InvalidPovm("POVM needs at least one effect")
    d = effects[0].shape[0] if dim is None else dim
    total = np.zeros((d, d), dtype=complex)
    for e in effects:
        if e.shape != (d, d):
            raise InvalidPovm(f"effect shape {e.shape} does not match dim {d}")
        if not is_hermitian(e, PSD_TOL):
            raise InvalidPovm("effect is not Hermitian")
        if eigvalsh(0.5 * (e + e.conj().T))[-1] < -PSD_TOL:
            raise InvalidPovm("effect is not positive")
        total = total + e
    if np.max(np.abs(total - np.eye(d))) > PSD_TOL:
        raise InvalidPovm("effects do not sum to the identity")
    return tuple(0.5 * (e + e.conj().T) for e in effects)


def expectation(effect, rho) -> float:
    """Born-rule probability ``tr(E ρ)`` (real part)."""
    return float(np.real(np.trace(np.asarray(effect) @ np.asarray(rho))))


def random_density(rng: np.random.Generator, dim: int = 2, rank: int | None = None) -> np.ndarray:
    """Random density matrix from the Ginibre ensemble (Hilbert-Schmidt measure at full rank)."""
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_ket(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    return normalize(rng.normal(size=dim) + 1j * rng.normal(size=dim))
