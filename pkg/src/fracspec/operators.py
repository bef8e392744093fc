"""Unitary fractional operators: graph fractional Fourier transforms and the
discrete fractional Fourier transform.

A fractional operator is kept in factored form ``M = [prefix] P
diag(exp(j * order * theta)) P^H`` so that changing the order only rescales
diagonal phase factors and applying the operator to a signal never requires
re-running a spectral factorization. Graph operators come from the
orthonormal adjacency eigenbasis; the DFRFT comes from the commuting-matrix
eigenvector convention that reproduces the unitary DFT exactly at order 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import DecompositionError, NotUnitaryError
from .graphs import Graph

__all__ = [
    "SpectralBasis",
    "FractionalOperator",
    "eigendecompose",
    "gft_matrix",
    "unitary_fractional_power",
    "graph_frft",
    "dfrft_matrix",
    "unitarity_error",
    "reconstruction_error",
]

#: unitarity tolerance accepted on *inputs* (per matrix dimension)
INPUT_UNITARITY_TOL = 1e-8
#: unitarity guaranteed on *outputs* (per matrix dimension)
OUTPUT_UNITARITY_TOL = 1e-9
#: eigenvalues whose phases differ by less than this are treated as one eigenspace
PHASE_CLUSTER_TOL = 1e-8


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def unitarity_error(m: np.ndarray) -> float:
    """Frobenius norm of M^H M - I."""
    n = m.shape[0]
    return float(np.linalg.norm(m.conj().T @ m - np.eye(n)))


@dataclass(frozen=True)
class SpectralBasis:
    """Orthonormal eigendecomposition of a symmetric adjacency matrix.

    ``v`` holds eigenvectors in columns, ordered by descending eigenvalue
    (stable ties); each eigenvector's largest-magnitude component (first such
    index on ties) is made positive so the basis is deterministic.
    """

    v: np.ndarray
    lam: np.ndarray
    source: str = ""

    @property
    def n(self) -> int:
        return self.v.shape[0]

    @property
    def fourier_phase_decomposition(self):
        """Eigenphase decomposition (theta, P) of the graph Fourier matrix V^T.

        Computed once per basis and cached; every fractional order reuses it.
        """
        cached = self.__dict__.get("_fourier_phases")
        if cached is None:
            cached = _unitary_eigendecomposition(self.v.T.astype(np.complex128))
            self.__dict__["_fourier_phases"] = cached
        return cached

    @property
    def _fourier_basis_h(self):
        cached = self.__dict__.get("_fourier_ph")
        if cached is None:
            _, p = self.fourier_phase_decomposition
            cached = _freeze(p.conj().T.copy())
            self.__dict__["_fourier_ph"] = cached
        return cached


class FractionalOperator:
    """Unitary operator held as ``[prefix] P diag(exp(j*order*phases)) P^H``.

    ``phases`` are the generator phases of the one-parameter family: principal
    arguments in (-pi, pi] for graph and geodesic kinds, and fixed-branch
    multiples of pi/2 (possibly outside the principal range) for the DFRFT,
    whose eigenvalue assignment intentionally unwraps the branch. ``prefix``
    is only set for geodesic operators (the endpoint temporal basis times the
    phase-interpolated coupling), where ``order`` is the interpolation
    parameter. The dense ``matrix`` is materialized lazily; transforms apply
    the factors directly.
    """

    def __init__(self, order, phases, phase_basis, kind, prefix=None, matrix=None,
                 phase_basis_h=None):
        self.order = float(order)
        self.phases = _freeze(np.asarray(phases))
        self.phase_basis = _freeze(np.asarray(phase_basis))
        self.kind = kind
        self.prefix = None if prefix is None else _freeze(np.asarray(prefix))
        self._matrix = matrix
        self._phase_basis_h = phase_basis_h

    @property
    def n(self) -> int:
        return self.phase_basis.shape[0]

    @property
    def diag(self) -> np.ndarray:
        return np.exp(1j * self.order * self.phases)

    @property
    def phase_basis_h(self) -> np.ndarray:
        if self._phase_basis_h is None:
            self._phase_basis_h = _freeze(self.phase_basis.conj().T.copy())
        return self._phase_basis_h

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            p = self.phase_basis
            m = (p * self.diag) @ self.phase_basis_h
            if self.prefix is not None:
                m = self.prefix @ m
            self._matrix = _freeze(m)
        return self._matrix

    def with_order(self, order: float) -> "FractionalOperator":
        """Same operator family at a different order; only the diagonal phase
        factors change."""
        return FractionalOperator(order, self.phases, self.phase_basis,
                                  self.kind, prefix=self.prefix,
                                  phase_basis_h=self._phase_basis_h)

    # -- factored application (never forms the dense operator) ---------------

    def apply_left(self, x: np.ndarray) -> np.ndarray:
        """M @ x."""
        y = self.phase_basis @ (self.diag[:, None] * (self.phase_basis_h @ x))
        return y if self.prefix is None else self.prefix @ y

    def apply_left_inverse(self, x: np.ndarray) -> np.ndarray:
        """M^H @ x (closed-form inverse: the operator is unitary)."""
        if self.prefix is not None:
            x = self.prefix.conj().T @ x
        return self.phase_basis @ (self.diag.conj()[:, None] * (self.phase_basis_h @ x))

    def apply_right_transpose(self, x: np.ndarray) -> np.ndarray:
        """x @ M^T."""
        y = ((x @ self.phase_basis_h.T) * self.diag) @ self.phase_basis.T
        return y if self.prefix is None else y @ self.prefix.T

    def apply_right_conj(self, x: np.ndarray) -> np.ndarray:
        """x @ M^* (right factor of the inverse transform)."""
        if self.prefix is not None:
            x = x @ self.prefix.conj()
        return ((x @ self.phase_basis_h.T) * self.diag.conj()) @ self.phase_basis.T

    def order_derivative(self) -> np.ndarray:
        """d(matrix)/d(order) of the eigenphase family, as a dense matrix."""
        p = self.phase_basis
        core = (p * (1j * self.phases * self.diag)) @ p.conj().T
        return core if self.prefix is None else self.prefix @ core


def reconstruction_error(op: FractionalOperator) -> float:
    """Frobenius distance between ``op.matrix`` and its cached factorization."""
    p = op.phase_basis
    rebuilt = (p * op.diag) @ p.conj().T
    if op.prefix is not None:
        rebuilt = op.prefix @ rebuilt
    return float(np.linalg.norm(op.matrix - rebuilt))


def eigendecompose(g: Graph) -> SpectralBasis:
    """Symmetric eigendecomposition of a graph adjacency.

    Eigenvalues are sorted descending (stable), eigenvector signs fixed by
    making the first largest-magnitude component positive, and the
    reconstruction ``V diag(lam) V^T = A`` is verified.
    """
    a = np.asarray(g.adjacency, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError("adjacency contains non-finite entries")
    lam, v = np.linalg.eigh(a)
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    v = v[:, order].copy()
    # deterministic signs
    for k in range(v.shape[1]):
        col = v[:, k]
        i0 = int(np.argmax(np.abs(col)))
        if col[i0] < 0:
            v[:, k] = -col
    norm_a = np.linalg.norm(a)
    resid = np.linalg.norm((v * lam) @ v.T - a)
    if resid > 1e-9 * max(norm_a, 1.0):
        raise DecompositionError(
            f"eigendecomposition residual {resid:.3e} exceeds 1e-9 * ||A||"
        )
    return SpectralBasis(v=_freeze(v), lam=_freeze(lam), source=g.label)


def gft_matrix(basis: SpectralBasis) -> FractionalOperator:
    """Graph Fourier matrix F = V^T as an order-1 fractional operator."""
    theta, p = basis.fourier_phase_decomposition
    return FractionalOperator(
        order=1.0,
        phases=theta,
        phase_basis=p,
        kind="graph",
        matrix=_freeze(basis.v.T.astype(np.complex128)),
        phase_basis_h=basis._fourier_basis_h,
    )


def _unitary_eigendecomposition(u: np.ndarray, cluster_tol: float = PHASE_CLUSTER_TOL):
    """Orthonormal eigendecomposition of a (numerically) unitary matrix.

    Uses the complex Schur form, whose basis is orthonormal by construction
    even for tightly clustered eigenvalues, and then unifies the phase inside
    each eigenvalue cluster. Clusters are detected on the unit circle, so a
    repeated eigenvalue straddling the -1 branch cut (phases near +pi and -pi
    simultaneously) is recognized as one eigenspace and snapped to the
    principal branch value +pi. This keeps fractional powers invariant under
    re-mixing of eigenvectors inside a degenerate eigenspace.

    Returns (theta, P) with phases sorted descending (stable ties) and each
    column's largest-magnitude component rotated onto the positive real axis.
    """
    n = u.shape[0]
    t, z = scipy.linalg.schur(np.asarray(u, dtype=np.complex128), output="complex")
    w = np.diag(t).copy()
    theta = np.angle(w)
    theta[theta == -np.pi] = np.pi  # signed-zero imaginary part; branch is (-pi, pi]
    order = np.lexsort((np.arange(n), -theta))
    theta = theta[order]
    w = w[order]
    z = z[:, order].copy()

    # consecutive clusters on the sorted phases
    bounds = [0]
    for i in range(1, n):
        if theta[i - 1] - theta[i] >= cluster_tol:
            bounds.append(i)
    bounds.append(n)
    groups = [list(range(a, b)) for a, b in zip(bounds[:-1], bounds[1:])]
    # wrap-around: the top (near +pi) and bottom (near -pi) groups may be one
    # eigenvalue on the circle
    if len(groups) > 1 and (np.pi - theta[0]) + (theta[n - 1] + np.pi) < cluster_tol:
        groups = [groups[0] + groups[-1]] + groups[1:-1]

    for grp in groups:
        if len(grp) == 1:
            continue
        rep = float(np.angle(np.mean(w[grp])))
        if np.pi - abs(rep) < cluster_tol:
            rep = np.pi  # canonical branch for a -1 eigenspace
        theta[grp] = rep

    # re-sort after unification, then canonical per-column phase
    order = np.lexsort((np.arange(n), -theta))
    theta = theta[order]
    z = z[:, order]
    for k in range(n):
        col = z[:, k]
        i0 = int(np.argmax(np.abs(col)))
        z[:, k] = col / (col[i0] / abs(col[i0]))

    ortho = unitarity_error(z)
    if ortho > OUTPUT_UNITARITY_TOL * n:
        raise DecompositionError(
            f"eigenvector re-orthonormalization failed: ||P^H P - I|| = {ortho:.3e}"
        )
    return _freeze(theta), _freeze(z)


def unitary_fractional_power(u, order: float, kind: str = "graph") -> FractionalOperator:
    """Fractional power of a unitary matrix via per-eigenvalue principal phases.

    ``u`` is decomposed as ``P diag(exp(j theta_k)) P^H`` with theta_k the
    principal argument in (-pi, pi]; the result is
    ``P diag(exp(j * order * theta_k)) P^H``. At order 1 this reproduces ``u``,
    at order 0 the identity, and powers within the family are additive.
    """
    mat = u.matrix if isinstance(u, FractionalOperator) else np.asarray(u, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NotUnitaryError(f"expected a square matrix, got shape {mat.shape}")
    n = mat.shape[0]
    err = unitarity_error(mat)
    if err > INPUT_UNITARITY_TOL * n:
        raise NotUnitaryError(
            f"input is not unitary: ||U^H U - I|| = {err:.3e} > {INPUT_UNITARITY_TOL * n:.3e}"
        )
    theta, p = _unitary_eigendecomposition(mat)
    return FractionalOperator(order, theta, p, kind)


def graph_frft(basis: SpectralBasis, order: float) -> FractionalOperator:
    """Graph fractional Fourier transform of a given order.

    Fractional power of the unitary graph Fourier matrix; the eigenphase
    decomposition is cached on the basis, so sweeping orders only updates the
    diagonal phase factors.
    """
    theta, p = basis.fourier_phase_decomposition
    return FractionalOperator(order, theta, p, kind="graph",
                              phase_basis_h=basis._fourier_basis_h)


@lru_cache(maxsize=64)
def _dfrft_eigenstructure(n: int):
    """Commuting-matrix eigenvectors and their spectral index assignment.

    The circulant-plus-cosine commuting matrix ``S`` shares eigenvectors with
    the unitary DFT. S commutes with the reflection k -> -k (mod n), so its
    spectrum splits into an even and an odd symmetry class; diagonalizing the
    two classes separately (which also resolves the degenerate pairs S has for
    some n) and ordering each by descending eigenvalue yields the classical
    Hermite-like sequence. Even-class vectors get spectral indices 0,2,4,...
    and odd-class vectors 1,3,5,..., producing exactly the index set
    {0,...,n-2} plus n-1 (n odd) or n (n even).
    """
    k = np.arange(n)
    s = np.zeros((n, n))
    s[k, k] = 2.0 * np.cos(2.0 * np.pi * k / n) - 4.0
    np.add.at(s, (k, (k + 1) % n), 1.0)
    np.add.at(s, (k, (k - 1) % n), 1.0)

    n_even = n // 2 + 1
    e = np.zeros((n, n_even))
    e[0, 0] = 1.0
    c = 1
    for i in range(1, (n + 1) // 2):
        e[i, c] = e[n - i, c] = 1.0 / np.sqrt(2.0)
        c += 1
    if n % 2 == 0:
        e[n // 2, c] = 1.0
    n_odd = n - n_even
    o = np.zeros((n, n_odd))
    c = 0
    for i in range(1, (n + 1) // 2):
        o[i, c] = 1.0 / np.sqrt(2.0)
        o[n - i, c] = -1.0 / np.sqrt(2.0)
        c += 1

    we, ve = np.linalg.eigh(e.T @ s @ e)
    ve = e @ ve[:, np.argsort(-we, kind="stable")]
    if n_odd:
        wo, vo = np.linalg.eigh(o.T @ s @ o)
        vo = o @ vo[:, np.argsort(-wo, kind="stable")]
    else:
        vo = np.zeros((n, 0))

    cols = [ve[:, i] for i in range(ve.shape[1])] + [vo[:, i] for i in range(vo.shape[1])]
    khat = [2 * i for i in range(ve.shape[1])] + [2 * i + 1 for i in range(vo.shape[1])]
    order = np.argsort(khat, kind="stable")
    v = np.column_stack([cols[i] for i in order]).astype(np.complex128)
    khat = np.asarray(khat, dtype=np.float64)[order]
    phases = -0.5 * np.pi * khat

    # order-1 must reproduce the unitary DFT; guard against ordering drift
    m = np.arange(n)
    dft = np.exp(-2j * np.pi * np.outer(m, m) / n) / np.sqrt(n)
    dev = np.abs((v * np.exp(1j * phases)) @ v.T - dft)
    if dev.max() > INPUT_UNITARITY_TOL * n:
        bad = np.unravel_index(int(np.argmax(dev)), dev.shape)
        raise DecompositionError(
            f"order-1 DFRFT deviates from the DFT by {dev.max():.3e} at entry {bad}; "
            "eigenvector ordering is unstable for this size"
        )
    return _freeze(phases), _freeze(v), _freeze(v.conj().T.copy())


@lru_cache(maxsize=64)
def _dfrft_principal_shifted_structure(n: int):
    """Fallback eigenstructure: principal fractional power of the DFT after a
    global phase rotation by exp(j pi/4) that moves the -1 eigenvalue off the
    branch cut, undone by shifting all generator phases by -pi/4."""
    m = np.arange(n)
    dft = np.exp(-2j * np.pi * np.outer(m, m) / n) / np.sqrt(n)
    theta, p = _unitary_eigendecomposition(np.exp(1j * np.pi / 4) * dft)
    return _freeze(theta - np.pi / 4), p, _freeze(p.conj().T.copy())


def dfrft_matrix(n: int, order: float, mode: str = "candan") -> FractionalOperator:
    """Discrete fractional Fourier transform matrix of size ``n``.

    mode="candan" (default) is the commuting-matrix DFRFT, whose order-1
    matrix equals the unitary DFT ``F[m, k] = exp(-2j pi m k / n)/sqrt(n)``;
    this identity is verified at construction. mode="principal_shifted" is a
    documented fallback: the principal fractional power of the DFT computed
    off the branch cut via a global phase rotation.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"dfrft needs n >= 2, got {n}")
    n = int(n)
    if mode == "candan":
        phases, v, v_h = _dfrft_eigenstructure(n)
    elif mode == "principal_shifted":
        phases, v, v_h = _dfrft_principal_shifted_structure(n)
    else:
        raise ValueError(f"unknown dfrft mode {mode!r}")
    return FractionalOperator(order, phases, v, kind="dfrft", phase_basis_h=v_h)
