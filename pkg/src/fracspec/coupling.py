"""Geodesic coupling between the graph-induced temporal basis and the DFRFT.

Two unitary temporal bases of the same fractional order generally induce
different spectral coordinates. Their relative change-of-basis operator
``W = (F_graph)^H F_dfrft`` is unitary; as long as -1 is not among its
eigenvalues the principal logarithm is well defined and the curve
``F_graph exp(lam * log W)`` is the unitary geodesic between the two
endpoints. In phase form the curve just scales the eigenphases of W by lam,
so one decomposition serves every lam.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MarginViolationError, NotUnitaryError
from .operators import (
    INPUT_UNITARITY_TOL,
    FractionalOperator,
    _freeze,
    _unitary_eigendecomposition,
    unitarity_error,
)

__all__ = [
    "CouplingDecomposition",
    "coupling_operator",
    "phase_decompose",
    "geodesic_temporal_basis",
    "swapped_geodesic_temporal_basis",
]

DEFAULT_MARGIN_TOL = 1e-6


@dataclass(frozen=True)
class CouplingDecomposition:
    """Eigenphase decomposition ``W = S diag(exp(j theta)) S^H`` of a unitary
    coupling operator, with the margin of its phases from the -1 branch cut.

    ``margin = min_k (pi - |theta_k|)`` must stay positive for the geodesic
    construction to be well defined.
    """

    s: np.ndarray
    theta: np.ndarray
    margin: float

    @property
    def n(self) -> int:
        return self.s.shape[0]


def _as_matrix(op) -> np.ndarray:
    return op.matrix if isinstance(op, FractionalOperator) else np.asarray(op, dtype=np.complex128)


def coupling_operator(f_graph, f_dfrft) -> np.ndarray:
    """Relative change-of-basis operator ``W = (F_graph)^H F_dfrft``."""
    a = _as_matrix(f_graph)
    b = _as_matrix(f_dfrft)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    n = a.shape[0]
    for name, m in (("graph basis", a), ("dfrft basis", b)):
        err = unitarity_error(m)
        if err > INPUT_UNITARITY_TOL * n:
            raise NotUnitaryError(f"{name} is not unitary: ||U^H U - I|| = {err:.3e}")
    return _freeze(a.conj().T @ b)


def phase_decompose(w: np.ndarray, margin_tol: float = DEFAULT_MARGIN_TOL) -> CouplingDecomposition:
    """Eigenphase decomposition of a unitary coupling operator.

    Fails hard (no silent perturbation) when any eigenphase comes within
    ``margin_tol`` radians of the -1 branch cut, reporting the margin and the
    offending phase index.
    """
    w = np.asarray(w, dtype=np.complex128)
    n = w.shape[0]
    err = unitarity_error(w)
    if err > INPUT_UNITARITY_TOL * n:
        raise NotUnitaryError(f"coupling operator is not unitary: ||W^H W - I|| = {err:.3e}")
    theta, s = _unitary_eigendecomposition(w)
    worst = int(np.argmax(np.abs(theta)))
    margin = float(np.pi - abs(theta[worst]))
    if margin <= margin_tol:
        raise MarginViolationError(
            f"coupling eigenphase {worst} is {margin:.3e} rad from the -1 branch cut "
            f"(tolerance {margin_tol:.3e}); the principal logarithm is ill-defined",
            margin=margin,
            index=worst,
        )
    return CouplingDecomposition(s=s, theta=theta, margin=margin)


def geodesic_temporal_basis(f_graph_beta: FractionalOperator,
                            decomp: CouplingDecomposition,
                            lam: float) -> FractionalOperator:
    """Coupled temporal basis ``F_graph S diag(exp(j lam theta)) S^H``.

    The curve interpolates the graph-induced temporal basis (lam=0) and the
    DFRFT (lam=1) along the unitary geodesic; sweeping lam over a fixed
    decomposition only changes the diagonal phase factors.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"coupling parameter must lie in [0, 1], got {lam}")
    if f_graph_beta.n != decomp.n:
        raise ValueError(f"size mismatch: basis {f_graph_beta.n} vs decomposition {decomp.n}")
    return FractionalOperator(
        order=float(lam),
        phases=decomp.theta,
        phase_basis=decomp.s,
        kind="geodesic",
        prefix=f_graph_beta.matrix,
    )


def swapped_geodesic_temporal_basis(f_dfrft_beta: FractionalOperator,
                                    swapped_decomp: CouplingDecomposition,
                                    lam: float) -> FractionalOperator:
    """Geodesic with the endpoints exchanged: starts at the DFRFT (lam=0) and
    reaches the graph-induced basis at lam=1. ``swapped_decomp`` must decompose
    the reversed coupling operator ``(F_dfrft)^H F_graph``. Equals the direct
    geodesic evaluated at ``1 - lam``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"coupling parameter must lie in [0, 1], got {lam}")
    if f_dfrft_beta.n != swapped_decomp.n:
        raise ValueError(f"size mismatch: basis {f_dfrft_beta.n} vs decomposition {swapped_decomp.n}")
    return FractionalOperator(
        order=float(lam),
        phases=swapped_decomp.theta,
        phase_basis=swapped_decomp.s,
        kind="geodesic",
        prefix=f_dfrft_beta.matrix,
    )
