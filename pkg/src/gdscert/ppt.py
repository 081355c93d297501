"""Partial-transpose positivity tests for diagonal-symmetric states.

By permutation symmetry only the block sizes k = 1..floor(N/2) give
inequivalent bipartitions; for N=4 these are exactly the 1|3 and 2|2
splits, and both are needed (neither implies the other).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import CapacityError, GDSState, gds_density_matrix

MAX_PPT_QUBITS = 10
DEFAULT_EIG_TOL = 1e-10


@dataclass(frozen=True)
class PptReport:
    """Minimum partial-transpose eigenvalue per bipartition block size."""

    n_qubits: int
    tolerance: float
    min_eigenvalues: dict  # k -> min eigenvalue of rho^{PT_k}

    @property
    def is_ppt(self) -> bool:
        return all(v >= -self.tolerance for v in self.min_eigenvalues.values())

    def to_json_dict(self) -> dict:
        return {
            "bipartitions": [
                {"k": int(k), "min_eig": float(v)}
                for k, v in sorted(self.min_eigenvalues.items())
            ],
            "ppt": self.is_ppt,
        }


def partial_transpose(rho: np.ndarray, k: int, n_qubits: int) -> np.ndarray:
    """Transpose the first k tensor factors of a 2^N x 2^N matrix."""
    dim = 1 << n_qubits
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix for N={n_qubits}, got {rho.shape}")
    if not 1 <= k <= n_qubits - 1:
        raise ValueError(f"k must be in 1..{n_qubits - 1}, got {k}")
    da = 1 << k
    db = dim // da
    return (
        rho.reshape(da, db, da, db).swapaxes(0, 2).reshape(dim, dim)
    )


def is_ppt(state: GDSState, tol: float = DEFAULT_EIG_TOL) -> PptReport:
    """Eigenvalue test of every inequivalent partial transpose of a GDS state.

    The density matrix is real symmetric in the computational basis (all
    Dicke projectors are real), so a symmetric eigensolver suffices.
    """
    n = state.n_qubits
    if n > MAX_PPT_QUBITS:
        raise CapacityError(f"PPT eigensolves limited to N <= {MAX_PPT_QUBITS}, got {n}")
    rho = gds_density_matrix(state)
    minima = {}
    for k in range(1, n // 2 + 1):
        pt = partial_transpose(rho, k, n)
        minima[k] = float(np.linalg.eigvalsh(pt).min())
    return PptReport(n_qubits=n, tolerance=tol, min_eigenvalues=minima)
