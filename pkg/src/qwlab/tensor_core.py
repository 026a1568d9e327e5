"""Dense complex linear algebra and register tensor operations.

Basis conventions used throughout the library:

* computational basis index j runs 0..d-1 (0-based in code); the paper-style
  1-based index is j+1,
* for a register of `sites` qudits of local dimension q, index j encodes the
  digit string of j in base q with site 1 as the most significant digit,
* for qubits, digit 0 is spin-up with sigma_z |0> = +|0>, so the magnetization
  of basis state j is  sites - 2 * popcount(j).

With these conventions the index pairing j <-> d-1-j is exactly the digitwise
complement, which is what makes the special-basis cancellations work.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidStateError, NotHermitianError
from .tolerances import TOL

__all__ = [
    "Bipartition",
    "DensityMatrix",
    "density_matrix",
    "kron",
    "partial_trace",
    "partial_transpose",
    "eig_hermitian",
    "expm_unitary",
    "trace_norm_hermitian",
    "level_sums",
    "hermiticity_defect",
    "IDENTITY_2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
]

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, result[(i*rb+k),(j*cb+l)] = a[i,j] * b[k,l]."""
    return np.kron(np.asarray(a), np.asarray(b))


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.abs(m - m.conj().T).max())


def level_sums(sites: int, local_dim: int = 2) -> np.ndarray:
    """Sum of per-site levels (digits) for every basis index of the register.

    For qubits this is the popcount table; magnetization follows as
    sites*(local_dim-1) - 2*level_sums.
    """
    idx = np.arange(local_dim**sites)
    total = np.zeros_like(idx)
    for _ in range(sites):
        total += idx % local_dim
        idx //= local_dim
    return total


@dataclass(frozen=True)
class Bipartition:
    """Register split A|B with dimension bookkeeping."""

    sites_a: int
    sites_b: int
    local_dim: int = 2

    def __post_init__(self):
        if self.sites_a < 1 or self.sites_b < 1:
            raise ValueError("both parts of a bipartition need at least one site")
        if self.local_dim < 2:
            raise ValueError("local dimension must be >= 2")

    @property
    def dim_a(self) -> int:
        return self.local_dim**self.sites_a

    @property
    def dim_b(self) -> int:
        return self.local_dim**self.sites_b

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def sites(self) -> int:
        return self.sites_a + self.sites_b


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace (PSD on demand) state of a register."""

    matrix: np.ndarray = field(repr=False)
    dim: int

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def check_psd(self, floor: float = TOL.psd_floor) -> None:
        lo = self.min_eigenvalue()
        if lo < floor:
            raise InvalidStateError(f"state not PSD: min eigenvalue {lo:.3e}")

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def density_matrix(mat: np.ndarray, *, check: bool = True) -> DensityMatrix:
    """Validate and wrap a raw matrix as a DensityMatrix.

    Hermiticity is required to TOL.hermiticity and the stored matrix is
    exactly symmetrized; the trace must be 1 to TOL.trace_unit. Positivity is
    not checked here (call check_psd when needed).
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got {mat.shape}")
    if check:
        defect = hermiticity_defect(mat)
        if defect > TOL.hermiticity:
            raise InvalidStateError(f"not Hermitian: max|rho-rho^dag| = {defect:.3e}")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TOL.trace_unit:
            raise InvalidStateError(f"trace is {tr:.12g}, not 1")
    return DensityMatrix(matrix=0.5 * (mat + mat.conj().T), dim=mat.shape[0])


def _as_array(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _check_partition(rho: np.ndarray, part: Bipartition) -> None:
    if rho.shape[0] != part.dim:
        raise DimensionMismatchError(
            f"state dimension {rho.shape[0]} != bipartition dimension {part.dim}"
        )


def partial_trace(rho, part: Bipartition, keep: str = "A") -> DensityMatrix:
    """Reduced state on the kept side of the bipartition."""
    m = _as_array(rho)
    _check_partition(m, part)
    t = m.reshape(part.dim_a, part.dim_b, part.dim_a, part.dim_b)
    if keep.upper() == "A":
        red = np.einsum("ikjk->ij", t)
    elif keep.upper() == "B":
        red = np.einsum("kikj->ij", t)
    else:
        raise ValueError("keep must be 'A' or 'B'")
    return density_matrix(red)


def partial_transpose(rho, part: Bipartition) -> np.ndarray:
    """Partial transpose over subsystem A: result[(iA,iB),(jA,jB)] = rho[(jA,iB),(iA,jB)]."""
    m = _as_array(rho)
    _check_partition(m, part)
    t = m.reshape(part.dim_a, part.dim_b, part.dim_a, part.dim_b)
    return t.transpose(2, 1, 0, 3).reshape(part.dim, part.dim)


def _require_hermitian(h: np.ndarray, tol: float) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    defect = hermiticity_defect(h)
    if defect > tol:
        raise NotHermitianError(f"max|h-h^dag| = {defect:.3e} exceeds {tol:.1e}")
    return 0.5 * (h + h.conj().T)


def eig_hermitian(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector matrix of a Hermitian matrix."""
    h = _require_hermitian(h, TOL.eig_input_hermiticity)
    w, v = np.linalg.eigh(h)
    return w, v


def expm_unitary(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via the eigendecomposition."""
    w, v = eig_hermitian(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def trace_norm_hermitian(m: np.ndarray) -> float:
    """Sum of |eigenvalues| of a Hermitian matrix."""
    m = _require_hermitian(m, TOL.eig_input_hermiticity)
    return float(np.abs(np.linalg.eigvalsh(m)).sum())
