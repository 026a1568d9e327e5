"""Special mutually unbiased rotations and their structural checks.

Two constructions are provided.  The local one rotates every qubit through
exp(-i sigma_x pi/4); its entries are d^{-1/2} a^phi with a = exp(-i pi/2)
and phi(p,q) equal to the Hamming distance between the basis strings of p
and q, which is what gives the pairing phi(p,q) + phi(d-1-p,q) = L and the
even phase differences inside magnetization sectors.  The second is a
Fourier-type rotation that also works for qudit registers at the price of
being non-local.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DecompositionError, DimensionMismatchError, QwlabError
from .tensor_core import (
    Bipartition,
    DensityMatrix,
    SIGMA_X,
    density_matrix,
    expm_unitary,
    kron,
    level_sums,
)
from .tolerances import TOL

__all__ = [
    "MubRotation",
    "local_x_rotation",
    "fourier_mub",
    "quench_rotation",
    "quench_time",
    "rotate_state",
    "imaginary_bound",
    "check_mub_properties",
    "sector_phase_evenness",
    "MubCheckReport",
    "ONE_SITE_ROTATION",
]

# exp(-i sigma_x pi/4) in the {|0>,|1>} basis
ONE_SITE_ROTATION = np.array([[1, -1j], [-1j, 1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class MubRotation:
    """A unitary whose row basis is mutually unbiased to the computational one."""

    dim: int
    matrix: np.ndarray = field(repr=False)
    kind: str  # local_x | fourier | quench
    sites: int | None = None
    phase_table: np.ndarray | None = field(default=None, repr=False)


def _validate_mub(matrix: np.ndarray, kind: str) -> None:
    d = matrix.shape[0]
    uni = np.abs(matrix @ matrix.conj().T - np.eye(d)).max()
    if uni > TOL.mub_unitarity:
        raise QwlabError(f"{kind} rotation not unitary: defect {uni:.3e}")
    unb = np.abs(np.abs(matrix) ** 2 - 1.0 / d).max()
    if unb > TOL.mub_unbiasedness:
        raise QwlabError(f"{kind} rotation not unbiased: defect {unb:.3e}")


def _hamming_phase_table(sites: int) -> np.ndarray:
    j = np.arange(2**sites)
    xor = j[:, None] ^ j[None, :]
    # popcount of the XOR of the basis strings
    return level_sums(sites)[xor]


def local_x_rotation(sites: int) -> MubRotation:
    """(exp(-i sigma_x pi/4))^(x sites), with its integer phase table."""
    if sites < 1:
        raise ValueError("need at least one site")
    u = np.array([[1.0 + 0j]])
    for _ in range(sites):
        u = kron(u, ONE_SITE_ROTATION)
    d = 2**sites
    phi = _hamming_phase_table(sites)
    # every entry must be d^{-1/2} e^{-i pi phi / 2} with integer phi; fail loudly
    expected = np.exp(-0.5j * np.pi * phi) / np.sqrt(d)
    defect = np.abs(u - expected).max()
    if defect > TOL.phase_roundoff:
        raise QwlabError(f"integer-phase structure violated: defect {defect:.3e}")
    _validate_mub(u, "local_x")
    return MubRotation(dim=d, matrix=u, kind="local_x", sites=sites, phase_table=phi)


def fourier_mub(d: int) -> MubRotation:
    """Fourier-type rotation U_pq = d^{-1/2} exp(2 i pi (p-1/2) q / d), 1-based p,q."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    p = np.arange(1, d + 1).reshape(-1, 1)
    q = np.arange(1, d + 1).reshape(1, -1)
    u = np.exp(2j * np.pi * (p - 0.5) * q / d) / np.sqrt(d)
    _validate_mub(u, "fourier")
    return MubRotation(dim=d, matrix=u, kind="fourier")


def quench_time(h: float, k: int = 0) -> float:
    """Evolution time pi/(4h) + 2 k pi that realizes the local rotation."""
    if h == 0:
        raise ValueError("quench field h must be nonzero")
    return np.pi / (4.0 * h) + 2.0 * np.pi * k


def quench_rotation(sites: int, h: float, k: int = 0) -> MubRotation:
    """Per-site evolution under -h sigma_x for quench_time(h, k).

    With k = 0 this is the entrywise conjugate of the one-site generator in
    local_x_rotation; nonzero k only keeps the unbiased structure when 2kh is
    an integer multiple of 1/2, and construction fails loudly otherwise.
    """
    t = quench_time(h, k)
    u1 = expm_unitary(-h * SIGMA_X, t)
    u = np.array([[1.0 + 0j]])
    for _ in range(sites):
        u = kron(u, u1)
    _validate_mub(u, "quench")
    return MubRotation(dim=2**sites, matrix=u, kind="quench", sites=sites)


def rotate_state(rho, part: Bipartition, u_a: MubRotation, u_b: MubRotation) -> DensityMatrix:
    """Schroedinger-picture rotation (U_A x U_B) rho (U_A x U_B)^dag."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if u_a.dim != part.dim_a or u_b.dim != part.dim_b:
        raise DimensionMismatchError(
            f"rotation dims ({u_a.dim},{u_b.dim}) != bipartition dims ({part.dim_a},{part.dim_b})"
        )
    if m.shape[0] != part.dim:
        raise DimensionMismatchError(f"state dim {m.shape[0]} != bipartition dim {part.dim}")
    u = kron(u_a.matrix, u_b.matrix)
    return density_matrix(u @ m @ u.conj().T)


def imaginary_bound(observable) -> float:
    """(2/d) sum_{p=1}^{d/2} |f(p)| for an antisymmetric-decomposed observable.

    Estimates the scale of spurious rotated correlations produced by stray
    imaginary off-diagonal weight of order 1/d in the state factors.
    """
    if observable.symmetry != "antisymmetric":
        raise DecompositionError("imaginary_bound needs the antisymmetric decomposition")
    f = observable.antisym_part
    d = len(f)
    return float(2.0 / d * np.abs(f[: d // 2]).sum())


@dataclass(frozen=True)
class MubCheckReport:
    """Structural check results with max violation magnitudes."""

    dim: int
    unitarity: float
    unbiasedness: float
    symmetry: float | None = None           # max|U - U^T|            (strict only)
    phase_integer: float | None = None      # integer-phase residual  (strict only)
    phase_pairing: float | None = None      # |U_pq U_{d-p+1,q} - e^{-i pi L/2}/d|
    sector_evenness: bool | None = None     # phase differences even inside sectors

    @property
    def unbiased_ok(self) -> bool:
        return self.unitarity <= TOL.mub_unitarity and self.unbiasedness <= TOL.mub_unbiasedness

    @property
    def strict_ok(self) -> bool:
        if not self.unbiased_ok:
            return False
        checks = [
            self.symmetry is not None and self.symmetry <= TOL.phase_roundoff,
            self.phase_integer is not None and self.phase_integer <= TOL.phase_roundoff,
            self.phase_pairing is not None and self.phase_pairing <= TOL.phase_roundoff,
            self.sector_evenness is True,
        ]
        return all(checks)


def _extract_phases_mod4(matrix: np.ndarray) -> tuple[np.ndarray, float]:
    """Round -(2/pi) arg(entry * sqrt(d)) to integers mod 4; return table and residual."""
    d = matrix.shape[0]
    raw = -(2.0 / np.pi) * np.angle(matrix * np.sqrt(d))
    table = np.rint(raw).astype(int)
    residual = float(np.abs(matrix - np.exp(-0.5j * np.pi * table) / np.sqrt(d)).max())
    return np.mod(table, 4), residual


def sector_phase_evenness(phase_table: np.ndarray, sites: int) -> bool:
    """phi(p,q) - phi(p,r) even for every row p and columns q, r in one sector."""
    parity = phase_table % 2
    mag = sites - 2 * level_sums(sites)
    for m in np.unique(mag):
        cols = np.where(mag == m)[0]
        block = parity[:, cols]
        if np.any(block != block[:, :1]):
            return False
    return True


def check_mub_properties(rotation, strict_local_x: bool = False) -> MubCheckReport:
    """Verify unitarity and unbiasedness, plus the local-X structure when strict."""
    if isinstance(rotation, MubRotation):
        matrix = rotation.matrix
        sites = rotation.sites
    else:
        matrix = np.asarray(rotation, dtype=complex)
        sites = int(round(np.log2(matrix.shape[0])))
    d = matrix.shape[0]
    unitarity = float(np.abs(matrix @ matrix.conj().T - np.eye(d)).max())
    unbiasedness = float(np.abs(np.abs(matrix) ** 2 - 1.0 / d).max())
    if not strict_local_x:
        return MubCheckReport(dim=d, unitarity=unitarity, unbiasedness=unbiasedness)

    if sites is None or 2**sites != d:
        raise DimensionMismatchError("strict checks need a qubit-register rotation")
    symmetry = float(np.abs(matrix - matrix.T).max())
    table, phase_integer = _extract_phases_mod4(matrix)
    # pairing checked on the entries themselves: U_pq U_{d-p+1,q} = e^{-i pi L/2}/d
    product = matrix * matrix[::-1, :]
    pairing = float(np.abs(product - np.exp(-0.5j * np.pi * sites) / d).max())
    evenness = sector_phase_evenness(table, sites)
    return MubCheckReport(
        dim=d,
        unitarity=unitarity,
        unbiasedness=unbiasedness,
        symmetry=symmetry,
        phase_integer=phase_integer,
        phase_pairing=pairing,
        sector_evenness=evenness,
    )
