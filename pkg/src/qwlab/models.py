"""Spin-chain Hamiltonians and symmetry-sector machinery.

Heisenberg chain with quasiperiodic field, the ANNNI/transverse-Ising chain,
and the kinetically constrained PXP chain.  All matrices are dense and follow
the register conventions of tensor_core (site 1 = most significant bit,
bit 0 = spin-up).
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import DimensionMismatchError, EmptySectorError
from .tensor_core import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, kron, level_sums

__all__ = [
    "ModelSpec",
    "SectorBasis",
    "site_operator",
    "build_heisenberg",
    "build_annni",
    "build_pxp",
    "pxp_basis",
    "sector_basis",
    "project_to_sector",
    "embed_from_sector",
    "build_hamiltonian",
]

GOLDEN_ETA = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of one Hamiltonian family; fields not used by a family are ignored."""

    family: str                      # heisenberg | annni | pxp
    L: int
    J: float = 1.0
    W: float = 0.0                   # quasiperiodic field strength (heisenberg)
    eta: float = GOLDEN_ETA
    kappa: float = 0.0               # next-nearest coupling (annni)
    h: float = 0.0                   # transverse field (annni)
    h_z: float = 0.0                 # longitudinal tie-break field (annni)
    Omega: float = 1.0               # Rabi strength (pxp)
    Delta: float = 0.0               # detuning (pxp)
    boundary: str = "open"           # open | periodic
    sector: int | None = None        # magnetization sector for sector-restricted work

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("chains need at least two sites")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.family not in ("heisenberg", "annni", "pxp"):
            raise ValueError(f"unknown family {self.family!r}")

    def replace(self, **kwargs) -> "ModelSpec":
        data = asdict(self)
        data.update(kwargs)
        return ModelSpec(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        return cls(**data)


@dataclass(frozen=True)
class SectorBasis:
    """Ordered full-space indices spanning one symmetry sector."""

    L: int
    indices: np.ndarray = field(repr=False)
    charge: int | None = None        # total magnetization, when applicable
    constraint: str | None = None    # "pxp_open" / "pxp_periodic" for blockaded bases

    @property
    def dim(self) -> int:
        return len(self.indices)


def site_operator(op: np.ndarray, k: int, L: int) -> np.ndarray:
    """Single-site operator on site k (1-based, site 1 = most significant bit)."""
    out = np.array([[1.0 + 0j]])
    for site in range(1, L + 1):
        out = kron(out, op if site == k else IDENTITY_2)
    return out


def _bonds(L: int, reach: int, periodic: bool) -> list[tuple[int, int]]:
    pairs = [(k, k + reach) for k in range(1, L - reach + 1)]
    if periodic:
        pairs += [(k, (k + reach - 1) % L + 1) for k in range(L - reach + 1, L + 1)]
    return pairs


def build_heisenberg(spec: ModelSpec) -> np.ndarray:
    """H = -J sum_k sigma_k . sigma_{k+1} + sum_k W cos(2 pi eta k) sigma_k^z."""
    if spec.family != "heisenberg":
        raise ValueError("spec is not a Heisenberg model")
    L = spec.L
    d = 2**L
    H = np.zeros((d, d), dtype=complex)
    for (a, b) in _bonds(L, 1, spec.boundary == "periodic"):
        for op in (SIGMA_X, SIGMA_Y, SIGMA_Z):
            H += -spec.J * site_operator(op, a, L) @ site_operator(op, b, L)
    for k in range(1, L + 1):
        H += spec.W * np.cos(2.0 * np.pi * spec.eta * k) * site_operator(SIGMA_Z, k, L)
    return H


def build_annni(spec: ModelSpec) -> np.ndarray:
    """H = -J sum zz + kappa sum z..z - h sum x, plus a -h_z sum z tie-break."""
    if spec.family != "annni":
        raise ValueError("spec is not an ANNNI model")
    L = spec.L
    if spec.kappa != 0.0 and L < 3:
        raise ValueError("next-nearest coupling needs at least three sites")
    d = 2**L
    periodic = spec.boundary == "periodic"
    # z-diagonal part assembled as a vector: much cheaper than kron chains
    z = 1.0 - 2.0 * (((np.arange(d)[None, :] >> (L - np.arange(1, L + 1)[:, None])) & 1))
    diag = np.zeros(d)
    for (a, b) in _bonds(L, 1, periodic):
        diag += -spec.J * z[a - 1] * z[b - 1]
    if spec.kappa != 0.0:
        for (a, b) in _bonds(L, 2, periodic):
            diag += spec.kappa * z[a - 1] * z[b - 1]
    if spec.h_z != 0.0:
        diag += -spec.h_z * z.sum(axis=0)
    H = np.diag(diag).astype(complex)
    if spec.h != 0.0:
        j = np.arange(d)
        for k in range(1, L + 1):
            flipped = j ^ (1 << (L - k))
            H[j, flipped] += -spec.h
    return H


def pxp_basis(L: int, boundary: str = "open") -> SectorBasis:
    """Basis of bitstrings with no two adjacent 1-bits (cyclically, if periodic)."""
    periodic = boundary == "periodic"

    def allowed(s: int) -> bool:
        if s & (s >> 1):
            return False
        if periodic and (s & 1) and (s >> (L - 1)) & 1:
            return False
        return True

    idx = np.array([s for s in range(2**L) if allowed(s)], dtype=int)
    return SectorBasis(L=L, indices=idx, constraint=f"pxp_{boundary}")


def build_pxp(spec: ModelSpec) -> tuple[np.ndarray, SectorBasis]:
    """Constrained-subspace Hamiltonian H = sum_i (Omega P sigma_x^i P + Delta sigma_z^i).

    Built directly inside the blockaded basis; the diagonal term is
    Delta * magnetization of each constrained basis state.
    """
    if spec.family != "pxp":
        raise ValueError("spec is not a PXP model")
    L = spec.L
    basis = pxp_basis(L, spec.boundary)
    index = {int(s): i for i, s in enumerate(basis.indices)}
    D = basis.dim
    H = np.zeros((D, D), dtype=complex)
    for i, s in enumerate(basis.indices):
        s = int(s)
        H[i, i] = spec.Delta * (L - 2 * bin(s).count("1"))
        for k in range(L):
            t = s ^ (1 << k)
            j = index.get(t)
            if j is not None:
                H[i, j] += spec.Omega
    return H, basis


def build_hamiltonian(spec: ModelSpec) -> np.ndarray:
    """Dispatch to the family builder; PXP is returned embedded in the full space."""
    if spec.family == "heisenberg":
        return build_heisenberg(spec)
    if spec.family == "annni":
        return build_annni(spec)
    h_sector, basis = build_pxp(spec)
    return embed_from_sector(h_sector, basis, spec.L)


def sector_basis(L: int, M: int) -> SectorBasis:
    """All basis indices with total magnetization M, ascending.

    Magnetization of index j is L - 2*popcount(j) (bit 0 = up); M must have
    the parity of L and |M| <= L.
    """
    if abs(M) > L or (L - M) % 2 != 0:
        raise EmptySectorError(f"no states with magnetization {M} on {L} sites")
    mag = L - 2 * level_sums(L)
    idx = np.where(mag == M)[0]
    if len(idx) == 0:
        raise EmptySectorError(f"no states with magnetization {M} on {L} sites")
    return SectorBasis(L=L, indices=idx, charge=M)


def project_to_sector(m: np.ndarray, basis: SectorBasis) -> np.ndarray:
    """Restrict a full-space matrix to the sector rows/columns."""
    m = np.asarray(m)
    if m.shape[0] != 2**basis.L:
        raise DimensionMismatchError(f"matrix dim {m.shape[0]} != full dim {2 ** basis.L}")
    return m[np.ix_(basis.indices, basis.indices)]


def embed_from_sector(m: np.ndarray, basis: SectorBasis, L: int | None = None) -> np.ndarray:
    """Zero-pad a sector matrix back into the full 2^L space."""
    m = np.asarray(m)
    L = basis.L if L is None else L
    if m.shape[0] != basis.dim:
        raise DimensionMismatchError(f"matrix dim {m.shape[0]} != sector dim {basis.dim}")
    full = np.zeros((2**L, 2**L), dtype=m.dtype if np.iscomplexobj(m) else complex)
    full[np.ix_(basis.indices, basis.indices)] = m
    return full
