"""Correlators and entanglement quantities: C1, C2, Pearson, Maccone, negativity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DecompositionError,
    DimensionMismatchError,
    QwlabError,
    ZeroVarianceError,
)
from .mub import MubRotation, rotate_state
from .tensor_core import (
    Bipartition,
    DensityMatrix,
    level_sums,
    partial_transpose,
    trace_norm_hermitian,
)
from .tolerances import TOL

__all__ = [
    "DiagonalObservable",
    "diagonal_observable",
    "subsystem_magnetization",
    "staggered_magnetization",
    "diagonal_expectation",
    "connected_correlation",
    "general_connected_correlation",
    "c2",
    "c1_family_check",
    "pearson",
    "maccone_criterion",
    "negativity",
    "evaluate_all",
    "WitnessResult",
]


@dataclass(frozen=True)
class DiagonalObservable:
    """Observable diagonal in the computational basis with a declared symmetry split.

    eigenvalues E_j decompose as f(j) + offset where f is antisymmetric
    (f(j) = -f(d-1-j), 0-based) or symmetric (f(j) = +f(d-1-j)) under the
    index-reversal pairing; the declared kind gates theorem-mode witnessing.
    """

    eigenvalues: np.ndarray = field(repr=False)
    symmetry: str  # antisymmetric | symmetric
    offset: float

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def antisym_part(self) -> np.ndarray:
        return self.eigenvalues - self.offset


def diagonal_observable(eigenvalues, symmetry: str = "antisymmetric") -> DiagonalObservable:
    """Validate the declared decomposition and build the observable.

    Antisymmetric: the pair means (E_j + E_{d-1-j})/2 must be one constant,
    which becomes the offset. Symmetric: E must equal its reversal; the offset
    is the middle eigenvalue for odd dimension (so the remaining f part
    vanishes there) and 0 otherwise.
    """
    e = np.asarray(eigenvalues, dtype=float)
    rev = e[::-1]
    if symmetry == "antisymmetric":
        means = 0.5 * (e + rev)
        c1 = float(means.mean())
        if np.abs(means - c1).max() > TOL.decomposition:
            raise DecompositionError("pair means not constant; spectrum is not f(j)+c1 with antisymmetric f")
    elif symmetry == "symmetric":
        if np.abs(e - rev).max() > TOL.decomposition:
            raise DecompositionError("spectrum not symmetric under index reversal")
        c1 = float(e[(len(e) - 1) // 2]) if len(e) % 2 == 1 else 0.0
    else:
        raise ValueError(f"unknown symmetry kind {symmetry!r}")
    return DiagonalObservable(eigenvalues=e, symmetry=symmetry, offset=c1)


def subsystem_magnetization(sites: int, local_dim: int = 2) -> DiagonalObservable:
    """Total-magnetization observable: E_j = sites*(local_dim-1) - 2*level_sum(j)."""
    if sites < 1:
        raise ValueError("need at least one site")
    e = sites * (local_dim - 1) - 2 * level_sums(sites, local_dim)
    return diagonal_observable(e.astype(float), "antisymmetric")


def staggered_magnetization(sites: int) -> DiagonalObservable:
    """Alternating-sign qubit magnetization sum_k (-1)^(k-1) sigma_z^k."""
    j = np.arange(2**sites)
    e = np.zeros(2**sites)
    for k in range(sites):
        bit = (j >> (sites - 1 - k)) & 1
        e += (-1.0) ** k * (1.0 - 2.0 * bit)
    return diagonal_observable(e, "antisymmetric")


def _diag_probs(rho) -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    d = np.diag(m)
    residue = np.abs(d.imag).max() if len(d) else 0.0
    if residue > TOL.imag_residue:
        raise QwlabError(f"imaginary residue {residue:.3e} in diagonal expectations")
    return d.real


def _check_obs_dims(part: Bipartition, o_a: DiagonalObservable, o_b: DiagonalObservable) -> None:
    if o_a.dim != part.dim_a or o_b.dim != part.dim_b:
        raise DimensionMismatchError(
            f"observable dims ({o_a.dim},{o_b.dim}) != bipartition dims ({part.dim_a},{part.dim_b})"
        )


def diagonal_expectation(rho, observable: DiagonalObservable) -> float:
    """<O> for an observable diagonal in the computational basis."""
    p = _diag_probs(rho)
    if len(p) != observable.dim:
        raise DimensionMismatchError(f"state dim {len(p)} != observable dim {observable.dim}")
    return float(p @ observable.eigenvalues)


def _moments(rho, part, o_a, o_b):
    """(cov, mean_a, mean_b, var_a, var_b) of the two diagonal observables."""
    _check_obs_dims(part, o_a, o_b)
    p = _diag_probs(rho)
    if len(p) != part.dim:
        raise DimensionMismatchError(f"state dim {len(p)} != bipartition dim {part.dim}")
    ea = np.repeat(o_a.eigenvalues, part.dim_b)
    eb = np.tile(o_b.eigenvalues, part.dim_a)
    mean_a = float(p @ ea)
    mean_b = float(p @ eb)
    cov = float(p @ (ea * eb)) - mean_a * mean_b
    var_a = float(p @ ea**2) - mean_a**2
    var_b = float(p @ eb**2) - mean_b**2
    return cov, mean_a, mean_b, var_a, var_b


def connected_correlation(rho, part: Bipartition, o_a: DiagonalObservable, o_b: DiagonalObservable) -> float:
    """C1 = <O_A x O_B> - <O_A x 1><1 x O_B>."""
    return _moments(rho, part, o_a, o_b)[0]


def general_connected_correlation(rho, part: Bipartition, a_mat: np.ndarray, b_mat: np.ndarray) -> float:
    """Connected correlation of arbitrary (not necessarily diagonal) observables.

    Demonstration-only overload (e.g. sigma_z/sigma_x on the singlet); it is
    not part of theorem-mode witnessing.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape[0] != part.dim:
        raise DimensionMismatchError(f"state dim {m.shape[0]} != bipartition dim {part.dim}")
    ia = np.eye(part.dim_a)
    ib = np.eye(part.dim_b)
    ab = np.kron(a_mat, b_mat)
    a_full = np.kron(a_mat, ib)
    b_full = np.kron(ia, b_mat)
    val = np.trace(m @ ab) - np.trace(m @ a_full) * np.trace(m @ b_full)
    if abs(val.imag) > TOL.imag_residue:
        raise QwlabError(f"imaginary residue {val.imag:.3e} in connected correlation")
    return float(val.real)


def _reject_odd_fourier(u: MubRotation, obs: DiagonalObservable) -> None:
    # Fourier rotations in odd dimension require the middle f value to vanish.
    if u.kind == "fourier" and u.dim % 2 == 1:
        f_mid = obs.antisym_part[(u.dim - 1) // 2]
        if abs(f_mid) > TOL.decomposition:
            raise DecompositionError(
                f"odd-dimension fourier witnessing needs f((d+1)/2)=0, got {f_mid:.3e}"
            )


def c2(
    rho,
    part: Bipartition,
    o_a: DiagonalObservable,
    o_b: DiagonalObservable,
    u_a: MubRotation,
    u_b: MubRotation,
) -> float:
    """Connected correlation of the rotated state: C1 evaluated on (U rho U^dag)."""
    _reject_odd_fourier(u_a, o_a)
    _reject_odd_fourier(u_b, o_b)
    rotated = rotate_state(rho, part, u_a, u_b)
    return connected_correlation(rotated, part, o_a, o_b)


def c1_family_check(r1: float, r2: float, s1: float, s2: float) -> float:
    """Closed form of the two-qubit family's unrotated correlation at eps = 0."""
    a1, a2 = math.sqrt(1 - r1**2), math.sqrt(1 - r2**2)
    b1, b2 = math.sqrt(1 - s1**2), math.sqrt(1 - s2**2)
    return 0.25 * (a1 * b1 - a1 * b2 - a2 * b1 + a2 * b2)


def pearson(rho, part: Bipartition, o_a: DiagonalObservable, o_b: DiagonalObservable) -> float:
    """Connected correlation normalized by the subsystem standard deviations.

    Raises ZeroVarianceError when a subsystem variance is numerically zero
    (charge-frozen subsystem); callers decide how to proceed.
    """
    cov, _, _, var_a, var_b = _moments(rho, part, o_a, o_b)
    if var_a <= TOL.variance_floor:
        raise ZeroVarianceError("A")
    if var_b <= TOL.variance_floor:
        raise ZeroVarianceError("B")
    val = cov / math.sqrt(var_a * var_b)
    if abs(val) > 1.0 + 1e-9:
        raise QwlabError(f"Pearson value {val} outside [-1, 1]")
    return val


def maccone_criterion(
    rho,
    part: Bipartition,
    o_a: DiagonalObservable,
    o_b: DiagonalObservable,
    u_a: MubRotation,
    u_b: MubRotation,
) -> tuple[float, bool]:
    """|P_O| + |P_O'| and whether it exceeds 1 (sufficient for entanglement)."""
    p_o = pearson(rho, part, o_a, o_b)
    _reject_odd_fourier(u_a, o_a)
    _reject_odd_fourier(u_b, o_b)
    rotated = rotate_state(rho, part, u_a, u_b)
    p_op = pearson(rotated, part, o_a, o_b)
    lhs = abs(p_o) + abs(p_op)
    return lhs, lhs > 1.0


def negativity(rho, part: Bipartition) -> float:
    """(||rho^PT||_1 - 1)/2, floored at 0 within tolerance."""
    pt = partial_transpose(rho, part)
    val = 0.5 * (trace_norm_hermitian(pt) - 1.0)
    if val < TOL.negativity_floor and val >= -TOL.negativity_floor:
        return 0.0
    if val < -TOL.negativity_floor:
        raise QwlabError(f"negativity {val:.3e} below tolerance floor; eigensolver failure?")
    return val


@dataclass(frozen=True)
class WitnessResult:
    """All correlators for one state, with zero-variance flags instead of failures."""

    c1: float
    c2: float
    pearson_o: float
    pearson_oprime: float
    maccone_lhs: float
    maccone_entangled: bool | None
    negativity: float
    flags: tuple[str, ...] = ()

    COLUMNS = ("C1", "C2", "pearson_O", "pearson_Oprime", "maccone_lhs", "negativity")

    def as_row(self) -> tuple[float, ...]:
        return (
            self.c1,
            self.c2,
            self.pearson_o,
            self.pearson_oprime,
            self.maccone_lhs,
            self.negativity,
        )


def evaluate_all(
    rho,
    part: Bipartition,
    o_a: DiagonalObservable,
    o_b: DiagonalObservable,
    u_a: MubRotation,
    u_b: MubRotation,
) -> WitnessResult:
    """Bundle C1, C2, both Pearson values, the Maccone sum and negativity."""
    _reject_odd_fourier(u_a, o_a)
    _reject_odd_fourier(u_b, o_b)
    rotated = rotate_state(rho, part, u_a, u_b)
    c1_val = connected_correlation(rho, part, o_a, o_b)
    c2_val = connected_correlation(rotated, part, o_a, o_b)
    flags: list[str] = []

    def _try_pearson(state, tag):
        try:
            return pearson(state, part, o_a, o_b)
        except ZeroVarianceError as err:
            flags.append(f"zero_variance_{tag}_{err.side}")
            return float("nan")

    p_o = _try_pearson(rho, "O")
    p_op = _try_pearson(rotated, "Oprime")
    if math.isnan(p_o) or math.isnan(p_op):
        lhs, verdict = float("nan"), None
    else:
        lhs = abs(p_o) + abs(p_op)
        verdict = lhs > 1.0
    return WitnessResult(
        c1=c1_val,
        c2=c2_val,
        pearson_o=p_o,
        pearson_oprime=p_op,
        maccone_lhs=lhs,
        maccone_entangled=verdict,
        negativity=negativity(rho, part),
        flags=tuple(flags),
    )
