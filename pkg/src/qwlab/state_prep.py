"""Mixed-state preparation: Gibbs, Neel, Lindblad dephasing, analytic families, ensembles."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, TraceDriftError
from .tensor_core import (
    DensityMatrix,
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Z,
    density_matrix,
    eig_hermitian,
    kron,
    level_sums,
)
from .tolerances import TOL

__all__ = [
    "gibbs",
    "gibbs_from_eig",
    "neel_state",
    "LindbladSpec",
    "lindblad_evolve",
    "dephasing_mask",
    "two_qubit_family",
    "SeparableEnsemble",
    "random_separable",
]


def gibbs_from_eig(w: np.ndarray, v: np.ndarray, beta: float) -> DensityMatrix:
    """Gibbs state from a precomputed eigendecomposition (shifted for stability)."""
    if beta < 0:
        raise ValueError("inverse temperature must be nonnegative")
    weights = np.exp(-beta * (w - w.min()))
    weights /= weights.sum()
    return density_matrix((v * weights) @ v.conj().T)


def gibbs(h: np.ndarray, beta: float) -> DensityMatrix:
    """Thermal state exp(-beta H)/Z of a Hermitian Hamiltonian."""
    w, v = eig_hermitian(h)
    return gibbs_from_eig(w, v, beta)


def neel_state(L: int) -> DensityMatrix:
    """Pure alternating product state |up down up down ...>."""
    if L < 1:
        raise ValueError("need at least one site")
    idx = int("".join("01"[k % 2] for k in range(L)), 2)
    d = 2**L
    rho = np.zeros((d, d), dtype=complex)
    rho[idx, idx] = 1.0
    return DensityMatrix(matrix=rho, dim=d)


@dataclass(frozen=True)
class LindbladSpec:
    """On-site dephasing evolution parameters: L_k = sqrt(gamma/2) sigma_z^k."""

    gamma: float
    t_max: float
    dt: float = 0.01
    sample_times: tuple[float, ...] = ()

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("dephasing rate must be nonnegative")
        if self.dt <= 0:
            raise ValueError("step size must be positive")
        times = tuple(self.sample_times) or (self.t_max,)
        object.__setattr__(self, "sample_times", times)
        if any(t < 0 or t > self.t_max + 1e-12 for t in times):
            raise ValueError("sample times must lie in [0, t_max]")
        if list(times) != sorted(times):
            raise ValueError("sample times must be ascending")
        spacings = np.diff([0.0, *times])
        positive = spacings[spacings > 0]
        if len(positive) and self.dt > positive.min() + 1e-12:
            raise ValueError("dt exceeds the smallest sample-time spacing")

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "t_max": self.t_max,
            "dt": self.dt,
            "sample_times": list(self.sample_times),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LindbladSpec":
        return cls(
            gamma=data["gamma"],
            t_max=data["t_max"],
            dt=data.get("dt", 0.01),
            sample_times=tuple(data.get("sample_times", ())),
        )


def dephasing_mask(L: int, gamma: float) -> np.ndarray:
    """Elementwise dissipator for L_k = sqrt(gamma/2) sigma_z^k.

    The jump sum gamma * sum_k (sigma_z^k rho sigma_z^k - rho) acts on matrix
    elements as multiplication by gamma * sum_k (z_k[i] z_k[j] - 1), i.e.
    -2 gamma * hamming(i, j).
    """
    j = np.arange(2**L)
    hamming = level_sums(L)[j[:, None] ^ j[None, :]]
    return -2.0 * gamma * hamming


def lindblad_evolve(rho0: DensityMatrix, h: np.ndarray, spec: LindbladSpec) -> list[tuple[float, DensityMatrix]]:
    """Fixed-step RK4 integration of drho/dt = -i[H, rho] + dephasing.

    Returns (time, state) at each requested sample time; outputs are
    re-hermitized and trace-renormalized, and integration aborts if the raw
    trace drifts beyond the configured threshold.
    """
    h = np.asarray(h, dtype=complex)
    rho = np.array(rho0.matrix, dtype=complex)
    if h.shape[0] != rho.shape[0]:
        raise DimensionMismatchError("Hamiltonian and state dimensions differ")
    L = int(round(np.log2(rho.shape[0])))
    mask = dephasing_mask(L, spec.gamma)

    def rhs(r):
        return -1j * (h @ r - r @ h) + mask * r

    dt = spec.dt
    out: list[tuple[float, DensityMatrix]] = []
    targets = list(spec.sample_times)
    steps_at = [int(round(t / dt)) for t in targets]
    for t, n in zip(targets, steps_at):
        if abs(n * dt - t) > 1e-9:
            raise ValueError(f"sample time {t} is not a multiple of dt={dt}")
    total_steps = steps_at[-1] if steps_at else 0

    next_target = 0
    for step in range(total_steps + 1):
        if next_target < len(steps_at) and step == steps_at[next_target]:
            t = targets[next_target]
            drift = abs(np.trace(rho).real - 1.0)
            if drift > TOL.lindblad_abort_drift:
                raise TraceDriftError(f"trace drift {drift:.3e} at t={t:g}")
            cleaned = 0.5 * (rho + rho.conj().T)
            cleaned /= np.trace(cleaned).real
            out.append((t, density_matrix(cleaned)))
            next_target += 1
        if step == total_steps:
            break
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return out


def _bloch_xz(r: float) -> np.ndarray:
    """Pure qubit state in the XZ plane: (I + r sigma_x + sqrt(1-r^2) sigma_z)/2."""
    return 0.5 * (IDENTITY_2 + r * SIGMA_X + np.sqrt(1.0 - r**2) * SIGMA_Z)


def two_qubit_family(r1: float, r2: float, s1: float, s2: float, eps: float, c: float) -> DensityMatrix:
    """(1-eps) * real separable two-qubit state + eps |psi><psi|.

    The separable part is the equal mixture of two products of XZ-plane Bloch
    states (r_i on side A, s_i on side B); |psi> = c|00> + sqrt(1-c^2)|11>.
    """
    for name, val in (("r1", r1), ("r2", r2), ("s1", s1), ("s2", s2), ("c", c)):
        if not -1.0 <= val <= 1.0:
            raise ValueError(f"{name}={val} outside [-1, 1]")
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps={eps} outside [0, 1]")
    rho_s = 0.5 * (kron(_bloch_xz(r1), _bloch_xz(s1)) + kron(_bloch_xz(r2), _bloch_xz(s2)))
    psi = np.zeros(4)
    psi[0] = c
    psi[3] = np.sqrt(1.0 - c**2)
    rho = (1.0 - eps) * rho_s + eps * np.outer(psi, psi)
    return density_matrix(rho)


@dataclass(frozen=True)
class SeparableEnsemble:
    """Convex mixture sum_i p_i rho_i^A x rho_i^B with a declared factor flavor."""

    weights: np.ndarray = field(repr=False)
    factors_a: tuple[np.ndarray, ...] = field(repr=False)
    factors_b: tuple[np.ndarray, ...] = field(repr=False)
    flavor: str

    @property
    def n_terms(self) -> int:
        return len(self.weights)

    def state(self) -> DensityMatrix:
        total = sum(
            w * kron(a, b)
            for w, a, b in zip(self.weights, self.factors_a, self.factors_b)
        )
        return density_matrix(total)

    def validate(self) -> None:
        if abs(self.weights.sum() - 1.0) > 1e-12 or np.any(self.weights < 0):
            raise ValueError("weights must be a probability vector")
        for factor in (*self.factors_a, *self.factors_b):
            lo = np.linalg.eigvalsh(factor)[0]
            if lo < TOL.psd_floor:
                raise ValueError(f"factor not PSD: min eigenvalue {lo:.3e}")
            if abs(np.trace(factor) - 1.0) > 1e-12:
                raise ValueError("factor trace is not 1")
            if self.flavor == "real" and np.abs(factor.imag).max() > TOL.flavor_real:
                raise ValueError("real flavor violated")
            if self.flavor == "imaginary_offdiag":
                off = factor.real - np.diag(np.diag(factor.real))
                if np.abs(off).max() > TOL.flavor_imag:
                    raise ValueError("imaginary-offdiag flavor violated")


def _random_real_factor(rng, sites: int, local_dim: int) -> np.ndarray:
    if local_dim == 2 and sites == 1:
        # random Bloch vector in the XZ disk
        angle = rng.uniform(0.0, 2.0 * np.pi)
        radius = np.sqrt(rng.uniform(0.0, 1.0))
        return 0.5 * (
            IDENTITY_2
            + radius * np.cos(angle) * SIGMA_X
            + radius * np.sin(angle) * SIGMA_Z
        ).astype(complex)
    dim = local_dim**sites
    a = rng.normal(size=(dim, dim))
    s = a @ a.T
    return (s / np.trace(s)).astype(complex)


def _random_imag_offdiag_factor(rng, sites: int, local_dim: int) -> np.ndarray:
    # real diagonal plus i * (real antisymmetric); made PSD by diagonal dominance
    dim = local_dim**sites
    a = rng.normal(size=(dim, dim))
    a = 0.5 * (a - a.T)
    diag = np.abs(a).sum(axis=1) + rng.uniform(0.1, 1.0, size=dim)
    m = np.diag(diag).astype(complex) + 1j * a
    return m / np.trace(m).real


def _random_complex_psd(rng, dim: int) -> np.ndarray:
    b = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    s = b @ b.conj().T
    return s / np.trace(s).real


def _random_fixed_charge_factor(rng, sites: int, local_dim: int, charge: int) -> np.ndarray:
    """Generic (complex) PSD factor supported on one local charge sector."""
    mag = sites * (local_dim - 1) - 2 * level_sums(sites, local_dim)
    idx = np.where(mag == charge)[0]
    if len(idx) == 0:
        raise ValueError(f"no local states with charge {charge}")
    block = _random_complex_psd(rng, len(idx))
    out = np.zeros((local_dim**sites, local_dim**sites), dtype=complex)
    out[np.ix_(idx, idx)] = block
    return out


def _feasible_charge_splits(sites_a: int, sites_b: int, local_dim: int, charge: int) -> list[tuple[int, int]]:
    splits = []
    for ma in range(-sites_a * (local_dim - 1), sites_a * (local_dim - 1) + 1):
        mb = charge - ma
        if (sites_a * (local_dim - 1) - ma) % 2 or (sites_b * (local_dim - 1) - mb) % 2:
            continue
        if abs(mb) > sites_b * (local_dim - 1):
            continue
        splits.append((ma, mb))
    return splits


def random_separable(
    flavor: str,
    sites_a: int,
    sites_b: int,
    n_terms: int,
    seed: int,
    local_dim: int = 2,
    charge: int = 0,
) -> SeparableEnsemble:
    """Seeded random separable ensemble of the requested flavor.

    Flavors: "real" (factors real PSD), "imaginary_offdiag" (real diagonal,
    purely imaginary off-diagonal), "fixed_charge" (generic complex factors,
    each confined to one local charge sector, with the pair charges summing
    to `charge`), "generic" (unconstrained complex factors).
    """
    if n_terms < 1:
        raise ValueError("need at least one term")
    rng = np.random.default_rng(seed)
    weights = rng.random(n_terms)
    weights /= weights.sum()
    factors_a, factors_b = [], []
    if flavor == "fixed_charge":
        splits = _feasible_charge_splits(sites_a, sites_b, local_dim, charge)
        if not splits:
            raise ValueError(f"charge {charge} cannot be split across ({sites_a},{sites_b})")
    for _ in range(n_terms):
        if flavor == "real":
            factors_a.append(_random_real_factor(rng, sites_a, local_dim))
            factors_b.append(_random_real_factor(rng, sites_b, local_dim))
        elif flavor == "imaginary_offdiag":
            factors_a.append(_random_imag_offdiag_factor(rng, sites_a, local_dim))
            factors_b.append(_random_imag_offdiag_factor(rng, sites_b, local_dim))
        elif flavor == "fixed_charge":
            ma, mb = splits[rng.integers(len(splits))]
            factors_a.append(_random_fixed_charge_factor(rng, sites_a, local_dim, ma))
            factors_b.append(_random_fixed_charge_factor(rng, sites_b, local_dim, mb))
        elif flavor == "generic":
            factors_a.append(_random_complex_psd(rng, local_dim**sites_a))
            factors_b.append(_random_complex_psd(rng, local_dim**sites_b))
        else:
            raise ValueError(f"unknown flavor {flavor!r}")
    ensemble = SeparableEnsemble(
        weights=weights,
        factors_a=tuple(factors_a),
        factors_b=tuple(factors_b),
        flavor=flavor,
    )
    ensemble.validate()
    return ensemble
