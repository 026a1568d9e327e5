"""Theorem and property suites behind the `verify` entrypoint.

Each suite returns a CheckResult with the worst violation it measured; the
aggregate passes only when every suite is within its stated tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroVarianceError
from .mub import check_mub_properties, fourier_mub, imaginary_bound, local_x_rotation
from .state_prep import random_separable, two_qubit_family
from .tensor_core import Bipartition, density_matrix, partial_transpose
from .witness import (
    c2,
    connected_correlation,
    diagonal_expectation,
    diagonal_observable,
    negativity,
    pearson,
    subsystem_magnetization,
)

__all__ = ["CheckResult", "run_all"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    details: list[str] = field(default_factory=list)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: worst {self.worst:.3e} (tol {self.tolerance:.1e})"


def _qubit_combos():
    return ((1, 1), (2, 2), (3, 3), (2, 3))


def check_closed_form_c2(grid_points: int = 9) -> CheckResult:
    """Numerical C2 on the two-qubit family vs -2 eps c sqrt(1-c^2)."""
    r2, s1, s2 = -0.5, 0.7, 0.1
    part = Bipartition(1, 1)
    obs = subsystem_magnetization(1)
    u = local_x_rotation(1)
    worst = 0.0
    rows = []
    for eps in np.linspace(0.0, 1.0, grid_points):
        for c in np.linspace(-1.0, 1.0, grid_points):
            for r1 in np.linspace(-1.0, 1.0, grid_points):
                rho = two_qubit_family(r1, r2, s1, s2, eps, c)
                got = c2(rho, part, obs, obs, u, u)
                want = -2.0 * eps * c * np.sqrt(1.0 - c**2)
                dev = abs(got - want)
                if dev > worst:
                    worst = dev
                rows.append((dev, eps, c, r1, got, want))
    result = CheckResult("closed_form_c2", worst <= 1e-9, worst, 1e-9)
    if not result.passed:
        rows.sort(reverse=True)
        result.details.append("largest closed-form discrepancies (dev, eps, c, r1, numeric, closed):")
        for dev, eps, c_, r1, got, want in rows[:10]:
            result.details.append(
                f"  dev={dev:.3e} eps={eps:.3f} c={c_:.3f} r1={r1:.3f} num={got:.12f} closed={want:.12f}"
            )
    return result


def _symmetric_observable(sites: int, local_dim: int = 2):
    mag = subsystem_magnetization(sites, local_dim)
    return diagonal_observable(np.abs(mag.eigenvalues), "symmetric")


def check_separability(flavor: str, n_seeds: int = 100) -> CheckResult:
    """|C2| on random separable ensembles of one flavor, all applicable rotations."""
    worst = 0.0
    setups = []
    for (sa, sb) in _qubit_combos():
        part = Bipartition(sa, sb)
        rot_local = (local_x_rotation(sa), local_x_rotation(sb))
        rot_fourier = (fourier_mub(part.dim_a), fourier_mub(part.dim_b))
        rotations = [rot_local] if flavor == "fixed_charge" else [rot_local, rot_fourier]
        setups.append((sa, sb, 2, part, rotations))
    if flavor in ("real", "imaginary_offdiag"):
        # odd-dimension fourier case: one qutrit per side
        part3 = Bipartition(1, 1, local_dim=3)
        setups.append(((1), 1, 3, part3, [(fourier_mub(3), fourier_mub(3))]))

    rng = np.random.default_rng(20240517)
    for (sa, sb, q, part, rotations) in setups:
        if flavor == "imaginary_offdiag":
            o_a, o_b = _symmetric_observable(sa, q), _symmetric_observable(sb, q)
        else:
            o_a = subsystem_magnetization(sa, q)
            o_b = subsystem_magnetization(sb, q)
        for seed in range(n_seeds):
            n_terms = int(rng.integers(1, 21))
            kwargs = {"local_dim": q}
            if flavor == "fixed_charge":
                feasible = [m for m in range(-sa - sb, sa + sb + 1) if (sa + sb - m) % 2 == 0]
                kwargs["charge"] = int(rng.choice(feasible))
            ens = random_separable(flavor, sa, sb, n_terms, seed, **kwargs)
            state = ens.state()
            for (u_a, u_b) in rotations:
                worst = max(worst, abs(c2(state, part, o_a, o_b, u_a, u_b)))
    return CheckResult(f"separability_{flavor}", worst <= 1e-10, worst, 1e-10)


def check_single_term_rule(n_seeds: int = 40) -> CheckResult:
    """Single-product ensembles have C1 = C2 = 0 for every flavor."""
    worst = 0.0
    part = Bipartition(2, 2)
    obs = subsystem_magnetization(2)
    u = local_x_rotation(2)
    for flavor in ("real", "imaginary_offdiag", "fixed_charge", "generic"):
        for seed in range(n_seeds):
            state = random_separable(flavor, 2, 2, 1, seed).state()
            worst = max(worst, abs(connected_correlation(state, part, obs, obs)))
            worst = max(worst, abs(c2(state, part, obs, obs, u, u)))
    return CheckResult("single_term_rule", worst <= 1e-10, worst, 1e-10)


def check_rotated_mean_constancy(n_seeds: int = 100) -> CheckResult:
    """<O'> = c1 for every real state and antisymmetric observable."""
    worst = 0.0
    rng = np.random.default_rng(11)
    for sites in (1, 2, 3):
        obs = subsystem_magnetization(sites)
        u = local_x_rotation(sites)
        dim = 2**sites
        for _ in range(n_seeds):
            a = rng.normal(size=(dim, dim))
            s = a @ a.T
            rho = density_matrix((s / np.trace(s)).astype(complex))
            rotated = density_matrix(u.matrix @ rho.matrix @ u.matrix.conj().T)
            worst = max(worst, abs(diagonal_expectation(rotated, obs) - obs.offset))
    return CheckResult("rotated_mean_constancy", worst <= 1e-10, worst, 1e-10)


def check_fixed_charge_pearson(n_seeds: int = 100) -> CheckResult:
    """Pearson = -1 for any state confined to one total-magnetization sector."""
    from .models import sector_basis
    from .tensor_core import level_sums

    worst = 0.0
    zero_var_seen = 0
    rng = np.random.default_rng(7)
    for _ in range(n_seeds):
        L = int(rng.integers(2, 7))
        sa = int(rng.integers(1, L))
        feasible = [m for m in range(-L, L + 1) if (L - m) % 2 == 0]
        M = int(rng.choice(feasible))
        basis = sector_basis(L, M)
        block = rng.normal(size=(basis.dim, basis.dim)) + 1j * rng.normal(size=(basis.dim, basis.dim))
        block = block @ block.conj().T
        block /= np.trace(block).real
        full = np.zeros((2**L, 2**L), dtype=complex)
        full[np.ix_(basis.indices, basis.indices)] = block
        state = density_matrix(full)
        part = Bipartition(sa, L - sa)
        try:
            val = pearson(state, part, subsystem_magnetization(sa), subsystem_magnetization(L - sa))
        except ZeroVarianceError:
            zero_var_seen += 1
            continue
        worst = max(worst, abs(val + 1.0))
    res = CheckResult("fixed_charge_pearson", worst <= 1e-10, worst, 1e-10)
    res.details.append(f"  zero-variance sectors flagged: {zero_var_seen}")
    return res


def check_mub_structure() -> CheckResult:
    """Strict structural checks for L = 1..6 plus the 3-site worked elements."""
    worst = 0.0
    details = []
    for sites in range(1, 7):
        rep = check_mub_properties(local_x_rotation(sites), strict_local_x=True)
        worst = max(worst, rep.unitarity, rep.unbiasedness, rep.symmetry, rep.phase_integer, rep.phase_pairing)
        if not rep.sector_evenness:
            details.append(f"  sector evenness violated at L={sites}")
            worst = max(worst, 1.0)
    u3 = local_x_rotation(3)
    a = np.exp(-0.5j * np.pi)
    scale = 1.0 / (2.0 * np.sqrt(2.0))
    for (p, q, power) in ((4, 2, 1), (4, 5, 3), (4, 3, 1)):
        worst = max(worst, abs(u3.matrix[p - 1, q - 1] - scale * a**power))
    res = CheckResult("mub_structure", worst <= 1e-12 and not details, worst, 1e-12)
    res.details.extend(details)
    return res


def check_negativity_oracle(n_states: int = 200) -> CheckResult:
    """negativity == sum of |negative PT eigenvalues| on random two-qubit states."""
    rng = np.random.default_rng(3)
    part = Bipartition(1, 1)
    worst = 0.0
    for _ in range(n_states):
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        s = b @ b.conj().T
        rho = density_matrix(s / np.trace(s).real)
        lam = np.linalg.eigvalsh(partial_transpose(rho, part))
        oracle = -lam[lam < 0].sum()
        worst = max(worst, abs(negativity(rho, part) - oracle))
    return CheckResult("negativity_oracle", worst <= 1e-9, worst, 1e-9)


def check_imaginary_perturbation(n_seeds: int = 50, eps: float = 1e-3) -> CheckResult:
    """Real ensembles mixed with eps of imaginary-offdiag noise stay within the bound."""
    part = Bipartition(2, 2)
    obs = subsystem_magnetization(2)
    u = local_x_rotation(2)
    envelope = imaginary_bound(obs) * eps * 10.0
    worst = 0.0
    for seed in range(n_seeds):
        real = random_separable("real", 2, 2, 5, seed)
        noise = random_separable("imaginary_offdiag", 2, 2, 5, seed + 10_000)
        mixed = density_matrix((1.0 - eps) * real.state().matrix + eps * noise.state().matrix)
        worst = max(worst, abs(c2(mixed, part, obs, obs, u, u)))
    return CheckResult("imaginary_perturbation_envelope", worst <= envelope, worst, envelope)


def run_all(fast: bool = False) -> list[CheckResult]:
    """Run every suite; `fast` reduces the random-ensemble counts."""
    n = 25 if fast else 100
    results = [
        check_closed_form_c2(5 if fast else 9),
        check_separability("real", n),
        check_separability("imaginary_offdiag", n),
        check_separability("fixed_charge", n),
        check_single_term_rule(10 if fast else 40),
        check_rotated_mean_constancy(25 if fast else 100),
        check_fixed_charge_pearson(n),
        check_mub_structure(),
        check_negativity_oracle(50 if fast else 200),
        check_imaginary_perturbation(10 if fast else 50),
    ]
    return results
