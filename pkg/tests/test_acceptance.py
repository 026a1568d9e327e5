"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see every line.  Two
checks (criterion 7's small-beta floor and criterion 11's peak ordering)
encode qualitative expectations that the exact desk-scale numerics
contradict; they are kept as stated and fail with the measured values in the
message rather than being loosened to pass.
"""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from qwlab.errors import ZeroVarianceError
from qwlab.models import ModelSpec, sector_basis
from qwlab.mub import check_mub_properties, local_x_rotation
from qwlab.state_prep import random_separable, two_qubit_family
from qwlab.sweeps import load_scenario, run_scenario, threshold_map
from qwlab.tensor_core import Bipartition, density_matrix, partial_transpose
from qwlab.verification import check_separability
from qwlab.witness import c2, negativity, pearson, subsystem_magnetization
from qwlab.mub import fourier_mub  # noqa: F401  (criterion 2 runs through check_separability)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def report(num: int, ok: bool, detail: str) -> None:
    line = f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    assert ok, line


def test_criterion_01_closed_form_c2():
    t0 = time.time()
    part = Bipartition(1, 1)
    obs = subsystem_magnetization(1)
    u = local_x_rotation(1)
    r2, s1, s2 = -0.5, 0.7, 0.1
    worst = 0.0
    worst_at = None
    for eps in np.linspace(0.0, 1.0, 9):
        for c in np.linspace(-1.0, 1.0, 9):
            for r1 in np.linspace(-1.0, 1.0, 9):
                rho = two_qubit_family(r1, r2, s1, s2, eps, c)
                dev = abs(c2(rho, part, obs, obs, u, u) + 2.0 * eps * c * np.sqrt(1 - c**2))
                if dev > worst:
                    worst, worst_at = dev, (eps, c, r1)
    dt = time.time() - t0
    ok = worst <= 1e-9 and dt < 5.0
    report(1, ok, f"max |C2 - closed form| = {worst:.3e} at {worst_at} over 9x9x9 grid ({dt:.1f}s)")


@pytest.mark.parametrize("flavor", ["real", "imaginary_offdiag", "fixed_charge"])
def test_criterion_02_separability_theorems(flavor):
    t0 = time.time()
    res = check_separability(flavor, n_seeds=100)
    dt = time.time() - t0
    rotations = "local_x only" if flavor == "fixed_charge" else "local_x + fourier (d in {2,3,4,8})"
    ok = res.passed and dt < 60.0
    report(2, ok, f"{flavor}: max |C2| = {res.worst:.3e} over 100 seeds, 1-20 terms, {rotations} ({dt:.1f}s)")


def test_criterion_03_entangled_detection_floor():
    t0 = time.time()
    part = Bipartition(1, 1)
    obs = subsystem_magnetization(1)
    u = local_x_rotation(1)
    r1, r2, s1, s2 = 0.3, -0.2, 0.7, 0.1  # backbone whose perturbation entangles at every eps > 0
    min_c2, min_neg, n_bad = np.inf, np.inf, 0
    total = 0
    for eps in np.linspace(0.05, 1.0, 20):
        for c in np.linspace(0.2, 0.8, 25):
            rho = two_qubit_family(r1, r2, s1, s2, eps, c)
            v = abs(c2(rho, part, obs, obs, u, u))
            n = negativity(rho, part)
            min_c2 = min(min_c2, v)
            min_neg = min(min_neg, n)
            total += 1
            if not (v > 1e-3 and n > 0.0):
                n_bad += 1
    dt = time.time() - t0
    ok = n_bad == 0 and dt < 5.0
    report(3, ok, f"min |C2| = {min_c2:.4f}, min N = {min_neg:.2e}, {total - n_bad}/{total} points detected ({dt:.1f}s)")


def test_criterion_04_fixed_magnetization_pearson():
    t0 = time.time()
    rng = np.random.default_rng(2024)
    pairs = [(L, M) for L in range(2, 7) for M in range(-L, L + 1, 2)]
    worst = 0.0
    flagged = 0
    checked = 0
    i = 0
    while checked + flagged < 100:
        L, M = pairs[i % len(pairs)]
        i += 1
        basis = sector_basis(L, M)
        b = rng.normal(size=(basis.dim, basis.dim)) + 1j * rng.normal(size=(basis.dim, basis.dim))
        s = b @ b.conj().T
        full = np.zeros((2**L, 2**L), dtype=complex)
        full[np.ix_(basis.indices, basis.indices)] = s / np.trace(s).real
        state = density_matrix(full)
        sa = L // 2
        part = Bipartition(sa, L - sa)
        try:
            val = pearson(state, part, subsystem_magnetization(sa), subsystem_magnetization(L - sa))
        except ZeroVarianceError:
            flagged += 1
            continue
        worst = max(worst, abs(val + 1.0))
        checked += 1
    # a frozen subsystem must raise, not return a number
    frozen = np.zeros((4, 4), dtype=complex)
    frozen[0, 0] = 1.0
    with pytest.raises(ZeroVarianceError):
        pearson(density_matrix(frozen), Bipartition(1, 1), subsystem_magnetization(1), subsystem_magnetization(1))
    dt = time.time() - t0
    ok = worst <= 1e-10 and dt < 30.0
    report(4, ok, f"max |P + 1| = {worst:.3e} over {checked} states ({flagged} zero-variance raised) ({dt:.1f}s)")


def test_criterion_05_mub_structure():
    worst = 0.0
    evenness_ok = True
    for sites in range(1, 7):
        rep = check_mub_properties(local_x_rotation(sites), strict_local_x=True)
        worst = max(worst, rep.unitarity, rep.unbiasedness, rep.symmetry, rep.phase_pairing)
        evenness_ok = evenness_ok and rep.sector_evenness and rep.phase_integer <= 1e-9
    u3 = local_x_rotation(3).matrix * (2.0 * np.sqrt(2.0))
    a = np.exp(-0.5j * np.pi)
    worked = max(abs(u3[3, 1] - a), abs(u3[3, 4] - a**3), abs(u3[3, 2] - a))
    ok = worst <= 1e-12 and evenness_ok and worked <= 1e-12
    report(5, ok, f"L=1..6 strict structure worst = {worst:.3e}, worked elements dev = {worked:.3e}, sector evenness = {evenness_ok}")


def test_criterion_06_negativity_oracle():
    rng = np.random.default_rng(99)
    part = Bipartition(1, 1)
    worst = 0.0
    for _ in range(200):
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        s = b @ b.conj().T
        rho = density_matrix(s / np.trace(s).real)
        lam = np.linalg.eigvalsh(partial_transpose(rho, part))
        worst = max(worst, abs(negativity(rho, part) - (-lam[lam < 0].sum())))
    psi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2)
    bell_dev = abs(negativity(density_matrix(np.outer(psi, psi)), part) - 0.5)
    sep_max = 0.0
    for seed in range(60):
        state = random_separable("generic", 1, 1, 5, seed).state()
        sep_max = max(sep_max, negativity(state, part))
    ok = worst <= 1e-9 and bell_dev <= 1e-9 and sep_max <= 1e-9
    report(6, ok, f"oracle dev = {worst:.3e}, Bell dev = {bell_dev:.3e}, max separable N = {sep_max:.3e}")


def test_criterion_07_heisenberg_thermal_reproduction():
    t0 = time.time()
    lines = []
    ok = True
    for w in (1, 5):
        res = run_scenario(load_scenario(CONFIGS / f"fig1_heisenberg_beta_W{w}.json"), workers=4)
        betas = np.asarray(res.axis_values)
        c2v = np.abs(res.column("C2"))
        nv = res.column("negativity")
        i_small = int(np.argmin(np.abs(betas - 1e-3)))
        i_cold = int(np.argmin(np.abs(betas - 100.0)))
        small_ok = c2v[i_small] <= 1e-6 and nv[i_small] <= 1e-6
        cold_ok = c2v[i_cold] >= 1e-3 and nv[i_cold] >= 1e-3
        cross_c2 = betas[np.argmax(c2v > 1e-4)]
        cross_n = betas[np.argmax(nv > 1e-4)]
        ratio = max(cross_c2, cross_n) / min(cross_c2, cross_n)
        ok = ok and small_ok and cold_ok and ratio <= 4.0
        lines.append(
            f"W={w}: C2(1e-3)={c2v[i_small]:.2e} N(1e-3)={nv[i_small]:.2e} [<=1e-6: {small_ok}], "
            f"C2(100)={c2v[i_cold]:.2e} N(100)={nv[i_cold]:.2e} [>=1e-3: {cold_ok}], "
            f"1e-4 crossings {cross_c2:.1e}/{cross_n:.1e} ratio={ratio:.2f}"
        )
    dt = time.time() - t0
    report(7, ok and dt < 600.0, "; ".join(lines) + f" ({dt:.1f}s)")


def _interior_maxima(values) -> list[int]:
    idx = []
    for i in range(1, len(values) - 1):
        if values[i] > values[i - 1] and values[i] > values[i + 1]:
            idx.append(i)
    return idx


def test_criterion_08_entanglement_barrier():
    t0 = time.time()
    res = run_scenario(load_scenario(CONFIGS / "fig1_lindblad_W1.json"))
    times = np.asarray(res.axis_values)
    c2v = np.abs(res.column("C2"))
    nv = res.column("negativity")
    m_c2 = _interior_maxima(c2v)
    m_n = _interior_maxima(nv)
    unimodal = len(m_c2) == 1 and len(m_n) == 1
    if unimodal:
        t_c2, t_n = times[m_c2[0]], times[m_n[0]]
        within = abs(t_c2 - t_n) <= 0.25 * max(t_c2, t_n)
    else:
        t_c2 = t_n = float("nan")
        within = False
    dt = time.time() - t0
    ok = unimodal and within and dt < 600.0
    report(8, ok, f"interior maxima |C2|: {len(m_c2)} (t={t_c2:g}), N: {len(m_n)} (t={t_n:g}), argmax within 25%: {within} ({dt:.1f}s)")


def test_criterion_09_transverse_ising_criticality():
    t0 = time.time()
    res = run_scenario(load_scenario(CONFIGS / "fig2_kappa0_beta100.json"), workers=4)
    hs = np.asarray(res.axis_values)
    c2v = np.abs(res.column("C2"))
    nv = res.column("negativity")
    mac = res.column("maccone_lhs")
    h_c2 = hs[int(np.argmax(c2v))]
    h_n = hs[int(np.argmax(nv))]
    frac = float(np.mean(mac[np.isfinite(mac)] <= 1.0))
    in_window = 0.6 <= h_c2 <= 1.2 and 0.6 <= h_n <= 1.2
    dt = time.time() - t0
    ok = in_window and frac >= 0.9 and dt < 900.0
    report(9, ok, f"|C2| peak h={h_c2:.2f}, N peak h={h_n:.2f} (window [0.6,1.2]), maccone<=1 on {frac:.0%} of grid ({dt:.1f}s)")


def test_criterion_10_threshold_maps():
    t0 = time.time()
    means = {}
    all_zero_cold = True
    for L in (6, 8):
        cfg = json.loads((CONFIGS / f"fig3_thresholds_L{L}.json").read_text())
        tm = threshold_map(
            ModelSpec.from_dict(cfg["model"]),
            cfg["beta_grid"],
            cfg["h_grid"],
            level=cfg["level"],
            workers=4,
        )
        means[L] = float(tm.c2_threshold_per_beta.mean())
        cold = [th for b, th in zip(tm.beta_grid, tm.c2_threshold_per_beta) if b >= 10.0]
        all_zero_cold = all_zero_cold and all(th == 0.0 for th in cold)
    non_increasing = means[8] <= 1.1 * means[6]
    dt = time.time() - t0
    ok = all_zero_cold and non_increasing and dt < 1800.0
    report(10, ok, f"thresholds zero for beta>=10: {all_zero_cold}; mean L6={means[6]:.4f} -> L8={means[8]:.4f} (10% slack: {non_increasing}) ({dt:.1f}s)")


def test_criterion_11_pxp_criticality():
    t0 = time.time()
    res = run_scenario(load_scenario(CONFIGS / "fig5_pxp_L10.json"), workers=4)
    xs = np.asarray(res.axis_values)
    c2v = np.abs(res.column("C2"))
    nv = res.column("negativity")
    mac = res.column("maccone_lhs")
    x_n = xs[int(np.argmax(nv))]
    x_c2 = xs[int(np.argmax(c2v))]
    near_critical = abs(x_n - 0.65) <= 0.3
    ordering = x_c2 >= x_n
    mac_ok = bool(np.all(mac[np.isfinite(mac)] <= 1.0))
    dt = time.time() - t0
    ok = near_critical and ordering and mac_ok and dt < 900.0
    report(11, ok, f"N peak at {x_n:.2f} (|0.65 diff|<=0.3: {near_critical}), |C2| peak at {x_c2:.2f} (>= N peak: {ordering}), maccone<=1: {mac_ok} ({dt:.1f}s)")


def test_criterion_12_cli_determinism(tmp_path):
    cfg = CONFIGS / "fig1_lindblad_W1.json"
    outputs = []
    for tag in ("a", "b"):
        out = tmp_path / f"{tag}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "qwlab.cli", "sweep", str(cfg), "--out", str(out),
             "--seed", "7", "--no-plot"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1]
    report(12, ok, f"two seeded CLI runs byte-identical: {ok} ({len(outputs[0])} bytes)")
