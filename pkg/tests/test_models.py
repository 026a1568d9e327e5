import numpy as np
import pytest

from qwlab.errors import EmptySectorError
from qwlab.models import (
    ModelSpec,
    build_annni,
    build_heisenberg,
    build_pxp,
    embed_from_sector,
    project_to_sector,
    pxp_basis,
    sector_basis,
    site_operator,
)
from qwlab.tensor_core import SIGMA_X, SIGMA_Y, SIGMA_Z, hermiticity_defect


def total_sz(L):
    return sum(site_operator(SIGMA_Z, k, L) for k in range(1, L + 1))


def test_heisenberg_two_site_spectrum():
    h = build_heisenberg(ModelSpec(family="heisenberg", L=2, J=1.0))
    np.testing.assert_allclose(np.linalg.eigvalsh(h), [-1.0, -1.0, -1.0, 3.0], atol=1e-12)


@pytest.mark.parametrize("W", [0.0, 1.7])
def test_heisenberg_conserves_magnetization(W):
    h = build_heisenberg(ModelSpec(family="heisenberg", L=4, W=W))
    sz = total_sz(4)
    assert np.abs(h @ sz - sz @ h).max() <= 1e-12
    assert hermiticity_defect(h) <= 1e-12


def test_heisenberg_quasiperiodic_fields():
    W, eta = 2.0, (np.sqrt(5) - 1) / 2
    spec = ModelSpec(family="heisenberg", L=3, J=1.0, W=W)
    h = build_heisenberg(spec)
    h0 = build_heisenberg(ModelSpec(family="heisenberg", L=3, J=1.0, W=0.0))
    field = np.diag(h - h0)
    want = np.zeros(8, dtype=complex)
    for k in range(1, 4):
        want += W * np.cos(2 * np.pi * eta * k) * np.diag(site_operator(SIGMA_Z, k, 3))
    np.testing.assert_allclose(field, want, atol=1e-12)


def test_annni_classical_diagonal():
    h = build_annni(ModelSpec(family="annni", L=2, J=1.0))
    np.testing.assert_allclose(h, np.diag([-1.0, 1.0, 1.0, -1.0]), atol=1e-15)


def test_annni_pure_transverse_field():
    h = build_annni(ModelSpec(family="annni", L=3, J=0.0, h=1.0))
    np.testing.assert_allclose(np.linalg.eigvalsh(h)[0], -3.0, atol=1e-12)


def test_annni_kron_assembly_oracle():
    # independent assembly from explicit kron chains, term by term
    spec = ModelSpec(family="annni", L=4, J=1.0, kappa=0.3, h=0.5, h_z=0.001)
    L = spec.L
    want = np.zeros((16, 16), dtype=complex)
    for k in range(1, L):
        want += -spec.J * site_operator(SIGMA_Z, k, L) @ site_operator(SIGMA_Z, k + 1, L)
    for k in range(1, L - 1):
        want += spec.kappa * site_operator(SIGMA_Z, k, L) @ site_operator(SIGMA_Z, k + 2, L)
    for k in range(1, L + 1):
        want += -spec.h * site_operator(SIGMA_X, k, L) - spec.h_z * site_operator(SIGMA_Z, k, L)
    np.testing.assert_allclose(build_annni(spec), want, atol=1e-13)


def test_annni_parity_symmetry_and_tiebreak():
    flip = site_operator(SIGMA_X, 1, 4)
    for k in range(2, 5):
        flip = flip @ site_operator(SIGMA_X, k, 4)
    h = build_annni(ModelSpec(family="annni", L=4, kappa=0.4, h=0.7))
    assert np.abs(h @ flip - flip @ h).max() <= 1e-12
    h_tb = build_annni(ModelSpec(family="annni", L=4, kappa=0.4, h=0.7, h_z=1e-3))
    assert np.abs(h_tb @ flip - flip @ h_tb).max() > 1e-6


def test_annni_kappa_needs_three_sites():
    with pytest.raises(ValueError):
        build_annni(ModelSpec(family="annni", L=2, kappa=0.3))


def test_pxp_small_bases():
    basis = pxp_basis(2)
    np.testing.assert_array_equal(basis.indices, [0, 1, 2])  # strings 00, 01, 10
    assert pxp_basis(4).dim == 8  # Fibonacci F_6


@pytest.mark.parametrize("L,dim", [(2, 3), (3, 5), (4, 8), (5, 13), (6, 21), (8, 55)])
def test_pxp_fibonacci_dimensions_open(L, dim):
    assert pxp_basis(L, "open").dim == dim


@pytest.mark.parametrize("L,dim", [(4, 7), (5, 11), (6, 18), (8, 47), (10, 123)])
def test_pxp_lucas_dimensions_periodic(L, dim):
    assert pxp_basis(L, "periodic").dim == dim


def test_pxp_diagonal_limit():
    h, basis = build_pxp(ModelSpec(family="pxp", L=4, Omega=0.0, Delta=0.7))
    mags = 4 - 2 * np.array([bin(int(s)).count("1") for s in basis.indices])
    np.testing.assert_allclose(h, np.diag(0.7 * mags), atol=1e-15)


def test_pxp_kinetic_term_respects_blockade():
    h, basis = build_pxp(ModelSpec(family="pxp", L=4, Omega=1.0, Delta=0.0))
    assert hermiticity_defect(h) <= 1e-12
    # every off-diagonal element connects states one flip apart
    for i, si in enumerate(basis.indices):
        for j, sj in enumerate(basis.indices):
            if i != j and h[i, j] != 0:
                assert bin(int(si) ^ int(sj)).count("1") == 1


def test_sector_basis_examples():
    assert list(sector_basis(3, 1).indices) == [1, 2, 4]     # strings 001, 010, 100
    assert list(sector_basis(3, -1).indices) == [3, 5, 6]    # strings 011, 101, 110
    assert list(sector_basis(2, 2).indices) == [0]           # both up
    assert sector_basis(6, 0).dim == 20                      # C(6, 3)
    with pytest.raises(EmptySectorError):
        sector_basis(3, 2)  # parity-infeasible
    with pytest.raises(EmptySectorError):
        sector_basis(2, 4)


def test_project_embed_roundtrip():
    basis = sector_basis(4, 0)
    assert np.allclose(project_to_sector(np.eye(16), basis), np.eye(basis.dim))
    rng = np.random.default_rng(0)
    block = rng.normal(size=(basis.dim, basis.dim))
    full = embed_from_sector(block, basis)
    np.testing.assert_allclose(project_to_sector(full, basis), block)
    np.testing.assert_allclose(embed_from_sector(project_to_sector(full, basis), basis), full)


def test_sector_spectrum_is_subset_of_full_spectrum():
    h = build_heisenberg(ModelSpec(family="heisenberg", L=4, W=0.9))
    basis = sector_basis(4, 0)
    w_sector = np.linalg.eigvalsh(project_to_sector(h, basis))
    w_full = np.linalg.eigvalsh(h)
    for w in w_sector:
        assert np.min(np.abs(w_full - w)) <= 1e-9


def test_periodic_heisenberg_has_boundary_bond():
    h_open = build_heisenberg(ModelSpec(family="heisenberg", L=3))
    h_ring = build_heisenberg(ModelSpec(family="heisenberg", L=3, boundary="periodic"))
    diff = h_ring - h_open
    want = np.zeros((8, 8), dtype=complex)
    for op in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        want += -1.0 * site_operator(op, 3, 3) @ site_operator(op, 1, 3)
    np.testing.assert_allclose(diff, want, atol=1e-12)

