"""Central tolerance/cap configuration shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances. One record; every check in the library reads from here."""

    hermiticity: float = 1e-12          # max|rho - rho^dag| at construction
    trace_unit: float = 1e-10           # |Tr rho - 1|
    psd_floor: float = -1e-10           # min eigenvalue of a density matrix (on demand)
    eig_input_hermiticity: float = 1e-10
    eig_residual: float = 1e-9          # ||H V - V diag(w)||_max relative to ||H||_max
    unitarity: float = 1e-9             # generic unitarity (expm, rotations applied)
    mub_unitarity: float = 1e-12        # unitarity of constructed MUB rotations
    mub_unbiasedness: float = 1e-12     # | |U_pq|^2 - 1/d |
    phase_roundoff: float = 1e-9        # integer-phase extraction residual
    decomposition: float = 1e-10        # observable symmetry/antisymmetry residual
    witness_zero: float = 1e-10         # |C2| bound asserted on separable inputs
    imag_residue: float = 1e-10         # imaginary part tolerated in real expectations
    variance_floor: float = 1e-12       # below this a Pearson variance counts as zero
    negativity_floor: float = 1e-10     # negativities in [-floor, 0) report as 0
    lindblad_drift_per_time: float = 1e-6
    lindblad_abort_drift: float = 1e-4
    flavor_real: float = 1e-14          # max|Im rho| for the real separable flavor
    flavor_imag: float = 1e-12          # max|Re rho_offdiag| for the imaginary flavor


@dataclass(frozen=True)
class Caps:
    """Desk-scale problem-size caps enforced by the scenario runner."""

    full_space_dim: int = 4096
    full_spectrum_sites: int = 10       # full-space Gibbs / negativity workloads
    full_spectrum_sites_sector: int = 12


TOL = Tolerances()
CAPS = Caps()
