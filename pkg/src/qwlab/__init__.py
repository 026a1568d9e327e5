"""qwlab: exact-diagonalization lab for one-observable entanglement detection.

Rotate a bipartite spin state into a special mutually unbiased basis, measure
a single connected correlation (C2), and certify entanglement; validated
against partial-transpose negativity and the two-basis Pearson criterion on
Heisenberg, transverse-Ising/ANNNI and PXP chains.
"""

__version__ = "0.1.0"

from .tensor_core import (  # noqa: F401
    Bipartition,
    DensityMatrix,
    density_matrix,
    eig_hermitian,
    expm_unitary,
    kron,
    partial_trace,
    partial_transpose,
    trace_norm_hermitian,
)
from .models import (  # noqa: F401
    ModelSpec,
    SectorBasis,
    build_annni,
    build_heisenberg,
    build_pxp,
    embed_from_sector,
    project_to_sector,
    pxp_basis,
    sector_basis,
)
from .state_prep import (  # noqa: F401
    LindbladSpec,
    SeparableEnsemble,
    gibbs,
    lindblad_evolve,
    neel_state,
    random_separable,
    two_qubit_family,
)
from .mub import (  # noqa: F401
    MubRotation,
    check_mub_properties,
    fourier_mub,
    imaginary_bound,
    local_x_rotation,
    quench_rotation,
    quench_time,
    rotate_state,
)
from .witness import (  # noqa: F401
    DiagonalObservable,
    WitnessResult,
    c1_family_check,
    c2,
    connected_correlation,
    diagonal_observable,
    evaluate_all,
    maccone_criterion,
    negativity,
    pearson,
    subsystem_magnetization,
)
from .sweeps import (  # noqa: F401
    Scenario,
    SweepResult,
    ThresholdMap,
    load_scenario,
    run_scenario,
    threshold_map,
)
