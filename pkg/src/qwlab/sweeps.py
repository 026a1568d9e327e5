"""Scenario runner: parameter sweeps, threshold maps, file formats.

A scenario is one JSON document describing a model, a state source (thermal
ensemble or dephasing evolution), a bipartition, observables, a rotation and
a sweep axis; running it yields one witness row per sweep point.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__ as _version
from .errors import DimensionOverflowError, QwlabError
from .models import (
    ModelSpec,
    build_annni,
    build_heisenberg,
    build_pxp,
    embed_from_sector,
    project_to_sector,
    sector_basis,
)
from .mub import MubRotation, fourier_mub, local_x_rotation, quench_rotation
from .state_prep import LindbladSpec, gibbs_from_eig, lindblad_evolve, neel_state
from .tensor_core import Bipartition, DensityMatrix, density_matrix, eig_hermitian
from .tolerances import CAPS
from .witness import (
    DiagonalObservable,
    WitnessResult,
    evaluate_all,
    staggered_magnetization,
    subsystem_magnetization,
)

__all__ = [
    "Scenario",
    "SweepResult",
    "run_scenario",
    "ThresholdMap",
    "threshold_map",
    "load_scenario",
    "load_state_file",
    "observable_pair",
    "rotation_pair",
    "write_csv",
    "write_witness_json",
    "write_threshold_json",
]

_SWEEPABLE_MODEL_PARAMS = ("W", "J", "kappa", "h", "h_z", "Omega", "Delta")


@dataclass(frozen=True)
class Scenario:
    """One sweep configuration (see configs/ for examples)."""

    name: str
    model: ModelSpec
    state_kind: str                      # gibbs | lindblad
    betas: tuple[float, ...] = ()
    lindblad: LindbladSpec | None = None
    sites_a: int = 0                     # 0 means half chain
    observable: str = "magnetization"    # magnetization | staggered
    rotation: dict = field(default_factory=lambda: {"kind": "local_x"})
    sweep_name: str = "beta"
    sweep_values: tuple[float, ...] = ()
    seed: int = 0
    comment: str = ""

    def __post_init__(self):
        vals = np.asarray(self.sweep_values, dtype=float)
        if len(vals) == 0:
            raise ValueError("sweep needs at least one value")
        if len(vals) > 1 and not (np.all(np.diff(vals) > 0) or np.all(np.diff(vals) < 0)):
            raise ValueError("sweep values must be strictly monotone")
        if self.state_kind not in ("gibbs", "lindblad"):
            raise ValueError(f"unknown state source {self.state_kind!r}")
        if self.state_kind == "gibbs" and self.sweep_name != "beta" and len(self.betas) != 1:
            raise ValueError("parameter sweeps need exactly one beta")
        if self.sweep_name == "t" and self.state_kind != "lindblad":
            raise ValueError("time sweeps need the lindblad state source")
        if self.sweep_name not in ("beta", "t") and self.sweep_name not in _SWEEPABLE_MODEL_PARAMS:
            raise ValueError(f"cannot sweep over {self.sweep_name!r}")
        if self.observable not in ("magnetization", "staggered"):
            raise ValueError(f"unknown observable {self.observable!r}")

    @property
    def partition(self) -> Bipartition:
        sa = self.sites_a or self.model.L // 2
        return Bipartition(sa, self.model.L - sa)

    def metadata(self) -> dict:
        return {
            "name": self.name,
            "model": self.model.to_dict(),
            "state_source": (
                {"kind": "gibbs", "betas": list(self.betas)}
                if self.state_kind == "gibbs"
                else {"kind": "lindblad", **self.lindblad.to_dict()}
            ),
            "bipartition": {"sites_a": self.partition.sites_a, "sites_b": self.partition.sites_b},
            "observable": self.observable,
            "rotation": self.rotation,
            "sweep": {"name": self.sweep_name, "values": list(self.sweep_values)},
            "seed": self.seed,
            "version": _version,
        }


def load_scenario(path_or_dict) -> Scenario:
    """Build a Scenario from a JSON file path or an already-parsed dict."""
    if isinstance(path_or_dict, (str, os.PathLike)):
        with open(path_or_dict) as fh:
            data = json.load(fh)
    else:
        data = dict(path_or_dict)
    source = data["state_source"]
    kind = source["kind"]
    lind = None
    betas: tuple[float, ...] = ()
    if kind == "gibbs":
        betas = tuple(source.get("betas", ()))
    elif kind == "lindblad":
        lind = LindbladSpec.from_dict(source)
    sweep = data["sweep"]
    if kind == "lindblad" and sweep["name"] == "t" and "values" not in sweep:
        sweep = {**sweep, "values": list(lind.sample_times)}
    if kind == "gibbs" and sweep["name"] == "beta" and "values" not in sweep:
        sweep = {**sweep, "values": list(betas)}
    return Scenario(
        name=data.get("name", "unnamed"),
        model=ModelSpec.from_dict(data["model"]),
        state_kind=kind,
        betas=betas,
        lindblad=lind,
        sites_a=data.get("bipartition", {}).get("sites_a", 0),
        observable=data.get("observable", "magnetization"),
        rotation=data.get("rotation", {"kind": "local_x"}),
        sweep_name=sweep["name"],
        sweep_values=tuple(sweep["values"]),
        seed=data.get("seed", 0),
        comment=data.get("comment", ""),
    )


def observable_pair(scenario: Scenario) -> tuple[DiagonalObservable, DiagonalObservable]:
    part = scenario.partition
    if scenario.observable == "magnetization":
        return subsystem_magnetization(part.sites_a), subsystem_magnetization(part.sites_b)
    return staggered_magnetization(part.sites_a), staggered_magnetization(part.sites_b)


def rotation_pair(scenario: Scenario) -> tuple[MubRotation, MubRotation]:
    part = scenario.partition
    spec = scenario.rotation
    kind = spec.get("kind", "local_x")
    if kind == "local_x":
        return local_x_rotation(part.sites_a), local_x_rotation(part.sites_b)
    if kind == "fourier":
        return fourier_mub(part.dim_a), fourier_mub(part.dim_b)
    if kind == "quench":
        h = spec["h"]
        k = int(spec.get("k", 0))
        return quench_rotation(part.sites_a, h, k), quench_rotation(part.sites_b, h, k)
    raise ValueError(f"unknown rotation kind {kind!r}")


def _check_caps(model: ModelSpec, cap_override: bool) -> None:
    dim = 2**model.L
    if dim > CAPS.full_space_dim and not cap_override:
        raise DimensionOverflowError(
            f"full-space dimension {dim} exceeds cap {CAPS.full_space_dim}"
        )
    limit = (
        CAPS.full_spectrum_sites_sector
        if (model.sector is not None or model.family == "pxp")
        else CAPS.full_spectrum_sites
    )
    if model.L > limit and not cap_override:
        raise DimensionOverflowError(
            f"full-spectrum workload at L={model.L} exceeds cap {limit} "
            "(pass cap_override to proceed)"
        )


def _thermal_eig(model: ModelSpec):
    """Eigendecomposition of the (possibly sector-restricted) Hamiltonian.

    Returns (w, v, embed) where embed maps a sector state matrix back into the
    full register space (identity for unrestricted models).
    """
    if model.family == "pxp":
        h_sector, basis = build_pxp(model)
        w, v = eig_hermitian(h_sector)
        return w, v, lambda m: embed_from_sector(m, basis, model.L)
    h = build_heisenberg(model) if model.family == "heisenberg" else build_annni(model)
    if model.sector is not None:
        basis = sector_basis(model.L, model.sector)
        w, v = eig_hermitian(project_to_sector(h, basis))
        return w, v, lambda m: embed_from_sector(m, basis, model.L)
    w, v = eig_hermitian(h)
    return w, v, lambda m: m


def _thermal_state(model: ModelSpec, beta: float) -> DensityMatrix:
    w, v, embed = _thermal_eig(model)
    return density_matrix(embed(gibbs_from_eig(w, v, beta).matrix))


@dataclass(frozen=True)
class SweepResult:
    """Ordered witness rows for one scenario run."""

    scenario: Scenario
    axis_values: tuple[float, ...]
    rows: tuple[WitnessResult, ...]

    @property
    def axis_name(self) -> str:
        return self.scenario.sweep_name

    def column(self, name: str) -> np.ndarray:
        i = WitnessResult.COLUMNS.index(name)
        return np.array([r.as_row()[i] for r in self.rows])


def run_scenario(scenario: Scenario, workers: int = 1, cap_override: bool = False) -> SweepResult:
    """Evaluate every sweep point; rows come back in sweep order."""
    _check_caps(scenario.model, cap_override)
    part = scenario.partition
    o_a, o_b = observable_pair(scenario)
    u_a, u_b = rotation_pair(scenario)

    def witness(state) -> WitnessResult:
        return evaluate_all(state, part, o_a, o_b, u_a, u_b)

    values = scenario.sweep_values
    if scenario.state_kind == "lindblad":
        if tuple(scenario.lindblad.sample_times) != tuple(values):
            raise ValueError("time sweep values must equal the lindblad sample times")
        model = scenario.model
        h = build_heisenberg(model) if model.family == "heisenberg" else build_annni(model)
        samples = lindblad_evolve(neel_state(model.L), h, scenario.lindblad)
        states = [state for (_, state) in samples]
    elif scenario.sweep_name == "beta":
        w, v, embed = _thermal_eig(scenario.model)

        def state_at(beta):
            return density_matrix(embed(gibbs_from_eig(w, v, beta).matrix))

        states = _map_ordered(state_at, values, workers)
    else:
        beta = scenario.betas[0]

        def state_at(x):
            model = scenario.model.replace(**{scenario.sweep_name: float(x)})
            return _thermal_state(model, beta)

        states = _map_ordered(state_at, values, workers)

    rows = _map_ordered(witness, states, workers)
    return SweepResult(scenario=scenario, axis_values=tuple(values), rows=tuple(rows))


def _map_ordered(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# threshold maps (detection cutoffs calibrated against the negativity contour)


@dataclass(frozen=True)
class ThresholdMap:
    """|C2| detection thresholds on a (beta, h) grid, calibrated by N < level."""

    beta_grid: tuple[float, ...]
    h_grid: tuple[float, ...]
    c2_grid: np.ndarray = field(repr=False)      # shape (n_beta, n_h), |C2|
    n_grid: np.ndarray = field(repr=False)       # negativity
    c2_threshold_per_beta: np.ndarray = field(repr=False)
    beta_threshold_per_h: np.ndarray = field(repr=False)
    level: float = 1e-4


def threshold_map(
    model: ModelSpec,
    beta_grid,
    h_grid,
    level: float = 1e-4,
    sites_a: int = 0,
    workers: int = 1,
    cap_override: bool = False,
) -> ThresholdMap:
    """Evaluate |C2| and N over the grid and extract detection thresholds.

    The per-beta threshold is the largest |C2| found where N < level (0 when
    that region is empty), i.e. the value one must exceed before claiming
    entanglement at that temperature.  The per-h threshold is the smallest
    grid beta from which N >= level holds for every larger grid beta, so a
    zero cutoff detects exactly (NaN when even the coldest point is below
    the contour).
    """
    _check_caps(model, cap_override)
    betas = tuple(float(b) for b in beta_grid)
    hs = tuple(float(h) for h in h_grid)
    if not betas or not hs:
        raise ValueError("grids must be nonempty")
    sa = sites_a or model.L // 2
    part = Bipartition(sa, model.L - sa)
    o_a = subsystem_magnetization(part.sites_a)
    o_b = subsystem_magnetization(part.sites_b)
    u_a = local_x_rotation(part.sites_a)
    u_b = local_x_rotation(part.sites_b)

    def column_for_h(h):
        w, v, embed = _thermal_eig(model.replace(h=h))
        c2_col = np.empty(len(betas))
        n_col = np.empty(len(betas))
        for i, beta in enumerate(betas):
            state = density_matrix(embed(gibbs_from_eig(w, v, beta).matrix))
            res = evaluate_all(state, part, o_a, o_b, u_a, u_b)
            c2_col[i] = abs(res.c2)
            n_col[i] = res.negativity
        return c2_col, n_col

    columns = _map_ordered(column_for_h, hs, workers)
    c2_grid = np.stack([c for (c, _) in columns], axis=1)
    n_grid = np.stack([n for (_, n) in columns], axis=1)

    c2_th = np.zeros(len(betas))
    for i in range(len(betas)):
        below = n_grid[i] < level
        if below.any():
            c2_th[i] = max(0.0, c2_grid[i][below].max())
    beta_th = np.full(len(hs), np.nan)
    for j in range(len(hs)):
        above = n_grid[:, j] >= level
        k = len(betas)
        while k > 0 and above[k - 1]:
            k -= 1
        if k < len(betas):
            beta_th[j] = betas[k]
    return ThresholdMap(
        beta_grid=betas,
        h_grid=hs,
        c2_grid=c2_grid,
        n_grid=n_grid,
        c2_threshold_per_beta=c2_th,
        beta_threshold_per_h=beta_th,
        level=level,
    )


# ---------------------------------------------------------------------------
# file formats


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_csv(result: SweepResult, path: str, columns=None) -> None:
    """Write one row per sweep point, with the scenario echoed as # comments."""
    columns = tuple(columns or WitnessResult.COLUMNS)
    lines = [f"# {line}" for line in json.dumps(result.scenario.metadata(), sort_keys=True, indent=1).splitlines()]
    lines.append(",".join((result.axis_name, *columns)))
    idx = [WitnessResult.COLUMNS.index(c) for c in columns]
    for x, row in zip(result.axis_values, result.rows):
        vals = row.as_row()
        lines.append(",".join([_fmt(x), *(_fmt(vals[i]) for i in idx)]))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_witness_json(res: WitnessResult, path: str | None = None) -> str:
    payload = {
        "C1": res.c1,
        "C2": res.c2,
        "pearson_O": res.pearson_o,
        "pearson_Oprime": res.pearson_oprime,
        "maccone_lhs": res.maccone_lhs,
        "maccone_entangled": res.maccone_entangled,
        "negativity": res.negativity,
        "flags": list(res.flags),
    }
    text = json.dumps(payload, sort_keys=True, indent=1, allow_nan=True)
    if path:
        _atomic_write(path, text + "\n")
    return text


def write_threshold_json(tm: ThresholdMap, path: str | None = None) -> str:
    payload = {
        "beta_grid": list(tm.beta_grid),
        "h_grid": list(tm.h_grid),
        "level": tm.level,
        "abs_c2_grid": [[float(v) for v in row] for row in tm.c2_grid],
        "negativity_grid": [[float(v) for v in row] for row in tm.n_grid],
        "c2_threshold_per_beta": [float(v) for v in tm.c2_threshold_per_beta],
        "beta_threshold_per_h": [None if math.isnan(v) else float(v) for v in tm.beta_threshold_per_h],
    }
    text = json.dumps(payload, sort_keys=True, indent=1)
    if path:
        _atomic_write(path, text + "\n")
    return text


def load_state_file(path: str) -> DensityMatrix:
    """Read the `witness` input format: a dim header then dim^2 're im' rows."""
    with open(path) as fh:
        tokens = fh.read().split()
    if not tokens:
        raise QwlabError("empty state file")
    dim = int(tokens[0])
    need = 1 + 2 * dim * dim
    if len(tokens) != need:
        raise QwlabError(f"state file should have {need} numbers, found {len(tokens)}")
    values = np.array(tokens[1:], dtype=float)
    mat = (values[0::2] + 1j * values[1::2]).reshape(dim, dim)
    state = density_matrix(mat)
    state.check_psd()
    return state


def write_state_file(state: DensityMatrix, path: str) -> None:
    lines = [str(state.dim)]
    for entry in state.matrix.reshape(-1):
        lines.append(f"{float(entry.real)!r} {float(entry.imag)!r}")
    _atomic_write(path, "\n".join(lines) + "\n")
