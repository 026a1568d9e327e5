"""Command-line interface: sweep, thresholds, verify, witness.

The QW_LOG environment variable (DEBUG/INFO/WARNING/ERROR) selects log
verbosity.  Sweep and threshold runs write a CSV/JSON data file and, unless
--no-plot is given, a PNG figure next to it.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .errors import QwlabError
from .sweeps import (
    load_scenario,
    load_state_file,
    run_scenario,
    threshold_map,
    write_csv,
    write_threshold_json,
    write_witness_json,
)
from .witness import evaluate_all

log = logging.getLogger("qwlab")


def _setup_logging() -> None:
    level = os.environ.get("QW_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _resolve_config(args) -> str:
    path = args.config_flag or args.config
    if not path:
        raise SystemExit("error: a scenario config is required (positional or --config)")
    return path


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", nargs="?", help="scenario config (JSON)")
    parser.add_argument("--config", dest="config_flag", help="scenario config (JSON)")
    parser.add_argument("--out", help="output path (default: derived from the config name)")
    parser.add_argument("--workers", type=int, default=1, help="worker pool size")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--cap-override", action="store_true", help="ignore desk-scale size caps")
    parser.add_argument("--no-plot", action="store_true", help="skip figure rendering")


def _cmd_sweep(args) -> int:
    path = _resolve_config(args)
    scenario = load_scenario(path)
    if args.seed is not None:
        with open(path) as fh:
            data = json.load(fh)
        data["seed"] = args.seed
        scenario = load_scenario(data)
    if args.cap_override:
        log.warning("desk-scale caps disabled; large workloads may be very slow")
    result = run_scenario(scenario, workers=args.workers, cap_override=args.cap_override)
    out = args.out or f"{scenario.name}.csv"
    write_csv(result, out)
    print(f"wrote {out} ({len(result.rows)} rows)")
    if not args.no_plot:
        from .figures import render_sweep_figure

        fig_path = os.path.splitext(out)[0] + ".png"
        render_sweep_figure(result, fig_path)
        print(f"wrote {fig_path}")
    return 0


def _cmd_thresholds(args) -> int:
    path = _resolve_config(args)
    with open(path) as fh:
        data = json.load(fh)
    from .models import ModelSpec

    model = ModelSpec.from_dict(data["model"])
    if args.cap_override:
        log.warning("desk-scale caps disabled; large workloads may be very slow")
    tm = threshold_map(
        model,
        data["beta_grid"],
        data["h_grid"],
        level=data.get("level", 1e-4),
        sites_a=data.get("bipartition", {}).get("sites_a", 0),
        workers=args.workers,
        cap_override=args.cap_override,
    )
    out = args.out or f"{data.get('name', 'thresholds')}.json"
    write_threshold_json(tm, out)
    print(f"wrote {out}")
    if not args.no_plot:
        from .figures import render_threshold_figure

        fig_path = os.path.splitext(out)[0] + ".png"
        render_threshold_figure(tm, fig_path)
        print(f"wrote {fig_path}")
    return 0


def _cmd_verify(args) -> int:
    from .verification import run_all

    results = run_all(fast=args.fast)
    failed = [r for r in results if not r.passed]
    for r in results:
        print(r.summary())
        for line in r.details:
            print(line)
    print(f"{len(results) - len(failed)}/{len(results)} property suites passed")
    return 1 if failed else 0


def _cmd_witness(args) -> int:
    scenario = load_scenario(_resolve_config(args))
    state = load_state_file(args.state_file)
    part = scenario.partition
    if state.dim != part.dim:
        raise SystemExit(
            f"error: state dimension {state.dim} does not match the config register ({part.dim})"
        )
    from .sweeps import observable_pair, rotation_pair

    o_a, o_b = observable_pair(scenario)
    u_a, u_b = rotation_pair(scenario)
    result = evaluate_all(state, part, o_a, o_b, u_a, u_b)
    text = write_witness_json(result, args.out)
    if args.out:
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def main(argv=None) -> int:
    _setup_logging()
    parser = argparse.ArgumentParser(prog="qwlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a scenario sweep and write CSV (+ figure)")
    _add_common(p_sweep)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_thr = sub.add_parser("thresholds", help="compute a detection-threshold map")
    _add_common(p_thr)
    p_thr.set_defaults(fn=_cmd_thresholds)

    p_ver = sub.add_parser("verify", help="run the theorem/property suites")
    p_ver.add_argument("--fast", action="store_true", help="reduced random-ensemble counts")
    p_ver.set_defaults(fn=_cmd_verify)

    p_wit = sub.add_parser("witness", help="witness one externally supplied state")
    p_wit.add_argument("state_file", help="density matrix file (dim header, re/im rows)")
    _add_common(p_wit)
    p_wit.set_defaults(fn=_cmd_witness)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except QwlabError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
