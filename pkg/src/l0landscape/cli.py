"""Command-line front end: instance I/O, experiment orchestration, reports.

Exit codes: 0 on success, 2 on invalid input (bad flags, unreadable or
malformed instance files, violated instance invariants), 1 on internal
errors.  Output is deterministic byte-for-byte for fixed inputs and seeds;
pass ``--timestamp`` to include a wall-clock field.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import sys

from .errors import ValidationError
from .model import load_instance
from .enumeration import enumerate_stationary, run_genericity_experiment
from .levelsets import sweep_levels
from .stability import StabilityProbeConfig, default_probe_epsilon, probe_strong_stability
from .iht import iht_solve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="l0landscape",
        description="Landscape analysis for sparsity-constrained least squares.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, instance=True):
        if instance:
            p.add_argument("--instance", required=True, help="instance file (JSON or CSV)")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--zero-tol", type=float, dest="zero_tol")
        p.add_argument("--stat-tol", type=float, dest="stat_tol")
        p.add_argument("--rank-tol", type=float, dest="rank_tol")
        p.add_argument("--threads", type=int, default=1, help="worker thread cap (default 1)")
        p.add_argument("--timestamp", action="store_true", help="include a timestamp field")

    p_analyze = sub.add_parser("analyze", help="enumerate and classify all stationary points")
    add_common(p_analyze)
    p_analyze.add_argument("--csv", action="store_true", help="emit a flat point table")

    p_reg = sub.add_parser("regularity", help="check s-regularity of the sensing matrix")
    add_common(p_reg)

    p_sweep = sub.add_parser("sweep", help="component counts across stationary levels")
    add_common(p_sweep)
    p_sweep.add_argument("--csv", action="store_true", help="emit a flat interval table")

    p_probe = sub.add_parser("probe", help="strong-stability probe for one stationary point")
    add_common(p_probe)
    p_probe.add_argument("--seed", type=int, required=True)
    p_probe.add_argument("--point", type=int, default=0, help="point index from analyze order")
    p_probe.add_argument("--epsilon", type=float, help="locality radius (default: data driven)")
    p_probe.add_argument("--delta", type=float, default=1e-3, help="data radius (default 1e-3)")
    p_probe.add_argument("--trials", type=int, default=50)
    p_probe.add_argument("--paper-mode", action="store_true", dest="paper_mode",
                         help="deterministic all-ones measurement perturbation")

    p_gen = sub.add_parser("generic", help="nondegeneracy statistics over Gaussian data")
    add_common(p_gen, instance=False)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--s", type=int, required=True)
    p_gen.add_argument("--trials", type=int, default=100)
    p_gen.add_argument("--seed", type=int, required=True)

    p_iht = sub.add_parser("iht", help="run iterative hard thresholding from zero")
    add_common(p_iht)

    return parser


def _tol_overrides(args) -> dict:
    return {
        "zero_tol": getattr(args, "zero_tol", None),
        "stat_tol": getattr(args, "stat_tol", None),
        "rank_tol": getattr(args, "rank_tol", None),
    }


def _load(args):
    try:
        return load_instance(args.instance, _tol_overrides(args))
    except OSError as exc:
        raise ValidationError(f"cannot read instance file: {exc}") from exc


def _points_csv(report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    n = len(report.points[0].point.x) if report.points else 0
    writer.writerow(["index", "value", "kind", "support", "nd1", "nd2"] +
                    [f"x{i + 1}" for i in range(n)])
    for i, p in enumerate(report.points):
        writer.writerow(
            [i, repr(p.value), p.kind.value,
             ";".join(str(j + 1) for j in p.point.support),
             p.cert.nd1_holds, p.cert.nd2_holds]
            + [repr(float(v)) for v in p.point.x]
        )
    return buf.getvalue()


def _intervals_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lo", "hi", "q"])
    for iv in result.intervals:
        writer.writerow([repr(iv.lo), repr(iv.hi), iv.q])
    return buf.getvalue()


def _dispatch(args):
    """Return (payload_dict, csv_text_or_None) for the selected command."""
    if args.command == "analyze":
        report = enumerate_stationary(_load(args), threads=args.threads)
        morse = dict(report.to_dict())
        morse["morse_applicable"] = not report.hypothesis_violated
        return morse, _points_csv(report) if args.csv else None
    if args.command == "regularity":
        inst = _load(args)
        report = enumerate_stationary(inst, threads=args.threads)
        witness = report.s_regularity_witness
        return {
            "s_regular": report.s_regular,
            "witness": None if witness is None else [i + 1 for i in witness],
        }, None
    if args.command == "sweep":
        inst = _load(args)
        report = enumerate_stationary(inst, threads=args.threads)
        result = sweep_levels(inst, report, threads=args.threads)
        return result.to_dict(), _intervals_csv(result) if args.csv else None
    if args.command == "probe":
        inst = _load(args)
        report = enumerate_stationary(inst, threads=args.threads)
        if not 0 <= args.point < len(report.points):
            raise ValidationError(
                f"point index {args.point} out of range (found {len(report.points)} points)"
            )
        target = report.points[args.point]
        epsilon = args.epsilon if args.epsilon is not None else default_probe_epsilon(report)
        cfg = StabilityProbeConfig(
            epsilon=epsilon,
            delta=args.delta,
            trials=args.trials,
            seed=args.seed,
            paper_mode=args.paper_mode,
        )
        probe = probe_strong_stability(inst, target, cfg, threads=args.threads)
        payload = probe.to_dict()
        payload["point_index"] = args.point
        payload["point"] = {
            "x": [float(v) for v in target.point.x],
            "support": [i + 1 for i in target.point.support],
            "kind": target.kind.value,
        }
        return payload, None
    if args.command == "generic":
        report = run_genericity_experiment(
            args.m, args.n, args.s, args.trials, args.seed, threads=args.threads
        )
        return report.to_dict(), None
    if args.command == "iht":
        inst = _load(args)
        result = iht_solve(inst, [0.0] * inst.n)
        return {
            "x": [float(v) for v in result.x.x],
            "support": [i + 1 for i in result.x.support],
            "iterations": result.iterations,
            "converged": result.converged,
            "final_step": result.final_step,
            "is_m_stationary": result.is_m_stationary,
        }, None
    raise ValidationError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, csv_text = _dispatch(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    if csv_text is not None:
        text = csv_text
    else:
        if args.timestamp:
            payload["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
