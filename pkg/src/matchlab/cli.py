"""Command-line front end.

Verbs: gen, process, sweep, counterexample, cut-census, atoms, verify.
Output goes to --out when given (with a reproducibility manifest written
alongside as <out>.manifest.json), otherwise to stdout: a table on a TTY,
CSV when piped, JSON with --json. Exit codes: 0 success, 1 assertion or
verification failure, 2 usage error.

Every experiment verb requires --seed; results are bit-identical across
reruns and across --jobs values.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__, generators, verify
from .cuts import Cut, CutSpace, ThresholdConfig, census_rows
from .experiments import (
    ExperimentConfig,
    EventSpec,
    NO_ISOLATED,
    PERFECT_MATCHING,
    estimate_hitting_equality,
    parallel_calibration,
    series_calibration,
    sweep as run_sweep,
)
from .graphs import format_edge_list, load_graph
from .rng import RandomStream


def _manifest(verb: str, **config) -> dict:
    return {
        "command": verb,
        "config": config,
        "versions": {
            "matchlab": __version__,
            "numpy": np.__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
        },
    }


def _rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _rows_to_table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    cols = list(rows[0].keys())
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _emit(args, rows: list[dict], manifest: dict, extra_json: dict | None = None) -> None:
    if args.json:
        doc = {"manifest": manifest, "rows": rows}
        if extra_json:
            doc.update(extra_json)
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    elif args.out or not sys.stdout.isatty():
        text = _rows_to_csv(rows)
    else:
        text = _rows_to_table(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)
        if not args.json:
            sys.stderr.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")


def _estimate_dict(est) -> dict:
    return {
        "successes": est.successes,
        "trials": est.trials,
        "point": est.point,
        "ci_low": est.ci_low,
        "ci_high": est.ci_high,
        "ci_method": est.ci_method,
    }


# -- verb handlers -------------------------------------------------------------


def _cmd_gen(args) -> int:
    g = generators.from_spec(args.spec)
    text = format_edge_list(g, comment=f"generated by matchlab gen --spec {args.spec}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps(_manifest("gen", spec=args.spec), sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_process(args) -> int:
    config = ExperimentConfig(args.spec, args.trials, args.seed)
    est, reports = estimate_hitting_equality(config, jobs=args.jobs)
    g = generators.from_spec(args.spec)
    k = g.regular_degree()
    orders = None
    if args.dump_order:
        from .process import EdgeWeights, hitting_times

        orders = [
            [int(e) for e in hitting_times(g, EdgeWeights(RandomStream(r.trial_seed).uniforms(g.n_edges))).order]
            for r in reports
        ]
    rows = [
        {
            "trial": r.trial_index,
            "seed": r.trial_seed,
            "tau_I": r.tau_I,
            "tau_M": r.tau_M,
            "equal": int(r.equal),
        }
        for r in reports
    ]
    manifest = _manifest("process", spec=args.spec, trials=args.trials, seed=args.seed)
    if args.json:
        trials = [
            {
                "n": g.n_left,
                "k": k,
                "tau_I": r.tau_I,
                "tau_M": r.tau_M,
                "equal": r.equal,
                "seed": r.trial_seed,
                "trial": r.trial_index,
            }
            for r in reports
        ]
        if orders is not None:
            for doc, order in zip(trials, orders):
                doc["order"] = order
        doc = {"manifest": manifest, "estimate": _estimate_dict(est), "trials": trials}
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
                fh.write(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
        else:
            sys.stdout.write(text)
        return 0
    _emit(args, rows, manifest)
    if not args.out:
        sys.stderr.write(
            f"# equality: {est.successes}/{est.trials} point={est.point} "
            f"ci=[{est.ci_low},{est.ci_high}]\n"
        )
    return 0


def _parse_event(name: str, cut_masks: str | None) -> EventSpec:
    if name in ("pm", "perfect-matching"):
        return PERFECT_MATCHING
    if name in ("noiso", "no-isolated"):
        return NO_ISOLATED
    if name in ("hallcut", "hall-cut"):
        if not cut_masks:
            raise ValueError("--event hallcut needs --cut S_MASK,T_MASK")
        s_mask, _, t_mask = cut_masks.partition(",")
        return EventSpec("hall_cut", Cut.from_masks(int(s_mask, 0), int(t_mask, 0)))
    raise ValueError(f"unknown event {name!r} (try pm, noiso, hallcut)")


def _cmd_sweep(args) -> int:
    p_values = tuple(float(x) for x in args.p.split(","))
    event = _parse_event(args.event, args.cut)
    config = ExperimentConfig(args.spec, args.trials, args.seed, p_values=p_values)
    points = run_sweep(config, event, coupled=not args.independent, jobs=args.jobs)
    rows = [
        {
            "p": pt.p,
            "event": event.label,
            "successes": pt.estimate.successes,
            "trials": pt.estimate.trials,
            "point": pt.estimate.point,
            "ci_low": pt.estimate.ci_low,
            "ci_high": pt.estimate.ci_high,
            "seed": args.seed,
        }
        for pt in points
    ]
    manifest = _manifest(
        "sweep",
        spec=args.spec,
        trials=args.trials,
        seed=args.seed,
        p_values=list(p_values),
        event=event.label,
        coupled=not args.independent,
    )
    _emit(args, rows, manifest)
    return 0


def _cmd_counterexample(args) -> int:
    p_values = tuple(float(x) for x in args.p.split(","))
    if args.family == "parres":
        spec = f"parres:k={args.k}"
    elif args.family == "serres":
        parts = [f"k={args.k}"]
        if args.series is not None:
            parts.append(f"series={args.series}")
        if args.ell is not None:
            parts.append(f"ell={args.ell}")
        if args.r is not None:
            parts.append(f"r={args.r}")
        spec = "serres:" + ",".join(parts)
    else:
        raise ValueError(f"unknown family {args.family!r}")
    rows = []
    failures = 0
    for j, p in enumerate(p_values):
        if args.family == "parres":
            rep = parallel_calibration(spec, args.trials, args.seed, p, p_index=j, jobs=args.jobs)
            ok = rep.passes()
            rows.append(
                {
                    "p": p,
                    "pm_point": rep.pm.point,
                    "pm_necessary_bound": rep.pm_bound,
                    "isolated_mean": rep.isolated_mean,
                    "isolated_expected": rep.isolated_expected,
                    "isolated_se": rep.isolated_se,
                    "ok": int(ok),
                }
            )
        else:
            rep = series_calibration(spec, args.trials, args.seed, p, p_index=j, jobs=args.jobs)
            ok = rep.passes()
            rows.append(
                {
                    "p": p,
                    "pm_point": rep.pm.point,
                    "census_point": rep.census.point,
                    "census_expected": rep.census_expected,
                    "implication_violations": rep.implication_violations,
                    "ok": int(ok),
                }
            )
        failures += 0 if ok else 1
    manifest = _manifest(
        "counterexample",
        family=args.family,
        spec=spec,
        trials=args.trials,
        seed=args.seed,
        p_values=list(p_values),
    )
    _emit(args, rows, manifest)
    return 1 if failures else 0


def _cmd_cut_census(args) -> int:
    g = load_graph(args.graph)
    if g.n_vertices > args.max_vertices:
        raise ValueError(
            f"graph has {g.n_vertices} vertices, over the --max-vertices cap {args.max_vertices}"
        )
    rows = list(census_rows(g, k=args.k))
    manifest = _manifest("cut-census", graph=args.graph, k=args.k, max_vertices=args.max_vertices)
    _emit(args, rows, manifest)
    return 0


def _class_dict(cls) -> dict:
    return {
        "s_mask": cls.representative.s.mask,
        "t_mask": cls.representative.t.mask,
        "size": len(cls.members),
        "budget": cls.budget,
        "trivial": cls.is_trivial,
    }


def _cmd_atoms(args) -> int:
    g = load_graph(args.graph)
    config = ThresholdConfig(c=args.c, closeness=args.closeness)
    space = CutSpace(g, config)
    unit_classes = space.classes(1.0)
    if args.start:
        s_mask, _, t_mask = args.start.partition(",")
        start = space.class_of(Cut.from_masks(int(s_mask, 0), int(t_mask, 0)), 1.0)
    else:
        start = next((c for c in unit_classes if not c.is_trivial), None)
        if start is None:
            raise ValueError("no non-trivial internal class to start from")
    atom, steps = space.run_atom_process(start, RandomStream(args.seed), step_budget=args.budget)
    manifest = _manifest(
        "atoms",
        graph=args.graph,
        seed=args.seed,
        c=args.c,
        closeness=args.closeness,
        start=args.start,
        budget=args.budget,
    )
    doc = {
        "manifest": manifest,
        "n": space.n,
        "k": space.k,
        "internal_classes": [_class_dict(c) for c in unit_classes],
        "start": _class_dict(start),
        "atom": _class_dict(atom),
        "steps": steps,
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    results = verify.run_all(args.seed)
    for r in results:
        sys.stdout.write(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}\n")
    return 0 if all(r.ok for r in results) else 1


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="matchlab",
        description="Graph-process and percolation laboratory for regular bipartite matchings.",
    )
    top.add_argument("--version", action="version", version=f"matchlab {__version__}")
    sub = top.add_subparsers(dest="verb", required=True)

    def common(p, seed=True, jobs=True):
        p.add_argument("--out", help="output path (manifest written alongside)")
        p.add_argument("--json", action="store_true", help="JSON output")
        if seed:
            p.add_argument("--seed", type=int, required=True, help="master seed (required)")
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("--spec", required=True, help="knn:n=4 | rrb:n=30,k=3,seed=7 | parres:k=20 | serres:k=16,series=2,ell=3,r=8 | file:PATH")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("process", help="hitting-time equality experiment")
    p.add_argument("--spec", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument(
        "--dump-order", action="store_true", help="include full edge orders (JSON, large)"
    )
    common(p)
    p.set_defaults(fn=_cmd_process)

    p = sub.add_parser("sweep", help="event probability across p values")
    p.add_argument("--spec", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--event", required=True, help="pm | noiso | hallcut")
    p.add_argument("--cut", help="S_MASK,T_MASK for --event hallcut")
    p.add_argument("--p", required=True, help="comma-separated retention probabilities, ascending")
    p.add_argument("--independent", action="store_true", help="fresh weights per (trial, p) cell")
    common(p)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("counterexample", help="resistor-family calibration checks")
    p.add_argument("--family", required=True, choices=["parres", "serres"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--series", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--p", required=True)
    p.add_argument("--trials", type=int, required=True)
    common(p)
    p.set_defaults(fn=_cmd_counterexample)

    p = sub.add_parser("cut-census", help="exhaustive per-cut statistics (CSV)")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--k", type=int, help="override the degree used for internality")
    p.add_argument("--max-vertices", type=int, default=24)
    common(p, seed=False, jobs=False)
    p.set_defaults(fn=_cmd_cut_census)

    p = sub.add_parser("atoms", help="internal-class atom process (JSON report)")
    p.add_argument("--graph", required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--closeness", type=int, default=0)
    p.add_argument("--start", help="S_MASK,T_MASK of a non-trivial internal cut")
    p.add_argument("--budget", type=int, default=None)
    common(p, jobs=False)
    p.set_defaults(fn=_cmd_atoms)

    p = sub.add_parser("verify", help="run the built-in oracle suite")
    common(p, jobs=False)
    p.set_defaults(fn=_cmd_verify)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError, generators.GenerationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
