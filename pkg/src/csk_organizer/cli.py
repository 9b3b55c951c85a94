"""Command line entry point: ``organize index|run|eval``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .bins import load_bins
from .errors import CSKError
from .evalharness import (
    CSKClassifier,
    load_ground_truth,
    load_trial_specs,
    run_accuracy,
    run_adaptability,
    run_consistency,
    run_explainability_audit,
    write_reports,
)
from .kg import MAGIC, KnowledgeGraph, load_dump, load_index, save_index
from .pipeline import PipelineConfig, run, write_log
from .reasoner import DEFAULT_CONFIG, SearchConfig


def open_graph(path: str) -> KnowledgeGraph:
    """Load a compiled index, or parse a raw assertions dump when given one."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    return load_index(path) if head == MAGIC else load_dump(path)


def _search_config(args) -> SearchConfig:
    return SearchConfig.from_file(args.config) if args.config else DEFAULT_CONFIG


def cmd_index(args) -> int:
    relations = [r for r in args.relations.split(",") if r.strip()] if args.relations else None
    g = load_dump(args.dump, relations)
    save_index(g, args.out)
    m = g.metadata
    print(f"{args.out}: {m.node_count} nodes, {m.edge_count} edges ({m.filtered} filtered, {m.malformed} malformed)")
    return 0


def cmd_run(args) -> int:
    graph = open_graph(args.graph)
    bins = load_bins(args.bins)
    cfg = PipelineConfig(
        min_confidence=args.min_confidence,
        dedup=not args.no_dedup,
        search=_search_config(args),
        annotate=args.annotate,
    )
    result = run(args.stream, bins, graph, cfg)
    write_log(result.records, args.out)
    for line in result.annotations:
        print(line)
    summary = {
        "processed": len(result.records),
        "frames": result.state.frames,
        "bins": result.state.counts(),
        "unmatched": len(result.state.unmatched),
        "stream_errors": len(result.errors),
        "skipped_low_confidence": result.skipped_low_confidence,
    }
    print(json.dumps(summary, indent=2))
    return 0


def cmd_eval(args) -> int:
    graph = open_graph(args.graph)
    config = _search_config(args)
    if args.protocol == "audit":
        if not args.log:
            raise SystemExit("organize eval audit: --log is required")
        reports = [run_explainability_audit(args.log, graph, config.strategy)]
    else:
        if not args.specs:
            raise SystemExit(f"organize eval {args.protocol}: --specs is required")
        specs = load_trial_specs(args.specs)
        classifier = CSKClassifier(graph, config)
        if args.protocol == "consistency":
            reports = [run_consistency(specs, classifier)]
        elif args.protocol == "accuracy":
            if not args.truth:
                raise SystemExit("organize eval accuracy: --truth is required")
            reports = [run_accuracy(specs, load_ground_truth(args.truth), classifier)]
        else:
            reports = [run_adaptability(s.object, s.contexts, classifier, s.repetitions) for s in specs]
    out = write_reports(reports, args.out)
    for r in reports:
        print(json.dumps(r.summary(), sort_keys=True))
    print(f"reports written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="organize", description="Sort detected objects into context bins using ConceptNet.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    ix = sub.add_parser("index", help="compile an assertions dump into a binary index")
    ix.add_argument("--dump", required=True)
    ix.add_argument("--out", required=True)
    ix.add_argument("--relations", help="comma-separated relation allow-list (default: all)")
    ix.set_defaults(func=cmd_index)

    r = sub.add_parser("run", help="sort a detection stream")
    r.add_argument("--graph", required=True, help="compiled index (or raw assertions dump)")
    r.add_argument("--bins", required=True)
    r.add_argument("--stream", required=True)
    r.add_argument("--out", required=True, help="decision log to write")
    r.add_argument("--config")
    r.add_argument("--no-dedup", action="store_true")
    r.add_argument("--min-confidence", type=float, default=0.5)
    r.add_argument("--annotate", action="store_true", help="print a one-line summary per frame")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("eval", help="run an evaluation protocol")
    e.add_argument("protocol", choices=["consistency", "accuracy", "adaptability", "audit"])
    e.add_argument("--graph", required=True)
    e.add_argument("--specs")
    e.add_argument("--truth")
    e.add_argument("--log")
    e.add_argument("--config")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_eval)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CSKError, OSError) as exc:
        print(f"organize: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
