"""Command line interface.

Exit codes: 0 success, 1 input/validation error, 2 configuration error.
Progress goes to stderr; machine-readable output goes to stdout or --out.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .corpus import Preprocessor, load_stopwords, scan_corpus
from .errors import ConfigError, GuilocError, InputError
from .evaluation import SweepGrid, evaluate_config, load_dataset, sweep
from .index import SCORERS, ScoringParams, build_index, load_index, save_index
from .mapping import TERM_SOURCES, gui_context
from .pipeline import (
    PipelineConfig,
    QUERY_STRATEGIES,
    RERANK_STRATEGIES,
    localize,
    ranking_to_json,
)
from .reports import (
    HeuristicClassifier,
    RemoteClassifier,
    classify_sentences,
    load_report,
    parse_s2r,
    segment_with_markers,
)
from .step_mapping import detect_missing_steps, map_steps_to_model
from .traces import build_execution_model, load_model, parse_trace, save_model
from .util import atomic_write_text, load_json_file, stable_json_dumps

logger = logging.getLogger(__name__)

ENV_CLASSIFIER_URL = "GUILOC_CLASSIFIER_URL"
ENV_CLASSIFIER_MODEL = "GUILOC_CLASSIFIER_MODEL"
ENV_CLASSIFIER_TIMEOUT = "GUILOC_CLASSIFIER_TIMEOUT"

_RERANK_CLI = {"none": "none", "filter": "filter", "boost": "boost", "filter-boost": "filter_boost"}


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(out, text)
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _split_csv(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _parse_sources(value: str) -> tuple[str, ...]:
    if value == "all":
        return TERM_SOURCES
    return tuple(_split_csv(value))


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    """Merge --config file values with explicit flags; flags win."""
    file_cfg = {}
    if getattr(args, "config", None):
        data = load_json_file(args.config)
        if not isinstance(data, dict):
            raise ConfigError(f"config file {args.config} must hold a JSON object")
        file_cfg = data

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        return file_cfg.get(key, default)

    rerank = pick(args.rerank, "rerank_strategy", "none")
    rerank = _RERANK_CLI.get(rerank, rerank)
    sources = pick(args.sources, "term_sources", None)
    if isinstance(sources, str):
        sources = _parse_sources(sources)
    elif isinstance(sources, list):
        sources = tuple(sources)
    config = PipelineConfig(
        scorer=pick(args.scorer, "scorer", "bm25"),
        query_strategy=pick(args.query, "query_strategy", "base"),
        rerank_strategy=rerank,
        window=int(pick(args.window, "window", 3)),
        term_sources=sources or TERM_SOURCES,
        expansion_weight=float(pick(args.weight, "expansion_weight", 1.0)),
        top_k=int(pick(getattr(args, "top", None), "top_k", 10)),
    )
    return config.validate()


def _cmd_index(args: argparse.Namespace) -> int:
    stopwords = load_stopwords(args.stopwords) if args.stopwords else None
    pre = Preprocessor(
        **({"stopwords": stopwords} if stopwords is not None else {}),
        min_term_len=args.min_term_len,
        stem=args.stem,
    )
    docs = scan_corpus(args.corpus, tuple(_split_csv(args.ext)), pre)
    index = build_index(docs, ScoringParams(bm25_k1=args.k1, bm25_b=args.b), pre)
    save_index(index, args.out)
    logger.info("indexed %d files into %s", index.doc_count, args.out)
    return 0


def _cmd_localize(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    index = load_index(args.index)
    report = load_report(args.report)
    trace = parse_trace(args.trace)
    if args.dump_context:
        ctx = gui_context(
            trace,
            config.window,
            index.documents,
            index.preprocessor,
            sources=config.term_sources,
            component_threshold=config.component_threshold,
        )
        atomic_write_text(args.dump_context, stable_json_dumps(ctx.to_json()))
        logger.info("wrote GUI context to %s", args.dump_context)
    ranked = localize(report, trace, index, config)
    _emit(stable_json_dumps(ranking_to_json(report, config, ranked)), args.out)
    return 0


def _cmd_build_model(args: argparse.Namespace) -> int:
    traces = [parse_trace(p) for p in args.trace]
    model = build_execution_model(traces)
    save_model(model, args.out)
    logger.info(
        "model: %d screens, %d interactions, %d entry points -> %s",
        len(model.nodes),
        len(model.edges),
        len(model.entry_fingerprints),
        args.out,
    )
    return 0


def _make_classifier(kind: str):
    if kind == "heuristic":
        return HeuristicClassifier()
    url = os.environ.get(ENV_CLASSIFIER_URL)
    if not url:
        raise ConfigError(f"--classifier remote needs {ENV_CLASSIFIER_URL} to be set")
    return RemoteClassifier(
        url,
        model=os.environ.get(ENV_CLASSIFIER_MODEL, "default"),
        timeout=float(os.environ.get(ENV_CLASSIFIER_TIMEOUT, "10")),
    )


def _cmd_lint_report(args: argparse.Namespace) -> int:
    report = load_report(args.report)
    segments = segment_with_markers(report.body)
    tagged = classify_sentences(segments, _make_classifier(args.classifier))

    steps = []
    unparsed = []
    for text, tag in tagged:
        if tag != "S2R":
            continue
        try:
            steps.append(parse_s2r(text))
        except InputError as exc:
            unparsed.append({"sentence": text, "reason": str(exc)})

    payload = {
        "report_id": report.report_id,
        "sentences": [{"text": t, "tag": tag} for t, tag in tagged],
        "steps": [
            {
                "subject": s.subject,
                "action": s.action,
                "object": s.object,
                "preposition": s.preposition,
                "object2": s.object2,
            }
            for s in steps
        ],
        "unparsed_steps": unparsed,
    }

    if args.model:
        model = load_model(args.model)
        matches = map_steps_to_model(steps, model)
        missing = detect_missing_steps(matches, model)
        payload["step_matches"] = [
            {
                "step": i,
                "status": m.status,
                "similarity": m.similarity,
                "edge": (
                    {
                        "src": m.matched_edge.src,
                        "action": m.matched_edge.action,
                        "resource_id": m.matched_edge.resource_id,
                        "dst": m.matched_edge.dst,
                    }
                    if m.matched_edge
                    else None
                ),
            }
            for i, m in enumerate(matches)
        ]
        payload["missing_steps"] = [
            {
                "after_step": g.after_step,
                "before_step": g.before_step,
                "infeasible": g.infeasible,
                "missing": [
                    {
                        "src": e.src,
                        "action": e.action,
                        "resource_id": e.resource_id,
                        "dst": e.dst,
                    }
                    for e in g.missing
                ],
            }
            for g in missing.gaps
        ]

    _emit(stable_json_dumps(payload), args.out)
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    index = load_index(args.index)
    pairs = load_dataset(args.reports, args.traces)
    result = evaluate_config(pairs, index, config)
    _emit(stable_json_dumps(result.to_json()), args.out)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    pairs = load_dataset(args.reports, args.traces)
    grid = SweepGrid(
        scorers=_split_csv(args.scorers),
        query_strategies=_split_csv(args.queries),
        rerank_strategies=[_RERANK_CLI.get(r, r) for r in _split_csv(args.reranks)],
        windows=[int(w) for w in _split_csv(args.windows)],
        term_sources=[
            _parse_sources(s.replace("+", ",")) for s in args.sources_sets.split(";") if s
        ],
        expansion_weights=[float(w) for w in _split_csv(args.weights)],
    )
    outcome = sweep(grid, pairs, index, args.out, jobs=args.jobs)
    logger.info(
        "sweep: %d rows (%d computed, %d reused, %d skipped) -> %s",
        len(outcome.rows),
        outcome.computed,
        outcome.reused,
        outcome.skipped,
        args.out,
    )
    return 0


def _add_config_flags(p: argparse.ArgumentParser, with_top: bool = True) -> None:
    p.add_argument("--scorer", choices=SCORERS, default=None)
    p.add_argument("--query", choices=QUERY_STRATEGIES, default=None)
    p.add_argument("--rerank", choices=tuple(_RERANK_CLI), default=None)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--sources", default=None, help="comma list of GUI term sources, or 'all'")
    p.add_argument("--weight", type=float, default=None, help="expansion weight")
    if with_top:
        p.add_argument("--top", type=int, default=None, help="entries to keep (default 10)")
    p.add_argument("--config", default=None, help="JSON config file; flags take precedence")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guiloc",
        description="GUI-aware bug localization and bug report analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="scan a source tree and write an index file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ext", default="java,kt", help="comma list of file extensions")
    p.add_argument("--stopwords", default=None, help="replace bundled stopword lists")
    p.add_argument("--min-term-len", type=int, default=2)
    p.add_argument("--stem", action="store_true")
    p.add_argument("--k1", type=float, default=1.2)
    p.add_argument("--b", type=float, default=0.75)
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("localize", help="rank source files for one bug report")
    p.add_argument("--index", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--dump-context", default=None, help="also write the GUI context JSON here")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_localize)

    p = sub.add_parser("build-model", help="fold traces into an execution model")
    p.add_argument("--trace", action="append", required=True, help="repeatable")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build_model)

    p = sub.add_parser("lint-report", help="tag sentences, parse steps, find missing ones")
    p.add_argument("--report", required=True)
    p.add_argument("--model", default=None, help="execution model for step matching")
    p.add_argument("--classifier", choices=("heuristic", "remote"), default="heuristic")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_lint_report)

    p = sub.add_parser("evaluate", help="metrics for one configuration over a dataset")
    p.add_argument("--index", required=True)
    p.add_argument("--reports", required=True)
    p.add_argument("--traces", required=True)
    p.add_argument("--out", default=None)
    _add_config_flags(p, with_top=False)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="evaluate a configuration grid, writing CSV")
    p.add_argument("--index", required=True)
    p.add_argument("--reports", required=True)
    p.add_argument("--traces", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scorers", default="bm25,rvsm")
    p.add_argument("--queries", default="base,expand,replace")
    p.add_argument("--reranks", default="none,filter,boost,filter-boost")
    p.add_argument("--windows", default="1,3")
    p.add_argument(
        "--sources-sets",
        default="all",
        help="semicolon list of source sets, '+' within a set (e.g. 'activity+component_id;all')",
    )
    p.add_argument("--weights", default="1")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    return parser


def run(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s"
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        logger.error("%s", exc)
        return 2
    except GuilocError as exc:
        logger.error("%s", exc)
        return 1
    except OSError as exc:
        logger.error("%s", exc)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
