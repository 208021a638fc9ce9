"""Ranking metrics, dataset evaluation, and configuration sweeps."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Sequence

from .errors import ConfigError, InputError
from .index import CorpusIndex
from .mapping import TERM_SOURCES
from .pipeline import PipelineConfig, full_depth, localize
from .reports import BugReport, load_report
from .traces import ReproTrace, parse_trace
from .util import atomic_write_text

logger = logging.getLogger(__name__)

HITS_KS = (1, 5, 10)

CSV_HEADER = (
    "scorer,query_strategy,rerank_strategy,window,term_sources,expansion_weight,"
    "hits1,hits5,hits10,mrr,map,reports"
)


def first_relevant_rank(ranking: Sequence[str], truth: set[str]) -> int | None:
    """1-based rank of the first relevant path, or None on a miss."""
    for i, path in enumerate(ranking, 1):
        if path in truth:
            return i
    return None


def hits_at_k(ranking: Sequence[str], truth: set[str], k: int) -> int:
    if not truth:
        raise InputError("ground truth must be nonempty")
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    r = first_relevant_rank(ranking, truth)
    return 1 if r is not None and r <= k else 0


def reciprocal_rank(ranking: Sequence[str], truth: set[str]) -> float:
    if not truth:
        raise InputError("ground truth must be nonempty")
    r = first_relevant_rank(ranking, truth)
    return 1.0 / r if r is not None else 0.0


def average_precision(ranking: Sequence[str], truth: set[str]) -> float:
    """Mean of precision-at-hit over all relevant files; unranked ones add 0."""
    if not truth:
        raise InputError("ground truth must be nonempty")
    hits = 0
    total = 0.0
    for i, path in enumerate(ranking, 1):
        if path in truth:
            hits += 1
            total += hits / i
    return total / len(truth)


@dataclass
class ReportOutcome:
    report_id: str
    first_relevant_rank: int | None
    reciprocal_rank: float
    average_precision: float


@dataclass
class EvalResult:
    config: PipelineConfig
    per_report: list[ReportOutcome]
    hits_at: dict[int, float]
    mrr: float
    map_score: float
    report_count: int

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "hits_at": {str(k): v for k, v in self.hits_at.items()},
            "mrr": self.mrr,
            "map": self.map_score,
            "reports": self.report_count,
            "per_report": [
                {
                    "report_id": o.report_id,
                    "first_relevant_rank": o.first_relevant_rank,
                    "reciprocal_rank": o.reciprocal_rank,
                    "average_precision": o.average_precision,
                }
                for o in self.per_report
            ],
        }


def load_dataset(
    reports_dir: str | Path, traces_dir: str | Path
) -> list[tuple[BugReport, ReproTrace]]:
    """Pair report and trace files by report id.

    Reports without ground truth are excluded (count logged); a report whose
    trace file is missing is fatal.
    """
    reports_dir = Path(reports_dir)
    traces_dir = Path(traces_dir)
    if not reports_dir.is_dir():
        raise InputError(f"reports directory not found: {reports_dir}")
    if not traces_dir.is_dir():
        raise InputError(f"traces directory not found: {traces_dir}")
    pairs = []
    excluded = 0
    for path in sorted(reports_dir.glob("*.json")):
        report = load_report(path)
        if not report.ground_truth:
            excluded += 1
            continue
        trace_path = traces_dir / f"{report.report_id}.json"
        if not trace_path.is_file():
            raise InputError(f"no trace found for report {report.report_id} at {trace_path}")
        pairs.append((report, parse_trace(trace_path)))
    if excluded:
        logger.info("excluded %d reports without ground truth; %d kept", excluded, len(pairs))
    if not pairs:
        raise InputError(f"no usable reports under {reports_dir}")
    return pairs


def evaluate_config(
    pairs: list[tuple[BugReport, ReproTrace]],
    index: CorpusIndex,
    config: PipelineConfig | None = None,
) -> EvalResult:
    """Run localization at full depth for every pair and aggregate metrics."""
    config = (config or PipelineConfig()).validate()
    deep = full_depth(config, index)
    outcomes = []
    hit_totals = {k: 0 for k in HITS_KS}
    for report, trace in pairs:
        ranked = localize(report, trace, index, deep)
        paths = ranked.paths()
        truth = report.ground_truth or set()
        outcomes.append(
            ReportOutcome(
                report_id=report.report_id,
                first_relevant_rank=first_relevant_rank(paths, truth),
                reciprocal_rank=reciprocal_rank(paths, truth),
                average_precision=average_precision(paths, truth),
            )
        )
        for k in HITS_KS:
            hit_totals[k] += hits_at_k(paths, truth, k)
    n = len(pairs)
    return EvalResult(
        config=config,
        per_report=outcomes,
        hits_at={k: hit_totals[k] / n for k in HITS_KS},
        mrr=sum(o.reciprocal_rank for o in outcomes) / n,
        map_score=sum(o.average_precision for o in outcomes) / n,
        report_count=n,
    )


@dataclass
class SweepGrid:
    scorers: list[str] = field(default_factory=lambda: ["bm25"])
    query_strategies: list[str] = field(default_factory=lambda: ["base"])
    rerank_strategies: list[str] = field(default_factory=lambda: ["none"])
    windows: list[int] = field(default_factory=lambda: [3])
    term_sources: list[tuple[str, ...]] = field(default_factory=lambda: [()])
    expansion_weights: list[float] = field(default_factory=lambda: [1.0])

    def configs(self) -> list[PipelineConfig]:
        """Grid rows in lexicographic order over field value positions."""
        rows = []
        for scorer, query, rerank, window, sources, weight in product(
            self.scorers,
            self.query_strategies,
            self.rerank_strategies,
            self.windows,
            self.term_sources,
            self.expansion_weights,
        ):
            rows.append(
                PipelineConfig(
                    scorer=scorer,
                    query_strategy=query,
                    rerank_strategy=rerank,
                    window=window,
                    term_sources=tuple(sources) if sources else TERM_SOURCES,
                    expansion_weight=weight,
                )
            )
        return rows


def _config_key(config: PipelineConfig) -> tuple[str, ...]:
    return (
        config.scorer,
        config.query_strategy,
        config.rerank_strategy,
        str(config.window),
        "+".join(config.term_sources),
        f"{config.expansion_weight:g}",
    )


def _result_row(config: PipelineConfig, result: EvalResult) -> str:
    key = _config_key(config)
    metrics = (
        f"{result.hits_at[1]:.6f},{result.hits_at[5]:.6f},{result.hits_at[10]:.6f},"
        f"{result.mrr:.6f},{result.map_score:.6f},{result.report_count}"
    )
    return ",".join(key) + "," + metrics


@dataclass
class SweepOutcome:
    rows: list[str]
    computed: int
    reused: int
    skipped: int


def _load_existing_rows(path: Path) -> dict[tuple[str, ...], str]:
    if not path.is_file():
        return {}
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != CSV_HEADER:
        logger.warning("existing sweep file %s has a different header; recomputing all rows", path)
        return {}
    existing = {}
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) == len(CSV_HEADER.split(",")):
            existing[tuple(cells[:6])] = line
    return existing


def sweep(
    grid: SweepGrid,
    pairs: list[tuple[BugReport, ReproTrace]],
    index: CorpusIndex,
    out_path: str | Path,
    jobs: int = 1,
) -> SweepOutcome:
    """Evaluate every grid configuration and write a CSV.

    Rows already present in the output file are reused, so an interrupted
    sweep resumes where it stopped and a finished one is a no-op. Invalid
    configurations are logged and skipped, not fatal. Row order follows the
    grid regardless of --jobs scheduling.
    """
    out_path = Path(out_path)
    existing = _load_existing_rows(out_path)

    valid: list[PipelineConfig] = []
    skipped = 0
    for config in grid.configs():
        try:
            config.validate()
        except ConfigError as exc:
            logger.warning("skipping invalid configuration %s: %s", _config_key(config), exc)
            skipped += 1
            continue
        valid.append(config)

    rows: dict[tuple[str, ...], str] = {}
    to_compute = []
    reused = 0
    for config in valid:
        key = _config_key(config)
        if key in existing:
            rows[key] = existing[key]
            reused += 1
        else:
            to_compute.append(config)

    def run_one(config: PipelineConfig) -> tuple[tuple[str, ...], str]:
        result = evaluate_config(pairs, index, config)
        return _config_key(config), _result_row(config, result)

    if to_compute:
        logger.info("computing %d configurations (%d reused)", len(to_compute), reused)
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                for key, row in pool.map(run_one, to_compute):
                    rows[key] = row
        else:
            for config in to_compute:
                key, row = run_one(config)
                rows[key] = row

    ordered = [rows[_config_key(c)] for c in valid]
    atomic_write_text(out_path, "\n".join([CSV_HEADER] + ordered) + "\n")
    return SweepOutcome(
        rows=ordered, computed=len(to_compute), reused=reused, skipped=skipped
    )
