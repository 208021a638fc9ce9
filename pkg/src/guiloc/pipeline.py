"""End-to-end localization: query building, scoring, and GUI re-ranking."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import ConfigError
from .index import CorpusIndex, RankEntry, RankedList, SCORERS, rank
from .mapping import DEFAULT_COMPONENT_THRESHOLD, GuiContext, TERM_SOURCES, gui_context
from .reports import BugReport
from .traces import ReproTrace

logger = logging.getLogger(__name__)

QUERY_STRATEGIES = ("base", "expand", "replace")
RERANK_STRATEGIES = ("none", "filter", "boost", "filter_boost")


@dataclass(frozen=True)
class PipelineConfig:
    scorer: str = "bm25"
    query_strategy: str = "base"
    rerank_strategy: str = "none"
    window: int = 3
    term_sources: tuple[str, ...] = TERM_SOURCES
    expansion_weight: float = 1.0
    component_threshold: float = DEFAULT_COMPONENT_THRESHOLD
    top_k: int = 10

    def validate(self) -> "PipelineConfig":
        if self.scorer not in SCORERS:
            raise ConfigError(f"unknown scorer {self.scorer!r}; expected one of {', '.join(SCORERS)}")
        if self.query_strategy not in QUERY_STRATEGIES:
            raise ConfigError(
                f"unknown query strategy {self.query_strategy!r}; "
                f"expected one of {', '.join(QUERY_STRATEGIES)}"
            )
        if self.rerank_strategy not in RERANK_STRATEGIES:
            raise ConfigError(
                f"unknown rerank strategy {self.rerank_strategy!r}; "
                f"expected one of {', '.join(RERANK_STRATEGIES)}"
            )
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if not self.term_sources or any(s not in TERM_SOURCES for s in self.term_sources):
            raise ConfigError(
                f"term_sources must be a nonempty subset of {', '.join(TERM_SOURCES)}"
            )
        if self.expansion_weight <= 0:
            raise ConfigError(f"expansion_weight must be > 0, got {self.expansion_weight}")
        if not 0 < self.component_threshold <= 1:
            raise ConfigError(
                f"component_threshold must be in (0, 1], got {self.component_threshold}"
            )
        if self.top_k < 1:
            raise ConfigError(f"top_k must be >= 1, got {self.top_k}")
        return self

    def to_json(self) -> dict:
        return {
            "scorer": self.scorer,
            "query_strategy": self.query_strategy,
            "rerank_strategy": self.rerank_strategy,
            "window": self.window,
            "term_sources": list(self.term_sources),
            "expansion_weight": self.expansion_weight,
            "component_threshold": self.component_threshold,
            "top_k": self.top_k,
        }


def _gui_term_list(gui_terms: Counter, repeat: int) -> list[str]:
    out = []
    for term, count in gui_terms.items():
        out.extend([term] * (count * repeat))
    return out


def build_query(
    report_terms: Sequence[str],
    gui_terms: Counter,
    strategy: str = "base",
    expansion_weight: float = 1.0,
) -> tuple[list[str], list[str]]:
    """Compose the retrieval query; returns (terms, fallback flags).

    expand appends every GUI term occurrence round(expansion_weight) times;
    replace uses GUI terms alone but falls back to the report terms (with a
    flag) when the trace yields nothing.
    """
    if strategy not in QUERY_STRATEGIES:
        raise ConfigError(
            f"unknown query strategy {strategy!r}; expected one of {', '.join(QUERY_STRATEGIES)}"
        )
    report_terms = list(report_terms)
    repeat = round(expansion_weight)
    if strategy == "base":
        return report_terms, []
    gui_list = _gui_term_list(gui_terms, max(repeat, 0))
    if strategy == "expand":
        return report_terms + gui_list, []
    if not gui_list:
        return report_terms, ["replace-fallback"]
    return gui_list, []


def _annotate(entry: RankEntry, ctx: GuiContext) -> RankEntry:
    flags = set()
    if entry.path in ctx.activity_files:
        flags.add("activity")
    if entry.path in ctx.listener_files:
        flags.add("listener")
    if entry.path in ctx.component_files:
        flags.add("component")
    return RankEntry(path=entry.path, score=entry.score, gui_flags=flags)


def apply_rerank(ranked: RankedList, ctx: GuiContext, strategy: str = "none") -> RankedList:
    """Reorder or filter a ranking using the GUI context; scores are untouched.

    boost is a stable partition: boosted files move to the front, both
    groups keeping their original relative order. filter keeps gui-related
    files only, unless the gui-related set is empty (input passes through
    with a fallback flag).
    """
    if strategy not in RERANK_STRATEGIES:
        raise ConfigError(
            f"unknown rerank strategy {strategy!r}; expected one of {', '.join(RERANK_STRATEGIES)}"
        )
    if strategy == "none":
        return RankedList(
            entries=[RankEntry(e.path, e.score, set(e.gui_flags)) for e in ranked.entries],
            query_terms_used=list(ranked.query_terms_used),
            flags=list(ranked.flags),
        )

    entries = [_annotate(e, ctx) for e in ranked.entries]
    flags = list(ranked.flags)

    if strategy in ("filter", "filter_boost"):
        if not ctx.gui_related:
            flags.append("filter-fallback")
        else:
            entries = [e for e in entries if e.path in ctx.gui_related]

    if strategy in ("boost", "filter_boost"):
        front = [e for e in entries if e.path in ctx.boosted]
        back = [e for e in entries if e.path not in ctx.boosted]
        entries = front + back

    return RankedList(entries=entries, query_terms_used=list(ranked.query_terms_used), flags=flags)


def localize(
    report: BugReport,
    trace: ReproTrace,
    index: CorpusIndex,
    config: PipelineConfig | None = None,
) -> RankedList:
    """Rank the indexed corpus for one report and its reproduction trace."""
    config = (config or PipelineConfig()).validate()
    pre = index.preprocessor
    ctx = gui_context(
        trace,
        config.window,
        index.documents,
        pre,
        sources=config.term_sources,
        component_threshold=config.component_threshold,
    )
    report_terms = pre.tokens(report.full_text())
    query, query_flags = build_query(
        report_terms, ctx.terms, config.query_strategy, config.expansion_weight
    )
    ranked = rank(index, query, config.scorer)
    ranked = apply_rerank(ranked, ctx, config.rerank_strategy)
    ranked.flags = sorted(set(ranked.flags) | set(query_flags))
    ranked.entries = ranked.entries[: config.top_k]
    return ranked


def full_depth(config: PipelineConfig, index: CorpusIndex) -> PipelineConfig:
    """The same configuration with no top-k truncation (for evaluation)."""
    return replace(config, top_k=index.doc_count)


def ranking_to_json(report: BugReport, config: PipelineConfig, ranked: RankedList) -> dict:
    return {
        "report_id": report.report_id,
        "config": config.to_json(),
        "fallbacks": list(ranked.flags),
        "ranking": [
            {
                "rank": i,
                "path": e.path,
                "score": e.score,
                "gui_flags": sorted(e.gui_flags),
            }
            for i, e in enumerate(ranked.entries, 1)
        ],
    }
