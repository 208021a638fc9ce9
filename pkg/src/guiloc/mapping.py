"""Connecting GUI evidence from a trace to source files.

Three complementary matchers: activity/window class names, exercised
resource ids against files' resource references, and exercised-component
term overlap. Activity and listener matches form the boosted set; all
three together form the gui-related set.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Preprocessor, SourceDocument
from .errors import ConfigError
from .traces import GuiComponent, ReproTrace, Screen, last_screens

logger = logging.getLogger(__name__)

TERM_SOURCES = (
    "activity",
    "window_name",
    "component_id",
    "component_text",
    "content_desc",
    "type",
)

DEFAULT_COMPONENT_THRESHOLD = 0.5


@dataclass
class GuiContext:
    """Everything the localization pipeline needs to know about the GUI."""

    terms: Counter
    activity_files: set[str]
    listener_files: set[str]
    component_files: set[str]
    window_used: int

    @property
    def boosted(self) -> set[str]:
        return self.activity_files | self.listener_files

    @property
    def gui_related(self) -> set[str]:
        return self.activity_files | self.listener_files | self.component_files

    def to_json(self) -> dict:
        return {
            "window_used": self.window_used,
            "terms": dict(self.terms),
            "activity_files": sorted(self.activity_files),
            "listener_files": sorted(self.listener_files),
            "component_files": sorted(self.component_files),
            "boosted": sorted(self.boosted),
            "gui_related": sorted(self.gui_related),
        }


def _check_sources(sources: Sequence[str]) -> tuple[str, ...]:
    if not sources:
        raise ConfigError("term_sources must be nonempty")
    bad = [s for s in sources if s not in TERM_SOURCES]
    if bad:
        raise ConfigError(
            f"unknown term sources {bad}; expected a subset of {', '.join(TERM_SOURCES)}"
        )
    # canonical order, duplicates dropped
    return tuple(s for s in TERM_SOURCES if s in set(sources))


def extract_gui_terms(
    trace: ReproTrace,
    window: int,
    preprocessor: Preprocessor | None = None,
    sources: Sequence[str] | None = None,
) -> Counter:
    """Preprocessed terms from the selected sources, with multiplicity."""
    pre = preprocessor or Preprocessor()
    chosen = _check_sources(sources if sources is not None else TERM_SOURCES)
    terms: Counter = Counter()
    for screen in last_screens(trace, window):
        if "activity" in chosen:
            terms.update(pre.tokens(screen.activity_name))
        if "window_name" in chosen:
            terms.update(pre.tokens(screen.window_name))
        for comp in screen.components:
            if "component_id" in chosen:
                terms.update(pre.tokens(comp.resource_id))
            if "component_text" in chosen:
                terms.update(pre.tokens(comp.text))
            if "content_desc" in chosen:
                terms.update(pre.tokens(comp.content_desc))
            if "type" in chosen:
                terms.update(pre.tokens(comp.component_type))
    return terms


def _basename(dotted: str) -> str:
    return dotted.rsplit(".", 1)[-1] if dotted else ""


def _window_screens(trace: ReproTrace, window: int) -> list[Screen]:
    return last_screens(trace, window)


def match_activity_files(
    trace: ReproTrace, window: int, docs: Iterable[SourceDocument]
) -> set[str]:
    """Files whose class name equals an activity or window basename (case-sensitive)."""
    names = set()
    for screen in _window_screens(trace, window):
        for dotted in (screen.activity_name, screen.window_name):
            base = _basename(dotted)
            if base:
                names.add(base)
    return {doc.path for doc in docs if doc.class_name in names}


def _exercised_in_window(trace: ReproTrace, window: int) -> list[GuiComponent]:
    comps = []
    for screen in _window_screens(trace, window):
        comps.extend(screen.exercised_components())
    return comps


def match_listener_files(
    trace: ReproTrace, window: int, docs: Iterable[SourceDocument]
) -> set[str]:
    """Files whose resource references intersect the exercised component ids."""
    ids = {
        c.resource_id.lower()
        for c in _exercised_in_window(trace, window)
        if c.resource_id
    }
    if not ids:
        return set()
    return {doc.path for doc in docs if doc.resource_id_refs & ids}


def component_term_set(comp: GuiComponent, preprocessor: Preprocessor) -> set[str]:
    parts = " ".join([comp.resource_id, comp.text, comp.content_desc])
    return preprocessor.term_set(parts)


def match_component_files(
    trace: ReproTrace,
    window: int,
    docs: Iterable[SourceDocument],
    preprocessor: Preprocessor | None = None,
    threshold: float = DEFAULT_COMPONENT_THRESHOLD,
) -> set[str]:
    """Files containing at least `threshold` of some exercised component's terms.

    The fraction is |file terms ∩ component terms| / |component terms| and the
    boundary counts as a match. Components with no terms are skipped.
    """
    pre = preprocessor or Preprocessor()
    comp_term_sets = [
        ts
        for ts in (component_term_set(c, pre) for c in _exercised_in_window(trace, window))
        if ts
    ]
    if not comp_term_sets:
        return set()
    matched = set()
    for doc in docs:
        file_terms = set(doc.terms)
        for ts in comp_term_sets:
            if len(file_terms & ts) / len(ts) >= threshold:
                matched.add(doc.path)
                break
    return matched


def gui_context(
    trace: ReproTrace,
    window: int,
    docs: Sequence[SourceDocument],
    preprocessor: Preprocessor | None = None,
    sources: Sequence[str] | None = None,
    component_threshold: float = DEFAULT_COMPONENT_THRESHOLD,
) -> GuiContext:
    """Run all three matchers and term extraction over the screen window."""
    pre = preprocessor or Preprocessor()
    return GuiContext(
        terms=extract_gui_terms(trace, window, pre, sources),
        activity_files=match_activity_files(trace, window, docs),
        listener_files=match_listener_files(trace, window, docs),
        component_files=match_component_files(trace, window, docs, pre, component_threshold),
        window_used=window,
    )
