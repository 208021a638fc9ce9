"""Aligning parsed reproduction steps with the execution model."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from .corpus import Preprocessor
from .errors import InputError
from .reports import S2RStep
from .traces import ExecutionModel, GuiComponent, ModelEdge

logger = logging.getLogger(__name__)

MATCH_THRESHOLD = 0.5
AMBIGUITY_MARGIN = 0.05


@dataclass
class StepMatch:
    step: S2RStep
    matched_edge: ModelEdge | None
    similarity: float
    status: str  # matched | ambiguous | unmatched


@dataclass
class StepGap:
    after_step: int
    before_step: int
    missing: list[ModelEdge] = field(default_factory=list)
    infeasible: bool = False


@dataclass
class MissingStepReport:
    gaps: list[StepGap] = field(default_factory=list)


def _jaccard(a: set[str], b: set[str]) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def step_object_terms(step: S2RStep, preprocessor: Preprocessor) -> set[str]:
    parts = step.object
    if step.object2:
        parts = f"{parts} {step.object2}"
    return preprocessor.term_set(parts)


def edge_component_terms(component: GuiComponent, preprocessor: Preprocessor) -> set[str]:
    text = " ".join([component.resource_id, component.text, component.content_desc])
    return preprocessor.term_set(text)


def map_steps_to_model(
    steps: list[S2RStep],
    model: ExecutionModel,
    preprocessor: Preprocessor | None = None,
    threshold: float = MATCH_THRESHOLD,
    margin: float = AMBIGUITY_MARGIN,
) -> list[StepMatch]:
    """Match each step to the most similar same-action edge.

    Similarity is the Jaccard overlap of the step's object terms and the
    edge component's terms. Below `threshold` a step is unmatched; a
    runner-up within `margin` of the best makes it ambiguous. Ties keep the
    earliest edge in model insertion order.
    """
    pre = preprocessor or Preprocessor()
    matches = []
    for step in steps:
        step_terms = step_object_terms(step, pre)
        best: ModelEdge | None = None
        best_sim = 0.0
        runner_up = 0.0
        for edge in model.edges:
            if edge.action != step.action:
                continue
            sim = _jaccard(step_terms, edge_component_terms(edge.component, pre))
            if best is None or sim > best_sim:
                if best is not None:
                    runner_up = max(runner_up, best_sim)
                best, best_sim = edge, sim
            else:
                runner_up = max(runner_up, sim)
        if best is None or best_sim < threshold:
            matches.append(StepMatch(step, None, best_sim, "unmatched"))
        elif runner_up >= best_sim - margin:
            matches.append(StepMatch(step, best, best_sim, "ambiguous"))
        else:
            matches.append(StepMatch(step, best, best_sim, "matched"))
    return matches


def _shortest_edge_path(
    model: ExecutionModel, src: str, dst: str
) -> list[ModelEdge] | None:
    """BFS over edges in insertion order; None when dst is unreachable."""
    if src == dst:
        return []
    adjacency: dict[str, list[ModelEdge]] = {}
    for edge in model.edges:
        adjacency.setdefault(edge.src, []).append(edge)
    queue = deque([src])
    parent: dict[str, ModelEdge] = {}
    seen = {src}
    while queue:
        node = queue.popleft()
        for edge in adjacency.get(node, []):
            if edge.dst in seen:
                continue
            parent[edge.dst] = edge
            if edge.dst == dst:
                path = []
                cursor = dst
                while cursor != src:
                    path.append(parent[cursor])
                    cursor = parent[cursor].src
                path.reverse()
                return path
            seen.add(edge.dst)
            queue.append(edge.dst)
    return None


def detect_missing_steps(
    matches: list[StepMatch], model: ExecutionModel
) -> MissingStepReport:
    """Find model edges a report skipped between consecutive matched steps.

    Only confidently matched steps anchor the walk. A gap's missing edges
    are the shortest path between the two anchors; an unreachable pair is
    flagged infeasible instead.
    """
    anchors = [(i, m) for i, m in enumerate(matches) if m.status == "matched"]
    report = MissingStepReport()
    for (i_prev, prev), (i_next, nxt) in zip(anchors, anchors[1:]):
        assert prev.matched_edge is not None and nxt.matched_edge is not None
        if prev.matched_edge.dst == nxt.matched_edge.src:
            continue
        path = _shortest_edge_path(model, prev.matched_edge.dst, nxt.matched_edge.src)
        if path is None:
            report.gaps.append(StepGap(i_prev, i_next, [], infeasible=True))
        elif path:
            report.gaps.append(StepGap(i_prev, i_next, path))
    return report


def suggest_next_steps(
    model: ExecutionModel, fingerprint: str
) -> list[tuple[str, GuiComponent]]:
    """Possible interactions from a screen, sorted by (action, resource_id)."""
    if fingerprint not in model.nodes:
        raise InputError(f"unknown screen fingerprint: {fingerprint}")
    outgoing = model.outgoing(fingerprint)
    outgoing.sort(key=lambda e: (e.action, e.resource_id))
    return [(e.action, e.component) for e in outgoing]
