"""Reproduction traces and the app execution model built from them.

A trace is the ordered list of screens a user walked through while
reproducing a bug; the final screen is where the failure showed up. The
execution model folds one or more traces into a graph of fingerprinted
screens and deduplicated interactions.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, InputError, ValidationError
from .util import atomic_write_text, load_json_file, stable_json_dumps

logger = logging.getLogger(__name__)

MODEL_FORMAT = "guiloc-model"
MODEL_VERSION = 1

ACTIONS = frozenset(
    {"click", "type", "long-click", "swipe", "pinch", "open", "press", "select", "back"}
)


@dataclass
class GuiComponent:
    resource_id: str = ""
    component_type: str = ""
    text: str = ""
    content_desc: str = ""
    exercised: bool = False
    action: str | None = None

    def to_json(self) -> dict:
        return {
            "resource_id": self.resource_id,
            "type": self.component_type,
            "text": self.text,
            "content_desc": self.content_desc,
            "exercised": self.exercised,
            "action": self.action,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GuiComponent":
        return cls(
            resource_id=data.get("resource_id", "") or "",
            component_type=data.get("type", "") or "",
            text=data.get("text", "") or "",
            content_desc=data.get("content_desc", "") or "",
            exercised=bool(data.get("exercised", False)),
            action=data.get("action"),
        )


@dataclass
class Screen:
    index: int
    activity_name: str
    window_name: str = ""
    components: list[GuiComponent] = field(default_factory=list)

    def exercised_components(self) -> list[GuiComponent]:
        return [c for c in self.components if c.exercised]

    def to_json(self) -> dict:
        return {
            "activity_name": self.activity_name,
            "window_name": self.window_name,
            "components": [c.to_json() for c in self.components],
        }


@dataclass
class ReproTrace:
    trace_id: str
    screens: list[Screen]

    @property
    def buggy_screen(self) -> Screen:
        return self.screens[-1]


def screen_fingerprint(screen: Screen) -> str:
    """Stable digest of (activity, window, sorted nonempty component ids).

    Free text is deliberately excluded so cosmetic changes do not split
    nodes in the execution model.
    """
    ids = sorted(c.resource_id for c in screen.components if c.resource_id)
    raw = "\x1f".join([screen.activity_name, screen.window_name, ",".join(ids)])
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:16]


def _validate_trace(trace: ReproTrace) -> None:
    if not trace.screens:
        raise ValidationError(f"trace {trace.trace_id!r}: no screens")
    last = len(trace.screens) - 1
    for i, screen in enumerate(trace.screens):
        where = f"trace {trace.trace_id!r} screen {i}"
        if not screen.activity_name:
            raise ValidationError(f"{where}: empty activity_name")
        exercised = screen.exercised_components()
        if len(exercised) > 1:
            raise ValidationError(f"{where}: {len(exercised)} exercised components, at most 1 allowed")
        for comp in screen.components:
            if comp.action is not None and not comp.exercised:
                raise ValidationError(
                    f"{where}: component {comp.resource_id!r} has an action but is not exercised"
                )
            if comp.action is not None and comp.action not in ACTIONS:
                raise ValidationError(
                    f"{where}: unknown action {comp.action!r}; expected one of {', '.join(sorted(ACTIONS))}"
                )
        if i < last:
            if len(exercised) != 1:
                raise ValidationError(
                    f"{where}: every screen before the last needs exactly one exercised component"
                )
            if exercised[0].action is None:
                raise ValidationError(f"{where}: exercised component has no action")


def trace_from_dict(data: dict) -> ReproTrace:
    """Build and validate a trace from already-parsed JSON."""
    if not isinstance(data, dict) or "screens" not in data:
        raise InputError("trace JSON must be an object with a 'screens' list")
    screens = []
    for i, s in enumerate(data.get("screens") or []):
        screens.append(
            Screen(
                index=i,
                activity_name=s.get("activity_name", "") or "",
                window_name=s.get("window_name", "") or "",
                components=[GuiComponent.from_json(c) for c in s.get("components", [])],
            )
        )
    trace = ReproTrace(trace_id=str(data.get("trace_id", "")), screens=screens)
    _validate_trace(trace)
    return trace


def parse_trace(path: str | Path) -> ReproTrace:
    """Load a trace JSON file; malformed JSON or rule violations are fatal."""
    return trace_from_dict(load_json_file(path))


def last_screens(trace: ReproTrace, window: int) -> list[Screen]:
    """The final min(window, len) screens, ending at the buggy screen."""
    if window < 1:
        raise ConfigError(f"window must be >= 1, got {window}")
    return trace.screens[-window:]


@dataclass
class ModelEdge:
    src: str
    action: str
    resource_id: str
    dst: str
    component: GuiComponent

    def key(self) -> tuple[str, str, str, str]:
        return (self.src, self.action, self.resource_id, self.dst)


@dataclass
class ExecutionModel:
    nodes: dict[str, Screen]
    edges: list[ModelEdge]
    entry_fingerprints: set[str]

    def outgoing(self, fingerprint: str) -> list[ModelEdge]:
        return [e for e in self.edges if e.src == fingerprint]


def build_execution_model(traces: list[ReproTrace]) -> ExecutionModel:
    """Fold traces into a screen graph.

    Nodes are keyed by fingerprint (first-seen screen is kept as the
    canonical one); edges are deduplicated on (src, action, resource_id, dst)
    and keep insertion order.
    """
    nodes: dict[str, Screen] = {}
    edges: list[ModelEdge] = []
    seen_keys: set[tuple[str, str, str, str]] = set()
    entries: set[str] = set()
    for trace in traces:
        fps = [screen_fingerprint(s) for s in trace.screens]
        for fp, screen in zip(fps, trace.screens):
            nodes.setdefault(fp, screen)
        entries.add(fps[0])
        for i in range(len(trace.screens) - 1):
            comp = trace.screens[i].exercised_components()[0]
            edge = ModelEdge(
                src=fps[i],
                action=comp.action or "",
                resource_id=comp.resource_id,
                dst=fps[i + 1],
                component=comp,
            )
            if edge.key() not in seen_keys:
                seen_keys.add(edge.key())
                edges.append(edge)
    return ExecutionModel(nodes=nodes, edges=edges, entry_fingerprints=entries)


def save_model(model: ExecutionModel, path: str | Path) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "nodes": {fp: screen.to_json() for fp, screen in model.nodes.items()},
        "edges": [
            {"src": e.src, "action": e.action, "resource_id": e.resource_id, "dst": e.dst}
            for e in model.edges
        ],
        "entries": sorted(model.entry_fingerprints),
    }
    atomic_write_text(path, stable_json_dumps(payload))


def load_model(path: str | Path) -> ExecutionModel:
    data = load_json_file(path)
    if not isinstance(data, dict) or data.get("format") != MODEL_FORMAT:
        raise InputError(f"{path} is not a {MODEL_FORMAT} file")
    if data.get("version") != MODEL_VERSION:
        raise InputError(
            f"unsupported model version {data.get('version')!r} in {path}; "
            f"this build reads version {MODEL_VERSION}"
        )
    nodes = {}
    for fp, s in data["nodes"].items():
        nodes[fp] = Screen(
            index=0,
            activity_name=s.get("activity_name", "") or "",
            window_name=s.get("window_name", "") or "",
            components=[GuiComponent.from_json(c) for c in s.get("components", [])],
        )
    edges = []
    for e in data["edges"]:
        src_screen = nodes.get(e["src"])
        component = None
        if src_screen is not None and e["resource_id"]:
            for comp in src_screen.components:
                if comp.resource_id == e["resource_id"]:
                    component = comp
                    break
        if component is None:
            # the schema stores only the id; synthesize a bare descriptor
            component = GuiComponent(
                resource_id=e["resource_id"], exercised=True, action=e["action"] or None
            )
        edges.append(
            ModelEdge(
                src=e["src"],
                action=e["action"],
                resource_id=e["resource_id"],
                dst=e["dst"],
                component=component,
            )
        )
    return ExecutionModel(
        nodes=nodes, edges=edges, entry_fingerprints=set(data.get("entries", []))
    )
