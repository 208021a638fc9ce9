"""Bug report text analysis.

Segmentation into sentences, OB/EB/S2R tagging (with a pluggable remote
classifier that falls back to the built-in heuristic), and parsing of
reproduction steps into a fixed slot structure:

    [subject] [action] [object] [preposition] [object2]
"""

from __future__ import annotations

import json
import logging
import re
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import InputError, RemoteClassifierError, UnparseableStepError
from .util import load_json_file

logger = logging.getLogger(__name__)

TAGS = ("OB", "EB", "S2R", "OTHER")

WIRE_VERSION = 1

# maps surface verbs (and close synonyms) to the canonical action vocabulary
VERB_SYNONYMS = {
    "click": "click",
    "tap": "click",
    "press": "click",
    "type": "type",
    "enter": "type",
    "input": "type",
    "long-click": "long-click",
    "long-press": "long-click",
    "swipe": "swipe",
    "pinch": "pinch",
    "open": "open",
    "select": "select",
    "back": "back",
}

PREPOSITIONS = ("in", "on", "into", "from", "to", "at")
_ARTICLES = {"the", "a", "an"}
_LEADING_FILLERS = {"please", "then", "now", "next", "first", "finally", "and", "also"}

_LIST_MARKER = re.compile(r"(?:^|(?<=\s))(?:\d{1,3}[.)]|[-*])\s+", re.MULTILINE)
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+|\n+")

_EB_MARKERS = re.compile(r"\b(should|expect(s|ed)?|supposed\s+to)\b", re.IGNORECASE)
_OB_MARKERS = re.compile(
    r"\b(crash(es|ed|ing)?|error(s)?|fail(s|ed|ing)?|instead|broken|wrong"
    r"|freez(es|ing)?|froze|hangs?|stuck|blank|does\s+not|doesn'?t|did\s+not|didn'?t"
    r"|cannot|can'?t|won'?t|nothing\s+happens)\b",
    re.IGNORECASE,
)


@dataclass
class Segment:
    text: str
    is_list_item: bool = False


@dataclass
class BugReport:
    report_id: str
    title: str
    body: str
    sentences: list[tuple[str, str]] = field(default_factory=list)
    ground_truth: set[str] | None = None

    def full_text(self) -> str:
        return f"{self.title}\n{self.body}"


def load_report(path: str | Path) -> BugReport:
    """Read a report JSON file ({report_id, title, body, ground_truth?})."""
    data = load_json_file(path)
    if not isinstance(data, dict) or "report_id" not in data:
        raise InputError(f"{path}: report JSON must be an object with a report_id")
    truth = data.get("ground_truth")
    return BugReport(
        report_id=str(data["report_id"]),
        title=data.get("title", "") or "",
        body=data.get("body", "") or "",
        ground_truth=set(truth) if truth else None,
    )


def segment_with_markers(body: str) -> list[Segment]:
    """Split a report body into sentences, stripping list markers.

    Numbered markers ("1.", "2)") and bullets ("-", "*") start a new item
    and are removed; ordinary sentence punctuation is kept. Decimal numbers
    like "1.5.8" are not markers because no whitespace follows the dot.
    """
    segments: list[Segment] = []
    chunks = _LIST_MARKER.split(body)
    for ci, chunk in enumerate(chunks):
        pieces = [p.strip() for p in _SENTENCE_SPLIT.split(chunk)]
        pieces = [p for p in pieces if p]
        for pi, piece in enumerate(pieces):
            segments.append(Segment(piece, is_list_item=(ci > 0 and pi == 0)))
    return segments


def segment_sentences(body: str) -> list[str]:
    return [s.text for s in segment_with_markers(body)]


def _strip_token(token: str) -> str:
    return token.strip(".,!?;:()[]").lower()


def normalize_verb(token: str) -> str | None:
    """Map a surface verb (possibly inflected) to a canonical action, or None."""
    word = _strip_token(token)
    for candidate in (word, word[:-1] if word.endswith("s") else "", word[:-2] if word.endswith("es") else ""):
        if candidate and candidate in VERB_SYNONYMS:
            return VERB_SYNONYMS[candidate]
    return None


def _leading_action(sentence: str) -> str | None:
    tokens = sentence.split()
    for token in tokens[:3]:
        word = _strip_token(token)
        if word in _LEADING_FILLERS:
            continue
        return normalize_verb(token)
    return None


class HeuristicClassifier:
    """Marker/keyword tagging.

    Imperative sentences with an in-vocabulary lead verb are S2R; otherwise
    expectation markers beat failure markers (EB before OB); list items with
    neither marker default to S2R; everything else is OTHER. Version and
    device lines carry no markers and so land in OTHER.
    """

    def classify(self, sentences: Sequence[Segment | str]) -> list[str]:
        tags = []
        for item in sentences:
            seg = item if isinstance(item, Segment) else Segment(str(item))
            tags.append(self._tag_one(seg))
        return tags

    def _tag_one(self, seg: Segment) -> str:
        if _leading_action(seg.text) is not None:
            return "S2R"
        if _EB_MARKERS.search(seg.text):
            return "EB"
        if _OB_MARKERS.search(seg.text):
            return "OB"
        if seg.is_list_item:
            return "S2R"
        return "OTHER"


class RemoteClassifier:
    """POSTs sentences to an external tagging service.

    Request: {"version": 1, "model": str, "sentences": [str]}
    Response: {"version": 1, "tags": [str]} with one tag per sentence.
    Any transport or schema failure raises RemoteClassifierError.
    """

    def __init__(self, url: str, model: str = "default", timeout: float = 10.0):
        self.url = url
        self.model = model
        self.timeout = timeout

    def classify(self, sentences: Sequence[Segment | str]) -> list[str]:
        texts = [s.text if isinstance(s, Segment) else str(s) for s in sentences]
        payload = json.dumps(
            {"version": WIRE_VERSION, "model": self.model, "sentences": texts}
        ).encode("utf-8")
        request = urllib.request.Request(
            self.url, data=payload, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                data = json.load(resp)
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise RemoteClassifierError(f"classifier request failed: {exc}") from exc
        tags = data.get("tags") if isinstance(data, dict) else None
        if (
            not isinstance(tags, list)
            or len(tags) != len(texts)
            or any(t not in TAGS for t in tags)
        ):
            raise RemoteClassifierError(f"bad classifier response: {data!r}")
        return list(tags)


def classify_sentences(
    sentences: Sequence[Segment | str], classifier=None
) -> list[tuple[str, str]]:
    """Tag each sentence OB/EB/S2R/OTHER.

    A failing remote classifier is never fatal: it logs a warning and the
    heuristic result is used instead.
    """
    segs = [s if isinstance(s, Segment) else Segment(str(s)) for s in sentences]
    if classifier is not None:
        try:
            tags = classifier.classify(segs)
            if len(tags) != len(segs) or any(t not in TAGS for t in tags):
                raise RemoteClassifierError(f"classifier returned bad tags: {tags!r}")
            return [(seg.text, tag) for seg, tag in zip(segs, tags)]
        except Exception as exc:  # a broken port must never kill report analysis
            logger.warning("classifier failed (%s); using heuristic", exc)
    tags = HeuristicClassifier().classify(segs)
    return [(seg.text, tag) for seg, tag in zip(segs, tags)]


@dataclass
class S2RStep:
    subject: str = "user"
    action: str = ""
    object: str = ""
    preposition: str | None = None
    object2: str | None = None


def _strip_articles(tokens: list[str]) -> list[str]:
    return [t for t in tokens if t.lower() not in _ARTICLES]


def parse_s2r(sentence: str) -> S2RStep:
    """Parse one step sentence into the five-slot structure.

    The first in-vocabulary verb anchors the parse; words before it form the
    subject (default "user"), a preposition right after the verb is treated
    as phrasal ("click on X" acts on X), and the first later preposition
    splits object from object2. Articles are dropped from every slot.
    """
    raw_tokens = sentence.split()
    verb_idx = None
    action = None
    for i, token in enumerate(raw_tokens):
        action = normalize_verb(token)
        if action is not None:
            verb_idx = i
            break
    if verb_idx is None or action is None:
        raise UnparseableStepError(sentence)

    tokens = [t.strip(".,!?;:") for t in raw_tokens]
    subject_tokens = [
        t for t in _strip_articles(tokens[:verb_idx]) if t.lower() not in _LEADING_FILLERS
    ]
    subject = " ".join(subject_tokens) if subject_tokens else "user"

    rest = tokens[verb_idx + 1 :]
    if rest and rest[0].lower() in PREPOSITIONS:
        rest = rest[1:]

    prep_idx = None
    for i, token in enumerate(rest):
        if token.lower() in PREPOSITIONS:
            prep_idx = i
            break

    if prep_idx is None or prep_idx == len(rest) - 1:
        obj_tokens = _strip_articles(rest if prep_idx is None else rest[:prep_idx])
        return S2RStep(subject=subject, action=action, object=" ".join(obj_tokens))

    obj_tokens = _strip_articles(rest[:prep_idx])
    obj2_tokens = _strip_articles(rest[prep_idx + 1 :])
    return S2RStep(
        subject=subject,
        action=action,
        object=" ".join(obj_tokens),
        preposition=rest[prep_idx].lower(),
        object2=" ".join(obj2_tokens) if obj2_tokens else None,
    )


def render_step(step: S2RStep) -> str:
    """Render slots back to text; slot words keep their order."""
    parts = [step.subject, step.action, step.object]
    if step.preposition and step.object2:
        parts.extend([step.preposition, step.object2])
    return " ".join(p for p in parts if p)
