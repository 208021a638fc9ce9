"""Source corpus scanning and text normalization.

Both source files and query text run through the same :class:`Preprocessor`
so term bags on the two sides are directly comparable.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import InputError

logger = logging.getLogger(__name__)

# lower-to-upper and acronym-to-word camel boundaries
_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")
_ALNUM_CHUNK = re.compile(r"[A-Za-z0-9]+")
_ALPHA_OR_DIGIT_RUN = re.compile(r"[A-Za-z]+|[0-9]+")
_RESOURCE_REF = re.compile(r"\bR\.id\.([A-Za-z_][A-Za-z0-9_]*)")
_QUOTED = re.compile(r"\"([^\"\n]*)\"|'([^'\n]*)'")
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ID_LIKE = re.compile(r"^[A-Za-z0-9_]{2,}$")

_VOWELS = "aeiou"


def _load_stopword_file(name: str) -> frozenset[str]:
    text = resources.files("guiloc").joinpath("data", name).read_text(encoding="utf-8")
    return _parse_stopword_text(text)


def _parse_stopword_text(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    """English stopwords plus Java/Kotlin keywords from the bundled data files."""
    return _load_stopword_file("stopwords_english.txt") | _load_stopword_file("stopwords_code.txt")


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a user-supplied stopword file (one word per line, # comments)."""
    p = Path(path)
    if not p.is_file():
        raise InputError(f"stopword file not found: {p}")
    return _parse_stopword_text(p.read_text(encoding="utf-8"))


def _stem_once(word: str) -> str:
    if len(word) <= 3:
        return word
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ss") or word.endswith("us"):
        return word
    for suffix in ("xes", "ches", "shes", "zes"):
        if word.endswith(suffix):
            return word[:-2]
    if word.endswith("s"):
        return word[:-1]
    for suffix in ("ing", "ed"):
        if word.endswith(suffix) and len(word) - len(suffix) >= 3:
            stem = word[: -len(suffix)]
            if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
                stem = stem[:-1]
            return stem
    if word.endswith("ly") and len(word) - 2 >= 3:
        return word[:-2]
    return word


def _stem(word: str) -> str:
    # iterate to a fixed point so stem(stem(x)) == stem(x)
    while True:
        out = _stem_once(word)
        if out == word:
            return out
        word = out


@dataclass(frozen=True)
class Preprocessor:
    """Turns raw text into a normalized term list.

    Splits on non-alphanumeric boundaries, then on camelCase humps and
    letter/digit boundaries, lowercases, drops terms shorter than
    ``min_term_len``, drops stopwords, and optionally stems.
    """

    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    min_term_len: int = 2
    stem: bool = False

    def tokens(self, text: str) -> list[str]:
        out = []
        for chunk in _ALNUM_CHUNK.findall(text):
            for piece in _CAMEL.split(chunk):
                for run in _ALPHA_OR_DIGIT_RUN.findall(piece):
                    term = run.lower()
                    if len(term) < self.min_term_len or term in self.stopwords:
                        continue
                    if self.stem:
                        term = _stem(term)
                        # a stem can land on a stopword ("classes" -> "class"),
                        # so re-filter to keep tokenization idempotent
                        if len(term) < self.min_term_len or term in self.stopwords:
                            continue
                    out.append(term)
        return out

    def term_set(self, text: str) -> set[str]:
        return set(self.tokens(text))

    def config(self) -> dict:
        return {
            "min_term_len": self.min_term_len,
            "stem": self.stem,
            "stopwords": sorted(self.stopwords),
        }

    @classmethod
    def from_config(cls, data: dict) -> "Preprocessor":
        return cls(
            stopwords=frozenset(data["stopwords"]),
            min_term_len=int(data["min_term_len"]),
            stem=bool(data["stem"]),
        )


def preprocess(text: str, preprocessor: Preprocessor | None = None) -> list[str]:
    """Normalize text with the default (or a given) preprocessor."""
    return (preprocessor or _DEFAULT).tokens(text)


_DEFAULT = Preprocessor()


@dataclass
class SourceDocument:
    """One indexed source file."""

    doc_id: int
    path: str
    class_name: str
    terms: Counter
    length: int
    resource_id_refs: set[str] = field(default_factory=set)

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "path": self.path,
            "class_name": self.class_name,
            "terms": dict(self.terms),
            "length": self.length,
            "resource_id_refs": sorted(self.resource_id_refs),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SourceDocument":
        return cls(
            doc_id=int(data["doc_id"]),
            path=data["path"],
            class_name=data["class_name"],
            terms=Counter(data["terms"]),
            length=int(data["length"]),
            resource_id_refs=set(data["resource_id_refs"]),
        )


def extract_code_facets(
    raw_text: str, path: str | Path, known_ids: frozenset[str] | set[str] | None = None
) -> tuple[str, set[str]]:
    """Extract (class_name, resource_id_refs) from one source file.

    class_name is the file basename without its extension. Resource ids are
    collected from ``R.id.<name>`` references, lowercased. When ``known_ids``
    is given, quoted strings and bare identifiers equal to a known id (an
    id-like token: letters, digits, underscore, length >= 2) also count.
    """
    refs = {m.lower() for m in _RESOURCE_REF.findall(raw_text)}
    if known_ids:
        for match in _QUOTED.finditer(raw_text):
            literal = match.group(1) if match.group(1) is not None else match.group(2)
            candidate = literal.strip().lower()
            if _ID_LIKE.match(candidate) and candidate in known_ids:
                refs.add(candidate)
        for ident in _IDENTIFIER.findall(raw_text):
            low = ident.lower()
            if low in known_ids:
                refs.add(low)
    return Path(path).stem, refs


def scan_corpus(
    root: str | Path,
    extensions: tuple[str, ...] = ("java", "kt"),
    preprocessor: Preprocessor | None = None,
) -> list[SourceDocument]:
    """Walk a source tree and build SourceDocuments.

    Files are ordered lexicographically by their path relative to root and
    doc_ids are assigned in that order. Unreadable files are logged and
    skipped; a missing root is fatal.
    """
    root = Path(root)
    if not root.is_dir():
        raise InputError(f"corpus root not found: {root}")
    if not extensions:
        raise InputError("at least one file extension is required")
    pre = preprocessor or _DEFAULT
    wanted = {e.lower().lstrip(".") for e in extensions}

    rel_paths = sorted(
        p.relative_to(root).as_posix()
        for p in root.rglob("*")
        if p.is_file() and p.suffix.lstrip(".").lower() in wanted
    )

    raws: list[tuple[str, str]] = []
    for rel in rel_paths:
        full = root / rel
        try:
            text = full.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            logger.warning("skipping unreadable file %s: %s", rel, exc)
            continue
        if not Path(rel).stem:
            logger.warning("skipping file with empty basename: %s", rel)
            continue
        raws.append((rel, text))

    # ids referenced anywhere in the corpus; second pass matches quoted
    # strings and identifiers against them
    known_ids = frozenset(
        m.lower() for _, text in raws for m in _RESOURCE_REF.findall(text)
    )

    docs: list[SourceDocument] = []
    for doc_id, (rel, text) in enumerate(raws):
        class_name, refs = extract_code_facets(text, rel, known_ids=known_ids)
        terms = Counter(pre.tokens(text))
        docs.append(
            SourceDocument(
                doc_id=doc_id,
                path=rel,
                class_name=class_name,
                terms=terms,
                length=sum(terms.values()),
                resource_id_refs=refs,
            )
        )
    logger.info("scanned %d files under %s", len(docs), root)
    return docs
