"""Inverted index and the two lexical scorers."""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .corpus import Preprocessor, SourceDocument
from .errors import ConfigError, InputError
from .util import atomic_write_text, load_json_file, stable_json_dumps

logger = logging.getLogger(__name__)

INDEX_FORMAT = "guiloc-index"
INDEX_VERSION = 1

SCORERS = ("bm25", "rvsm")


@dataclass(frozen=True)
class ScoringParams:
    bm25_k1: float = 1.2
    bm25_b: float = 0.75


@dataclass
class RankEntry:
    path: str
    score: float
    gui_flags: set[str] = field(default_factory=set)


@dataclass
class RankedList:
    """An ordered ranking plus the query terms and warnings that produced it."""

    entries: list[RankEntry]
    query_terms_used: list[str]
    flags: list[str] = field(default_factory=list)

    def paths(self) -> list[str]:
        return [e.path for e in self.entries]


@dataclass
class CorpusIndex:
    documents: list[SourceDocument]
    doc_count: int
    doc_freq: dict[str, int]
    postings: dict[str, list[tuple[int, int]]]
    avg_length: float
    params: ScoringParams
    preprocessor: Preprocessor


def build_index(
    documents: Sequence[SourceDocument],
    params: ScoringParams | None = None,
    preprocessor: Preprocessor | None = None,
) -> CorpusIndex:
    """Build the inverted index over already-scanned documents.

    Postings lists hold (doc_id, term_frequency) pairs in doc_id order.
    """
    docs = list(documents)
    if not docs:
        raise InputError("cannot index an empty corpus")
    postings: dict[str, list[tuple[int, int]]] = defaultdict(list)
    for doc in docs:
        for term, freq in doc.terms.items():
            postings[term].append((doc.doc_id, freq))
    for plist in postings.values():
        plist.sort()
    doc_freq = {term: len(plist) for term, plist in postings.items()}
    total_len = sum(doc.length for doc in docs)
    return CorpusIndex(
        documents=docs,
        doc_count=len(docs),
        doc_freq=doc_freq,
        postings=dict(postings),
        avg_length=total_len / len(docs),
        params=params or ScoringParams(),
        preprocessor=preprocessor or Preprocessor(),
    )


def _sorted_entries(scores: dict[int, float], index: CorpusIndex) -> list[RankEntry]:
    by_id = {doc.doc_id: doc for doc in index.documents}
    entries = [
        RankEntry(path=by_id[doc_id].path, score=score)
        for doc_id, score in scores.items()
        if score > 0.0
    ]
    entries.sort(key=lambda e: (-e.score, e.path))
    return entries


def score_bm25(index: CorpusIndex, query: Sequence[str]) -> RankedList:
    """Okapi BM25.

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)); the term contribution is
    f * (k1 + 1) / (f + k1 * (1 - b + b * len / avg_len)), multiplied by the
    query-side frequency of t. Documents scoring zero are omitted.
    """
    query = list(query)
    if not query:
        return RankedList([], [], flags=["empty-query"])
    k1 = index.params.bm25_k1
    b = index.params.bm25_b
    n = index.doc_count
    avg = index.avg_length
    lengths = {doc.doc_id: doc.length for doc in index.documents}
    scores: dict[int, float] = defaultdict(float)
    for term, qtf in Counter(query).items():
        plist = index.postings.get(term)
        if not plist:
            continue
        df = index.doc_freq[term]
        idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
        for doc_id, f in plist:
            denom = f + k1 * (1.0 - b + b * lengths[doc_id] / avg)
            scores[doc_id] += qtf * idf * f * (k1 + 1.0) / denom
    return RankedList(_sorted_entries(scores, index), query)


def _rvsm_idf(n: int, df: int) -> float:
    return math.log(n / df) if df > 0 else 0.0


def score_rvsm(index: CorpusIndex, query: Sequence[str]) -> RankedList:
    """Length-regularized vector-space cosine.

    Term weights are (1 + ln f) * ln(N / df) on both sides. The cosine is
    multiplied by g(d) = 1 / (1 + e^(-norm_len(d))) where norm_len is the
    document length min-max normalized over the corpus, so longer files get
    a mild prior. Documents scoring zero are omitted.
    """
    query = list(query)
    if not query:
        return RankedList([], [], flags=["empty-query"])
    n = index.doc_count
    q_weights: dict[str, float] = {}
    for term, qtf in Counter(query).items():
        idf = _rvsm_idf(n, index.doc_freq.get(term, 0))
        if idf > 0.0:
            q_weights[term] = (1.0 + math.log(qtf)) * idf
    q_norm = math.sqrt(sum(w * w for w in q_weights.values()))
    if q_norm == 0.0:
        return RankedList([], query, flags=["no-discriminative-terms"])

    lengths = [doc.length for doc in index.documents]
    min_len, max_len = min(lengths), max(lengths)
    span = max_len - min_len

    scores: dict[int, float] = {}
    candidates: set[int] = set()
    for term in q_weights:
        for doc_id, _ in index.postings.get(term, ()):
            candidates.add(doc_id)
    by_id = {doc.doc_id: doc for doc in index.documents}
    for doc_id in candidates:
        doc = by_id[doc_id]
        dot = 0.0
        for term, qw in q_weights.items():
            f = doc.terms.get(term)
            if f:
                dot += qw * (1.0 + math.log(f)) * _rvsm_idf(n, index.doc_freq[term])
        if dot <= 0.0:
            continue
        d_norm_sq = 0.0
        for term, f in doc.terms.items():
            idf = _rvsm_idf(n, index.doc_freq[term])
            w = (1.0 + math.log(f)) * idf
            d_norm_sq += w * w
        if d_norm_sq == 0.0:
            continue
        norm_len = (doc.length - min_len) / span if span else 0.0
        g = 1.0 / (1.0 + math.exp(-norm_len))
        scores[doc_id] = g * dot / (q_norm * math.sqrt(d_norm_sq))
    return RankedList(_sorted_entries(scores, index), query)


_SCORER_FUNCS = {"bm25": score_bm25, "rvsm": score_rvsm}


def rank(index: CorpusIndex, query: Sequence[str], scorer: str = "bm25") -> RankedList:
    """Score the corpus against a query with the named scorer."""
    try:
        func = _SCORER_FUNCS[scorer]
    except KeyError:
        raise ConfigError(f"unknown scorer {scorer!r}; expected one of {', '.join(SCORERS)}")
    return func(index, query)


def save_index(index: CorpusIndex, path: str | Path) -> None:
    """Write the index as versioned JSON; derived statistics are rebuilt on load."""
    payload = {
        "format": INDEX_FORMAT,
        "version": INDEX_VERSION,
        "params": {"bm25_k1": index.params.bm25_k1, "bm25_b": index.params.bm25_b},
        "preprocess": index.preprocessor.config(),
        "documents": [doc.to_json() for doc in index.documents],
    }
    atomic_write_text(path, stable_json_dumps(payload))


def load_index(path: str | Path) -> CorpusIndex:
    data = load_json_file(path)
    if not isinstance(data, dict) or data.get("format") != INDEX_FORMAT:
        raise InputError(f"{path} is not a {INDEX_FORMAT} file")
    if data.get("version") != INDEX_VERSION:
        raise InputError(
            f"unsupported index version {data.get('version')!r} in {path}; "
            f"this build reads version {INDEX_VERSION}"
        )
    docs = [SourceDocument.from_json(d) for d in data["documents"]]
    params = ScoringParams(
        bm25_k1=float(data["params"]["bm25_k1"]),
        bm25_b=float(data["params"]["bm25_b"]),
    )
    pre = Preprocessor.from_config(data["preprocess"])
    return build_index(docs, params=params, preprocessor=pre)
