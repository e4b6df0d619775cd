"""Text-to-code entity linking through class labels.

A class C with label L is scored for word W as p(C, L) * p(L, W), where
p(C, L) = f(C) / sum over all classes of f, and p(L, W) is the SoftTFIDF
similarity of label and word. f(C) is the corpus count of C's qualified
name plus one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .javafacts import CodeFacts
from .simkit import DEFAULT_THETA, IdfCorpus, soft_tfidf
from .textcorpus import CorpusStats

DEFAULT_CANDIDATE_THRESHOLD = 0.6


@dataclass
class EntityLink:
    word: str
    candidates: list[tuple[str, float]] = field(default_factory=list)

    @property
    def best(self) -> tuple[str, float] | None:
        return self.candidates[0] if self.candidates else None

    @property
    def best_class(self) -> str | None:
        return self.candidates[0][0] if self.candidates else None

    @property
    def probability(self) -> float:
        return self.candidates[0][1] if self.candidates else 0.0

    def to_json(self) -> dict:
        return {
            "word": self.word,
            "best": list(self.best) if self.best else None,
            "candidates": [[q, p] for q, p in self.candidates],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EntityLink":
        return cls(doc["word"], [(q, p) for q, p in doc["candidates"]])


def build_idf_corpus(facts: CodeFacts, stats: CorpusStats | None = None) -> IdfCorpus:
    """IDF statistics over every class label plus every corpus word."""
    labels = sorted({c.label for c in facts.internal_classes()})
    mentions = sorted(stats.word_freq) if stats is not None else []
    return IdfCorpus(labels, mentions)


class Linker:
    """Links words to classes; caches label similarities per word."""

    def __init__(
        self,
        facts: CodeFacts,
        stats: CorpusStats,
        idf_corpus: IdfCorpus | None = None,
        candidate_threshold: float = DEFAULT_CANDIDATE_THRESHOLD,
        theta: float = DEFAULT_THETA,
    ):
        classes = facts.internal_classes()
        if not classes:
            raise ValueError("cannot link against an empty class table")
        self.facts = facts
        self.idf = idf_corpus if idf_corpus is not None else build_idf_corpus(facts, stats)
        self.candidate_threshold = candidate_threshold
        self.theta = theta
        self.freq = {c.qualified_name: stats.word_freq.get(c.qualified_name, 0) + 1 for c in classes}
        self.total = sum(self.freq.values())
        self.by_label: dict[str, list[str]] = {}
        for c in classes:
            self.by_label.setdefault(c.label, []).append(c.qualified_name)
        self._cache: dict[str, EntityLink] = {}

    def link(self, word: str) -> EntityLink:
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        scored = []
        for label, members in self.by_label.items():
            sim = soft_tfidf(label, word, self.idf, self.theta)
            if sim < self.candidate_threshold or sim <= 0.0:
                continue
            for qn in members:
                scored.append((qn, (self.freq[qn] / self.total) * sim))
        z = sum(s for _, s in scored)
        ranked = sorted(((qn, s / z) for qn, s in scored), key=lambda c: (-c[1], c[0])) if z > 0 else []
        result = EntityLink(word, ranked)
        self._cache[word] = result
        return result

    def pair_probability(self, x: str, y: str) -> float:
        return pair_link_probability(self.link(x), self.link(y))


def link(word: str, facts: CodeFacts, stats: CorpusStats, idf_corpus: IdfCorpus | None = None, **kw) -> EntityLink:
    return Linker(facts, stats, idf_corpus, **kw).link(word)


def pair_link_probability(lx: EntityLink, ly: EntityLink) -> float:
    """Product of the two best-candidate probabilities; 0 if either is unlinked."""
    if not lx.candidates or not ly.candidates:
        return 0.0
    a, b = sorted((lx.probability, ly.probability))
    return a * b


def save_links(links: dict[str, EntityLink], path: str | Path, header: dict | None = None) -> None:
    doc = {"links": [links[w].to_json() for w in sorted(links)]}
    if header is not None:
        doc = {"config": header, **doc}
    Path(path).write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


def load_links(path: str | Path) -> dict[str, EntityLink]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return {d["word"]: EntityLink.from_json(d) for d in doc["links"]}
