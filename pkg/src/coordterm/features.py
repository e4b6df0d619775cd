"""Labeled pair datasets and the per-pair feature vector.

Layout of the 29 features::

    0  corpus_dist_sim      symmetric KL of word-context distributions
    1  string_sim           SoftTFIDF of the two words
    2  link_prob            product of best linking probabilities
    3  code_dist_sim        symmetric KL of the linked classes' code contexts
    4-9   a_pkg1..a_pkg6    common package ancestors within n levels
    10-15 a_type1..a_type6  common type ancestors within n levels
    16-28 the 13 code features (3..15) multiplied by link_prob
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .javafacts import MAX_ANCESTRY_LEVEL, CodeFacts
from .linker import Linker, pair_link_probability
from .simkit import DEFAULT_SMOOTHING, count_divergence, max_divergence, soft_tfidf
from .textcorpus import CorpusStats, canonical_pair, mention_filter, pmi

log = logging.getLogger(__name__)

LEVELS = range(1, MAX_ANCESTRY_LEVEL + 1)
CODE_FEATURES = ["code_dist_sim", *(f"a_pkg{n}" for n in LEVELS), *(f"a_type{n}" for n in LEVELS)]
FEATURE_NAMES = ["corpus_dist_sim", "string_sim", "link_prob", *CODE_FEATURES, *(f"w_{f}" for f in CODE_FEATURES)]
N_FEATURES = len(FEATURE_NAMES)
CORPUS_FEATURES = [0, 1]
CODE_ONLY_FEATURES = list(range(2, N_FEATURES))
FEATURE_SETS = {"corpus": CORPUS_FEATURES, "code": CODE_ONLY_FEATURES, "all": list(range(N_FEATURES))}
DEFAULT_LINK_THRESHOLD = 0.1

POSITIVE, NEGATIVE = "positive", "negative"

__all__ = [
    "FEATURE_NAMES",
    "LabeledPair",
    "ancestry_feature",
    "build_coord_dataset",
    "build_coord_pmi_dataset",
    "build_feature_vector",
    "mention_filter",
]


@dataclass(frozen=True)
class LabeledPair:
    x: str
    y: str
    label: str
    link_prob: float
    source: str

    @property
    def y_sign(self) -> int:
        return 1 if self.label == POSITIVE else -1


def ancestry_feature(facts: CodeFacts, x_class: str, y_class: str, taxonomy: str, n: int) -> int:
    if not 1 <= n <= MAX_ANCESTRY_LEVEL:
        raise ValueError(f"ancestry level must be in 1..{MAX_ANCESTRY_LEVEL}")
    tax = facts.taxonomy(taxonomy)
    return len(tax.ancestors_within(x_class, n) & tax.ancestors_within(y_class, n))


class FeatureBuilder:
    def __init__(self, stats: CorpusStats, facts: CodeFacts, linker: Linker,
                 smoothing: float = DEFAULT_SMOOTHING, link_threshold: float = DEFAULT_LINK_THRESHOLD):
        self.stats = stats
        self.facts = facts
        self.linker = linker
        self.smoothing = smoothing
        self.link_threshold = link_threshold
        self.sentinel = max_divergence(smoothing)

    def divergence(self, a, b) -> float:
        if not a or not b:
            return self.sentinel
        return count_divergence(a, b, self.smoothing)

    def link_prob(self, x: str, y: str) -> float:
        return pair_link_probability(self.linker.link(x), self.linker.link(y))

    def vector(self, x: str, y: str) -> np.ndarray:
        lx, ly = self.linker.link(x), self.linker.link(y)
        lp = pair_link_probability(lx, ly)
        if lp <= self.link_threshold:
            raise ValueError(f"pair ({x}, {y}) has link probability {lp:.4g} <= {self.link_threshold}")
        cx, cy = lx.best_class, ly.best_class
        corpus = self.divergence(self.stats.contexts_of(x), self.stats.contexts_of(y))
        string = soft_tfidf(x, y, self.linker.idf, self.linker.theta)
        # identical referents have identical context distributions
        code = 0.0 if cx == cy else self.divergence(self.facts.contexts_of(cx), self.facts.contexts_of(cy))
        pkg = [ancestry_feature(self.facts, cx, cy, "package", n) for n in LEVELS]
        typ = [ancestry_feature(self.facts, cx, cy, "type", n) for n in LEVELS]
        raw = np.array([code, *pkg, *typ], dtype=float)
        return np.concatenate([[corpus, string, lp], raw, raw * lp])


def build_feature_vector(x: str, y: str, stats: CorpusStats, facts: CodeFacts, linker: Linker, **kw) -> np.ndarray:
    return FeatureBuilder(stats, facts, linker, **kw).vector(x, y)


def _eligible_words(stats: CorpusStats, linker: Linker, threshold: float) -> list[str]:
    """Camel-case words whose best link could still clear the pair threshold."""
    return [w for w in sorted(stats.word_freq) if mention_filter(w) and linker.link(w).probability > threshold]


def _balance(pos: list, neg: list, rng: random.Random, what: str) -> tuple[list, list]:
    if len(neg) < len(pos):
        log.warning("%s: only %d eligible negatives for %d positives; truncating positives", what, len(neg), len(pos))
        pos = sorted(rng.sample(pos, len(neg)))
    elif len(neg) > len(pos):
        neg = sorted(rng.sample(neg, len(pos)))
    return pos, neg


def _positive_candidates(stats: CorpusStats, linker: Linker, threshold: float) -> list[tuple[str, str, float]]:
    out = []
    for x, y in sorted(stats.conj_pairs):
        if x == y or not (mention_filter(x) and mention_filter(y)):
            continue
        lp = linker.pair_probability(x, y)
        if lp > threshold:
            out.append((x, y, lp))
    return out


def build_coord_dataset(stats: CorpusStats, facts: CodeFacts, linker: Linker, seed: int = 0,
                        threshold: float = DEFAULT_LINK_THRESHOLD) -> list[LabeledPair]:
    """Conjunction pairs as positives, random non-conjunction word pairs as negatives."""
    rng = random.Random(seed)
    pos = _positive_candidates(stats, linker, threshold)
    words = _eligible_words(stats, linker, threshold)
    neg = []
    for x, y in itertools.combinations(words, 2):
        if (x, y) in stats.conj_pairs:
            continue
        lp = linker.pair_probability(x, y)
        if lp > threshold:
            neg.append((x, y, lp))
    pos, neg = _balance(pos, neg, rng, "coord")
    return [LabeledPair(x, y, POSITIVE, lp, "conj-pattern") for x, y, lp in pos] + [
        LabeledPair(x, y, NEGATIVE, lp, "random-negative") for x, y, lp in neg
    ]


def build_coord_pmi_dataset(stats: CorpusStats, facts: CodeFacts, linker: Linker, q: float = 0.25, seed: int = 0,
                            threshold: float = DEFAULT_LINK_THRESHOLD) -> list[LabeledPair]:
    """High-PMI conjunction pairs against low-PMI co-occurring frequent pairs."""
    if not 0 < q <= 0.5:
        raise ValueError("quantile q must lie in (0, 0.5]")
    rng = random.Random(seed)
    pos_all = [(x, y, lp, pmi(stats, x, y)) for x, y, lp in _positive_candidates(stats, linker, threshold)]
    pos = []
    if pos_all:
        cut = float(np.quantile([p[3] for p in pos_all], 1.0 - q))
        pos = [(x, y, lp) for x, y, lp, v in pos_all if v >= cut]
    median = float(np.median(list(stats.word_freq.values()))) if stats.word_freq else 0.0
    frequent = set(w for w in _eligible_words(stats, linker, threshold) if stats.word_freq[w] > median)
    neg_all = []
    for (x, y), n in sorted(stats.pair_freq.items()):
        if n <= 0 or x not in frequent or y not in frequent or (x, y) in stats.conj_pairs:
            continue
        lp = linker.pair_probability(x, y)
        if lp > threshold:
            neg_all.append((x, y, lp, pmi(stats, x, y)))
    neg = []
    if neg_all:
        cut = float(np.quantile([p[3] for p in neg_all], q))
        neg = [(x, y, lp) for x, y, lp, v in neg_all if v <= cut]
    pos, neg = _balance(pos, neg, rng, "coord-pmi")
    return [LabeledPair(x, y, POSITIVE, lp, "conj-pattern") for x, y, lp in pos] + [
        LabeledPair(x, y, NEGATIVE, lp, "pmi-negative") for x, y, lp in neg
    ]


def feature_matrix(pairs, builder: FeatureBuilder) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([builder.vector(p.x, p.y) for p in pairs], dtype=float).reshape(len(pairs), N_FEATURES)
    y = np.array([p.y_sign for p in pairs], dtype=int)
    return X, y


def write_dataset(path: str | Path, pairs, X: np.ndarray, config_echo: str | None = None) -> None:
    lines = []
    if config_echo is not None:
        lines.append(f"# config: {config_echo}")
    lines.append("\t".join(["x", "y", "label", "link_prob", *(f"f{i}" for i in range(1, N_FEATURES + 1))]))
    for p, row in zip(pairs, X):
        lines.append("\t".join([p.x, p.y, p.label, repr(float(p.link_prob)), *(repr(float(v)) for v in row)]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_dataset(path: str | Path) -> tuple[list[LabeledPair], np.ndarray]:
    pairs, rows = [], []
    header_seen = False
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if not header_seen:
            if cols[:4] != ["x", "y", "label", "link_prob"] or len(cols) != 4 + N_FEATURES:
                raise ValueError(f"{path}: unexpected dataset header")
            header_seen = True
            continue
        x, y, label, lp = cols[:4]
        pairs.append(LabeledPair(x, y, label, float(lp), ""))
        rows.append([float(v) for v in cols[4:]])
    return pairs, np.array(rows, dtype=float).reshape(len(rows), N_FEATURES)


def candidate_pairs(stats: CorpusStats, linker: Linker, threshold: float = DEFAULT_LINK_THRESHOLD) -> list[tuple[str, str]]:
    """Co-occurring camel-case word pairs that link above threshold: the ranking pool."""
    words = set(_eligible_words(stats, linker, threshold))
    out = set()
    for (x, y) in itertools.chain(stats.pair_freq, stats.conj_pairs):
        if x in words and y in words and x != y and linker.pair_probability(x, y) > threshold:
            out.add(canonical_pair(x, y))
    return sorted(out)

