"""Similarity kernels: smoothed context distributions, symmetric KL, SoftTFIDF."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

DEFAULT_SMOOTHING = 1e-4
DEFAULT_THETA = 0.9
WINKLER_PREFIX_SCALE = 0.1
WINKLER_MAX_PREFIX = 4


@dataclass(frozen=True)
class ContextDistribution:
    support: Mapping
    smoothing_mass: float = 0.0


def make_distribution(counts: Mapping, union_support: Iterable, smoothing: float = DEFAULT_SMOOTHING) -> ContextDistribution:
    """Additively smoothed empirical distribution over ``union_support``."""
    support = set(union_support)
    total = sum(counts.values())
    if total <= 0:
        raise ValueError("no observations")
    missing = set(counts) - support
    if missing:
        raise ValueError(f"counts contain contexts outside the support: {sorted(map(str, missing))[:5]}")
    denom = total + smoothing * len(support)
    probs = {c: (counts.get(c, 0) + smoothing) / denom for c in support}
    return ContextDistribution(probs, smoothing * len(support) / denom)


def kl(p: ContextDistribution, q: ContextDistribution) -> float:
    if p.support.keys() != q.support.keys():
        raise ValueError("distributions are defined over different supports")
    terms = []
    for c, pc in p.support.items():
        qc = q.support[c]
        if pc > 0:
            terms.append(pc * math.log(pc / qc))
    return math.fsum(terms)


def sym_kl(p: ContextDistribution, q: ContextDistribution) -> float:
    """D(p||q) + D(q||p), natural log."""
    return kl(p, q) + kl(q, p)


def count_divergence(a: Mapping, b: Mapping, smoothing: float = DEFAULT_SMOOTHING) -> float:
    """Symmetric KL between two raw count maps, smoothed over their joint support."""
    support = set(a) | set(b)
    return sym_kl(make_distribution(a, support, smoothing), make_distribution(b, support, smoothing))


def max_divergence(smoothing: float = DEFAULT_SMOOTHING) -> float:
    """Sentinel used when one side of a comparison has no observations."""
    return 2.0 * math.log(1.0 / smoothing)


def _char_class(ch: str) -> str:
    if ch.isdigit():
        return "d"
    if ch.isupper():
        return "u"
    if ch.isalnum():
        return "l"
    return "s"


def camel_tokenize(s: str) -> list[str]:
    """Split an identifier on camel-case, digit and separator boundaries.

    >>> camel_tokenize("GZIPOutputStream")
    ['gzip', 'output', 'stream']
    """
    tokens: list[str] = []
    cur: list[str] = []
    prev = "s"
    for i, ch in enumerate(s):
        cls = _char_class(ch)
        if cls == "s":
            if cur:
                tokens.append("".join(cur))
                cur = []
            prev = cls
            continue
        split = False
        if cur:
            if cls == "d" or prev == "d":
                split = cls != prev
            elif prev == "l" and cls == "u":
                split = True
            elif prev == "u" and cls == "u":
                # "GZIPOutput": break before the last capital of an upper run
                nxt = s[i + 1] if i + 1 < len(s) else ""
                split = _char_class(nxt) == "l" if nxt else False
        if split:
            tokens.append("".join(cur))
            cur = []
        cur.append(ch)
        prev = cls
    if cur:
        tokens.append("".join(cur))
    return [t.lower() for t in tokens]


def jaro(s1: str, s2: str) -> float:
    if s1 == s2:
        return 1.0
    n1, n2 = len(s1), len(s2)
    if n1 == 0 or n2 == 0:
        return 0.0
    window = max(max(n1, n2) // 2 - 1, 0)
    used = [False] * n2
    m1 = []
    for i, ch in enumerate(s1):
        lo, hi = max(0, i - window), min(n2, i + window + 1)
        for j in range(lo, hi):
            if not used[j] and s2[j] == ch:
                used[j] = True
                m1.append(ch)
                break
    m = len(m1)
    if m == 0:
        return 0.0
    m2 = [s2[j] for j in range(n2) if used[j]]
    transpositions = sum(a != b for a, b in zip(m1, m2)) / 2
    return (m / n1 + m / n2 + (m - transpositions) / m) / 3.0


def jaro_winkler(a: str, b: str) -> float:
    """Jaro-Winkler similarity; argument order does not affect the result."""
    s1, s2 = (a, b) if a <= b else (b, a)
    j = jaro(s1, s2)
    prefix = 0
    for c1, c2 in zip(s1[:WINKLER_MAX_PREFIX], s2[:WINKLER_MAX_PREFIX]):
        if c1 != c2:
            break
        prefix += 1
    return j + prefix * WINKLER_PREFIX_SCALE * (1.0 - j)


class IdfCorpus:
    """Document frequencies of camel-case tokens over labels and text mentions.

    Tokens that are not in the label vocabulary are re-segmented into label
    tokens when possible, so ``arraylist`` and ``ArrayList`` tokenize alike.
    """

    def __init__(self, labels: Iterable[str] = (), mentions: Iterable[str] = ()):
        self.df: Counter = Counter()
        self.n_docs = 0
        self.label_vocab: set[str] = set()
        labels = list(labels)
        for lab in labels:
            self.label_vocab.update(camel_tokenize(lab))
        self._cache: dict[str, list[str]] = {}
        for doc in itertools.chain(labels, mentions):
            self.df.update(set(self.tokenize(doc)))
            self.n_docs += 1

    def idf(self, token: str) -> float:
        n = max(self.n_docs, 1)
        return math.log((n + 1) / (self.df.get(token, 0) + 1)) + 1.0

    def tokenize(self, s: str) -> list[str]:
        cached = self._cache.get(s)
        if cached is not None:
            return cached
        out: list[str] = []
        for tok in camel_tokenize(s):
            if tok in self.label_vocab:
                out.append(tok)
            else:
                out.extend(_segment(tok, self.label_vocab) or [tok])
        self._cache[s] = out
        return out

    def weights(self, s: str) -> dict[str, float]:
        tf = Counter(self.tokenize(s))
        raw = {t: n * self.idf(t) for t, n in tf.items()}
        norm = math.sqrt(math.fsum(v * v for v in raw.values()))
        if norm == 0:
            return {}
        return {t: v / norm for t, v in raw.items()}

    def to_json(self) -> dict:
        return {"n_docs": self.n_docs, "df": dict(sorted(self.df.items())), "label_vocab": sorted(self.label_vocab)}

    @classmethod
    def from_json(cls, data: dict) -> "IdfCorpus":
        obj = cls()
        obj.n_docs = data["n_docs"]
        obj.df = Counter(data["df"])
        obj.label_vocab = set(data["label_vocab"])
        return obj


def _segment(token: str, vocab: set[str], max_len: int = 32) -> list[str] | None:
    """Split ``token`` into the fewest vocabulary pieces (>= 2), or None."""
    n = len(token)
    if n < 2 or n > max_len or not vocab:
        return None
    best: list[list[str] | None] = [None] * (n + 1)
    best[0] = []
    for end in range(1, n + 1):
        for start in range(end - 1, -1, -1):
            prev = best[start]
            piece = token[start:end]
            if prev is None or piece not in vocab:
                continue
            cand = prev + [piece]
            if best[end] is None or len(cand) < len(best[end]):
                best[end] = cand
    result = best[n]
    if result is None or len(result) < 2:
        return None
    return result


def soft_tfidf(a: str, b: str, idf_corpus: IdfCorpus, theta: float = DEFAULT_THETA) -> float:
    """SoftTFIDF similarity with a Jaro-Winkler inner kernel, in [0, 1].

    Token pairs with JW >= ``theta`` are matched one-to-one, best first;
    equal scores are ordered by the (sorted) token pair so the matching does
    not depend on argument order.
    """
    wa = idf_corpus.weights(a)
    wb = idf_corpus.weights(b)
    if not wa or not wb:
        return 0.0
    candidates = []
    for ta in wa:
        for tb in wb:
            sim = jaro_winkler(ta, tb)
            if sim >= theta:
                lo, hi = (ta, tb) if ta <= tb else (tb, ta)
                candidates.append((-sim, lo, hi, ta, tb))
    candidates.sort(key=lambda c: c[:3])
    used_a, used_b = set(), set()
    terms = []
    for neg_sim, _, _, ta, tb in candidates:
        if ta in used_a or tb in used_b:
            continue
        used_a.add(ta)
        used_b.add(tb)
        terms.append(wa[ta] * wb[tb] * -neg_sim)
    return min(1.0, max(0.0, math.fsum(terms)))
