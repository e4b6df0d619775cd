"""Plain-text ingestion: tokenization, conjunction pairs, and corpus statistics."""
from __future__ import annotations

import itertools
import json
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

# identifiers keep internal `.`, `_` and `$` (java.lang.String, Outer$Inner)
_TOKEN_RE = re.compile(r"[\w$]+(?:\.[\w$]+)*|\n[ \t\r\f\v]*\n|[^\w\s]", re.UNICODE)
_TERMINATORS = {".", "?", "!"}
CONJUNCTIONS = {"and", "or"}


class Token(NamedTuple):
    surface: str
    sentence_index: int
    position: int


def tokenize(text: str) -> list[list[Token]]:
    """Split text into sentences of tokens.

    Sentences end at `.`, `?`, `!` (when not inside an identifier) or at a
    blank line. Terminators are dropped; other punctuation becomes its own
    token.
    """
    sentences: list[list[Token]] = []
    current: list[str] = []

    def flush():
        if current:
            idx = len(sentences)
            sentences.append([Token(s, idx, i) for i, s in enumerate(current)])
            current.clear()

    for m in _TOKEN_RE.finditer(text):
        tok = m.group(0)
        if tok in _TERMINATORS or tok.startswith("\n"):
            flush()
        else:
            current.append(tok)
    flush()
    return sentences


def surfaces(sentences: Iterable[Iterable[Token]]) -> list[list[str]]:
    return [[t.surface if isinstance(t, Token) else t for t in s] for s in sentences]


def is_word(surface: str) -> bool:
    return any(ch.isalnum() for ch in surface)


def mention_filter(word: str) -> bool:
    """Camel-case shape test: alphanumeric, >=2 upper-case and >=1 lower-case letters."""
    if not word or not word.isalnum():
        return False
    upper = sum(1 for ch in word if ch.isupper())
    lower = sum(1 for ch in word if ch.islower())
    return upper >= 2 and lower >= 1


def conj_member_filter(word: str) -> bool:
    """Looser shape test for conjunction members: alphanumeric with mixed case.

    Single-capital class names such as ``Vector`` pass here; the stricter
    :func:`mention_filter` is applied when datasets are built.
    """
    return word.isalnum() and any(ch.isupper() for ch in word) and any(ch.islower() for ch in word)


def canonical_pair(x: str, y: str) -> tuple[str, str]:
    return (x, y) if x <= y else (y, x)


def extract_conjunction_pairs(sentences) -> set[tuple[str, str]]:
    """Pairs joined by `X and Y` / `X or Y`, including comma chains `A, B and C`.

    Every member of a chain pairs with every other member; members failing
    :func:`conj_member_filter` are dropped from the chain.
    """
    pairs: set[tuple[str, str]] = set()
    for sent in surfaces(sentences):
        n = len(sent)
        for i, tok in enumerate(sent):
            if tok.lower() not in CONJUNCTIONS or i == 0 or i + 1 >= n:
                continue
            right = sent[i + 1]
            if not is_word(right):
                continue
            j = i - 1
            if sent[j] == "," and j > 0:  # serial comma: "A, B, and C"
                j -= 1
            if not is_word(sent[j]):
                continue
            members = [sent[j], right]
            while j >= 2 and sent[j - 1] == "," and is_word(sent[j - 2]):
                j -= 2
                members.append(sent[j])
            kept = sorted({w for w in members if conj_member_filter(w)})
            for a, b in itertools.combinations(kept, 2):
                pairs.add((a, b))
    return pairs


@dataclass
class CorpusStats:
    word_freq: Counter = field(default_factory=Counter)
    pair_freq: Counter = field(default_factory=Counter)
    conj_pairs: set = field(default_factory=set)
    word_contexts: dict = field(default_factory=lambda: defaultdict(Counter))
    total_tokens: int = 0
    total_pairs: int = 0

    def contexts_of(self, word: str) -> Counter:
        return self.word_contexts.get(word, Counter())

    def pair_count(self, x: str, y: str) -> int:
        return self.pair_freq.get(canonical_pair(x, y), 0)

    def to_json(self) -> dict:
        return {
            "total_tokens": self.total_tokens,
            "total_pairs": self.total_pairs,
            "words": {w: self.word_freq[w] for w in sorted(self.word_freq)},
            "pairs": [[a, b, n] for (a, b), n in sorted(self.pair_freq.items())],
            "conj": [list(p) for p in sorted(self.conj_pairs)],
            "contexts": {
                w: {f"{d}:{s}": n for (d, s), n in sorted(ctx.items())}
                for w, ctx in sorted(self.word_contexts.items())
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "CorpusStats":
        for key in ("words", "pairs", "conj", "contexts"):
            if key not in data:
                raise ValueError(f"corpus stats document is missing '{key}'")
        stats = cls()
        stats.word_freq = Counter(data["words"])
        stats.pair_freq = Counter({(a, b): n for a, b, n in data["pairs"]})
        stats.conj_pairs = {tuple(p) for p in data["conj"]}
        ctxs = defaultdict(Counter)
        for w, ctx in data["contexts"].items():
            for key, n in ctx.items():
                d, _, s = key.partition(":")
                ctxs[w][(d, s)] = n
        stats.word_contexts = ctxs
        stats.total_tokens = data.get("total_tokens", sum(stats.word_freq.values()))
        stats.total_pairs = data.get("total_pairs", sum(stats.pair_freq.values()))
        return stats

    def dump(self, path: str | Path, header: dict | None = None) -> None:
        doc = self.to_json()
        if header is not None:
            doc = {"config": header, **doc}
        Path(path).write_text(json.dumps(doc, sort_keys=False, ensure_ascii=False) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CorpusStats":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def accumulate_contexts(sentences, window: int = 2, stats: CorpusStats | None = None) -> CorpusStats:
    """Count words, sentence co-occurrence pairs, and direction-tagged neighbour contexts.

    Punctuation tokens are dropped before counting, so neighbours are the
    surrounding words. A pair is counted once per sentence it shares.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    stats = stats if stats is not None else CorpusStats()
    sents = surfaces(sentences)
    for sent in sents:
        words = [w for w in sent if is_word(w)]
        stats.word_freq.update(words)
        stats.total_tokens += len(words)
        for i, w in enumerate(words):
            ctx = stats.word_contexts[w]
            for j in range(max(0, i - window), i):
                ctx[("L", words[j])] += 1
            for j in range(i + 1, min(len(words), i + window + 1)):
                ctx[("R", words[j])] += 1
        distinct = sorted(set(words))
        for a, b in itertools.combinations(distinct, 2):
            stats.pair_freq[(a, b)] += 1
            stats.total_pairs += 1
    stats.conj_pairs |= extract_conjunction_pairs(sents)
    return stats


def build_stats(texts: Iterable[str], window: int = 2) -> CorpusStats:
    stats = CorpusStats()
    for text in texts:
        accumulate_contexts(tokenize(text), window, stats)
    return stats


def read_documents(paths, one_doc_per_line: bool = False) -> list[str]:
    docs = []
    for p in paths:
        text = Path(p).read_text(encoding="utf-8")
        if one_doc_per_line:
            docs.extend(line for line in text.splitlines() if line.strip())
        else:
            docs.append(text)
    return docs


def pmi(stats: CorpusStats, x: str, y: str) -> float:
    """Pointwise mutual information of a co-occurring word pair (natural log)."""
    joint = stats.pair_count(x, y)
    if joint <= 0:
        raise ValueError(f"PMI undefined: pair ({x!r}, {y!r}) never co-occurs")
    p_xy = joint / stats.total_pairs
    p_x = stats.word_freq[x] / stats.total_tokens
    p_y = stats.word_freq[y] / stats.total_tokens
    # multiply in canonical order so pmi(x, y) == pmi(y, x) bit for bit
    a, b = sorted((p_x, p_y))
    return math.log(p_xy / (a * b))
