import itertools
import json
import math
import random
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordterm.textcorpus import (
    CorpusStats,
    Token,
    accumulate_contexts,
    build_stats,
    extract_conjunction_pairs,
    is_word,
    pmi,
    read_documents,
    surfaces,
    tokenize,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.mark.parametrize("case", json.loads((FIXTURES / "tokenize_cases.json").read_text()))
def test_tokenize_matches_hand_tokenized_fixture(case):
    assert surfaces(tokenize(case["text"])) == case["sentences"]


def test_token_positions_strictly_increase():
    sents = tokenize("Use ArrayList, or Vector. Then stop!")
    for k, sent in enumerate(sents):
        assert [t.sentence_index for t in sent] == [k] * len(sent)
        positions = [t.position for t in sent]
        assert positions == sorted(set(positions))
        assert all(t.surface for t in sent)


def test_single_conjunction():
    assert extract_conjunction_pairs([["ArrayList", "and", "Vector"]]) == {("ArrayList", "Vector")}


def test_chained_conjunction_expands_to_all_pairs():
    pairs = extract_conjunction_pairs([["JButton", ",", "JLabel", "and", "JPanel"]])
    assert pairs == {("JButton", "JLabel"), ("JButton", "JPanel"), ("JLabel", "JPanel")}


def test_serial_comma_and_or():
    pairs = extract_conjunction_pairs([["JButton", ",", "JLabel", ",", "or", "JPanel"]])
    assert pairs == {("JButton", "JLabel"), ("JButton", "JPanel"), ("JLabel", "JPanel")}


def test_lowercase_terms_fail_the_mention_filter():
    assert extract_conjunction_pairs([["threads", "and", "characters"]]) == set()


def test_chain_drops_members_failing_the_filter():
    pairs = extract_conjunction_pairs([["JButton", ",", "label", "and", "JPanel"]])
    assert pairs == {("JButton", "JPanel")}


def test_window_one_contexts():
    stats = accumulate_contexts([[Token(s, 0, i) for i, s in enumerate("abc")]], window=1)
    assert stats.word_contexts["b"] == {("L", "a"): 1, ("R", "c"): 1}
    assert stats.word_contexts["a"] == {("R", "b"): 1}


def test_window_must_be_positive():
    with pytest.raises(ValueError):
        accumulate_contexts([], window=0)


def _random_corpus(seed, n=200):
    rng = random.Random(seed)
    vocab = ["ArrayList", "Vector", "HashMap", "JButton", "JLabel", "and", "or", "the", "a", "use", "is", "fast"]
    sentences = []
    for _ in range(n):
        words = [rng.choice(vocab) for _ in range(rng.randint(1, 12))]
        sentences.append(" ".join(words) + rng.choice([".", "?", "!"]))
    return " ".join(sentences)


def _brute_force(text, window):
    """Quadratic scan over every ordered pair of word tokens in a sentence."""
    freq, pairs, ctx = Counter(), Counter(), {}
    for sent in surfaces(tokenize(text)):
        words = [w for w in sent if is_word(w)]
        freq.update(words)
        for i, j in itertools.product(range(len(words)), repeat=2):
            if i != j and abs(i - j) <= window:
                d = "L" if j < i else "R"
                ctx.setdefault(words[i], Counter())[(d, words[j])] += 1
        for a in set(words):
            for b in set(words):
                if a < b:
                    pairs[(a, b)] += 1
    return freq, pairs, ctx


@pytest.mark.parametrize("window", [1, 2, 3])
def test_contexts_equal_quadratic_oracle_on_200_sentences(window):
    text = _random_corpus(window)
    stats = build_stats([text], window)
    freq, pairs, ctx = _brute_force(text, window)
    assert stats.word_freq == freq
    assert stats.pair_freq == pairs
    assert {w: dict(c) for w, c in stats.word_contexts.items() if c} == {w: dict(c) for w, c in ctx.items()}


def test_pmi_of_micro_corpus():
    stats = build_stats(["ArrayList and Vector grow. Vector is synchronized. ArrayList is not."])
    # 10 word tokens; 6 + 3 + 3 sentence pairs; the pair co-occurs once; each word twice
    expected = math.log(Fraction(1, 12) / (Fraction(2, 10) * Fraction(2, 10)))
    assert stats.total_tokens == 10 and stats.total_pairs == 12
    assert pmi(stats, "ArrayList", "Vector") == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(math.log(25 / 12), abs=1e-15)


def test_pmi_zero_for_independent_pair():
    fillers = [f"w{i}" for i in range(14)]
    text = f"x y {fillers[0]}. x. y. " + " ".join(fillers[1:]) + "."
    stats = build_stats([text])
    # 18 tokens and 81 pairs: p(x,y) = 1/81 = (2/18)^2
    assert (stats.total_tokens, stats.total_pairs) == (18, 81)
    assert pmi(stats, "x", "y") == pytest.approx(0.0, abs=1e-9)


def test_pmi_positive_when_always_together():
    stats = build_stats(["JButton JLabel. JButton JLabel. the cat sat. on a mat."])
    assert pmi(stats, "JButton", "JLabel") > 0


def test_pmi_requires_cooccurrence():
    stats = build_stats(["JButton here. JLabel there."])
    with pytest.raises(ValueError):
        pmi(stats, "JButton", "JLabel")


def test_json_round_trip(tmp_path):
    stats = build_stats([_random_corpus(5, 40)])
    path = tmp_path / "stats.json"
    stats.dump(path, {"seed": 1})
    again = CorpusStats.load(path)
    assert again.to_json() == stats.to_json()
    assert set(json.loads(path.read_text())) >= {"config", "words", "pairs", "conj", "contexts"}


def test_from_json_requires_keys():
    with pytest.raises(ValueError, match="contexts"):
        CorpusStats.from_json({"words": {}, "pairs": [], "conj": []})


def test_read_documents_one_per_line(tmp_path):
    p = tmp_path / "docs.txt"
    p.write_text("first doc\n\nsecond doc\n")
    assert read_documents([p], one_doc_per_line=True) == ["first doc", "second doc"]
    assert read_documents([p]) == ["first doc\n\nsecond doc\n"]


words = st.sampled_from(["ArrayList", "Vector", "JButton", "JLabel", "and", "or", ",", "the", "x", "HashMap"])
sentences = st.lists(st.lists(words, min_size=1, max_size=10), min_size=1, max_size=15)


@settings(max_examples=150, deadline=None)
@given(sentences, st.integers(1, 3))
def test_corpus_invariants(sents, window):
    text = " ".join(" ".join(s) + "." for s in sents)
    stats = build_stats([text], window)
    assert sum(stats.word_freq.values()) == stats.total_tokens
    assert sum(stats.pair_freq.values()) == stats.total_pairs
    for a, b in stats.pair_freq:
        assert a < b
    for x, y in stats.conj_pairs:
        assert stats.word_freq[x] >= 1 and stats.word_freq[y] >= 1
        assert stats.pair_count(x, y) > 0
    for w, ctx in stats.word_contexts.items():
        assert sum(ctx.values()) <= 2 * window * stats.word_freq[w]
    assert build_stats([text], window).to_json() == stats.to_json()


@settings(max_examples=100, deadline=None)
@given(sentences)
def test_pmi_symmetric_exactly(sents):
    stats = build_stats([" ".join(" ".join(s) + "." for s in sents)])
    for x, y in stats.pair_freq:
        assert pmi(stats, x, y) == pmi(stats, y, x)
