import math
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordterm.simkit import (
    ContextDistribution,
    IdfCorpus,
    camel_tokenize,
    count_divergence,
    jaro_winkler,
    kl,
    make_distribution,
    max_divergence,
    soft_tfidf,
    sym_kl,
)

LAM = 1e-4

LABELS = ["ArrayList", "Vector", "HashMap", "TreeMap", "JButton", "JMenuItem", "JRadioButtonMenuItem",
          "JRadioButton", "FileInputStream", "FileOutputStream", "OutputStream", "GZIPOutputStream", "String"]


@pytest.fixture(scope="module")
def idf():
    return IdfCorpus(LABELS, ["array", "list", "menu", "button"])


def test_single_context_distribution():
    d = make_distribution({"a": 1}, {"a"}, LAM)
    assert d.support == {"a": 1.0}


def test_smoothed_two_point_distribution():
    d = make_distribution({"a": 1}, {"a", "b"}, LAM)
    assert d.support["a"] == pytest.approx((1 + LAM) / (1 + 2 * LAM), abs=1e-15)
    assert d.support["b"] == pytest.approx(LAM / (1 + 2 * LAM), abs=1e-15)


def test_distribution_sums_to_one():
    counts = {f"c{i}": i % 7 + 1 for i in range(50)}
    d = make_distribution(counts, set(counts) | {"x", "y", "z"}, LAM)
    assert math.fsum(d.support.values()) == pytest.approx(1.0, abs=1e-12)
    assert all(p > 0 for p in d.support.values())


def test_no_observations():
    with pytest.raises(ValueError, match="no observations"):
        make_distribution({}, {"a"}, LAM)


def test_sym_kl_identity_is_exactly_zero():
    d = make_distribution({"a": 3, "b": 1}, {"a", "b", "c"}, LAM)
    assert sym_kl(d, d) == 0.0


def test_sym_kl_hand_oracle():
    p = ContextDistribution({"a": 0.5, "b": 0.5})
    q = ContextDistribution({"a": 0.25, "b": 0.75})
    expected = (0.5 * math.log(0.5 / 0.25) + 0.5 * math.log(0.5 / 0.75)
                + 0.25 * math.log(0.25 / 0.5) + 0.75 * math.log(0.75 / 0.5))
    assert sym_kl(p, q) == pytest.approx(expected, abs=1e-9)
    assert sym_kl(p, q) == pytest.approx(0.2747, abs=1e-4)


def test_support_mismatch():
    with pytest.raises(ValueError):
        kl(ContextDistribution({"a": 1.0}), ContextDistribution({"b": 1.0}))


def test_disjoint_supports_finite_and_growing_as_smoothing_shrinks():
    a, b = {"x": 3, "y": 1}, {"z": 2}
    values = [count_divergence(a, b, lam) for lam in (1e-2, 1e-3, 1e-4)]
    assert all(math.isfinite(v) for v in values)
    assert values[0] < values[1] < values[2]


def test_sentinel_value():
    assert max_divergence(LAM) == pytest.approx(2 * math.log(1 / LAM))


@pytest.mark.parametrize("s, expected", [
    ("ArrayList", ["array", "list"]),
    ("GZIPOutputStream", ["gzip", "output", "stream"]),
    ("x", ["x"]),
    ("", []),
    ("Base64Encoder", ["base", "64", "encoder"]),
    ("java.util.Map$Entry", ["java", "util", "map", "entry"]),
    ("HTTPServer2", ["http", "server", "2"]),
    ("snake_case-name", ["snake", "case", "name"]),
])
def test_camel_tokenize(s, expected):
    assert camel_tokenize(s) == expected


@given(st.text(alphabet="aBcDXYZ09._$-", max_size=20))
def test_camel_tokenize_loses_only_separators(s):
    assert "".join(camel_tokenize(s)) == re.sub(r"[^A-Za-z0-9]", "", s).lower()


# reference values from Winkler's record-linkage tables
@pytest.mark.parametrize("a, b, expected", [
    ("MARTHA", "MARHTA", 0.961),
    ("DWAYNE", "DUANE", 0.840),
    ("DIXON", "DICKSONX", 0.813),
    ("JONES", "JOHNSON", 0.832),
    ("MASSEY", "MASSIE", 0.933),
    ("ABROMS", "ABRAMS", 0.922),
    ("SHACKLEFORD", "SHACKELFORD", 0.982),
    ("DUNNINGHAM", "CUNNIGHAM", 0.896),
    ("NICHLESON", "NICHULSON", 0.956),
])
def test_jaro_winkler_reference_pairs(a, b, expected):
    assert jaro_winkler(a, b) == pytest.approx(expected, abs=1e-3)


def test_jaro_winkler_edge_cases():
    assert jaro_winkler("abc", "abc") == 1.0
    assert jaro_winkler("", "abc") == 0.0
    assert jaro_winkler("", "") == 1.0
    assert jaro_winkler("abc", "xyz") == 0.0


def test_soft_tfidf_self_similarity(idf):
    for lab in LABELS:
        assert soft_tfidf(lab, lab, idf) == pytest.approx(1.0, abs=1e-12)


def test_soft_tfidf_no_match(idf):
    assert soft_tfidf("HashMap", "JButton", idf) == 0.0


def test_morphology_ordering(idf):
    assert soft_tfidf("JRadioButtonMenuItem", "JMenuItem", idf) > soft_tfidf("JRadioButtonMenuItem", "HashMap", idf)


def test_lowercase_mention_matches_label(idf):
    assert soft_tfidf("arraylist", "ArrayList", idf) == pytest.approx(1.0)
    assert soft_tfidf("array", "ArrayList", idf) > 0.6


def test_idf_weights_are_positive(idf):
    for lab in LABELS:
        assert all(w > 0 for w in idf.weights(lab).values())


def test_idf_round_trip(idf):
    again = IdfCorpus.from_json(idf.to_json())
    assert soft_tfidf("JMenuItem", "JRadioButtonMenuItem", again) == soft_tfidf("JMenuItem", "JRadioButtonMenuItem", idf)


names = st.lists(st.sampled_from(["Array", "List", "Menu", "Item", "Button", "J", "Hash", "Map", "Lists", "Arr", "Maps"]),
                 min_size=1, max_size=4).map("".join)


@settings(max_examples=300, deadline=None)
@given(names, names)
def test_soft_tfidf_symmetric_and_bounded(a, b):
    idf = IdfCorpus(LABELS + [a, b])
    s = soft_tfidf(a, b, idf)
    assert 0.0 <= s <= 1.0
    assert s == soft_tfidf(b, a, idf)


counts = st.dictionaries(st.sampled_from("abcdefg"), st.integers(1, 20), min_size=1)


@settings(max_examples=300, deadline=None)
@given(counts, counts)
def test_sym_kl_properties(a, b):
    d = count_divergence(a, b, LAM)
    assert d == count_divergence(b, a, LAM)
    assert d >= 0.0 and math.isfinite(d)
    support = set(a) | set(b)
    same = make_distribution(a, support, LAM).support == make_distribution(b, support, LAM).support
    assert (d == 0.0) == same


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="abcdef", max_size=8), st.text(alphabet="abcdef", max_size=8))
def test_jaro_winkler_symmetric_in_unit_interval(a, b):
    s = jaro_winkler(a, b)
    assert 0.0 <= s <= 1.0
    assert s == jaro_winkler(b, a)
