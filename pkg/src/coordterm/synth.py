"""Synthetic benchmark with known coordinate structure.

Classes are grouped into families. Members of a family are coordinate
terms of each other; pairs drawn across families are not. Each family
gets its own package, base class and API vocabulary, and its members are
talked about with a family-flavoured (but noisy) vocabulary in the text.
Some members are "strays": they live in a shared package and inherit from
a shared base, so code features alone cannot place them.

The generated Java goes through the real parser, and the text through the
real corpus statistics, so the benchmark exercises the whole feature path.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import classifier
from .features import FEATURE_SETS, NEGATIVE, POSITIVE, FeatureBuilder, LabeledPair
from .javafacts import CodeFacts, parse_sources
from .linker import Linker
from .textcorpus import CorpusStats, build_stats

_SYLLABLES = ["ka", "lo", "mi", "ru", "te", "vo", "za", "ne", "pi", "so", "du", "fe", "gi", "ha", "ju", "xo"]
_SUFFIXES = ["Stream", "Buffer", "Widget", "Codec", "Parser", "Handler", "Reader", "Writer", "Layout", "Border"]


@dataclass
class SynthParams:
    families: int = 6
    members: int = 8
    stray_rate: float = 0.3
    suffix_rate: float = 0.5
    mentions: tuple[int, int] = (2, 6)
    topical_rate: float = 0.3
    family_vocab: int = 12
    generic_vocab: int = 300
    api_size: int = 5
    calls: tuple[int, int] = (3, 8)
    api_noise: float = 0.3


@dataclass
class SynthWorld:
    families: list[list[str]]
    packages: dict[str, str]
    sentences: list[str] = field(default_factory=list)
    sources: dict[str, str] = field(default_factory=dict)

    @property
    def family_of(self) -> dict[str, int]:
        return {c: k for k, fam in enumerate(self.families) for c in fam}


def _word(rng: random.Random, n: int) -> str:
    return "".join(rng.choice(_SYLLABLES) for _ in range(n))


def _names(rng: random.Random, p: SynthParams) -> list[list[str]]:
    used: set[str] = set()
    families = []
    for k in range(p.families):
        home = _SUFFIXES[k % len(_SUFFIXES)]
        fam = []
        while len(fam) < p.members:
            suffix = home if rng.random() < p.suffix_rate else rng.choice(_SUFFIXES)
            name = _word(rng, 2).capitalize() + suffix
            if name not in used:
                used.add(name)
                fam.append(name)
        families.append(fam)
    return families


def generate(seed: int, params: SynthParams | None = None) -> SynthWorld:
    p = params or SynthParams()
    rng = random.Random(seed)
    families = _names(rng, p)
    generic = sorted({_word(rng, 3) for _ in range(p.generic_vocab)})
    topical = [sorted({_word(rng, 3) + "x" for _ in range(p.family_vocab)}) for _ in families]
    apis = [[f"{_word(rng, 2)}{k}" for _ in range(p.api_size)] for k in range(len(families))]
    shared_api = [f"{_word(rng, 2)}q" for _ in range(p.api_size * 2)]

    world = SynthWorld(families, {})
    src = world.sources
    src["synth/common/Component.java"] = "package synth.common;\npublic abstract class Component { }\n"
    for k, fam in enumerate(families):
        src[f"synth/fam{k}/Base{k}.java"] = f"package synth.fam{k};\npublic abstract class Base{k} {{ }}\n"
        for name in fam:
            stray = rng.random() < p.stray_rate
            pkg = "synth.common" if stray else f"synth.fam{k}"
            parent = "Component" if stray else f"Base{k}"
            world.packages[name] = pkg
            src[f"{pkg.replace('.', '/')}/{name}.java"] = f"package {pkg};\npublic class {name} extends {parent} {{ }}\n"

            calls = []
            for _ in range(rng.randint(*p.calls)):
                pool = shared_api if rng.random() < p.api_noise else apis[k]
                m = rng.choice(pool)
                calls.append(f"x.{m}();" if rng.random() < 0.6 else f"{m}(x);")
            body = " ".join(calls)
            src[f"synth/client/Use{name}.java"] = (
                f"package synth.client;\nimport {pkg}.{name};\n"
                f"public class Use{name} {{\n  void run({name} x) {{ {body} }}\n}}\n"
            )

            for _ in range(rng.randint(*p.mentions)):
                ctx = [rng.choice(topical[k]) if rng.random() < p.topical_rate else rng.choice(generic) for _ in range(4)]
                world.sentences.append(f"the {ctx[0]} {ctx[1]} {name} {ctx[2]} {ctx[3]} .")
    rng.shuffle(world.sentences)
    return world


def labeled_pairs(world: SynthWorld, seed: int) -> list[LabeledPair]:
    """All within-family pairs as positives and as many cross-family pairs as negatives."""
    rng = random.Random(seed)
    fam = world.family_of
    names = sorted(fam)
    pos, neg = [], []
    for x, y in itertools.combinations(names, 2):
        (pos if fam[x] == fam[y] else neg).append((x, y))
    neg = sorted(rng.sample(neg, min(len(neg), len(pos))))
    return [LabeledPair(x, y, POSITIVE, 0.0, "family") for x, y in pos] + [
        LabeledPair(x, y, NEGATIVE, 0.0, "cross-family") for x, y in neg
    ]


def build(world: SynthWorld) -> tuple[CorpusStats, CodeFacts, Linker]:
    stats = build_stats(world.sentences)
    facts = parse_sources(world.sources)
    return stats, facts, Linker(facts, stats)


def run_benchmark(seed: int, params: SynthParams | None = None, folds: int = 10, C: float = 1.0) -> dict[str, float]:
    """Cross-validated accuracy for each feature set on one generated world."""
    world = generate(seed, params)
    stats, facts, linker = build(world)
    builder = FeatureBuilder(stats, facts, linker, link_threshold=0.0)
    pairs = labeled_pairs(world, seed)
    X = np.array([builder.vector(p.x, p.y) for p in pairs])
    y = np.array([p.y_sign for p in pairs])
    return {name: classifier.cross_validate(X[:, cols], y, folds, C, seed) for name, cols in FEATURE_SETS.items()}
