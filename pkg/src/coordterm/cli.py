"""Command-line entry points and the end-to-end pipeline runner."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import classifier, graphout
from .config import ConfigError, PipelineConfig
from .features import (
    FEATURE_NAMES,
    FEATURE_SETS,
    FeatureBuilder,
    build_coord_dataset,
    build_coord_pmi_dataset,
    candidate_pairs,
    feature_matrix,
    read_dataset,
    write_dataset,
)
from .javafacts import load_facts, parse_source_tree, save_facts
from .linker import Linker, save_links
from .textcorpus import CorpusStats, build_stats, mention_filter, read_documents

log = logging.getLogger("coordterm")

ARTIFACTS = {
    "ingest": ["corpus_stats.json"],
    "extract-facts": ["code_facts.json"],
    "link": ["links.json"],
    "build-dataset": ["dataset.tsv"],
    "train": ["cv.json", "model.json"],
    "rank": ["ranking.tsv"],
    "export-graph": ["graph.dot", "graph.json"],
}


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException | str):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")


def _columns(names) -> list[int]:
    return [FEATURE_NAMES.index(n) for n in names]


def _linker(stats: CorpusStats, facts, cfg: PipelineConfig) -> Linker:
    return Linker(facts, stats, candidate_threshold=cfg.link_candidate_threshold, theta=cfg.softtfidf_theta)


def _builder(stats, facts, cfg: PipelineConfig) -> FeatureBuilder:
    return FeatureBuilder(stats, facts, _linker(stats, facts, cfg), cfg.smoothing, cfg.link_pair_threshold)


def make_dataset(stats: CorpusStats, facts, cfg: PipelineConfig):
    builder = _builder(stats, facts, cfg)
    if cfg.dataset == "coord":
        pairs = build_coord_dataset(stats, facts, builder.linker, cfg.seed, cfg.link_pair_threshold)
    else:
        pairs = build_coord_pmi_dataset(stats, facts, builder.linker, cfg.pmi_quantile, cfg.seed, cfg.link_pair_threshold)
    X, _ = feature_matrix(pairs, builder)
    return pairs, X


def make_ranking(stats: CorpusStats, facts, model: classifier.LinearModel, cfg: PipelineConfig):
    builder = _builder(stats, facts, cfg)
    pairs = candidate_pairs(stats, builder.linker, cfg.link_pair_threshold)
    X = np.array([builder.vector(x, y) for x, y in pairs]).reshape(len(pairs), len(FEATURE_NAMES))
    return classifier.rank_pairs(model, pairs, X[:, _columns(model.feature_names)])


# stage bodies: each reads its inputs from disk and writes its outputs

def stage_ingest(cfg: PipelineConfig, out: Path) -> None:
    if not cfg.corpus:
        raise ValueError("no corpus files configured")
    docs = read_documents(cfg.corpus, cfg.one_doc_per_line)
    build_stats(docs, cfg.window).dump(out / "corpus_stats.json", cfg.to_dict())


def stage_extract(cfg: PipelineConfig, out: Path) -> None:
    if not cfg.source_root:
        raise ValueError("no source_root configured")
    save_facts(parse_source_tree(cfg.source_root), out / "code_facts.json", cfg.to_dict())


def stage_link(cfg: PipelineConfig, out: Path) -> None:
    stats = CorpusStats.load(out / "corpus_stats.json")
    linker = _linker(stats, load_facts(out / "code_facts.json"), cfg)
    links = {w: linker.link(w) for w in stats.word_freq if mention_filter(w)}
    save_links({w: l for w, l in links.items() if l.candidates}, out / "links.json", cfg.to_dict())


def stage_dataset(cfg: PipelineConfig, out: Path) -> None:
    pairs, X = make_dataset(CorpusStats.load(out / "corpus_stats.json"), load_facts(out / "code_facts.json"), cfg)
    write_dataset(out / "dataset.tsv", pairs, X, cfg.echo())


def stage_train(cfg: PipelineConfig, out: Path) -> None:
    pairs, X = read_dataset(out / "dataset.tsv")
    y = np.array([p.y_sign for p in pairs])
    cols = FEATURE_SETS[cfg.feature_set]
    folds = min(cfg.folds, len(y))
    acc = classifier.cross_validate(X[:, cols], y, folds, cfg.svm_c, cfg.seed)
    report = {"config": cfg.to_dict(), "accuracy": acc, "folds": folds, "examples": len(y)}
    (out / "cv.json").write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")
    model = classifier.train(X[:, cols], y, cfg.svm_c, cfg.seed, [FEATURE_NAMES[c] for c in cols])
    model.save(out / "model.json", cfg.to_dict())


def stage_rank(cfg: PipelineConfig, out: Path) -> None:
    stats = CorpusStats.load(out / "corpus_stats.json")
    model = classifier.LinearModel.load(out / "model.json")
    ranked = make_ranking(stats, load_facts(out / "code_facts.json"), model, cfg)
    classifier.write_ranking(out / "ranking.tsv", ranked, cfg.echo())


def stage_graph(cfg: PipelineConfig, out: Path) -> None:
    ranked = classifier.read_ranking(out / "ranking.tsv")
    g = graphout.build_graph(ranked, cfg.graph_threshold, cfg.graph_top_k)
    graphout.export(g, out / "graph.dot", "dot", cfg.echo())
    graphout.export(g, out / "graph.json", "json", cfg.echo())


STAGES = [
    ("ingest", stage_ingest, lambda cfg, out: [Path(p) for p in cfg.corpus]),
    ("extract-facts", stage_extract,
     lambda cfg, out: sorted(Path(cfg.source_root).rglob("*.java")) if cfg.source_root else []),
    ("link", stage_link, lambda cfg, out: [out / "corpus_stats.json", out / "code_facts.json"]),
    ("build-dataset", stage_dataset, lambda cfg, out: [out / "corpus_stats.json", out / "code_facts.json"]),
    ("train", stage_train, lambda cfg, out: [out / "dataset.tsv"]),
    ("rank", stage_rank, lambda cfg, out: [out / "model.json", out / "corpus_stats.json", out / "code_facts.json"]),
    ("export-graph", stage_graph, lambda cfg, out: [out / "ranking.tsv"]),
]


def _up_to_date(outputs: list[Path], inputs: list[Path], extra: list[Path]) -> bool:
    if not all(p.exists() for p in outputs):
        return False
    try:
        newest_in = max((p.stat().st_mtime_ns for p in [*inputs, *extra]), default=0)
    except FileNotFoundError:
        return False
    return min(p.stat().st_mtime_ns for p in outputs) > newest_in


def run_pipeline(cfg: PipelineConfig, config_path: str | Path | None = None, force: bool = False) -> dict[str, list[Path]]:
    """Run every stage in order, skipping stages whose outputs are newer than their inputs."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    extra = [Path(config_path)] if config_path else []
    produced = {}
    for name, body, inputs in STAGES:
        outputs = [out / f for f in ARTIFACTS[name]]
        try:
            ins = inputs(cfg, out)
            if not force and _up_to_date(outputs, ins, extra):
                log.info("%s: up to date", name)
            else:
                log.info("%s: running", name)
                body(cfg, out)
        except Exception as e:  # noqa: BLE001 - every failure is reported with its stage
            raise StageError(name, e) from e
        produced[name] = outputs
    return produced


# subcommands

def _args_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _cfg_from_args(args, **over) -> PipelineConfig:
    base = PipelineConfig.load(args.config).to_dict() if getattr(args, "config", None) else {"seed": args.seed}
    base.update({k: v for k, v in over.items() if v is not None})
    return PipelineConfig.from_dict(base)


def cmd_ingest(args):
    stats = build_stats(read_documents(args.files, args.one_doc_per_line), args.window)
    stats.dump(args.output, _args_echo(args))
    print(f"{len(stats.word_freq)} words, {stats.total_tokens} tokens, {len(stats.conj_pairs)} conjunction pairs")


def cmd_extract(args):
    facts = parse_source_tree(args.srcdir)
    save_facts(facts, args.output, _args_echo(args))
    for d in facts.diagnostics:
        print(d, file=sys.stderr)
    print(f"{len(facts.internal_classes())} classes, {len(facts.classes) - len(facts.internal_classes())} external")


def cmd_link(args):
    cfg = _cfg_from_args(args)
    linker = _linker(CorpusStats.load(args.stats), load_facts(args.facts), cfg)
    result = linker.link(args.word)
    print(json.dumps(result.to_json(), indent=1))


def cmd_build_dataset(args):
    cfg = _cfg_from_args(args, dataset=args.kind)
    pairs, X = make_dataset(CorpusStats.load(args.stats), load_facts(args.facts), cfg)
    write_dataset(args.output, pairs, X, cfg.echo())
    print(f"{len(pairs)} labeled pairs")


def _load_xy(path, feature_set):
    pairs, X = read_dataset(path)
    cols = FEATURE_SETS[feature_set]
    return X[:, cols], np.array([p.y_sign for p in pairs]), cols, pairs


def cmd_train(args):
    X, y, cols, _ = _load_xy(args.dataset, args.features)
    model = classifier.train(X, y, args.C, args.seed, [FEATURE_NAMES[c] for c in cols])
    model.save(args.output, _args_echo(args))
    print(f"trained on {len(y)} examples ({model.epochs} epochs)")


def cmd_cv(args):
    X, y, _, _ = _load_xy(args.dataset, args.features)
    acc = classifier.cross_validate(X, y, args.folds, args.C, args.seed)
    print(f"accuracy {acc:.4f} over {args.folds} folds")


def cmd_predict(args):
    model = classifier.LinearModel.load(args.model)
    pairs, X = read_dataset(args.dataset)
    scores = model.decision_function(X[:, _columns(model.feature_names)]) if pairs else []
    for p, s in zip(pairs, scores):
        print(f"{p.x}\t{p.y}\t{float(s)!r}")


def cmd_rank(args):
    cfg = _cfg_from_args(args)
    model = classifier.LinearModel.load(args.model)
    ranked = make_ranking(CorpusStats.load(args.stats), load_facts(args.facts), model, cfg)
    classifier.write_ranking(args.output, ranked, cfg.echo())
    print(f"{len(ranked)} ranked pairs")


def cmd_export_graph(args):
    g = graphout.build_graph(classifier.read_ranking(args.ranking), args.threshold, args.top_k)
    graphout.export(g, args.output, args.format, json.dumps(_args_echo(args), sort_keys=True))
    print(f"{len(g.nodes)} nodes, {len(g.edges)} edges, {len(set(g.community.values()))} communities")


def cmd_run(args):
    cfg = PipelineConfig.load(args.config)
    produced = run_pipeline(cfg, args.config, args.force)
    for name, paths in produced.items():
        print(f"{name}: {', '.join(str(p) for p in paths)}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coordterm", description="Grounded coordinate-term discovery for Java class mentions.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", help="pipeline config JSON supplying defaults")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("ingest-corpus", help="count words, pairs and contexts in text files")
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--one-doc-per-line", action="store_true")
    p.set_defaults(func=cmd_ingest, stage="ingest")

    p = sub.add_parser("extract-facts", help="parse a Java source tree into class facts")
    p.add_argument("srcdir")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_extract, stage="extract-facts")

    p = sub.add_parser("link", help="link a word to classes")
    p.add_argument("word")
    p.add_argument("--stats", required=True)
    p.add_argument("--facts", required=True)
    common(p)
    p.set_defaults(func=cmd_link, stage="link")

    p = sub.add_parser("build-dataset", help="build a labeled pair dataset with features")
    p.add_argument("--stats", required=True)
    p.add_argument("--facts", required=True)
    p.add_argument("--kind", choices=["coord", "coord-pmi"])
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=cmd_build_dataset, stage="build-dataset")

    for name, func, helptext in (("train", cmd_train, "fit a model"), ("cv", cmd_cv, "cross-validated accuracy")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("dataset")
        p.add_argument("-C", type=float, default=classifier.DEFAULT_C)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--features", choices=sorted(FEATURE_SETS), default="all")
        if name == "train":
            p.add_argument("-o", "--output", required=True)
        else:
            p.add_argument("-k", "--folds", type=int, default=classifier.DEFAULT_FOLDS)
        p.set_defaults(func=func, stage=name)

    p = sub.add_parser("predict", help="decision values for a dataset")
    p.add_argument("dataset")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_predict, stage="predict")

    p = sub.add_parser("rank", help="rank candidate pairs with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--stats", required=True)
    p.add_argument("--facts", required=True)
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=cmd_rank, stage="rank")

    p = sub.add_parser("export-graph", help="coordinate graph as DOT or JSON")
    p.add_argument("ranking")
    p.add_argument("-f", "--format", choices=["dot", "json"], default="dot")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--threshold", type=float, default=graphout.DEFAULT_THRESHOLD)
    p.add_argument("--top-k", type=int)
    p.set_defaults(func=cmd_export_graph, stage="export-graph")

    p = sub.add_parser("run", help="run the whole pipeline from a config file")
    p.add_argument("config")
    p.add_argument("--force", action="store_true", help="rerun stages even when up to date")
    p.set_defaults(func=cmd_run, stage="run")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except StageError as e:
        print(f"error: stage {e.stage}: {e.cause}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, ConfigError) as e:
        print(f"error: stage {args.stage}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
