"""Class table, package/type taxonomies, and code-context counts."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

FACTS_VERSION = 1
MAX_ANCESTRY_LEVEL = 6


class FactsFormatError(ValueError):
    pass


class TaxonomyCycleError(ValueError):
    pass


class UnknownClassError(KeyError):
    def __str__(self):
        return f"unknown class: {self.args[0]}"


@dataclass
class ClassEntry:
    qualified_name: str
    kind: str = "class"
    superclass: str | None = None
    interfaces: list[str] = field(default_factory=list)
    external: bool = False

    @property
    def label(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1]

    @property
    def package(self) -> str:
        head, sep, _ = self.qualified_name.rpartition(".")
        return head if sep else ""

    @property
    def parents(self) -> list[str]:
        out = [self.superclass] if self.superclass else []
        return out + [i for i in self.interfaces if i not in out]

    def to_json(self) -> dict:
        return {
            "qualified_name": self.qualified_name,
            "label": self.label,
            "kind": self.kind,
            "package": self.package,
            "superclass": self.superclass,
            "interfaces": list(self.interfaces),
            "external": self.external,
        }


class TypeTaxonomy:
    """Inheritance DAG: child -> direct supertypes (superclass and interfaces)."""

    name = "type"

    def __init__(self, classes: dict[str, ClassEntry]):
        self.classes = classes
        self.edges = {qn: set(c.parents) for qn, c in classes.items()}
        self._check_acyclic()

    def _check_acyclic(self):
        state: dict[str, int] = {}
        for root in sorted(self.edges):
            if state.get(root):
                continue
            stack = [(root, iter(sorted(self.edges.get(root, ()))))]
            state[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[node] = 2
                    stack.pop()
                    continue
                s = state.get(nxt, 0)
                if s == 1:
                    raise TaxonomyCycleError(f"inheritance cycle through {nxt}")
                if s == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(sorted(self.edges.get(nxt, ())))))

    def ancestors_within(self, qn: str, n: int) -> set[str]:
        if qn not in self.classes:
            raise UnknownClassError(qn)
        if n < 1:
            raise ValueError("n must be >= 1")
        seen: set[str] = set()
        frontier = {qn}
        for _ in range(n):
            frontier = {p for node in frontier for p in self.edges.get(node, ())} - seen
            if not frontier:
                break
            seen |= frontier
        return seen


class PackageTaxonomy:
    """Namespace forest: class -> its package -> enclosing packages."""

    name = "package"

    def __init__(self, classes: dict[str, ClassEntry]):
        self.classes = classes

    def parent(self, node: str) -> str | None:
        if node in self.classes:
            pkg = self.classes[node].package
            return pkg or None
        head, sep, _ = node.rpartition(".")
        return head if sep else None

    def ancestors_within(self, qn: str, n: int) -> set[str]:
        if qn not in self.classes:
            raise UnknownClassError(qn)
        if n < 1:
            raise ValueError("n must be >= 1")
        out = []
        node = self.parent(qn)
        while node is not None and len(out) < n:
            out.append(node)
            node = self.parent(node)
        return set(out)


def ancestors_within(taxonomy, qn: str, n: int) -> set[str]:
    return taxonomy.ancestors_within(qn, n)


@dataclass
class CodeFacts:
    classes: dict[str, ClassEntry] = field(default_factory=dict)
    contexts: dict[str, Counter] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list, compare=False)

    def __post_init__(self):
        self._type_tax = None

    @property
    def type_taxonomy(self) -> TypeTaxonomy:
        if self._type_tax is None:
            self._type_tax = TypeTaxonomy(self.classes)
        return self._type_tax

    @property
    def package_taxonomy(self) -> PackageTaxonomy:
        return PackageTaxonomy(self.classes)

    def taxonomy(self, name: str):
        if name == "type":
            return self.type_taxonomy
        if name == "package":
            return self.package_taxonomy
        raise ValueError(f"unknown taxonomy {name!r}")

    def internal_classes(self) -> list[ClassEntry]:
        return [c for _, c in sorted(self.classes.items()) if not c.external]

    def contexts_of(self, qn: str) -> Counter:
        return self.contexts.get(qn, Counter())

    def to_json(self, header: dict | None = None) -> dict:
        doc: dict = {"version": FACTS_VERSION}
        if header is not None:
            doc["config"] = header
        doc["classes"] = [self.classes[q].to_json() for q in sorted(self.classes)]
        doc["contexts"] = {
            q: dict(sorted(ctx.items())) for q, ctx in sorted(self.contexts.items()) if ctx
        }
        return doc

    @classmethod
    def from_json(cls, doc) -> "CodeFacts":
        if not isinstance(doc, dict):
            raise FactsFormatError("facts document must be a JSON object")
        version = doc.get("version")
        if version != FACTS_VERSION:
            raise FactsFormatError(f"unsupported facts version {version!r} (expected {FACTS_VERSION})")
        if "classes" not in doc:
            raise FactsFormatError("facts document is missing 'classes'")
        classes: dict[str, ClassEntry] = {}
        for i, row in enumerate(doc["classes"]):
            where = f"classes[{i}]"
            if not isinstance(row, dict) or "qualified_name" not in row:
                raise FactsFormatError(f"{where}: missing 'qualified_name'")
            qn = row["qualified_name"]
            kind = row.get("kind", "class")
            if kind not in ("class", "interface"):
                raise FactsFormatError(f"{where}.kind: expected class or interface, got {kind!r}")
            entry = ClassEntry(qn, kind, row.get("superclass"), list(row.get("interfaces", [])), bool(row.get("external", False)))
            for key in ("label", "package"):
                if key in row and row[key] != getattr(entry, key):
                    raise FactsFormatError(f"{where}.{key}: {row[key]!r} disagrees with qualified name {qn!r}")
            if qn in entry.parents:
                raise FactsFormatError(f"{where}: {qn} inherits from itself")
            if qn in classes:
                raise FactsFormatError(f"{where}: duplicate class {qn}")
            classes[qn] = entry
        contexts: dict[str, Counter] = {}
        for qn, ctx in doc.get("contexts", {}).items():
            if qn not in classes:
                raise FactsFormatError(f"contexts.{qn}: class not in class table")
            for key, n in ctx.items():
                if not (key.startswith("ARG-") or key.startswith("API-")) or not isinstance(n, int) or n < 1:
                    raise FactsFormatError(f"contexts.{qn}.{key}: expected ARG-/API- key with count >= 1")
            contexts[qn] = Counter(ctx)
        facts = cls(classes, contexts)
        for entry in classes.values():
            for p in entry.parents:
                if p not in classes:
                    raise FactsFormatError(f"{entry.qualified_name}: parent {p} missing from class table")
        try:
            facts.type_taxonomy
        except TaxonomyCycleError as e:
            raise FactsFormatError(str(e)) from e
        return facts


def save_facts(facts: CodeFacts, path: str | Path, header: dict | None = None) -> None:
    text = json.dumps(facts.to_json(header), indent=1, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_facts(path: str | Path) -> CodeFacts:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FactsFormatError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    try:
        return CodeFacts.from_json(doc)
    except FactsFormatError as e:
        raise FactsFormatError(f"{path}: {e}") from e


def merge_contexts(parts) -> dict[str, Counter]:
    """Sum per-file context counts; order of ``parts`` does not matter."""
    total: dict[str, Counter] = {}
    for part in parts:
        for qn, ctx in part.items():
            total.setdefault(qn, Counter()).update(ctx)
    return total


__all__ = [
    "ClassEntry",
    "CodeFacts",
    "FactsFormatError",
    "MAX_ANCESTRY_LEVEL",
    "PackageTaxonomy",
    "TaxonomyCycleError",
    "TypeTaxonomy",
    "UnknownClassError",
    "ancestors_within",
    "load_facts",
    "merge_contexts",
    "save_facts",
]
