"""Build :class:`CodeFacts` from a Java source tree.

Two passes: every file is parsed into declarations first, so that type
names can be resolved against the whole tree; then method bodies are
scanned for ARG-/API- contexts.

Static types of variables are looked up locals > parameters > fields; type
names resolve through enclosing types, single-type imports, the same
package, ``java.lang`` and on-demand imports, in that order. Anything that
does not resolve to a class defined in the tree gets no context counts.
"""
from __future__ import annotations

import logging
from collections import Counter
from pathlib import Path

from .facts import ClassEntry, CodeFacts, TaxonomyCycleError
from .lexer import KEYWORDS, PRIMITIVES, JavaSyntaxError, Tok
from .parser import CompilationUnit, TypeDecl, TypeRef, parse_java

log = logging.getLogger(__name__)

_DECL_FOLLOW = {"=", ";", ",", ":", ")", "["}
_STMT_START = {"{", "}", ";", "(", ","}


def _qualify(cu: CompilationUnit, decl: TypeDecl) -> str:
    return f"{cu.package}.{decl.name}" if cu.package else decl.name


class _Tree:
    """All parsed declarations, indexed for name resolution."""

    def __init__(self, units: list[CompilationUnit]):
        self.units = units
        self.decls: dict[str, tuple[TypeDecl, CompilationUnit]] = {}
        self.by_package: dict[str, dict[str, str]] = {}
        for cu in units:
            for decl in cu.types:
                qn = _qualify(cu, decl)
                if qn in self.decls:
                    log.warning("%s: duplicate declaration of %s ignored", cu.path, qn)
                    continue
                self.decls[qn] = (decl, cu)
                self.by_package.setdefault(cu.package, {})[decl.name] = qn

    def resolve(self, name: str, cu: CompilationUnit, decl: TypeDecl | None, tparams: set[str] = frozenset()) -> str | None:
        if "." in name:
            return self._resolve_dotted(name, cu, decl, tparams)
        if name in tparams or name in PRIMITIVES:
            return None
        d = decl
        while d is not None:
            if name in d.type_params:
                return None
            if d.name.rsplit("$", 1)[-1] == name:
                return _qualify(cu, d)
            cand = f"{_qualify(cu, d)}${name}"
            if cand in self.decls:
                return cand
            d = d.outer
        imported = cu.imports.get(name)
        if imported is not None:
            return imported if imported in self.decls else self._resolve_dotted(imported, cu, None, set())
        for pkg in (cu.package, "java.lang", *cu.wildcard_imports):
            qn = self.by_package.get(pkg, {}).get(name)
            if qn is not None:
                return qn
        return None

    def _resolve_dotted(self, name, cu, decl, tparams) -> str | None:
        if name in self.decls:
            return name
        parts = name.split(".")
        # Outer.Inner relative to the current scope
        head = self.resolve(parts[0], cu, decl, tparams) if "." not in parts[0] else None
        if head is not None:
            cand = head + "".join("$" + p for p in parts[1:])
            if cand in self.decls:
                return cand
        # pkg.Outer.Inner
        for k in range(len(parts) - 1, 0, -1):
            cand = ".".join(parts[:k]) + "." + "$".join(parts[k:])
            if cand in self.decls:
                return cand
        return None

    def external_name(self, ref: TypeRef, cu: CompilationUnit) -> str:
        return cu.imports.get(ref.name, ref.name)


class _BodyScanner:
    """Counts contexts inside one body (method, constructor or initializer)."""

    def __init__(self, tree: _Tree, cu: CompilationUnit, decl: TypeDecl, params: dict[str, TypeRef], tparams: set[str], out: dict[str, Counter]):
        self.tree = tree
        self.cu = cu
        self.decl = decl
        self.params = params
        self.tparams = set(tparams) | _all_type_params(decl)
        self.out = out
        self.scopes: list[dict[str, TypeRef]] = [{}]

    # -- resolution -------------------------------------------------------
    def class_of(self, ref: TypeRef | None) -> str | None:
        if ref is None or ref.is_array or ref.is_primitive:
            return None
        return self.tree.resolve(ref.name, self.cu, self.decl, self.tparams)

    def lookup_var(self, name: str) -> TypeRef | None:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        if name in self.params:
            return self.params[name]
        return self.lookup_field(name)

    def lookup_field(self, name: str) -> TypeRef | None:
        d = self.decl
        while d is not None:
            if name in d.fields:
                return d.fields[name]
            d = d.outer
        return None

    def this_class(self) -> str:
        return _qualify(self.cu, self.decl)

    def bump(self, qn: str | None, key: str):
        if qn is not None and qn in self.tree.decls:
            self.out.setdefault(qn, Counter())[key] += 1

    # -- scanning -----------------------------------------------------------
    def run(self, toks: list[Tok]):
        skips = _skippable_spans(toks)
        i, n = 0, len(toks)
        while i < n:
            if i in skips:
                i = skips[i]
                continue
            t = toks[i]
            if t.kind == "op":
                if t.text == "{":
                    self.scopes.append({})
                elif t.text == "}" and len(self.scopes) > 1:
                    self.scopes.pop()
                i += 1
                continue
            if t.kind == "ident":
                found = _match_local_decl(toks, i)
                if found is not None:
                    ref, names, name_idx = found
                    for name, dims in names:
                        self.scopes[-1][name] = TypeRef(ref.name, ref.dims + dims)
                    i = name_idx + 1
                    continue
                if i + 1 < n and toks[i + 1].text == "(" and t.text not in KEYWORDS:
                    self.invocation(toks, i)
            i += 1

    def invocation(self, toks: list[Tok], i: int):
        method = toks[i].text
        receiver: str | None = None
        if i > 0 and toks[i - 1].text == "new":
            return
        if i > 0 and toks[i - 1].text == ".":
            chain, j = [], i - 1
            while j > 0 and toks[j].text == "." and toks[j - 1].kind == "ident":
                chain.insert(0, toks[j - 1].text)
                j -= 2
            # toks[j] is the token just before the receiver chain
            if j >= 0 and toks[j].text == "new":
                return
            if chain and not (j >= 0 and toks[j].text == "."):
                receiver = self.receiver_class(chain)
        close = _matching(toks, i + 1)
        for arg in _split_args(toks[i + 2:close]):
            self.bump(self.arg_class(arg), f"ARG-{method}")
        if receiver is not None:
            self.bump(receiver, f"API-{method}")

    def receiver_class(self, chain: list[str]) -> str | None:
        if chain == ["this"]:
            return self.this_class()
        if chain[0] == "super":
            return None
        if chain[0] == "this":
            return self.class_of(self.lookup_field(chain[1])) if len(chain) == 2 else None
        if len(chain) == 1:
            ref = self.lookup_var(chain[0])
            if ref is not None:
                return self.class_of(ref)
            return self.tree.resolve(chain[0], self.cu, self.decl, self.tparams)
        if self.lookup_var(chain[0]) is not None:
            return None
        return self.tree.resolve(".".join(chain), self.cu, self.decl, self.tparams)

    def arg_class(self, arg: list[Tok]) -> str | None:
        if not arg:
            return None
        if len(arg) == 1:
            t = arg[0]
            if t.kind == "string":
                return self.tree.resolve("String", self.cu, self.decl, self.tparams)
            if t.kind != "ident":
                return None
            if t.text == "this":
                return self.this_class()
            if t.text in KEYWORDS:
                return None
            return self.class_of(self.lookup_var(t.text))
        texts = [t.text for t in arg]
        if len(arg) == 3 and texts[0] == "this" and texts[1] == "." and arg[2].kind == "ident":
            return self.class_of(self.lookup_field(texts[2]))
        if texts[0] == "new":
            return self._new_class(arg)
        if texts[0] == "(":
            return self._cast_class(arg)
        return None

    def _new_class(self, arg: list[Tok]) -> str | None:
        parts, k = [], 1
        while k < len(arg) and (arg[k].kind == "ident" or arg[k].text == "."):
            parts.append(arg[k].text)
            k += 1
        if not parts or k >= len(arg):
            return None
        if arg[k].text == "<":
            k = _skip_angle(arg, k)
            if k is None or k >= len(arg):
                return None
        if arg[k].text != "(":
            return None  # array creation
        end = _matching(arg, k)
        rest = arg[end + 1:]
        if rest and not (rest[0].text == "{" and _matching(arg, end + 1) == len(arg) - 1):
            return None
        return self.tree.resolve("".join(parts), self.cu, self.decl, self.tparams)

    def _cast_class(self, arg: list[Tok]) -> str | None:
        end = _matching(arg, 0)
        inner = arg[1:end]
        rest = arg[end + 1:]
        if not inner or not rest or inner[0].kind != "ident":
            return None
        names = []
        k = 0
        while k < len(inner):
            t = inner[k]
            if t.kind == "ident" or t.text == ".":
                names.append(t.text)
                k += 1
            elif t.text == "<":
                k = _skip_angle(inner, k)
                if k is None:
                    return None
            else:
                return None
        if rest[0].kind not in ("ident", "string", "number", "char") and rest[0].text != "(":
            return None
        depth = 0
        for t in rest:
            if t.text in "([{":
                depth += 1
            elif t.text in ")]}":
                depth -= 1
            elif depth == 0 and t.kind == "op" and t.text != ".":
                return None
        ref = TypeRef("".join(names))
        return self.class_of(ref)


def _all_type_params(decl: TypeDecl) -> set[str]:
    out: set[str] = set()
    d = decl
    while d is not None:
        out |= d.type_params
        d = d.outer
    return out


def _matching(toks: list[Tok], k: int) -> int:
    """Index of the bracket closing the one at ``k`` (or len-1 if unclosed)."""
    pairs = {"(": ")", "[": "]", "{": "}"}
    stack = []
    for j in range(k, len(toks)):
        t = toks[j]
        if t.kind != "op":
            continue
        if t.text in pairs:
            stack.append(pairs[t.text])
        elif stack and t.text == stack[-1]:
            stack.pop()
            if not stack:
                return j
    return len(toks) - 1


def _skip_angle(toks: list[Tok], k: int) -> int | None:
    """Index after a balanced ``<...>`` made only of type tokens, else None."""
    depth = 0
    for j in range(k, len(toks)):
        t = toks[j].text
        if t == "<":
            depth += 1
        elif t == ">":
            depth -= 1
            if depth == 0:
                return j + 1
        elif toks[j].kind == "ident" or t in (",", ".", "?", "[", "]", "&", "@"):
            continue
        else:
            return None
    return None


def _split_args(toks: list[Tok]) -> list[list[Tok]]:
    if not toks:
        return []
    args, cur, depth = [], [], 0
    for t in toks:
        if t.kind == "op" and t.text in "([{":
            depth += 1
        elif t.kind == "op" and t.text in ")]}":
            depth -= 1
        if depth == 0 and t.text == "," and t.kind == "op":
            args.append(cur)
            cur = []
        else:
            cur.append(t)
    args.append(cur)
    return args


def _match_type(toks: list[Tok], i: int) -> tuple[TypeRef, int] | None:
    """Match a type starting at ``i``; return it and the index just past it."""
    n = len(toks)
    t = toks[i]
    if t.kind != "ident" or (t.text in KEYWORDS and t.text not in PRIMITIVES and t.text != "var"):
        return None
    parts = [t.text]
    k = i + 1
    while True:
        if k < n and toks[k].text == "<":
            k = _skip_angle(toks, k)
            if k is None:
                return None
        if k + 1 < n and toks[k].text == "." and toks[k + 1].kind == "ident" and toks[k + 1].text not in KEYWORDS:
            parts.append(toks[k + 1].text)
            k += 2
            continue
        break
    dims = 0
    while k + 1 < n and toks[k].text == "[" and toks[k + 1].text == "]":
        dims += 1
        k += 2
    if k < n and toks[k].text == "...":
        dims += 1
        k += 1
    return TypeRef(".".join(parts), dims), k


def _match_local_decl(toks: list[Tok], i: int):
    """Recognise ``Type name [= ...] [, name2 ...]`` at a statement start.

    Returns (type, [(name, extra_dims)], index_of_first_name) or None.
    """
    if i > 0:
        prev = toks[i - 1]
        if not ((prev.kind == "op" and prev.text in _STMT_START) or prev.text == "final"):
            return None
    m = _match_type(toks, i)
    if m is None:
        return None
    ref, k = m
    n = len(toks)
    if k >= n or toks[k].kind != "ident" or toks[k].text in KEYWORDS:
        return None
    if k + 1 < n and toks[k + 1].text not in _DECL_FOLLOW:
        return None
    name_idx = k
    names = []
    j = k
    while True:
        name = toks[j].text
        j += 1
        dims = 0
        while j + 1 < n and toks[j].text == "[" and toks[j + 1].text == "]":
            dims += 1
            j += 2
        names.append((name, dims))
        # skip an initializer up to the next top-level ',' or terminator
        depth = 0
        while j < n:
            tx = toks[j].text
            if toks[j].kind == "op" and tx in "([{":
                depth += 1
            elif toks[j].kind == "op" and tx in ")]}":
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and tx in (",", ";", ":"):
                break
            j += 1
        if j + 2 < n and toks[j].text == "," and toks[j + 1].kind == "ident" and toks[j + 2].text in ("=", ",", ";", "["):
            j += 1
            continue
        return ref, names, name_idx


def _skippable_spans(toks: list[Tok]) -> dict[int, int]:
    """Anonymous class bodies and local type declarations: start -> end index."""
    spans: dict[int, int] = {}
    n = len(toks)
    for k, t in enumerate(toks):
        if t.kind != "ident":
            continue
        if t.text == "new":
            j = k + 1
            while j < n and toks[j].text not in ("(", "[", "{", ";"):
                j += 1
            if j < n and toks[j].text == "(":
                close = _matching(toks, j)
                if close + 1 < n and toks[close + 1].text == "{":
                    spans[close + 1] = _matching(toks, close + 1) + 1
        elif t.text in ("class", "interface", "enum") and (k == 0 or toks[k - 1].text != "."):
            j = k
            while j < n and toks[j].text != "{":
                j += 1
            if j < n:
                spans[k] = _matching(toks, j) + 1
    return spans


def _count_declarations(tree: _Tree, cu: CompilationUnit, decl: TypeDecl, out: dict[str, Counter]):
    qn = _qualify(cu, decl)
    outer_tparams = _all_type_params(decl)
    for m in decl.methods:
        tparams = outer_tparams | m.type_params
        if not m.is_constructor:
            out.setdefault(qn, Counter())[f"API-{m.name}"] += 1
            for ref, _ in m.params:
                if ref.is_array or ref.is_primitive:
                    continue
                pq = tree.resolve(ref.name, cu, decl, tparams)
                if pq is not None:
                    out.setdefault(pq, Counter())[f"ARG-{m.name}"] += 1
        if m.body is not None:
            params = {name: ref for ref, name in m.params}
            _BodyScanner(tree, cu, decl, params, m.type_params, out).run(m.body)
    for body in decl.init_bodies:
        _BodyScanner(tree, cu, decl, {}, set(), out).run(body)


def _class_entry(tree: _Tree, qn: str) -> ClassEntry:
    decl, cu = tree.decls[qn]
    tparams = _all_type_params(decl)

    def target(ref: TypeRef) -> str:
        return tree.resolve(ref.name, cu, decl.outer, tparams) or tree.resolve(ref.name, cu, decl, tparams) or tree.external_name(ref, cu)

    superclass = target(decl.extends[0]) if decl.extends else None
    interfaces = []
    for ref in decl.implements:
        q = target(ref)
        if q not in interfaces:
            interfaces.append(q)
    return ClassEntry(qn, decl.kind, superclass, interfaces)


def build_facts(units: list[CompilationUnit], diagnostics: list[str] | None = None) -> CodeFacts:
    tree = _Tree(units)
    classes = {qn: _class_entry(tree, qn) for qn in sorted(tree.decls)}
    for entry in list(classes.values()):
        if entry.qualified_name in entry.parents:
            raise TaxonomyCycleError(f"{entry.qualified_name} inherits from itself")
        for p in entry.parents:
            if p not in classes:
                classes[p] = ClassEntry(p, "class", None, [], external=True)
    contexts: dict[str, Counter] = {}
    for qn in sorted(tree.decls):
        decl, cu = tree.decls[qn]
        _count_declarations(tree, cu, decl, contexts)
    facts = CodeFacts(dict(sorted(classes.items())), {q: c for q, c in sorted(contexts.items()) if c}, list(diagnostics or []))
    facts.type_taxonomy  # raises TaxonomyCycleError on cycles
    return facts


def parse_source_tree(root: str | Path) -> CodeFacts:
    """Parse every ``*.java`` file under ``root``; unparsable files are skipped."""
    root = Path(root)
    if not root.exists():
        raise FileNotFoundError(f"source root does not exist: {root}")
    if not root.is_dir():
        raise NotADirectoryError(f"source root is not a directory: {root}")
    units, diagnostics = [], []
    for path in sorted(root.rglob("*.java")):
        rel = path.relative_to(root).as_posix()
        try:
            src = path.read_text(encoding="utf-8")
            units.append(parse_java(src, rel))
        except (JavaSyntaxError, UnicodeDecodeError) as e:
            msg = f"skipped {rel}: {e}"
            log.warning(msg)
            diagnostics.append(msg)
    return build_facts(units, diagnostics)


def parse_sources(sources: dict[str, str]) -> CodeFacts:
    """Like :func:`parse_source_tree` for in-memory ``{path: source}`` maps."""
    units, diagnostics = [], []
    for path in sorted(sources):
        try:
            units.append(parse_java(sources[path], path))
        except JavaSyntaxError as e:
            diagnostics.append(f"skipped {path}: {e}")
            log.warning("skipped %s: %s", path, e)
    return build_facts(units, diagnostics)


__all__ = ["build_facts", "parse_source_tree", "parse_sources"]
