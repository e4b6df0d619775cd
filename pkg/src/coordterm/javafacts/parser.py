"""Structural parser for a Java subset.

Produces declarations only: packages, imports, type headers, fields, method
signatures, and the raw token spans of bodies. Bodies are interpreted later
by :mod:`coordterm.javafacts.extract`, once every type in the tree is known.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lexer import KEYWORDS, MODIFIERS, PRIMITIVES, JavaSyntaxError, Tok, lex


@dataclass
class TypeRef:
    name: str  # dotted source spelling with type arguments erased
    dims: int = 0

    @property
    def is_array(self) -> bool:
        return self.dims > 0

    @property
    def is_primitive(self) -> bool:
        return self.name in PRIMITIVES


@dataclass
class MethodDecl:
    name: str
    params: list[tuple[TypeRef, str]]
    body: list[Tok] | None
    type_params: set[str] = field(default_factory=set)
    is_constructor: bool = False
    line: int = 0


@dataclass
class TypeDecl:
    name: str  # binary name within the package: Outer$Inner
    kind: str  # class | interface
    extends: list[TypeRef] = field(default_factory=list)
    implements: list[TypeRef] = field(default_factory=list)
    fields: dict[str, TypeRef] = field(default_factory=dict)
    methods: list[MethodDecl] = field(default_factory=list)
    # initializer blocks and field initializers, scanned like method bodies
    init_bodies: list[list[Tok]] = field(default_factory=list)
    type_params: set[str] = field(default_factory=set)
    outer: "TypeDecl | None" = field(default=None, repr=False, compare=False)
    nested: list["TypeDecl"] = field(default_factory=list, repr=False, compare=False)
    line: int = 0

    def walk(self):
        yield self
        for d in self.nested:
            yield from d.walk()


@dataclass
class CompilationUnit:
    path: str
    package: str = ""
    imports: dict[str, str] = field(default_factory=dict)  # simple -> qualified
    wildcard_imports: list[str] = field(default_factory=list)
    types: list[TypeDecl] = field(default_factory=list)


_OPEN = {"(": ")", "[": "]", "{": "}"}


class _Parser:
    def __init__(self, toks: list[Tok], path: str):
        self.toks = toks
        self.i = 0
        self.path = path

    # -- cursor helpers -------------------------------------------------
    def peek(self, k: int = 0) -> Tok | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.text == text and t.kind in ("op", "ident")

    def error(self, msg: str):
        t = self.peek()
        line = t.line if t else (self.toks[-1].line if self.toks else 1)
        found = repr(t.text) if t else "end of file"
        raise JavaSyntaxError(f"{msg} (found {found})", line, self.path)

    def next(self) -> Tok:
        t = self.peek()
        if t is None:
            self.error("unexpected end of file")
        self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.next()

    def ident(self) -> str:
        t = self.peek()
        if t is None or t.kind != "ident":
            self.error("expected identifier")
        self.i += 1
        return t.text

    def skip_balanced(self) -> list[Tok]:
        """Consume a bracketed group starting at the cursor; return its interior."""
        open_tok = self.next()
        close = _OPEN[open_tok.text]
        stack = [close]
        start = self.i
        while stack:
            t = self.peek()
            if t is None:
                raise JavaSyntaxError(f"unbalanced {open_tok.text!r}", open_tok.line, self.path)
            self.i += 1
            if t.kind != "op":
                continue
            if t.text in _OPEN:
                stack.append(_OPEN[t.text])
            elif t.text in (")", "]", "}"):
                if t.text != stack[-1]:
                    raise JavaSyntaxError(f"mismatched {t.text!r}", t.line, self.path)
                stack.pop()
        return self.toks[start:self.i - 1]

    def skip_angle(self) -> set[str]:
        """Consume ``<...>``; return identifiers that open each top-level slot."""
        self.expect("<")
        depth, names, slot_start = 1, set(), True
        while depth:
            t = self.next()
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1
            elif t.text == "," and depth == 1:
                slot_start = True
                continue
            elif t.text in (";", "{", "}", "(", ")"):
                raise JavaSyntaxError("malformed type arguments", t.line, self.path)
            elif depth == 1 and slot_start and t.kind == "ident":
                names.add(t.text)
            slot_start = False
        return names

    def skip_annotation(self):
        self.expect("@")
        self.ident()
        while self.at(".") and self.peek(1) is not None and self.peek(1).kind == "ident":
            self.i += 2
        if self.at("("):
            self.skip_balanced()

    def skip_modifiers(self):
        while True:
            t = self.peek()
            if t is None:
                return
            if t.text == "@" and not self.at("interface", 1):
                self.skip_annotation()
            elif t.kind == "ident" and t.text in MODIFIERS:
                self.i += 1
            elif t.kind == "ident" and t.text == "non" and self.at("-", 1) and self.at("sealed", 2):
                self.i += 3
            else:
                return

    # -- types ----------------------------------------------------------
    def type_ref(self) -> TypeRef:
        while self.at("@"):
            self.skip_annotation()
        if self.at("?"):
            self.error("wildcard outside type arguments")
        parts = [self.ident()]
        if self.at("<"):
            self.skip_angle()
        while self.at(".") and self.peek(1) is not None and self.peek(1).kind == "ident":
            self.i += 1
            parts.append(self.ident())
            if self.at("<"):
                self.skip_angle()
        dims = 0
        while True:
            while self.at("@"):
                self.skip_annotation()
            if self.at("[") and self.at("]", 1):
                self.i += 2
                dims += 1
            elif self.at("..."):
                self.i += 1
                dims += 1
            else:
                break
        return TypeRef(".".join(parts), dims)

    def type_list(self) -> list[TypeRef]:
        refs = [self.type_ref()]
        while self.at(","):
            self.i += 1
            refs.append(self.type_ref())
        return refs

    # -- compilation unit -----------------------------------------------
    def compilation_unit(self) -> CompilationUnit:
        cu = CompilationUnit(self.path)
        self.skip_modifiers()
        if self.at("package"):
            self.i += 1
            cu.package = self.qualified_name()
            self.expect(";")
        while self.at("import") or self.at(";"):
            if self.at(";"):
                self.i += 1
                continue
            self.i += 1
            static = self.at("static")
            if static:
                self.i += 1
            name = self.qualified_name(allow_star=True)
            self.expect(";")
            if static:
                continue
            if name.endswith(".*"):
                cu.wildcard_imports.append(name[:-2])
            else:
                cu.imports[name.rsplit(".", 1)[-1]] = name
        while self.peek() is not None:
            if self.at(";"):
                self.i += 1
                continue
            self.skip_modifiers()
            if not self.at_type_keyword():
                self.error("expected type declaration")
            decl = self.type_decl(None)
            if decl is not None:
                cu.types.append(decl)
        return cu

    def qualified_name(self, allow_star: bool = False) -> str:
        parts = [self.ident()]
        while self.at("."):
            self.i += 1
            if allow_star and self.at("*"):
                self.i += 1
                parts.append("*")
                break
            parts.append(self.ident())
        return ".".join(parts)

    def type_decl(self, outer: TypeDecl | None) -> TypeDecl | None:
        """Parse a type declaration at the cursor (modifiers already consumed).

        Returns None for annotation types, which carry no contexts.
        """
        t = self.peek()
        if t is None:
            self.error("expected type declaration")
        if t.text == "@" and self.at("interface", 1):
            self.i += 2
            self.ident()
            self.skip_balanced()
            return None
        kind_word = self.ident()
        if kind_word not in ("class", "interface", "enum", "record"):
            self.i -= 1
            self.error("expected class, interface, enum or record")
        simple = self.ident()
        name = f"{outer.name}${simple}" if outer else simple
        decl = TypeDecl(name, "interface" if kind_word == "interface" else "class", outer=outer, line=t.line)
        if self.at("<"):
            decl.type_params = self.skip_angle()
        if kind_word == "record":
            if not self.at("("):
                self.error("expected record header")
            for ref, pname in self.params(decl.type_params):
                decl.fields[pname] = ref
        while True:
            if self.at("extends"):
                self.i += 1
                refs = self.type_list()
                if decl.kind == "interface":
                    decl.implements.extend(refs)
                else:
                    if len(refs) != 1:
                        self.error("a class extends exactly one type")
                    decl.extends = refs
            elif self.at("implements"):
                self.i += 1
                decl.implements.extend(self.type_list())
            elif self.at("permits"):
                self.i += 1
                self.type_list()
            else:
                break
        if not self.at("{"):
            self.error("expected '{' to open type body")
        self.i += 1
        if kind_word == "enum":
            self.enum_constants()
        self.class_body(decl)
        return decl

    def enum_constants(self):
        while True:
            self.skip_modifiers()
            if self.at(";"):
                self.i += 1
                return
            if self.at("}"):
                return
            self.ident()
            if self.at("("):
                self.skip_balanced()
            if self.at("{"):
                self.skip_balanced()
            if self.at(","):
                self.i += 1
            elif not (self.at(";") or self.at("}")):
                self.error("malformed enum constant list")

    def at_type_keyword(self) -> bool:
        if self.at("class") or self.at("interface") or self.at("enum"):
            return True
        if self.at("@") and self.at("interface", 1):
            return True
        nxt = self.peek(1)
        return (
            self.at("record")
            and nxt is not None
            and nxt.kind == "ident"
            and nxt.text not in KEYWORDS
            and (self.at("(", 2) or self.at("<", 2))
        )

    def class_body(self, decl: TypeDecl) -> None:
        """Parse members up to and including the closing brace."""
        while True:
            t = self.peek()
            if t is None:
                self.error("unterminated type body")
            if t.text == "}" and t.kind == "op":
                self.i += 1
                return
            if t.text == ";":
                self.i += 1
                continue
            self.skip_modifiers()
            if self.at("{"):
                decl.init_bodies.append(self.skip_balanced())
            elif self.at_type_keyword():
                inner = self.type_decl(decl)
                if inner is not None:
                    decl.nested.append(inner)
            else:
                self.member(decl)

    def member(self, decl: TypeDecl):
        method_tparams: set[str] = set()
        if self.at("<"):
            method_tparams = self.skip_angle()
            self.skip_modifiers()
        line = self.peek().line if self.peek() else 0
        simple_name = decl.name.rsplit("$", 1)[-1]
        # constructor: Name(
        t = self.peek()
        if t is not None and t.kind == "ident" and t.text == simple_name and self.at("(", 1):
            self.i += 1
            params = self.params(decl.type_params | method_tparams)
            self.method_tail()
            body = self.skip_balanced() if self.at("{") else None
            if body is None:
                self.error("constructor without body")
            decl.methods.append(MethodDecl(simple_name, params, body, method_tparams, True, line))
            return
        # compact record constructor: Name {
        if t is not None and t.kind == "ident" and t.text == simple_name and self.at("{", 1):
            self.i += 1
            decl.init_bodies.append(self.skip_balanced())
            return
        rtype = self.type_ref()
        name_tok = self.peek()
        if name_tok is None or name_tok.kind != "ident" or name_tok.text in KEYWORDS:
            self.error("expected member name")
        self.i += 1
        if self.at("("):
            params = self.params(decl.type_params | method_tparams)
            while self.at("[") and self.at("]", 1):
                self.i += 2
            self.method_tail()
            if self.at("{"):
                body = self.skip_balanced()
            elif self.at("default"):
                while not self.at(";"):
                    self.next()
                self.i += 1
                body = None
            else:
                self.expect(";")
                body = None
            decl.methods.append(MethodDecl(name_tok.text, params, body, method_tparams, False, line))
            return
        # field declarators
        name = name_tok.text
        while True:
            dims = rtype.dims
            while self.at("[") and self.at("]", 1):
                self.i += 2
                dims += 1
            decl.fields[name] = TypeRef(rtype.name, dims)
            if self.at("="):
                self.i += 1
                decl.init_bodies.append(self.initializer())
            if self.at(","):
                self.i += 1
                name = self.ident()
                continue
            self.expect(";")
            return

    def method_tail(self):
        if self.at("throws"):
            self.i += 1
            self.type_list()

    def initializer(self) -> list[Tok]:
        start = self.i
        while True:
            t = self.peek()
            if t is None:
                self.error("unterminated field initializer")
            if t.kind == "op" and t.text in _OPEN:
                self.skip_balanced()
                continue
            if t.kind == "op" and t.text in (",", ";"):
                return self.toks[start:self.i]
            if t.kind == "op" and t.text in (")", "]", "}"):
                self.error("unbalanced field initializer")
            self.i += 1

    def params(self, type_params: set[str]) -> list[tuple[TypeRef, str]]:
        self.expect("(")
        out: list[tuple[TypeRef, str]] = []
        if self.at(")"):
            self.i += 1
            return out
        while True:
            self.skip_modifiers()
            ref = self.type_ref()
            if self.at("this"):  # receiver parameter
                self.i += 1
            else:
                pname = self.ident()
                dims = ref.dims
                while self.at("[") and self.at("]", 1):
                    self.i += 2
                    dims += 1
                out.append((TypeRef(ref.name, dims), pname))
            if self.at(","):
                self.i += 1
                continue
            self.expect(")")
            return out


def parse_java(src: str, path: str = "<source>") -> CompilationUnit:
    """Parse one Java source file; raises :class:`JavaSyntaxError`."""
    toks = lex(src, path)
    cu = _Parser(toks, path).compilation_unit()
    cu.types = [d for top in cu.types for d in top.walk()]
    return cu
