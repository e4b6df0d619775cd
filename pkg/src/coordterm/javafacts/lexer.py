"""Tokenizer for the Java subset."""
from __future__ import annotations

import re
from typing import NamedTuple


class JavaSyntaxError(Exception):
    def __init__(self, msg: str, line: int | None = None, path: str | None = None):
        self.msg = msg
        self.line = line
        self.path = path
        where = f"{path or '<source>'}:{line}" if line is not None else (path or "<source>")
        super().__init__(f"{where}: {msg}")


class Tok(NamedTuple):
    kind: str  # ident | string | char | number | op
    text: str
    line: int


KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue default do
    double else enum extends final finally float for goto if implements import instanceof
    int interface long native new package private protected public return short static
    strictfp super switch synchronized this throw throws transient try void volatile while
    true false null""".split()
)
# restricted identifiers: keywords only in specific positions
CONTEXTUAL = frozenset("var yield record sealed permits".split())
PRIMITIVES = frozenset("boolean byte char short int long float double void".split())
MODIFIERS = frozenset(
    "public private protected static final abstract native synchronized transient volatile "
    "strictfp default sealed".split()
)

_TOKEN_PATTERNS = [
    ("ws", r"[ \t\r\f]+"),
    ("nl", r"\n"),
    ("comment", r"//[^\n]*|/\*.*?\*/"),
    ("textblock", r'"""(?:\\.|[^\\])*?"""'),
    ("string", r'"(?:\\.|[^"\\\n])*"'),
    ("char", r"'(?:\\.|[^'\\\n])+'"),
    ("number", r"0[xXbB][0-9a-fA-F_]+[lL]?|(?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[fFdDlL]?"),
    ("ident", r"[A-Za-z_$\u0080-￿][\w$\u0080-￿]*"),
    ("op", r"\.\.\.|->|::|[{}()\[\];,.@=<>!~?:+\-*/&|^%]"),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKEN_PATTERNS), re.DOTALL)


def lex(src: str, path: str | None = None) -> list[Tok]:
    """Tokenize Java source. ``<`` and ``>`` are always single tokens so
    nested generics close cleanly."""
    out: list[Tok] = []
    pos, line, n = 0, 1, len(src)
    while pos < n:
        m = _MASTER.match(src, pos)
        if m is None or (m.lastgroup == "op" and src.startswith("/*", pos)):
            if src.startswith("/*", pos):
                raise JavaSyntaxError("unterminated comment", line, path)
            raise JavaSyntaxError(f"unexpected character {src[pos]!r}", line, path)
        kind = m.lastgroup
        text = m.group(kind)
        if kind == "textblock":
            out.append(Tok("string", text, line))
        elif kind not in ("ws", "nl", "comment"):
            out.append(Tok(kind, text, line))
        line += text.count("\n")
        pos = m.end()
    return out
