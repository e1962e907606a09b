"""Plain-ASCII concrete syntax for PAL formulas.

Grammar, loosest binding first::

    formula := iff
    iff     := imp ("<->" imp)*          left-associative
    imp     := or ("->" imp)?            right-associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := ("~" | "!") unary | "K_" agent unary | "L_" agent unary
             | "C" unary | "[" formula "]" unary
             | "true" | "false" | atom | "(" formula ")"

``->`` and ``<->`` are sugar and never reach the syntax tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List

from pal.formula import (
    BOTTOM,
    TOP,
    And,
    Announce,
    Atom,
    Bottom,
    Common,
    Formula,
    Know,
    Not,
    Or,
    Poss,
    Top,
    iff,
    implies,
)

RESERVED = frozenset({"true", "false"})


class SourceError(ValueError):
    def __init__(self, position: int, expected: str, text: str = ""):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"at offset {position}: expected {expected}")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<modal>[KL])_(?P<agent>[A-Za-z0-9]+)
  | (?P<common>C)(?![A-Za-z0-9_])
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<punct>[~!&|()\[\]])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SourceError(pos, "a token", text)
        kind = m.lastgroup
        if kind == "ws":
            pass
        elif m.group("modal"):
            out.append(Token(m.group("modal"), m.group("agent"), pos))
        elif kind == "punct":
            value = "~" if m.group() == "!" else m.group()
            out.append(Token(value, value, pos))
        else:
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def take(self, kind: str, expected: str) -> Token:
        if self.tok.kind != kind:
            self.fail(expected)
        t = self.tok
        self.i += 1
        return t

    def fail(self, expected: str):
        raise SourceError(self.tok.pos, expected, self.text)

    def parse(self) -> Formula:
        f = self.iff()
        if self.tok.kind != "eof":
            self.fail("end of input")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.tok.kind == "iff":
            self.i += 1
            f = iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.tok.kind == "imp":
            self.i += 1
            return implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.tok.kind == "|":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.tok.kind == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.tok
        if t.kind == "~":
            self.i += 1
            return Not(self.unary())
        if t.kind == "K":
            self.i += 1
            return Know(t.value, self.unary())
        if t.kind == "L":
            self.i += 1
            return Poss(t.value, self.unary())
        if t.kind == "common":
            self.i += 1
            return Common(self.unary())
        if t.kind == "[":
            self.i += 1
            ann = self.iff()
            self.take("]", "']'")
            return Announce(ann, self.unary())
        if t.kind == "(":
            self.i += 1
            f = self.iff()
            self.take(")", "')'")
            return f
        if t.kind == "ident":
            self.i += 1
            if t.value == "true":
                return TOP
            if t.value == "false":
                return BOTTOM
            return Atom(t.value)
        self.fail("a formula")


def parse(text: str) -> Formula:
    """Parse formula text; raises :class:`SourceError` on malformed input."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SourceError(exc.start, "UTF-8 text") from None
    return _Parser(text).parse()


# -- rendering --------------------------------------------------------------

_OR, _AND, _UNARY = 1, 2, 3


def _prec(f: Formula) -> int:
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    return _UNARY


def _wrap(f: Formula, parens: bool) -> str:
    s = render(f)
    return f"({s})" if parens else s


def render(f: Formula) -> str:
    """Canonical text with the fewest parentheses that still round-trip."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, (And, Or)):
        p = _prec(f)
        op = " & " if p == _AND else " | "
        return _wrap(f.left, _prec(f.left) < p) + op + _wrap(f.right, _prec(f.right) <= p)
    if isinstance(f, Not):
        return "~" + _wrap(f.sub, _prec(f.sub) < _UNARY)
    if isinstance(f, Know):
        return f"K_{f.agent} " + _wrap(f.sub, _prec(f.sub) < _UNARY)
    if isinstance(f, Poss):
        return f"L_{f.agent} " + _wrap(f.sub, _prec(f.sub) < _UNARY)
    if isinstance(f, Common):
        return "C " + _wrap(f.sub, _prec(f.sub) < _UNARY)
    if isinstance(f, Announce):
        return f"[{render(f.announcement)}] " + _wrap(f.sub, _prec(f.sub) < _UNARY)
    raise TypeError(f"not a formula: {f!r}")
