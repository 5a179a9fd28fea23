"""SDL formulas: AST, concrete syntax, and normal forms.

Concrete syntax (ASCII, unicode aliases in parentheses)::

    ~ (¬)   [] (□)   <> (◇)   & (∧)   | (∨)   -> (→)   <-> (↔)
    true (⊤)   false (⊥)   identifiers [A-Za-z][A-Za-z0-9_]*

Binding from tightest to loosest: unary operators, ``&``, ``|``, ``->``,
``<->``. ``&`` and ``|`` associate to the left, ``->`` and ``<->`` to the
right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import DuplicateNameError, EmptySystemError, SDLSyntaxError

__all__ = [
    "Atom", "Top", "Bottom", "Not", "And", "Or", "Implies", "Iff", "Box",
    "Diamond", "Formula", "TOP", "BOTTOM", "NormativeSystem",
    "parse_formula", "parse_system", "format_formula", "to_nnf",
    "modal_depth", "atoms_of", "size", "conjoin", "is_nnf",
]

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _IDENT.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Bottom:
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Box:
    arg: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Diamond:
    arg: "Formula"

    def __str__(self):
        return format_formula(self)


Formula = Union[Atom, Top, Bottom, Not, And, Or, Implies, Iff, Box, Diamond]
TOP = Top()
BOTTOM = Bottom()

_UNARY = (Not, Box, Diamond)
_BINARY = (And, Or, Implies, Iff)


@dataclass
class NormativeSystem:
    """A named set of norms plus formulas meant to hold in every reachable world."""

    name: str = "unnamed"
    formulas: list = field(default_factory=list)
    global_formulas: list = field(default_factory=list)

    def __post_init__(self):
        self.formulas = _dedupe(self.formulas)
        self.global_formulas = _dedupe(self.global_formulas)

    def extended(self, *extra: Formula, name: str | None = None) -> "NormativeSystem":
        """Return a copy with ``extra`` appended to the ordinary formulas."""
        return NormativeSystem(name or self.name, [*self.formulas, *extra],
                               list(self.global_formulas))

    def atoms(self) -> set[str]:
        names: set[str] = set()
        for f in [*self.formulas, *self.global_formulas]:
            names |= atoms_of(f)
        return names

    def to_text(self) -> str:
        lines = [f"system {self.name}"]
        lines += [f"formula: {format_formula(f)}" for f in self.formulas]
        lines += [f"global: {format_formula(f)}" for f in self.global_formulas]
        return "\n".join(lines) + "\n"


def _dedupe(items) -> list:
    seen = set()
    out = []
    for f in items:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<op><->|->|\[\]|<>|[~&|()¬□◇∧∨→↔⊤⊥])
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
""", re.VERBOSE)

_ALIASES = {"¬": "~", "□": "[]", "◇": "<>", "∧": "&", "∨": "|", "→": "->",
            "↔": "<->", "⊤": "true", "⊥": "false"}


@dataclass(frozen=True)
class _Tok:
    kind: str       # "op", "ident", "kw" or "eof"
    value: str
    line: int
    col: int


def _tokenize(text: str, line_offset: int = 0) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SDLSyntaxError(f"unexpected character {text[pos]!r}",
                                 line + line_offset, pos - line_start + 1)
        kind = m.lastgroup
        val = m.group()
        if kind == "ws":
            for i, ch in enumerate(val):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            val = _ALIASES.get(val, val)
            if val in ("true", "false"):
                kind = "kw"
            toks.append(_Tok(kind, val, line + line_offset, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line + line_offset, pos - line_start + 1))
    return toks


_UNARY_START = frozenset({"~", "[]", "<>", "true", "false", "IDENT", "("})


class _Parser:
    def __init__(self, text: str, line_offset: int = 0):
        self.toks = _tokenize(text, line_offset)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, expected) -> SDLSyntaxError:
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        return SDLSyntaxError(f"unexpected {found}", tok.line, tok.col, frozenset(expected))

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value == value

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek().kind != "eof":
            raise self.error({"&", "|", "->", "<->", "end of input"})
        return f

    def iff(self) -> Formula:
        parts = [self.impl()]
        while self.at("<->"):
            self.take()
            parts.append(self.impl())
        f = parts.pop()
        while parts:
            f = Iff(parts.pop(), f)
        return f

    def impl(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "op":
            if tok.value == "~":
                self.take()
                return Not(self.unary())
            if tok.value == "[]":
                self.take()
                return Box(self.unary())
            if tok.value == "<>":
                self.take()
                return Diamond(self.unary())
            if tok.value == "(":
                self.take()
                f = self.iff()
                if not self.at(")"):
                    raise self.error({")", "&", "|", "->", "<->"})
                self.take()
                return f
        elif tok.kind == "kw":
            self.take()
            return TOP if tok.value == "true" else BOTTOM
        elif tok.kind == "ident":
            self.take()
            return Atom(tok.value)
        raise self.error(_UNARY_START)


def parse_formula(text: str) -> Formula:
    """Parse one formula; raise :class:`SDLSyntaxError` on any malformed input."""
    return _Parser(text).parse()


# -- formatter ---------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_RIGHT_ASSOC = (Iff, Implies)


def format_formula(f: Formula) -> str:
    """Render ``f`` in the ASCII syntax with the fewest parentheses that
    still parse back to the same tree."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, _UNARY):
        op = {Not: "~", Box: "[]", Diamond: "<>"}[type(f)]
        inner = format_formula(f.arg)
        if isinstance(f.arg, _BINARY):
            inner = f"({inner})"
        return op + inner
    prec = _PREC[type(f)]
    left, right = format_formula(f.left), format_formula(f.right)
    lp = _PREC.get(type(f.left), 9)
    rp = _PREC.get(type(f.right), 9)
    if isinstance(f, _RIGHT_ASSOC):
        if lp <= prec:
            left = f"({left})"
        if rp < prec:
            right = f"({right})"
    else:
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
    return f"{left} {_SYM[type(f)]} {right}"


# -- structural functions ----------------------------------------------------

def children(f: Formula) -> tuple:
    if isinstance(f, _UNARY):
        return (f.arg,)
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def atoms_of(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def size(f: Formula) -> int:
    """Number of nodes in the formula tree."""
    return sum(1 for _ in subformulas(f))


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Box, Diamond)):
        return 1 + modal_depth(f.arg)
    return max((modal_depth(c) for c in children(f)), default=0)


def conjoin(formulas) -> Formula:
    """Left-nested conjunction; ``true`` for an empty sequence."""
    formulas = list(formulas)
    if not formulas:
        return TOP
    f = formulas[0]
    for g in formulas[1:]:
        f = And(f, g)
    return f


def to_nnf(f: Formula) -> Formula:
    """Negation normal form: only atoms are negated, no ``->``/``<->``.

    Diamonds survive as diamonds; duality is used only to push negations
    (``~[]F`` becomes ``<>~F`` and ``~<>F`` becomes ``[]~F``).
    """
    return _nnf(f, True)


def _nnf(f: Formula, pos: bool) -> Formula:
    if isinstance(f, Atom):
        return f if pos else Not(f)
    if isinstance(f, Top):
        return TOP if pos else BOTTOM
    if isinstance(f, Bottom):
        return BOTTOM if pos else TOP
    if isinstance(f, Not):
        return _nnf(f.arg, not pos)
    if isinstance(f, And):
        ctor = And if pos else Or
        return ctor(_nnf(f.left, pos), _nnf(f.right, pos))
    if isinstance(f, Or):
        ctor = Or if pos else And
        return ctor(_nnf(f.left, pos), _nnf(f.right, pos))
    if isinstance(f, Implies):
        if pos:
            return Or(_nnf(f.left, False), _nnf(f.right, True))
        return And(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Iff):
        # (a & b) | (~a & ~b), negated: (a & ~b) | (~a & b)
        a, na = _nnf(f.left, True), _nnf(f.left, False)
        b, nb = _nnf(f.right, True), _nnf(f.right, False)
        if pos:
            return Or(And(a, b), And(na, nb))
        return Or(And(a, nb), And(na, b))
    if isinstance(f, Box):
        return Box(_nnf(f.arg, True)) if pos else Diamond(_nnf(f.arg, False))
    if isinstance(f, Diamond):
        return Diamond(_nnf(f.arg, True)) if pos else Box(_nnf(f.arg, False))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, (Implies, Iff)):
            return False
        if isinstance(g, Not) and not isinstance(g.arg, Atom):
            return False
    return True


# -- system files ------------------------------------------------------------

_HEADER = re.compile(r"system\s+(\S.*?)\s*\Z")
_TAGGED = re.compile(r"(formula|global)\s*:(.*)\Z", re.DOTALL)


def parse_system(text: str, name: str = "unnamed") -> NormativeSystem:
    """Parse a normative-system file.

    One formula per line, ``#`` starts a comment, ``system <name>`` names the
    system, ``global:`` marks a formula that must hold in all reachable worlds
    and ``formula:`` (or no tag) marks an ordinary norm.
    """
    formulas, globals_ = [], []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        m = _HEADER.match(stripped)
        if m:
            if seen_header:
                raise DuplicateNameError(f"line {lineno}: second 'system' header")
            seen_header = True
            name = m.group(1)
            continue
        target = formulas
        body_start = 0
        m = _TAGGED.match(stripped)
        if m:
            if m.group(1) == "global":
                target = globals_
            body_start = line.index(":") + 1
        try:
            parser = _Parser(line[body_start:], line_offset=lineno - 1)
            f = parser.parse()
        except SDLSyntaxError as exc:
            raise SDLSyntaxError(exc.reason, lineno,
                                 exc.column + body_start, exc.expected, raw) from None
        target.append(f)
    if not formulas and not globals_:
        raise EmptySystemError(f"system {name!r} contains no formulas")
    return NormativeSystem(name, formulas, globals_)
