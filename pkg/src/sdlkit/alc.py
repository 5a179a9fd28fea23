"""ALC concepts, the modal-to-DL translation and knowledge bases.

A normative system becomes a knowledge base whose TBox holds the seriality
inclusion ``top SUBCLASSOF exists r . top`` plus one inclusion per global
formula, and whose ABox asserts the conjunction of the translated norms on a
single individual ``a``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

from . import syntax as s
from .errors import EmptySystemError, SDLSyntaxError

__all__ = [
    "ROLE", "INDIVIDUAL", "AtomicConcept", "TopC", "BottomC", "NotC", "AndC",
    "OrC", "ForAll", "Exists", "Concept", "TOP_C", "BOTTOM_C", "GCI",
    "Assertion", "KnowledgeBase", "SERIALITY", "translate_formula",
    "translate_system", "lift_global", "apply_lifting", "concept_nnf",
    "format_concept", "concept_size", "concept_dag_size", "concept_atoms",
    "export_kb", "parse_kb",
]

ROLE = "r"
INDIVIDUAL = "a"


@dataclass(frozen=True)
class AtomicConcept:
    name: str


@dataclass(frozen=True)
class TopC:
    pass


@dataclass(frozen=True)
class BottomC:
    pass


@dataclass(frozen=True)
class NotC:
    arg: "Concept"


@dataclass(frozen=True)
class AndC:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class OrC:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class ForAll:
    role: str
    filler: "Concept"


@dataclass(frozen=True)
class Exists:
    role: str
    filler: "Concept"


Concept = Union[AtomicConcept, TopC, BottomC, NotC, AndC, OrC, ForAll, Exists]
TOP_C = TopC()
BOTTOM_C = BottomC()


@dataclass(frozen=True)
class GCI:
    """General concept inclusion ``sub SUBCLASSOF sup``."""

    sub: Concept
    sup: Concept


@dataclass(frozen=True)
class Assertion:
    concept: Concept
    individual: str = INDIVIDUAL


@dataclass
class KnowledgeBase:
    tbox: list = field(default_factory=list)
    abox: list = field(default_factory=list)

    @property
    def individuals(self) -> set[str]:
        return {ax.individual for ax in self.abox}

    def roles(self) -> set[str]:
        found = set()
        for c in self._concepts():
            for sub in _walk(c):
                if isinstance(sub, (ForAll, Exists)):
                    found.add(sub.role)
        return found

    def atoms(self) -> set[str]:
        names = set()
        for c in self._concepts():
            names |= concept_atoms(c)
        return names

    def with_assertion(self, concept: Concept, individual: str = INDIVIDUAL) -> "KnowledgeBase":
        return KnowledgeBase(list(self.tbox), [*self.abox, Assertion(concept, individual)])

    def without_seriality(self) -> "KnowledgeBase":
        return KnowledgeBase([g for g in self.tbox if g != SERIALITY], list(self.abox))

    def _concepts(self) -> Iterator[Concept]:
        for g in self.tbox:
            yield g.sub
            yield g.sup
        for ax in self.abox:
            yield ax.concept


SERIALITY = GCI(TOP_C, Exists(ROLE, TOP_C))


# -- translation -------------------------------------------------------------

def translate_formula(f: s.Formula, role: str = ROLE) -> Concept:
    """Map a formula to a concept clause by clause.

    ``[]F`` becomes ``forall r . F``, ``<>F`` becomes ``exists r . F``.
    Implications are rewritten as ``~A | B`` and biconditionals as
    ``(~A | B) & (~B | A)``; the translated operands are shared between both
    halves, so the result is linear in the formula as a DAG.
    """
    if isinstance(f, s.Atom):
        return AtomicConcept(f.name)
    if isinstance(f, s.Top):
        return TOP_C
    if isinstance(f, s.Bottom):
        return BOTTOM_C
    if isinstance(f, s.Not):
        return NotC(translate_formula(f.arg, role))
    if isinstance(f, s.And):
        return AndC(translate_formula(f.left, role), translate_formula(f.right, role))
    if isinstance(f, s.Or):
        return OrC(translate_formula(f.left, role), translate_formula(f.right, role))
    if isinstance(f, s.Implies):
        return OrC(NotC(translate_formula(f.left, role)), translate_formula(f.right, role))
    if isinstance(f, s.Iff):
        a = translate_formula(f.left, role)
        b = translate_formula(f.right, role)
        return AndC(OrC(NotC(a), b), OrC(NotC(b), a))
    if isinstance(f, s.Box):
        return ForAll(role, translate_formula(f.arg, role))
    if isinstance(f, s.Diamond):
        return Exists(role, translate_formula(f.arg, role))
    raise TypeError(f"not a formula: {f!r}")


def _conjoin_concepts(concepts: list) -> Concept:
    c = concepts[0]
    for d in concepts[1:]:
        c = AndC(c, d)
    return c


def translate_system(n: s.NormativeSystem, seriality: bool = True) -> KnowledgeBase:
    """Build the knowledge base for a normative system.

    The TBox gets the seriality inclusion and ``top SUBCLASSOF phi(G)`` for
    every global formula; the ABox gets ``phi(F1) and ... and phi(Fn)`` on ``a``.
    """
    if not n.formulas:
        raise EmptySystemError(f"system {n.name!r} has no formulas")
    tbox = [SERIALITY] if seriality else []
    tbox += [GCI(TOP_C, translate_formula(g)) for g in n.global_formulas]
    abox = [Assertion(_conjoin_concepts([translate_formula(f) for f in n.formulas]))]
    return KnowledgeBase(tbox, abox)


def lift_global(f: s.Formula, depth: int) -> list:
    """``[f, []f, [][]f, ...]`` up to ``depth`` boxes."""
    if depth < 1:
        raise ValueError("lifting depth must be at least 1")
    out = [f]
    for _ in range(depth):
        out.append(s.Box(out[-1]))
    return out


def apply_lifting(n: s.NormativeSystem, mode: str = "tbox", depth: int | None = None) -> s.NormativeSystem:
    """Prepare a system for translation under a global-formula strategy.

    ``"tbox"`` keeps globals as TBox inclusions. ``"formula"`` replaces each
    global by its boxed copies up to ``depth``; by default the depth is the
    largest modal depth among the ordinary formulas, and at least one.
    """
    if mode == "tbox":
        return n
    if mode != "formula":
        raise ValueError(f"unknown lifting mode {mode!r}")
    if depth is None:
        depth = max([1, *(s.modal_depth(f) for f in n.formulas)])
    lifted = [g for glob in n.global_formulas for g in lift_global(glob, depth)]
    return s.NormativeSystem(n.name, [*n.formulas, *lifted], [])


# -- concept utilities -------------------------------------------------------

def _children(c: Concept) -> tuple:
    if isinstance(c, NotC):
        return (c.arg,)
    if isinstance(c, (AndC, OrC)):
        return (c.left, c.right)
    if isinstance(c, (ForAll, Exists)):
        return (c.filler,)
    return ()


def _walk(c: Concept) -> Iterator[Concept]:
    stack = [c]
    while stack:
        d = stack.pop()
        yield d
        stack.extend(reversed(_children(d)))


def concept_atoms(c: Concept) -> set[str]:
    return {d.name for d in _walk(c) if isinstance(d, AtomicConcept)}


def concept_size(c: Concept) -> int:
    """Number of nodes in the concept tree."""
    return sum(1 for _ in _walk(c))


def concept_dag_size(c: Concept) -> int:
    """Number of structurally distinct subconcepts."""
    return len(set(_walk(c)))


@lru_cache(maxsize=65536)
def concept_nnf(c: Concept, positive: bool = True) -> Concept:
    """Push negations inward until they sit on atomic concepts only."""
    if isinstance(c, AtomicConcept):
        return c if positive else NotC(c)
    if isinstance(c, TopC):
        return TOP_C if positive else BOTTOM_C
    if isinstance(c, BottomC):
        return BOTTOM_C if positive else TOP_C
    if isinstance(c, NotC):
        return concept_nnf(c.arg, not positive)
    if isinstance(c, AndC):
        ctor = AndC if positive else OrC
        return ctor(concept_nnf(c.left, positive), concept_nnf(c.right, positive))
    if isinstance(c, OrC):
        ctor = OrC if positive else AndC
        return ctor(concept_nnf(c.left, positive), concept_nnf(c.right, positive))
    if isinstance(c, ForAll):
        ctor = ForAll if positive else Exists
        return ctor(c.role, concept_nnf(c.filler, positive))
    if isinstance(c, Exists):
        ctor = Exists if positive else ForAll
        return ctor(c.role, concept_nnf(c.filler, positive))
    raise TypeError(f"not a concept: {c!r}")


# -- native text format ------------------------------------------------------

_KEYWORDS = {"top", "bottom", "not", "and", "or", "exists", "forall",
             "GCI", "ASSERT", "SUBCLASSOF"}
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def _name(x: str) -> str:
    if x in _KEYWORDS or not _NAME.match(x):
        return "'" + x + "'"
    return x


@lru_cache(maxsize=65536)
def format_concept(c: Concept) -> str:
    """Fully parenthesised rendering used by the native KB format."""
    if isinstance(c, AtomicConcept):
        return _name(c.name)
    if isinstance(c, TopC):
        return "top"
    if isinstance(c, BottomC):
        return "bottom"
    if isinstance(c, NotC):
        return "not " + format_concept(c.arg)
    if isinstance(c, AndC):
        return f"({format_concept(c.left)} and {format_concept(c.right)})"
    if isinstance(c, OrC):
        return f"({format_concept(c.left)} or {format_concept(c.right)})"
    if isinstance(c, ForAll):
        return f"forall {_name(c.role)} . {format_concept(c.filler)}"
    if isinstance(c, Exists):
        return f"exists {_name(c.role)} . {format_concept(c.filler)}"
    raise TypeError(f"not a concept: {c!r}")


def export_kb(kb: KnowledgeBase, format: str = "native") -> str:
    """Serialise ``kb`` deterministically as ``native`` text or TPTP ``fof``."""
    if format == "native":
        lines = ["# sdlkit knowledge base"]
        lines += [f"GCI {format_concept(g.sub)} SUBCLASSOF {format_concept(g.sup)}"
                  for g in kb.tbox]
        lines += [f"ASSERT {format_concept(ax.concept)} ( {_name(ax.individual)} )"
                  for ax in kb.abox]
        return "\n".join(lines) + "\n"
    if format == "tptp":
        return _export_tptp(kb)
    raise ValueError(f"unknown KB format {format!r}")


_TOKEN = re.compile(r"\s*(?:(?P<q>'[^']*')|(?P<w>[A-Za-z][A-Za-z0-9_]*)|(?P<p>[().]))")


def _lex(text: str, lineno: int) -> list[str]:
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SDLSyntaxError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        toks.append(m.group(m.lastgroup))
        pos = m.end()
    return toks


class _ConceptReader:
    def __init__(self, toks: list[str], lineno: int):
        self.toks, self.i, self.lineno = toks, 0, lineno

    def next(self) -> str:
        if self.i >= len(self.toks):
            raise SDLSyntaxError("unexpected end of line", self.lineno, 1)
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise SDLSyntaxError(f"expected {tok!r}, found {got!r}", self.lineno, 1, frozenset({tok}))

    def name(self) -> str:
        tok = self.next()
        return tok[1:-1] if tok.startswith("'") else tok

    def concept(self) -> Concept:
        tok = self.next()
        if tok == "top":
            return TOP_C
        if tok == "bottom":
            return BOTTOM_C
        if tok == "not":
            return NotC(self.concept())
        if tok in ("exists", "forall"):
            role = self.name()
            self.expect(".")
            filler = self.concept()
            return (Exists if tok == "exists" else ForAll)(role, filler)
        if tok == "(":
            left = self.concept()
            op = self.next()
            right = self.concept()
            self.expect(")")
            if op == "and":
                return AndC(left, right)
            if op == "or":
                return OrC(left, right)
            raise SDLSyntaxError(f"expected 'and' or 'or', found {op!r}", self.lineno, 1,
                                 frozenset({"and", "or"}))
        if tok.startswith("'"):
            return AtomicConcept(tok[1:-1])
        if tok in _KEYWORDS or tok in (")", "."):
            raise SDLSyntaxError(f"unexpected {tok!r}", self.lineno, 1)
        return AtomicConcept(tok)


def parse_kb(text: str) -> KnowledgeBase:
    """Read the native format written by :func:`export_kb`."""
    kb = KnowledgeBase()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = _lex(line, lineno)
        reader = _ConceptReader(toks[1:], lineno)
        if toks[0] == "GCI":
            sub = reader.concept()
            reader.expect("SUBCLASSOF")
            kb.tbox.append(GCI(sub, reader.concept()))
        elif toks[0] == "ASSERT":
            c = reader.concept()
            reader.expect("(")
            ind = reader.name()
            reader.expect(")")
            kb.abox.append(Assertion(c, ind))
        else:
            raise SDLSyntaxError(f"unknown directive {toks[0]!r}", lineno, 1,
                                 frozenset({"GCI", "ASSERT"}))
        if reader.i != len(reader.toks):
            raise SDLSyntaxError("trailing tokens", lineno, 1)
    return kb


# -- TPTP --------------------------------------------------------------------

def _pred(name: str) -> str:
    return "c_" + name


def _fo(c: Concept, var: str, depth: int) -> str:
    """Relational translation of ``c`` at term ``var``."""
    if isinstance(c, AtomicConcept):
        return f"{_pred(c.name)}({var})"
    if isinstance(c, TopC):
        return "$true"
    if isinstance(c, BottomC):
        return "$false"
    if isinstance(c, NotC):
        return f"~ {_fo(c.arg, var, depth)}"
    if isinstance(c, AndC):
        return f"({_fo(c.left, var, depth)} & {_fo(c.right, var, depth)})"
    if isinstance(c, OrC):
        return f"({_fo(c.left, var, depth)} | {_fo(c.right, var, depth)})"
    y = f"X{depth + 1}"
    body = _fo(c.filler, y, depth + 1)
    rel = f"rel_{c.role}({var},{y})"
    if isinstance(c, ForAll):
        return f"(! [{y}] : ({rel} => {body}))"
    if isinstance(c, Exists):
        return f"(? [{y}] : ({rel} & {body}))"
    raise TypeError(f"not a concept: {c!r}")


def _export_tptp(kb: KnowledgeBase) -> str:
    lines = ["% sdlkit knowledge base, relational translation into first-order logic"]
    for i, g in enumerate(kb.tbox, start=1):
        lines.append(f"fof(gci_{i}, axiom, ! [X0] : ({_fo(g.sub, 'X0', 0)} => {_fo(g.sup, 'X0', 0)})).")
    for i, ax in enumerate(kb.abox, start=1):
        lines.append(f"fof(abox_{i}, axiom, {_fo(ax.concept, 'i_' + ax.individual, 0)}).")
    return "\n".join(lines) + "\n"
