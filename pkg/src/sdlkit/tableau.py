"""Tableau decision procedure for ALC knowledge bases with a general TBox.

The completion graph is a tree grown depth first from the node for the
individual ``a``. Each node is saturated before any successor is created:

1. ``and``: add both conjuncts,
2. ``gci``: add ``nnf(not C or D)`` for every inclusion ``C SUBCLASSOF D``,
3. ``or``: branch on the disjuncts, left first, backtracking chronologically,
4. ``exists``: create one successor per unsatisfied existential restriction,
5. ``forall``: copy universal fillers into every successor.

A saturated node whose label is a subset of an ancestor's label is blocked;
in the extracted model its incoming edge points to that ancestor. No later
rule can add to an ancestor's label, so blocking is final.

On UNSAT the result carries a certificate: a flat list of rule applications,
each tagged with the branch it belongs to, where every leaf branch ends in a
``clash`` step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .alc import (AndC, AtomicConcept, BottomC, Concept, Exists, ForAll,
                  KnowledgeBase, NotC, OrC, TopC, concept_nnf, format_concept)
from .errors import ResourceLimitError
from .kripke import KripkeModel

__all__ = ["SatResult", "TableauConfig", "is_satisfiable", "extract_model",
           "model_check", "concept_extension", "certificate_is_closed"]

DEFAULT_NODE_CAP = 10 ** 6


@dataclass(frozen=True)
class TableauConfig:
    node_cap: int = DEFAULT_NODE_CAP
    check_models: bool = __debug__


@dataclass
class SatResult:
    status: str
    model: KripkeModel | None = None
    trace: list = field(default_factory=list)
    nodes: int = 0

    @property
    def satisfiable(self) -> bool:
        return self.status == "SAT"

    def trace_json(self, **kw) -> str:
        return json.dumps(self.trace, **kw)


# -- search results ----------------------------------------------------------

@dataclass
class _Open:
    """A clash-free, fully expanded node and its subtree."""

    node: int
    label: list
    children: list = field(default_factory=list)    # of _Open or int (blocker id)


@dataclass
class _Closed:
    """A failed node: steps on the current branch and how the branch closed."""

    steps: list
    clash: tuple | None = None          # (node, concept-text) of the clash
    split: tuple | None = None          # (node, disjunction, [left, right] _Closed)
    child: "_Closed | None" = None      # failing successor


_TOP, _BOT, _ATOM, _NEG, _AND, _OR, _ALL, _SOME = range(8)


class _Closure:
    """All subconcepts of the input, interned as ints in text order.

    Ordering labels by id therefore orders them by their printed form, which
    makes rule selection independent of hashing.
    """

    def __init__(self, roots):
        seen = set()
        stack = list(roots)
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            if isinstance(c, NotC):
                stack.append(c.arg)
            elif isinstance(c, (AndC, OrC)):
                stack += [c.left, c.right]
            elif isinstance(c, (ForAll, Exists)):
                stack.append(c.filler)
        self.concepts = sorted(seen, key=format_concept)
        self.id = {c: i for i, c in enumerate(self.concepts)}
        self.text = [format_concept(c) for c in self.concepts]
        self.kind, self.a, self.b, self.comp = [], [], [], []
        for c in self.concepts:
            a = b = comp = -1
            if isinstance(c, TopC):
                k = _TOP
            elif isinstance(c, BottomC):
                k = _BOT
            elif isinstance(c, AtomicConcept):
                k = _ATOM
                comp = self.id.get(NotC(c), -1)
            elif isinstance(c, NotC):
                k = _NEG
                comp = self.id.get(c.arg, -1)
            elif isinstance(c, (AndC, OrC)):
                k = _AND if isinstance(c, AndC) else _OR
                a, b = self.id[c.left], self.id[c.right]
            else:
                k = _ALL if isinstance(c, ForAll) else _SOME
                a = self.id[c.filler]
            self.kind.append(k)
            self.a.append(a)
            self.b.append(b)
            self.comp.append(comp)


class _Search:
    def __init__(self, closure: _Closure, gcis: list, config: TableauConfig):
        self.cl = closure
        self.gcis = gcis
        self.cap = config.node_cap
        self.count = 0

    def new_node(self) -> int:
        self.count += 1
        if self.count > self.cap:
            raise ResourceLimitError(f"tableau exceeded node cap of {self.cap}")
        return self.count - 1

    def expand(self, initial: list, ancestors: list):
        node = self.new_node()
        label: set = set()
        text = self.cl.text
        steps = [("init", node, ", ".join(text[c] for c in initial) or "top")]
        for c in initial:
            clash = self._add(label, c)
            if clash is not None:
                return _Closed(steps, clash=(node, clash))
        return self._saturate(node, label, frozenset(), False, steps, ancestors)

    def _add(self, label: set, c: int) -> str | None:
        """Add ``c``; return the clash description if it closes the label."""
        kind = self.cl.kind[c]
        if kind == _TOP or c in label:
            return None
        if kind == _BOT:
            return "bottom"
        comp = self.cl.comp[c]
        if comp >= 0 and comp in label:
            return f"{self.cl.text[c]} / {self.cl.text[comp]}"
        label.add(c)
        return None

    def _saturate(self, node, label, used, gci_done, steps, ancestors):
        cl = self.cl
        kind, text = cl.kind, cl.text
        steps = list(steps)
        used = set(used)
        label = set(label)
        while True:
            conj = next((c for c in sorted(label) if kind[c] == _AND and c not in used), None)
            if conj is not None:
                used.add(conj)
                steps.append(("and", node, text[conj]))
                for part in (cl.a[conj], cl.b[conj]):
                    clash = self._add(label, part)
                    if clash is not None:
                        return _Closed(steps, clash=(node, clash))
                continue
            if not gci_done:
                gci_done = True
                for g in self.gcis:
                    if kind[g] == _TOP or g in label:
                        continue
                    steps.append(("gci", node, text[g]))
                    clash = self._add(label, g)
                    if clash is not None:
                        return _Closed(steps, clash=(node, clash))
                continue
            disj = next((c for c in sorted(label) if kind[c] == _OR and c not in used
                         and cl.a[c] not in label and cl.b[c] not in label
                         and kind[cl.a[c]] != _TOP and kind[cl.b[c]] != _TOP), None)
            if disj is not None:
                closed = []
                for part in (cl.a[disj], cl.b[disj]):
                    branch_label = set(label)
                    branch_steps = [("or", node, f"{text[disj]} => {text[part]}")]
                    clash = self._add(branch_label, part)
                    if clash is not None:
                        closed.append(_Closed(branch_steps, clash=(node, clash)))
                        continue
                    result = self._saturate(node, branch_label, used | {disj}, gci_done,
                                            branch_steps, ancestors)
                    if not isinstance(result, _Closed):
                        return result
                    closed.append(result)
                return _Closed(steps, split=(node, text[disj], closed))
            break
        return self._successors(node, label, steps, ancestors)

    def _successors(self, node, label, steps, ancestors):
        cl = self.cl
        labelset = frozenset(label)
        for anc_node, anc_label in reversed(ancestors):
            if labelset <= anc_label:
                return anc_node     # blocked
        ordered = sorted(label)
        universals = [c for c in ordered if cl.kind[c] == _ALL]
        pending = []
        for c in ordered:
            if cl.kind[c] != _SOME:
                continue
            filler = cl.a[c]
            if pending and (cl.kind[filler] == _TOP or any(filler in init for init in pending)):
                continue
            pending.append([filler, *(cl.a[u] for u in universals if cl.a[u] != filler)])
            steps.append(("exists", node, cl.text[c]))
            for u in universals:
                steps.append(("forall", node, f"{cl.text[u]} -> successor {len(pending)}"))
        children = []
        path = [*ancestors, (node, labelset)]
        for init in pending:
            result = self.expand(init, path)
            if isinstance(result, _Closed):
                return _Closed(steps, child=result)
            children.append(result)
        return _Open(node, [cl.concepts[c] for c in ordered], children)


def is_satisfiable(kb: KnowledgeBase, config: TableauConfig | None = None) -> SatResult:
    """Decide whether ``kb`` has a model.

    Returns SAT with an extracted finite model, or UNSAT with a closed
    certificate. Raises :class:`ResourceLimitError` past the node cap.
    """
    config = config or TableauConfig()
    if len(kb.individuals) > 1:
        raise ValueError("only knowledge bases about a single individual are supported")
    roles = kb.roles()
    if len(roles) > 1:
        raise ValueError(f"expected a single role, found {sorted(roles)}")
    gcis = [concept_nnf(OrC(NotC(g.sub), g.sup)) if not isinstance(g.sub, TopC)
            else concept_nnf(g.sup) for g in kb.tbox]
    root = [concept_nnf(ax.concept) for ax in kb.abox]
    closure = _Closure([*gcis, *root])
    search = _Search(closure, [closure.id[g] for g in gcis], config)
    result = search.expand([closure.id[c] for c in root], [])
    if isinstance(result, _Closed):
        return SatResult("UNSAT", None, _flatten(result), search.count)
    model = extract_model(result, vocabulary=kb.atoms())
    if config.check_models:
        assert model_check(kb, model), "extracted model fails the knowledge base"
    return SatResult("SAT", model, [], search.count)


def extract_model(state: _Open, vocabulary=()) -> KripkeModel:
    """Turn a clash-free completed tree into a finite Kripke model.

    Worlds are numbered breadth first from the root; a blocked successor is
    replaced by an edge to its blocking ancestor.
    """
    order, queue = [], [state]
    while queue:
        n = queue.pop(0)
        order.append(n)
        queue.extend(c for c in n.children if isinstance(c, _Open))
    ids = {n.node: i for i, n in enumerate(order)}
    edges = set()
    valuation = {}
    for n in order:
        w = ids[n.node]
        valuation[w] = frozenset(c.name for c in n.label if isinstance(c, AtomicConcept))
        for c in n.children:
            edges.add((w, ids[c.node] if isinstance(c, _Open) else ids[c]))
    return KripkeModel(tuple(range(len(order))), frozenset(edges), valuation, 0,
                       frozenset(vocabulary))


# -- certificates ------------------------------------------------------------

def _flatten(closed: _Closed, branch: str = "0", out: list | None = None) -> list:
    out = [] if out is None else out
    for rule, node, detail in closed.steps:
        out.append({"branch": branch, "rule": rule, "node": node, "concept": detail})
    if closed.clash is not None:
        node, detail = closed.clash
        out.append({"branch": branch, "rule": "clash", "node": node, "concept": detail})
    elif closed.child is not None:
        _flatten(closed.child, branch, out)
    elif closed.split is not None:
        node, disj, alternatives = closed.split
        for i, alt in enumerate(alternatives):
            _flatten(alt, f"{branch}.{i}", out)
    return out


def certificate_is_closed(trace: list) -> bool:
    """True iff every leaf branch of ``trace`` ends with a clash step.

    A disjunction split must show both alternatives.
    """
    if not trace:
        return False
    last: dict = {}
    for step in trace:
        last[step["branch"]] = step["rule"]
    branches = set(last)
    for b in branches:
        kids = {c for c in branches if c.startswith(b + ".") and c.count(".") == b.count(".") + 1}
        if kids:
            if {b + ".0", b + ".1"} - kids:
                return False
        elif last[b] != "clash":
            return False
    return True


# -- model checking ----------------------------------------------------------

def concept_extension(c: Concept, m: KripkeModel, role_edges=None, cache=None) -> frozenset:
    """The set of worlds of ``m`` that are instances of ``c``."""
    cache = {} if cache is None else cache
    if c in cache:
        return cache[c]
    worlds = frozenset(m.worlds)
    if isinstance(c, AtomicConcept):
        ext = frozenset(w for w in m.worlds if c.name in m.valuation[w])
    elif isinstance(c, TopC):
        ext = worlds
    elif isinstance(c, BottomC):
        ext = frozenset()
    elif isinstance(c, NotC):
        ext = worlds - concept_extension(c.arg, m, role_edges, cache)
    elif isinstance(c, AndC):
        ext = concept_extension(c.left, m, role_edges, cache) & concept_extension(c.right, m, role_edges, cache)
    elif isinstance(c, OrC):
        ext = concept_extension(c.left, m, role_edges, cache) | concept_extension(c.right, m, role_edges, cache)
    elif isinstance(c, (ForAll, Exists)):
        inner = concept_extension(c.filler, m, role_edges, cache)
        succ = {w: [v for (u, v) in m.edges if u == w] for w in m.worlds}
        if isinstance(c, ForAll):
            ext = frozenset(w for w in m.worlds if all(v in inner for v in succ[w]))
        else:
            ext = frozenset(w for w in m.worlds if any(v in inner for v in succ[w]))
    else:
        raise TypeError(f"not a concept: {c!r}")
    cache[c] = ext
    return ext


def model_check(kb: KnowledgeBase, m: KripkeModel) -> bool:
    """Every inclusion holds at every world and every assertion at the root."""
    cache: dict = {}
    for g in kb.tbox:
        sub = concept_extension(g.sub, m, cache=cache)
        sup = concept_extension(g.sup, m, cache=cache)
        if not sub <= sup:
            return False
    for ax in kb.abox:
        if m.root not in concept_extension(ax.concept, m, cache=cache):
            return False
    return True
