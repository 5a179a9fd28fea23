"""Finite Kripke models and a brute-force bounded satisfiability oracle.

The oracle enumerates every model up to a world bound (all accessibility
relations, optionally serial, and all valuations) without any symmetry
reduction. Enumeration is vectorised with numpy over valuations and relations,
but the search order is the plain lexicographic one: world count, then
relation index, then valuation index.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BoundExceededError, UnknownAtomError
from .syntax import (And, Atom, Bottom, Box, Diamond, Formula, Iff, Implies,
                     Not, Or, Top, atoms_of)

__all__ = [
    "KripkeModel", "BoundedSearchSpec", "OracleResult", "eval_formula",
    "holds_everywhere", "truth_tables", "serial_relations", "sat_oracle",
]


@dataclass(frozen=True)
class KripkeModel:
    """A finite pointed model.

    ``valuation`` maps every world to the atoms true there; ``atoms`` is the
    vocabulary the model interprets (atoms outside it are unknown, atoms in
    it but missing from a world's set are false).
    """

    worlds: tuple
    edges: frozenset
    valuation: dict = field(hash=False, compare=True)
    root: object = 0
    atoms: frozenset = frozenset()

    def __post_init__(self):
        if not self.worlds:
            raise ValueError("a Kripke model needs at least one world")
        if self.root not in self.worlds:
            raise ValueError(f"root {self.root!r} is not a world")
        missing = [w for w in self.worlds if w not in self.valuation]
        if missing:
            raise ValueError(f"valuation misses worlds {missing}")
        vocab = frozenset(self.atoms)
        for w in self.worlds:
            vocab |= frozenset(self.valuation[w])
        object.__setattr__(self, "atoms", vocab)
        object.__setattr__(self, "edges", frozenset(self.edges))

    def successors(self, w) -> list:
        return [v for v in self.worlds if (w, v) in self.edges]

    def is_serial(self) -> bool:
        return all(self.successors(w) for w in self.worlds)

    def reachable(self, start=None) -> list:
        """Worlds reachable from ``start`` (default: the root) in one or more steps."""
        start = self.root if start is None else start
        seen, frontier, order = set(), [start], []
        while frontier:
            w = frontier.pop(0)
            for v in self.successors(w):
                if v not in seen:
                    seen.add(v)
                    order.append(v)
                    frontier.append(v)
        return order

    def to_dict(self) -> dict:
        return {
            "worlds": [str(w) for w in self.worlds],
            "edges": sorted([str(a), str(b)] for a, b in self.edges),
            "valuation": {str(w): sorted(self.valuation[w]) for w in self.worlds},
            "root": str(self.root),
            "atoms": sorted(self.atoms),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "KripkeModel":
        return cls(tuple(d["worlds"]),
                   frozenset((a, b) for a, b in d["edges"]),
                   {w: frozenset(v) for w, v in d["valuation"].items()},
                   d["root"], frozenset(d.get("atoms", ())))

    def to_dot(self, name: str = "model") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for w in self.worlds:
            label = f"{w}\\n" + ", ".join(sorted(self.valuation[w]))
            shape = "doublecircle" if w == self.root else "circle"
            lines.append(f'  "{w}" [shape={shape}, label="{label}"];')
        for a, b in sorted(self.edges, key=lambda e: (str(e[0]), str(e[1]))):
            lines.append(f'  "{a}" -> "{b}" [label="r"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def eval_formula(f: Formula, m: KripkeModel, w) -> bool:
    """Truth of ``f`` at world ``w`` of ``m`` under the Kripke clauses."""
    if isinstance(f, Atom):
        if f.name not in m.atoms:
            raise UnknownAtomError(f.name)
        return f.name in m.valuation[w]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not eval_formula(f.arg, m, w)
    if isinstance(f, And):
        return eval_formula(f.left, m, w) and eval_formula(f.right, m, w)
    if isinstance(f, Or):
        return eval_formula(f.left, m, w) or eval_formula(f.right, m, w)
    if isinstance(f, Implies):
        return (not eval_formula(f.left, m, w)) or eval_formula(f.right, m, w)
    if isinstance(f, Iff):
        return eval_formula(f.left, m, w) == eval_formula(f.right, m, w)
    if isinstance(f, Box):
        return all(eval_formula(f.arg, m, v) for v in m.successors(w))
    if isinstance(f, Diamond):
        return any(eval_formula(f.arg, m, v) for v in m.successors(w))
    raise TypeError(f"not a formula: {f!r}")


def holds_everywhere(f: Formula, m: KripkeModel) -> bool:
    return all(eval_formula(f, m, w) for w in m.worlds)


# -- bounded enumeration -----------------------------------------------------

MAX_WORLDS = 4
MAX_WORLD_ATOM_BITS = 16


@dataclass(frozen=True)
class BoundedSearchSpec:
    max_worlds: int = 3
    require_serial: bool = True
    atoms: tuple = ()

    def validate(self) -> None:
        if self.max_worlds < 1:
            raise BoundExceededError("max_worlds must be at least 1")
        if self.max_worlds > MAX_WORLDS:
            raise BoundExceededError(f"max_worlds {self.max_worlds} > {MAX_WORLDS}")
        if self.max_worlds * len(self.atoms) > MAX_WORLD_ATOM_BITS:
            raise BoundExceededError(
                f"{self.max_worlds} worlds x {len(self.atoms)} atoms exceeds "
                f"{MAX_WORLD_ATOM_BITS} valuation bits")


@dataclass(frozen=True)
class OracleResult:
    found: bool
    model: KripkeModel | None = None
    models_checked: int = 0

    @property
    def status(self) -> str:
        return "SAT" if self.found else "NO_MODEL_WITHIN_BOUND"


def serial_relations(n: int, serial: bool = True) -> np.ndarray:
    """All ``n``-world relations as a ``(R, n, n)`` bool array, in index order.

    Relation index ``k`` has edge ``i -> j`` iff bit ``i*n + j`` of ``k`` is set.
    """
    k = np.arange(2 ** (n * n), dtype=np.int64)
    bits = ((k[:, None] >> np.arange(n * n)) & 1).astype(bool)
    rels = bits.reshape(-1, n, n)
    if serial:
        rels = rels[rels.any(axis=2).all(axis=1)]
    return rels


def _valuations(n: int, k: int) -> np.ndarray:
    """All valuations as a ``(V, n, k)`` bool array; bit ``w*k + a`` is atom ``a`` at ``w``."""
    v = np.arange(2 ** (n * k), dtype=np.int64)
    bits = ((v[:, None] >> np.arange(n * k)) & 1).astype(bool)
    return bits.reshape(len(v), n, k)


def _table(f: Formula, rels: np.ndarray, vals: np.ndarray, index: dict,
           cache: dict | None = None) -> np.ndarray:
    """Truth of ``f`` as an array broadcastable to ``(R, V, n)``.

    Subformulas without modal operators do not depend on the relation and
    keep a leading axis of length one.
    """
    cache = {} if cache is None else cache
    if f in cache:
        return cache[f]
    n, V = rels.shape[1], vals.shape[0]
    if isinstance(f, Atom):
        if f.name not in index:
            raise UnknownAtomError(f.name)
        out = vals[None, :, :, index[f.name]]
    elif isinstance(f, Top):
        out = np.ones((1, V, n), dtype=bool)
    elif isinstance(f, Bottom):
        out = np.zeros((1, V, n), dtype=bool)
    elif isinstance(f, Not):
        out = ~_table(f.arg, rels, vals, index, cache)
    elif isinstance(f, (And, Or, Implies, Iff)):
        a = _table(f.left, rels, vals, index, cache)
        b = _table(f.right, rels, vals, index, cache)
        if isinstance(f, And):
            out = a & b
        elif isinstance(f, Or):
            out = a | b
        elif isinstance(f, Implies):
            out = ~a | b
        else:
            out = a == b
    elif isinstance(f, (Box, Diamond)):
        sub = _table(f.arg, rels, vals, index, cache)
        R = rels.shape[0]
        box = isinstance(f, Box)
        out = np.empty((R, V, n), dtype=bool)
        cols = [np.ascontiguousarray(np.broadcast_to(sub[:, :, u], (R, V))) for u in range(n)]
        for w in range(n):
            acc = np.full((R, V), box)
            for u in range(n):
                edge = rels[:, w, u][:, None]
                if box:
                    acc &= ~edge | cols[u]
                else:
                    acc |= edge & cols[u]
            out[:, :, w] = acc
    else:
        raise TypeError(f"not a formula: {f!r}")
    cache[f] = out
    return out


def truth_tables(f: Formula, n: int, atoms: Sequence[str], serial: bool = True,
                 rels: np.ndarray | None = None) -> np.ndarray:
    """Truth of ``f`` at every world of every ``n``-world model over ``atoms``.

    Returns a ``(R, V, n)`` bool array indexed by relation, valuation and world.
    """
    atoms = list(atoms)
    if rels is None:
        rels = serial_relations(n, serial)
    vals = _valuations(n, len(atoms))
    table = _table(f, rels, vals, {a: i for i, a in enumerate(atoms)})
    return np.broadcast_to(table, (rels.shape[0], vals.shape[0], n))


def _chunks(total: int, size: int):
    for start in range(0, total, size):
        yield start, min(total, start + size)


def sat_oracle(f: Formula, spec: BoundedSearchSpec | None = None) -> OracleResult:
    """Search for a model whose root (world 0) satisfies ``f``.

    A negative answer means only that no model exists within the bound.
    """
    spec = spec or BoundedSearchSpec()
    atoms = tuple(spec.atoms) or tuple(sorted(atoms_of(f)))
    spec = BoundedSearchSpec(spec.max_worlds, spec.require_serial, atoms)
    spec.validate()
    missing = atoms_of(f) - set(atoms)
    if missing:
        raise UnknownAtomError(sorted(missing)[0])
    index = {a: i for i, a in enumerate(atoms)}
    checked = 0
    for n in range(1, spec.max_worlds + 1):
        rels = serial_relations(n, spec.require_serial)
        if len(rels) == 0:
            continue
        vals = _valuations(n, len(atoms))
        step = max(1, (1 << 22) // (vals.shape[0] * n))
        for lo, hi in _chunks(len(rels), step):
            table = _table(f, rels[lo:hi], vals, index)[:, :, 0]
            table = np.broadcast_to(table, (hi - lo, vals.shape[0]))
            hits = np.flatnonzero(table.reshape(-1))
            if hits.size:
                r, v = divmod(int(hits[0]), vals.shape[0])
                checked += int(hits[0]) + 1
                return OracleResult(True, _build_model(rels[lo + r], vals[v], atoms), checked)
            checked += table.size
    return OracleResult(False, None, checked)


def _build_model(rel: np.ndarray, val: np.ndarray, atoms: Sequence[str]) -> KripkeModel:
    n = rel.shape[0]
    worlds = tuple(range(n))
    edges = frozenset((i, j) for i, j in itertools.product(worlds, worlds) if rel[i, j])
    valuation = {w: frozenset(a for i, a in enumerate(atoms) if val[w, i]) for w in worlds}
    return KripkeModel(worlds, edges, valuation, 0, frozenset(atoms))
