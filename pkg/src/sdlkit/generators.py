"""Seeded random formulas and systems for differential testing."""

from __future__ import annotations

import random

from .syntax import (BOTTOM, TOP, And, Atom, Box, Diamond, Formula, Iff,
                     Implies, NormativeSystem, Not, Or, modal_depth)

DEFAULT_ATOMS = ("p", "q", "s", "t")

# (constructor, weight); modal operators are dropped once the modal budget is spent
_BINARY = ((And, 4), (Or, 3), (Implies, 2), (Iff, 1))
_UNARY = ((Not, 3), (Box, 2), (Diamond, 2))


def random_formula(rng: random.Random, atoms=DEFAULT_ATOMS, height: int = 4,
                   max_modal: int = 2, constants: bool = True) -> Formula:
    """A formula of syntactic height <= ``height`` and modal depth <= ``max_modal``."""
    if height <= 0 or rng.random() < 0.25:
        if constants and rng.random() < 0.05:
            return rng.choice((TOP, BOTTOM))
        return Atom(rng.choice(atoms))
    choices = [c for c in _BINARY] + [c for c in _UNARY
                                      if max_modal > 0 or c[0] is Not]
    ctor = rng.choices([c for c, _ in choices], weights=[w for _, w in choices])[0]
    if ctor in (Box, Diamond):
        return ctor(random_formula(rng, atoms, height - 1, max_modal - 1, constants))
    if ctor is Not:
        return Not(random_formula(rng, atoms, height - 1, max_modal, constants))
    return ctor(random_formula(rng, atoms, height - 1, max_modal, constants),
                random_formula(rng, atoms, height - 1, max_modal, constants))


def random_formulas(seed: int, count: int, **kw) -> list:
    rng = random.Random(seed)
    return [random_formula(rng, **kw) for _ in range(count)]


def random_nested_free_system(rng: random.Random, atoms=DEFAULT_ATOMS,
                              n_formulas: int = 3, n_globals: int = 2) -> NormativeSystem:
    """Ordinary formulas of modal depth <= 1 and purely propositional globals."""
    formulas = [random_formula(rng, atoms, 3, 1) for _ in range(n_formulas)]
    globals_ = [random_formula(rng, atoms, 2, 0) for _ in range(n_globals)]
    assert all(modal_depth(f) <= 1 for f in formulas)
    return NormativeSystem("random", formulas, globals_)
