"""Consistency and outcome-guarantee checks over normative systems."""

from __future__ import annotations

import difflib
import json
import time
from dataclasses import dataclass, field

from .alc import apply_lifting, translate_system
from .errors import UnknownAtomError
from .kripke import KripkeModel
from .syntax import Atom, Diamond, Formula, NormativeSystem, Not, format_formula
from .tableau import TableauConfig, is_satisfiable

__all__ = ["CONSISTENT", "INCONSISTENT", "GUARANTEED", "NOT_GUARANTEED",
           "Verdict", "GuaranteeQuery", "AnalysisConfig", "check_consistency",
           "guarantees_outcome", "compare_codes", "resolve_atom"]

CONSISTENT = "CONSISTENT"
INCONSISTENT = "INCONSISTENT"
GUARANTEED = "GUARANTEED"
NOT_GUARANTEED = "NOT_GUARANTEED"


@dataclass(frozen=True)
class AnalysisConfig:
    lifting: str = "tbox"
    node_cap: int = 10 ** 6

    def tableau(self) -> TableauConfig:
        return TableauConfig(node_cap=self.node_cap)


@dataclass(frozen=True)
class Verdict:
    kind: str
    witness: KripkeModel | None = None
    certificate: tuple | None = None
    vacuous: bool = False
    timing_ms: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {"kind": self.kind, "vacuous": self.vacuous}
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        if self.certificate is not None:
            d["certificate"] = list(self.certificate)
        if timing:
            d["timing_ms"] = round(self.timing_ms, 3)
        return d

    def to_json(self, timing: bool = True, **kw) -> str:
        return json.dumps(self.to_dict(timing), **kw)


@dataclass(frozen=True)
class GuaranteeQuery:
    system: NormativeSystem
    code: Formula
    outcome: Atom
    assumptions: tuple = field(default=())


def resolve_atom(name: str, vocabulary) -> Atom:
    """Return ``Atom(name)`` if it is in ``vocabulary``, else raise with suggestions."""
    vocabulary = sorted(vocabulary)
    if name not in vocabulary:
        raise UnknownAtomError(name, difflib.get_close_matches(name, vocabulary, n=2))
    return Atom(name)


def _decide(system: NormativeSystem, config: AnalysisConfig):
    kb = translate_system(apply_lifting(system, config.lifting))
    return is_satisfiable(kb, config.tableau())


def check_consistency(n: NormativeSystem, config: AnalysisConfig | None = None) -> Verdict:
    """CONSISTENT with a witness model, or INCONSISTENT with a closed certificate."""
    config = config or AnalysisConfig()
    start = time.perf_counter()
    result = _decide(n, config)
    elapsed = (time.perf_counter() - start) * 1000
    if result.satisfiable:
        return Verdict(CONSISTENT, witness=result.model, timing_ms=elapsed)
    return Verdict(INCONSISTENT, certificate=tuple(result.trace), timing_ms=elapsed)


def guarantees_outcome(q: GuaranteeQuery, config: AnalysisConfig | None = None) -> Verdict:
    """Does asserting ``q.code`` force ``q.outcome`` in every reachable world?

    The code guarantees the outcome iff ``system & code & <>~outcome`` is
    unsatisfiable. When ``system & code`` is already unsatisfiable the
    guarantee holds only vacuously and is flagged as such.
    """
    config = config or AnalysisConfig()
    resolve_atom(q.outcome.name, q.system.atoms())
    start = time.perf_counter()
    premises = q.system.extended(*q.assumptions, q.code)
    result = _decide(premises.extended(Diamond(Not(q.outcome))), config)
    if result.satisfiable:
        elapsed = (time.perf_counter() - start) * 1000
        return Verdict(NOT_GUARANTEED, witness=result.model, timing_ms=elapsed)
    vacuous = not _decide(premises, config).satisfiable
    elapsed = (time.perf_counter() - start) * 1000
    return Verdict(GUARANTEED, certificate=tuple(result.trace), vacuous=vacuous,
                   timing_ms=elapsed)


def compare_codes(n: NormativeSystem, codes, outcome: Atom, assumptions=(),
                  config: AnalysisConfig | None = None) -> list:
    """One guarantee verdict per code; a failing row carries its exception."""
    codes = list(codes)
    if not codes:
        raise ValueError("compare_codes needs at least one code")
    rows = []
    for code in codes:
        try:
            verdict = guarantees_outcome(GuaranteeQuery(n, code, outcome, tuple(assumptions)), config)
        except Exception as exc:  # noqa: BLE001 - rows are independent
            rows.append((code, exc))
        else:
            rows.append((code, verdict))
    return rows


def describe(verdict: Verdict) -> str:
    """One-line human summary."""
    text = verdict.kind
    if verdict.vacuous:
        text += " (vacuous: the premises are inconsistent)"
    return text


def code_label(code: Formula) -> str:
    return format_formula(code)
