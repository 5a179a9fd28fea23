import random

import pytest

from sdlkit.analysis import (CONSISTENT, GUARANTEED, INCONSISTENT, NOT_GUARANTEED,
                             AnalysisConfig, GuaranteeQuery, check_consistency,
                             compare_codes, guarantees_outcome)
from sdlkit.errors import ResourceLimitError, UnknownAtomError
from sdlkit.generators import random_nested_free_system
from sdlkit.kripke import BoundedSearchSpec, eval_formula, sat_oracle
from sdlkit.syntax import (TOP, Atom, Diamond, NormativeSystem, Not, conjoin,
                           parse_formula)
from sdlkit.alc import apply_lifting, translate_system
from sdlkit.tableau import certificate_is_closed, model_check

CODES = [Atom(c) for c in ("J", "J_star", "O", "O_star")]
BEST, WORST = Atom("outcome_best"), Atom("outcome_worst")
FORMULA_LIFTING = AnalysisConfig(lifting="formula")


def oracle_one_world(system):
    # ten corpus atoms leave room for a single world under the 16-bit bound
    target = conjoin(apply_lifting(system, "formula").formulas)
    return sat_oracle(target, BoundedSearchSpec(1, True, tuple(sorted(system.atoms()))))


def test_robots_consistent(robots):
    v = check_consistency(robots)
    assert v.kind == CONSISTENT and v.witness is not None and v.certificate is None
    assert oracle_one_world(robots).found


def test_conflicting_codes_inconsistent(robots):
    system = robots.extended(Atom("J_star"), Atom("O_star"))
    v = check_consistency(system)
    assert v.kind == INCONSISTENT
    assert certificate_is_closed(list(v.certificate))
    assert not oracle_one_world(system).found


def test_contradiction_inconsistent():
    v = check_consistency(NormativeSystem("x", [Atom("p"), Not(Atom("p"))]))
    assert v.kind == INCONSISTENT


@pytest.mark.parametrize("code, kind", [
    ("J", NOT_GUARANTEED), ("J_star", NOT_GUARANTEED), ("O", NOT_GUARANTEED), ("O_star", GUARANTEED),
])
def test_guarantees_best_outcome(robots, code, kind):
    v = guarantees_outcome(GuaranteeQuery(robots, Atom(code), BEST))
    assert v.kind == kind
    assert not v.vacuous
    if kind == NOT_GUARANTEED:
        m = v.witness
        kb = translate_system(robots.extended(Atom(code), Diamond(Not(BEST))))
        assert model_check(kb, m)
        assert any(not eval_formula(BEST, m, w) for w in m.reachable())
        assert oracle_one_world(robots.extended(Atom(code), Diamond(Not(BEST)))).found
    else:
        assert certificate_is_closed(list(v.certificate))


def test_unconstrained_code(robots):
    system = robots.extended(parse_formula("X -> X"))
    v = guarantees_outcome(GuaranteeQuery(system, Atom("X"), BEST))
    assert v.kind == NOT_GUARANTEED


def test_unknown_outcome(robots):
    with pytest.raises(UnknownAtomError) as info:
        guarantees_outcome(GuaranteeQuery(robots, Atom("J"), Atom("outcome_bst")))
    assert "outcome_best" in info.value.suggestions


def test_compare_only_o_star(robots):
    rows = compare_codes(robots, CODES, BEST)
    assert [(c.name, v.kind) for c, v in rows] == [
        ("J", NOT_GUARANTEED), ("J_star", NOT_GUARANTEED), ("O", NOT_GUARANTEED), ("O_star", GUARANTEED)]


def test_o_star_does_not_force_worst(robots):
    [(_, v)] = compare_codes(robots, [Atom("O_star")], WORST)
    assert v.kind == NOT_GUARANTEED
    found = oracle_one_world(robots.extended(Atom("O_star"), Diamond(Not(WORST))))
    assert found.found


def test_compare_needs_codes(robots):
    with pytest.raises(ValueError):
        compare_codes(robots, [], BEST)


def test_compare_rows_fail_independently(robots):
    rows = compare_codes(robots, CODES, BEST, config=AnalysisConfig(node_cap=50))
    kinds = [v.kind if not isinstance(v, Exception) else type(v) for _, v in rows]
    assert kinds == [NOT_GUARANTEED, NOT_GUARANTEED, NOT_GUARANTEED, ResourceLimitError]


def test_reduction_identity(robots):
    for code in CODES:
        for outcome in (BEST, WORST, Atom("outcome_bad"), Atom("outcome_mild")):
            g = guarantees_outcome(GuaranteeQuery(robots, code, outcome))
            c = check_consistency(robots.extended(code, Diamond(Not(outcome))))
            assert (g.kind == GUARANTEED) == (c.kind == INCONSISTENT)


def test_vacuous_guarantee(robots):
    for code in CODES:
        v = guarantees_outcome(GuaranteeQuery(robots, code, BEST, (Atom("J_star"), Atom("O_star"))))
        assert v.kind == GUARANTEED and v.vacuous
    assert not guarantees_outcome(GuaranteeQuery(robots, Atom("O_star"), BEST)).vacuous


def test_adding_top_changes_nothing(robots):
    base = [(c, v.kind) for c, v in compare_codes(robots, CODES, BEST)]
    more = [(c, v.kind) for c, v in compare_codes(robots.extended(TOP), CODES, BEST)]
    assert base == more


def test_verdict_json_schema(robots):
    v = guarantees_outcome(GuaranteeQuery(robots, Atom("J"), BEST))
    d = v.to_dict()
    assert set(d) == {"kind", "vacuous", "witness", "timing_ms"}
    assert set(v.to_dict(timing=False)) == {"kind", "vacuous", "witness"}
    d = guarantees_outcome(GuaranteeQuery(robots, Atom("O_star"), BEST)).to_dict()
    assert set(d) == {"kind", "vacuous", "certificate", "timing_ms"}


def _all_verdicts(system, config):
    atoms = sorted(system.atoms())
    out = [check_consistency(system, config).kind]
    for code in atoms[:2]:
        for outcome in atoms:
            out.append(guarantees_outcome(GuaranteeQuery(system, Atom(code), Atom(outcome)), config).kind)
    return out


def test_lifting_agreement_corpus(robots):
    assert _all_verdicts(robots, AnalysisConfig()) == _all_verdicts(robots, FORMULA_LIFTING)
    for code in CODES:
        for outcome in (BEST, WORST):
            q = GuaranteeQuery(robots, code, outcome)
            assert guarantees_outcome(q).kind == guarantees_outcome(q, FORMULA_LIFTING).kind


def test_lifting_agreement_random_systems():
    rng = random.Random(99)
    for _ in range(50):
        system = random_nested_free_system(rng)
        assert _all_verdicts(system, AnalysisConfig()) == _all_verdicts(system, FORMULA_LIFTING)


def test_lifting_differs_for_nested_globals():
    # a global that itself looks one step ahead is only partly covered by one box
    system = NormativeSystem("deep", [parse_formula("<>r & ~r")],
                             [parse_formula("(q | r) & (r -> [](~q & ~r))")])
    assert check_consistency(system).kind == INCONSISTENT
    assert check_consistency(system, FORMULA_LIFTING).kind == CONSISTENT
