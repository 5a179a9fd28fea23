from pathlib import Path

import pytest
from hypothesis import strategies as st

from sdlkit.syntax import (BOTTOM, TOP, And, Atom, Box, Diamond, Iff, Implies,
                           Not, Or, parse_system)

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
ROBOTS = CORPUS / "robots.sdl"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def robots():
    return parse_system(ROBOTS.read_text(encoding="utf-8"))


def formulas(atoms=("p", "q", "s", "t"), max_leaves=12):
    leaves = st.one_of(st.sampled_from([Atom(a) for a in atoms]),
                       st.sampled_from([TOP, BOTTOM]))

    def extend(children):
        return st.one_of(
            st.builds(Not, children), st.builds(Box, children), st.builds(Diamond, children),
            st.builds(And, children, children), st.builds(Or, children, children),
            st.builds(Implies, children, children), st.builds(Iff, children, children))

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS):
        terminalreporter.write_line(line)
