import sys
from fractions import Fraction

import pytest

from stabdec import parse, parse_formula
from stabdec.polyhedra import SemilinearSet
from stabdec.qe import to_cells


def problem(theory, xs, ys, body):
    return parse(f"theory {theory}\nvars x: {xs} ; y: {ys}\nformula {body}")


def qf(text, vars=("x1", "y1"), theory="doag"):
    """Quantifier-free formula text as a set over ``vars``."""
    return to_cells(parse_formula(text, theory), vars)


def pt(**kw):
    return {k: Fraction(v) for k, v in kw.items()}


@pytest.fixture
def plane():
    return SemilinearSet.full(("x1", "y1"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
