import itertools
import os
from fractions import Fraction

import pytest

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def lattice(n, lo, hi=None):
    """All integer points of ``[lo, hi]^n`` (``[-lo, lo]^n`` when ``hi`` is omitted)."""
    if hi is None:
        lo, hi = -lo, lo
    return itertools.product(range(lo, hi + 1), repeat=n)


def F(*xs):
    return tuple(Fraction(x) for x in xs)


@pytest.fixture
def corpus_path():
    return lambda name: os.path.join(CORPUS, name)


ACCEPTANCE = {}


def record(number, ok, detail):
    """Store the outcome of an acceptance criterion and echo its status line."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
