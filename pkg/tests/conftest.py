import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hbcurves import standard_surface  # noqa: E402
from hbcurves.complexgraph import enumerate_curves  # noqa: E402

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"


@lru_cache(maxsize=None)
def corpus(g: int, bound: int):
    """Enumerated curve classes on the standard genus-g surface, shared across tests."""
    S = standard_surface(g)
    return S, tuple(k.diagram(S) for k in enumerate_curves(S, bound))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])


@pytest.fixture
def g2():
    return standard_surface(2)


@pytest.fixture
def g3():
    return standard_surface(3)
