import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from deducreduc.deduction import Provenance, zero_product  # noqa: E402
from deducreduc.encoder import BinaryEquation, hamiltonian_from_equations  # noqa: E402
from deducreduc.pbf import Polynomial  # noqa: E402
from deducreduc.textio import parse_inline  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

# the five-variable toy system and its expanded Hamiltonian
TOY_H = ("2 x1 x2 x4 x5 + -2 x1 x3 x4 + -2 x2 x3 x5 + -2 x2 x3 + 6 x1 x2 + -3 x1 x4"
         " + -8 x2 x4 + 1 x2 x5 + 3 x2 + 4 x3 x4 + 1 x3 + 4 x4 + 1")
TOY_REDUCED_SPLIT = ("8 x1 x2 + -2 x2 x3 + -3 x1 x4 + -8 x2 x4 + 1 x2 x5 + 3 x2"
                     " + 4 x3 x4 + 1 x3 + 4 x4 + 1")
TOY_REDUCED = "8 x1 x2 + -3 x1 x4 + -8 x2 x4 + 1 x2 x5 + 3 x2 + 4 x3 x4 + 1 x3 + 4 x4 + 1"
TOY_NAIVE = "-3 x1 x4 + -8 x2 x4 + 1 x2 x5 + 3 x2 + 4 x3 x4 + 1 x3 + 4 x4 + 1"
TOY_SPECTRUM = [1, 1, 5, 5, 2, 2, 10, 10, 4, 5, 0, 1, 3, 2, 3, 2,
                1, 1, 2, 2, 2, 2, 5, 5, 10, 11, 3, 6, 9, 8, 4, 5]
TOY_SOLUTION = {1: 0, 2: 1, 3: 0, 4: 1, 5: 0}


def x(i):
    return Polynomial.var(i)


@pytest.fixture
def toy_equations():
    return [
        BinaryEquation(x(1) + x(2) + x(3), Polynomial.const(1)),
        BinaryEquation(x(1) * x(4) + x(2) * x(5), x(3)),
        BinaryEquation(x(1) + 2 * x(2), x(3) + 2 * x(4)),
    ]


@pytest.fixture
def toy_h(toy_equations):
    return hamiltonian_from_equations(toy_equations)


@pytest.fixture
def toy_deductions():
    return [zero_product(m, Provenance.SIMPLE_JUDGMENT) for m in [(1, 2), (2, 3), (1, 3)]]


@pytest.fixture
def poly():
    return parse_inline


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
