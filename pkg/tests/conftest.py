import math

import pytest

from specsum import (
    LIMIT_INFINITY,
    LIMIT_ZERO,
    DiagonalOperator,
    Growth,
    OperatorFamily,
    PowerLawEntries,
    ShiftOperator,
    TailRule,
    VectorODEOperator,
    bounded_by,
    scalar,
)


def reciprocal_family():
    """Scalars 1/n on C: resolvent norm at 0 is n."""
    tail = TailRule(
        lambda n: scalar(1.0 / n),
        norm=LIMIT_ZERO,
        resolvent_at=((0.0, LIMIT_INFINITY),),
    )
    return OperatorFamily((scalar(1.0),), tail, "1/n")


def integer_family():
    tail = TailRule(lambda n: scalar(float(n)), norm=LIMIT_INFINITY, first_eigenvalue=LIMIT_INFINITY)
    return OperatorFamily((scalar(1.0),), tail, "n")


def identity_family():
    tail = TailRule(
        lambda n: scalar(1.0),
        norm=bounded_by(1.0),
        resolvent=bounded_by(1.0),
        resolvent_at=((0.0, bounded_by(1.0)),),
    )
    return OperatorFamily((scalar(1.0),), tail, "identity")


def ode_family(prefix=1):
    tail = TailRule(
        lambda n: VectorODEOperator(float(n)),
        norm=LIMIT_INFINITY,
        first_eigenvalue=LIMIT_INFINITY,
        resolvent=LIMIT_ZERO,
    )
    return OperatorFamily(tuple(VectorODEOperator(float(n)) for n in range(1, prefix + 1)), tail, "ode s_n=n")


def pi_diagonal(n):
    c = math.pi**n
    return DiagonalOperator(PowerLawEntries(c, 2.0), growth=Growth(c, 2.0))


def pi_family(count=5):
    return OperatorFamily.finite(*(pi_diagonal(n) for n in range(1, count + 1)), label="pi^n m^2")


def pi_family_infinite(prefix=2):
    tail = TailRule(pi_diagonal, norm=LIMIT_INFINITY, first_eigenvalue=LIMIT_INFINITY, resolvent=LIMIT_ZERO)
    return OperatorFamily(tuple(pi_diagonal(n) for n in range(1, prefix + 1)), tail, "pi^n m^2")


def linear_diagonal():
    return DiagonalOperator(PowerLawEntries(1.0, 1.0), growth=Growth(1.0, 1.0))


def shift_plus_diagonal():
    return OperatorFamily.finite(ShiftOperator(), linear_diagonal())


@pytest.fixture
def tmp_config(tmp_path):
    def write(text, name="family.yaml"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    def record(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
