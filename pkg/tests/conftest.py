from __future__ import annotations

import pytest

from kronbrs.finite_field import BijectionFamily, FieldSpec
from kronbrs.laurent import laurent_from_quadratic_L, quadratic_root, Poly
from kronbrs.sequences import KroneckerSystem


@pytest.fixture(scope="session")
def F2() -> FieldSpec:
    return FieldSpec.for_base(2)


@pytest.fixture(scope="session")
def lstar_seq(F2):
    """Hankel digital sequence of the quadratic fixture, generous size."""
    L = laurent_from_quadratic_L(F2, 200)
    return KroneckerSystem(F2, (L,), BijectionFamily.identity(F2)).digital(64, 30)


@pytest.fixture(scope="session")
def pair_seq(F2):
    L1 = laurent_from_quadratic_L(F2, 200)
    L2 = quadratic_root(F2, Poly((1, 1)), 200)
    return KroneckerSystem(F2, (L1, L2), BijectionFamily.identity(F2)).digital(64, 30)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Record one acceptance line; the terminal summary prints them all."""

    def _record(num: int, name: str, ok: bool, detail: str) -> None:
        line = f"criterion {num:>2} {name:<26} {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
