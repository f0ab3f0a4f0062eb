import numpy as np
import pytest

from qspexact.polycore import ComplexPoly, sup_norm_circle

_ACCEPTANCE = []


def random_poly(rng, d, sup=0.9):
    """Random complex degree-d polynomial with p_0 != 0, scaled to the given sup-norm."""
    c = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    p = ComplexPoly(c)
    return p.scaled(sup / sup_norm_circle(p, max(4096, 64 * (d + 1))))


@pytest.fixture
def rng():
    return np.random.default_rng(20250519)


@pytest.fixture
def acceptance_report():
    def report(label, ok, detail):
        _ACCEPTANCE.append((label, ok, detail))

    return report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
