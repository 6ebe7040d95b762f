import pytest

from mixedcat import fock
from mixedcat.states import MqsParams


@pytest.fixture(scope="session")
def small_mixed():
    """Mixed cat (alpha=2, V=3) in the number basis, with its cutoff."""
    p = MqsParams(2.0, 3.0)
    dim = fock.sized_dim(p)
    return p, fock.mixed_mqs_fock(p, dim)


@pytest.fixture(scope="session")
def fock_states():
    """Initial oracle states for every oracle parameter point."""
    out = {}
    for alpha, V in ((1.5, 1.0), (2.0, 3.0), (2.5, 5.0)):
        p = MqsParams(alpha, V)
        dim = fock.sized_dim(p)
        out[(alpha, V)] = (p, dim, fock.mixed_mqs_fock(p, dim))
    return out


_VERDICTS = []


@pytest.fixture
def verdict(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def record(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}: {detail}"
        _VERDICTS.append((number, line))
        with capsys.disabled():
            print(f"\n{line}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_VERDICTS):
            terminalreporter.write_line(line)
