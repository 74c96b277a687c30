import math

import numpy as np
import pytest

from namrspin.chain_model import ResonatorSpec

TWO_PI = 2 * math.pi
OMEGA_R = TWO_PI * 1e6
G = TWO_PI * 0.5e6
LAMBDA = TWO_PI * 50e3
T_G = 0.3e-3


def paper_spec(n=11, delta_max=0.0, **kw):
    return ResonatorSpec(n=n, omega_r=OMEGA_R, g=G, lambda_bar=LAMBDA, delta_max=delta_max, **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion."""
    def record(label: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
        _CRITERIA.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
