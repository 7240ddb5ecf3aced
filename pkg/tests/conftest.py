import numpy as np
import pytest

from qsprep.amplitudes import load_vector

EXPERIMENT_PROBS = (0.03, 0.06, 0.15, 0.05, 0.1, 0.3, 0.2, 0.11)


@pytest.fixture
def v8():
    return load_vector(np.sqrt(EXPERIMENT_PROBS))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
