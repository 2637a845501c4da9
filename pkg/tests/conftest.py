from __future__ import annotations

from pathlib import Path

import pytest

from qconn.harness import verify_rules

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def triangle_free_corpus() -> Path:
    return DATA / "triangle_free_connected.g6"


@pytest.fixture(scope="session")
def connected_corpus() -> Path:
    return DATA / "connected.g6"


@pytest.fixture(scope="session")
def exhaustive7():
    """One labeled pass over every connected graph with n <= 7, all rules plus lemmas."""
    reports, lemmas = verify_rules(None, (2, 7), workers=1, lemmas=True)
    return {r.rule: r for r in reports}, lemmas


@pytest.fixture
def acceptance():
    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
        if detail:
            line += f" :: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
