import sys
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")

_REPORT: dict[int, tuple[bool, str, float]] = {}


class AcceptanceRecorder:
    """Times one criterion and stores its pass/fail line for the summary."""

    def __init__(self, number: int, budget_s: float):
        self.number = number
        self.budget_s = budget_s
        self.details: list[str] = []
        self._t0 = time.perf_counter()

    def note(self, text: str):
        self.details.append(text)

    def finish(self, ok: bool):
        elapsed = time.perf_counter() - self._t0
        within = elapsed <= self.budget_s
        detail = "; ".join(self.details)
        _REPORT[self.number] = (ok and within, f"{detail} [{elapsed:.2f}s / budget {self.budget_s:g}s]", elapsed)
        assert ok, detail
        assert within, f"criterion {self.number} took {elapsed:.2f}s, budget {self.budget_s}s"


@pytest.fixture
def criterion(request):
    """Factory: ``rec = criterion(n, budget_seconds)``; call ``rec.finish(ok)`` at the end."""
    made = []

    def make(number: int, budget_s: float) -> AcceptanceRecorder:
        rec = AcceptanceRecorder(number, budget_s)
        made.append(rec)
        return rec

    yield make
    for rec in made:
        if rec.number not in _REPORT:
            _REPORT[rec.number] = (False, "; ".join(rec.details) + " [raised before completion]", 0.0)


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_REPORT):
        ok, detail, _ = _REPORT[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
