import contextlib

import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def record(number: int, summary: str):
        info: dict = {}
        try:
            yield info
        except BaseException as exc:
            _ACCEPTANCE.append(f"FAIL  {number:>2}  {summary}  {info.get('detail', '')} [{type(exc).__name__}: {exc}]")
            raise
        _ACCEPTANCE.append(f"PASS  {number:>2}  {summary}  {info.get('detail', '')}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
