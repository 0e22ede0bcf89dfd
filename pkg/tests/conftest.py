import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion and fail the test on any mismatch."""

    def check(number: int, title: str, results: list[tuple[str, object, object]]):
        bad = [(label, got, want) for label, got, want in results if got != want]
        status = "PASS" if not bad else "FAIL"
        detail = "; ".join(f"{label}: got {got}, expected {want}" for label, got, want in bad)
        line = f"criterion {number:>2}: {status}  {title}" + (f"  [{detail}]" if detail else "")
        _LINES[number] = line
        print(line)
        assert not bad, detail

    return check


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_LINES):
            terminalreporter.write_line(_LINES[n])
