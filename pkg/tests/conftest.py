import pytest

from chunkvote import synthetic

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion's verdict for the summary table."""

    def record(name, ok, detail=""):
        _ACCEPTANCE.append((name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}{suffix}")


@pytest.fixture
def example():
    return synthetic.example_sentence()


EXAMPLE_IOB1 = "O I I O I I B O I O O O I I B I O".split()
EXAMPLE_IOE2 = "O I E O I E E O E O O O I E I E O".split()
EXAMPLE_OPEN = {1, 4, 6, 8, 12, 14}
EXAMPLE_CLOSE = {2, 5, 6, 8, 13, 15}
