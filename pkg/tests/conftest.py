import pytest

_LINES = []


class _Recorder:
    def __call__(self, number, title, value, tol, ok=None, extra=""):
        """Record one acceptance line and return whether it passed."""
        ok = (value <= tol) if ok is None else ok
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {value:.3e} (tol {tol:.0e})"
        if extra:
            line += f"  {extra}"
        _LINES.append((number, line))
        print(line)
        return ok


@pytest.fixture
def criterion():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_LINES, key=lambda t: t[0]):
        terminalreporter.write_line(line)
