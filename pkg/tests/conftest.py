"""Prints one PASS/FAIL line per acceptance criterion after the run."""
import pytest

_OUTCOMES: dict[int, tuple[str, list[str], float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    prev_title, failed, seconds = _OUTCOMES.get(number, (title, [], 0.0))
    if rep.failed and item.name not in failed:
        failed.append(item.name)
    _OUTCOMES[number] = (prev_title, failed, seconds + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        title, failed, seconds = _OUTCOMES[number]
        status = "FAIL" if failed else "PASS"
        extra = f"  failed: {', '.join(failed)}" if failed else ""
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title} ({seconds:.1f} s){extra}")
