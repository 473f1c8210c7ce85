"""Collects acceptance-criterion outcomes and prints one verdict line per criterion."""
import pytest

_VERDICTS = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(number, title): test implements one acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    report = outcome.get_result()
    number, title = marker.args
    # a failure in any phase fails the criterion; a later pass never overrides it
    if report.failed:
        _VERDICTS[number] = (title, False, report.longreprtext.strip().splitlines()[-1:])
    elif report.when == "call" and number not in _VERDICTS:
        detail = getattr(item.module, "DETAILS", {}).get(number, "")
        _VERDICTS[number] = (title, True, [detail] if detail else [])


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        title, passed, detail = _VERDICTS[number]
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail[0]}]"
        tr.write_line(line, green=passed, red=not passed)
    n_pass = sum(v[1] for v in _VERDICTS.values())
    tr.write_line(f"{n_pass}/{len(_VERDICTS)} acceptance criteria passed")
