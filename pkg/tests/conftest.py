import pytest

ACCEPTANCE: dict = {}


def _key(item):
    return item.name.split("_")[1].upper()


@pytest.fixture
def criterion(request):
    """Callable recording a detail line for this acceptance criterion."""
    entry = ACCEPTANCE.setdefault(_key(request.node), {"outcome": None, "detail": ""})

    def record(detail):
        entry["detail"] = detail

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and "criterion" in getattr(item, "fixturenames", ()):
        entry = ACCEPTANCE[_key(item)]
        # a parametrized criterion passes only if every case passes
        if not rep.passed:
            entry["outcome"] = "FAIL"
        elif entry["outcome"] is None:
            entry["outcome"] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        e = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key} {e['outcome'] or 'FAIL'} {e['detail']}".rstrip())
