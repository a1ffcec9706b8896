import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_criteria: dict[int, tuple[str, bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        num, name = mark.args
        detail = dict(item.user_properties).get("detail", "")
        _criteria[num] = (name, rep.passed, detail)
        print(f"\ncriterion {num:>2} {'PASS' if rep.passed else 'FAIL'}: {name} [{detail}]")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        name, ok, detail = _criteria[num]
        terminalreporter.write_line(
            f"criterion {num:>2} {'PASS' if ok else 'FAIL'}: {name} [{detail}]"
        )
