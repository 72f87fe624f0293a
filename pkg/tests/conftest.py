import pytest

from qmclab.functions import DEFAULT_CORPUS, corpus

_acceptance = []


@pytest.fixture(scope="session")
def corpus_functions():
    return corpus()


@pytest.fixture(scope="session")
def corpus_ids():
    return DEFAULT_CORPUS


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _acceptance.append((props["criterion"], props.get("title", ""), report.outcome,
                            props.get("detail", ""), report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for crit, title, outcome, detail, dur in sorted(_acceptance, key=lambda r: r[0]):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] criterion {crit:>2}: {title} ({dur:.1f} s) {detail}")
