import pytest

from attpush import synthetic


@pytest.fixture(scope="session")
def suite_manifest(tmp_path_factory):
    return synthetic.build_suite(tmp_path_factory.mktemp("suite"))


@pytest.fixture(scope="session")
def directional_manifest(tmp_path_factory):
    return synthetic.build_directional(tmp_path_factory.mktemp("directional"))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            if "test_acceptance.py::" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1]
            lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")
