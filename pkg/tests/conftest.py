from __future__ import annotations

from pathlib import Path

import pytest

from testforge import fixtures
from testforge.cli import main as cli_main

PROGRAMS = Path(__file__).with_name("programs")

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number, title = getattr(report, "criterion", (None, None))
    if number is not None:
        ok = report.outcome == "passed" and _criteria.get(number, (title, True))[1]
        _criteria[number] = (title, ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def program_source():
    def read(name: str) -> str:
        return (PROGRAMS / name).read_text(encoding="utf-8")
    return read


@pytest.fixture
def ws(tmp_path):
    """Fresh copy of the fixture corpus."""
    return fixtures.init_workspace(tmp_path / "ws")


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    def run(*argv):
        code = cli_main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return run
