import os
from pathlib import Path

import pytest

from weblogmr import logmodel

ALL_TAGS = ("HitsPage", "HitsCity", "HitsState", "HitsCountry", "HitsAge",
            "HitsQuarter", "HitsDate")

# Preprocessed log lines exactly as printed in the source figure.
FIG4_TEXT = """\
pizza/index.html#13/01/2012#1#48#india#mh#pune
pizza/index.html#23/05/2012#1#37#india#mh#pune
/pizza/anywhere-banking.html#04/09/2012#1#39#india#mh#pune
/pizza/anywhere-banking.html#16/08/2012#1#32#india#mh#nashik
/pizza/cosmos-e-solutions-pvt-ltd.html#03/10/2012#1#43#india#mh#bombay
/pizza/cosmos-e-solutions-pvt-ltd.html#25/03/2012#1#40#india#mh#bombay
pizza/index.html#27/07/2012#1#62#india#mh#nashik
pizza/index.html#14/08/2012#1#31#india#mh#pune
pizza/index.html#14/11/2012#1#10#india#mh#bombay
/pizza/anywhere-banking.html#26/10/2012#1#38#india#mh#nashik
pizza/index.html#27/09/2012#1#35#india#mh#pune
pizza/index.html#11/06/2012#1#7#india#mh#pune
/pizza/cosmos-e-solutions-pvt-ltd.html#29/04/2012#1#46#india#mh#bombay
pizza/index.html#21/03/2012#1#3#india#mh#nashik
/pizza/anywhere-banking.html#20/03/2012#1#2#india#mh#nashik
pizza/index.html#03/10/2012#1#23#india#mh#bombay
pizza/index.html#14/09/2012#1#41#india#mh#pune
pizza/index.html#19/05/2012#1#30#india#mh#pune
"""
FIG4_LINES = FIG4_TEXT.splitlines()


@pytest.fixture
def fig4_file(tmp_path) -> Path:
    path = tmp_path / "fig4.txt"
    path.write_text(FIG4_TEXT, encoding="utf-8")
    return path


_GENERATED = {}


def generated_log(directory: Path, n: int, seed: int) -> Path:
    """Write (once per session) a generated log of n records."""
    key = (n, seed)
    if key not in _GENERATED or not _GENERATED[key].exists():
        path = directory / f"gen-{n}-{seed}.txt"
        logmodel.write_records(
            logmodel.generate(logmodel.GeneratorConfig(record_count=n, seed=seed)), path)
        _GENERATED[key] = path
    return _GENERATED[key]


@pytest.fixture(scope="session")
def gen_dir(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("generated")


@pytest.fixture(scope="session")
def make_log(gen_dir):
    return lambda n, seed=42: generated_log(gen_dir, n, seed)


_acceptance_lines = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        line = f"{outcome}  {name}"
        if report.skipped and isinstance(report.longrepr, tuple):
            line += f"  ({report.longrepr[2]})"
        _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
