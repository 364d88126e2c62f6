from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
APPENDIX = FIXTURES / "appendix"
APPENDIX_IDS = ("d1", "d2", "d3", "d4-base", "d4-tuned", "d5")


def output_text(name: str) -> str:
    return (APPENDIX / "outputs" / f"{name}.md").read_text(encoding="utf-8")


def corpus_text(name: str) -> str:
    return (APPENDIX / "corpus" / f"{name}.md").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def d1() -> str:
    return output_text("d1")


@pytest.fixture(scope="session")
def d3() -> str:
    return output_text("d3")


@pytest.fixture(scope="session")
def d5() -> str:
    return output_text("d5")


@pytest.fixture(scope="session")
def ground_truth_doc() -> str:
    """A fully valid corpus document with two syllogisms and all checks."""
    return (FIXTURES / "corpus" / "pramana-001.md").read_text(encoding="utf-8")


# acceptance criteria report: number -> (title, passed)
CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, passed = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}  {'PASS' if passed else 'FAIL'}  {title}")
