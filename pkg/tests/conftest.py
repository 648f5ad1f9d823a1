from __future__ import annotations

from pathlib import Path

import pytest

from nfrkit import load_session, parse_model
from nfrkit.storage import dir_model_resolver

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def pos_model():
    result = parse_model((FIXTURES / "pos.ucm").read_bytes())
    assert result.model is not None, result.diagnostics
    return result.model


@pytest.fixture(scope="session")
def pos_full_model():
    result = parse_model((FIXTURES / "pos-full.ucm").read_bytes())
    assert result.model is not None, result.diagnostics
    return result.model


@pytest.fixture(scope="session")
def pos_session():
    text = (FIXTURES / "pos-session.json").read_text(encoding="utf-8")
    return load_session(text, dir_model_resolver(FIXTURES))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(rep, "when", "call") == "call":
                name = nodeid.split("::")[-1]
                lines.append((name, status.upper()))
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"  {status:6s} {name}")
