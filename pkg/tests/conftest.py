import pytest

from scalarmo.harness.campaign import desk_profile
from scalarmo.harness.runner import run_campaign

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def desk_store(tmp_path_factory):
    """The default desk campaign, run once per session (about half a minute)."""
    out = tmp_path_factory.mktemp("desk")
    run_campaign(desk_profile(), out, workers=1)
    return out


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
