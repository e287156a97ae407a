# Acceptance verdicts recorded by tests/test_acceptance.py, printed after the run.
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {verdict}  {detail}")
