import oracles

ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def pytest_report_header(config):
    return f"PIDLAT_SEED={oracles.seed()}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number} {'PASS' if ok else 'FAIL'}  {name}: {detail}")
