def pytest_terminal_summary(terminalreporter):
    # repeat the acceptance lines at the end of every run, captured or not
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.SUMMARY, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
