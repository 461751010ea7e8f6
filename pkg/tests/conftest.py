from hypothesis import settings

settings.register_profile("pslab", max_examples=120, deadline=None)
settings.load_profile("pslab")


def pytest_terminal_summary(terminalreporter):
    lines = sorted(value for reports in terminalreporter.stats.values() for rep in reports
                   if getattr(rep, "when", None) == "call"
                   for key, value in rep.user_properties if key == "acceptance")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
