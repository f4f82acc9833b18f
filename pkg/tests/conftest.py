from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    # one line per acceptance criterion, parametrized cases folded together
    results = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in name or rep.when not in ("call", "setup"):
                continue
            if key == "passed" and rep.when != "call":
                continue
            crit = name.split("test_criterion_")[1].split("[")[0]
            num, _, topic = crit.partition("_")
            ok = results.get((int(num), topic), True)
            results[(int(num), topic)] = ok and key == "passed"
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, topic), ok in sorted(results.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {topic.replace('_', ' ')}")
