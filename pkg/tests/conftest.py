import re
from collections import defaultdict

_outcomes = defaultdict(list)


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        outcome = "xfail" if hasattr(report, "wasxfail") else report.outcome
        _outcomes[int(m.group(1))].append(outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_outcomes):
        outs = _outcomes[k]
        status = "PASS" if all(o == "passed" for o in outs) else "FAIL"
        note = ""
        if "xfail" in outs and all(o in ("passed", "xfail") for o in outs):
            note = " (unattainable subcheck, expected failure recorded)"
        terminalreporter.write_line(f"criterion {k}: {status}{note}")
