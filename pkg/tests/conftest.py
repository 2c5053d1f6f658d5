import pytest

CRITERIA = {
    1: "R1_BIST single-CA ranks",
    2: "(31,32) s=1 ranks",
    3: "(31,32) s=2,4,7,8 ranks and verdicts",
    4: "phi-set formula",
    5: "N1 audit of all 100 table rows",
    6: "matrix-order maximality",
    7: "spaced period at toy scale",
    8: "rank criterion vs box counting",
    9: "combination counts and close-to-half set",
    10: "close-to-half ME spacings",
    11: "(31,40,8) and (59,64,10) spot checks",
    12: "statistical smoke",
    13: "throughput and path equivalence",
    14: "determinism and linearity properties",
}

_outcomes: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            status = "xfail"
        else:
            status = rep.outcome
        _outcomes.setdefault(n, []).append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        parts = _outcomes.get(n)
        if not parts:
            tr.write_line(f"C{n:<2} NOT RUN  {CRITERIA[n]}")
            continue
        ok = all(s == "passed" for _, s in parts)
        failed = [name for name, s in parts if s != "passed"]
        tail = "" if ok else f"  [failing: {', '.join(failed)}]"
        tr.write_line(f"C{n:<2} {'PASS' if ok else 'FAIL':<8} {CRITERIA[n]}{tail}")
