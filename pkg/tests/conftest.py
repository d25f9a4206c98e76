from fractions import Fraction

from hypothesis import settings, strategies as st

from kruglov.stepfn import StepFunction

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rationals(max_num=8, max_den=4, min_value=0):
    return st.builds(
        Fraction, st.integers(min_value * max_den, max_num), st.integers(1, max_den)
    )


@st.composite
def step_functions(draw, max_pieces=6, min_value=0, max_num=8):
    k = draw(st.integers(1, max_pieces))
    weights = draw(st.lists(st.integers(1, 6), min_size=k, max_size=k))
    total = sum(weights)
    values = draw(st.lists(rationals(max_num=max_num, min_value=min_value), min_size=k, max_size=k))
    return StepFunction((Fraction(w, total), v) for w, v in zip(weights, values))


def small_vectors(max_len=5, max_value=8):
    return st.lists(rationals(max_num=max_value), min_size=1, max_size=max_len)


# one line per acceptance criterion, printed after the run
_acceptance: list = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        if report.when == "call" or report.failed:
            _acceptance.append((report.nodeid.split("::")[-1], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}  ({duration:.1f} s)")
