import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from holojacobi.expr import Chart

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HJ_EXAMPLES", "25")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@st.composite
def polynomials(draw, chart: Chart, max_degree: int = 2, max_terms: int = 3, complex_coeffs=False):
    """Random polynomial in the chart coordinates with small integer coefficients."""
    n = chart.dim
    out = chart.zero
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(st.integers(-3, 3).filter(bool))
        term = chart.const(c)
        if complex_coeffs and draw(st.booleans()):
            term = term * chart.i
        budget = draw(st.integers(0, max_degree))
        for _ in range(budget):
            term = term * chart.vars()[draw(st.integers(0, n - 1))]
        out = out + term
    return out


@st.composite
def nonzero_polynomials(draw, chart: Chart, **kw):
    p = draw(polynomials(chart, **kw))
    if p.is_zero():
        p = p + 1
    return p


@pytest.fixture
def xy():
    return Chart(("x", "y"))


@pytest.fixture
def xyz():
    return Chart(("x", "y", "z"))


# ---------------------------------------------------------------- acceptance summary

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title, budget): acceptance criterion with a runtime budget in seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    entry = _CRITERIA.setdefault(n, {"title": mark.kwargs.get("title", ""), "budget": mark.kwargs.get("budget"),
                                     "secs": 0.0, "bad": []})
    entry["secs"] += rep.duration
    if rep.when == "call" and hasattr(rep, "wasxfail"):
        entry["bad"].append(f"{item.name} (expected failure: {rep.wasxfail})")
    elif rep.failed:
        entry["bad"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        over = e["budget"] is not None and e["secs"] > e["budget"]
        verdict = "FAIL" if e["bad"] or over else "PASS"
        budget = "no budget" if e["budget"] is None else f"budget {e['budget']} s"
        tr.write_line(f"CRITERION {n} {verdict}: {e['title']} ({e['secs']:.1f} s, {budget})")
        for b in e["bad"]:
            tr.write_line(f"    not met: {b}")
        if over:
            tr.write_line("    not met: runtime budget exceeded")
