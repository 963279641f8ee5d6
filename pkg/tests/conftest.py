"""Shared fixtures and hypothesis strategies for the test suite."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from askein.diagram import BraidWord, Cap, Cross, Cup, SliceWord

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@st.composite
def braid_words(draw, max_strands: int = 4, max_length: int = 5) -> BraidWord:
    """Random braid words on up to ``max_strands`` strands."""
    strands = draw(st.integers(min_value=1, max_value=max_strands))
    if strands == 1:
        return BraidWord(1, ())
    gens = [g for i in range(1, strands) for g in (i, -i)]
    letters = draw(st.lists(st.sampled_from(gens), max_size=max_length))
    return BraidWord(strands, tuple(letters))


@st.composite
def slice_words(draw, max_strands: int = 3, max_length: int = 5) -> SliceWord:
    """Random slice words, possibly with cups and caps.

    Built left to right tracking the live strand count so every word is
    well formed; ends with caps down to the seam strand count.
    """
    seam = draw(st.integers(min_value=0, max_value=max_strands))
    live = seam
    slices = []
    for _ in range(draw(st.integers(min_value=0, max_value=max_length))):
        choices = ["cup"] if live < 2 else ["cross", "cup", "cap"]
        kind = draw(st.sampled_from(choices))
        if kind == "cross":
            pos = draw(st.integers(min_value=1, max_value=live - 1))
            slices.append(Cross(pos, draw(st.sampled_from((1, -1)))))
        elif kind == "cup" and live <= max_strands:
            pos = draw(st.integers(min_value=1, max_value=live + 1))
            slices.append(Cup(pos))
            live += 2
        elif kind == "cap" and live - 2 >= seam:
            pos = draw(st.integers(min_value=1, max_value=live - 1))
            slices.append(Cap(pos))
            live -= 2
    while live > seam:
        slices.append(Cap(1))
        live -= 2
    return SliceWord(seam, slices)


@pytest.fixture(scope="session")
def flagship() -> BraidWord:
    """The two-crossing three-strand unknot used in the worked example."""
    return BraidWord(3, (1, -2))


@pytest.fixture(scope="session")
def trefoil() -> BraidWord:
    return BraidWord(2, (1, 1, 1))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for outcome, verdict in (("passed", "PASS"), ("failed", "FAIL"),
                             ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion" in nodeid:
                lines.append((nodeid.split("::")[-1], verdict))
    if not lines:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, verdict in sorted(lines):
        terminalreporter.write_line(f"{verdict}  {name}")
