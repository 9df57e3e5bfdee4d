import os
import sys
from fractions import Fraction

import hypothesis
import hypothesis.strategies as st

sys.path.insert(0, os.path.dirname(__file__))

hypothesis.settings.register_profile("default", max_examples=150, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=12)
nonzero_rationals = rationals.filter(lambda q: q != 0)
dyadic = st.sampled_from([s * Fraction(1, 2**k) for k in range(5) for s in (1, -1)])


@st.composite
def coeff_maps(draw, max_index=30, max_size=10, values=dyadic, min_size=1):
    from qgbasis.vectors import CoeffMap

    idx = draw(st.sets(st.integers(1, max_index), min_size=min_size, max_size=max_size))
    return CoeffMap({i: draw(values) for i in idx})


@st.composite
def sparse_vecs(draw, max_index=40, max_size=12):
    from qgbasis.vectors import SparseVec

    return SparseVec(draw(st.dictionaries(st.integers(1, max_index), rationals, max_size=max_size)))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
