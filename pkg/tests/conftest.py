from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from pcoherence.polynomial import Polynomial, compositions

settings.register_profile("ci", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("ci")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    def _report(criterion, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


# random exact objects ---------------------------------------------------------

small_fractions = st.builds(
    Fraction, st.integers(min_value=-9, max_value=9), st.integers(min_value=1, max_value=6)
)


@st.composite
def polynomials(draw, n_vars=None, max_degree=3, max_terms=6):
    n = draw(st.integers(1, 3)) if n_vars is None else n_vars
    exps = [e for k in range(max_degree + 1) for e in compositions(k, n)]
    chosen = draw(st.lists(st.sampled_from(exps), max_size=max_terms))
    return Polynomial(n, [(e, draw(small_fractions)) for e in chosen])


@st.composite
def simplex_points(draw, n_vars):
    k = draw(st.integers(1, 30))
    parts = [draw(st.integers(0, k)) for _ in range(n_vars + 1)]
    total = sum(parts) or 1
    return tuple(Fraction(p, total) for p in parts[:n_vars])


def random_fraction(rng, span=9, den=6):
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_polynomial(rng, n, degree, terms=5):
    exps = [e for k in range(degree + 1) for e in compositions(k, n)]
    return Polynomial(n, [(rng.choice(exps), random_fraction(rng)) for _ in range(terms)])


def random_simplex_point(rng, n, den=997):
    cuts = sorted(rng.randint(0, den) for _ in range(n))
    pts = [Fraction(b - a, den) for a, b in zip([0] + cuts, cuts + [den])]
    return tuple(pts[:n])
