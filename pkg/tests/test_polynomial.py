import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pcoherence.errors import DegreeError, DimensionError
from pcoherence.polynomial import (
    BernsteinForm,
    Polynomial,
    bernstein_generator,
    compositions,
    multinomial,
    poly_add,
    poly_eval,
    poly_mul,
    simplex_indices,
    to_bernstein_form,
)

from conftest import polynomials, random_polynomial, random_simplex_point, simplex_points

F = Fraction


def test_add_inverse_is_zero():
    t1, _ = Polynomial.variables(2)
    assert poly_add(t1, -t1).is_zero()


def test_add_builds_counterexample_gamble():
    t1, t2 = Polynomial.variables(2)
    q = poly_add(t1**2 - t1 * t2, t2**2)
    assert q.terms == {(2, 0): 1, (1, 1): -1, (0, 2): 1}


def test_add_constants():
    assert Polynomial.constant(1, 2) + Polynomial.constant(1, 2) == Polynomial.constant(2, 2)


def test_add_dimension_mismatch():
    with pytest.raises(DimensionError):
        poly_add(Polynomial.constant(1, 2), Polynomial.constant(1, 3))


def test_mul_hand_expansion_and_random_points():
    t1, t2, t3 = Polynomial.variables(3)
    prod = poly_mul(t1 + t2, t1 + t3)
    assert prod == t1**2 + t1 * t3 + t1 * t2 + t2 * t3
    rng = random.Random(11)
    for _ in range(20):
        x = [F(rng.randint(-50, 50), rng.randint(1, 40)) for _ in range(3)]
        assert prod(x) == (x[0] + x[1]) * (x[0] + x[2])


def test_mul_identity_and_square():
    t1, t2 = Polynomial.variables(2)
    p = 3 * t1 * t2 - F(1, 2)
    assert p * 1 == p
    assert poly_mul(t1, t1) == Polynomial(2, {(2, 0): 1})


def test_mul_dimension_mismatch():
    with pytest.raises(DimensionError):
        poly_mul(Polynomial.constant(1, 1), Polynomial.constant(1, 2))


def test_eval_examples():
    t1, t2 = Polynomial.variables(2)
    q = t1**2 - t1 * t2 + t2**2
    assert poly_eval(q, (0, 0)) == 0
    assert poly_eval(q, (1, 0)) == 1
    s1, s2, s3 = Polynomial.variables(3)
    eps = F(1, 100)
    q_bell = -(s1 + s2) ** 2 - (s1 + s3) * (-2 * s1 - 2 * s2 + 1) - eps
    # by hand: -(1)^2 - (1)(-2 + 1) - eps
    assert poly_eval(q_bell, (1, 0, 0)) == F(-1, 100)
    with pytest.raises(DimensionError):
        poly_eval(q, (1,))


def test_eval_is_exact():
    t1 = Polynomial.variable(0, 1)
    assert (t1 / 3)(F(1, 7)) == F(1, 21)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        Polynomial.constant(0.5, 1)


def test_bernstein_generator_examples():
    (t1,) = Polynomial.variables(1)
    assert bernstein_generator((1, 1), 1) == t1 * (1 - t1)
    s1, s2 = Polynomial.variables(2)
    assert bernstein_generator((0, 0, 2), 2) == (1 - s1 - s2) ** 2
    assert bernstein_generator((1, 0, 0, 0), 3) == Polynomial.variable(0, 3)
    with pytest.raises(DimensionError):
        bernstein_generator((1, 0), 2)


def test_to_bernstein_form_examples():
    assert to_bernstein_form(Polynomial.constant(1, 1), 1).coeffs == {(0, 1): 1, (1, 0): 1}
    t1, t2 = Polynomial.variables(2)
    form = to_bernstein_form(t1, 2)
    assert form.nonzero() == {(2, 0, 0): 1, (1, 1, 0): 1, (1, 0, 1): 1}
    q = t1**2 - t1 * t2 + t2**2
    form = to_bernstein_form(q, 2)
    # the product basis contains theta_1^2, theta_1 theta_2, theta_2^2 themselves
    assert form.coeffs[(2, 0, 0)] == 1
    assert form.coeffs[(1, 1, 0)] == -1
    assert form.coeffs[(0, 2, 0)] == 1
    assert all(c == 0 for a, c in form.coeffs.items() if a not in {(2, 0, 0), (1, 1, 0), (0, 2, 0)})


def test_to_bernstein_form_degree_too_low():
    t1, _ = Polynomial.variables(2)
    with pytest.raises(DegreeError):
        to_bernstein_form(t1**3, 2)


def test_bernstein_form_matches_coefficient_matching_lp_rows():
    # Equating monomial coefficients of q - l0 against the six d=2 products
    # gives the six rows of the worked LP; with l0 = -1/2 the printed
    # solution [0.5, 1, 1.5, 1, 0, 1.5] must come out.
    t1, t2 = Polynomial.variables(2)
    q = t1**2 - t1 * t2 + t2**2
    form = to_bernstein_form(q + F(1, 2), 2)
    assert [form.coeffs[a] for a in simplex_indices(2, 2)] == [F(1, 2), 1, F(3, 2), 1, 0, F(3, 2)]


@given(polynomials(max_degree=4), st.integers(0, 2))
def test_round_trip(p, extra):
    d = max(p.total_degree, 0) + extra
    assert to_bernstein_form(p, d).to_polynomial() == p


def test_round_trip_random_up_to_degree_6():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 3)
        d = rng.randint(0, 6 if n < 3 else 5)
        p = random_polynomial(rng, n, d, terms=6)
        assert to_bernstein_form(p, d).to_polynomial() == p


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", range(6))
def test_partition_of_unity(n, d):
    total = Polynomial.zero(n)
    for a in simplex_indices(n, d):
        total = total + multinomial(d, a) * bernstein_generator(a, n)
    assert total == Polynomial.constant(1, n)


@given(polynomials(n_vars=2), polynomials(n_vars=2), st.lists(st.tuples(
    st.fractions(-5, 5, max_denominator=9), st.fractions(-5, 5, max_denominator=9)), min_size=5, max_size=5))
def test_evaluation_homomorphism(p, q, points):
    for x in points:
        assert (p + q)(x) == p(x) + q(x)
        assert (p * q)(x) == p(x) * q(x)


def test_evaluation_homomorphism_100_points():
    rng = random.Random(3)
    p = random_polynomial(rng, 3, 3)
    q = random_polynomial(rng, 3, 2)
    for _ in range(100):
        x = [F(rng.randint(-30, 30), rng.randint(1, 17)) for _ in range(3)]
        assert (p + q)(x) == p(x) + q(x)
        assert (p * q)(x) == p(x) * q(x)


def test_generator_nonnegative_on_500_points():
    rng = random.Random(17)
    for n in (1, 2, 3):
        gens = [bernstein_generator(a, n) for k in range(4) for a in simplex_indices(n, k)]
        for _ in range(500 // 3 + 1):
            x = random_simplex_point(rng, n)
            assert all(g(x) >= 0 for g in gens)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), simplex_points(n))))
def test_generators_nonnegative_hypothesis(case):
    n, x = case
    for a in simplex_indices(n, 3):
        assert bernstein_generator(a, n)(x) >= 0


def test_total_degree_of_product():
    t1, t2 = Polynomial.variables(2)
    p, q = t1**2 + t2, t1 * t2 - 1
    assert (p * q).total_degree == p.total_degree + q.total_degree
    assert Polynomial.zero(2).total_degree == -1


def test_json_round_trip_and_order():
    t1, t2 = Polynomial.variables(2)
    q = F(3, 7) * t2**2 - t1 + 5
    data = q.to_dict()
    assert [t["exp"] for t in data["terms"]] == [[0, 0], [0, 2], [1, 0]]
    assert data["terms"][1] == {"exp": [0, 2], "num": "3", "den": "7"}
    assert Polynomial.from_dict(json.loads(json.dumps(data))) == q


def test_bernstein_form_rejects_wrong_index():
    with pytest.raises(ValueError):
        BernsteinForm(2, 2, {(1, 0, 0): 1})


def test_compositions_count():
    assert len(list(compositions(4, 3))) == 15
    assert multinomial(4, (2, 1, 1)) == 12
