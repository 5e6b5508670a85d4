"""Sparse multivariate polynomials with exact rational coefficients.

Polynomials are gambles on the probability simplex
``{theta : theta_i >= 0, sum(theta) <= 1}``.  Besides the usual ring
operations this module provides the Bernstein product generators
``theta^alpha[:n] * (1 - sum(theta))^alpha[n]`` and the conversion of a
polynomial into its (unique) coefficients over the generators of a fixed
total degree.

Exponent vectors are plain tuples of ints.  Terms are always kept in
lexicographic order of their exponents so that printing and serialisation
are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DegreeError, DimensionError

MultiIndex = tuple  # tuple[int, ...]


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings.  Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative ints summing to ``total``, in lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def exponents_up_to(degree: int, n_vars: int) -> list[tuple[int, ...]]:
    """Every exponent vector of length ``n_vars`` with total degree <= ``degree``, sorted."""
    out = []
    for k in range(degree + 1):
        out.extend(compositions(k, n_vars))
    return sorted(out)


def multinomial(d: int, alpha: Sequence[int]) -> int:
    if any(a < 0 for a in alpha) or sum(alpha) != d:
        raise ValueError(f"{tuple(alpha)} is not a composition of {d}")
    out = factorial(d)
    for a in alpha:
        out //= factorial(a)
    return out


class Polynomial:
    """Immutable sparse polynomial in ``n_vars`` variables over the rationals.

    >>> t1, t2 = Polynomial.variables(2)
    >>> q = t1**2 - t1*t2 + t2**2
    >>> q(1, 0)
    Fraction(1, 1)
    """

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, n_vars: int, terms: Mapping[Sequence[int], object] | Iterable = ()):
        if n_vars < 1:
            raise ValueError("a polynomial needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], Fraction] = {}
        for exp, coef in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n_vars:
                raise DimensionError(f"exponent {exp} has length {len(exp)}, expected {n_vars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            acc[exp] = acc.get(exp, Fraction(0)) + to_fraction(coef)
        self._n = n_vars
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}
        self._hash = None

    # construction helpers

    @classmethod
    def _raw(cls, n_vars: int, terms: dict) -> "Polynomial":
        # terms must already be pruned; sorted here
        self = object.__new__(cls)
        self._n = n_vars
        self._terms = {e: terms[e] for e in sorted(terms)}
        self._hash = None
        return self

    @classmethod
    def zero(cls, n_vars: int) -> "Polynomial":
        return cls._raw(n_vars, {})

    @classmethod
    def constant(cls, value, n_vars: int) -> "Polynomial":
        return cls(n_vars, {(0,) * n_vars: value})

    @classmethod
    def variable(cls, index: int, n_vars: int) -> "Polynomial":
        """The coordinate ``theta_{index+1}`` (0-based ``index``)."""
        if not 0 <= index < n_vars:
            raise IndexError(index)
        exp = [0] * n_vars
        exp[index] = 1
        return cls._raw(n_vars, {tuple(exp): Fraction(1)})

    @classmethod
    def variables(cls, n_vars: int) -> tuple["Polynomial", ...]:
        return tuple(cls.variable(i, n_vars) for i in range(n_vars))

    @classmethod
    def slack(cls, n_vars: int) -> "Polynomial":
        """``1 - theta_1 - ... - theta_n``, the last simplex coordinate."""
        terms = {(0,) * n_vars: Fraction(1)}
        for i in range(n_vars):
            exp = [0] * n_vars
            exp[i] = 1
            terms[tuple(exp)] = Fraction(-1)
        return cls._raw(n_vars, terms)

    # accessors

    @property
    def n_vars(self) -> int:
        return self._n

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    @property
    def total_degree(self) -> int:
        """Largest total degree of a term; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._n != self._n:
                raise DimensionError(f"{self._n} vs {other._n} variables")
            return other
        return Polynomial.constant(to_fraction(other), self._n)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self._n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        try:
            c = to_fraction(other)
        except TypeError:
            return NotImplemented
        if c == 0:
            return Polynomial.zero(self._n)
        return Polynomial._raw(self._n, {e: c * v for e, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = to_fraction(other)
        return self * (1 / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = Polynomial.constant(1, self._n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return poly_eval(self, point)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._n == other._n and self._terms == other._terms
        try:
            return self == self._coerce(other)
        except (TypeError, DimensionError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self._n}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        # highest degree first reads more naturally
        for exp in sorted(self._terms, key=lambda e: (-sum(e), [-x for x in e])):
            c = self._terms[exp]
            mono = "*".join(
                f"t{i + 1}" if k == 1 else f"t{i + 1}^{k}" for i, k in enumerate(exp) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # serialisation

    def to_dict(self) -> dict:
        return {
            "n_vars": self._n,
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self._terms.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Polynomial":
        n = int(data["n_vars"])
        terms = []
        for t in data["terms"]:
            terms.append((tuple(t["exp"]), Fraction(int(t["num"]), int(t.get("den", "1")))))
        return cls(n, terms)


def _check_dims(p: Polynomial, q: Polynomial):
    if p.n_vars != q.n_vars:
        raise DimensionError(f"{p.n_vars} vs {q.n_vars} variables")


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_dims(p, q)
    out = dict(p._terms)
    for e, c in q._terms.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return Polynomial._raw(p.n_vars, out)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_dims(p, q)
    out: dict[tuple[int, ...], Fraction] = {}
    for e1, c1 in p._terms.items():
        for e2, c2 in q._terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return Polynomial._raw(p.n_vars, {e: c for e, c in out.items() if c})


def poly_eval(p: Polynomial, point: Sequence) -> Fraction:
    if len(point) != p.n_vars:
        raise DimensionError(f"point of length {len(point)} for {p.n_vars} variables")
    x = [to_fraction(v) for v in point]
    total = Fraction(0)
    for exp, c in p._terms.items():
        term = c
        for xi, k in zip(x, exp):
            if k:
                term *= xi**k
        total += term
    return total


# Bernstein product basis ---------------------------------------------------


@lru_cache(maxsize=4096)
def bernstein_generator(alpha: tuple[int, ...], n_vars: int) -> Polynomial:
    """``theta_1^a_1 ... theta_n^a_n (1 - theta_1 - ... - theta_n)^a_{n+1}``.

    No multinomial factor is applied.  ``alpha`` has length ``n_vars + 1``.
    """
    alpha = tuple(alpha)
    if len(alpha) != n_vars + 1:
        raise DimensionError(f"alpha {alpha} must have length {n_vars + 1}")
    if any(a < 0 for a in alpha):
        raise ValueError(f"negative entry in {alpha}")
    head = Polynomial._raw(n_vars, {alpha[:n_vars]: Fraction(1)})
    return head * Polynomial.slack(n_vars) ** alpha[n_vars]


def simplex_indices(n_vars: int, d: int) -> list[tuple[int, ...]]:
    """All ``alpha`` of length ``n_vars + 1`` with ``|alpha| = d``, lexicographic."""
    return list(compositions(d, n_vars + 1))


class BernsteinForm:
    """Coefficients of a polynomial over the degree-``d`` product generators.

    ``coeffs`` holds an entry for every ``alpha`` with ``|alpha| = d``
    (zeros included), in lexicographic order.
    """

    __slots__ = ("n_vars", "degree", "coeffs")

    def __init__(self, n_vars: int, degree: int, coeffs: Mapping[tuple, object]):
        self.n_vars = n_vars
        self.degree = degree
        full = {a: Fraction(0) for a in simplex_indices(n_vars, degree)}
        for a, c in coeffs.items():
            a = tuple(a)
            if a not in full:
                raise ValueError(f"index {a} does not have length {n_vars + 1} and sum {degree}")
            full[a] = to_fraction(c)
        self.coeffs = full

    def nonzero(self) -> dict[tuple[int, ...], Fraction]:
        return {a: c for a, c in self.coeffs.items() if c}

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def to_polynomial(self) -> Polynomial:
        out = Polynomial.zero(self.n_vars)
        for a, c in self.coeffs.items():
            if c:
                out = out + c * bernstein_generator(a, self.n_vars)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, BernsteinForm)
            and (self.n_vars, self.degree, self.coeffs) == (other.n_vars, other.degree, other.coeffs)
        )

    def __repr__(self):
        return f"BernsteinForm(n_vars={self.n_vars}, degree={self.degree}, nonzero={self.nonzero()})"


@lru_cache(maxsize=256)
def _elevation_table(n_vars: int, k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    # expansion of (theta_1 + ... + theta_n + slack)^k in the product basis
    return tuple((b, multinomial(k, b)) for b in compositions(k, n_vars + 1))


def to_bernstein_form(p: Polynomial, d: int) -> BernsteinForm:
    """Express ``p`` over the generators of total degree exactly ``d``.

    Each monomial ``theta^g`` of degree ``l`` is itself the generator
    ``(g, 0)`` of degree ``l``; it is lifted to degree ``d`` by multiplying
    with the expansion of ``(theta_1 + ... + theta_n + (1 - sum theta))^(d-l)``.
    """
    if p.total_degree > d:
        raise DegreeError(f"polynomial of degree {p.total_degree} does not fit degree {d}")
    n = p.n_vars
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for g, c in p.items():
        for beta, m in _elevation_table(n, d - sum(g)):
            a = tuple(x + y for x, y in zip(g, beta[:n])) + (beta[n],)
            coeffs[a] = coeffs.get(a, 0) + c * m
    return BernsteinForm(n, d, coeffs)


def simplex_grid(n_vars: int, k: int) -> Iterator[tuple[Fraction, ...]]:
    """Points of the simplex whose coordinates are multiples of ``1/k``."""
    for comp in compositions(k, n_vars + 1):
        yield tuple(Fraction(c, k) for c in comp[:n_vars])
