import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grlocal import CoefficientRing, PreconditionError
from grlocal.coeff import parse_coefficient_ring

Q = CoefficientRing.rationals()
F2 = CoefficientRing.prime_field(2)
F5 = CoefficientRing.prime_field(5)
Z4 = CoefficientRing.prime_power(2, 2)
Z8 = CoefficientRing.prime_power(2, 3)
Z9 = CoefficientRing.prime_power(3, 2)


def test_units():
    assert Q.is_unit(Fraction(5, 3))
    assert not Z4.is_unit(2) and Z4.is_unit(3)
    for R in (Q, F2, Z4):
        assert not R.is_unit(R.zero)


def test_inverse():
    assert F5.inverse(2) == 3
    assert Z4.inverse(3) == 3
    for R in (Q, F5, Z4):
        assert R.inverse(R.one) == R.one
    with pytest.raises(PreconditionError):
        Z4.inverse(2)


def test_residue():
    assert Z4.residue(2) == 0 and Z4.residue(3) == 1
    assert Z4.residue_field() == F2
    assert F5.residue(4) == 4


def test_kernel_examples():
    assert F2.kernel(F2.array([[1], [1]])).tolist() == [[1, 1]]
    assert Z4.kernel(Z4.array([[2]])).tolist() == [[2]]
    for R in (Q, F2, Z4):
        assert R.kernel(R.eye(3)).shape[0] == 0


def test_solve_examples():
    assert F2.solve(F2.array([[1, 1]]), [1, 1]).tolist() == [1]
    assert Z4.solve(Z4.array([[2]]), [1]) is None
    for R in (Q, F2, Z4):
        assert not np.any(R.solve(R.eye(2), [0, 0]) != R.zero)


def test_rational_echelon_is_exact():
    m = Q.array([[1, 2], [3, 4]])
    assert Q.echelon(m).tolist() == [[1, 0], [0, 1]]
    assert Q.solve(m, [Fraction(1, 3), 0]).tolist() == [Fraction(-2, 3), Fraction(1, 3)]


def test_parse():
    assert parse_coefficient_ring("Zpm 2 2") == Z4
    assert parse_coefficient_ring("Q") == Q
    assert F5.parse("3/2") == 4
    with pytest.raises(PreconditionError):
        Z4.parse("1/2")
    with pytest.raises(PreconditionError):
        parse_coefficient_ring("Fp 4")


def brute_span(rows, n):
    """Every Z/n combination of ``rows``."""
    cols = len(rows[0]) if rows else 0
    out = set()
    for cs in itertools.product(range(n), repeat=len(rows)):
        out.add(tuple(sum(c * r[j] for c, r in zip(cs, rows)) % n for j in range(cols)))
    return out


def matrices(n, max_rows=3, max_cols=3):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, n - 1), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=60, deadline=None)
@given(matrices(4))
def test_howell_membership_matches_brute_force(rows):
    ech = Z4.echelon(Z4.array(rows))
    span = brute_span(rows, 4)
    for v in itertools.product(range(4), repeat=len(rows[0])):
        assert Z4.contains(ech, np.array(v)) == (v in span)
    # composition length counts the span: |span| = 2^length
    assert len(span) == 2 ** Z4.length(ech)


@settings(max_examples=60, deadline=None)
@given(matrices(9, 3, 2), st.integers(0, 2**32))
def test_echelon_is_canonical(rows, seed):
    """Shuffling, unit scaling and adding multiples of rows leave the form unchanged."""
    rnd = random.Random(seed)
    base = Z9.echelon(Z9.array(rows))
    mixed = [list(r) for r in rows]
    rnd.shuffle(mixed)
    units = [rnd.choice([1, 2, 4, 5, 7, 8]) for _ in mixed]
    mixed = [[u * x % 9 for x in r] for u, r in zip(units, mixed)]
    if len(mixed) > 1:
        k = rnd.randrange(9)
        mixed[0] = [(a + k * b) % 9 for a, b in zip(mixed[0], mixed[1])]
        mixed.append([(a + b) % 9 for a, b in zip(mixed[0], mixed[-1])])
    assert np.array_equal(Z9.echelon(Z9.array(mixed)), base)


@settings(max_examples=60, deadline=None)
@given(matrices(8))
def test_kernel_matches_brute_force(rows):
    m = Z8.array(rows)
    ker = Z8.kernel(m)
    assert not Z8.matmul(ker, m).any() if ker.shape[0] else True
    brute = {v for v in itertools.product(range(8), repeat=len(rows)) if not (np.array(v) @ m % 8).any()}
    assert brute_span([list(r) for r in ker], 8) == brute if ker.shape[0] else brute == {(0,) * len(rows)}


@settings(max_examples=60, deadline=None)
@given(matrices(4), st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_solve_agrees_with_membership(rows, b):
    m = Z4.array(rows)
    b = b[: m.shape[1]]
    x = Z4.solve(m, b)
    reachable = tuple(b) in brute_span(rows, 4)
    assert (x is not None) == reachable
    if x is not None:
        assert (Z4.matmul(x, m) == np.array(b)).all()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rational_kernel_is_annihilating_and_full(rows):
    m = Q.array(rows)
    ker = Q.kernel(m)
    rank = Q.echelon(m).shape[0]
    assert ker.shape[0] == len(rows) - rank
    if ker.shape[0]:
        assert all(x == 0 for x in Q.matmul(ker, m).ravel())
