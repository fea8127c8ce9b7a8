import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grlocal import CoefficientRing, GradedRing, Monoid, PreconditionError, RingPresentation, TruncationError
from grlocal import oracle
from grlocal.gring import associativity_defects, check_local_axioms

from conftest import make_ring, presentation

F2 = CoefficientRing.prime_field(2)
N1 = Monoid.natvec(1)


def ranks(ring):
    return [ring.rank(g) for g in ring.window]


def test_dual_numbers_ranks(dual):
    assert ranks(dual) == [1, 1, 0, 0, 0]


def test_monomial_algebra_ranks():
    A = make_ring(N1, F2, [("x", (1,)), ("y", (1,))], [[(1, "xy")]], (3,))
    assert ranks(A) == [1, 2, 3, 4]
    assert sorted("".join("xy"[i] for i in w) for w in A.basis[(3,)]) == ["xxx", "yxx", "yyx", "yyy"]


def test_commutative_flag(koszul_ring):
    assert koszul_ring.rank((1, 1)) == 1
    assert koszul_ring.rank((2, 3)) == 1


def test_multiplication(dual):
    x = dual.word_element((0,))
    assert dual.multiply(x, x).is_zero()
    assert dual.multiply(dual.one(), x) == x
    A = make_ring(N1, F2, [("x", (1,)), ("y", (1,))], [[(1, "xy")]], (3,))
    x, y = A.word_element((0,)), A.word_element((1,))
    assert A.multiply(x, y).is_zero()
    assert not A.multiply(y, x).is_zero()


def test_multiply_beyond_bound_is_an_error(dual):
    x4 = dual.zero((4,))
    with pytest.raises(TruncationError):
        dual.multiply(x4, dual.word_element((0,)))


def test_maximal_ideal(dual, z4x):
    M = dual.maximal_graded_ideal()
    assert M.generators((0,)).shape[0] == 0 and M.is_proper()
    Mz = z4x.maximal_graded_ideal()
    assert Mz.generators((0,)).tolist() == [[2]]
    assert Mz.generators((1,)).tolist() == [[1]]
    assert Mz.contains(z4x.scalar(2)) and not Mz.contains(z4x.scalar(3))


def test_residue_ring(dual, z4x):
    assert dual.residue_division_ring().field == F2
    D = z4x.residue_division_ring()
    assert D.field == F2
    assert D.project(z4x.scalar(3)).coords.tolist() == [1]
    assert D.project(z4x.word_element((0,))).is_zero()
    Q = make_ring(Monoid.natvec(2), CoefficientRing.rationals(), [("x", (1, 0)), ("y", (0, 1))], (), (1, 1), True)
    assert Q.residue_division_ring().field == CoefficientRing.rationals()


def test_locality_examples(dual, z4x, field_only):
    for ring in (dual, z4x, field_only):
        report = check_local_axioms(ring, samples=10, seed=3)
        assert report.ok, report.failures()
    assert field_only.maximal_graded_ideal().generators((0,)).shape[0] == 0
    assert z4x.coeff.inverse(3) == 3


def test_presentation_errors():
    with pytest.raises(PreconditionError, match="inhomogeneous relation: degrees 2 and 1"):
        presentation(N1, F2, [("x", (1,)), ("y", (1,))], [[(1, "xy"), (1, "y")]], (3,)).validate()
    with pytest.raises(PreconditionError, match="duplicate generator symbol 'x'"):
        RingPresentation(N1, F2, (("x", (1,)), ("x", (1,))), (), (3,), False).validate()
    with pytest.raises(PreconditionError, match="positive"):
        RingPresentation(N1, F2, (("x", (0,)),), (), (3,), False).validate()


def test_finite_support(dual, koszul_ring):
    assert dual.finite_support == [(0,), (1,)]
    assert koszul_ring.finite_support is None


def test_word_graded_ring():
    W = Monoid.word("xy")
    A = make_ring(W, F2, [("a", "x"), ("b", "y")], [[(1, "ab")]], "yyy")
    assert A.rank("xy") == 0 and A.rank("yx") == 1 and A.rank("yyy") == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_component_sizes_match_brute_force(seed):
    ring = oracle.InstanceGenerator(seed).ring()
    brute = oracle.BruteRing(ring.presentation)
    R = ring.coeff
    for g in ring.window:
        assert brute.size(g) == R.p ** ring.length(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_rings_are_associative_and_local(seed):
    ring = oracle.InstanceGenerator(seed).ring()
    assert associativity_defects(ring) == []
    assert check_local_axioms(ring, samples=10, seed=seed).ok
