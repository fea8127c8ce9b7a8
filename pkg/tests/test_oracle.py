import pytest

from grlocal import FreeModule, GradedModule, GradedMorphism, Monoid, OracleCapError, PreconditionError, oracle
from grlocal.coeff import CoefficientRing
from grlocal.oracle import Caps, InstanceGenerator, brute_kernel, brute_minimal, brute_span, enumerate_component
from grlocal.resolve import residue_module

from conftest import make_ring


def test_brute_span_sizes():
    assert len(brute_span([(1, 0), (0, 1)], 2, 2)) == 4
    assert len(brute_span([(2,)], 4, 1)) == 2
    assert len(brute_span([], 3, 2)) == 1
    with pytest.raises(OracleCapError):
        brute_span([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 5, 3, cap=100)


def test_enumerate_component(koszul_ring, z4x, dual):
    F = FreeModule(koszul_ring, [(0, 0), (0, 0)])
    assert len(enumerate_component(GradedModule.free(F), (0, 0))) == 4
    A = GradedModule.free(FreeModule(z4x, [(0,)]))
    assert len(enumerate_component(A, (0,))) == 4
    Z = GradedModule(FreeModule(dual, [(0,)]), [], ())
    assert enumerate_component(Z, (1,)) == [(0,)]


def test_brute_kernel_examples(dual):
    A = FreeModule(dual, [(0,)], ["e"])
    assert brute_kernel(GradedMorphism.identity(A), (1,)) == {(0,)}
    S = FreeModule(dual, [(1,)], ["f"])
    x = GradedMorphism(S, A, [A.from_terms([(1, (0,), 0)])])
    # multiplication by x from A(-1): S_2 = {0, x*f} and x*x = 0, while f -> x in degree 1
    assert brute_kernel(x, (2,)) == {(0,), (1,)}
    assert brute_kernel(x, (1,)) == {(0,)}
    zero = GradedMorphism(A, A, [A.zero((0,))])
    assert brute_kernel(zero, (1,)) == {(0,), (1,)}


def test_brute_minimal_examples(poly2, dual):
    F = FreeModule(poly2, [(0,)], ["e"])
    x = F.from_terms([(1, (0,), 0)])
    y = F.from_terms([(1, (1,), 0)])
    I = GradedModule.submodule(F, [x, y])
    assert brute_minimal([x, y], I)
    assert not brute_minimal([x, x + y, y], I)
    Z = GradedModule(FreeModule(dual, [(0,)]), [], ())
    assert brute_minimal([], Z)
    with pytest.raises(PreconditionError):
        brute_minimal([x], I)


def test_oracle_rejects_rationals():
    Qring = make_ring(Monoid.natvec(1), CoefficientRing.rationals(), [("x", (1,))], (), (2,), True)
    with pytest.raises(PreconditionError):
        oracle.BruteRing(Qring.presentation)


def labels(seed, n=10, caps=Caps()):
    return [(i.label, [str(v) for v in i.module.numerator or []]) for i in InstanceGenerator(seed, caps).random_instances(n)]


def test_instance_stream_is_deterministic():
    caps = Caps(max_generators=2, max_relations=2, max_total_degree=3)
    assert labels(0, caps=caps) == labels(0, caps=caps)
    assert labels(0) != labels(1)


def test_instances_respect_caps():
    caps = Caps(max_generators=2, max_relations=2, max_total_degree=3)
    for inst in InstanceGenerator(5, caps).random_instances(30):
        p = inst.ring.presentation
        p.validate()
        assert len(p.generators) <= 2 and len(p.relations) <= 2
        assert all(inst.module.generates(S) for S in inst.generating_sets)


def test_superfluous_submodules(dual):
    count, bad = oracle.superfluous_check(GradedModule.free(FreeModule(dual, [(0,)])))
    # submodules of A = F2[x]/(x^2) containing 0: 0, (x), A
    assert (count, bad) == (3, 0)
    count, bad = oracle.superfluous_check(residue_module(dual))
    assert (count, bad) == (2, 0)
