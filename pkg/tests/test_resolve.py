import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grlocal import FreeModule, GradedModule, GradedMorphism, oracle
from grlocal.resolve import (
    INFINITE,
    BettiTable,
    Certainty,
    Status,
    betti,
    check_resolution,
    cover_lift,
    gldim,
    is_free,
    minimal_resolution,
    pdim,
    projective_cover,
    kernel_generators,
    residue_module,
    tor_dims,
)


def totals(res):
    return res.betti().totals()


def test_cover_of_residue_module(dual):
    D = residue_module(dual)
    cover = projective_cover(D)
    assert cover.free.degrees == [(0,)]
    assert [str(v) for v in kernel_generators(cover)] == ["x*g1"]


def test_cover_of_free_module(dual):
    A = GradedModule.free(FreeModule(dual, [(0,)]))
    cover = projective_cover(A)
    assert cover.kernel.is_zero()
    assert is_free(A) is not None


def test_cover_of_linear_ideal(koszul_ring):
    F = FreeModule(koszul_ring, [(0, 0)], ["e"])
    I = GradedModule.submodule(F, [F.from_terms([(1, (0,), 0)]), F.from_terms([(1, (1,), 0)])])
    cover = projective_cover(I)
    assert sorted(cover.free.degrees) == [(0, 1), (1, 0)]
    (syz,) = kernel_generators(cover)
    assert syz.degree == (1, 1)


def test_dual_numbers_periodic(workspaces):
    k = workspaces["dual_numbers"].module("k")
    res = minimal_resolution(k, 5)
    assert res.betti().entries == {(i, (i,)): 1 for i in range(6)}
    assert res.status is Status.EXHAUSTED_STEPS
    rep = pdim(k, 5)
    assert rep.value == INFINITE and rep.certainty is Certainty.LOWER_BOUND
    assert check_resolution(res) == []


def test_koszul(workspaces):
    k = workspaces["koszul"].module("k")
    res = minimal_resolution(k, 4)
    assert res.betti().entries == {(0, (0, 0)): 1, (1, (1, 0)): 1, (1, (0, 1)): 1, (2, (1, 1)): 1}
    assert pdim(k, 4).value == 2
    assert tor_dims(k, 4)[(1, (1, 0))] + tor_dims(k, 4)[(1, (0, 1))] == 2
    assert gldim(workspaces["koszul"].ring, 4).value == 2


def test_monomial_algebra(workspaces):
    k = workspaces["monomial_xy"].module("k")
    res = minimal_resolution(k, 5)
    assert totals(res) == [1, 2, 1]
    assert res.betti()[(2, (1, 1))] == 1
    assert pdim(k, 5).value == 2


def test_exterior_algebra(workspaces):
    k = workspaces["exterior"].module("k")
    assert totals(minimal_resolution(k, 4)) == [1, 2, 3, 4, 5]


def test_word_graded_monomial_algebra(workspaces):
    k = workspaces["words"].module("k")
    res = minimal_resolution(k, 4)
    assert res.betti().entries == {(0, ""): 1, (1, "a"): 1, (1, "b"): 1, (2, "ab"): 1}


def test_rational_hypersurface(workspaces):
    ws = workspaces["rational"]
    assert totals(minimal_resolution(ws.module("k"), 4)) == [1, 2, 2, 2, 2]
    assert pdim(ws.module("c")).value == 1
    assert tor_dims(ws.module("k"), 4) == minimal_resolution(ws.module("k"), 4).betti().entries


def test_zero_module_and_field(dual, field_only):
    Z = GradedModule(FreeModule(dual, [(0,)]), [], ())
    assert betti(Z).entries == {}
    assert pdim(Z).value == 0
    rep = gldim(field_only)
    assert (rep.value, rep.certainty, rep.status) == (0, Certainty.EXACT, Status.RESOLVED)


def test_free_modules(dual):
    F = FreeModule(dual, [(0,), (1,)])
    M = GradedModule.free(F)
    assert len(is_free(M)) == 2
    rep = pdim(M)
    assert (rep.value, rep.certainty) == (0, Certainty.EXACT)
    assert all(i == 0 for i, _ in tor_dims(M))
    assert is_free(residue_module(dual)) is None
    # at bound 4 the window ends before the steps do: only a lower bound
    rep = gldim(dual, 4)
    assert (rep.value, rep.certainty, rep.status) == (4, Certainty.LOWER_BOUND, Status.EXHAUSTED_BOUND)


def test_gldim_of_dual_numbers(workspaces):
    assert gldim(workspaces["dual_numbers"].ring, 4).value == INFINITE


def test_cover_lift_identity(dual):
    D = residue_module(dual)
    cover = projective_cover(D)
    lift = cover_lift(cover.free, cover.generators, cover)
    assert lift.is_isomorphism()
    assert lift.phi.images == cover.free.basis_vectors()


def test_cover_lift_with_extra_summand(dual):
    D = residue_module(dual)
    cover = projective_cover(D)
    P = cover.free
    Q = FreeModule(dual, list(P.degrees) + [(1,)])
    psi = list(cover.generators) + [D.ambient.zero((1,))]
    lift = cover_lift(Q, psi, cover)
    assert not lift.is_isomorphism()
    # the kernel is the extra summand A(-1)
    K = lift.kernel.module()
    extra = GradedModule.free(FreeModule(dual, [(1,)]))
    assert K.component_lengths() == extra.component_lengths()


def test_betti_table_equality():
    assert BettiTable({(0, (0,)): 1}) == BettiTable({(0, (0,)): 1})
    assert BettiTable({(0, (0,)): 1}) != BettiTable({(0, (1,)): 1})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_resolutions_are_minimal_and_exact(seed):
    M = oracle.InstanceGenerator(seed).instance(1).module
    res = minimal_resolution(M, 3)
    assert check_resolution(res) == []
    assert tor_dims(M, resolution=res) == res.betti().entries
    for g in M.window:
        assert res.betti()[(0, g)] == M.top_dimension(g)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_split_projectives_are_free(seed):
    M, rank = oracle.InstanceGenerator(seed).split_projective()
    basis = is_free(M)
    assert basis is not None and len(basis) == rank
