"""Projective covers, minimal gr-free resolutions, Betti numbers, Tor and dimensions."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .coeff import CoefficientRing
from .errors import InvariantError, PreconditionError
from .gmodule import (
    FreeModule,
    GradedModule,
    GradedMorphism,
    HomogeneousVector,
    Kernel,
    evaluation_matrix,
    generated_spans,
    kernel_spans,
    minimal_generators,
)
from .gring import GradedRing
from .monoid import Degree

DEFAULT_STEPS = 8
INFINITE = "infinite-within-window"


class Status(str, Enum):
    RESOLVED = "resolved"
    EXHAUSTED_STEPS = "exhausted_steps"
    EXHAUSTED_BOUND = "exhausted_bound"


class Certainty(str, Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower_bound"


@dataclass
class ProjectiveCover:
    """``epsilon: F -> M`` on a minimal generating set, with its kernel."""

    module: GradedModule
    free: FreeModule
    generators: list
    kernel: Kernel

    def apply(self, v: HomogeneousVector) -> HomogeneousVector:
        """``epsilon(v)`` as a representative in the ambient of M."""
        F = self.module.ambient
        M = evaluation_matrix(self.generators, v.degree, F, self.free)
        R = F.coeff
        out = R.matmul(v.coords.reshape(1, -1), M)[0] if M.shape[0] else R.zeros(F.rank(v.degree))
        return F.vector(v.degree, out)

    def kernel_in_radical(self) -> bool:
        """Every kernel component lies in ``MF``."""
        K = self.kernel.module()
        F = GradedModule.free(self.free)
        R = self.free.coeff
        return all(
            all(R.contains(F.radical_spans[g], row) for row in K.spans[g]) for g in self.free.window
        )


def projective_cover(M: GradedModule, generators=None) -> ProjectiveCover:
    """Cover on ``generators`` (default: the canonical minimal generating set)."""
    gens = minimal_generators(M) if generators is None else list(generators)
    mon = M.ring.monoid
    F = FreeModule(M.ring, [v.degree for v in gens], [f"g{i + 1}" for i in range(len(gens))])
    spans = kernel_spans(F, gens, M)
    cover = ProjectiveCover(M, F, gens, Kernel(F, spans, []))
    if generators is None and not cover.kernel_in_radical():
        raise InvariantError("cover kernel is not contained in MF")
    return cover


def kernel_generators(cover: ProjectiveCover) -> list:
    """Homogeneous generators of the cover kernel (minimal)."""
    return minimal_generators(cover.kernel.module())


@dataclass
class BettiTable:
    entries: dict = field(default_factory=dict)  # (i, degree) -> count

    def totals(self) -> list:
        if not self.entries:
            return []
        top = max(i for i, _ in self.entries)
        return [sum(c for (j, _), c in self.entries.items() if j == i) for i in range(top + 1)]

    def degrees(self, monoid) -> list:
        return monoid.sorted({g for _, g in self.entries})

    def __getitem__(self, key) -> int:
        return self.entries.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries


@dataclass
class Resolution:
    module: GradedModule
    cover: ProjectiveCover | None
    frees: list  # F_0, F_1, ...
    differentials: list  # phi_1: F_1 -> F_0, ...
    kernels: list  # kernels[i] = Ker(F_i -> previous), as Kernel objects
    status: Status
    certainty: Certainty
    steps: int

    @property
    def length(self) -> int:
        return len(self.frees) - 1 if self.frees else 0

    def betti(self) -> BettiTable:
        table = {}
        for i, F in enumerate(self.frees):
            for d in F.degrees:
                table[(i, d)] = table.get((i, d), 0) + 1
        return BettiTable(table)


def _certified_free_window(ring: GradedRing, degrees) -> bool:
    """Whether every nonzero component of a free module on ``degrees`` lies in the window."""
    support = ring.finite_support
    if support is None:
        return False
    mon = ring.monoid
    return all(ring.in_window(mon.compose(s, d)) for d in degrees for s in support)


def minimal_resolution(M: GradedModule, max_steps: int = DEFAULT_STEPS) -> Resolution:
    """Minimal gr-free resolution ``... -> F_1 -> F_0 -> M`` with up to ``max_steps`` differentials.

    Each stage covers the previous kernel by its canonical minimal generators,
    so every differential lands in ``MF``.  The resolution is ``resolved``
    when a kernel vanishes in the window; the claim is exact when the ring is
    visibly finite and every free module built lies entirely inside the window.
    """
    if max_steps < 0:
        raise PreconditionError("max_steps must be nonnegative")
    ring = M.ring
    if M.is_zero():
        certain = _certified_free_window(ring, M.ambient.degrees)
        return Resolution(
            M, None, [], [], [], Status.RESOLVED if certain else Status.EXHAUSTED_BOUND,
            Certainty.EXACT if certain else Certainty.LOWER_BOUND, max_steps,
        )
    cover = projective_cover(M)
    frees = [cover.free]
    kernels = [cover.kernel]
    diffs = []
    current = cover.kernel
    while not current.is_zero() and len(diffs) < max_steps:
        K = current.module()
        gens = minimal_generators(K)
        F = FreeModule(ring, [v.degree for v in gens], [f"g{i + 1}" for i in range(len(gens))])
        phi = GradedMorphism(F, current.source, gens)
        diffs.append(phi)
        frees.append(F)
        current = Kernel(F, kernel_spans(F, gens, GradedModule.free(current.source)), [])
        kernels.append(current)
    if not current.is_zero():
        status, certainty = Status.EXHAUSTED_STEPS, Certainty.LOWER_BOUND
    else:
        degrees = list(M.ambient.degrees) + [d for F in frees for d in F.degrees]
        if _certified_free_window(ring, degrees):
            status, certainty = Status.RESOLVED, Certainty.EXACT
        else:
            status, certainty = Status.EXHAUSTED_BOUND, Certainty.LOWER_BOUND
    return Resolution(M, cover, frees, diffs, kernels, status, certainty, max_steps)


def betti(M: GradedModule, max_steps: int = DEFAULT_STEPS) -> BettiTable:
    return minimal_resolution(M, max_steps).betti()


# -- invariant checks ------------------------------------------------------------


def check_resolution(res: Resolution) -> list:
    """Problems found in ``res`` (empty when every invariant holds)."""
    problems = []
    if res.cover is None:
        return problems
    R = res.module.coeff
    mon = res.module.ring.monoid
    for k, phi in enumerate(res.differentials, start=1):
        for j, v in enumerate(phi.images):
            if not phi.target.in_radical(v):
                problems.append(f"phi_{k} image {j} has a unit entry")
    for k in range(1, len(res.differentials)):
        comp = res.differentials[k - 1].compose(res.differentials[k])
        if not comp.is_zero():
            problems.append(f"phi_{k} phi_{k + 1} != 0")
    # epsilon phi_1 = 0
    if res.differentials:
        for v in res.differentials[0].images:
            if not res.module.is_zero_vector(res.cover.apply(v)):
                problems.append("epsilon phi_1 != 0")
                break
    # exactness: kernel at stage k equals image of phi_{k+1}
    for k, K in enumerate(res.kernels):
        if k == len(res.differentials) and res.status is Status.EXHAUSTED_STEPS:
            break  # the last kernel was never covered
        F = res.frees[k]
        if k < len(res.differentials):
            img = generated_spans(F, res.differentials[k].images)
        else:
            img = {g: F.relations(g) for g in F.window}
        for g in F.window:
            if not np.array_equal(R.echelon(R.vstack([K.spans[g], F.relations(g)], F.rank(g))), img[g]):
                problems.append(f"ker != im at stage {k} in degree {mon.format(g)}")
    return problems


# -- Tor against D ---------------------------------------------------------------


def _residue_differential(phi: GradedMorphism, g: Degree, field: CoefficientRing):
    """Matrix of ``D (x) phi`` in degree g: rows source generators, columns target generators."""
    src = [j for j, d in enumerate(phi.source.degrees) if d == g]
    tgt = [i for i, d in enumerate(phi.target.degrees) if d == g]
    coeff = phi.source.coeff
    mat = field.zeros(len(src), len(tgt))
    for a, j in enumerate(src):
        v = phi.images[j]
        blocks = {b.index: b for b in phi.target.blocks(g)}
        for c, i in enumerate(tgt):
            mat[a, c] = field(coeff.residue(v.coords[blocks[i].offset]))
    return mat


def tor_dims(M: GradedModule, max_steps: int = DEFAULT_STEPS, resolution: Resolution | None = None) -> dict:
    """``dim_D Tor_i(D, M)_g`` from ``D (x)`` the minimal resolution.

    The chain dimensions come from ``F_i / MF_i`` (lengths of canonical
    spans, not basis counts); every induced differential must vanish.
    """
    res = resolution or minimal_resolution(M, max_steps)
    field = M.coeff.residue_field()
    chain = {}
    for i, F in enumerate(res.frees):
        free = GradedModule.free(F)
        for g in F.window:
            d = free.top_dimension(g)
            if d:
                chain[(i, g)] = d
    out = {}
    for (i, g), d in chain.items():
        rank_out = 0
        if i >= 1:
            mat = _residue_differential(res.differentials[i - 1], g, field)
            rank_out = field.length(field.echelon(mat)) if mat.size else 0
        rank_in = 0
        if i < len(res.differentials):
            mat = _residue_differential(res.differentials[i], g, field)
            rank_in = field.length(field.echelon(mat)) if mat.size else 0
        if rank_out or rank_in:
            raise InvariantError(f"D (x) phi is nonzero at index {i} in degree {M.ring.monoid.format(g)}")
        dim = d - rank_out - rank_in
        if dim:
            out[(i, g)] = dim
    return out


# -- dimensions ------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionReport:
    value: object  # int or INFINITE
    certainty: Certainty
    status: Status

    @property
    def is_infinite(self) -> bool:
        return self.value == INFINITE


def pdim(M: GradedModule, max_steps: int = DEFAULT_STEPS, resolution: Resolution | None = None) -> DimensionReport:
    """Length of the minimal resolution; the zero module reports 0."""
    res = resolution or minimal_resolution(M, max_steps)
    if res.status is Status.EXHAUSTED_STEPS:
        return DimensionReport(INFINITE, Certainty.LOWER_BOUND, res.status)
    return DimensionReport(res.length, res.certainty, res.status)


def residue_module(ring: GradedRing) -> GradedModule:
    """``D = A / MM`` as the cokernel of the generators of MM on A."""
    F = FreeModule(ring, [ring.monoid.identity], ["e"])
    e = F.basis_vector(0)
    rels = [F.from_terms([(ring.coeff.one, (k,), 0)]) for k in range(len(ring.gen_degrees))]
    if not ring.coeff.is_field:
        rels.append(e.scale(ring.coeff.uniformizer))
    return GradedModule(F, None, rels, "D")


def gldim(ring: GradedRing, max_steps: int = DEFAULT_STEPS) -> DimensionReport:
    """Graded left global dimension as ``pdim_A D``."""
    return pdim(residue_module(ring), max_steps)


def _dimension_key(report: DimensionReport):
    return float("inf") if report.is_infinite else report.value


@dataclass
class CyclicSweep:
    ideals: int
    supremum: object
    witness: list  # generators of an ideal attaining the supremum


def cyclic_sweep(ring: GradedRing, max_steps: int = DEFAULT_STEPS, cap: int = 5000) -> CyclicSweep:
    """Supremum of ``pdim A/L`` over every graded left ideal L generated inside the window."""
    from .oracle import enumerate_left_ideals

    F = FreeModule(ring, [ring.monoid.identity], ["e"])
    best, best_gens, count = None, [], 0
    for gens in enumerate_left_ideals(ring, F, cap=cap):
        count += 1
        rep = pdim(GradedModule(F, None, gens), max_steps)
        if best is None or _dimension_key(rep) > _dimension_key(best):
            best, best_gens = rep, gens
    return CyclicSweep(count, best.value if best else 0, best_gens)


# -- freeness and cover lifting --------------------------------------------------


def is_free(M: GradedModule):
    """Minimal generators if they form a free basis within the window, else None."""
    cover = projective_cover(M)
    if cover.kernel.is_zero():
        return cover.generators
    return None


@dataclass
class CoverLift:
    """``phi: Q -> P`` with ``epsilon phi = psi`` and a section ``sigma`` of phi."""

    phi: GradedMorphism
    section: GradedMorphism
    kernel: Kernel

    def is_isomorphism(self) -> bool:
        return self.kernel.is_zero()


def _solve_in(images, source: FreeModule, target_module: GradedModule, v: HomogeneousVector):
    """Coordinates ``u`` in ``source_g`` with ``sum u -> v`` modulo the target denominator."""
    F = target_module.ambient
    R = F.coeff
    g = v.degree
    E = evaluation_matrix(images, g, F, source)
    n = source.rank(g)
    Z = target_module.zero_spans[g]
    if F.rank(g) == 0:
        return R.zeros(n)
    stacked = R.vstack([E, Z], F.rank(g))
    if stacked.shape[0] == 0:
        return None if v.coords.any() else R.zeros(n)
    x = R.solve(stacked, v.coords)
    if x is None:
        return None
    return x[:n]


def cover_lift(Q: FreeModule, psi_images, cover: ProjectiveCover) -> CoverLift:
    """Lift a graded epimorphism ``psi: Q -> M`` through the cover ``epsilon: P -> M``."""
    M = cover.module
    psi_images = list(psi_images)
    if not M.generates(psi_images):
        raise PreconditionError("psi is not onto M within the bound")
    P = cover.free
    lifted = []
    for v in psi_images:
        u = _solve_in(cover.generators, P, M, v)
        if u is None:
            raise InvariantError("cover generators fail to reach an element of M")
        lifted.append(P.vector(v.degree, u))
    phi = GradedMorphism(Q, P, lifted)
    freeP = GradedModule.free(P)
    if not freeP.generates(lifted):
        raise InvariantError("lifted map is not onto the cover")
    sect = []
    for e in P.basis_vectors():
        u = _solve_in(lifted, Q, freeP, e)
        if u is None:
            raise InvariantError("no section of the lifted map")
        sect.append(Q.vector(e.degree, u))
    sigma = GradedMorphism(P, Q, sect)
    if not all(phi.apply(s) == e for s, e in zip(sect, P.basis_vectors())):
        raise InvariantError("section does not split the lifted map")
    kernel = Kernel(Q, kernel_spans(Q, lifted, freeP), [])
    return CoverLift(phi, sigma, kernel)
