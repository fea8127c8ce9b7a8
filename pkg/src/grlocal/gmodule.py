"""Gr-free modules, graded morphisms and finitely generated graded modules.

Every module here is a subquotient ``(N + Z) / Z`` of a gr-free module ``F``
where ``N`` and ``Z`` are graded submodules given by homogeneous generators.
A cokernel takes ``N = F``; a submodule takes ``Z = 0``.  Each degree
component is stored as the canonical row span (in the coordinates of
``F_g``) of the numerator, the denominator and of ``MM + Z``.

Row spans always contain the coordinate relations of ``F_g`` itself, which are
nonzero only when the ring has torsion over ``Z/p^m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvariantError, PreconditionError, TruncationError
from .gring import GradedRing, HomogeneousElement, format_linear
from .monoid import Degree


@dataclass(frozen=True, eq=False)
class Block:
    index: int  # basis element of the free module
    shift: Degree  # degree of the ring component placed in front of it
    offset: int
    size: int


class FreeModule:
    """``F = sum A e_i`` with homogeneous basis degrees ``degrees``."""

    def __init__(self, ring: GradedRing, degrees, names=None):
        self.ring = ring
        self.degrees = list(degrees)
        self.names = list(names) if names is not None else [f"e{i + 1}" for i in range(len(self.degrees))]
        if len(self.names) != len(self.degrees):
            raise PreconditionError("one name per basis degree")
        mon = ring.monoid
        for d in self.degrees:
            mon.validate(d)
            if not ring.in_window(d):
                raise TruncationError(f"basis degree {mon.format(d)} exceeds the bound {mon.format(ring.bound)}")
        self._blocks = {}
        self._rel = {}
        self._left = {}

    def __repr__(self):
        mon = self.ring.monoid
        return "FreeModule[" + ", ".join(f"{n} {mon.format(d)}" for n, d in zip(self.names, self.degrees)) + "]"

    @property
    def window(self):
        return self.ring.window

    @property
    def coeff(self):
        return self.ring.coeff

    def __len__(self):
        return len(self.degrees)

    def blocks(self, g: Degree) -> list:
        """One block per basis element ``e_i`` with ``A_{g'} e_i`` inside ``F_g``."""
        if g not in self._blocks:
            self.ring._check(g)
            out, offset = [], 0
            for i, d in enumerate(self.degrees):
                shift = self.ring.monoid.right_quotient(g, d)
                if shift is None:
                    continue
                size = self.ring.rank(shift)
                out.append(Block(i, shift, offset, size))
                offset += size
            self._blocks[g] = out
        return self._blocks[g]

    def rank(self, g: Degree) -> int:
        return sum(b.size for b in self.blocks(g))

    def relations(self, g: Degree):
        """Canonical rows spanning the zero vectors of ``F_g`` (ring torsion)."""
        if g not in self._rel:
            R = self.coeff
            n = self.rank(g)
            rows = []
            for b in self.blocks(g):
                T = self.ring.torsion[b.shift]
                if T.shape[0]:
                    block = R.zeros(T.shape[0], n)
                    block[:, b.offset : b.offset + b.size] = T
                    rows.append(block)
            self._rel[g] = R.echelon(R.vstack(rows, n)) if rows else R.zeros(0, n)
        return self._rel[g]

    # -- vectors --------------------------------------------------------------

    def vector(self, g: Degree, coords) -> "HomogeneousVector":
        R = self.coeff
        coords = R.reduce(np.asarray(coords, dtype=R.dtype)) if len(coords) else R.zeros(0)
        if coords.shape != (self.rank(g),):
            raise PreconditionError(f"expected {self.rank(g)} coordinates in degree {self.ring.monoid.format(g)}")
        rel = self.relations(g)
        if rel.shape[0]:
            coords, _ = R.reduce_against(rel, coords)
        return HomogeneousVector(self, g, coords)

    def zero(self, g: Degree) -> "HomogeneousVector":
        return self.vector(g, self.coeff.zeros(self.rank(g)))

    def basis_vector(self, i: int) -> "HomogeneousVector":
        g = self.degrees[i]
        v = self.coeff.zeros(self.rank(g))
        for b in self.blocks(g):
            if b.index == i:
                v[b.offset] = self.coeff.one  # A_e has the single basis word ()
        return self.vector(g, v)

    def basis_vectors(self):
        return [self.basis_vector(i) for i in range(len(self))]

    def from_terms(self, terms, degree=None) -> "HomogeneousVector":
        """Vector from ``[(coefficient, word, i), ...]`` meaning ``sum c * word * e_i``."""
        mon = self.ring.monoid
        degs = []
        for _, w, i in terms:
            d = mon.compose(self.ring.presentation.word_degree(w), self.degrees[i])
            if d not in degs:
                degs.append(d)
        if degree is not None and degree not in degs:
            degs.insert(0, degree)
        if len(degs) > 1:
            shown = " and ".join(mon.format(d) for d in degs)
            raise PreconditionError(f"inhomogeneous vector: degrees {shown}")
        if not degs:
            raise PreconditionError("cannot infer the degree of an empty sum")
        g = degs[0]
        self.ring._check(g)
        R = self.coeff
        v = R.zeros(self.rank(g))
        where = {b.index: b for b in self.blocks(g)}
        for c, w, i in terms:
            b = where[i]
            a = self.ring.from_terms([(c, w)], degree=b.shift)
            v[b.offset : b.offset + b.size] = R.reduce(v[b.offset : b.offset + b.size] + a.coords)
        return self.vector(g, v)

    def block_element(self, v: "HomogeneousVector", i: int) -> HomogeneousElement | None:
        """Coefficient of ``e_i`` in ``v`` as a ring element (None if absent)."""
        for b in self.blocks(v.degree):
            if b.index == i:
                return self.ring.element(b.shift, v.coords[b.offset : b.offset + b.size])
        return None

    def format_coords(self, g, coords) -> str:
        ring = self.ring
        items = []
        for b in self.blocks(g):
            for c, w in zip(coords[b.offset : b.offset + b.size], ring.basis[b.shift]):
                items.append((c, [ring.symbols[i] for i in w] + [self.names[b.index]]))
        return format_linear(self.coeff, items)

    # -- left action ------------------------------------------------------------

    def left_generator_matrix(self, k: int, g: Degree):
        """Matrix of ``v -> gen_k * v`` from ``F_g`` to ``F_{d(gen_k) g}``, or None past the bound."""
        key = (k, g)
        if key not in self._left:
            ring = self.ring
            target = ring.monoid.compose(ring.gen_degrees[k], g)
            if not ring.in_window(target):
                self._left[key] = None
            else:
                R = self.coeff
                M = R.zeros(self.rank(g), self.rank(target))
                tblocks = {b.index: b for b in self.blocks(target)}
                for b in self.blocks(g):
                    L = ring.left_generator_matrix(k, b.shift)
                    t = tblocks[b.index]
                    M[b.offset : b.offset + b.size, t.offset : t.offset + t.size] = L
                self._left[key] = M
        return self._left[key]

    def act_matrix(self, d: Degree, v: "HomogeneousVector"):
        """Rows ``w * v`` for the basis words ``w`` of ``A_d``; shape ``(rank A_d, rank F_{d g})``."""
        ring = self.ring
        R = self.coeff
        g = ring.monoid.compose(d, v.degree)
        ring._check(g)
        out = R.zeros(ring.rank(d), self.rank(g))
        tblocks = {b.index: b for b in self.blocks(g)}
        for b in self.blocks(v.degree):
            y = v.coords[b.offset : b.offset + b.size]
            if not y.any():
                continue
            t = tblocks[b.index]
            T = ring.mult_table(d, b.shift)
            if T.size:
                out[:, t.offset : t.offset + t.size] = R.reduce(
                    out[:, t.offset : t.offset + t.size] + np.tensordot(T, y, axes=(1, 0))
                )
        return R.reduce(out)

    def act(self, a: HomogeneousElement, v: "HomogeneousVector") -> "HomogeneousVector":
        g = self.ring.monoid.compose(a.degree, v.degree)
        if not self.ring.in_window(g):
            raise TruncationError(f"product degree {self.ring.monoid.format(g)} exceeds the bound")
        M = self.act_matrix(a.degree, v)
        return self.vector(g, self.coeff.matmul(a.coords.reshape(1, -1), M)[0] if M.shape[0] else self.coeff.zeros(M.shape[1]))

    def in_radical(self, v: "HomogeneousVector") -> bool:
        """Whether ``v`` lies in ``MF``: every degree-e coefficient is a non-unit."""
        e = self.ring.monoid.identity
        for b in self.blocks(v.degree):
            if b.shift == e and self.coeff.is_unit(v.coords[b.offset]):
                return False
        return True

    def component_ranks(self) -> dict:
        return {g: self.rank(g) for g in self.window}


@dataclass(frozen=True, eq=False)
class HomogeneousVector:
    module: FreeModule = field(repr=False)
    degree: Degree
    coords: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousVector)
            and other.module is self.module
            and self.degree == other.degree
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((id(self.module), self.degree, tuple(self.coords.tolist())))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def __add__(self, other):
        if self.degree != other.degree:
            raise PreconditionError("adding vectors of different degrees")
        return self.module.vector(self.degree, self.module.coeff.reduce(self.coords + other.coords))

    def __sub__(self, other):
        if self.degree != other.degree:
            raise PreconditionError("subtracting vectors of different degrees")
        return self.module.vector(self.degree, self.module.coeff.reduce(self.coords - other.coords))

    def scale(self, s) -> "HomogeneousVector":
        return self.module.vector(self.degree, self.module.coeff.scale(self.module.coeff(s), self.coords))

    def __str__(self):
        return self.module.format_coords(self.degree, self.coords)


class GradedMorphism:
    """``phi(f_j) = images[j]``; the images live in ``target``."""

    def __init__(self, source: FreeModule, target: FreeModule, images):
        self.source = source
        self.target = target
        self.images = list(images)
        if len(self.images) != len(source):
            raise PreconditionError(f"need {len(source)} images, got {len(self.images)}")
        for j, (v, d) in enumerate(zip(self.images, source.degrees)):
            if v.module is not target:
                raise PreconditionError(f"image {j} does not lie in the target module")
            if v.degree != d:
                mon = source.ring.monoid
                raise PreconditionError(
                    f"image of {source.names[j]} has degree {mon.format(v.degree)}, expected {mon.format(d)}"
                )
        self._mats = {}

    def matrix(self, g: Degree):
        """Rows: images of the coordinate basis of ``source_g`` in ``target_g``."""
        if g not in self._mats:
            R = self.source.coeff
            rows = R.zeros(self.source.rank(g), self.target.rank(g))
            for b in self.source.blocks(g):
                rows[b.offset : b.offset + b.size] = self.target.act_matrix(b.shift, self.images[b.index])
            self._mats[g] = rows
        return self._mats[g]

    def apply(self, v: HomogeneousVector) -> HomogeneousVector:
        if v.module is not self.source:
            raise PreconditionError("vector not in the source module")
        M = self.matrix(v.degree)
        R = self.source.coeff
        out = R.matmul(v.coords.reshape(1, -1), M)[0] if M.shape[0] else R.zeros(M.shape[1])
        return self.target.vector(v.degree, out)

    def compose(self, first: "GradedMorphism") -> "GradedMorphism":
        """``self o first``."""
        if first.target is not self.source:
            raise PreconditionError("morphisms do not compose")
        return GradedMorphism(first.source, self.target, [self.apply(v) for v in first.images])

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.images)

    @classmethod
    def identity(cls, F: FreeModule) -> "GradedMorphism":
        return cls(F, F, F.basis_vectors())


def generated_spans(F: FreeModule, vectors, base=None) -> dict:
    """Canonical spans of the submodule generated by ``vectors`` (plus ``base``) in every degree.

    ``base`` maps a degree to rows already known to lie in the span; by
    default the coordinate relations of ``F``.
    """
    R = F.coeff
    ring = F.ring
    mon = ring.monoid
    by_degree = {}
    for v in vectors:
        if v.module is not F:
            raise PreconditionError("generator does not lie in the ambient free module")
        by_degree.setdefault(v.degree, []).append(v.coords)
    spans = {}
    for g in F.window:
        n = F.rank(g)
        rows = [base(g) if base is not None else F.relations(g)]
        if g in by_degree:
            rows.append(np.array(by_degree[g], dtype=R.dtype).reshape(len(by_degree[g]), n))
        for k, dk in enumerate(ring.gen_degrees):
            lower = mon.left_quotient(g, dk)
            if lower is None or lower not in spans or not spans[lower].shape[0]:
                continue
            L = F.left_generator_matrix(k, lower)
            rows.append(R.matmul(spans[lower], L))
        spans[g] = R.echelon(R.vstack(rows, n))
    return spans


class GradedModule:
    """``(N + Z) / Z`` inside a gr-free ``ambient``.

    ``numerator=None`` means ``N = ambient``.  ``spans`` may supply the
    numerator components directly (used for kernels).
    """

    def __init__(self, ambient: FreeModule, numerator=None, denominator=(), name: str = "", spans=None):
        self.ambient = ambient
        self.ring = ambient.ring
        self.coeff = ambient.coeff
        self.numerator = None if numerator is None else list(numerator)
        self.denominator = list(denominator)
        self.name = name
        self._given_spans = spans

    @classmethod
    def free(cls, F: FreeModule, name="") -> "GradedModule":
        return cls(F, None, (), name)

    @classmethod
    def coker(cls, phi: GradedMorphism, name="") -> "GradedModule":
        return cls(phi.target, None, phi.images, name)

    @classmethod
    def submodule(cls, F: FreeModule, vectors, name="") -> "GradedModule":
        return cls(F, vectors, (), name)

    @property
    def window(self):
        return self.ring.window

    # -- components ------------------------------------------------------------

    @cached_property
    def zero_spans(self) -> dict:
        return generated_spans(self.ambient, self.denominator)

    @cached_property
    def spans(self) -> dict:
        F = self.ambient
        if self._given_spans is not None:
            R = self.coeff
            return {
                g: R.echelon(R.vstack([self._given_spans[g], self.zero_spans[g]], F.rank(g)))
                for g in self.window
            }
        if self.numerator is None:
            return {g: self.coeff.eye(F.rank(g)) if F.rank(g) else self.coeff.zeros(0, 0) for g in self.window}
        return generated_spans(F, self.numerator, base=lambda g: self.zero_spans[g])

    @cached_property
    def radical_spans(self) -> dict:
        """Components of ``MM + Z`` (as spans containing Z)."""
        F, R, ring = self.ambient, self.coeff, self.ring
        mon = ring.monoid
        out = {}
        for g in self.window:
            n = F.rank(g)
            rows = [self.zero_spans[g]]
            if not R.is_field:
                rows.append(R.scale(R.uniformizer, self.spans[g]))
            for k, dk in enumerate(ring.gen_degrees):
                lower = mon.left_quotient(g, dk)
                if lower is None or not self.spans[lower].shape[0]:
                    continue
                rows.append(R.matmul(self.spans[lower], F.left_generator_matrix(k, lower)))
            out[g] = R.echelon(R.vstack(rows, n))
        return out

    def span(self, g):
        return self.spans[g]

    def zero_span(self, g):
        return self.zero_spans[g]

    def radical_span(self, g):
        return self.radical_spans[g]

    def length(self, g) -> int:
        """Composition length of ``M_g`` over the coefficient ring (its dimension over a field)."""
        R = self.coeff
        return R.length(self.spans[g]) - R.length(self.zero_spans[g])

    def top_dimension(self, g) -> int:
        """``dim_D (M / MM)_g``."""
        R = self.coeff
        return R.length(self.spans[g]) - R.length(self.radical_spans[g])

    def component(self, g):
        """``(numerator rows, denominator rows)`` presenting ``M_g`` over the coefficients."""
        self.ring._check(g)
        return self.spans[g], self.zero_spans[g]

    def component_lengths(self) -> dict:
        return {g: self.length(g) for g in self.window}

    def is_zero(self) -> bool:
        return all(self.length(g) == 0 for g in self.window)

    def least_nonzero_degree(self):
        for g in self.window:
            if self.length(g):
                return g
        return None

    # -- elements ----------------------------------------------------------------

    def contains(self, v: HomogeneousVector) -> bool:
        return v.module is self.ambient and self.coeff.contains(self.spans[v.degree], v.coords)

    def is_zero_vector(self, v: HomogeneousVector) -> bool:
        return self.coeff.contains(self.zero_spans[v.degree], v.coords)

    def same(self, v: HomogeneousVector, w: HomogeneousVector) -> bool:
        return v.degree == w.degree and self.is_zero_vector(v - w)

    def in_radical(self, v: HomogeneousVector) -> bool:
        return self.coeff.contains(self.radical_spans[v.degree], v.coords)

    def element(self, g, coords) -> HomogeneousVector:
        v = self.ambient.vector(g, coords)
        if not self.contains(v):
            raise PreconditionError("vector does not lie in the module")
        return v

    def _check_members(self, vectors):
        for v in vectors:
            if not self.contains(v):
                raise PreconditionError(f"{v} does not lie in the module")

    def generated(self, vectors) -> dict:
        """Spans of the submodule of M generated by ``vectors`` (each containing Z)."""
        return generated_spans(self.ambient, vectors, base=lambda g: self.zero_spans[g])

    def generates(self, vectors) -> bool:
        """Whether ``vectors`` span every component within the bound."""
        self._check_members(vectors)
        S = self.generated(vectors)
        return all(np.array_equal(S[g], self.spans[g]) for g in self.window)

    def residue_rank(self, vectors, g) -> int:
        """Dimension of the span of the residues of degree-g ``vectors`` in ``(M/MM)_g``."""
        R = self.coeff
        rows = [v.coords for v in vectors if v.degree == g]
        base = self.radical_spans[g]
        if not rows:
            return 0
        stacked = R.vstack([base, np.array(rows, dtype=R.dtype)], self.ambient.rank(g))
        return R.length(R.echelon(stacked)) - R.length(base)

    def __repr__(self):
        return f"GradedModule({self.name or '?'}, ambient={self.ambient!r})"


# -- operations ----------------------------------------------------------------


def free_module(ring: GradedRing, degrees, names=None) -> FreeModule:
    return FreeModule(ring, degrees, names)


def component(M: GradedModule, g: Degree):
    return M.component(g)


def evaluation_matrix(images, g: Degree, F: FreeModule, source: FreeModule):
    """Matrix of ``source_g -> F_g`` sending basis element j to ``images[j]``."""
    R = F.coeff
    rows = R.zeros(source.rank(g), F.rank(g))
    for b in source.blocks(g):
        rows[b.offset : b.offset + b.size] = F.act_matrix(b.shift, images[b.index])
    return rows


@dataclass
class Kernel:
    """Kernel of ``source -> target`` (a map onto a subquotient), complete within the bound."""

    source: FreeModule
    spans: dict
    generators: list

    def module(self, name="") -> GradedModule:
        return GradedModule(self.source, [], (), name, spans=self.spans)

    def is_zero(self) -> bool:
        rel = self.source.relations
        R = self.source.coeff
        return all(R.length(self.spans[g]) == R.length(rel(g)) for g in self.spans)


def kernel_spans(source: FreeModule, images, target: GradedModule) -> dict:
    """Degreewise kernel of ``f_j -> images[j]`` into ``target`` (mod its denominator)."""
    R = source.coeff
    F = target.ambient
    out = {}
    for g in source.window:
        n = source.rank(g)
        if n == 0:
            out[g] = R.zeros(0, 0)
            continue
        E = evaluation_matrix(images, g, F, source)
        m = F.rank(g)
        if m == 0:
            out[g] = R.eye(n)
            continue
        K = R.kernel(R.vstack([E, target.zero_spans[g]], m))
        out[g] = R.echelon(K[:, :n]) if K.shape[0] else R.zeros(0, n)
    return out


def kernel_upto(phi: GradedMorphism, target: GradedModule | None = None) -> Kernel:
    """Homogeneous generators of ``Ker phi``, complete in every degree within the bound.

    Degrees are swept in increasing order; a kernel row is kept as a new
    generator only when the generators found so far do not already produce it.
    """
    if target is None:
        target = GradedModule.free(phi.target)
    if target.ambient is not phi.target:
        raise PreconditionError("target module must live in the morphism's target")
    source = phi.source
    spans = kernel_spans(source, phi.images, target)
    gens = []
    R = source.coeff
    ring = source.ring
    mon = ring.monoid
    have = {}
    for g in source.window:
        n = source.rank(g)
        rows = [source.relations(g)]
        for k, dk in enumerate(ring.gen_degrees):
            lower = mon.left_quotient(g, dk)
            if lower is not None and have.get(lower) is not None and have[lower].shape[0]:
                rows.append(R.matmul(have[lower], source.left_generator_matrix(k, lower)))
        cur = R.echelon(R.vstack(rows, n))
        for row in spans[g]:
            if not R.contains(cur, row):
                gens.append(source.vector(g, row))
                cur = R.echelon(R.vstack([cur, row.reshape(1, -1)], n))
        if not np.array_equal(cur, spans[g]):
            raise InvariantError(f"kernel generators fail to span degree {mon.format(g)}")
        have[g] = cur
    return Kernel(source, spans, gens)


def minimal_generators(M: GradedModule) -> list:
    """A minimal homogeneous generating set: lifts of a D-basis of ``M/MM``, degree by degree.

    Candidates in each degree are the canonical rows of ``M_g``; a row is
    kept when it is not in ``MM + (rows kept so far)``.  The result is
    deterministic.
    """
    R = M.coeff
    out = []
    for g in M.window:
        base = M.radical_spans[g]
        top = R.length(M.spans[g]) - R.length(base)
        if top == 0:
            continue
        n = M.ambient.rank(g)
        cur = base
        picked = 0
        for row in M.spans[g]:
            if R.contains(cur, row):
                continue
            out.append(M.ambient.vector(g, row))
            cur = R.echelon(R.vstack([cur, row.reshape(1, -1)], n))
            picked += 1
        if picked != top:
            raise InvariantError(
                f"picked {picked} generators in degree {M.ring.monoid.format(g)}, residue dimension is {top}"
            )
    return out


def _require_generating(omega, M: GradedModule):
    if not M.generates(omega):
        raise PreconditionError("the given set does not generate the module within the bound")


def is_minimal(omega, M: GradedModule, exhaustive: bool = False) -> bool:
    """Residue criterion: minimal iff the residues in ``M/MM`` are independent.

    ``exhaustive=True`` instead tests every set with one element removed
    (finite coefficients, at most 8 elements).
    """
    omega = list(omega)
    _require_generating(omega, M)
    if exhaustive:
        if not M.coeff.is_finite or len(omega) > 8:
            raise PreconditionError("exhaustive minimality needs finite coefficients and at most 8 elements")
        return not any(M.generates(omega[:i] + omega[i + 1 :]) for i in range(len(omega)))
    degrees = {v.degree for v in omega}
    for g in degrees:
        if M.residue_rank(omega, g) != sum(1 for v in omega if v.degree == g):
            return False
    return True


def minimize(omega, M: GradedModule) -> list:
    """Greedy residue-independent subset of ``omega`` in input order."""
    omega = list(omega)
    _require_generating(omega, M)
    R = M.coeff
    cur = {}
    out = []
    for v in omega:
        g = v.degree
        if g not in cur:
            cur[g] = M.radical_spans[g]
        if R.contains(cur[g], v.coords):
            continue
        out.append(v)
        cur[g] = R.echelon(R.vstack([cur[g], v.coords.reshape(1, -1)], M.ambient.rank(g)))
    return out


def express(eta: HomogeneousVector, omega, M: GradedModule):
    """Homogeneous coefficients ``h_j`` with ``eta = sum h_j omega_j`` in ``M``, or None."""
    F, R, ring = M.ambient, M.coeff, M.ring
    g = eta.degree
    parts, rows = [], []
    for j, v in enumerate(omega):
        shift = ring.monoid.right_quotient(g, v.degree)
        if shift is None:
            continue
        mat = F.act_matrix(shift, v)
        parts.append((j, shift, len(rows), mat.shape[0]))
        rows.extend(mat)
    Z = M.zero_spans[g]
    n = F.rank(g)
    stacked = R.vstack([np.array(rows, dtype=R.dtype).reshape(len(rows), n), Z], n)
    x = R.solve(stacked, eta.coords) if stacked.shape[0] else (None if eta.coords.any() else R.zeros(0))
    if x is None:
        return None
    return {j: ring.element(shift, x[off : off + size]) for j, shift, off, size in parts}


def exchange_step(T1, T2, eta_index: int, M: GradedModule):
    """Swap ``eta = T2[eta_index]`` into ``T1`` in place of an element of T1 minus T2.

    Returns ``(new_T1, replaced_index)``.  The replaced element carries a
    coefficient with unit residue in some expression of ``eta`` over T1.
    """
    T1, T2 = list(T1), list(T2)
    eta = T2[eta_index]
    if any(M.same(eta, xi) for xi in T1):
        raise PreconditionError("eta already lies in T1")
    coeffs = express(eta, T1, M)
    if coeffs is None:
        raise PreconditionError("T1 does not generate eta")
    e = M.ring.monoid.identity
    for j, h in coeffs.items():
        if h.degree != e or not M.coeff.is_unit(h.coords[0]):
            continue
        if any(M.same(T1[j], tau) for tau in T2):
            continue
        new = T1[:j] + [eta] + T1[j + 1 :]
        return new, j
    raise PreconditionError("no unit coefficient on T1 minus T2; T2 is not minimal or T1 does not generate")


def exchange_all(T1, T2, M: GradedModule):
    """Run exchange steps for every element of T2 not yet in T1."""
    T1 = list(T1)
    steps = []
    for i, eta in enumerate(T2):
        if any(M.same(eta, xi) for xi in T1):
            continue
        T1, j = exchange_step(T1, T2, i, M)
        steps.append((i, j))
    return T1, steps


def nakayama_witness(M: GradedModule):
    """Least nonzero degree of M, checked to be outside ``MM``; None for M = 0."""
    g = M.least_nonzero_degree()
    if g is None:
        return None
    R = M.coeff
    if R.length(M.radical_spans[g]) >= R.length(M.spans[g]):
        raise InvariantError(f"MM covers the least nonzero component in degree {M.ring.monoid.format(g)}")
    return g


def nakayama_is_zero(M: GradedModule) -> bool:
    return nakayama_witness(M) is None
