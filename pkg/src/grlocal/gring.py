"""Graded rings from homogeneous presentations, truncated at a degree bound.

A ring is the free algebra on the generators over a local coefficient ring,
modulo the two-sided ideal of the relations.  Each component ``A_g`` is built
as (words of degree g) / (ideal in degree g); the ideal component is the span of
the degree-g relations together with one-letter left and right paddings of
lower ideal components.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .coeff import CoefficientRing
from .errors import InvariantError, PreconditionError, TruncationError
from .monoid import Degree, Monoid

Word = tuple  # tuple of generator indices


def word_key(w: Word):
    return (len(w), w)


@dataclass(frozen=True)
class RingPresentation:
    monoid: Monoid
    coeff: CoefficientRing
    generators: tuple  # ((symbol, degree), ...)
    relations: tuple = ()  # each a tuple of (coefficient, word)
    bound: Degree = None
    commutative: bool = False

    @property
    def symbols(self) -> list[str]:
        return [s for s, _ in self.generators]

    def word_degree(self, w: Word) -> Degree:
        d = self.monoid.identity
        for i in w:
            d = self.monoid.compose(d, self.generators[i][1])
        return d

    def validate(self):
        mon = self.monoid
        if self.bound is None:
            raise PreconditionError("presentation needs a degree bound")
        mon.validate(self.bound)
        seen = set()
        for sym, d in self.generators:
            if sym in seen:
                raise PreconditionError(f"duplicate generator symbol {sym!r}")
            seen.add(sym)
            mon.validate(d)
            if d == mon.identity:
                raise PreconditionError(f"generator {sym} has the neutral degree; grading must be positive")
            if not mon.within(d, self.bound):
                raise PreconditionError(f"generator {sym} degree {mon.format(d)} is out of bound")
        for rel in self.relations:
            degs = list(dict.fromkeys(self.word_degree(w) for _, w in rel))
            if len(degs) > 1:
                shown = " and ".join(mon.format(d) for d in degs)
                raise PreconditionError(f"inhomogeneous relation: degrees {shown}")
            if degs and not mon.within(degs[0], self.bound):
                raise PreconditionError("relation degree is out of bound")
        if self.commutative:
            for (a, da), (b, db) in itertools.combinations(self.generators, 2):
                if mon.compose(da, db) != mon.compose(db, da):
                    raise PreconditionError(f"commutator of {a} and {b} is inhomogeneous")


def format_linear(coeff, items) -> str:
    """``c1*f*g + c2*h - ...`` from ``(coefficient, factor names)`` pairs; zero terms are dropped."""
    out = []
    for c, factors in items:
        if c == 0:
            continue
        neg = coeff.kind == "Q" and c < 0
        mag = -c if neg else c
        body = "*".join(([] if mag == 1 and factors else [str(mag)]) + list(factors))
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out) if out else "0"


@dataclass(frozen=True)
class HomogeneousElement:
    """``coords`` over the component basis of ``ring`` in ``degree``."""

    ring: "GradedRing" = field(repr=False, compare=False)
    degree: Degree
    coords: np.ndarray = field(compare=False)

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousElement)
            and self.degree == other.degree
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((self.degree, tuple(self.coords.tolist())))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def __str__(self):
        return self.ring.format_coords(self.degree, self.coords)


class GradedRing:
    """Components, multiplication tables and the maximal graded ideal."""

    def __init__(self, presentation: RingPresentation):
        presentation.validate()
        self.presentation = presentation
        self.monoid = presentation.monoid
        self.coeff = presentation.coeff
        self.bound = presentation.bound
        self.window = self.monoid.enumerate_upto(self.bound)
        self._window_set = set(self.window)
        self.gen_degrees = [d for _, d in presentation.generators]
        self.symbols = presentation.symbols
        self._tables = {}
        self._left = {}
        self._right = {}
        self._build()

    @classmethod
    def build(cls, presentation: RingPresentation) -> "GradedRing":
        return cls(presentation)

    # -- construction ---------------------------------------------------------

    def _relations_by_degree(self):
        p = self.presentation
        rels = list(p.relations)
        if p.commutative:
            one = self.coeff.one
            for i, j in itertools.combinations(range(len(p.generators)), 2):
                rels.append(((one, (i, j)), (self.coeff(-1), (j, i))))
        out = {}
        for rel in rels:
            if not rel:
                continue
            d = p.word_degree(rel[0][1])
            if d in self._window_set:
                out.setdefault(d, []).append(rel)
        return out

    def _build(self):
        R, mon = self.coeff, self.monoid
        e = mon.identity
        self.words = {}
        self.word_index = {}
        ideal = {}
        rel_by_deg = self._relations_by_degree()
        self.basis, self.nf, self.torsion = {}, {}, {}
        for g in self.window:
            if g == e:
                ws = [()]
            else:
                ws = set()
                for i, dg in enumerate(self.gen_degrees):
                    rest = mon.left_quotient(g, dg)
                    if rest is not None and rest in self.words:
                        ws.update((i,) + w for w in self.words[rest])
                ws = sorted(ws, key=word_key)
            self.words[g] = ws
            index = {w: k for k, w in enumerate(ws)}
            self.word_index[g] = index
            n = len(ws)
            rows = []
            for rel in rel_by_deg.get(g, []):
                row = R.zeros(n)
                for c, w in rel:
                    row[index[w]] = R(row[index[w]] + R(c))
                rows.append(row)
            for i, dg in enumerate(self.gen_degrees):
                sub = mon.left_quotient(g, dg)
                if sub is not None and sub in ideal and ideal[sub].shape[0]:
                    cols = [index[(i,) + w] for w in self.words[sub]]
                    rows.extend(self._embed(ideal[sub], cols, n))
                sub = mon.right_quotient(g, dg)
                if sub is not None and sub in ideal and ideal[sub].shape[0]:
                    cols = [index[w + (i,)] for w in self.words[sub]]
                    rows.extend(self._embed(ideal[sub], cols, n))
            ideal[g] = R.echelon(np.array(rows, dtype=R.dtype).reshape(len(rows), n)) if rows else R.zeros(0, n)
            self._finish_component(g, ideal[g])
        self.ideal = ideal

    def _embed(self, rows, cols, n):
        R = self.coeff
        out = R.zeros(rows.shape[0], n)
        out[:, cols] = rows
        return list(out)

    def _finish_component(self, g, H):
        R = self.coeff
        ws = self.words[g]
        n = len(ws)
        piv = R.pivots(H)
        unit_cols = {j for j, row in zip(piv, H) if row[j] == R.one}
        basis_cols = [j for j in range(n) if j not in unit_cols]
        self.basis[g] = [ws[j] for j in basis_cols]
        nf = R.zeros(n, len(basis_cols))
        for k, w in enumerate(ws):
            v = R.zeros(n)
            v[k] = R.one
            rem, _ = R.reduce_against(H, v)
            if any(rem[j] != 0 for j in unit_cols):
                raise InvariantError("normal form left a nonzero entry on an eliminated word")
            nf[k] = rem[basis_cols]
        self.nf[g] = nf
        tors = [row[basis_cols] for j, row in zip(piv, H) if j not in unit_cols]
        self.torsion[g] = R.echelon(np.array(tors, dtype=R.dtype).reshape(len(tors), len(basis_cols)))

    # -- components -----------------------------------------------------------

    def in_window(self, g: Degree) -> bool:
        return g in self._window_set

    def _check(self, g):
        if g not in self._window_set:
            raise TruncationError(f"degree {self.monoid.format(g)} exceeds the bound {self.monoid.format(self.bound)}")

    def rank(self, g: Degree) -> int:
        """Number of basis words in ``A_g`` (0 outside the window is not assumed)."""
        self._check(g)
        return len(self.basis[g])

    def length(self, g: Degree) -> int:
        """Composition length of ``A_g`` over the coefficient ring."""
        self._check(g)
        return self.coeff.m * self.rank(g) - self.coeff.length(self.torsion[g]) if self.coeff.kind == "Zpm" else self.rank(g)

    def is_zero_component(self, g: Degree) -> bool:
        return self.rank(g) == 0

    def normal_form(self, g: Degree, coords):
        rem, _ = self.coeff.reduce_against(self.torsion[g], coords)
        return rem

    def element(self, g: Degree, coords) -> HomogeneousElement:
        self._check(g)
        coords = self.coeff.array(list(coords)) if not isinstance(coords, np.ndarray) else coords
        if coords.shape != (self.rank(g),):
            raise PreconditionError(f"expected {self.rank(g)} coordinates in degree {self.monoid.format(g)}")
        return HomogeneousElement(self, g, self.normal_form(g, coords))

    def zero(self, g: Degree) -> HomogeneousElement:
        return self.element(g, self.coeff.zeros(self.rank(g)))

    def one(self) -> HomogeneousElement:
        return self.scalar(self.coeff.one)

    def scalar(self, s) -> HomogeneousElement:
        e = self.monoid.identity
        return self.element(e, self.coeff.array([s]))

    def word_element(self, w: Word) -> HomogeneousElement:
        g = self.presentation.word_degree(w)
        self._check(g)
        return HomogeneousElement(self, g, self.normal_form(g, self.nf[g][self.word_index[g][w]]))

    def from_terms(self, terms, degree=None) -> HomogeneousElement:
        """Element from ``[(coefficient, word), ...]``; all words of one degree."""
        degs = list(dict.fromkeys(self.presentation.word_degree(w) for _, w in terms))
        if degree is not None and degree not in degs:
            degs.insert(0, degree)
        if len(degs) > 1:
            shown = " and ".join(self.monoid.format(d) for d in degs)
            raise PreconditionError(f"inhomogeneous element: degrees {shown}")
        if not degs:
            raise PreconditionError("cannot infer the degree of an empty sum")
        g = degs[0]
        self._check(g)
        R = self.coeff
        v = R.zeros(self.rank(g))
        for c, w in terms:
            v = R.reduce(v + R(c) * self.nf[g][self.word_index[g][w]])
        return HomogeneousElement(self, g, self.normal_form(g, v))

    def format_coords(self, g, coords) -> str:
        items = [(c, [self.symbols[i] for i in w]) for c, w in zip(coords, self.basis[g])]
        return format_linear(self.coeff, items)

    # -- multiplication -------------------------------------------------------

    def mult_table(self, a: Degree, b: Degree):
        """Array ``T[i, j]`` = product of basis words i of A_a and j of A_b."""
        key = (a, b)
        if key not in self._tables:
            ab = self.monoid.compose(a, b)
            self._check(a)
            self._check(b)
            self._check(ab)
            R = self.coeff
            T = R.zeros(self.rank(a), self.rank(b), self.rank(ab))
            index, nf = self.word_index[ab], self.nf[ab]
            for i, u in enumerate(self.basis[a]):
                for j, v in enumerate(self.basis[b]):
                    T[i, j] = nf[index[u + v]]
            self._tables[key] = T
        return self._tables[key]

    def multiply(self, a: HomogeneousElement, b: HomogeneousElement) -> HomogeneousElement:
        g = self.monoid.compose(a.degree, b.degree)
        if not self.in_window(g):
            raise TruncationError(
                f"product degree {self.monoid.format(g)} exceeds the bound {self.monoid.format(self.bound)}"
            )
        T = self.mult_table(a.degree, b.degree)
        R = self.coeff
        if T.shape[2] == 0 or T.shape[0] == 0 or T.shape[1] == 0:
            return self.zero(g)
        tmp = np.tensordot(a.coords, T, axes=(0, 0))
        out = R.reduce(np.tensordot(b.coords, tmp, axes=(0, 0)))
        return HomogeneousElement(self, g, self.normal_form(g, out))

    def left_generator_matrix(self, i: int, g: Degree):
        """Matrix of ``x -> gen_i * x`` from A_g to A_{d(gen_i) g}, or None beyond the bound."""
        key = (i, g)
        if key not in self._left:
            target = self.monoid.compose(self.gen_degrees[i], g)
            if not self.in_window(target):
                self._left[key] = None
            else:
                R = self.coeff
                index, nf = self.word_index[target], self.nf[target]
                M = R.zeros(self.rank(g), self.rank(target))
                for k, w in enumerate(self.basis[g]):
                    M[k] = nf[index[(i,) + w]]
                self._left[key] = M
        return self._left[key]

    # -- maximal graded ideal -------------------------------------------------

    def in_maximal_ideal(self, a: HomogeneousElement) -> bool:
        if a.degree != self.monoid.identity:
            return True
        return not self.coeff.is_unit(a.coords[0])

    def maximal_graded_ideal(self) -> "MaximalGradedIdeal":
        return MaximalGradedIdeal(self)

    def residue_division_ring(self) -> "ResidueRing":
        return ResidueRing(self)

    # -- finiteness certificate -----------------------------------------------

    @cached_property
    def finite_support(self):
        """Degrees with ``A_g != 0`` if the window proves A is finite, else None.

        Walks right-extensions of nonzero components by one generator; every
        nonzero word is reached this way.  Fails as soon as an extension leaves
        the window.
        """
        seen = set()
        stack = [self.monoid.identity]
        while stack:
            g = stack.pop()
            if g in seen:
                continue
            if not self.in_window(g):
                return None
            if self.rank(g) == 0:
                continue
            seen.add(g)
            for dg in self.gen_degrees:
                stack.append(self.monoid.compose(g, dg))
        return self.monoid.sorted(seen)

    def describe(self) -> str:
        p = self.presentation
        return (
            f"monoid {self.monoid.describe()}; coeff {self.coeff.describe()}; "
            f"bound {self.monoid.format(self.bound)}; generators {len(p.generators)}; relations {len(p.relations)}"
        )


class MaximalGradedIdeal:
    """``m`` in degree e and everything in positive degrees."""

    def __init__(self, ring: GradedRing):
        self.ring = ring

    def generators(self, g: Degree):
        """Rows (basis coordinates) spanning the degree-g component."""
        R = self.ring.coeff
        n = self.ring.rank(g)
        if g != self.ring.monoid.identity:
            return R.eye(n)
        if R.is_field:
            return R.zeros(0, n)
        return R.scale(R.uniformizer, R.eye(n))

    def contains(self, a: HomogeneousElement) -> bool:
        return self.ring.in_maximal_ideal(a)

    def is_proper(self) -> bool:
        return not self.contains(self.ring.one())


class ResidueRing:
    """D = A / M, concentrated in degree e with D_e the residue field."""

    def __init__(self, ring: GradedRing):
        self.source = ring
        self.field = ring.coeff.residue_field()
        mon = ring.monoid
        self.ring = GradedRing(RingPresentation(mon, self.field, (), (), ring.bound, False))

    def project(self, a: HomogeneousElement) -> HomogeneousElement:
        """Image in D: the residue map in degree e, zero in positive degrees."""
        if a.degree != self.source.monoid.identity:
            return self.ring.zero(a.degree)
        return self.ring.element(a.degree, self.field.array([self.source.coeff.residue(a.coords[0])]))


# -- locality checks -----------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    checked: int
    counterexample: str = ""


@dataclass
class LocalityReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def _degree_e_elements(ring: GradedRing, samples: int, rng):
    R = ring.coeff
    if R.is_finite:
        return [ring.scalar(s) for s in R.elements()]
    out = [ring.scalar(R.zero), ring.scalar(R.one)]
    out += [ring.scalar(R.random(rng)) for _ in range(samples)]
    return out


def _component_elements(ring: GradedRing, g, samples, rng, cap=256):
    R = ring.coeff
    n = ring.rank(g)
    if R.is_finite and R.modulus**n <= cap:
        return [ring.element(g, R.array(list(c))) for c in itertools.product(range(R.modulus), repeat=n)]
    return [ring.element(g, R.array([R.random(rng) for _ in range(n)]) if n else R.zeros(0)) for _ in range(samples)]


def check_local_axioms(ring: GradedRing, samples: int = 20, seed: int = 0) -> LocalityReport:
    """Check the graded-local consequences on degree-e elements and within the bound."""
    rng = random.Random(seed)
    R, mon = ring.coeff, ring.monoid
    e = mon.identity
    M = ring.maximal_graded_ideal()
    checks = []
    one = ring.one()

    checks.append(Check("proper", M.is_proper(), 1, "" if M.is_proper() else "1 lies in M"))

    # homogeneous elements outside M are two-sided invertible, inverses homogeneous of degree e
    elems = _degree_e_elements(ring, samples, rng)
    bad = ""
    for a in elems:
        if M.contains(a):
            continue
        b = ring.scalar(R.inverse(a.coords[0]))
        if ring.multiply(a, b) != one or ring.multiply(b, a) != one:
            bad = str(a)
            break
    checks.append(Check("units_invertible", not bad, len(elems), bad))

    # left invertible implies right invertible; positive degrees cannot multiply to e
    bad = ""
    count = 0
    for a in elems:
        for b in elems:
            count += 1
            if ring.multiply(b, a) == one and not any(ring.multiply(a, c) == one for c in elems):
                bad = f"{a} has left inverse {b} but no right inverse"
                break
        if bad:
            break
    for g in ring.window:
        for h in ring.window:
            if g != e and ring.in_window(mon.compose(h, g)):
                count += 1
                if mon.compose(h, g) == e:
                    bad = bad or f"degree {mon.format(g)} has a left inverse degree"
    checks.append(Check("left_inverse_is_two_sided", not bad, count, bad))

    # non-invertible homogeneous elements of degree e generate exactly m
    if R.is_finite:
        nonunits = [s for s in R.elements() if not R.is_unit(s)]
        span = R.echelon(R.array([[s] for s in nonunits], cols=1)) if nonunits else R.zeros(0, 1)
        expected = R.echelon(M.generators(e))
        ok = np.array_equal(span, expected)
        checks.append(Check("M_cap_Ae_is_m", ok, len(nonunits), "" if ok else f"span {span.tolist()}"))
    else:
        ok = all(M.contains(a) == (a.coords[0] == 0) for a in elems)
        checks.append(Check("M_cap_Ae_is_m", ok, len(elems), "" if ok else "nonzero rational in M"))

    # M absorbs products from both sides within the bound
    bad = ""
    count = 0
    for a_deg in ring.window:
        for b_deg in ring.window:
            A_basis = [ring.element(a_deg, row) for row in R.eye(ring.rank(a_deg))]
            M_gens = [ring.element(b_deg, row) for row in M.generators(b_deg)]
            left = ring.in_window(mon.compose(a_deg, b_deg))
            right = ring.in_window(mon.compose(b_deg, a_deg))
            for x in A_basis:
                for m in M_gens:
                    if left:
                        count += 1
                        if not M.contains(ring.multiply(x, m)):
                            bad = bad or f"{x} * {m} leaves M"
                    if right:
                        count += 1
                        if not M.contains(ring.multiply(m, x)):
                            bad = bad or f"{m} * {x} leaves M"
    checks.append(Check("M_two_sided", not bad, count, bad))

    # positive-degree elements are never invertible
    bad = ""
    count = 0
    for g in ring.window:
        if g == e:
            continue
        for a in _component_elements(ring, g, 4, rng, cap=64):
            count += 1
            if not M.contains(a):
                bad = f"{a} in degree {mon.format(g)} outside M"
    checks.append(Check("nonunits_in_M", not bad, count, bad))
    return LocalityReport(checks)


def associativity_defects(ring: GradedRing, limit: int | None = None) -> list:
    """Basis triples with ``(ab)c != a(bc)`` inside the window."""
    mon = ring.monoid
    out = []
    for a, b, c in itertools.product(ring.window, repeat=3):
        abc = mon.compose(mon.compose(a, b), c)
        if not ring.in_window(abc):
            continue
        for x in ring.coeff.eye(ring.rank(a)):
            for y in ring.coeff.eye(ring.rank(b)):
                for z in ring.coeff.eye(ring.rank(c)):
                    X, Y, Z = ring.element(a, x), ring.element(b, y), ring.element(c, z)
                    if ring.multiply(ring.multiply(X, Y), Z) != ring.multiply(X, ring.multiply(Y, Z)):
                        out.append((X, Y, Z))
                        if limit and len(out) >= limit:
                            return out
    return out
