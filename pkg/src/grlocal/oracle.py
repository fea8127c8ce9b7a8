"""Brute-force checks for finite coefficient rings at tiny scale.

Nothing here calls the echelon, Howell or kernel routines of the engine.
Spans are additive closures of explicit tuples over ``Z/N``, ring components
are word spaces modulo the closure of all padded relations, and module
elements are vectors of word coordinates.  The only things taken from the
engine are the presentation, the monoid and (to translate engine vectors)
the list of basis words of each ring component.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .coeff import CoefficientRing
from .errors import OracleCapError, PreconditionError
from .gring import GradedRing, RingPresentation
from .monoid import Monoid

SPAN_CAP = 2**20


# -- spans over Z/N ---------------------------------------------------------------


def _add(a, b, n):
    return tuple((x + y) % n for x, y in zip(a, b))


def _mul(k, a, n):
    return tuple((k * x) % n for x in a)


def _keys(arr: np.ndarray) -> list:
    """Hashable byte strings for the rows of an int64 array."""
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    if arr.shape[1] == 0:
        return [b""] * arr.shape[0]
    return arr.view(np.dtype((np.void, arr.shape[1] * 8))).ravel().tolist()


class Span:
    """Additive subgroup of ``(Z/N)^dim``, stored as an explicit list of all its elements."""

    def __init__(self, rows: np.ndarray, keys, generators: tuple, dim: int):
        self.rows = rows
        self.keys = frozenset(keys)
        self.generators = generators
        self.dim = dim

    @functools.cached_property
    def elements(self) -> frozenset:
        return frozenset(map(tuple, self.rows.tolist()))

    def __len__(self):
        return len(self.keys)

    def __contains__(self, v):
        return _keys(np.asarray([v], dtype=np.int64).reshape(1, self.dim))[0] in self.keys


def brute_span(vectors, n: int, dim: int, cap: int = SPAN_CAP) -> Span:
    """Closure of ``vectors`` under addition (equivalently, their Z/N-span).

    Adding v to a subgroup S gives the disjoint cosets S + j*v for j below
    the order of v modulo S, so the size is known before any work is done.
    """
    rows = np.zeros((1, dim), dtype=np.int64)
    keys = set(_keys(rows))
    used = []
    for v in vectors:
        v = tuple(int(x) % n for x in v)
        if len(v) != dim:
            raise PreconditionError("vector length does not match the span dimension")
        vec = np.asarray(v, dtype=np.int64).reshape(1, dim)
        order = 1
        while _keys((order * vec) % n)[0] not in keys:
            order += 1
        if order == 1:
            continue
        if len(keys) * order > cap:
            raise OracleCapError(f"span exceeds the oracle cap of {cap} elements")
        used.append(v)
        layers = [rows] + [(rows + j * vec) % n for j in range(1, order)]
        fresh = np.concatenate(layers[1:])
        keys.update(_keys(fresh))
        rows = np.concatenate(layers)
    return Span(rows, keys, tuple(used), dim)


def _space_size(n, dim, cap):
    size = n**dim
    if size > cap:
        raise OracleCapError(f"component of size {n}^{dim} exceeds the oracle cap")
    return size


# -- the ring by brute force ------------------------------------------------------


class BruteRing:
    """Word spaces and relation ideals per degree of the window."""

    def __init__(self, presentation: RingPresentation, cap: int = SPAN_CAP):
        coeff = presentation.coeff
        if not coeff.is_finite:
            raise PreconditionError("the oracle needs a finite coefficient ring")
        self.presentation = presentation
        self.monoid = presentation.monoid
        self.n = coeff.modulus
        self.coeff = coeff
        self.cap = cap
        self.window = self.monoid.enumerate_upto(presentation.bound)
        self.words = self._enumerate_words()
        self.index = {g: {w: i for i, w in enumerate(ws)} for g, ws in self.words.items()}
        self._ideal = {}

    def ideal_span(self, g) -> Span:
        """Span of the relation ideal in degree g, built on first use (cap failures are remembered)."""
        if g not in self._ideal:
            try:
                self._ideal[g] = self._ideal_in(g)
            except OracleCapError as exc:
                self._ideal[g] = exc
        got = self._ideal[g]
        if isinstance(got, OracleCapError):
            raise OracleCapError(str(got))
        return got

    def _enumerate_words(self):
        mon, p = self.monoid, self.presentation
        inwin = set(self.window)
        out = {g: [] for g in self.window}
        frontier = [((), mon.identity)]
        while frontier:
            nxt = []
            for w, d in frontier:
                out[d].append(w)
                for i, (_, gd) in enumerate(p.generators):
                    d2 = mon.compose(d, gd)
                    if d2 in inwin:
                        nxt.append((w + (i,), d2))
            frontier = nxt
        return {g: sorted(ws) for g, ws in out.items()}

    def _relations(self):
        p = self.presentation
        rels = [dict((w, c) for c, w in r) for r in p.relations if r]
        if p.commutative:
            for i, j in itertools.combinations(range(len(p.generators)), 2):
                rels.append({(i, j): 1, (j, i): -1})
        return rels

    @functools.cached_property
    def relations(self):
        return self._relations()

    def _ideal_in(self, g) -> Span:
        mon, p = self.monoid, self.presentation
        gens = []
        for rel in self.relations:
            d = p.word_degree(next(iter(rel)))
            for a, rest in mon.factorizations(g):
                b = mon.left_quotient(rest, d)
                if b is None:
                    continue
                for u in self.words[a]:
                    for v in self.words[b]:
                        vec = [0] * len(self.words[g])
                        for w, c in rel.items():
                            k = self.index[g][u + w + v]
                            vec[k] = (vec[k] + int(self.coeff(c))) % self.n
                        gens.append(vec)
        return brute_span(gens, self.n, len(self.words[g]), self.cap)

    def size(self, g) -> int:
        """Number of elements of ``A_g``."""
        return self.n ** len(self.words[g]) // len(self.ideal_span(g))

    def word_vector(self, g, terms):
        vec = [0] * len(self.words[g])
        for c, w in terms:
            vec[self.index[g][w]] = (vec[self.index[g][w]] + int(c)) % self.n
        return tuple(vec)


@functools.lru_cache(maxsize=32)
def brute_ring(presentation: RingPresentation) -> BruteRing:
    return BruteRing(presentation)


# -- free modules in word coordinates ----------------------------------------------


class BruteFree:
    """``F = sum A e_i``; a degree-g vector is a tuple over the words of every block."""

    def __init__(self, ring: BruteRing, degrees):
        self.ring = ring
        self.degrees = list(degrees)
        self._blocks = {}

    def blocks(self, g):
        if g not in self._blocks:
            mon = self.ring.monoid
            out, off = [], 0
            for i, d in enumerate(self.degrees):
                shift = mon.right_quotient(g, d)
                if shift is None or shift not in self.ring.words:
                    continue
                size = len(self.ring.words[shift])
                out.append((i, shift, off, size))
                off += size
            self._blocks[g] = out
        return self._blocks[g]

    def dim(self, g) -> int:
        return sum(b[3] for b in self.blocks(g))

    def zero_generators(self, g):
        """Generators of the zero vectors in degree g (relation ideals placed in each block)."""
        dim = self.dim(g)
        out = []
        for _, shift, off, size in self.blocks(g):
            for r in self.ring.ideal_span(shift).generators:
                vec = [0] * dim
                vec[off : off + size] = r
                out.append(tuple(vec))
        return out

    def left_multiply(self, word, g, vec):
        """``word * vec`` for ``vec`` of degree g, as a vector of degree ``d(word) g``."""
        ring = self.ring
        mon = ring.monoid
        d = ring.presentation.word_degree(word)
        h = mon.compose(d, g)
        if h not in ring.words:
            return None
        out = [0] * self.dim(h)
        tgt = {b[0]: b for b in self.blocks(h)}
        for i, shift, off, size in self.blocks(g):
            _, tshift, toff, _ = tgt[i]
            for k in range(size):
                c = vec[off + k]
                if c:
                    w = ring.words[shift][k]
                    j = toff + ring.index[tshift][word + w]
                    out[j] = (out[j] + c) % ring.n
        return h, tuple(out)

    def from_engine(self, v) -> tuple:
        """Word coordinates of an engine vector (basis words are words)."""
        eng = v.module
        ring = eng.ring
        out = [0] * self.dim(v.degree)
        mine = {b[0]: b for b in self.blocks(v.degree)}
        for b in eng.blocks(v.degree):
            _, shift, off, _ = mine[b.index]
            for c, w in zip(v.coords[b.offset : b.offset + b.size], ring.basis[b.shift]):
                j = off + self.ring.index[shift][w]
                out[j] = (out[j] + int(c)) % self.ring.n
        return tuple(out)

    def generated(self, vectors, extra=None, degrees=None) -> dict:
        """Per degree, the span of ``{w * v}`` for the degree-tagged ``vectors`` plus the zero vectors."""
        ring = self.ring
        window = ring.window if degrees is None else list(degrees)
        out = {}
        for g in window:
            gens = list(self.zero_generators(g))
            if extra is not None:
                gens += extra(g)
            out[g] = gens
        for d, vec in vectors:
            for g in window:
                a = ring.monoid.right_quotient(g, d)
                if a is None or a not in ring.words:
                    continue
                for w in ring.words[a]:
                    res = self.left_multiply(w, d, vec)
                    if res is not None:
                        out[g].append(res[1])
        return {g: brute_span(gs, ring.n, self.dim(g), ring.cap) for g, gs in out.items()}


class BruteModule:
    """``(N + Z) / Z`` in word coordinates, mirroring an engine module."""

    def __init__(self, module, degrees=None):
        self.engine = module
        self.ring = brute_ring(module.ring.presentation)
        self.free = BruteFree(self.ring, module.ambient.degrees)
        self.degrees = degrees
        den = [(v.degree, self.free.from_engine(v)) for v in module.denominator]
        self.zero = self.free.generated(den, degrees=degrees)
        if module._given_spans is not None:
            raise PreconditionError("the oracle rebuilds modules from generators only")
        if module.numerator is None:
            gens = [(d, self._basis(i)) for i, d in enumerate(self.free.degrees)]
        else:
            gens = [(v.degree, self.free.from_engine(v)) for v in module.numerator]
        self.generators = gens
        self.span = self.free.generated(gens, extra=lambda g: list(self.zero[g].generators), degrees=degrees)

    def _basis(self, i):
        d = self.free.degrees[i]
        vec = [0] * self.free.dim(d)
        for j, _, off, _ in self.free.blocks(d):
            if j == i:
                vec[off] = 1
        return tuple(vec)

    def size(self, g) -> int:
        return len(self.span[g]) // len(self.zero[g])

    def generated_by(self, vectors) -> dict:
        """Spans of the submodule generated by engine vectors (plus Z)."""
        tagged = [(v.degree, self.free.from_engine(v)) for v in vectors]
        return self.free.generated(tagged, extra=lambda g: list(self.zero[g].generators), degrees=self.degrees)

    def generates(self, vectors) -> bool:
        S = self.generated_by(vectors)
        return all(len(S[g]) == len(self.span[g]) for g in self.span) and all(
            S[g].keys <= self.span[g].keys for g in self.span
        )

    def radical(self) -> dict:
        """Spans of ``MM + Z`` by brute force."""
        ring = self.ring
        mon = ring.monoid
        p = ring.coeff.p if ring.coeff.kind == "Zpm" else 0
        out = {}
        for g in self.span:
            gens = list(self.zero[g].generators)
            if p:
                gens += [_mul(p, v, ring.n) for v in self.span[g].generators]
            for i, (_, dg) in enumerate(ring.presentation.generators):
                lower = mon.left_quotient(g, dg)
                if lower is None or lower not in self.span:
                    continue
                for v in self.span[lower].generators:
                    res = self.free.left_multiply((i,), lower, v)
                    gens.append(res[1])
            out[g] = brute_span(gens, ring.n, self.free.dim(g), ring.cap)
        return out


# -- public oracle operations ------------------------------------------------------


def enumerate_component(module, g) -> list:
    """One representative (word coordinates) for every element of ``M_g``."""
    if not module.ring.in_window(g):
        raise PreconditionError("degree outside the window")
    B = BruteModule(module, degrees=[g])
    _space_size(B.ring.n, B.free.dim(g), B.ring.cap)
    zero = B.zero[g].elements
    seen, reps = set(), []
    for v in sorted(B.span[g].elements):
        if v in seen:
            continue
        reps.append(v)
        seen.update(_add(v, z, B.ring.n) for z in zero)
    return reps


def brute_kernel(phi, g, target=None, cap: int | None = None) -> frozenset:
    """Every word-coordinate vector of ``source_g`` that ``phi`` sends into the target's zero set."""
    ring = brute_ring(phi.source.ring.presentation)
    src = BruteFree(ring, phi.source.degrees)
    tgt = BruteFree(ring, phi.target.degrees)
    dim = src.dim(g)
    _space_size(ring.n, dim, ring.cap if cap is None else cap)
    den = [] if target is None else [(v.degree, tgt.from_engine(v)) for v in target.denominator]
    zero = tgt.generated(den, degrees=[g])[g]
    images = [tgt.from_engine(v) for v in phi.images]
    # image of each source word coordinate
    columns = [None] * dim
    for i, shift, off, size in src.blocks(g):
        for k in range(size):
            _, img = tgt.left_multiply(ring.words[shift][k], phi.source.degrees[i], images[i])
            columns[off + k] = img
    out = []
    for vec in itertools.product(range(ring.n), repeat=dim):
        acc = (0,) * tgt.dim(g)
        for c, img in zip(vec, columns):
            if c:
                acc = _add(acc, _mul(c, img, ring.n), ring.n)
        if acc in zero:
            out.append(vec)
    return frozenset(out)


def brute_span_of(vectors, F_degrees_module, g) -> frozenset:
    """Word-coordinate span in degree g of the submodule generated by engine vectors."""
    ring = brute_ring(F_degrees_module.ring.presentation)
    F = BruteFree(ring, F_degrees_module.degrees)
    tagged = [(v.degree, F.from_engine(v)) for v in vectors]
    return F.generated(tagged, degrees=[g])[g].elements


def brute_minimal(omega, module, max_size: int = 12) -> bool:
    """No set obtained by dropping one element of ``omega`` generates M.

    Generation is monotone in the set, so checking the maximal proper
    subsets decides every proper subset.
    """
    omega = list(omega)
    if len(omega) > max_size:
        raise OracleCapError(f"brute minimality limited to {max_size} elements")
    B = BruteModule(module)
    if not B.generates(omega):
        raise PreconditionError("the set does not generate the module")
    return not any(B.generates(omega[:i] + omega[i + 1 :]) for i in range(len(omega)))


def enumerate_submodules(module, cap: int = 300, max_elements: int = 243) -> list:
    """Every graded submodule of M containing Z, as per-degree spans (word coordinates).

    Submodules are sums of cyclic ones, so the search adds one cyclic
    submodule at a time starting from Z.
    """
    B = BruteModule(module)
    ring = B.ring
    window = ring.window
    zero = {g: B.zero[g] for g in window}
    elements = [(g, v) for g in window for v in sorted(B.span[g].elements) if v not in zero[g]]
    if len(elements) > max_elements:
        raise OracleCapError(f"{len(elements)} nonzero word vectors, more than {max_elements}")

    def key(sub):
        return tuple(sub[h].keys for h in window)

    def add(base, extra):
        return {
            h: brute_span(list(base[h].generators) + list(extra[h]), ring.n, B.free.dim(h), ring.cap)
            for h in window
        }

    cyclic = {}
    for g, v in elements:
        gens = {h: [] for h in window}
        for h in window:
            a = ring.monoid.right_quotient(h, g)
            if a is None or a not in ring.words:
                continue
            for w in ring.words[a]:
                res = B.free.left_multiply(w, g, v)
                if res is not None:
                    gens[h].append(res[1])
        C = add(zero, gens)
        cyclic.setdefault(key(C), C)
    cyclic = list(cyclic.values())

    seen = {key(zero): zero}
    stack = [zero]
    while stack:
        sub = stack.pop()
        for C in cyclic:
            if all(C[h].keys <= sub[h].keys for h in window):
                continue
            new = add(sub, {h: C[h].generators for h in window})
            k = key(new)
            if k not in seen:
                if len(seen) >= cap:
                    raise OracleCapError(f"more than {cap} submodules")
                seen[k] = new
                stack.append(new)
    return list(seen.values())


def superfluous_check(module) -> tuple:
    """``(submodules tested, violations)`` for: H + MM = M implies H = M."""
    B = BruteModule(module)
    rad = B.radical()
    n = B.ring.n
    subs = enumerate_submodules(module)
    bad = 0
    for H in subs:
        full = all(
            len(brute_span(list(H[g].generators) + list(rad[g].generators), n, B.free.dim(g), B.ring.cap))
            == len(B.span[g])
            for g in B.ring.window
        )
        if full and any(len(H[g]) != len(B.span[g]) for g in B.ring.window):
            bad += 1
    return len(subs), bad


def enumerate_left_ideals(ring: GradedRing, F, cap: int = 5000):
    """Generating lists (engine vectors in the rank-one free module F) of every graded left ideal."""
    from .gmodule import GradedModule

    A = GradedModule.free(F)
    B = brute_ring(ring.presentation)
    out = []
    subs = enumerate_submodules(A, cap=cap, max_elements=cap)
    for sub in subs:
        gens = []
        for g in ring.window:
            for vec in sub[g].generators:
                terms = [(c, B.words[g][k], 0) for k, c in enumerate(vec) if c]
                if terms:
                    gens.append(F.from_terms(terms, degree=g))
        out.append(gens)
    return out


# -- random instances --------------------------------------------------------------


@dataclass(frozen=True)
class Caps:
    max_generators: int = 2
    max_relations: int = 2
    max_total_degree: int = 4
    max_module_rank: int = 2
    max_words: int = 8  # per degree, keeps brute-force spans small


@dataclass
class Instance:
    ring: GradedRing
    module: object
    generating_sets: list = field(default_factory=list)
    label: str = ""


COEFFS = (CoefficientRing.prime_field(2), CoefficientRing.prime_field(3), CoefficientRing.prime_power(2, 2))


class InstanceGenerator:
    """Deterministic stream of small rings, modules and redundant generating sets."""

    def __init__(self, seed: int = 0, caps: Caps = Caps()):
        self.seed = seed
        self.caps = caps
        self.rng = random.Random(seed)

    # rings
    def _presentation(self):
        rng, caps = self.rng, self.caps
        coeff = rng.choice(COEFFS)
        kind = rng.choice(["n1", "n1", "n2", "word"])
        if kind == "n1":
            mon = Monoid.natvec(1)
            ngen = rng.randint(1, caps.max_generators)
            degs = [(rng.choice([1, 1, 2]),) for _ in range(ngen)]
            top = rng.randint(2, caps.max_total_degree)
            if coeff.kind == "Zpm":
                top = min(top, 3)
            bound = (top,)
            commutative = rng.random() < 0.3
        elif kind == "n2":
            mon = Monoid.natvec(2, rng.choice(["grlex", "grevlex", "lex"]))
            degs = [(1, 0), (0, 1)][: rng.randint(1, 2)]
            a = rng.randint(1, 2)
            bound = (a, rng.randint(1, max(1, min(2, caps.max_total_degree - a))))
            commutative = rng.random() < 0.6
        else:
            mon = Monoid.word("xy")
            degs = [rng.choice(["x", "y"]) for _ in range(rng.randint(1, caps.max_generators))]
            bound = rng.choice(["yy", "xy", "xyx"]) if caps.max_total_degree >= 3 else "yy"
            commutative = False
        gens = tuple((f"x{i}", d) for i, d in enumerate(degs))
        if commutative and any(mon.compose(a, b) != mon.compose(b, a) for _, a in gens for _, b in gens):
            commutative = False
        probe = RingPresentation(mon, coeff, gens, (), bound, commutative)
        rels = []
        window = [g for g in mon.enumerate_upto(bound) if g != mon.identity]
        words = _words_by_degree(probe)
        for _ in range(rng.randint(0, caps.max_relations)):
            cand = [g for g in window if words.get(g)]
            if not cand:
                break
            g = rng.choice(cand)
            ws = words[g]
            chosen = rng.sample(ws, rng.randint(1, min(2, len(ws))))
            rels.append(tuple((rng.randrange(1, coeff.modulus), w) for w in chosen))
        return RingPresentation(mon, coeff, gens, tuple(rels), bound, commutative)

    def ring(self) -> GradedRing:
        while True:
            p = self._presentation()
            words = _words_by_degree(p)
            if max(len(v) for v in words.values()) <= self._limit(p.coeff):
                return GradedRing(p)

    # modules
    def _random_element(self, ring, g, nonzero=False):
        R = ring.coeff
        n = ring.rank(g)
        if n == 0:
            return None
        for _ in range(10):
            coords = R.array([self.rng.randrange(R.modulus) for _ in range(n)])
            a = ring.element(g, coords)
            if not nonzero or not a.is_zero():
                return a
        return a

    def _random_vector(self, F, g):
        """Random homogeneous vector of degree g (possibly zero)."""
        v = F.zero(g)
        for i, d in enumerate(F.degrees):
            shift = F.ring.monoid.right_quotient(g, d)
            if shift is None:
                continue
            a = self._random_element(F.ring, shift)
            if a is not None:
                v = v + F.act(a, F.basis_vector(i))
        return v

    def _limit(self, coeff) -> int:
        return {2: self.caps.max_words + 2, 3: self.caps.max_words - 1}.get(coeff.modulus, self.caps.max_words - 2)

    def _fits(self, ring, degrees) -> bool:
        """Word-coordinate dimension of every free component stays within the oracle limit."""
        words = _words_by_degree(ring.presentation)
        mon = ring.monoid
        for g in ring.window:
            dim = 0
            for d in degrees:
                shift = mon.right_quotient(g, d)
                if shift is not None:
                    dim += len(words.get(shift, []))
            if dim > self._limit(ring.coeff):
                return False
        return True

    def module(self, ring: GradedRing):
        from .gmodule import FreeModule, GradedModule

        rng = self.rng
        e = ring.monoid.identity
        low = [e] + [d for d in ring.gen_degrees if ring.in_window(d)]
        while True:
            rank = rng.randint(1, self.caps.max_module_rank)
            degs = ring.monoid.sorted(rng.choice(low) for _ in range(rank))
            if self._fits(ring, degs):
                break
        F = FreeModule(ring, degs)
        window = ring.window
        if rng.random() < 0.7:
            rels = []
            for _ in range(rng.randint(0, 2)):
                g = rng.choice(window)
                if F.rank(g):
                    v = self._random_vector(F, g)
                    if not v.is_zero():
                        rels.append(v)
            return GradedModule(F, None, rels, "M")
        gens = []
        for _ in range(rng.randint(1, 3)):
            g = rng.choice(window)
            if F.rank(g):
                v = self._random_vector(F, g)
                if not v.is_zero():
                    gens.append(v)
        if not gens:
            gens = [F.basis_vector(0)]
        return GradedModule(F, gens, (), "M")

    def natural_generators(self, M):
        return M.ambient.basis_vectors() if M.numerator is None else list(M.numerator)

    def redundant_set(self, M, base=None):
        """Generators perturbed by elements of MM, shuffled, plus random combinations."""
        rng = self.rng
        base = list(base if base is not None else self.natural_generators(M))
        F, ring, R = M.ambient, M.ring, M.coeff
        e = ring.monoid.identity
        out = []
        for v in base:
            u = rng.choice([s for s in range(1, R.modulus) if R.is_unit(s)])
            w = v.scale(u)
            for x in base:
                shift = ring.monoid.right_quotient(v.degree, x.degree)
                if shift is None or rng.random() < 0.5:
                    continue
                a = self._random_element(ring, shift)
                if a is None or (shift == e and R.is_unit(a.coords[0])):
                    continue
                w = w + F.act(a, x)
            out.append(w)
        for _ in range(rng.randint(1, 3)):
            g = rng.choice(ring.window)
            acc = F.zero(g)
            for x in base:
                shift = ring.monoid.right_quotient(g, x.degree)
                if shift is None:
                    continue
                a = self._random_element(ring, shift)
                if a is not None:
                    acc = acc + F.act(a, x)
            out.append(acc)
        rng.shuffle(out)
        return out

    def instance(self, n_sets: int = 3) -> Instance:
        ring = self.ring()
        M = self.module(ring)
        sets = [self.redundant_set(M) for _ in range(n_sets)]
        return Instance(ring, M, sets, ring.describe())

    def random_instances(self, count: int, n_sets: int = 3):
        for _ in range(count):
            yield self.instance(n_sets)

    def split_projective(self):
        """Image of a graded idempotent ``U^-1 P U`` on a free module; returns ``(module, rank)``."""
        from .gmodule import FreeModule, GradedModule

        rng = self.rng
        ring = self.ring()
        R, mon = ring.coeff, ring.monoid
        low = [mon.identity] + [d for d in ring.gen_degrees if ring.in_window(d)]
        while True:
            n = rng.randint(2, 3)
            degs = mon.sorted(rng.choice(low) for _ in range(n))[::-1]
            if self._fits(ring, degs):
                break
        F = FreeModule(ring, degs)
        k = rng.randint(1, n - 1)
        keep = sorted(rng.sample(range(n), k))
        units = [rng.choice([s for s in range(1, R.modulus) if R.is_unit(s)]) for _ in range(n)]
        # upper triangular U: row i is u_i e_i + sum_{j>i} a_ij e_j
        upper = {}
        for i in range(n):
            for j in range(i + 1, n):
                shift = mon.right_quotient(degs[i], degs[j])
                if shift is not None:
                    upper[(i, j)] = self._random_element(ring, shift)
        rows = []
        for i in range(n):
            v = F.basis_vector(i).scale(units[i])
            for j in range(i + 1, n):
                a = upper.get((i, j))
                if a is not None:
                    v = v + F.act(a, F.basis_vector(j))
            rows.append(v)
        # U^-1 P U sends e_i to sum_k (U^-1)_{ik} [k kept] row_k; U^-1 is computed by back substitution.
        inv = _unitriangular_inverse(F, upper, units, n)
        images = []
        for i in range(n):
            acc = F.zero(degs[i])
            for kk in keep:
                c = inv.get((i, kk))
                if c is not None:
                    acc = acc + F.act(c, rows[kk])
            images.append(acc)
        nonzero = [v for v in images if not v.is_zero()]
        return GradedModule(F, nonzero, (), "P"), k


def _unitriangular_inverse(F, upper, units, n):
    """Entries of ``U^-1`` for the upper triangular U with diagonal ``units``."""
    ring, R, mon = F.ring, F.coeff, F.ring.monoid
    inv = {}
    degs = F.degrees
    for i in range(n):
        inv[(i, i)] = ring.scalar(R.inverse(units[i]))
    for gap in range(1, n):
        for i in range(n - gap):
            j = i + gap
            shift = mon.right_quotient(degs[i], degs[j])
            if shift is None:
                continue
            # sum_k inv[i,k] U[k,j] = 0 for k in i..j
            acc = ring.zero(shift)
            for k in range(i, j):
                a, b = inv.get((i, k)), upper.get((k, j))
                if a is None or b is None:
                    continue
                acc = _add_elements(ring, acc, ring.multiply(a, b))
            inv[(i, j)] = ring.element(shift, R.scale(R(-R.inverse(units[j])), acc.coords))
    return inv


def _add_elements(ring, a, b):
    return ring.element(a.degree, ring.coeff.reduce(a.coords + b.coords))


def _words_by_degree(p: RingPresentation) -> dict:
    mon = p.monoid
    inwin = set(mon.enumerate_upto(p.bound))
    out = {}
    frontier = [((), mon.identity)]
    while frontier:
        nxt = []
        for w, d in frontier:
            out.setdefault(d, []).append(w)
            for i, (_, gd) in enumerate(p.generators):
                d2 = mon.compose(d, gd)
                if d2 in inwin:
                    nxt.append((w + (i,), d2))
        frontier = nxt
    return out
