"""Property suites: engine results against brute force and against each other.

Each ``check_*`` function takes one instance and returns a list of problem
strings (empty means the property held).  :func:`run_suites` drives them over
a workspace plus a seeded stream of random instances.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from . import gmodule, oracle, resolve
from .errors import OracleCapError
from .gring import check_local_axioms


BRUTE_KERNEL_CAP = 2**12


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: int = 0
    skipped: int = 0
    messages: list = field(default_factory=list)

    def record(self, problems, label=""):
        self.checked += 1
        if problems:
            self.failures += 1
            self.messages.extend(f"{label}: {p}" if label else p for p in problems)


def check_locality(ring, samples=20, seed=0) -> list:
    report = check_local_axioms(ring, samples=samples, seed=seed)
    return [f"{c.name}: {c.counterexample}" for c in report.failures()]


def degree_multiset(vectors) -> Counter:
    return Counter(v.degree for v in vectors)


def check_minimize_invariance(M, sets, rng: random.Random, permutations: int = 5) -> list:
    """Every minimized permutation of every set has the same size and degree multiset."""
    seen = set()
    for S in sets:
        for _ in range(permutations):
            perm = list(S)
            rng.shuffle(perm)
            m = gmodule.minimize(perm, M)
            if not gmodule.is_minimal(m, M):
                return ["minimize returned a non-minimal set"]
            seen.add((len(m), tuple(sorted(degree_multiset(m).items(), key=lambda t: M.ring.monoid.key(t[0])))))
    if len(seen) > 1:
        return [f"minimized sizes/degrees differ: {sorted(seen)}"]
    return []


def check_minimality_oracle(M, sets) -> list:
    """Residue criterion equals exhaustive subset testing; generator count equals residue dimension."""
    problems = []
    mg = gmodule.minimal_generators(M)
    total = sum(M.top_dimension(g) for g in M.window)
    if len(mg) != total:
        problems.append(f"{len(mg)} minimal generators, residue dimension {total}")
    for S in [mg] + list(sets) + [gmodule.minimize(s, M) for s in sets]:
        if len(S) > 12:
            continue
        fast = gmodule.is_minimal(S, M)
        slow = oracle.brute_minimal(S, M)
        if fast != slow:
            problems.append(f"is_minimal={fast} but brute force says {slow} for {len(S)} elements")
    return problems


def check_nakayama(M, exhaustive: bool = True) -> list:
    problems = []
    try:
        w = gmodule.nakayama_witness(M)
    except Exception as exc:  # the witness check raises on failure
        return [str(exc)]
    if (w is None) != M.is_zero():
        problems.append("witness disagrees with zero test")
    if exhaustive:
        _, bad = oracle.superfluous_check(M)
        if bad:
            problems.append(f"{bad} proper submodules H with H + MM = M")
    return problems


def check_resolution_invariants(M, steps: int = 3, brute: bool = True, stats: Counter | None = None) -> list:
    """Minimality, complex, exactness, and kernels against brute force.

    ``stats`` (if given) counts brute-force kernel comparisons made and skipped.
    """
    stats = Counter() if stats is None else stats
    res = resolve.minimal_resolution(M, steps)
    problems = resolve.check_resolution(res)
    if res.cover is not None and not res.cover.kernel_in_radical():
        problems.append("cover kernel not in MF")
    dims = resolve.tor_dims(M, resolution=res)
    if dims != res.betti().entries:
        problems.append("Tor dimensions differ from the Betti table")
    for g in M.window:
        if res.frees and res.betti()[(0, g)] != M.top_dimension(g):
            problems.append(f"beta_0 differs from dim (M/MM) in degree {g}")
    if brute and M.coeff.is_finite and res.cover is not None:
        cover_map = gmodule.GradedMorphism(res.cover.free, M.ambient, res.cover.generators)
        stages = [(cover_map, M, res.kernels[0])]
        for k, phi in enumerate(res.differentials):
            stages.append((phi, None, res.kernels[k + 1]))
        for phi, target, K in stages:
            gens = gmodule.minimal_generators(K.module())
            for g in M.window:
                try:
                    bk = oracle.brute_kernel(phi, g, target, cap=BRUTE_KERNEL_CAP)
                    span = oracle.brute_span_of(gens, phi.source, g)
                except OracleCapError:
                    stats["skipped"] += 1
                    continue
                stats["compared"] += 1
                if bk != span:
                    problems.append(f"kernel differs from brute force in degree {g}")
    return problems


def check_exchange(M, T1, rng: random.Random) -> list:
    """Exchanging a minimal set into a generating set keeps it generating."""
    T2 = gmodule.minimal_generators(M)
    T1 = gmodule.minimize(T1, M)
    cur = list(T1)
    for i, eta in enumerate(T2):
        if any(M.same(eta, xi) for xi in cur):
            continue
        cur, _ = gmodule.exchange_step(cur, T2, i, M)
        if not M.generates(cur):
            return ["exchange step broke generation"]
    if len(T2) > len(T1):
        return ["minimal set larger than the set it was exchanged into"]
    return []


def check_split_projective(M, rank: int) -> list:
    basis = resolve.is_free(M)
    if basis is None:
        return ["split projective not reported free"]
    if len(basis) != rank:
        return [f"free basis of size {len(basis)}, expected {rank}"]
    return []


def check_two_covers(M, rng: random.Random, gen: "oracle.InstanceGenerator") -> list:
    """A cover on a reshuffled minimal set lifts to an isomorphism onto the canonical cover."""
    canonical = resolve.projective_cover(M)
    other_gens = gmodule.minimize(gen.redundant_set(M, canonical.generators), M)
    other = resolve.projective_cover(M, other_gens)
    lift = resolve.cover_lift(other.free, other.generators, canonical)
    if not lift.is_isomorphism():
        return ["lift between two covers is not injective"]
    for g in M.window:
        if other.free.rank(g) != canonical.free.rank(g):
            return ["cover ranks differ"]
    return []


def run_suites(ws, seed: int, samples: int, steps: int = 4) -> list:
    rng = random.Random(seed)
    gen = oracle.InstanceGenerator(seed)
    out = {n: SuiteResult(n) for n in ("locality", "minimality", "invariance", "nakayama", "resolution", "exchange")}

    out["locality"].record(check_locality(ws.ring, samples=samples, seed=seed), "workspace")
    for name in ws.modules:
        M = ws.module(name)
        out["resolution"].record(
            check_resolution_invariants(M, steps, brute=M.coeff.is_finite), name
        )
        try:
            out["nakayama"].record(check_nakayama(M, exhaustive=M.coeff.is_finite), name)
        except OracleCapError:
            out["nakayama"].skipped += 1
        if M.coeff.is_finite:
            try:
                sets = [gen.redundant_set(M) for _ in range(2)]
                out["minimality"].record(check_minimality_oracle(M, sets), name)
            except OracleCapError:
                out["minimality"].skipped += 1

    for k, inst in enumerate(gen.random_instances(samples)):
        M = inst.module
        label = f"instance {k}"
        out["locality"].record(check_locality(inst.ring, seed=seed + k), label)
        out["invariance"].record(check_minimize_invariance(M, inst.generating_sets, rng), label)
        try:
            out["minimality"].record(check_minimality_oracle(M, inst.generating_sets), label)
            out["nakayama"].record(check_nakayama(M), label)
            out["resolution"].record(check_resolution_invariants(M, min(steps, 3)), label)
        except OracleCapError:
            out["minimality"].skipped += 1
        out["exchange"].record(check_exchange(M, inst.generating_sets[0], rng), label)
    return list(out.values())
