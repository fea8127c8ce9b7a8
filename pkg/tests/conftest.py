import pytest

from grlocal import CoefficientRing, GradedRing, Monoid, RingPresentation, load, parse, shipped_rings

RINGS = shipped_rings()


def presentation(monoid, coeff, gens, rels=(), bound=None, commutative=False):
    """Presentation from ``gens = [(sym, deg)]`` and relations as ``[(coef, "xy"), ...]`` strings."""
    syms = [s for s, _ in gens]
    rel_terms = tuple(tuple((c, tuple(syms.index(ch) for ch in w)) for c, w in rel) for rel in rels)
    return RingPresentation(monoid, coeff, tuple(gens), rel_terms, bound, commutative)


def make_ring(*args, **kw):
    return GradedRing(presentation(*args, **kw))


@pytest.fixture(scope="session")
def workspaces():
    return {name: load(path) for name, path in RINGS.items()}


@pytest.fixture(scope="session")
def dual():
    """F2[x]/(x^2), bound 4."""
    return make_ring(Monoid.natvec(1), CoefficientRing.prime_field(2), [("x", (1,))], [[(1, "xx")]], (4,), True)


@pytest.fixture(scope="session")
def poly2():
    """F2[x,y] with the standard grading, bound 3."""
    return parse(
        "monoid natvec 1 order grlex\ncoeff Fp 2\nbound 3\ncommutative true\ngen x 1\ngen y 1\n"
    ).ring


@pytest.fixture(scope="session")
def koszul_ring():
    """F2[x,y] bigraded, bound (3,3)."""
    return make_ring(
        Monoid.natvec(2), CoefficientRing.prime_field(2), [("x", (1, 0)), ("y", (0, 1))], (), (3, 3), True
    )


@pytest.fixture(scope="session")
def z4x():
    """Z/4[x], bound 2."""
    return make_ring(Monoid.natvec(1), CoefficientRing.prime_power(2, 2), [("x", (1,))], (), (2,), True)


@pytest.fixture(scope="session")
def field_only():
    return make_ring(Monoid.natvec(1), CoefficientRing.prime_field(2), [], (), (2,), True)


# -- acceptance summary -------------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "seconds": 0.0, "ran": False})
    if report.when == "call":
        entry["ran"] = True
        entry["seconds"] += report.duration
    if report.failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        verdict = "PASS" if e["passed"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {e['title']}  ({e['seconds']:.1f}s)")
