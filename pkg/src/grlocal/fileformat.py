"""Line-based ring/module description files.

::

    monoid natvec 2 order grlex
    coeff Fp 2
    bound (2,2)
    commutative true
    gen x (1,0)
    gen y (0,1)
    rel x*x
    module k
    freebasis e (0,0)
    relbasis f1 (1,0) f2 (0,1)
    send f1 = x*e
    send f2 = y*e
    genset S k
    deg (0,0): e

``subgen EXPR`` inside a module block adds a numerator generator, turning the
module into the submodule generated by those vectors (modulo the relations).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .coeff import CoefficientRing, parse_coefficient_ring
from .errors import PreconditionError
from .gring import GradedRing, RingPresentation
from .monoid import Degree, Monoid, parse_order


class ParseError(PreconditionError):
    def __init__(self, message, line=0, column=0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


# -- expressions ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|([-+*^]))")


def parse_expression(text: str, offset: int = 0):
    """Terms ``[(Fraction coefficient, [symbol, ...]), ...]`` of a sum of products.

    ``offset`` shifts reported columns (1-based) to match the source line.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", column=offset + pos + 1)
        kind = "num" if m.group(1) else "sym" if m.group(2) else "op"
        tokens.append((kind, m.group(m.lastindex), offset + m.start(m.lastindex) + 1))
        pos = m.end()
    if not tokens:
        raise ParseError("empty expression", column=offset + 1)
    terms = []
    i = 0
    sign = 1
    if tokens[0][1] in "+-" and tokens[0][0] == "op":
        sign = -1 if tokens[0][1] == "-" else 1
        i = 1
    while True:
        coef, syms = Fraction(sign), []
        expect_factor = True
        while expect_factor:
            if i >= len(tokens):
                raise ParseError("expression ends where a factor was expected", column=offset + len(text) + 1)
            kind, val, col = tokens[i]
            if kind == "num":
                if "/" in val:
                    n, d = val.split("/")
                    if int(d) == 0:
                        raise ParseError("zero denominator", column=col)
                    coef *= Fraction(int(n), int(d))
                else:
                    coef *= int(val)
                i += 1
            elif kind == "sym":
                i += 1
                power = 1
                if i < len(tokens) and tokens[i][1] == "^":
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                        raise ParseError("exponent must be a nonnegative integer", column=tokens[i][2])
                    power = int(tokens[i + 1][1])
                    i += 2
                syms.extend([(val, col)] * power)
            else:
                raise ParseError(f"unexpected {val!r}", column=col)
            if i < len(tokens) and tokens[i][1] == "*":
                i += 1
            else:
                expect_factor = False
        terms.append((coef, syms))
        if i >= len(tokens):
            break
        kind, val, col = tokens[i]
        if val not in "+-" or kind != "op":
            raise ParseError(f"expected '+' or '-', got {val!r}", column=col)
        sign = -1 if val == "-" else 1
        i += 1
    return terms


def _canonical_terms(coeff: CoefficientRing, terms):
    """Combine like terms, drop zeros and sort; ``terms`` are ``(c, word, index)``."""
    acc = {}
    for c, w, k in terms:
        key = (k, w)
        acc[key] = coeff(acc.get(key, coeff.zero) + coeff(c))
    out = [(c, w, k) for (k, w), c in acc.items() if c != 0]
    out.sort(key=lambda t: (t[2], len(t[1]), t[1]))
    return tuple(out)


def _format_scalar(coeff: CoefficientRing, c) -> str:
    if coeff.kind == "Q":
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def format_terms(coeff: CoefficientRing, terms, symbols, basis=None) -> str:
    """Inverse of the expression parser for canonical terms ``(c, word, index)``."""
    if not terms:
        return "0"
    pieces = []
    for c, w, k in terms:
        neg = coeff.kind == "Q" and c < 0
        mag = -c if neg else c
        factors = [symbols[i] for i in w]
        if basis is not None:
            factors.append(basis[k])
        if mag != 1 or not factors:
            factors.insert(0, _format_scalar(coeff, mag))
        body = "*".join(factors)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


# -- workspace ----------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    freebasis: tuple = ()  # ((name, degree), ...)
    relbasis: tuple = ()
    sends: tuple = ()  # ((relname, terms), ...); terms are (c, word, freebasis index)
    subgens: tuple = ()  # (terms, ...)


@dataclass(frozen=True)
class GensetDecl:
    name: str
    module: str
    vectors: tuple = ()  # ((degree, terms), ...)


@dataclass
class Workspace:
    presentation: RingPresentation
    modules: dict = field(default_factory=dict)
    gensets: dict = field(default_factory=dict)
    _ring: GradedRing | None = field(default=None, compare=False, repr=False)
    _built: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def ring(self) -> GradedRing:
        if self._ring is None:
            self._ring = GradedRing(self.presentation)
        return self._ring

    def module(self, name: str):
        """The named module as a :class:`GradedModule` (cached)."""
        from .gmodule import FreeModule, GradedModule, GradedMorphism

        if name not in self.modules:
            raise PreconditionError(f"unknown module {name!r}")
        if name not in self._built:
            decl = self.modules[name]
            ring = self.ring
            F0 = FreeModule(ring, [d for _, d in decl.freebasis], [n for n, _ in decl.freebasis])
            rel_images = []
            sends = dict(decl.sends)
            for rname, d in decl.relbasis:
                terms = sends.get(rname, ())
                rel_images.append(F0.from_terms(terms, degree=d) if terms else F0.zero(d))
            F1 = FreeModule(ring, [d for _, d in decl.relbasis], [n for n, _ in decl.relbasis])
            phi = GradedMorphism(F1, F0, rel_images)
            if decl.subgens:
                num = [F0.from_terms(t) for t in decl.subgens]
                M = GradedModule(F0, num, phi.images, name)
            else:
                M = GradedModule.coker(phi, name)
            M.presentation = phi
            self._built[name] = M
        return self._built[name]

    def genset(self, name: str):
        if name not in self.gensets:
            raise PreconditionError(f"unknown generating set {name!r}")
        decl = self.gensets[name]
        M = self.module(decl.module)
        return M, [M.ambient.from_terms(t, degree=d) if t else M.ambient.zero(d) for d, t in decl.vectors]

    def to_text(self) -> str:
        p = self.presentation
        mon, coeff = p.monoid, p.coeff
        lines = []
        if mon.kind == "natvec":
            lines.append(f"monoid natvec {mon.rank} order {mon.order.value}")
        else:
            lines.append(f"monoid word {mon.alphabet} order {mon.order.value}")
        lines.append(f"coeff {coeff.describe()}")
        lines.append(f"bound {mon.format(p.bound)}")
        lines.append(f"commutative {'true' if p.commutative else 'false'}")
        syms = p.symbols
        for s, d in p.generators:
            lines.append(f"gen {s} {mon.format(d)}")
        for rel in p.relations:
            terms = tuple((c, w, 0) for c, w in rel)
            lines.append(f"rel {format_terms(coeff, terms, syms)}")
        for m in self.modules.values():
            lines.append(f"module {m.name}")
            names = [n for n, _ in m.freebasis]
            if m.freebasis:
                lines.append("freebasis " + "  ".join(f"{n} {mon.format(d)}" for n, d in m.freebasis))
            if m.relbasis:
                lines.append("relbasis " + "  ".join(f"{n} {mon.format(d)}" for n, d in m.relbasis))
            for r, terms in m.sends:
                lines.append(f"send {r} = {format_terms(coeff, terms, syms, names)}")
            for terms in m.subgens:
                lines.append(f"subgen {format_terms(coeff, terms, syms, names)}")
        for gs in self.gensets.values():
            names = [n for n, _ in self.modules[gs.module].freebasis]
            lines.append(f"genset {gs.name} {gs.module}")
            for d, terms in gs.vectors:
                lines.append(f"deg {mon.format(d)}: {format_terms(coeff, terms, syms, names)}")
        return "\n".join(lines) + "\n"


# -- parser ---------------------------------------------------------------------------

_DEGREE = r'(\(\s*\d+(?:\s*,\s*\d+)*\s*\)|"[^"]*"|\d+)'


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.monoid = None
        self.coeff = None
        self.bound = None
        self.commutative = False
        self.gens = []
        self.rels = []
        self.modules = {}
        self.gensets = {}
        self.current_module = None
        self.current_genset = None

    def fail(self, msg, ln, col=1):
        raise ParseError(msg, ln, col)

    def degree(self, text, ln, col):
        if self.monoid is None:
            self.fail("a 'monoid' line must come before any degree", ln, col)
        try:
            d = self.monoid.parse(text)
        except PreconditionError as exc:
            raise ParseError(str(exc), ln, col) from None
        if self.bound is not None and not self.monoid.within(d, self.bound):
            self.fail(f"degree {self.monoid.format(d)} out of bound {self.monoid.format(self.bound)}", ln, col)
        return d

    def word_degree(self, w):
        d = self.monoid.identity
        for i in w:
            d = self.monoid.compose(d, self.gens[i][1])
        return d

    def terms(self, text, ln, col, basis=None, what="expression"):
        """Parse an expression into canonical ``(c, word, index)`` terms and their degree."""
        if self.coeff is None:
            self.fail("a 'coeff' line must come before any expression", ln, col)
        try:
            raw = parse_expression(text, offset=col - 1)
        except ParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[-1], ln, exc.column) from None
        symbols = {s: i for i, (s, _) in enumerate(self.gens)}
        bindex = {n: i for i, (n, _) in enumerate(basis)} if basis is not None else {}
        out, degs = [], []
        for c, syms in raw:
            word, k = [], None
            for j, (s, scol) in enumerate(syms):
                if s in symbols:
                    if k is not None:
                        self.fail(f"generator {s} after the basis element", ln, scol)
                    word.append(symbols[s])
                elif s in bindex:
                    if k is not None or j != len(syms) - 1:
                        self.fail(f"basis element {s} must be the last factor", ln, scol)
                    k = bindex[s]
                else:
                    self.fail(f"unknown symbol {s!r}", ln, scol)
            if basis is not None and k is None:
                self.fail(f"term without a basis element in {what}", ln, col)
            try:
                cval = self.coeff.parse(str(c)) if c.denominator == 1 else self.coeff(c)
            except PreconditionError as exc:
                raise ParseError(str(exc), ln, col) from None
            word = tuple(word)
            d = self.word_degree(word)
            if k is not None:
                d = self.monoid.compose(d, basis[k][1])
            if d not in degs:
                degs.append(d)
            out.append((cval, word, k or 0))
        if len(degs) > 1:
            shown = " and ".join(self.monoid.format(d) for d in degs)
            self.fail(f"inhomogeneous {what}: degrees {shown}", ln, col)
        return _canonical_terms(self.coeff, out), (degs[0] if degs else None)

    def named_degrees(self, rest, ln, col):
        out = []
        pattern = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s+" + _DEGREE)
        pos = 0
        while rest[pos:].strip():
            m = pattern.match(rest, pos)
            if not m:
                self.fail("expected 'name degree' pairs", ln, col + pos)
            out.append((m.group(1), self.degree(m.group(2), ln, col + m.start(2))))
            pos = m.end()
        return tuple(out)

    def module_decl(self, ln):
        if self.current_module is None:
            self.fail("module content before any 'module' line", ln)
        return self.modules[self.current_module]

    def run(self) -> Workspace:
        for ln, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            stripped = line.lstrip()
            indent = len(line) - len(stripped)
            head, _, rest = stripped.partition(" ")
            col = indent + len(head) + 2  # column where ``rest`` starts
            handler = getattr(self, "do_" + head, None)
            if handler is None:
                self.fail(f"unknown directive {head!r}", ln, indent + 1)
            handler(rest, ln, col)
        return self.finish()

    # directives
    def do_monoid(self, rest, ln, col):
        if self.monoid is not None:
            self.fail("duplicate 'monoid' line", ln)
        parts = rest.split()
        order = None
        if len(parts) >= 4 and parts[-2] == "order":
            order = parts[-1]
            parts = parts[:-2]
        try:
            if len(parts) == 2 and parts[0] == "natvec" and parts[1].isdigit():
                self.monoid = Monoid.natvec(int(parts[1]), order or "grlex")
            elif len(parts) == 2 and parts[0] == "word":
                self.monoid = Monoid.word(parts[1], parse_order(order or "deglex"))
            else:
                self.fail("expected 'monoid natvec K [order O]' or 'monoid word ALPHABET [order deglex]'", ln, col)
        except ParseError:
            raise
        except PreconditionError as exc:
            raise ParseError(str(exc), ln, col) from None

    def do_coeff(self, rest, ln, col):
        if self.coeff is not None:
            self.fail("duplicate 'coeff' line", ln)
        try:
            self.coeff = parse_coefficient_ring(rest)
        except PreconditionError as exc:
            raise ParseError(str(exc), ln, col) from None

    def do_bound(self, rest, ln, col):
        if self.bound is not None:
            self.fail("duplicate 'bound' line", ln)
        self.bound = self.degree(rest.strip(), ln, col)

    def do_commutative(self, rest, ln, col):
        if rest.strip() not in ("true", "false"):
            self.fail("expected 'commutative true' or 'commutative false'", ln, col)
        self.commutative = rest.strip() == "true"

    def do_gen(self, rest, ln, col):
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s+" + _DEGREE + r"\s*", rest)
        if not m:
            self.fail("expected 'gen SYMBOL DEGREE'", ln, col)
        sym = m.group(1)
        if any(s == sym for s, _ in self.gens):
            self.fail(f"duplicate generator symbol {sym!r}", ln, col)
        if self.bound is None:
            self.fail("a 'bound' line must come before generators", ln, col)
        d = self.degree(m.group(2), ln, col + m.start(2))
        if d == self.monoid.identity:
            self.fail(f"generator {sym} has the neutral degree; grading must be positive", ln, col)
        self.gens.append((sym, d))

    def do_rel(self, rest, ln, col):
        if self.rels_locked():
            self.fail("relations must come before modules", ln)
        terms, d = self.terms(rest, ln, col, what="relation")
        if d is not None and not self.monoid.within(d, self.bound):
            self.fail(f"relation degree {self.monoid.format(d)} out of bound", ln, col)
        self.rels.append(tuple((c, w) for c, w, _ in terms))

    def rels_locked(self):
        return bool(self.modules)

    def do_module(self, rest, ln, col):
        name = rest.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            self.fail("expected 'module NAME'", ln, col)
        if name in self.modules:
            self.fail(f"duplicate module {name!r}", ln, col)
        self.modules[name] = ModuleDecl(name)
        self.current_module = name
        self.current_genset = None

    def _replace(self, decl, **kw):
        from dataclasses import replace

        self.modules[decl.name] = replace(decl, **kw)

    def do_freebasis(self, rest, ln, col):
        decl = self.module_decl(ln)
        if decl.sends or decl.subgens:
            self.fail("'freebasis' must come before 'send' and 'subgen'", ln)
        pairs = self.named_degrees(rest, ln, col)
        self._check_names(decl, pairs, ln, col)
        self._replace(decl, freebasis=decl.freebasis + pairs)

    def do_relbasis(self, rest, ln, col):
        decl = self.module_decl(ln)
        pairs = self.named_degrees(rest, ln, col)
        self._check_names(decl, pairs, ln, col)
        self._replace(decl, relbasis=decl.relbasis + pairs)

    def _check_names(self, decl, pairs, ln, col):
        taken = {n for n, _ in decl.freebasis + decl.relbasis} | {s for s, _ in self.gens}
        for n, _ in pairs:
            if n in taken:
                self.fail(f"duplicate name {n!r}", ln, col)
            taken.add(n)

    def do_send(self, rest, ln, col):
        decl = self.module_decl(ln)
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)", rest)
        if not m:
            self.fail("expected 'send NAME = EXPRESSION'", ln, col)
        rname = m.group(1)
        rdeg = dict(decl.relbasis).get(rname)
        if rdeg is None:
            self.fail(f"unknown relbasis element {rname!r}", ln, col)
        if any(r == rname for r, _ in decl.sends):
            self.fail(f"duplicate send for {rname!r}", ln, col)
        terms, d = self.terms(m.group(2), ln, col + m.start(2), decl.freebasis, what="send")
        if d is not None and d != rdeg:
            self.fail(
                f"image of {rname} has degree {self.monoid.format(d)}, expected {self.monoid.format(rdeg)}", ln, col
            )
        self._replace(decl, sends=decl.sends + ((rname, terms),))

    def do_subgen(self, rest, ln, col):
        decl = self.module_decl(ln)
        terms, d = self.terms(rest, ln, col, decl.freebasis, what="subgen")
        if d is None:
            self.fail("subgen must be a nonzero expression", ln, col)
        self._replace(decl, subgens=decl.subgens + (terms,))

    def do_genset(self, rest, ln, col):
        parts = rest.split()
        if len(parts) != 2:
            self.fail("expected 'genset NAME MODULE'", ln, col)
        name, mod = parts
        if mod not in self.modules:
            self.fail(f"unknown module {mod!r}", ln, col)
        if name in self.gensets:
            self.fail(f"duplicate generating set {name!r}", ln, col)
        self.gensets[name] = GensetDecl(name, mod)
        self.current_genset = name
        self.current_module = None

    def do_deg(self, rest, ln, col):
        if self.current_genset is None:
            self.fail("'deg' line outside a genset block", ln)
        m = re.fullmatch(r"\s*" + _DEGREE + r"\s*:(.*)", rest)
        if not m:
            self.fail("expected 'deg DEGREE: EXPRESSION'", ln, col)
        d = self.degree(m.group(1), ln, col)
        gs = self.gensets[self.current_genset]
        basis = self.modules[gs.module].freebasis
        terms, td = self.terms(m.group(2), ln, col + m.start(2), basis, what="vector")
        if td is not None and td != d:
            self.fail(f"vector has degree {self.monoid.format(td)}, declared {self.monoid.format(d)}", ln, col)
        from dataclasses import replace

        self.gensets[gs.name] = replace(gs, vectors=gs.vectors + ((d, terms),))

    def finish(self) -> Workspace:
        for what, val in (("monoid", self.monoid), ("coeff", self.coeff), ("bound", self.bound)):
            if val is None:
                raise ParseError(f"missing '{what}' line")
        pres = RingPresentation(
            self.monoid, self.coeff, tuple(self.gens), tuple(self.rels), self.bound, self.commutative
        )
        try:
            pres.validate()
        except PreconditionError as exc:
            raise ParseError(str(exc)) from None
        return Workspace(pres, dict(self.modules), dict(self.gensets))


def parse(text: str) -> Workspace:
    """Parse a ring description (with optional modules and generating sets)."""
    return _Parser(text).run()


def load(path) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def shipped_rings() -> dict:
    """Name -> path of the example ring files installed with the package."""
    from importlib.resources import files

    root = files("grlocal") / "rings"
    return {p.name[: -len(".ring")]: str(p) for p in sorted(root.iterdir(), key=lambda p: p.name) if p.name.endswith(".ring")}
