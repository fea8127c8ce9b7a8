"""Local coefficient rings Q, F_p and Z/p^m with exact linear algebra.

Matrices are numpy arrays: ``int64`` holding least nonnegative residues for the
modular kinds, ``object`` arrays of :class:`fractions.Fraction` for Q.  Row
spans are kept in a canonical form (reduced row echelon form over a field,
Howell form over Z/p^m), so equal spans give equal arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import PreconditionError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class CoefficientRing:
    """A classical local ring usable as the degree-e part of a graded ring.

    ``kind`` is ``"Q"``, ``"Fp"`` or ``"Zpm"``.  For ``Fp`` the exponent is 1.
    """

    kind: str
    p: int = 0
    m: int = 1

    def __post_init__(self):
        if self.kind == "Q":
            object.__setattr__(self, "p", 0)
            object.__setattr__(self, "m", 1)
            return
        if self.kind not in ("Fp", "Zpm"):
            raise PreconditionError(f"unknown coefficient kind {self.kind!r}")
        if not _is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")
        if self.kind == "Fp":
            object.__setattr__(self, "m", 1)
        elif self.m < 2:
            raise PreconditionError("Zpm needs exponent m >= 2 (use Fp for m = 1)")
        if self.p**self.m >= _kernels.MAX_MODULUS:
            raise PreconditionError(f"modulus {self.p}^{self.m} too large (limit 2^31)")

    @classmethod
    def rationals(cls):
        return cls("Q")

    @classmethod
    def prime_field(cls, p: int):
        return cls("Fp", p)

    @classmethod
    def prime_power(cls, p: int, m: int):
        return cls("Zpm", p, m)

    # -- scalars -------------------------------------------------------------

    @property
    def modulus(self) -> int:
        """p^m for the modular kinds, 0 for Q."""
        return 0 if self.kind == "Q" else self.p**self.m

    @property
    def is_field(self) -> bool:
        return self.kind != "Zpm"

    @property
    def is_finite(self) -> bool:
        return self.kind != "Q"

    @property
    def size(self) -> int:
        return self.modulus

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def __call__(self, x):
        """Canonical representative of ``x``."""
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                return (x.numerator * self.inverse(x.denominator % self.modulus)) % self.modulus
            x = x.numerator
        return int(x) % self.modulus

    def elements(self):
        if self.kind == "Q":
            raise PreconditionError("Q is infinite")
        return range(self.modulus)

    def is_unit(self, s) -> bool:
        if self.kind == "Q":
            return s != 0
        return s % self.p != 0

    def in_maximal_ideal(self, s) -> bool:
        return not self.is_unit(s)

    def inverse(self, s):
        if not self.is_unit(s):
            raise PreconditionError(f"{s} is not a unit in {self.describe()}")
        if self.kind == "Q":
            return 1 / Fraction(s)
        return pow(int(s), -1, self.modulus)

    def residue_field(self) -> "CoefficientRing":
        """D_e = A_e / m."""
        if self.kind == "Zpm":
            return CoefficientRing("Fp", self.p)
        return self

    def residue(self, s):
        """Image of ``s`` in the residue field."""
        if self.kind == "Zpm":
            return int(s) % self.p
        return self(s)

    @property
    def uniformizer(self):
        """Generator of the maximal ideal (0 for fields)."""
        return self.p if self.kind == "Zpm" else self.zero

    def random(self, rng, nonzero=False):
        if self.kind == "Q":
            while True:
                x = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                if x or not nonzero:
                    return x
        lo = 1 if nonzero else 0
        return rng.randrange(lo, self.modulus)

    def parse(self, text: str):
        text = text.strip()
        if not re.fullmatch(r"-?\d+(/\d+)?", text):
            raise PreconditionError(f"bad scalar literal {text!r}")
        if "/" in text:
            num, den = text.split("/")
            if int(den) == 0:
                raise PreconditionError("zero denominator")
            if self.kind != "Q":
                d = int(den) % self.modulus
                if not self.is_unit(d):
                    raise PreconditionError(f"denominator {den} not invertible in {self.describe()}")
                return self(int(num) * self.inverse(d))
            return Fraction(int(num), int(den))
        return self(int(text))

    def format(self, s) -> str:
        return str(s)

    def describe(self) -> str:
        if self.kind == "Q":
            return "Q"
        if self.kind == "Fp":
            return f"Fp {self.p}"
        return f"Zpm {self.p} {self.m}"

    # -- arrays --------------------------------------------------------------

    @property
    def dtype(self):
        return object if self.kind == "Q" else np.int64

    def zeros(self, *shape):
        if self.kind == "Q":
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def array(self, data, cols=None):
        if self.kind == "Q":
            arr = np.array(data, dtype=object)
            if arr.size:
                arr = np.vectorize(Fraction, otypes=[object])(arr)
        else:
            arr = np.array(data, dtype=object)
            arr = (arr % self.modulus).astype(np.int64) if arr.size else arr.astype(np.int64)
        if cols is not None and arr.size == 0:
            arr = self.zeros(0, cols)
        return arr

    def reduce(self, arr):
        """Reduce entries to canonical representatives."""
        if self.kind == "Q":
            return arr
        return np.mod(arr, self.modulus)

    def matmul(self, a, b):
        if a.shape[0] == 0 or b.shape[-1] == 0 or a.shape[-1] == 0:
            shape = a.shape[:-1] + b.shape[1:]
            return self.zeros(*shape) if shape else self.zero
        return self.reduce(a @ b)

    def scale(self, s, arr):
        return self.reduce(arr * s)

    def vstack(self, blocks, cols):
        blocks = [b for b in blocks if b is not None and b.shape[0]]
        if not blocks:
            return self.zeros(0, cols)
        return np.vstack(blocks) if self.kind != "Q" else np.vstack(blocks).astype(object)

    # -- canonical forms -----------------------------------------------------

    def echelon(self, mat):
        """Canonical generating rows of the row span (RREF / Howell form)."""
        mat = np.asarray(mat)
        if mat.ndim != 2:
            raise PreconditionError("echelon expects a 2-d array")
        if self.kind == "Q":
            return _rref_fraction(mat)
        return _kernels.howell(mat, self.modulus)

    def pivots(self, ech):
        """Pivot column of each row of a canonical form."""
        out = []
        for row in ech:
            nz = np.nonzero(row)[0] if self.kind != "Q" else [i for i, x in enumerate(row) if x != 0]
            out.append(int(nz[0]))
        return out

    def length(self, ech) -> int:
        """Composition length of the span of canonical rows ``ech``."""
        if self.kind != "Zpm":
            return int(ech.shape[0])
        total = 0
        for j, row in zip(self.pivots(ech), ech):
            total += self.m - _valuation(int(row[j]), self.p)
        return total

    def reduce_against(self, ech, v, track=False):
        """Reduce row vector ``v`` against canonical rows ``ech``.

        Returns ``(remainder, coeffs)``; ``v - coeffs @ ech == remainder`` and
        the remainder is zero exactly when ``v`` lies in the span.  Over Z/p^m
        the remainder is the canonical coset representative.
        """
        v = self.reduce(np.array(v, dtype=self.dtype))
        coeffs = self.zeros(ech.shape[0]) if track else None
        for k, (j, row) in enumerate(zip(self.pivots(ech), ech)):
            if v[j] == 0:
                continue
            piv = row[j]
            if self.kind == "Q":
                q = v[j] / piv
            else:
                q = int(v[j]) // int(piv)
            if q:
                v = self.reduce(v - q * row)
                if track:
                    coeffs[k] = self(coeffs[k] + q)
        return v, coeffs

    def contains(self, ech, v) -> bool:
        rem, _ = self.reduce_against(ech, v)
        return not rem.any()

    def kernel(self, mat):
        """Canonical rows generating the left kernel ``{v : v @ mat == 0}``."""
        mat = np.asarray(mat)
        n, c = mat.shape
        if n == 0:
            return self.zeros(0, 0)
        aug = np.hstack([self.reduce(mat).astype(self.dtype), self.eye(n)]) if c else self.eye(n)
        ech = self.echelon(aug)
        keep = [row[c:] for row in ech if not row[:c].any()]
        if not keep:
            return self.zeros(0, n)
        return self.echelon(np.array(keep, dtype=self.dtype))

    def solve(self, mat, b):
        """Some ``x`` with ``x @ mat == b``, or ``None``."""
        mat = np.asarray(mat)
        n, c = mat.shape
        b = self.reduce(np.array(b, dtype=self.dtype))
        if b.shape != (c,):
            raise PreconditionError(f"dimension mismatch: matrix has {c} columns, vector {b.shape}")
        if not b.any():
            return self.zeros(n)
        if n == 0:
            return None
        aug = np.hstack([self.reduce(mat).astype(self.dtype), self.eye(n)])
        ech = self.echelon(aug)
        top = np.array([row for row in ech if row[:c].any()], dtype=self.dtype).reshape(-1, c + n)
        target = np.concatenate([b, self.zeros(n)])
        rem, _ = self.reduce_against(top, target)
        if rem[:c].any():
            return None
        return self.reduce(-rem[c:])


def _valuation(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _rref_fraction(mat):
    rows = [[Fraction(x) for x in row] for row in mat]
    ncols = mat.shape[1]
    out = []
    r = 0
    for j in range(ncols):
        k = next((i for i in range(r, len(rows)) if rows[i][j] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        piv = rows[r][j]
        rows[r] = [x / piv for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][j] != 0:
                f = rows[i][j]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        r += 1
    out = rows[:r]
    arr = np.empty((len(out), ncols), dtype=object)
    for i, row in enumerate(out):
        arr[i, :] = row
    return arr


def parse_coefficient_ring(text: str) -> CoefficientRing:
    """Parse ``Q``, ``Fp 5`` or ``Zpm 2 2``."""
    parts = text.split()
    if parts == ["Q"]:
        return CoefficientRing.rationals()
    if len(parts) == 2 and parts[0] == "Fp" and parts[1].isdigit():
        return CoefficientRing.prime_field(int(parts[1]))
    if len(parts) == 3 and parts[0] == "Zpm" and parts[1].isdigit() and parts[2].isdigit():
        return CoefficientRing.prime_power(int(parts[1]), int(parts[2]))
    raise PreconditionError(f"bad coefficient ring declaration {text!r}")
