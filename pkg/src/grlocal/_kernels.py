"""Howell normal form over Z/N.

Two interchangeable implementations: a numba ``@njit`` kernel and a pure numpy
one.  The numba path is used when numba imports and ``GRLOCAL_NUMBA`` is not
``0``; both return identical arrays.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("GRLOCAL_NUMBA", "1") != "0"

# entries stay below N, xgcd cofactors below N: 2*N**2 must fit in int64
MAX_MODULUS = 2**31


def _xgcd(a, b):
    x0, x1 = 1, 0
    y0, y1 = 0, 1
    while b != 0:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _gcd(a, b):
    while b != 0:
        a, b = b, a % b
    return a


def _unit_normalizer(a, n):
    """A unit ``u`` mod ``n`` with ``u*a % n == gcd(a, n)``."""
    g = _gcd(a, n)
    ng = n // g
    if ng == 1:
        return 1
    _, s, _ = _xgcd((a // g) % ng, ng)
    u = s % ng
    while _gcd(u, n) != 1:
        u += ng
    return u


def howell_numpy(mat, n):
    """Howell form of the row span of ``mat`` over Z/n (numpy row operations)."""
    rows, cols = mat.shape
    a = np.zeros((rows + cols, cols), dtype=np.int64)
    a[:rows] = mat % n
    total = rows
    r = 0
    for j in range(cols):
        nz = np.nonzero(a[r:total, j])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        for i in r + nz[1:]:
            x, y = int(a[r, j]), int(a[i, j])
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            top = (s * a[r, j:] + t * a[i, j:]) % n
            a[i, j:] = ((y // g) * a[r, j:] - (x // g) * a[i, j:]) % n
            a[r, j:] = top
        u = _unit_normalizer(int(a[r, j]), n)
        if u != 1:
            a[r, j:] = (u * a[r, j:]) % n
        piv = int(a[r, j])
        for i in range(r):
            q = int(a[i, j]) // piv
            if q:
                a[i, j:] = (a[i, j:] - q * a[r, j:]) % n
        if piv != 1:
            ann = (a[r] * (n // piv)) % n
            if ann.any():
                a[total] = ann
                total += 1
        r += 1
    return a[:r].copy()


if HAVE_NUMBA:
    _xgcd_jit = njit(cache=True)(_xgcd)
    _gcd_jit = njit(cache=True)(_gcd)

    @njit(cache=True)
    def _unit_normalizer_jit(a, n):
        g = _gcd_jit(a, n)
        ng = n // g
        if ng == 1:
            return 1
        _, s, _ = _xgcd_jit((a // g) % ng, ng)
        u = s % ng
        while _gcd_jit(u, n) != 1:
            u += ng
        return u

    @njit(cache=True)
    def _howell_jit(mat, n):
        rows, cols = mat.shape
        a = np.zeros((rows + cols, cols), dtype=np.int64)
        for i in range(rows):
            for c in range(cols):
                a[i, c] = mat[i, c] % n
        total = rows
        r = 0
        for j in range(cols):
            k = -1
            for i in range(r, total):
                if a[i, j] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for c in range(cols):
                    tmp = a[r, c]
                    a[r, c] = a[k, c]
                    a[k, c] = tmp
            for i in range(k + 1, total):
                y = a[i, j]
                if y == 0:
                    continue
                x = a[r, j]
                g, s, t = _xgcd_jit(x, y)
                yg = y // g
                xg = x // g
                for c in range(j, cols):
                    top = (s * a[r, c] + t * a[i, c]) % n
                    a[i, c] = (yg * a[r, c] - xg * a[i, c]) % n
                    a[r, c] = top
            u = _unit_normalizer_jit(a[r, j], n)
            if u != 1:
                for c in range(j, cols):
                    a[r, c] = (u * a[r, c]) % n
            piv = a[r, j]
            for i in range(r):
                q = a[i, j] // piv
                if q != 0:
                    for c in range(j, cols):
                        a[i, c] = (a[i, c] - q * a[r, c]) % n
            if piv != 1:
                m = n // piv
                nonzero = False
                for c in range(cols):
                    v = (a[r, c] * m) % n
                    a[total, c] = v
                    if v != 0:
                        nonzero = True
                if nonzero:
                    total += 1
            r += 1
        return a[:r].copy()


def howell(mat, n):
    """Dispatch to the numba or numpy Howell kernel."""
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    if mat.shape[0] == 0 or mat.shape[1] == 0:
        return np.zeros((0, mat.shape[1]), dtype=np.int64)
    if USE_NUMBA:
        return _howell_jit(mat, np.int64(n))
    return howell_numpy(mat, n)
