"""Dense modular kernels with an optional numba backend.

Everything here works on ``int64`` numpy arrays whose entries are residues in
``[0, k)``.  Set ``EXTPOW_NO_NUMBA=1`` to force the pure-numpy code paths
(also used automatically when numba is not importable).  Only the modular
dense paths are accelerated; symbolic arithmetic never comes through here.
"""

from __future__ import annotations

import os
from itertools import permutations

import numpy as np

try:  # pragma: no cover - exercised indirectly
    import numba
except ImportError:  # pragma: no cover
    numba = None

# Residues are multiplied in int64; keep k^2 * size well clear of 2^63.
MAX_MODULUS = 1 << 24


def numba_enabled() -> bool:
    flag = os.environ.get("EXTPOW_NO_NUMBA", "").strip().lower()
    return numba is not None and flag not in ("1", "true", "yes")


def fits(k: int, size: int) -> bool:
    """Whether residues mod k can be safely accumulated over ``size`` terms."""
    return 1 < k <= MAX_MODULUS and k * k * max(size, 1) < (1 << 62)


# ---------------------------------------------------------------------------
# numpy reference implementations


def _matmul_np(a, b, k):
    return (a @ b) % k


def _compound_np(a, combos, perms, signs, k):
    n_idx = combos.shape[0]
    out = np.zeros((n_idx, n_idx), dtype=np.int64)
    for p in range(perms.shape[0]):
        prod = np.ones((n_idx, n_idx), dtype=np.int64)
        for t in range(perms.shape[1]):
            rows = combos[:, perms[p, t]]
            cols = combos[:, t]
            prod = (prod * a[np.ix_(rows, cols)]) % k
        out = (out + signs[p] * prod) % k
    return out


def _det_np(a, k):
    # Euclidean elimination: only unimodular row operations, so it is exact
    # over any Z/k, prime or not.
    m = [[int(x) for x in row] for row in a]
    n = len(m)
    det = 1
    for c in range(n):
        while True:
            nz = [r for r in range(c, n) if m[r][c]]
            if not nz:
                return 0
            piv = min(nz, key=lambda r: m[r][c])
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            done = True
            pc = m[c][c]
            for r in range(c + 1, n):
                if m[r][c]:
                    q = m[r][c] // pc
                    rc, rr = m[c], m[r]
                    for t in range(c, n):
                        rr[t] = (rr[t] - q * rc[t]) % k
                    if rr[c]:
                        done = False
            if done:
                break
        det = (det * m[c][c]) % k
    return det % k


def _rref_np(a, p):
    m = a.copy() % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, np.array(pivots, dtype=np.int64)


# ---------------------------------------------------------------------------
# numba implementations (compiled lazily on first use)

_jit_cache: dict = {}


def _jit(name):
    fn = _jit_cache.get(name)
    if fn is not None:
        return fn
    njit = numba.njit(cache=True)

    if name == "compound":

        def compound(a, combos, perms, signs, k):
            n_idx, m = combos.shape
            out = np.zeros((n_idx, n_idx), dtype=np.int64)
            for r in range(n_idx):
                for c in range(n_idx):
                    acc = 0
                    for p in range(perms.shape[0]):
                        prod = 1
                        for t in range(m):
                            prod = (prod * a[combos[r, perms[p, t]], combos[c, t]]) % k
                            if prod == 0:
                                break
                        acc = (acc + signs[p] * prod) % k
                    out[r, c] = acc % k
            return out

        fn = njit(compound)
    elif name == "det":

        def det(a, k):
            m = a.copy() % k
            n = m.shape[0]
            d = 1
            for c in range(n):
                while True:
                    piv = -1
                    for r in range(c, n):
                        if m[r, c] != 0 and (piv < 0 or m[r, c] < m[piv, c]):
                            piv = r
                    if piv < 0:
                        return 0
                    if piv != c:
                        for t in range(n):
                            tmp = m[c, t]
                            m[c, t] = m[piv, t]
                            m[piv, t] = tmp
                        d = -d
                    done = True
                    for r in range(c + 1, n):
                        if m[r, c] != 0:
                            q = m[r, c] // m[c, c]
                            for t in range(c, n):
                                m[r, t] = (m[r, t] - q * m[c, t]) % k
                            if m[r, c] != 0:
                                done = False
                    if done:
                        break
                d = (d * m[c, c]) % k
            return d % k

        fn = njit(det)
    elif name == "rref":

        def rref(a, p):
            m = a.copy() % p
            rows, cols = m.shape
            pivots = np.zeros(min(rows, cols), dtype=np.int64)
            r = 0
            for c in range(cols):
                if r == rows:
                    break
                piv = -1
                for i in range(r, rows):
                    if m[i, c] != 0:
                        piv = i
                        break
                if piv < 0:
                    continue
                if piv != r:
                    for t in range(cols):
                        tmp = m[r, t]
                        m[r, t] = m[piv, t]
                        m[piv, t] = tmp
                # inverse via Fermat
                inv = 1
                base = m[r, c]
                e = p - 2
                while e > 0:
                    if e & 1:
                        inv = (inv * base) % p
                    base = (base * base) % p
                    e >>= 1
                for t in range(cols):
                    m[r, t] = (m[r, t] * inv) % p
                for i in range(rows):
                    if i != r and m[i, c] != 0:
                        f = m[i, c]
                        for t in range(cols):
                            m[i, t] = (m[i, t] - f * m[r, t]) % p
                pivots[r] = c
                r += 1
            return m, pivots[:r]

        fn = njit(rref)
    else:  # pragma: no cover
        raise KeyError(name)
    _jit_cache[name] = fn
    return fn


# ---------------------------------------------------------------------------
# public entry points


def as_array(rows) -> np.ndarray:
    return np.asarray(rows, dtype=np.int64)


def matmul_mod(a: np.ndarray, b: np.ndarray, k: int) -> np.ndarray:
    # numpy's integer matmul beats the jitted triple loop; fits() rules out overflow
    return _matmul_np(a, b, k)


_perm_cache: dict = {}


def _perm_table(m: int):
    tab = _perm_cache.get(m)
    if tab is None:
        perms = list(permutations(range(m)))
        signs = []
        for p in perms:
            inv = sum(1 for x in range(m) for y in range(x + 1, m) if p[x] > p[y])
            signs.append(-1 if inv % 2 else 1)
        tab = (np.array(perms, dtype=np.int64).reshape(len(perms), m), np.array(signs, dtype=np.int64))
        _perm_cache[m] = tab
    return tab


def compound_mod(a: np.ndarray, combos: np.ndarray, k: int) -> np.ndarray:
    """All m x m minors of ``a`` mod k; ``combos`` lists 0-based index sets row-wise."""
    perms, signs = _perm_table(combos.shape[1])
    if numba_enabled():
        return _jit("compound")(a, combos, perms, signs, k)
    return _compound_np(a, combos, perms, signs, k)


def det_mod(a: np.ndarray, k: int) -> int:
    if a.shape[0] == 0:
        return 1 % k
    if numba_enabled():
        return int(_jit("det")(a, k))
    return _det_np(a, k)


def rref_mod_p(a: np.ndarray, p: int):
    """Reduced row echelon form over F_p; returns ``(R, pivot_columns)``."""
    if numba_enabled():
        r, piv = _jit("rref")(a, p)
        return r, piv
    return _rref_np(a, p)


def rank_mod_p(a: np.ndarray, p: int) -> int:
    return len(rref_mod_p(a, p)[1])


def in_row_span_mod_p(basis_rref: np.ndarray, pivots: np.ndarray, v: np.ndarray, p: int) -> bool:
    """Is ``v`` in the row span of an RREF basis (rows past the rank are ignored)?"""
    w = v % p
    for r, c in enumerate(pivots):
        f = w[c]
        if f:
            w = (w - f * basis_rref[r]) % p
    return not w.any()


def congruence_mod(g: np.ndarray, u: np.ndarray, p: int) -> np.ndarray:
    """``g^T u g mod p`` -- the Gram matrix of a quadratic form after substitution."""
    return matmul_mod(matmul_mod(np.ascontiguousarray(g.T), u, p), g, p)
