"""Array kernels for exhaustive sweeps over the word tree.

Words are encoded as integers: ``code(w) = 2**len(w) + bits(w)`` with ``a``
as 0, ``b`` as 1 and the first letter most significant.  The root (empty
word) is code 1, dropping the last letter is ``c >> 1``, and prepending a
letter adds ``2**len(w)`` (``a``) or ``2**(len(w) + 1)`` (``b``).

Distances are exact: every edge weight below depth ``K`` is ``2**-p`` with
``p <= K``, so d-lengths scaled by ``2**K`` are integers and fit in int64 for
any depth this package can enumerate.

Each kernel has a numba version and a numpy version with identical results;
``USE_NUMBA`` (see ``_accel``) picks the default.
"""

from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

MAX_TABLE_DEPTH = 24

MODE_CONTRACTION = 0  # compare min over {S, T}
MODE_LIPSCHITZ = 1  # compare max over {S, T}


def word_code(w: str) -> int:
    c = 1
    for ch in w:
        c = (c << 1) | (ch == "b")
    return c


def code_word(c: int) -> str:
    n = c.bit_length() - 1
    return "".join("ab"[(c >> (n - 1 - i)) & 1] for i in range(n))


def _pick(use_numba):
    return _accel.USE_NUMBA if use_numba is None else (use_numba and _accel.HAVE_NUMBA)


# -- p0 tables ----------------------------------------------------------------


@njit
def _p0_table_jit(max_len):
    size = 1 << (max_len + 1)
    out = np.zeros(size, np.int64)
    buf = np.empty(max_len + 1, np.int64)
    f = np.zeros(max_len + 2, np.int64)
    for c in range(2, size):
        n = 0
        x = c
        while x > 1:
            x >>= 1
            n += 1
        for i in range(n):
            buf[i] = (c >> (n - 1 - i)) & 1
        f[0] = 0
        f[1] = 0
        k = 0
        for i in range(1, n):
            while k > 0 and buf[i] != buf[k]:
                k = f[k]
            if buf[i] == buf[k]:
                k += 1
            f[i + 1] = k
        out[c] = n - f[n]
    return out


def _p0_table_numpy(max_len):
    size = 1 << (max_len + 1)
    out = np.zeros(size, np.int64)
    for n in range(1, max_len + 1):
        bits = np.arange(1 << n, dtype=np.int64)
        best = np.full(bits.shape, n, dtype=np.int64)
        todo = np.ones(bits.shape, dtype=bool)
        for p in range(1, n):
            # period p  <=>  first n-p letters equal last n-p letters
            mask = (1 << (n - p)) - 1
            hit = todo & ((bits >> p) == (bits & mask))
            best[hit] = p
            todo &= ~hit
        out[(1 << n) + bits] = best
    return out


def p0_table(max_len: int, use_numba: bool | None = None) -> np.ndarray:
    """``p0`` of every word of length <= max_len, indexed by word code."""
    if not 0 <= max_len <= MAX_TABLE_DEPTH:
        raise ValueError(f"max_len must be in [0, {MAX_TABLE_DEPTH}]")
    if _pick(use_numba):
        return _p0_table_jit(max_len)
    return _p0_table_numpy(max_len)


def p0_oracle_table(max_len: int) -> np.ndarray:
    """``p0`` of every word of length <= max_len by forward enumeration.

    For p = 1, 2, ... every block r of length p and every offset s < p, the
    length-n window of ``r r r ...`` starting at s is marked with p unless it
    was already marked by a shorter block.  Deliberately independent of the
    border-array path.
    """
    if not 0 <= max_len <= 16:
        raise ValueError("oracle table limited to max_len <= 16")
    table = np.full(1 << (max_len + 1), -1, dtype=np.int64)
    table[1] = 0
    for n in range(1, max_len + 1):
        for p in range(1, n + 1):
            r = np.arange(1 << p, dtype=np.int64)
            block_letters = [(r >> (p - 1 - k)) & 1 for k in range(p)]
            for s in range(p):
                code = np.ones_like(r)
                for i in range(n):
                    code = (code << 1) | block_letters[(s + i) % p]
                fresh = code[table[code] < 0]
                table[fresh] = p
    if (table[1:] < 0).any():
        raise AssertionError("oracle left a word unclassified")
    return table


def dlen_table(p0tab: np.ndarray, scale: int) -> np.ndarray:
    """``l_d(w) * 2**scale`` for every code covered by ``p0tab``."""
    size = p0tab.shape[0]
    max_len = size.bit_length() - 2
    if scale < max_len or scale + max_len.bit_length() > 61:
        raise ValueError("scale out of range")
    out = np.zeros(size, dtype=np.int64)
    for n in range(1, max_len + 1):
        codes = np.arange(1 << n, 1 << (n + 1), dtype=np.int64)
        out[codes] = out[codes >> 1] + (np.int64(1) << (scale - p0tab[codes]))
    return out


# -- pair sweep -----------------------------------------------------------------


def bitlen_table(size: int) -> np.ndarray:
    """``int.bit_length`` of 0 .. size-1."""
    out = np.zeros(size, dtype=np.int64)
    for k in range(1, size.bit_length() + 1):
        out[1 << (k - 1): 1 << k] = k
    return out


@njit
def _rho_codes(u, v, dlen, blen):
    lu = blen[u]
    lv = blen[v]
    a = u
    b = v
    if lu > lv:
        a = u >> (lu - lv)
    elif lv > lu:
        b = v >> (lv - lu)
    m = a >> blen[a ^ b]
    return dlen[u] + dlen[v] - 2 * dlen[m]


@njit
def _sweep_rows_jit(lo, hi, n_words, dlen, blen, mode, fnum, fden, max_wit):
    fail_i = np.zeros(max_wit, np.int64)
    fail_j = np.zeros(max_wit, np.int64)
    eq_i = np.zeros(max_wit, np.int64)
    eq_j = np.zeros(max_wit, np.int64)
    pairs = 0
    n_fail = 0
    n_eq = 0
    bn = -1
    bd = 1
    for i in range(lo, hi):
        ci = i + 1
        li = blen[ci] - 1
        si = ci + (1 << li)
        ti = ci + (2 << li)
        for j in range(i + 1, n_words):
            cj = j + 1
            lj = blen[cj] - 1
            sj = cj + (1 << lj)
            tj = cj + (2 << lj)
            r = _rho_codes(ci, cj, dlen, blen)
            s = _rho_codes(si, sj, dlen, blen)
            t = _rho_codes(ti, tj, dlen, blen)
            if mode == 0:
                m = s if s < t else t
            else:
                m = s if s > t else t
            pairs += 1
            if fden * m > fnum * r:
                if n_fail < max_wit:
                    fail_i[n_fail] = ci
                    fail_j[n_fail] = cj
                n_fail += 1
            lhs = m * bd
            rhs = bn * r
            if lhs > rhs:
                bn = m
                bd = r
                n_eq = 0
            if lhs >= rhs:
                if n_eq < max_wit:
                    eq_i[n_eq] = ci
                    eq_j[n_eq] = cj
                n_eq += 1
    nf = min(n_fail, max_wit)
    ne = min(n_eq, max_wit)
    return pairs, bn, bd, n_fail, fail_i[:nf], fail_j[:nf], n_eq, eq_i[:ne], eq_j[:ne]


def _bitlen_np(x):
    # exact for 0 < x < 2**53
    return np.frexp(x.astype(np.float64))[1].astype(np.int64)


def _rho_codes_np(u, v, dlen):
    lu = _bitlen_np(u)
    lv = _bitlen_np(v)
    a = np.where(lu > lv, u >> np.maximum(lu - lv, 0), u)
    b = np.where(lv > lu, v >> np.maximum(lv - lu, 0), v)
    x = a ^ b
    shift = np.where(x > 0, _bitlen_np(np.maximum(x, 1)), 0)
    m = a >> shift
    return dlen[u] + dlen[v] - 2 * dlen[m]


def _sweep_rows_numpy(lo, hi, n_words, dlen, mode, fnum, fden, max_wit):
    pairs = 0
    n_fail = 0
    n_eq = 0
    bn, bd = -1, 1
    fails: list[tuple[int, int]] = []
    eqs: list[tuple[int, int]] = []
    for i in range(lo, hi):
        ci = i + 1
        cj = np.arange(i + 2, n_words + 1, dtype=np.int64)
        if cj.size == 0:
            continue
        li = ci.bit_length() - 1
        lj = _bitlen_np(cj) - 1
        ci_arr = np.full_like(cj, ci)
        r = _rho_codes_np(ci_arr, cj, dlen)
        s = _rho_codes_np(ci_arr + (1 << li), cj + (np.int64(1) << lj), dlen)
        t = _rho_codes_np(ci_arr + (2 << li), cj + (np.int64(2) << lj), dlen)
        m = np.minimum(s, t) if mode == 0 else np.maximum(s, t)
        pairs += cj.size
        bad = np.flatnonzero(fden * m > fnum * r)
        if bad.size:
            fails.extend((ci, int(cj[k])) for k in bad[: max(0, max_wit - len(fails))])
            n_fail += bad.size
        k = int(np.argmax(m / r))
        if int(m[k]) * bd > bn * int(r[k]):
            bn, bd = int(m[k]), int(r[k])
            n_eq = 0
            eqs = []
        hit = np.flatnonzero(m * bd == bn * r)
        if hit.size:
            eqs.extend((ci, int(cj[k])) for k in hit[: max(0, max_wit - len(eqs))])
            n_eq += hit.size

    def _arr(lst, col):
        return np.array([p[col] for p in lst], dtype=np.int64)

    return (pairs, bn, bd, n_fail, _arr(fails, 0), _arr(fails, 1),
            n_eq, _arr(eqs, 0), _arr(eqs, 1))


def sweep_rows(lo, hi, n_words, dlen, mode, fnum, fden, max_wit, use_numba=None):
    """Check every pair ``(i, j)``, ``lo <= i < hi``, ``i < j < n_words`` of word indices.

    Word index ``i`` is code ``i + 1``.  For each pair the distance ``r`` and
    the image distances under both generator maps are computed; ``m`` is
    their min (contraction mode) or max (Lipschitz mode).  A pair fails when
    ``fden * m > fnum * r``.  Returns
    ``(pairs, best_num, best_den, n_fail, fail_i, fail_j, n_eq, eq_i, eq_j)``
    where ``best_num / best_den`` is the largest ``m / r`` seen, the ``eq``
    arrays hold the first ``max_wit`` pairs attaining it and the ``fail``
    arrays the first ``max_wit`` failing pairs (as codes).
    """
    args = (int(mode), int(fnum), int(fden), int(max_wit))
    if _pick(use_numba):
        blen = bitlen_table(dlen.shape[0])
        out = _sweep_rows_jit(int(lo), int(hi), int(n_words), dlen, blen, *args)
    else:
        out = _sweep_rows_numpy(int(lo), int(hi), int(n_words), dlen, *args)
    return tuple(int(v) if np.ndim(v) == 0 else v for v in out)
