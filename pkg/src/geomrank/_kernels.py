"""Compiled inner loops: rank histograms of linear matrix families mod a prime.

Every enumeration here walks an odometer over ``len(free)`` digits of a fixed
radix and ranks ``base + sum_i digit_i * free[i]`` modulo ``modulus``.  The
caller decides what the digits mean (a projective block of F_p^d, or a PIT
grid {0, ..., s-1}^d).  Per-chunk histograms are summed with integer
addition, so the result never depends on how many threads ran.
"""

from __future__ import annotations

import os

import numba
import numpy as np
from numba import njit, prange

# an outdated TBB makes numba warn at first parallel launch; skip straight past it
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

THREADS_ENV = "GEOMRANK_THREADS"


@njit(cache=True)
def _inv_mod(a, p):
    # extended Euclid; a is nonzero mod p
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if t < 0:
        t += p
    return t


@njit(cache=True)
def _rank_inplace(mat, p):
    rows, cols = mat.shape
    rank = 0
    for col in range(cols):
        piv = -1
        for i in range(rank, rows):
            if mat[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(col, cols):
                tmp = mat[rank, j]
                mat[rank, j] = mat[piv, j]
                mat[piv, j] = tmp
        inv = _inv_mod(mat[rank, col], p)
        for j in range(col, cols):
            mat[rank, j] = (mat[rank, j] * inv) % p
        for i in range(rank + 1, rows):
            f = mat[i, col]
            if f != 0:
                for j in range(col, cols):
                    mat[i, j] = (mat[i, j] - f * mat[rank, j]) % p
        rank += 1
        if rank == rows:
            break
    return rank


@njit(cache=True)
def rank_mod(mat, p):
    """Rank of an integer matrix modulo the prime ``p`` (input is not modified)."""
    work = np.empty(mat.shape, np.int64)
    rows, cols = mat.shape
    for i in range(rows):
        for j in range(cols):
            work[i, j] = mat[i, j] % p
    return _rank_inplace(work, p)


@njit(cache=True)
def _odometer_chunk(base, free, modulus, radix, start, stop, hist):
    nfree = free.shape[0]
    rows = base.shape[0]
    cols = base.shape[1]
    digits = np.zeros(max(nfree, 1), np.int64)
    rem = start
    for k in range(nfree - 1, -1, -1):
        digits[k] = rem % radix
        rem //= radix
    partial = np.empty((nfree + 1, rows, cols), np.int64)
    partial[0] = base
    for k in range(nfree):
        for i in range(rows):
            for j in range(cols):
                partial[k + 1, i, j] = partial[k, i, j] + digits[k] * free[k, i, j]
    work = np.empty((rows, cols), np.int64)
    n = start
    while n < stop:
        top = partial[nfree]
        for i in range(rows):
            for j in range(cols):
                work[i, j] = top[i, j] % modulus
        hist[_rank_inplace(work, modulus)] += 1
        n += 1
        if n == stop:
            break
        # advance: find the lowest digit position that does not carry
        k = nfree - 1
        while k >= 0 and digits[k] == radix - 1:
            digits[k] = 0
            k -= 1
        digits[k] += 1
        for kk in range(k, nfree):
            for i in range(rows):
                for j in range(cols):
                    partial[kk + 1, i, j] = partial[kk, i, j] + digits[kk] * free[kk, i, j]


@njit(cache=True, parallel=True)
def _odometer_hist(base, free, modulus, radix, total, nchunks, maxrank):
    hist = np.zeros((nchunks, maxrank + 1), np.int64)
    step = (total + nchunks - 1) // nchunks
    for ch in prange(nchunks):
        lo = ch * step
        hi = min(total, lo + step)
        if lo < hi:
            _odometer_chunk(base, free, modulus, radix, lo, hi, hist[ch])
    return hist.sum(axis=0)


def thread_count() -> int:
    """Threads to use for enumeration, from ``GEOMRANK_THREADS`` if set."""
    raw = os.environ.get(THREADS_ENV)
    limit = numba.config.NUMBA_NUM_THREADS
    if raw:
        return max(1, min(int(raw), limit))
    return limit


def odometer_histogram(base, free, modulus, radix, threads=None):
    """Histogram of ranks over all ``radix ** len(free)`` odometer points.

    ``base`` has shape (r, c) and ``free`` shape (n, r, c); both hold int64.
    Returns an int64 array of length ``min(r, c) + 1``.
    """
    base = np.ascontiguousarray(base, dtype=np.int64)
    free = np.ascontiguousarray(free, dtype=np.int64).reshape((-1,) + base.shape)
    total = int(radix) ** free.shape[0]
    maxrank = min(base.shape)
    threads = thread_count() if threads is None else threads
    numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))
    # chunk count is a fixed function of the work size, independent of threads
    nchunks = int(max(1, min(total // 4096, 256)))
    return _odometer_hist(base, free, int(modulus), int(radix), total, nchunks, maxrank)
