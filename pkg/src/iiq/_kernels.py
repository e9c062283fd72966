"""Hot numeric kernels with a numba path and a pure-numpy path.

Each kernel exists as ``<name>_jit`` and ``<name>_numpy``; the unsuffixed name is
whichever one :mod:`iiq._accel` selected. Strings enter as uint32 code-point
arrays.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit


def _levenshtein_loop(a, b):
    n, m = a.shape[0], b.shape[0]
    if n < m:
        a, b = b, a
        n, m = m, n
    if m == 0:
        return n
    prev = np.empty(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    for j in range(m + 1):
        prev[j] = j
    for i in range(1, n + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (0 if ai == b[j - 1] else 1)
            up = prev[j] + 1
            if up < best:
                best = up
            left = cur[j - 1] + 1
            if left < best:
                best = left
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]


def levenshtein_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """Row-vectorised Levenshtein distance; insertions resolved with a running min."""
    if a.shape[0] < b.shape[0]:
        a, b = b, a
    m = b.shape[0]
    if m == 0:
        return int(a.shape[0])
    ramp = np.arange(m + 1, dtype=np.int64)
    prev = ramp.copy()
    tmp = np.empty(m + 1, dtype=np.int64)
    for i, ch in enumerate(a, start=1):
        cost = (b != ch).astype(np.int64)
        tmp[0] = i
        np.minimum(prev[1:] + 1, prev[:-1] + cost, out=tmp[1:])
        prev = np.minimum.accumulate(tmp - ramp) + ramp
    return int(prev[m])


def _similarity(d, la, lb):
    longest = la if la > lb else lb
    if longest == 0:
        return 1.0
    return 1.0 - d / longest


def _max_edit_similarity_loop(query, buf, offsets):
    best = 0.0
    for k in range(offsets.shape[0] - 1):
        seg = buf[offsets[k]:offsets[k + 1]]
        d = _levenshtein_jit_inner(query, seg)
        s = _similarity_jit_inner(d, query.shape[0], seg.shape[0])
        if s > best:
            best = s
            if best >= 1.0:
                break
    return best


def max_edit_similarity_numpy(query: np.ndarray, buf: np.ndarray, offsets: np.ndarray) -> float:
    """Best similarity of ``query`` against every segment, all segments in one DP.

    Segments are padded into a matrix with a code that matches nothing; padding
    sits to the right of each segment's last column so it never feeds back.
    """
    n = len(offsets) - 1
    if n <= 0:
        return 0.0
    lens = np.diff(offsets)
    width = int(lens.max())
    la = query.shape[0]
    longest = np.maximum(lens, la)
    if la == 0 or width == 0:
        d = np.maximum(lens, la)
    else:
        mat = np.full((n, width), -1, dtype=np.int64)
        cols = np.arange(width)
        mask = cols < lens[:, None]
        mat[mask] = buf.astype(np.int64)
        ramp = np.arange(width + 1, dtype=np.int64)
        prev = np.broadcast_to(ramp, (n, width + 1)).copy()
        tmp = np.empty_like(prev)
        for i, ch in enumerate(query.astype(np.int64), start=1):
            cost = (mat != ch).astype(np.int64)
            tmp[:, 0] = i
            np.minimum(prev[:, 1:] + 1, prev[:, :-1] + cost, out=tmp[:, 1:])
            prev = np.minimum.accumulate(tmp - ramp, axis=1) + ramp
        d = prev[np.arange(n), lens]
    sims = np.where(longest == 0, 1.0, 1.0 - d / np.maximum(longest, 1))
    return float(sims.max())


def _gini_loop(x):
    n = x.shape[0]
    xs = np.sort(x)
    total = 0.0
    num = 0.0
    for i in range(n):
        total += xs[i]
        num += (2.0 * (i + 1) - n - 1.0) * xs[i]
    if total <= 0.0:
        return 0.0
    g = num / (n * total)
    return g if g > 0.0 else 0.0


def gini_numpy(x: np.ndarray) -> float:
    n = x.shape[0]
    xs = np.sort(x)
    total = xs.sum()
    if total <= 0.0:
        return 0.0
    ranks = 2.0 * np.arange(1, n + 1, dtype=np.float64) - n - 1.0
    return max(float(ranks @ xs) / (n * total), 0.0)


levenshtein_jit = njit(_levenshtein_loop)
_levenshtein_jit_inner = levenshtein_jit
_similarity_jit_inner = njit(_similarity)
max_edit_similarity_jit = njit(_max_edit_similarity_loop)
gini_jit = njit(_gini_loop)

# numba's sort falls behind numpy's beyond a few hundred values
GINI_JIT_MAX = 512


def _gini_dispatch(x):
    return gini_jit(x) if x.shape[0] <= GINI_JIT_MAX else gini_numpy(x)


if USE_NUMBA:
    levenshtein = levenshtein_jit
    max_edit_similarity = max_edit_similarity_jit
    gini_kernel = _gini_dispatch
else:
    levenshtein = levenshtein_numpy
    max_edit_similarity = max_edit_similarity_numpy
    gini_kernel = gini_numpy
