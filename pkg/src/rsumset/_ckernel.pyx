# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair scanner; a line-for-line twin of ``_pykernel.scan_rows``."""
from libc.stdint cimport uint64_t, int64_t, int32_t, uint8_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

# slot layout mirrors _pykernel
cdef enum:
    ENUM = 0
    CHECKED = 1
    AGREE = 2
    BAND_CHECKED = 3
    BAND_AGREE = 4
    L1_CHECKED = 5
    L1_VIOL = 6
    L2_CHECKED = 7
    L2_VIOL = 8
    L5_CHECKED = 9
    L5_VIOL = 10
    L6_CHECKED = 11
    L6_VIOL = 12
    VIOL_TOTAL = 13
    COLLECT_TOTAL = 14
    N_COUNTS = 15


cdef inline uint64_t _rot(uint64_t b, int a, int p, uint64_t full) nogil:
    if a == 0:
        return b
    return ((b << a) | (b >> (p - a))) & full


def scan_rows(rows, const uint64_t[:] masks, const int32_t[:] sizes,
              const int32_t[:] maxel, const uint8_t[:] struct,
              const int32_t[:] canon, const int32_t[:] shift,
              const int64_t[:] colstop,
              int kind, int width, int norm, int mode, int need_size,
              int large_min, int slack, int band_only, int sum_below,
              int collect_min, int cap, int collect_cap):
    cdef int64_t counts[N_COUNTS]
    cdef Py_ssize_t S = masks.shape[0]
    cdef Py_ssize_t i, j, j0, j1, r
    cdef uint64_t ma, mb, acc, tot, x, b, inter
    cdef uint64_t full = (<uint64_t>1 << width) - 1 if width < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    cdef int p = width
    cdef int half = (p - 1) // 2
    cdef int sa, sb, rs, ss, a, flags, lo1, lo2, ci, cj, a_full, bad, agree, pred, oracle
    cdef int is_mod = kind == 1
    cdef int nel, k
    cdef int elems[64]
    cdef int64_t[:] rowv
    viols = []
    collected = []
    for r in range(N_COUNTS):
        counts[r] = 0

    import numpy as np
    rowv = np.ascontiguousarray(rows, dtype=np.int64)

    for r in range(rowv.shape[0]):
        i = rowv[r]
        ma = masks[i]
        sa = sizes[i]
        nel = 0
        x = ma
        while x:
            elems[nel] = __builtin_ctzll(x)
            nel += 1
            x &= x - 1
        if norm == 2:
            if shift[i] != 0:
                continue
            ci = canon[i]
            a_full = sa == p
            j0 = 0
            j1 = S
        else:
            j0 = i
            j1 = S
            if norm == 0 and colstop[i] < S:
                counts[ENUM] += S - colstop[i]
                j1 = colstop[i]
        for j in range(j0, j1):
            if norm == 2:
                cj = canon[j]
                if a_full:
                    if cj < ci or shift[j] != 0:
                        continue
                elif cj < ci or (cj == ci and shift[j] > half):
                    continue
            mb = masks[j]
            if norm == 1 and not ((ma | mb) & 1):
                continue
            counts[ENUM] += 1
            sb = sizes[j]

            if need_size and sa != need_size and sb != need_size:
                continue
            if large_min and sa < large_min and sb < large_min:
                continue
            if is_mod:
                if slack >= 0 and p < sa + sb - slack:
                    continue
                if band_only and p >= sa + sb:
                    continue
                if sum_below and maxel[i] + maxel[j] >= p:
                    continue
            counts[CHECKED] += 1

            acc = 0
            tot = 0
            if is_mod:
                for k in range(nel):
                    a = elems[k]
                    b = mb & ~(<uint64_t>1 << a)
                    acc |= _rot(b, a, p, full)
                    if mode == 1:
                        tot |= _rot(mb, a, p, full)
            else:
                for k in range(nel):
                    a = elems[k]
                    acc |= (mb & ~(<uint64_t>1 << a)) << a
                    if mode == 1:
                        tot |= mb << a
            rs = __builtin_popcountll(acc)
            ss = __builtin_popcountll(tot)
            oracle = rs == sa + sb - 3

            flags = 0
            bad = 0
            if mode == 0:
                pred = i == j and struct[i] != 0
                agree = oracle == pred
                if is_mod and p < sa + sb:
                    counts[BAND_CHECKED] += 1
                    counts[BAND_AGREE] += agree
                if agree:
                    counts[AGREE] += 1
                else:
                    bad = 1
            elif mode == 1:
                if is_mod:
                    lo1 = min(p, sa + sb - 1)
                    lo2 = min(p, max(0, sa + sb - 3))
                else:
                    lo1 = sa + sb - 1
                    lo2 = max(0, sa + sb - 3)
                counts[L1_CHECKED] += 1
                if ss < lo1:
                    counts[L1_VIOL] += 1
                    flags |= 1
                counts[L2_CHECKED] += 1
                if rs < lo2:
                    counts[L2_VIOL] += 1
                    flags |= 2
                if not is_mod and sa >= 2 and sb >= 2 and i != j:
                    inter = ma & mb
                    if inter == ma or inter == mb:
                        counts[L5_CHECKED] += 1
                        if rs < sa + sb - 2:
                            counts[L5_VIOL] += 1
                            flags |= 4
                    counts[L6_CHECKED] += 1
                    if rs < sa + sb - 2:
                        counts[L6_VIOL] += 1
                        flags |= 8
                if flags:
                    bad = 1
                else:
                    counts[AGREE] += 1

            if bad:
                counts[VIOL_TOTAL] += 1
                if len(viols) < cap:
                    viols.append((i, j, rs, ss, flags))
            if collect_min and oracle and (sa >= collect_min or sb >= collect_min):
                counts[COLLECT_TOTAL] += 1
                if len(collected) < collect_cap:
                    collected.append((i, j, rs))
    return [counts[r] for r in range(N_COUNTS)], viols, collected

