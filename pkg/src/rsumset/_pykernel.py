"""Pure-Python pair scanner.  Semantics must match ``_ckernel.pyx`` exactly.

Subsets of the universe are bitmasks (bit k <-> element k).  For a chunk
of row indices the scanner walks the admissible columns of each row,
applies the hypothesis gate, computes |A +^ B| (and |A + B|) with shifts
or rotations, and tallies the outcome.
"""

# count slots, shared with the compiled kernel
ENUM, CHECKED, AGREE, BAND_CHECKED, BAND_AGREE = 0, 1, 2, 3, 4
L1_CHECKED, L1_VIOL, L2_CHECKED, L2_VIOL = 5, 6, 7, 8
L5_CHECKED, L5_VIOL, L6_CHECKED, L6_VIOL = 9, 10, 11, 12
VIOL_TOTAL, COLLECT_TOTAL = 13, 14
N_COUNTS = 15

KIND_INT, KIND_MOD = 0, 1
NORM_NONE, NORM_MIN0, NORM_CANON = 0, 1, 2
MODE_PREDICT, MODE_LEMMAS, MODE_COLLECT = 0, 1, 2
FLAG_L1, FLAG_L2, FLAG_L5, FLAG_L6 = 1, 2, 4, 8


def scan_rows(rows, masks, sizes, maxel, struct, canon, shift, colstop,
              kind, width, norm, mode, need_size, large_min, slack,
              band_only, sum_below, collect_min, cap, collect_cap):
    masks, sizes, maxel, struct, canon, shift, colstop = (
        [int(x) for x in t] for t in (masks, sizes, maxel, struct, canon, shift, colstop))
    S = len(masks)
    counts = [0] * N_COUNTS
    viols = []
    collected = []
    is_mod = kind == KIND_MOD
    p = width
    full = (1 << p) - 1
    half = (p - 1) // 2

    for i in rows:
        i = int(i)
        ma = masks[i]
        sa = sizes[i]
        elems = [k for k in range(width) if ma >> k & 1]
        if norm == NORM_CANON:
            if shift[i] != 0:
                continue
            ci = canon[i]
            a_full = sa == p
            cols = range(S)
        else:
            cols = range(i, S)
            if norm == NORM_NONE and colstop[i] < S:
                counts[ENUM] += S - colstop[i]
                cols = range(i, colstop[i])
        for j in cols:
            if norm == NORM_CANON:
                cj = canon[j]
                if a_full:
                    if cj < ci or shift[j] != 0:
                        continue
                elif cj < ci or (cj == ci and shift[j] > half):
                    continue
            mb = masks[j]
            if norm == NORM_MIN0 and not (ma | mb) & 1:
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
                for a in elems:
                    b = mb & ~(1 << a)
                    acc |= ((b << a) | (b >> (p - a))) & full
                    if mode == MODE_LEMMAS:
                        tot |= ((mb << a) | (mb >> (p - a))) & full
            else:
                for a in elems:
                    acc |= (mb & ~(1 << a)) << a
                    if mode == MODE_LEMMAS:
                        tot |= mb << a
            rs = acc.bit_count()
            ss = tot.bit_count()
            oracle = rs == sa + sb - 3

            flags = 0
            bad = False
            if mode == MODE_PREDICT:
                pred = i == j and struct[i] != 0
                agree = oracle == pred
                if is_mod and p < sa + sb:
                    counts[BAND_CHECKED] += 1
                    counts[BAND_AGREE] += agree
                if agree:
                    counts[AGREE] += 1
                else:
                    bad = True
            elif mode == MODE_LEMMAS:
                if is_mod:
                    lo1 = min(p, sa + sb - 1)
                    lo2 = min(p, max(0, sa + sb - 3))
                else:
                    lo1 = sa + sb - 1
                    lo2 = max(0, sa + sb - 3)
                counts[L1_CHECKED] += 1
                if ss < lo1:
                    counts[L1_VIOL] += 1
                    flags |= FLAG_L1
                counts[L2_CHECKED] += 1
                if rs < lo2:
                    counts[L2_VIOL] += 1
                    flags |= FLAG_L2
                if not is_mod and sa >= 2 and sb >= 2 and i != j:
                    inter = ma & mb
                    if inter == ma or inter == mb:
                        counts[L5_CHECKED] += 1
                        if rs < sa + sb - 2:
                            counts[L5_VIOL] += 1
                            flags |= FLAG_L5
                    counts[L6_CHECKED] += 1
                    if rs < sa + sb - 2:
                        counts[L6_VIOL] += 1
                        flags |= FLAG_L6
                if flags:
                    bad = True
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
    return counts, viols, collected
