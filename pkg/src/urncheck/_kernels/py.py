"""Pure-Python twins of the compiled hot kernels.

Same signatures and results as ``_kernels.fast``; arbitrary-precision ints,
so there are no overflow preconditions here.  Selected automatically when the
compiled extension is unavailable or when URNCHECK_PURE_PYTHON=1.
"""

from __future__ import annotations

IMPLEMENTATION = "python"


def orient_occ_tables(n, ends_a, ends_b, xbit, nbits):
    """Orientation tables for prefix-admissibility constraints.

    Edges k have endpoints ends_a[k] <= ends_b[k] (0-based vertices).  xbit[k]
    is the S-mask bit position of edge k when it joins v_n to a smaller vertex,
    else -1.  nbits is the number of such edges.  Direction bits are assigned
    to non-loop edges only; a loop contributes one in- and one out-edge at its
    vertex.  Returns tables[d][smask] = number of orientations in which every
    vertex 0..d-1 has indegree >= 1 and outdegree >= 1 and the edges at the
    last vertex oriented out of it are exactly those with S-mask bits set.

    A loop at the last vertex makes every count 0 (it sits in both the in- and
    out-list, so no S-split is possible).
    """
    m = len(ends_a)
    size = 1 << nbits
    tables = [[0] * size for _ in range(n)]
    last = n - 1
    free = [k for k in range(m) if ends_a[k] != ends_b[k]]
    if any(ends_a[k] == ends_b[k] == last for k in range(m)):
        return tables
    base_out = [0] * n
    base_in = [0] * n
    for k in range(m):
        if ends_a[k] == ends_b[k]:
            base_out[ends_a[k]] += 1
            base_in[ends_a[k]] += 1
    acc = [[0] * size for _ in range(n + 1)]
    nfree = len(free)
    for bits in range(1 << nfree):
        out = base_out[:]
        inn = base_in[:]
        smask = 0
        for pos in range(nfree):
            k = free[pos]
            a, b = ends_a[k], ends_b[k]
            if (bits >> pos) & 1:
                out[a] += 1
                inn[b] += 1
            else:
                out[b] += 1
                inn[a] += 1
                if b == last and xbit[k] >= 0:
                    smask |= 1 << xbit[k]
        dmax = 0
        while dmax < n and out[dmax] >= 1 and inn[dmax] >= 1:
            dmax += 1
        acc[dmax][smask] += 1
    # tables[d] counts orientations admissible for the first d vertices, i.e.
    # those with dmax >= d.
    running = [0] * size
    for dm in range(n, -1, -1):
        row = acc[dm]
        for s in range(size):
            running[s] += row[s]
        if dm <= n - 1:
            tables[dm] = running[:]
    return tables


def orient_ball_table(n, ends_a, ends_b, xbit, nbits, avec):
    """Orientation table for exact in/out-degree constraints.

    avec constrains vertices 0..d-1 to indegree == outdegree == avec[i].
    Same edge/S conventions as orient_occ_tables.
    """
    m = len(ends_a)
    size = 1 << nbits
    table = [0] * size
    last = n - 1
    d = len(avec)
    if any(ends_a[k] == ends_b[k] == last for k in range(m)):
        return table
    deg = [0] * n
    for k in range(m):
        deg[ends_a[k]] += 1
        deg[ends_b[k]] += 1
    for i in range(d):
        if deg[i] != 2 * avec[i]:
            return table
    base_out = [0] * n
    base_in = [0] * n
    for k in range(m):
        if ends_a[k] == ends_b[k]:
            base_out[ends_a[k]] += 1
            base_in[ends_a[k]] += 1
    free = [k for k in range(m) if ends_a[k] != ends_b[k]]
    nfree = len(free)
    for bits in range(1 << nfree):
        out = base_out[:]
        inn = base_in[:]
        smask = 0
        for pos in range(nfree):
            k = free[pos]
            a, b = ends_a[k], ends_b[k]
            if (bits >> pos) & 1:
                out[a] += 1
                inn[b] += 1
            else:
                out[b] += 1
                inn[a] += 1
                if b == last and xbit[k] >= 0:
                    smask |= 1 << xbit[k]
        ok = True
        for i in range(d):
            if out[i] != avec[i] or inn[i] != avec[i]:
                ok = False
                break
        if ok:
            table[smask] += 1
    return table


def masked_sums(weights, masks):
    """Sum of weights over the set bits of each mask."""
    out = []
    for mask in masks:
        s = 0
        mm = mask
        while mm:
            low = mm & -mm
            s += weights[low.bit_length() - 1]
            mm ^= low
        out.append(s)
    return out


def upset_pair_scan(weights, total, masks_a, vals_a, masks_b, vals_b,
                    pairs_a, pairs_b):
    """First index p with w(A_p & B_p) * total > vals_a[p'] * vals_b[p''].

    pairs_a/pairs_b index into masks_a/masks_b; returns -1 when every listed
    pair satisfies the negative-correlation inequality.
    """
    for p in range(len(pairs_a)):
        ia = pairs_a[p]
        ib = pairs_b[p]
        va = vals_a[ia]
        if va == 0 or va == total:
            continue
        vb = vals_b[ib]
        if vb == 0 or vb == total:
            continue
        mm = masks_a[ia] & masks_b[ib]
        s = 0
        while mm:
            low = mm & -mm
            s += weights[low.bit_length() - 1]
            mm ^= low
        if s * total > va * vb:
            return p
    return -1


def fm_scan(weights, wsum, total, total_sum, event_masks, coord_masks,
            coord_totals):
    """First event index violating the positive-coordinate condition, or -1.

    For each nontrivial event A (0 < w(A) < total) there must be a coordinate
    j with w(A & x_j) * total >= w(A) * coord_totals[j].  wsum[i] must equal
    weights[i] times the coordinate sum of point i, and total_sum its total;
    the scan first tries the aggregate shortcut sum_j Cov(A, x_j) >= 0, which
    guarantees some coordinate works.
    """
    ncoords = len(coord_masks)
    for idx in range(len(event_masks)):
        mask = event_masks[idx]
        v = 0
        vs = 0
        mm = mask
        while mm:
            low = mm & -mm
            i = low.bit_length() - 1
            v += weights[i]
            vs += wsum[i]
            mm ^= low
        if v == 0 or v == total:
            continue
        if vs * total >= v * total_sum:
            continue
        ok = False
        for j in range(ncoords):
            mm = mask & coord_masks[j]
            s = 0
            while mm:
                low = mm & -mm
                s += weights[low.bit_length() - 1]
                mm ^= low
            if s * total >= v * coord_totals[j]:
                ok = True
                break
        if not ok:
            return idx
    return -1
