# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of _kernels.py — identical results on in-range inputs.

Callers guarantee: <= 64 mask bits, <= 16 constrained coordinates, totals
within INT64_SAFE_TOTAL, <= 20 free edges.  The pure twin has no such limits.
"""

from libc.stdlib cimport free, malloc

IMPLEMENTATION = "compiled"


def orient_occ_tables(n, ends_a, ends_b, xbit, nbits):
    cdef int cn = n
    cdef int m = len(ends_a)
    cdef int size = 1 << nbits
    cdef int last = cn - 1
    cdef int k, pos, a, b, dmax, s, dm
    cdef unsigned long long bits, nconf
    cdef long long smask

    tables = [[0] * size for _ in range(cn)]
    for k in range(m):
        if ends_a[k] == ends_b[k] == last:
            return tables

    cdef int *ea = <int *> malloc(m * sizeof(int))
    cdef int *eb = <int *> malloc(m * sizeof(int))
    cdef int *xb = <int *> malloc(m * sizeof(int))
    cdef int *freeidx = <int *> malloc((m + 1) * sizeof(int))
    cdef int *base_out = <int *> malloc(cn * sizeof(int))
    cdef int *base_in = <int *> malloc(cn * sizeof(int))
    cdef int *out = <int *> malloc(cn * sizeof(int))
    cdef int *inn = <int *> malloc(cn * sizeof(int))
    cdef long long *acc = <long long *> malloc((cn + 1) * size * sizeof(long long))
    if not (ea and eb and xb and freeidx and base_out and base_in and out and inn and acc):
        raise MemoryError()
    cdef int nfree = 0
    try:
        for k in range(cn):
            base_out[k] = 0
            base_in[k] = 0
        for k in range((cn + 1) * size):
            acc[k] = 0
        for k in range(m):
            ea[k] = ends_a[k]
            eb[k] = ends_b[k]
            xb[k] = xbit[k]
            if ea[k] != eb[k]:
                freeidx[nfree] = k
                nfree += 1
            else:
                base_out[ea[k]] += 1
                base_in[ea[k]] += 1
        nconf = (<unsigned long long> 1) << nfree
        for bits in range(nconf):
            for k in range(cn):
                out[k] = base_out[k]
                inn[k] = base_in[k]
            smask = 0
            for pos in range(nfree):
                k = freeidx[pos]
                a = ea[k]
                b = eb[k]
                if (bits >> pos) & 1:
                    out[a] += 1
                    inn[b] += 1
                else:
                    out[b] += 1
                    inn[a] += 1
                    if b == last and xb[k] >= 0:
                        smask |= (<long long> 1) << xb[k]
            dmax = 0
            while dmax < cn and out[dmax] >= 1 and inn[dmax] >= 1:
                dmax += 1
            acc[dmax * size + smask] += 1
        for dm in range(cn - 1, -1, -1):
            row = tables[dm]
            for s in range(size):
                acc[dm * size + s] += acc[(dm + 1) * size + s]
                row[s] = acc[dm * size + s]
    finally:
        free(ea); free(eb); free(xb); free(freeidx)
        free(base_out); free(base_in); free(out); free(inn); free(acc)
    return tables


def orient_ball_table(n, ends_a, ends_b, xbit, nbits, avec):
    cdef int cn = n
    cdef int m = len(ends_a)
    cdef int size = 1 << nbits
    cdef int last = cn - 1
    cdef int d = len(avec)
    cdef int k, pos, a, b, i, s
    cdef unsigned long long bits, nconf
    cdef long long smask
    cdef bint ok

    table = [0] * size
    for k in range(m):
        if ends_a[k] == ends_b[k] == last:
            return table

    cdef int *ea = <int *> malloc(m * sizeof(int))
    cdef int *eb = <int *> malloc(m * sizeof(int))
    cdef int *xb = <int *> malloc(m * sizeof(int))
    cdef int *freeidx = <int *> malloc((m + 1) * sizeof(int))
    cdef int *base_out = <int *> malloc(cn * sizeof(int))
    cdef int *base_in = <int *> malloc(cn * sizeof(int))
    cdef int *out = <int *> malloc(cn * sizeof(int))
    cdef int *inn = <int *> malloc(cn * sizeof(int))
    cdef int *av = <int *> malloc((d + 1) * sizeof(int))
    cdef int *deg = <int *> malloc(cn * sizeof(int))
    cdef long long *tab = <long long *> malloc(size * sizeof(long long))
    if not (ea and eb and xb and freeidx and base_out and base_in and out and inn and av and deg and tab):
        raise MemoryError()
    cdef int nfree = 0
    try:
        for k in range(cn):
            base_out[k] = 0
            base_in[k] = 0
            deg[k] = 0
        for k in range(size):
            tab[k] = 0
        for i in range(d):
            av[i] = avec[i]
        for k in range(m):
            ea[k] = ends_a[k]
            eb[k] = ends_b[k]
            xb[k] = xbit[k]
            deg[ea[k]] += 1
            deg[eb[k]] += 1
            if ea[k] != eb[k]:
                freeidx[nfree] = k
                nfree += 1
            else:
                base_out[ea[k]] += 1
                base_in[ea[k]] += 1
        for i in range(d):
            if deg[i] != 2 * av[i]:
                return table
        nconf = (<unsigned long long> 1) << nfree
        for bits in range(nconf):
            for k in range(cn):
                out[k] = base_out[k]
                inn[k] = base_in[k]
            smask = 0
            for pos in range(nfree):
                k = freeidx[pos]
                a = ea[k]
                b = eb[k]
                if (bits >> pos) & 1:
                    out[a] += 1
                    inn[b] += 1
                else:
                    out[b] += 1
                    inn[a] += 1
                    if b == last and xb[k] >= 0:
                        smask |= (<long long> 1) << xb[k]
            ok = True
            for i in range(d):
                if out[i] != av[i] or inn[i] != av[i]:
                    ok = False
                    break
            if ok:
                tab[smask] += 1
        for s in range(size):
            table[s] = tab[s]
    finally:
        free(ea); free(eb); free(xb); free(freeidx)
        free(base_out); free(base_in); free(out); free(inn)
        free(av); free(deg); free(tab)
    return table


cdef inline long long _masked_sum(long long *w, unsigned long long mask) noexcept:
    cdef long long s = 0
    cdef unsigned long long mm = mask, low
    cdef int i
    while mm:
        low = mm & (~mm + 1)
        i = 0
        while not (low & 1):
            low >>= 1
            i += 1
        s += w[i]
        mm &= mm - 1
    return s


cdef long long *_copy_weights(weights) except NULL:
    cdef int npts = len(weights)
    cdef long long *w = <long long *> malloc((npts + 1) * sizeof(long long))
    if not w:
        raise MemoryError()
    cdef int i
    for i in range(npts):
        w[i] = weights[i]
    return w


def masked_sums(weights, masks):
    cdef long long *w = _copy_weights(weights)
    out = []
    cdef unsigned long long mask
    try:
        for mask in masks:
            out.append(_masked_sum(w, mask))
    finally:
        free(w)
    return out


def upset_pair_scan(weights, total, masks_a, vals_a, masks_b, vals_b,
                    pairs_a, pairs_b):
    cdef long long ctotal = total
    cdef int npairs = len(pairs_a)
    cdef int p, ia, ib
    cdef long long va, vb, s
    cdef long long *w = _copy_weights(weights)

    cdef int na = len(masks_a)
    cdef int nb = len(masks_b)
    cdef unsigned long long *ma = <unsigned long long *> malloc((na + 1) * sizeof(unsigned long long))
    cdef unsigned long long *mb = <unsigned long long *> malloc((nb + 1) * sizeof(unsigned long long))
    cdef long long *cva = <long long *> malloc((na + 1) * sizeof(long long))
    cdef long long *cvb = <long long *> malloc((nb + 1) * sizeof(long long))
    cdef int *pa = <int *> malloc((npairs + 1) * sizeof(int))
    cdef int *pb = <int *> malloc((npairs + 1) * sizeof(int))
    if not (ma and mb and cva and cvb and pa and pb):
        raise MemoryError()
    cdef int i
    try:
        for i in range(na):
            ma[i] = masks_a[i]
            cva[i] = vals_a[i]
        for i in range(nb):
            mb[i] = masks_b[i]
            cvb[i] = vals_b[i]
        for i in range(npairs):
            pa[i] = pairs_a[i]
            pb[i] = pairs_b[i]
        for p in range(npairs):
            ia = pa[p]
            va = cva[ia]
            if va == 0 or va == ctotal:
                continue
            ib = pb[p]
            vb = cvb[ib]
            if vb == 0 or vb == ctotal:
                continue
            s = _masked_sum(w, ma[ia] & mb[ib])
            if s * ctotal > va * vb:
                return p
        return -1
    finally:
        free(w); free(ma); free(mb); free(cva); free(cvb); free(pa); free(pb)


def fm_scan(weights, wsum, total, total_sum, event_masks, coord_masks,
            coord_totals):
    cdef long long ctotal = total
    cdef long long ctotal_sum = total_sum
    cdef int nevents = len(event_masks)
    cdef int ncoords = len(coord_masks)
    cdef int idx, j, i
    cdef long long v, vs, s
    cdef unsigned long long mask, mm, low
    cdef bint ok

    cdef long long *w = _copy_weights(weights)
    cdef long long *ws = NULL
    cdef unsigned long long *cm = NULL
    cdef long long *ct = NULL
    try:
        ws = _copy_weights(wsum)
        cm = <unsigned long long *> malloc((ncoords + 1) * sizeof(unsigned long long))
        ct = <long long *> malloc((ncoords + 1) * sizeof(long long))
        if not (cm and ct):
            raise MemoryError()
        for j in range(ncoords):
            cm[j] = coord_masks[j]
            ct[j] = coord_totals[j]
        for idx in range(nevents):
            mask = event_masks[idx]
            v = 0
            vs = 0
            mm = mask
            while mm:
                low = mm & (~mm + 1)
                i = 0
                while not (low & 1):
                    low >>= 1
                    i += 1
                v += w[i]
                vs += ws[i]
                mm &= mm - 1
            if v == 0 or v == ctotal:
                continue
            if vs * ctotal >= v * ctotal_sum:
                continue
            ok = False
            for j in range(ncoords):
                s = _masked_sum(w, mask & cm[j])
                if s * ctotal >= v * ct[j]:
                    ok = True
                    break
            if not ok:
                return idx
        return -1
    finally:
        free(w)
        if ws:
            free(ws)
        if cm:
            free(cm)
        if ct:
            free(ct)
