# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled level sweep.  Same contract as ``reebreal._sweep_py.level_sweep``."""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef inline i64 _find(i64[::1] parent, i64 x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef inline void _union(i64[::1] parent, i64 a, i64 b) noexcept nogil:
    cdef i64 ra = _find(parent, a)
    cdef i64 rb = _find(parent, b)
    if ra != rb:
        parent[ra] = rb


def _csr(counts):
    ptr = np.zeros(len(counts) + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr


def level_sweep(vlevel_in, tri_in, tri_edge_in, edge_in, Py_ssize_t nlevels):
    cdef i64[::1] vlevel = np.ascontiguousarray(vlevel_in, dtype=np.int64)
    cdef i64[:, ::1] tri = np.ascontiguousarray(tri_in, dtype=np.int64).reshape(-1, 3)
    cdef i64[:, ::1] tri_edge = np.ascontiguousarray(tri_edge_in, dtype=np.int64).reshape(-1, 3)
    cdef i64[:, ::1] edge = np.ascontiguousarray(edge_in, dtype=np.int64).reshape(-1, 2)
    cdef Py_ssize_t nv = vlevel.shape[0], ne = edge.shape[0], nt = tri.shape[0]
    cdef Py_ssize_t K = nlevels
    cdef Py_ssize_t t, e, v, k, j, i, a, b, x

    cdef i64[::1] elo = np.empty(ne, dtype=np.int64)
    cdef i64[::1] ehi = np.empty(ne, dtype=np.int64)
    cdef i64[::1] tlo = np.empty(nt, dtype=np.int64)
    cdef i64[::1] thi = np.empty(nt, dtype=np.int64)
    for e in range(ne):
        a = vlevel[edge[e, 0]]
        b = vlevel[edge[e, 1]]
        elo[e] = a if a < b else b
        ehi[e] = b if a < b else a
    for t in range(nt):
        a = vlevel[tri[t, 0]]
        b = a
        for j in range(1, 3):
            x = vlevel[tri[t, j]]
            if x < a:
                a = x
            if x > b:
                b = x
        tlo[t] = a
        thi[t] = b

    # CSR buckets: triangles meeting each level, vertices at and edges crossing each level
    tcount = np.zeros(K, dtype=np.int64)
    vcount = np.zeros(K, dtype=np.int64)
    ecount = np.zeros(K, dtype=np.int64)
    cdef i64[::1] tc = tcount, vc = vcount, ec = ecount
    for t in range(nt):
        for k in range(tlo[t], thi[t] + 1):
            tc[k] += 1
    for v in range(nv):
        vc[vlevel[v]] += 1
    for e in range(ne):
        for k in range(elo[e] + 1, ehi[e]):
            ec[k] += 1
    cdef i64[::1] tptr = _csr(tcount), vptr = _csr(vcount), eptr = _csr(ecount)
    cdef i64[::1] tlist = np.empty(tptr[K], dtype=np.int64)
    cdef i64[::1] vlist = np.empty(vptr[K], dtype=np.int64)
    cdef i64[::1] elist = np.empty(eptr[K], dtype=np.int64)
    cdef i64[::1] fill = np.zeros(K, dtype=np.int64)
    for t in range(nt):
        for k in range(tlo[t], thi[t] + 1):
            tlist[tptr[k] + fill[k]] = t
            fill[k] += 1
    fill[:] = 0
    for v in range(nv):
        k = vlevel[v]
        vlist[vptr[k] + fill[k]] = v
        fill[k] += 1
    fill[:] = 0
    for e in range(ne):
        for k in range(elo[e] + 1, ehi[e]):
            elist[eptr[k] + fill[k]] = e
            fill[k] += 1

    cdef i64[::1] parent = np.arange(nv + ne, dtype=np.int64)
    cdef i64[:, ::1] labels = np.full((2, nv + ne), -1, dtype=np.int64)
    cdef i64[::1] rootid = np.full(nv + ne, -1, dtype=np.int64)
    cdef i64[::1] deg = np.zeros(ne, dtype=np.int64)
    cdef i64[::1] members = np.empty(ne, dtype=np.int64)
    ncomp_arr = np.zeros(K, dtype=np.int64)
    cdef i64[::1] ncomp = ncomp_arr
    plateau = []
    slabs = []
    cdef i64 first, el, r, n, lo_el, hi_el, cur, nm, p0, p1
    cdef i64[::1] lab, low, high, fl, ms
    cdef i64[:, ::1] rows
    rows_buf = np.zeros((max(ne, 1), 6), dtype=np.int64)
    rows = rows_buf

    # pass order: level 0, then level k+1 followed by slab k
    for cur in range(K + K - 1):
        if cur == 0 or cur % 2 == 1:
            # ---- level k
            k = (cur + 1) // 2
            lab = labels[k % 2]
            for i in range(tptr[k], tptr[k + 1]):
                t = tlist[i]
                first = -1
                for j in range(3):
                    x = tri[t, j]
                    if vlevel[x] == k:
                        if first < 0:
                            first = x
                        else:
                            _union(parent, first, x)
                for j in range(3):
                    e = tri_edge[t, j]
                    if elo[e] < k and k < ehi[e]:
                        el = nv + e
                        if first < 0:
                            first = el
                        else:
                            _union(parent, first, el)
            n = 0
            for i in range(vptr[k], vptr[k + 1]):
                el = vlist[i]
                r = _find(parent, el)
                if rootid[r] < 0:
                    rootid[r] = n
                    n += 1
                lab[el] = rootid[r]
            for i in range(eptr[k], eptr[k + 1]):
                el = nv + elist[i]
                r = _find(parent, el)
                if rootid[r] < 0:
                    rootid[r] = n
                    n += 1
                lab[el] = rootid[r]
            flags = np.zeros(n, dtype=np.int64)
            fl = flags
            for i in range(tptr[k], tptr[k + 1]):
                t = tlist[i]
                for j in range(3):
                    e = tri_edge[t, j]
                    if elo[e] == k and ehi[e] == k:
                        fl[lab[edge[e, 0]]] = 1
            # reset
            for i in range(vptr[k], vptr[k + 1]):
                el = vlist[i]
                rootid[_find(parent, el)] = -1
            for i in range(eptr[k], eptr[k + 1]):
                el = nv + elist[i]
                rootid[_find(parent, el)] = -1
            for i in range(vptr[k], vptr[k + 1]):
                el = vlist[i]
                parent[el] = el
            for i in range(eptr[k], eptr[k + 1]):
                el = nv + elist[i]
                parent[el] = el
            ncomp[k] = n
            plateau.extend(flags.tolist())
        else:
            # ---- slab between k and k + 1 (level k + 1 is already labeled)
            k = cur // 2 - 1
            low = labels[k % 2]
            high = labels[(k + 1) % 2]
            nm = 0
            for i in range(tptr[k], tptr[k + 1]):
                t = tlist[i]
                if thi[t] <= k:
                    continue
                p0 = -1
                p1 = -1
                for j in range(3):
                    e = tri_edge[t, j]
                    if elo[e] <= k and ehi[e] >= k + 1:
                        if deg[e] == 0:
                            members[nm] = e
                            nm += 1
                        deg[e] += 1
                        if p0 < 0:
                            p0 = e
                        else:
                            p1 = e
                _union(parent, nv + p0, nv + p1)
            ms = np.sort(np.asarray(members[:nm]))
            n = 0
            for i in range(nm):
                e = ms[i]
                r = _find(parent, nv + e)
                if rootid[r] < 0:
                    rootid[r] = n
                    a = edge[e, 0]
                    b = edge[e, 1]
                    if elo[e] == k:
                        lo_el = a if vlevel[a] == k else b
                    else:
                        lo_el = nv + e
                    if ehi[e] == k + 1:
                        hi_el = a if vlevel[a] == k + 1 else b
                    else:
                        hi_el = nv + e
                    rows[n, 0] = k
                    rows[n, 1] = low[lo_el]
                    rows[n, 2] = high[hi_el]
                    rows[n, 3] = 0
                    rows[n, 4] = 0
                    rows[n, 5] = 1
                    n += 1
                x = rootid[r]
                rows[x, 3] += 1
                rows[x, 4] += deg[e]
                if deg[e] != 2:
                    rows[x, 5] = 0
            for x in range(n):
                slabs.append((rows[x, 0], rows[x, 1], rows[x, 2], rows[x, 3],
                              rows[x, 4] // 2, rows[x, 5]))
            for i in range(nm):
                e = ms[i]
                rootid[_find(parent, nv + e)] = -1
            for i in range(nm):
                e = ms[i]
                parent[nv + e] = nv + e
                deg[e] = 0
    return ncomp_arr.tolist(), plateau, slabs
