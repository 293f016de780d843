"""Pure-Python level sweep; the reference for the compiled ``_sweep`` module.

Both implementations take the same arrays and return the same tuples:

``vlevel[v]``
    index of vertex v's height among the sorted distinct heights.
``tri[t]``, ``tri_edge[t]``
    the three vertices and the three edge ids of triangle t.
``edge[e]``
    the two vertices of edge e.

At a level k the level set is made of *elements*: vertices at level k (id v)
and edges crossing k strictly (id V + e).  Triangles glue the elements they
meet.  In the open slab between levels k and k+1 the elements are the edges
spanning the whole slab, glued by triangles spanning the slab.

Returns ``(ncomp, plateau, slabs)``:

* ``ncomp[k]``: number of level-set components at level k;
* ``plateau``: flat 0/1 list, components of level 0 first, then level 1, ...;
  1 when the component contains a horizontal mesh edge;
* ``slabs``: rows ``(k, lower, upper, n_elements, n_triangles, all_degree_two)``
  for each component of slab k, ``lower``/``upper`` being component numbers at
  levels k and k+1.
"""


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def level_sweep(vlevel, tri, tri_edge, edge, nlevels):
    vlevel = [int(x) for x in vlevel]
    tri = [tuple(int(x) for x in t) for t in tri]
    tri_edge = [tuple(int(x) for x in t) for t in tri_edge]
    edge = [tuple(int(x) for x in e) for e in edge]
    nv, ne, K = len(vlevel), len(edge), int(nlevels)

    elo = [min(vlevel[a], vlevel[b]) for a, b in edge]
    ehi = [max(vlevel[a], vlevel[b]) for a, b in edge]
    tlo = [min(vlevel[a], vlevel[b], vlevel[c]) for a, b, c in tri]
    thi = [max(vlevel[a], vlevel[b], vlevel[c]) for a, b, c in tri]

    tri_at = [[] for _ in range(K)]
    for t in range(len(tri)):
        for k in range(tlo[t], thi[t] + 1):
            tri_at[k].append(t)
    verts_at = [[] for _ in range(K)]
    for v in range(nv):
        verts_at[vlevel[v]].append(v)
    edges_at = [[] for _ in range(K)]
    for e in range(ne):
        for k in range(elo[e] + 1, ehi[e]):
            edges_at[k].append(e)

    parent = list(range(nv + ne))
    labels = [[-1] * (nv + ne), [-1] * (nv + ne)]
    ncomp = [0] * K
    plateau = []
    slabs = []

    def do_level(k):
        lab = labels[k % 2]
        for t in tri_at[k]:
            first = -1
            for x in tri[t]:
                if vlevel[x] == k:
                    if first < 0:
                        first = x
                    else:
                        ra, rb = _find(parent, first), _find(parent, x)
                        if ra != rb:
                            parent[ra] = rb
            for e in tri_edge[t]:
                if elo[e] < k < ehi[e]:
                    el = nv + e
                    if first < 0:
                        first = el
                    else:
                        ra, rb = _find(parent, first), _find(parent, el)
                        if ra != rb:
                            parent[ra] = rb
        members = verts_at[k] + [nv + e for e in edges_at[k]]
        root_id = {}
        for el in members:
            r = _find(parent, el)
            if r not in root_id:
                root_id[r] = len(root_id)
            lab[el] = root_id[r]
        flags = [0] * len(root_id)
        for t in tri_at[k]:
            for e in tri_edge[t]:
                if elo[e] == k and ehi[e] == k:
                    flags[lab[edge[e][0]]] = 1
        for el in members:
            parent[el] = el
        ncomp[k] = len(root_id)
        plateau.extend(flags)

    def do_slab(k):
        low, high = labels[k % 2], labels[(k + 1) % 2]
        members = []
        deg = {}
        for t in tri_at[k]:
            if thi[t] <= k:
                continue
            pair = [e for e in tri_edge[t] if elo[e] <= k and ehi[e] >= k + 1]
            a, b = pair
            for e in pair:
                if e not in deg:
                    deg[e] = 0
                    members.append(e)
                deg[e] += 1
            ra, rb = _find(parent, nv + a), _find(parent, nv + b)
            if ra != rb:
                parent[ra] = rb
        members.sort()
        rows = {}
        order = []
        for e in members:
            r = _find(parent, nv + e)
            if r not in rows:
                a, b = edge[e]
                lo_el = (a if vlevel[a] == k else b) if elo[e] == k else nv + e
                hi_el = (a if vlevel[a] == k + 1 else b) if ehi[e] == k + 1 else nv + e
                rows[r] = [k, low[lo_el], high[hi_el], 0, 0, 1]
                order.append(r)
            row = rows[r]
            row[3] += 1
            row[4] += deg[e]
            if deg[e] != 2:
                row[5] = 0
        for r in order:
            row = rows[r]
            row[4] //= 2
            slabs.append(tuple(row))
        for e in members:
            parent[nv + e] = nv + e

    if K:
        do_level(0)
    for k in range(K - 1):
        do_level(k + 1)
        do_slab(k)
    return ncomp, plateau, slabs
