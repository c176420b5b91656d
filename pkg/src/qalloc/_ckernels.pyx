# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; semantics mirror ``_pykernels`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()

NAME = "cython"


def bfs_distances(const int[::1] indptr, const int[::1] indices,
                  const unsigned char[::1] alive, sources):
    cdef Py_ssize_t n = alive.shape[0]
    dist_arr = np.full(n, -1, dtype=np.int32)
    cdef int[::1] dist = dist_arr
    cdef int[::1] queue = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t qh = 0, qt = 0
    cdef int u, w, du, s
    cdef Py_ssize_t k
    for s in sources:
        if alive[s] and dist[s] < 0:
            dist[s] = 0
            queue[qt] = s
            qt += 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0 and alive[w]:
                dist[w] = du
                queue[qt] = w
                qt += 1
    return dist_arr


cdef void _class_row(const int[::1] ip, const int[::1] ix, const unsigned char[::1] al,
                     int[::1] col, int n_colors, int[:, ::1] members, int[::1] sizes,
                     int c, int[::1] row, int[::1] dist, int[::1] queue) noexcept nogil:
    cdef int j, s, u, w, cu, du, remaining
    cdef Py_ssize_t qh = 0, qt = 0, p, k
    for j in range(n_colors):
        row[j] = -1
    if sizes[c] == 0:
        return
    for p in range(sizes[c]):
        s = members[c, p]
        if al[s] and dist[s] < 0:
            dist[s] = 0
            queue[qt] = s
            qt += 1
    row[c] = 0
    remaining = -1
    for j in range(n_colors):
        if sizes[j] > 0:
            remaining += 1
    while qh < qt and remaining > 0:
        u = queue[qh]
        qh += 1
        cu = col[u]
        if cu >= 0 and row[cu] < 0:
            row[cu] = dist[u]
            remaining -= 1
            if remaining == 0:
                break
        du = dist[u] + 1
        for k in range(ip[u], ip[u + 1]):
            w = ix[k]
            if dist[w] < 0 and al[w]:
                dist[w] = du
                queue[qt] = w
                qt += 1
    # queue[0:qt] holds every vertex touched in this call
    for p in range(qt):
        dist[queue[p]] = -1


cdef tuple _member_table(int[::1] col, const unsigned char[::1] al, int n_colors):
    cdef Py_ssize_t n = col.shape[0], v
    sizes_arr = np.zeros(n_colors, dtype=np.int32)
    cdef int[::1] sizes = sizes_arr
    for v in range(n):
        if col[v] >= 0 and al[v]:
            sizes[col[v]] += 1
    width = max(1, int(sizes_arr.max()) if n_colors else 1)
    members_arr = np.zeros((n_colors, width), dtype=np.int32)
    pos_arr = np.zeros(n, dtype=np.int32)
    cdef int[:, ::1] members = members_arr
    cdef int[::1] pos = pos_arr
    cdef int[::1] fill = np.zeros(n_colors, dtype=np.int32)
    cdef int c
    for v in range(n):
        c = col[v]
        if c >= 0 and al[v]:
            members[c, fill[c]] = v
            pos[v] = fill[c]
            fill[c] += 1
    return members_arr, sizes_arr, pos_arr


def class_distance_matrix(const int[::1] indptr, const int[::1] indices,
                          const unsigned char[::1] alive, colors, int n_colors):
    cdef Py_ssize_t n = alive.shape[0]
    col_arr = np.ascontiguousarray(colors, dtype=np.int32).copy()
    cdef int[::1] col = col_arr
    members_arr, sizes_arr, _ = _member_table(col, alive, n_colors)
    out = np.full((n_colors, n_colors), -1, dtype=np.int32)
    cdef int[:, ::1] D = out
    cdef int[::1] dist = np.full(n, -1, dtype=np.int32)
    cdef int[::1] queue = np.empty(max(n, 1), dtype=np.int32)
    cdef int c
    for c in range(n_colors):
        _class_row(indptr, indices, alive, col, n_colors, members_arr, sizes_arr,
                   c, D[c], dist, queue)
    return out


def vertex_disjoint_flow(const int[::1] indptr, const int[::1] indices,
                         const unsigned char[::1] alive,
                         const unsigned char[::1] src_mask,
                         const unsigned char[::1] sink_mask):
    cdef Py_ssize_t n = alive.shape[0]
    cdef int S = 2 * n, T = 2 * n + 1
    cdef Py_ssize_t n_nodes = 2 * n + 2
    cdef Py_ssize_t max_arcs = 2 * (n + n + n + indices.shape[0]) + 2
    cdef int[::1] first = np.full(n_nodes, -1, dtype=np.int32)
    cdef int[::1] head = np.empty(max_arcs, dtype=np.int32)
    cdef int[::1] cap = np.empty(max_arcs, dtype=np.int32)
    cdef int[::1] nxt = np.empty(max_arcs, dtype=np.int32)
    cdef int[::1] parent = np.empty(n_nodes, dtype=np.int32)
    cdef int[::1] queue = np.empty(n_nodes, dtype=np.int32)
    cdef int m = 0
    cdef int v, w, x, y, e
    cdef Py_ssize_t k, i, qh, qt
    cdef int flow = 0
    cdef bint found

    with nogil:
        for v in range(n):
            if not alive[v]:
                continue
            m = _add_arc(first, head, cap, nxt, m, 2 * v, 2 * v + 1)
            if src_mask[v]:
                m = _add_arc(first, head, cap, nxt, m, S, 2 * v)
            if sink_mask[v]:
                m = _add_arc(first, head, cap, nxt, m, 2 * v + 1, T)
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if alive[w]:
                    m = _add_arc(first, head, cap, nxt, m, 2 * v + 1, 2 * w)

        while True:
            for i in range(n_nodes):
                parent[i] = -1
            parent[S] = -2
            queue[0] = S
            qh = 0
            qt = 1
            found = False
            while qh < qt and not found:
                x = queue[qh]
                qh += 1
                e = first[x]
                while e >= 0:
                    y = head[e]
                    if cap[e] > 0 and parent[y] == -1:
                        parent[y] = e
                        if y == T:
                            found = True
                            break
                        queue[qt] = y
                        qt += 1
                    e = nxt[e]
            if not found:
                break
            y = T
            while y != S:
                e = parent[y]
                cap[e] -= 1
                cap[e ^ 1] += 1
                y = head[e ^ 1]
            flow += 1
    return flow


cdef inline int _add_arc(int[::1] first, int[::1] head, int[::1] cap, int[::1] nxt,
                         int m, int a, int b) noexcept nogil:
    head[m] = b
    cap[m] = 1
    nxt[m] = first[a]
    first[a] = m
    head[m + 1] = a
    cap[m + 1] = 0
    nxt[m + 1] = first[b]
    first[b] = m + 1
    return m + 2


cdef inline void _score(int[:, ::1] D, int[::1] nonempty, int n_ne,
                        int* obj, long* sec) noexcept nogil:
    cdef int p, q, a, b, worst
    obj[0] = -1
    sec[0] = 0
    for p in range(n_ne):
        a = nonempty[p]
        worst = -1
        for q in range(n_ne):
            b = nonempty[q]
            if b != a and D[a, b] > worst:
                worst = D[a, b]
        if worst > obj[0]:
            obj[0] = worst
        if worst > 0:
            sec[0] += worst


cdef inline void _swap(int[::1] col, int[:, ::1] members, int[::1] pos,
                       int i, int j) noexcept nogil:
    cdef int pi = pos[i], pj = pos[j], ci = col[i], cj = col[j]
    members[ci, pi] = j
    members[cj, pj] = i
    pos[i] = pj
    pos[j] = pi
    col[i] = cj
    col[j] = ci


def anneal(const int[::1] indptr, const int[::1] indices, colors, int n_colors,
           double t0, double cooling, const double[:, ::1] draws):
    cdef Py_ssize_t n = colors.shape[0]
    alive_arr = np.ones(n, dtype=np.uint8)
    cdef const unsigned char[::1] al = alive_arr
    col_arr = np.ascontiguousarray(colors, dtype=np.int32).copy()
    cdef int[::1] col = col_arr
    members_arr, sizes_arr, pos_arr = _member_table(col, al, n_colors)
    cdef int[:, ::1] members = members_arr
    cdef int[::1] sizes = sizes_arr
    cdef int[::1] pos = pos_arr
    ne = np.flatnonzero(sizes_arr > 0).astype(np.int32)
    cdef int[::1] nonempty = ne
    cdef int n_ne = ne.shape[0]
    cdef int[::1] dist = np.full(n, -1, dtype=np.int32)
    cdef int[::1] queue = np.empty(max(n, 1), dtype=np.int32)
    D_arr = np.full((n_colors, n_colors), -1, dtype=np.int32)
    cdef int[:, ::1] D = D_arr
    cdef int[::1] old_a = np.empty(n_colors, dtype=np.int32)
    cdef int[::1] old_b = np.empty(n_colors, dtype=np.int32)
    best_arr = col_arr.copy()
    cdef int[::1] best = best_arr
    cdef int c, i, j, a, b, r, others, obj, init_obj, best_obj, new_obj, delta
    cdef long sec, init_sec, best_sec, new_sec
    cdef double T = t0, u1, u2, u3
    cdef Py_ssize_t it, iters = draws.shape[0], v

    for c in range(n_colors):
        _class_row(indptr, indices, al, col, n_colors, members, sizes, c, D[c], dist, queue)
    _score(D, nonempty, n_ne, &obj, &sec)
    init_obj = obj
    init_sec = sec
    best_obj = obj
    best_sec = sec
    if n_ne < 2:
        return best_arr, best_obj, best_sec, init_obj, init_sec

    with nogil:
        for it in range(iters):
            u1 = draws[it, 0]
            u2 = draws[it, 1]
            u3 = draws[it, 2]
            i = <int>(u1 * n)
            if i > n - 1:
                i = n - 1
            a = col[i]
            others = n - sizes[a]
            r = <int>(u2 * others)
            if r > others - 1:
                r = others - 1
            b = -1
            for c in range(n_colors):
                if c == a:
                    continue
                if r < sizes[c]:
                    b = c
                    break
                r -= sizes[c]
            j = members[b, r]

            _swap(col, members, pos, i, j)
            old_a[:] = D[a]
            old_b[:] = D[b]
            _class_row(indptr, indices, al, col, n_colors, members, sizes, a, D[a], dist, queue)
            _class_row(indptr, indices, al, col, n_colors, members, sizes, b, D[b], dist, queue)
            for c in range(n_colors):
                D[c, a] = D[a, c]
                D[c, b] = D[b, c]
            _score(D, nonempty, n_ne, &new_obj, &new_sec)
            delta = new_obj - obj
            if delta <= 0 or u3 < exp(-delta / T):
                obj = new_obj
                sec = new_sec
                if obj < best_obj or (obj == best_obj and sec < best_sec):
                    best_obj = obj
                    best_sec = sec
                    for v in range(n):
                        best[v] = col[v]
            else:
                _swap(col, members, pos, i, j)
                D[a, :] = old_a
                D[b, :] = old_b
                for c in range(n_colors):
                    D[c, a] = old_a[c]
                    D[c, b] = old_b[c]
            T *= cooling
    return best_arr, best_obj, best_sec, init_obj, init_sec
