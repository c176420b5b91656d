"""Pure-Python implementations of the hot graph kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Graphs arrive in CSR form: ``indptr``/``indices`` int32 arrays, an ``alive``
uint8 mask and, where relevant, an int32 ``colors`` array holding -1 for
vertices without a color.  Unreachable distances are encoded as -1.
"""
import math
from collections import deque

import numpy as np

NAME = "python"


def bfs_distances(indptr, indices, alive, sources):
    n = len(alive)
    ip = indptr.tolist()
    ix = indices.tolist()
    al = alive.tolist()
    dist = [-1] * n
    queue = deque()
    for s in sources:
        s = int(s)
        if al[s] and dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for k in range(ip[u], ip[u + 1]):
            w = ix[k]
            if dist[w] < 0 and al[w]:
                dist[w] = du
                queue.append(w)
    return np.asarray(dist, dtype=np.int32)


def _class_row(ip, ix, al, col, n_colors, members, c, row, dist):
    # Multi-source BFS from the vertices of class c.  BFS pops vertices in
    # nondecreasing distance, so the first hit on a color is its minimum.
    for j in range(n_colors):
        row[j] = -1
    src = members[c]
    if not src:
        return
    touched = []
    queue = deque()
    for s in src:
        if al[s] and dist[s] < 0:
            dist[s] = 0
            touched.append(s)
            queue.append(s)
    row[c] = 0
    remaining = sum(1 for j in range(n_colors) if members[j]) - 1
    while queue and remaining > 0:
        u = queue.popleft()
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
                touched.append(w)
                queue.append(w)
    for v in touched:
        dist[v] = -1


def _members(col, al, n_colors):
    members = [[] for _ in range(n_colors)]
    for v, c in enumerate(col):
        if c >= 0 and al[v]:
            members[c].append(v)
    return members


def class_distance_matrix(indptr, indices, alive, colors, n_colors):
    ip = indptr.tolist()
    ix = indices.tolist()
    al = alive.tolist()
    col = colors.tolist()
    members = _members(col, al, n_colors)
    dist = [-1] * len(al)
    out = np.full((n_colors, n_colors), -1, dtype=np.int32)
    row = [-1] * n_colors
    for c in range(n_colors):
        _class_row(ip, ix, al, col, n_colors, members, c, row, dist)
        out[c, :] = row
    return out


def vertex_disjoint_flow(indptr, indices, alive, src_mask, sink_mask):
    """Maximum number of vertex-disjoint paths from the source set to the sink set.

    Each live vertex carries unit capacity (split into in/out halves); a path
    may start and end on the same vertex when it lies in both sets.
    """
    n = len(alive)
    ip = indptr.tolist()
    ix = indices.tolist()
    al = alive.tolist()
    sm = src_mask.tolist()
    tm = sink_mask.tolist()
    S = 2 * n
    T = 2 * n + 1
    n_nodes = 2 * n + 2
    first = [-1] * n_nodes
    head = []
    cap = []
    nxt = []

    def add_arc(a, b):
        head.append(b)
        cap.append(1)
        nxt.append(first[a])
        first[a] = len(head) - 1
        head.append(a)
        cap.append(0)
        nxt.append(first[b])
        first[b] = len(head) - 1

    for v in range(n):
        if not al[v]:
            continue
        add_arc(2 * v, 2 * v + 1)
        if sm[v]:
            add_arc(S, 2 * v)
        if tm[v]:
            add_arc(2 * v + 1, T)
        for k in range(ip[v], ip[v + 1]):
            w = ix[k]
            if al[w]:
                add_arc(2 * v + 1, 2 * w)

    flow = 0
    parent = [-1] * n_nodes
    while True:
        for i in range(n_nodes):
            parent[i] = -1
        parent[S] = -2
        queue = deque([S])
        found = False
        while queue and not found:
            x = queue.popleft()
            e = first[x]
            while e >= 0:
                y = head[e]
                if cap[e] > 0 and parent[y] == -1:
                    parent[y] = e
                    if y == T:
                        found = True
                        break
                    queue.append(y)
                e = nxt[e]
        if not found:
            return flow
        y = T
        while y != S:
            e = parent[y]
            cap[e] -= 1
            cap[e ^ 1] += 1
            y = head[e ^ 1]
        flow += 1


def _score(D, nonempty):
    obj = -1
    sec = 0
    for a in nonempty:
        worst = -1
        row = D[a]
        for b in nonempty:
            if b != a and row[b] > worst:
                worst = row[b]
        if worst > obj:
            obj = worst
        if worst > 0:
            sec += worst
    return obj, sec


def anneal(indptr, indices, colors, n_colors, t0, cooling, draws):
    """Swap-move simulated annealing on the min-max inter-class distance.

    ``draws`` is a float64 array of shape (iterations, 3): the first column
    picks the first vertex, the second picks a partner among vertices of a
    different color, the third is the Metropolis uniform.  All vertices must
    be live and colored.  Returns ``(best_colors, best_obj, best_sec,
    init_obj, init_sec)``; the secondary score is the sum of per-class worst
    distances and only breaks ties when tracking the best-seen coloring.
    """
    ip = indptr.tolist()
    ix = indices.tolist()
    n = len(colors)
    al = [1] * n
    col = colors.tolist()
    members = _members(col, al, n_colors)
    pos = [0] * n
    for c in range(n_colors):
        for p, v in enumerate(members[c]):
            pos[v] = p
    sizes = [len(m) for m in members]
    nonempty = [c for c in range(n_colors) if sizes[c]]
    dist = [-1] * n
    D = [[-1] * n_colors for _ in range(n_colors)]
    for c in range(n_colors):
        _class_row(ip, ix, al, col, n_colors, members, c, D[c], dist)
    obj, sec = _score(D, nonempty)
    init_obj, init_sec = obj, sec
    best_obj, best_sec = obj, sec
    best = list(col)
    if len(nonempty) < 2:
        return np.asarray(best, dtype=np.int32), best_obj, best_sec, init_obj, init_sec

    T = t0
    old_a = [0] * n_colors
    old_b = [0] * n_colors
    for u1, u2, u3 in draws.tolist():
        i = min(int(u1 * n), n - 1)
        a = col[i]
        others = n - sizes[a]
        r = min(int(u2 * others), others - 1)
        b = -1
        for c in range(n_colors):
            if c == a:
                continue
            if r < sizes[c]:
                b = c
                break
            r -= sizes[c]
        j = members[b][r]

        def swap():
            pi, pj = pos[i], pos[j]
            ci, cj = col[i], col[j]
            members[ci][pi] = j
            members[cj][pj] = i
            pos[i], pos[j] = pj, pi
            col[i], col[j] = cj, ci

        swap()
        old_a[:] = D[a]
        old_b[:] = D[b]
        _class_row(ip, ix, al, col, n_colors, members, a, D[a], dist)
        _class_row(ip, ix, al, col, n_colors, members, b, D[b], dist)
        for c in range(n_colors):
            D[c][a] = D[a][c]
            D[c][b] = D[b][c]
        new_obj, new_sec = _score(D, nonempty)
        delta = new_obj - obj
        if delta <= 0 or (T > 0 and u3 < math.exp(-delta / T)):
            obj, sec = new_obj, new_sec
            if obj < best_obj or (obj == best_obj and sec < best_sec):
                best_obj, best_sec = obj, sec
                best[:] = col
        else:
            swap()
            D[a][:] = old_a
            D[b][:] = old_b
            for c in range(n_colors):
                D[c][a] = old_a[c]
                D[c][b] = old_b[c]
        T *= cooling
    return np.asarray(best, dtype=np.int32), best_obj, best_sec, init_obj, init_sec
