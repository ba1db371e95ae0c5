import os

import numba
import numpy as np
from numba import njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # skip probing TBB, which warns when the installed version is too old
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

DIAMETER, RADIUS, MST = 0, 1, 2


@njit(cache=True)
def _adjacency(n, us, vs, w):
    # parallel edges collapse to their lightest copy; self-loops never matter
    adj = np.full((n, n), np.inf)
    for e in range(us.shape[0]):
        a = us[e]
        b = vs[e]
        if a == b:
            continue
        x = w[e]
        if x < adj[a, b]:
            adj[a, b] = x
            adj[b, a] = x
    return adj


@njit(cache=True)
def _diameter(adj, n):
    d = adj.copy()
    for i in range(n):
        d[i, i] = 0.0
    for k in range(n):
        for i in range(n):
            dik = d[i, k]
            if dik == np.inf:
                continue
            for j in range(n):
                x = dik + d[k, j]
                if x < d[i, j]:
                    d[i, j] = x
    best = 0.0
    for i in range(n):
        for j in range(n):
            if d[i, j] > best:
                best = d[i, j]
    return best


@njit(cache=True)
def _radius(adj, n, src):
    dist = np.full(n, np.inf)
    done = np.zeros(n, np.bool_)
    dist[src] = 0.0
    for _ in range(n):
        u = -1
        best = np.inf
        for v in range(n):
            if not done[v] and dist[v] < best:
                best = dist[v]
                u = v
        if u == -1:
            return np.inf
        done[u] = True
        for v in range(n):
            if not done[v]:
                x = best + adj[u, v]
                if x < dist[v]:
                    dist[v] = x
    r = 0.0
    for v in range(n):
        if dist[v] > r:
            r = dist[v]
    return r


@njit(cache=True)
def _mst(adj, n):
    key = np.full(n, np.inf)
    in_tree = np.zeros(n, np.bool_)
    key[0] = 0.0
    total = 0.0
    for _ in range(n):
        u = -1
        best = np.inf
        for v in range(n):
            if not in_tree[v] and key[v] < best:
                best = key[v]
                u = v
        if u == -1:
            return np.inf
        in_tree[u] = True
        total += best
        for v in range(n):
            if not in_tree[v] and adj[u, v] < key[v]:
                key[v] = adj[u, v]
    return total


@njit(parallel=True, cache=True)
def batch_property(kind, n, us, vs, weights, designated):
    S = weights.shape[0]
    out = np.empty(S)
    for s in prange(S):
        adj = _adjacency(n, us, vs, weights[s])
        if kind == DIAMETER:
            out[s] = _diameter(adj, n)
        elif kind == RADIUS:
            out[s] = _radius(adj, n, designated)
        else:
            out[s] = _mst(adj, n)
    return out


@njit(cache=True)
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(parallel=True, cache=True)
def contraction_trials(n, us, vs, costs, k, u_keys, u_perm, u_size, cum):
    T = u_keys.shape[0]
    m = us.shape[0]
    out = np.empty((T, n), np.int16)
    for t in prange(T):
        # exponential clocks: firing order = contraction order with P(e) ~ cost(e)
        clocks = np.empty(m)
        for e in range(m):
            clocks[e] = -np.log(u_keys[t, e]) / costs[e]
        order = np.argsort(clocks)
        parent = np.arange(n)
        comps = n
        for idx in range(m):
            if comps <= k:
                break
            e = order[idx]
            a = _find(parent, us[e])
            b = _find(parent, vs[e])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
                comps -= 1
        meta = np.empty(n, np.int64)
        root_id = np.full(n, -1)
        s = 0
        for v in range(n):
            r = _find(parent, v)
            if root_id[r] == -1:
                root_id[r] = s
                s += 1
            meta[v] = root_id[r]
        # uniform set partition of the s meta-vertices
        perm = np.argsort(u_perm[t, :s])
        block = np.empty(s, np.int64)
        pos = 0
        b = 0
        rem = s
        while rem > 0:
            u = u_size[t, b]
            j = 0
            while j < rem - 1 and cum[rem, j] <= u:
                j += 1
            for q in range(j + 1):
                block[perm[pos + q]] = b
            pos += j + 1
            rem -= j + 1
            b += 1
        relabel = np.full(s, -1)
        nxt = 0
        for v in range(n):
            bb = block[meta[v]]
            if relabel[bb] == -1:
                relabel[bb] = nxt
                nxt += 1
            out[t, v] = relabel[bb]
    return out


@njit(parallel=True, cache=True)
def klm_indicators(indptr, indices, q, cum, u_clause, u_vars):
    S = u_clause.shape[0]
    C = indptr.shape[0] - 1
    V = q.shape[0]
    out = np.zeros(S, np.bool_)
    for s in prange(S):
        j = np.searchsorted(cum, u_clause[s], side="right")
        if j >= C:
            j = C - 1
        assign = np.empty(V, np.bool_)
        for v in range(V):
            assign[v] = u_vars[s, v] < q[v]
        for t in range(indptr[j], indptr[j + 1]):
            assign[indices[t]] = True
        first = True
        for c in range(j):
            sat = True
            for t in range(indptr[c], indptr[c + 1]):
                if not assign[indices[t]]:
                    sat = False
                    break
            if sat:
                first = False
                break
        out[s] = first
    return out
