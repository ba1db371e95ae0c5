"""Pure-numpy twins of the compiled kernels.

Each function mirrors its numba counterpart operation for operation
(same tie-breaking, same summation order), vectorized across samples.
"""

import numpy as np

DIAMETER, RADIUS, MST = 0, 1, 2


def _adjacency(n, us, vs, weights):
    S = weights.shape[0]
    adj = np.full((S, n, n), np.inf)
    keep = us != vs
    us, vs, w = us[keep], vs[keep], weights[:, keep]
    rows = np.arange(S)[:, None]
    np.minimum.at(adj, (rows, us[None, :], vs[None, :]), w)
    np.minimum.at(adj, (rows, vs[None, :], us[None, :]), w)
    return adj


def _diameter(adj, n):
    d = adj.copy()
    idx = np.arange(n)
    d[:, idx, idx] = 0.0
    for k in range(n):
        np.minimum(d, d[:, :, k, None] + d[:, None, k, :], out=d)
    return d.reshape(d.shape[0], -1).max(axis=1, initial=0.0)


def _radius(adj, n, src):
    S = adj.shape[0]
    rows = np.arange(S)
    dist = np.full((S, n), np.inf)
    dist[:, src] = 0.0
    done = np.zeros((S, n), bool)
    alive = np.ones(S, bool)
    for _ in range(n):
        cand = np.where(done, np.inf, dist)
        u = cand.argmin(axis=1)
        best = cand[rows, u]
        alive &= best < np.inf
        done[rows, u] = True
        x = best[:, None] + adj[rows, u, :]
        upd = ~done & (x < dist)
        dist = np.where(upd, x, dist)
    r = dist.max(axis=1, initial=0.0)
    return np.where(alive, r, np.inf)


def _mst(adj, n):
    S = adj.shape[0]
    rows = np.arange(S)
    key = np.full((S, n), np.inf)
    key[:, 0] = 0.0
    in_tree = np.zeros((S, n), bool)
    total = np.zeros(S)
    alive = np.ones(S, bool)
    for _ in range(n):
        cand = np.where(in_tree, np.inf, key)
        u = cand.argmin(axis=1)
        best = cand[rows, u]
        alive &= best < np.inf
        in_tree[rows, u] = True
        total = total + np.where(alive, best, 0.0)
        w = adj[rows, u, :]
        key = np.where(~in_tree & (w < key), w, key)
    return np.where(alive, total, np.inf)


def batch_property(kind, n, us, vs, weights, designated):
    out = np.empty(weights.shape[0])
    step = max(1, (1 << 22) // max(1, n * n))
    for start in range(0, weights.shape[0], step):
        adj = _adjacency(n, us, vs, weights[start:start + step])
        if kind == DIAMETER:
            out[start:start + step] = _diameter(adj, n)
        elif kind == RADIUS:
            out[start:start + step] = _radius(adj, n, designated)
        else:
            out[start:start + step] = _mst(adj, n)
    return out


def contraction_trials(n, us, vs, costs, k, u_keys, u_perm, u_size, cum):
    T, m = u_keys.shape
    K = u_perm.shape[1]
    rows = np.arange(T)
    with np.errstate(divide="ignore"):
        clocks = -np.log(u_keys) / costs
    order = np.argsort(clocks, axis=1)
    # component label = smallest vertex of the component (the numba union-find root)
    labels = np.tile(np.arange(n), (T, 1))
    comps = np.full(T, n)
    for idx in range(m):
        e = order[:, idx]
        a = labels[rows, us[e]]
        b = labels[rows, vs[e]]
        active = (comps > k) & (a != b)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        labels = np.where(active[:, None] & (labels == hi[:, None]), lo[:, None], labels)
        comps = comps - active
    is_root = labels == np.arange(n)
    meta = np.take_along_axis(np.cumsum(is_root, axis=1) - 1, labels, axis=1)
    s = is_root.sum(axis=1)

    pos_idx = np.arange(K)
    keys = np.where(pos_idx < s[:, None], u_perm, np.inf)
    perm = np.argsort(keys, axis=1)
    blockpos = np.zeros((T, K), np.int64)
    pos = np.zeros(T, np.int64)
    rem = s.copy()
    for b in range(K):
        active = rem > 0
        if not active.any():
            break
        c = cum[rem]
        valid = pos_idx[None, :] < (rem - 1)[:, None]
        j = ((c <= u_size[:, b, None]) & valid).sum(axis=1)
        mask = active[:, None] & (pos_idx >= pos[:, None]) & (pos_idx <= (pos + j)[:, None])
        blockpos = np.where(mask, b, blockpos)
        pos = np.where(active, pos + j + 1, pos)
        rem = np.where(active, rem - j - 1, rem)
    block = np.zeros((T, K), np.int64)
    block[rows[:, None], perm] = blockpos
    vb = np.take_along_axis(block, meta, axis=1)

    eq = vb[:, :, None] == np.arange(K)
    first = np.where(eq.any(axis=1), eq.argmax(axis=1), n + K)
    rank = np.empty((T, K), np.int64)
    rank[rows[:, None], np.argsort(first, axis=1, kind="stable")] = np.arange(K)
    return np.take_along_axis(rank, vb, axis=1).astype(np.int16)


def klm_indicators(indptr, indices, q, cum, u_clause, u_vars):
    C = indptr.shape[0] - 1
    V = q.shape[0]
    member = np.zeros((C, V), np.int32)
    for c in range(C):
        member[c, indices[indptr[c]:indptr[c + 1]]] = 1
    chosen = np.minimum(np.searchsorted(cum, u_clause, side="right"), C - 1)
    out = np.empty(u_clause.shape[0], bool)
    step = max(1, (1 << 22) // max(C, V, 1))
    for start in range(0, u_clause.shape[0], step):
        ch = chosen[start:start + step]
        assign = (u_vars[start:start + step] < q) | member[ch].astype(bool)
        missing = (~assign).astype(np.int32) @ member.T
        out[start:start + step] = (missing == 0).argmax(axis=1) == ch
    return out
