"""Exact weighted matching on dense graphs (Edmonds' blossom algorithm).

Primal-dual O(n^3) formulation on an adjacency matrix with integer weights.
Vertices are 1-based internally; indices ``n+1 .. 2n`` hold blossoms.
``g[u, v]`` stores the original-vertex edge ``(u0, v0, w)`` that currently
realises the connection between top-level nodes ``u`` and ``v``; labels are
twice the usual dual variables so every quantity stays integral.

Public entry points:

* :func:`max_weight_matching` - maximum weight matching for positive weights.
* :func:`min_weight_perfect_matching` - for a complete graph with an even
  number of vertices and real weights (quantised, see ``WEIGHT_SCALE``).
"""

from __future__ import annotations

import numba as nb
import numpy as np

#: Real weights are multiplied by this and rounded before matching.
WEIGHT_SCALE = 2 ** 20

_INF = np.int64(2 ** 62)


@nb.njit(cache=True, inline="always")
def _delta(g, lab, u, v):
    return lab[g[u, v, 0]] + lab[g[u, v, 1]] - 2 * g[u, v, 2]


@nb.njit(cache=True)
def _update_slack(g, lab, slack, u, x):
    if slack[x] == 0 or _delta(g, lab, u, x) < _delta(g, lab, slack[x], x):
        slack[x] = u


@nb.njit(cache=True)
def _set_slack(n, g, lab, slack, st, S, x):
    slack[x] = 0
    for u in range(1, n + 1):
        if g[u, x, 2] > 0 and st[u] != x and S[st[u]] == 0:
            _update_slack(g, lab, slack, u, x)


@nb.njit(cache=True)
def _q_push(n, flower, flen, q, ctr, x):
    stack = [x]
    while len(stack) > 0:
        y = stack.pop()
        if y <= n:
            tail = ctr[3]
            if tail >= q.shape[0]:
                raise RuntimeError("blossom queue overflow")
            q[tail] = y
            ctr[3] = tail + 1
        else:
            for i in range(flen[y] - 1, -1, -1):
                stack.append(flower[y, i])


@nb.njit(cache=True)
def _set_st(n, flower, flen, st, x, b):
    stack = [x]
    while len(stack) > 0:
        y = stack.pop()
        st[y] = b
        if y > n:
            for i in range(flen[y]):
                stack.append(flower[y, i])


@nb.njit(cache=True)
def _get_pr(flower, flen, b, xr):
    m = flen[b]
    pr = 0
    while flower[b, pr] != xr:
        pr += 1
    if pr % 2 == 1:
        i = 1
        j = m - 1
        while i < j:
            t = flower[b, i]
            flower[b, i] = flower[b, j]
            flower[b, j] = t
            i += 1
            j -= 1
        return m - pr
    return pr


@nb.njit(cache=True)
def _set_match(n, g, match, flower, flen, flower_from, u0, v0):
    # Sub-blossom updates are independent of each other, so the recursion
    # unrolls onto a stack in any order.
    stack_u = [u0]
    stack_v = [v0]
    while len(stack_u) > 0:
        u = stack_u.pop()
        v = stack_v.pop()
        match[u] = g[u, v, 1]
        if u > n:
            xr = flower_from[u, g[u, v, 0]]
            pr = _get_pr(flower, flen, u, xr)
            for i in range(pr):
                stack_u.append(flower[u, i])
                stack_v.append(flower[u, i ^ 1])
            stack_u.append(xr)
            stack_v.append(v)
            m = flen[u]
            if pr > 0:
                tmp = flower[u, :m].copy()
                for i in range(m):
                    flower[u, i] = tmp[(i + pr) % m]


@nb.njit(cache=True)
def _augment(n, g, match, st, pa, flower, flen, flower_from, u, v):
    while True:
        xnv = st[match[u]]
        _set_match(n, g, match, flower, flen, flower_from, u, v)
        if xnv == 0:
            return
        _set_match(n, g, match, flower, flen, flower_from, xnv, st[pa[xnv]])
        u = st[pa[xnv]]
        v = xnv


@nb.njit(cache=True)
def _get_lca(match, st, pa, vis, ctr, u, v):
    ctr[1] += 1
    t = ctr[1]
    while u != 0 or v != 0:
        if u != 0:
            if vis[u] == t:
                return u
            vis[u] = t
            u = st[match[u]]
            if u != 0:
                u = st[pa[u]]
        u, v = v, u
    return 0


@nb.njit(cache=True)
def _add_blossom(n, g, lab, match, slack, st, pa, S, flower, flen, flower_from,
                 q, ctr, u, lca, v):
    b = n + 1
    while b <= ctr[0] and st[b] != 0:
        b += 1
    if b > ctr[0]:
        ctr[0] += 1
    n_x = ctr[0]
    lab[b] = 0
    S[b] = 0
    match[b] = match[lca]
    flower[b, 0] = lca
    m = 1
    x = u
    while x != lca:
        flower[b, m] = x
        y = st[match[x]]
        flower[b, m + 1] = y
        m += 2
        _q_push(n, flower, flen, q, ctr, y)
        x = st[pa[y]]
    i = 1
    j = m - 1
    while i < j:
        t = flower[b, i]
        flower[b, i] = flower[b, j]
        flower[b, j] = t
        i += 1
        j -= 1
    x = v
    while x != lca:
        flower[b, m] = x
        y = st[match[x]]
        flower[b, m + 1] = y
        m += 2
        _q_push(n, flower, flen, q, ctr, y)
        x = st[pa[y]]
    flen[b] = m
    _set_st(n, flower, flen, st, b, b)
    for x in range(1, n_x + 1):
        g[b, x, 2] = 0
        g[x, b, 2] = 0
    for x in range(1, n + 1):
        flower_from[b, x] = 0
    for i in range(m):
        xs = flower[b, i]
        for x in range(1, n_x + 1):
            if g[xs, x, 2] > 0 and (g[b, x, 2] == 0 or _delta(g, lab, xs, x) < _delta(g, lab, b, x)):
                g[b, x, 0] = g[xs, x, 0]
                g[b, x, 1] = g[xs, x, 1]
                g[b, x, 2] = g[xs, x, 2]
                g[x, b, 0] = g[x, xs, 0]
                g[x, b, 1] = g[x, xs, 1]
                g[x, b, 2] = g[x, xs, 2]
        for x in range(1, n + 1):
            if flower_from[xs, x] != 0:
                flower_from[b, x] = xs
    _set_slack(n, g, lab, slack, st, S, b)


@nb.njit(cache=True)
def _expand_blossom(n, g, lab, slack, st, pa, S, flower, flen, flower_from, q, ctr, b):
    m = flen[b]
    for i in range(m):
        _set_st(n, flower, flen, st, flower[b, i], flower[b, i])
    xr = flower_from[b, g[b, pa[b], 0]]
    pr = _get_pr(flower, flen, b, xr)
    for i in range(0, pr, 2):
        xs = flower[b, i]
        xns = flower[b, i + 1]
        pa[xs] = g[xns, xs, 0]
        S[xs] = 1
        S[xns] = 0
        slack[xs] = 0
        _set_slack(n, g, lab, slack, st, S, xns)
        _q_push(n, flower, flen, q, ctr, xns)
    S[xr] = 1
    pa[xr] = pa[b]
    for i in range(pr + 1, m):
        xs = flower[b, i]
        S[xs] = -1
        _set_slack(n, g, lab, slack, st, S, xs)
    st[b] = 0


@nb.njit(cache=True)
def _on_found_edge(n, g, lab, match, slack, st, pa, S, vis, flower, flen, flower_from,
                   q, ctr, eu, ev):
    u = st[eu]
    v = st[ev]
    if S[v] == -1:
        pa[v] = eu
        S[v] = 1
        nu = st[match[v]]
        slack[v] = 0
        slack[nu] = 0
        S[nu] = 0
        _q_push(n, flower, flen, q, ctr, nu)
    elif S[v] == 0:
        lca = _get_lca(match, st, pa, vis, ctr, u, v)
        if lca == 0:
            _augment(n, g, match, st, pa, flower, flen, flower_from, u, v)
            _augment(n, g, match, st, pa, flower, flen, flower_from, v, u)
            return True
        _add_blossom(n, g, lab, match, slack, st, pa, S, flower, flen, flower_from,
                     q, ctr, u, lca, v)
    return False


@nb.njit(cache=True)
def _stage(n, g, lab, match, slack, st, pa, S, vis, flower, flen, flower_from, q, ctr):
    """One augmentation stage; False once no augmenting path improves the weight."""
    n_x = ctr[0]
    for x in range(1, n_x + 1):
        S[x] = -1
        slack[x] = 0
    ctr[2] = 0
    ctr[3] = 0
    for x in range(1, n_x + 1):
        if st[x] == x and match[x] == 0:
            pa[x] = 0
            S[x] = 0
            _q_push(n, flower, flen, q, ctr, x)
    if ctr[3] == 0:
        return False
    while True:
        while ctr[2] < ctr[3]:
            u = q[ctr[2]]
            ctr[2] += 1
            if S[st[u]] == 1:
                continue
            for v in range(1, n + 1):
                if g[u, v, 2] > 0 and st[u] != st[v]:
                    if _delta(g, lab, u, v) == 0:
                        if _on_found_edge(n, g, lab, match, slack, st, pa, S, vis, flower,
                                          flen, flower_from, q, ctr, g[u, v, 0], g[u, v, 1]):
                            return True
                    else:
                        _update_slack(g, lab, slack, u, st[v])
        n_x = ctr[0]
        d = _INF
        for b in range(n + 1, n_x + 1):
            if st[b] == b and S[b] == 1:
                d = min(d, lab[b] // 2)
        for x in range(1, n_x + 1):
            if st[x] == x and slack[x] != 0:
                if S[x] == -1:
                    d = min(d, _delta(g, lab, slack[x], x))
                elif S[x] == 0:
                    d = min(d, _delta(g, lab, slack[x], x) // 2)
        for u in range(1, n + 1):
            if S[st[u]] == 0:
                if lab[u] <= d:
                    return False
                lab[u] -= d
            elif S[st[u]] == 1:
                lab[u] += d
        for b in range(n + 1, n_x + 1):
            if st[b] == b:
                if S[st[b]] == 0:
                    lab[b] += 2 * d
                elif S[st[b]] == 1:
                    lab[b] -= 2 * d
        ctr[2] = ctr[3]
        for x in range(1, n_x + 1):
            sx = slack[x]
            if st[x] == x and sx != 0 and st[sx] != x and _delta(g, lab, sx, x) == 0:
                if _on_found_edge(n, g, lab, match, slack, st, pa, S, vis, flower,
                                  flen, flower_from, q, ctr, g[sx, x, 0], g[sx, x, 1]):
                    return True
        for b in range(n + 1, ctr[0] + 1):
            if st[b] == b and S[b] == 1 and lab[b] == 0:
                _expand_blossom(n, g, lab, slack, st, pa, S, flower, flen, flower_from,
                                q, ctr, b)


@nb.njit(cache=True)
def _max_weight_matching(W):
    n = W.shape[0]
    N = 2 * n + 2
    g = np.zeros((N, N, 3), dtype=np.int64)
    w_max = 0
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            g[u, v, 0] = u
            g[u, v, 1] = v
            g[u, v, 2] = W[u - 1, v - 1] if u != v else 0
            w_max = max(w_max, g[u, v, 2])
    lab = np.zeros(N, dtype=np.int64)
    match = np.zeros(N, dtype=np.int64)
    slack = np.zeros(N, dtype=np.int64)
    st = np.zeros(N, dtype=np.int64)
    pa = np.zeros(N, dtype=np.int64)
    S = np.zeros(N, dtype=np.int64)
    vis = np.zeros(N, dtype=np.int64)
    flower = np.zeros((N, n + 2), dtype=np.int64)
    flen = np.zeros(N, dtype=np.int64)
    flower_from = np.zeros((N, n + 1), dtype=np.int64)
    q = np.zeros(4 * n + 4, dtype=np.int64)
    # n_x, lca timestamp, queue head, queue tail
    ctr = np.zeros(4, dtype=np.int64)
    ctr[0] = n
    for u in range(n + 1):
        st[u] = u
    for u in range(1, n + 1):
        flower_from[u, u] = u
        lab[u] = w_max
    while _stage(n, g, lab, match, slack, st, pa, S, vis, flower, flen, flower_from, q, ctr):
        pass
    mate = np.full(n, -1, dtype=np.int64)
    for u in range(1, n + 1):
        if match[u] != 0:
            mate[u - 1] = match[u] - 1
    return mate


def max_weight_matching(weights) -> np.ndarray:
    """Maximum weight matching of a graph given by a symmetric integer matrix.

    Zero entries mean "no edge"; negative entries are not allowed.
    Returns ``mate`` with ``mate[i] = j`` for matched pairs and -1 otherwise.
    """
    W = np.ascontiguousarray(weights, dtype=np.int64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("weights must be a square matrix")
    if np.any(W < 0) or np.any(W != W.T):
        raise ValueError("weights must be symmetric and non-negative")
    if W.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return _max_weight_matching(W)


def quantise(dist) -> np.ndarray:
    return np.rint(np.asarray(dist, dtype=float) * WEIGHT_SCALE).astype(np.int64)


def min_weight_perfect_matching(dist) -> list[tuple[int, int]]:
    """Minimum-weight perfect matching on the complete graph ``dist``.

    Weights are quantised by ``WEIGHT_SCALE`` and mapped to ``K - w`` with
    ``K`` large enough that every perfect matching outweighs every
    non-perfect one. Pairs are returned as ``(i, j)`` with ``i < j``,
    sorted by ``i``.
    """
    return min_weight_perfect_matching_quantised(quantise(dist))


def min_weight_perfect_matching_quantised(qdist) -> list[tuple[int, int]]:
    """As :func:`min_weight_perfect_matching` for already-integral weights."""
    Wq = np.asarray(qdist, dtype=np.int64)
    k = Wq.shape[0]
    assert k % 2 == 0, "perfect matching needs an even number of nodes"
    if k == 0:
        return []
    Wq = np.minimum(Wq, Wq.T)
    K = (k // 2) * int(Wq.max()) + 1
    W = K - Wq
    np.fill_diagonal(W, 0)
    mate = _max_weight_matching(np.ascontiguousarray(W))
    assert np.all(mate >= 0), "matching is not perfect"
    return [(i, int(mate[i])) for i in range(k) if i < mate[i]]
