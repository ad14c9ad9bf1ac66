"""Brute-force oracles shared across the test suite.

These are written against raw (n_left, n_right, edge pair list) data and do
not call into the code paths they are used to check.
"""

from itertools import combinations


def oracle_max_matching_size(n_left: int, n_right: int, edges) -> int:
    """Bitmask DP over the right side; exponential, for n_right <= ~14."""
    adj = [[] for _ in range(n_left)]
    for u, v in edges:
        adj[u].append(v)
    cur = {0: 0}
    for u in range(n_left):
        nxt = dict(cur)
        for mask, size in cur.items():
            for v in adj[u]:
                bit = 1 << v
                if not mask & bit:
                    m2 = mask | bit
                    if nxt.get(m2, -1) < size + 1:
                        nxt[m2] = size + 1
        cur = nxt
    return max(cur.values())


def oracle_has_pm(n: int, edges) -> bool:
    """Perfect matching existence on a balanced n+n graph."""
    return oracle_max_matching_size(n, n, edges) == n


def oracle_no_hall_cut(n_left: int, n_right: int, edges) -> bool:
    """Scan all subset pairs for a cut with |S| > |T| and N(S) <= T."""
    nbrs = [set() for _ in range(n_left)]
    for u, v in edges:
        nbrs[u].add(v)
    rights = list(range(n_right))
    for s_size in range(n_left + 1):
        for s in combinations(range(n_left), s_size):
            reach = set()
            for u in s:
                reach |= nbrs[u]
            for t_size in range(min(s_size, n_right + 1)):
                for t in combinations(rights, t_size):
                    if reach <= set(t):
                        return False
    return True


def oracle_hall_cuts(n_left: int, n_right: int, edges):
    """All (S_mask, T_mask) Hall cuts, by independent nested-loop enumeration."""
    nbrs = [0] * n_left
    for u, v in edges:
        nbrs[u] |= 1 << v
    out = []
    for s_mask in range(1 << n_left):
        reach = 0
        s_size = 0
        m = s_mask
        i = 0
        while m:
            if m & 1:
                reach |= nbrs[i]
                s_size += 1
            m >>= 1
            i += 1
        for t_mask in range(1 << n_right):
            if s_size > bin(t_mask).count("1") and reach & ~t_mask == 0:
                out.append((s_mask, t_mask))
    return out


def oracle_hitting_times(n: int, edges, order):
    """Recompute (tau_I, tau_M) from scratch for one explicit edge order."""
    present = []
    tau_i = tau_m = None
    for t, eid in enumerate(order, start=1):
        present.append(edges[eid])
        if tau_i is None:
            if len({u for u, _ in present}) == n and len({v for _, v in present}) == n:
                tau_i = t
        if tau_m is None and oracle_has_pm(n, present):
            tau_m = t
        if tau_i is not None and tau_m is not None:
            break
    return tau_i, tau_m


def degree_counts(n_left: int, n_right: int, edges):
    """Independent degree scan of an edge pair list."""
    dl = [0] * n_left
    dr = [0] * n_right
    for u, v in edges:
        dl[u] += 1
        dr[v] += 1
    return dl, dr


def binomial(n: int, k: int) -> int:
    import math

    return math.comb(n, k)


def oracle_no_isolated_probability(n: int, p: float) -> float:
    """P[K_{n,n}(p) has no isolated vertex], by inclusion-exclusion over
    which vertex sets are forced isolated."""
    total = 0.0
    q = 1.0 - p
    for a in range(n + 1):
        for b in range(n + 1):
            sign = -1.0 if (a + b) % 2 else 1.0
            total += sign * binomial(n, a) * binomial(n, b) * q ** (n * (a + b) - a * b)
    return total
