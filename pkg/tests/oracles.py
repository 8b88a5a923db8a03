"""Slow, independent reference implementations used as test oracles."""

from collections import deque
from itertools import product


def adjacency(G):
    codes = [int(c) for c in G.vertex_codes()]
    t = G.neighbor_table(G.vertex_codes())
    return {c: sorted({int(x) for x in row if x >= 0}) for c, row in zip(codes, t)}


def bgamma_adjacency(F, fs_text, n, eval_fn, parse_fn):
    """Adjacency of BΓ_n straight from the defining equations p_i + l_i = f_i."""
    fs = [parse_fn(t, i + 2, "bipartite", F) for i, t in enumerate(fs_text)]
    pts = list(product(range(F.q), repeat=n))
    adj = {}
    for p in pts:
        for l in pts:
            env = {f"p{i + 1}": p[i] for i in range(n)} | {f"l{i + 1}": l[i] for i in range(n)}
            if all(F.add(p[i], l[i]) == eval_fn(fs[i - 1], env).code for i in range(1, n)):
                adj.setdefault(("P", p), []).append(("L", l))
                adj.setdefault(("L", l), []).append(("P", p))
    return adj


def girth(adj):
    best = float("inf")
    for s in adj:
        dist, par = {s: 0}, {s: None}
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if v == u:
                    best = min(best, 1)
                elif v not in dist:
                    dist[v], par[v] = dist[u] + 1, u
                    dq.append(v)
                elif par[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def component_count(adj):
    parent = {v: v for v in adj}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for u in adj:
        for v in adj[u]:
            parent[find(u)] = find(v)
    return len({find(v) for v in adj})


def cycle_counts(adj, L):
    """Number of simple cycles of each length 3..L (undirected)."""
    order = {v: i for i, v in enumerate(adj)}
    counts = {l: 0 for l in range(3, L + 1)}

    def dfs(start, path, seen):
        u = path[-1]
        for v in adj[u]:
            if v == start and len(path) >= 3:
                counts[len(path)] += 1
            elif v not in seen and order[v] > order[start] and len(path) < L:
                seen.add(v)
                path.append(v)
                dfs(start, path, seen)
                path.pop()
                seen.discard(v)
    for s in adj:
        dfs(s, [s], {s})
    return {l: c // 2 for l, c in counts.items()}


def directed_cycle_counts(adj, L):
    order = {v: i for i, v in enumerate(adj)}
    counts = [0] * L

    def dfs(start, path, seen):
        u = path[-1]
        for v in adj[u]:
            if v == start:
                counts[len(path) - 1] += 1
            elif v not in seen and order[v] > order[start] and len(path) < L:
                seen.add(v)
                path.append(v)
                dfs(start, path, seen)
                path.pop()
                seen.discard(v)
    for s in adj:
        dfs(s, [s], {s})
    return counts


def eccentricity_max(adj):
    best = 0
    for s in adj:
        dist = {s: 0}
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    dq.append(v)
        if len(dist) < len(adj):
            return float("inf")
        best = max(best, max(dist.values()))
    return best
