"""Hopcroft-Karp maximum bipartite matching."""

from collections import deque

UNMATCHED = -1


def hopcroft_karp(n_left: int, n_right: int, adj):
    """Maximum matching of a bipartite graph given as left -> right adjacency.

    Returns ``(size, match_left, match_right)`` with ``UNMATCHED`` for free
    vertices.  Phases run BFS layering then iterative DFS for a maximal set
    of vertex-disjoint shortest augmenting paths.
    """
    match_l = [UNMATCHED] * n_left
    match_r = [UNMATCHED] * n_right
    size = 0
    inf = n_left + n_right + 1
    while True:
        dist = [inf] * n_left
        q = deque()
        for u in range(n_left):
            if match_l[u] == UNMATCHED:
                dist[u] = 0
                q.append(u)
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == UNMATCHED:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    q.append(w)
        if not found:
            break
        it = [0] * n_left
        for root in range(n_left):
            if match_l[root] != UNMATCHED:
                continue
            stack = [root]
            while stack:
                u = stack[-1]
                nbrs = adj[u]
                advanced = False
                while it[u] < len(nbrs):
                    v = nbrs[it[u]]
                    it[u] += 1
                    w = match_r[v]
                    if w == UNMATCHED:
                        # augment along the stack
                        for x in reversed(stack):
                            nxt = match_l[x]
                            match_l[x] = v
                            match_r[v] = x
                            v = nxt
                        size += 1
                        stack = []
                        advanced = True
                        break
                    if dist[w] == dist[u] + 1:
                        stack.append(w)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = inf
                    stack.pop()
    return size, match_l, match_r
