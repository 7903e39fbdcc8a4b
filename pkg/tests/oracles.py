"""Independent oracles for cross-checking ranks and equivalence.

Nothing here touches the library's reduction machinery: effectiveness of a
divisor class is decided by exhaustive search over effective representatives
combined with membership tests in the integer row lattice of the graph
Laplacian (staircase/Hermite reduction).  Loops are handled by subdividing
every edge at its midpoint first, which makes the vertex set of the model
rank-determining; ranks of vertex-supported divisors do not depend on edge
lengths, so the combinatorial answer equals the metric one.

sympy is allowed in this file only; the current oracle needs just exact
integer arithmetic, so it sticks to the stdlib.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Sequence, Set, Tuple


# -- integer lattice helpers -------------------------------------------------


def staircase(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row staircase form of the lattice spanned by the given integer rows.

    Column-by-column gcd elimination; pivots end up positive and each zero
    row is dropped.  The row lattice is preserved exactly.
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out: List[List[int]] = []
    pivot = 0
    for col in range(ncols):
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not live:
            rows = rest
            continue
        # pairwise Euclid in this column until one nonzero entry remains
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            a = live[0]
            for i in range(1, len(live)):
                q = live[i][col] // a[col]
                live[i] = [x - q * y for x, y in zip(live[i], a)]
            live = [a] + [r for r in live[1:] if any(r)]
            live, extra = [r for r in live if r[col]], [r for r in live if not r[col]]
            rest.extend(extra)
        head = live[0]
        if head[col] < 0:
            head = [-x for x in head]
        out.append(head)
        rows = rest
        pivot += 1
    return out


def _pivots(basis: List[List[int]]) -> List[int]:
    cols = []
    for r in basis:
        for j, x in enumerate(r):
            if x:
                cols.append(j)
                break
    return cols


class LaplacianLattice:
    """Coset labels of Z^V modulo the integer row lattice of the Laplacian."""

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]]):
        lap = [[0] * n for _ in range(n)]
        for u, v in edges:
            if u == v:
                continue
            lap[u][u] += 1
            lap[v][v] += 1
            lap[u][v] -= 1
            lap[v][u] -= 1
        self.n = n
        self.basis = staircase(lap)
        self.cols = _pivots(self.basis)

    def residue(self, vec: Sequence[int]) -> Tuple[int, ...]:
        b = list(vec)
        for row, c in zip(self.basis, self.cols):
            t = b[c] // row[c]
            if t:
                b = [x - t * y for x, y in zip(b, row)]
        return tuple(b)


def compositions(total: int, parts: int):
    """All tuples of `parts` non-negative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


class GraphRankOracle:
    """Baker-Norine rank by exhaustive search, loops included.

    The input multigraph is given as ``n`` vertices ``0..n-1`` and a list of
    (u, v) edges (loops and parallel edges allowed).  Every edge is split at
    a midpoint vertex, after which effectiveness of a class is an exact
    lattice-membership question against the known effective representatives.
    """

    def __init__(self, n: int, edges: Sequence[Tuple[int, int]], max_degree: int = 8):
        self.n = n
        split = []
        m = n
        for u, v in edges:
            split.append((u, m))
            split.append((m, v))
            m += 1
        self.nsub = m
        self.lattice = LaplacianLattice(m, split)
        self._eff: Dict[int, Set[Tuple[int, ...]]] = {}
        for d in range(max_degree + 1):
            self._eff[d] = {self.lattice.residue(f)
                            for f in compositions(d, m)}

    def has_effective(self, vec: Sequence[int]) -> bool:
        d = sum(vec)
        if d < 0:
            return False
        if d not in self._eff:
            self._eff[d] = {self.lattice.residue(f)
                            for f in compositions(d, self.nsub)}
        return self.lattice.residue(vec) in self._eff[d]

    def rank(self, div: Sequence[int]) -> int:
        """div lists multiplicities on the original n vertices."""
        vec = list(div) + [0] * (self.nsub - self.n)
        if not self.has_effective(vec):
            return -1
        r = 0
        while True:
            for combo in itertools.combinations_with_replacement(
                    range(self.nsub), r + 1):
                probe = list(vec)
                for i in combo:
                    probe[i] -= 1
                if not self.has_effective(probe):
                    return r
            r += 1


# -- small multigraph enumeration --------------------------------------------


def _connected(n: int, edges: Sequence[Tuple[int, int]]) -> bool:
    seen = {0}
    frontier = [0]
    adj: Dict[int, List[int]] = {i: [] for i in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    while frontier:
        x = frontier.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen) == n


def _canonical(n: int, edges: Sequence[Tuple[int, int]]) -> Tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        img = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or img < best:
            best = img
    return (n, best)


def small_multigraphs(max_vertices: int = 4, max_edges: int = 5):
    """All connected multigraphs (loops allowed) up to isomorphism.

    Yields (n, edges) with vertices 0..n-1; every vertex of an n-vertex
    graph is incident to something once n > 1, by connectivity.
    """
    seen = set()
    for n in range(1, max_vertices + 1):
        slots = [(i, j) for i in range(n) for j in range(i, n)]
        low = max(0, n - 1)
        for m in range(low, max_edges + 1):
            for multi in itertools.combinations_with_replacement(slots, m):
                if not _connected(n, multi):
                    continue
                key = _canonical(n, multi)
                if key in seen:
                    continue
                seen.add(key)
                yield n, list(multi)
