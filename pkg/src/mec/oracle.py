"""Exact minimum-entropy coupling on small instances, for certification.

The couplings of (p, q) form a transportation polytope; entropy is concave,
so its minimum over the polytope is attained at a vertex. Vertices are the
basic feasible solutions: pick a spanning tree of the complete bipartite
graph on rows and columns, peel leaves to solve the triangular system, and
keep the solution iff it is non-negative. Enumerating every spanning tree is
exhaustive, which is affordable only on tiny instances; the cell cap keeps
requests honest.

Tree enumeration (with peel schedules) is cached per (n_rows, n_cols) shape,
so scoring many random instances of the same shape costs one enumeration.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .coupling import CouplingEntry, SparseCoupling
from .distributions import Distribution, as_distribution, shannon_entropy
from .errors import TooLargeError

CELL_CAP = 20
_ROUND = 1e-12


@dataclass(frozen=True, slots=True)
class VertexCoupling:
    """A vertex of the transportation polytope, as a dense grid.

    The support (positive cells) of a basic solution is acyclic in the
    bipartite row/column graph, hence has at most n_rows + n_cols - 1 cells.
    """

    grid: tuple[tuple[float, ...], ...]
    support: tuple[tuple[int, int], ...]

    def values(self) -> tuple[float, ...]:
        return tuple(self.grid[r][c] for r, c in self.support)

    def as_coupling(self) -> SparseCoupling:
        n_rows = len(self.grid)
        n_cols = len(self.grid[0])
        entries = tuple(
            CouplingEntry(self.grid[r][c], r, c) for r, c in self.support
        )
        return SparseCoupling(n_rows, n_cols, entries)


@dataclass(frozen=True, slots=True)
class OracleResult:
    opt_value: float
    argmin: VertexCoupling


@lru_cache(maxsize=None)
def _tree_schedules(
    n: int, m: int
) -> tuple[tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]], ...]:
    """All spanning trees of K_{n,m} with leaf-peeling schedules.

    Nodes are rows 0..n-1 and columns n..n+m-1; each tree is returned as
    (edges, schedule) where schedule lists (node, edge_index) in elimination
    order: at each step the node has exactly one unprocessed incident edge.
    """
    all_edges = [(r, c) for r in range(n) for c in range(m)]
    node_count = n + m
    out = []
    for picked in combinations(range(len(all_edges)), node_count - 1):
        parent = list(range(node_count))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        acyclic = True
        for ei in picked:
            r, c = all_edges[ei]
            ra, rb = find(r), find(n + c)
            if ra == rb:
                acyclic = False
                break
            parent[ra] = rb
        if not acyclic:
            continue
        # n+m-1 acyclic edges on n+m nodes: a spanning tree; peel leaves
        edges = tuple(all_edges[ei] for ei in picked)
        degree = [0] * node_count
        incident: list[list[int]] = [[] for _ in range(node_count)]
        for idx, (r, c) in enumerate(edges):
            for node in (r, n + c):
                degree[node] += 1
                incident[node].append(idx)
        done = [False] * len(edges)
        leaves = [v for v in range(node_count) if degree[v] == 1]
        schedule = []
        while leaves:
            v = leaves.pop()
            if degree[v] != 1:
                # the far endpoint of the final edge drops to degree 0
                continue
            edge_idx = next(idx for idx in incident[v] if not done[idx])
            done[edge_idx] = True
            schedule.append((v, edge_idx))
            r, c = edges[edge_idx]
            other = n + c if v == r else r
            degree[other] -= 1
            degree[v] -= 1
            if degree[other] == 1:
                leaves.append(other)
        out.append((edges, tuple(schedule)))
    return tuple(out)


def enumerate_vertices(
    p: Distribution | Sequence[float],
    q: Distribution | Sequence[float],
) -> list[VertexCoupling]:
    """All vertices of the coupling polytope of (p, q), deduplicated.

    Works in caller index order for both marginals. Distinct trees often
    share a (degenerate) solution; solutions are deduplicated on their
    positive cells with values rounded to 1e-12, and the result is sorted by
    that same key.

    Raises:
        TooLargeError: n_rows * n_cols exceeds the cell cap of 20.
    """
    dp = as_distribution(p)
    dq = as_distribution(q)
    n, m = dp.n, dq.n
    if n * m > CELL_CAP:
        raise TooLargeError(f"{n} x {m} grid exceeds the {CELL_CAP}-cell enumeration cap")
    pvec = dp.to_caller_order()
    qvec = dq.to_caller_order()
    found: dict[tuple, VertexCoupling] = {}
    for edges, schedule in _tree_schedules(n, m):
        residual = list(pvec) + list(qvec)
        values = [0.0] * len(edges)
        feasible = True
        for node, edge_idx in schedule:
            v = residual[node]
            if v < -_ROUND:
                feasible = False
                break
            values[edge_idx] = v
            r, c = edges[edge_idx]
            other = n + c if node == r else r
            residual[other] -= v
            residual[node] = 0.0
        if not feasible:
            continue
        grid = [[0.0] * m for _ in range(n)]
        for (r, c), v in zip(edges, values):
            if v > 0.0:
                grid[r][c] = v
        support = tuple(
            (r, c) for r in range(n) for c in range(m) if grid[r][c] > 0.0
        )
        key = tuple((r, c, round(grid[r][c] / _ROUND)) for r, c in support)
        if key not in found:
            found[key] = VertexCoupling(
                tuple(tuple(row) for row in grid), support
            )
    return [found[key] for key in sorted(found)]


def brute_force_min_entropy(
    p: Distribution | Sequence[float],
    q: Distribution | Sequence[float],
) -> OracleResult:
    """True minimum coupling entropy by exhaustive vertex scoring.

    Returns the minimum in bits and the first vertex (in enumeration order)
    attaining it.

    Raises:
        TooLargeError: as :func:`enumerate_vertices`.
    """
    best_value = math.inf
    best_vertex: VertexCoupling | None = None
    for vertex in enumerate_vertices(p, q):
        h = shannon_entropy(vertex.values())
        if h < best_value - 1e-15:
            best_value = h
            best_vertex = vertex
    assert best_vertex is not None
    return OracleResult(best_value, best_vertex)
