"""All-pairs distance and resistance matrices by independent engines.

Three engines, deliberately redundant so they can check each other:

* bfs_all_pairs       — textbook BFS from every source (distance only).
* laplacian_resistance — Moore-Penrose pseudoinverse of the graph Laplacian
                         via the rank-one shift inv(L + J/m) (float).
* structured_metrics  — exploits that every bridge is a cut edge, so any
                        cross-pentagon metric is (metric to the local
                        attachment vertex) + bridge + (metric from the entry
                        vertex), composed along the chain with prefix sums.
                        Exact: distances are integers, resistances are
                        multiples of 1/5.

The pentagon constants relative to any anchor vertex are {0, 1, 2, 2, 1} for
distance and {0, 4/5, 6/5, 6/5, 4/5} for resistance (a unit-resistor 5-cycle
splits into l and 5-l series arms in parallel: l(5-l)/5).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from collections import deque

import numpy as np

from .chain import ChainBlueprint, PentagonChainGraph, attachment_positions, build_graph

__all__ = [
    "MetricKind",
    "MetricMatrix",
    "bfs_all_pairs",
    "laplacian_resistance",
    "structured_metrics",
    "DEFAULT_DENSE_CAP",
]

DEFAULT_DENSE_CAP = 5000  # vertices; dense O(V^2) storage and O(V^3) solve

# 5-cycle metric tables indexed by 0-based cycle positions.  Resistance is
# stored scaled by 5 so everything stays integer.
_CYCLE_GAP = np.minimum(
    np.abs(np.arange(5)[:, None] - np.arange(5)[None, :]),
    5 - np.abs(np.arange(5)[:, None] - np.arange(5)[None, :]),
)
PENTAGON_DISTANCE = _CYCLE_GAP.astype(np.int64)
PENTAGON_RESISTANCE_X5 = (_CYCLE_GAP * (5 - _CYCLE_GAP)).astype(np.int64)


class MetricKind(Enum):
    DISTANCE = "distance"
    RESISTANCE = "resistance"


@dataclass(frozen=True)
class MetricMatrix:
    """Symmetric all-pairs metric matrix over the chain's vertex ids.

    Exact matrices hold int64 numerators over the fixed denominator
    (1 for distance, 5 for resistance); float matrices hold float64 and
    denominator 0.
    """

    size: int
    kind: MetricKind
    data: np.ndarray
    denominator: int  # 0 marks float mode

    @property
    def is_exact(self) -> bool:
        return self.denominator > 0

    def entry(self, u: int, v: int) -> Fraction | float:
        if self.is_exact:
            return Fraction(int(self.data[u, v]), self.denominator)
        return float(self.data[u, v])

    def as_float(self) -> np.ndarray:
        if self.is_exact:
            return self.data.astype(np.float64) / self.denominator
        return self.data

    def total(self) -> Fraction | float:
        """Sum over unordered pairs."""
        s = self.data.sum()
        if self.is_exact:
            return Fraction(int(s), 2 * self.denominator)
        return float(s) / 2.0

    def to_csv(self) -> str:
        """CSV export: header row of vertex ids, exact entries as 'p/q'."""
        header = ",".join(str(v) for v in range(self.size))
        lines = [header]
        for u in range(self.size):
            if self.is_exact:
                row = ",".join(
                    f"{int(x)}/{self.denominator}" for x in self.data[u]
                )
            else:
                row = ",".join(repr(float(x)) for x in self.data[u])
            lines.append(row)
        return "\n".join(lines) + "\n"


def bfs_all_pairs(g: PentagonChainGraph) -> MetricMatrix:
    """Shortest-path distance matrix by BFS from every source, O(V*E)."""
    V = g.vertex_count
    dist = np.full((V, V), -1, dtype=np.int64)
    for s in range(V):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u]
            for w in g.adjacency[u]:
                if row[w] < 0:
                    row[w] = du + 1
                    queue.append(w)
    if (dist < 0).any():
        raise ValueError("graph is not connected")
    return MetricMatrix(size=V, kind=MetricKind.DISTANCE, data=dist, denominator=1)


def laplacian_resistance(
    g: PentagonChainGraph, dense_cap: int = DEFAULT_DENSE_CAP
) -> MetricMatrix:
    """Resistance matrix from the Laplacian pseudoinverse (float engine).

    Uses inv(L + J/m): the uniform rank-one shift makes L invertible, and the
    shift's contribution cancels in r(u,v) = M_uu + M_vv - 2 M_uv.
    """
    V = g.vertex_count
    if V > dense_cap:
        raise ValueError(f"dense resistance engine capped at {dense_cap} vertices, got {V}")
    adj = np.zeros((V, V), dtype=np.float64)
    for u, nbrs in enumerate(g.adjacency):
        adj[u, list(nbrs)] = 1.0
    lap = np.diag(adj.sum(axis=1)) - adj
    M = np.linalg.inv(lap + 1.0 / V)
    d = np.diag(M)
    res = d[:, None] + d[None, :] - 2.0 * M
    res = (res + res.T) / 2.0
    np.fill_diagonal(res, 0.0)
    return MetricMatrix(size=V, kind=MetricKind.RESISTANCE, data=res, denominator=0)


def _structured(blueprint: ChainBlueprint, table: np.ndarray, bridge: int) -> np.ndarray:
    """Compose one pentagon metric table along the chain via prefix sums.

    For u in pentagon a and v in pentagon b with a < b (0-based):

        m(u, v) = T[pos_u, out_a] + bridge
                + sum_{t=a+1}^{b-1} (T[0, out_t] + bridge)
                + T[0, pos_v]

    where out_t is the attachment position of pentagon t.  The middle sum is
    pref[b] - pref[a+1] with pref the cumulative entry-to-entry cost.
    """
    n = blueprint.n
    V = 5 * n
    pos = np.tile(np.arange(5), n)
    pent = np.repeat(np.arange(n), 5)

    out = attachment_positions(blueprint)  # length n-1
    out_arr = np.array(out + [0], dtype=np.int64)  # pad: last pentagon unused

    step = table[0, out_arr[: n - 1]] + bridge if n > 1 else np.zeros(0, dtype=np.int64)
    pref = np.zeros(n, dtype=np.int64)
    if n > 1:
        pref[1:] = np.cumsum(step)

    # left[u]: cost from u to its pentagon's attachment vertex, minus the
    # prefix at the next pentagon; right[v]: entry cost plus prefix.  Then
    # cross(u, v) = left[u] + right[v] + bridge wherever pent[u] < pent[v].
    to_out = table[pos, out_arr[pent]]
    next_pref = np.zeros(V, dtype=np.int64)
    next_pref[pent < n - 1] = pref[pent[pent < n - 1] + 1]
    left = to_out - next_pref
    right = table[0, pos] + pref[pent]

    cross = left[:, None] + right[None, :] + bridge
    upper = pent[:, None] < pent[None, :]
    M = np.where(upper, cross, 0)
    M = M + M.T
    same = pent[:, None] == pent[None, :]
    block = table[pos[:, None], pos[None, :]]
    M[same] = block[same]
    return M


def structured_metrics(blueprint: ChainBlueprint) -> tuple[MetricMatrix, MetricMatrix]:
    """Exact (distance, resistance) matrices from cut-edge additivity.

    Both distance and resistance are additive across a bridge, so the whole
    matrix follows from the pentagon tables and the chain's attachment
    positions.  Output is exact: int64 distances and int64 resistance
    numerators over denominator 5.
    """
    dist = _structured(blueprint, PENTAGON_DISTANCE, 1)
    res = _structured(blueprint, PENTAGON_RESISTANCE_X5, 5)
    V = 5 * blueprint.n
    return (
        MetricMatrix(size=V, kind=MetricKind.DISTANCE, data=dist, denominator=1),
        MetricMatrix(size=V, kind=MetricKind.RESISTANCE, data=res, denominator=5),
    )


def graph_metrics(g: PentagonChainGraph) -> tuple[MetricMatrix, MetricMatrix]:
    """Structured metrics for an already built graph."""
    return structured_metrics(g.blueprint)
