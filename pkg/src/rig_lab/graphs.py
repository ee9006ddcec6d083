"""Undirected simple graphs on [n] backed by a dense boolean adjacency.

Rows double as bitsets for neighbourhood queries; the canonical sorted edge
list is derived lazily for serialization.  Instances are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class Graph:
    __slots__ = ("n", "adj", "_edges")

    def __init__(self, adj: np.ndarray):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if adj.shape[0] and (np.diagonal(adj).any() or not np.array_equal(adj, adj.T)):
            raise ValueError("adjacency must be symmetric with zero diagonal")
        self.n = adj.shape[0]
        self.adj = adj
        self.adj.setflags(write=False)
        self._edges: np.ndarray | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u, v] = adj[v, u] = True
        return cls(adj)

    def edges(self) -> np.ndarray:
        """Canonical edge list: array of [u, v] with u < v, lexicographic."""
        if self._edges is None:
            iu, iv = np.nonzero(np.triu(self.adj, 1))
            e = np.stack([iu, iv], axis=1) if len(iu) else np.empty((0, 2), dtype=np.int64)
            e.setflags(write=False)
            self._edges = e
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def degree_into(self, v: int, S: np.ndarray) -> int:
        """Number of neighbours of v inside vertex set S."""
        return int(self.adj[v, S].sum())

    def common_neighborhood(self, T: Sequence[int], include_tuple: bool = False) -> np.ndarray:
        """Vertices adjacent to every member of T.

        With ``include_tuple`` a vertex of T qualifies when adjacent to all
        *other* members, so a clique containing T is kept whole.
        """
        T = list(T)
        if not T:
            return np.arange(self.n)
        mask = np.ones(self.n, dtype=bool)
        for u in T:
            mask &= self.adj[u]
        if include_tuple:
            for u in T:
                others = [w for w in T if w != u]
                mask[u] = all(self.adj[u, w] for w in others)
        else:
            mask[T] = False
        return np.nonzero(mask)[0]

    def is_clique(self, S: Sequence[int]) -> bool:
        S = np.asarray(list(S), dtype=np.int64)
        if len(S) <= 1:
            return True
        sub = self.adj[np.ix_(S, S)]
        return bool(sub.sum() == len(S) * (len(S) - 1))

    def with_edge_changes(self, add: Iterable[Sequence[int]] = (), remove: Iterable[Sequence[int]] = ()) -> "Graph":
        adj = self.adj.copy()
        adj.setflags(write=True)
        for u, v in add:
            adj[u, v] = adj[v, u] = True
        for u, v in remove:
            adj[u, v] = adj[v, u] = False
        return Graph(adj)

    def neighbor_masks(self) -> list[int]:
        """Adjacency rows as Python int bitmasks (for clique enumeration)."""
        masks = []
        for v in range(self.n):
            bits = 0
            for u in np.nonzero(self.adj[v])[0]:
                bits |= 1 << int(u)
            masks.append(bits)
        return masks

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and np.array_equal(self.adj, other.adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"
