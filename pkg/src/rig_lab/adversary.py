"""Monotone and bounded adversaries acting on sampled instances.

A monotone adversary may only delete noise edges (pairs with disjoint label
sets), which preserves every ground-truth clique.  The bounded adversary flips
up to eps_deg*k edges incident to each ordinary vertex and fully rewrites the
neighbourhoods of up to eps_node*k corrupted vertices (the set M).  When both
are applied, monotone deletions go first; the ledger records the order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import BudgetExceededError, ModelConstraintError, MonotonicityError
from .graphs import Graph
from .model import RigInstance


@dataclass
class AdversaryLedger:
    monotone_deletions: list[tuple[int, int]] = field(default_factory=list)
    flipped_edges: list[tuple[int, int]] = field(default_factory=list)
    flip_counts: dict[int, int] = field(default_factory=dict)
    corrupted_vertices: list[int] = field(default_factory=list)
    eps_deg: float = 0.0
    eps_node: float = 0.0
    order: list[str] = field(default_factory=list)

    def merged_with(self, other: "AdversaryLedger") -> "AdversaryLedger":
        counts = dict(self.flip_counts)
        for v, c in other.flip_counts.items():
            counts[v] = counts.get(v, 0) + c
        return AdversaryLedger(
            monotone_deletions=self.monotone_deletions + other.monotone_deletions,
            flipped_edges=self.flipped_edges + other.flipped_edges,
            flip_counts=counts,
            corrupted_vertices=sorted(set(self.corrupted_vertices) | set(other.corrupted_vertices)),
            eps_deg=max(self.eps_deg, other.eps_deg),
            eps_node=max(self.eps_node, other.eps_node),
            order=self.order + other.order,
        )


def apply_monotone_adversary(
    inst: RigInstance, strategy: dict, seed: int
) -> tuple[RigInstance, AdversaryLedger]:
    """Delete noise edges according to a strategy.

    Strategies:
      {"kind": "fraction", "fraction": f}        delete a uniform f-fraction
      {"kind": "target", "vertices": [...]}      delete all noise edges touching the set
      {"kind": "custom", "edges": [[u, v], ...]} delete exactly these edges
    """
    noise = inst.noise_edges()
    kind = strategy.get("kind")
    if kind == "fraction":
        f = float(strategy["fraction"])
        if not (0.0 <= f <= 1.0):
            raise ModelConstraintError(f"fraction must be in [0,1], got {f}")
        m = int(round(f * len(noise)))
        order = rng.stream(seed, rng.ADVERSARY).permutation(len(noise))
        chosen = noise[np.sort(order[:m])]
    elif kind == "target":
        targets = set(int(v) for v in strategy["vertices"])
        chosen = np.array(
            [e for e in noise.tolist() if e[0] in targets or e[1] in targets], dtype=np.int64
        ).reshape(-1, 2)
    elif kind == "custom":
        share = inst.share_matrix()
        chosen = []
        for u, v in strategy["edges"]:
            u, v = int(min(u, v)), int(max(u, v))
            if not inst.graph.has_edge(u, v):
                continue
            if share[u, v]:
                raise MonotonicityError(f"edge ({u},{v}) is ground truth; monotone deletion refused")
            chosen.append((u, v))
        chosen = np.array(chosen, dtype=np.int64).reshape(-1, 2)
    else:
        raise ModelConstraintError(f"unknown monotone strategy {kind!r}")

    graph = inst.graph.with_edge_changes(remove=chosen)
    deletions = [(int(u), int(v)) for u, v in chosen]
    ledger = AdversaryLedger(monotone_deletions=deletions, order=["monotone"])
    out = RigInstance(
        params=inst.params, delta=inst.delta, label_matrix=inst.label_matrix,
        graph=graph, pristine=False,
    )
    return out, ledger


def _flip(adj: np.ndarray, u: int, v: int) -> None:
    adj[u, v] = adj[v, u] = not adj[u, v]


def apply_bounded_adversary(
    inst: RigInstance, eps_deg: float, eps_node: float, strategy: dict, seed: int
) -> tuple[Graph, AdversaryLedger]:
    """Apply edge corruptions within per-vertex and corrupted-vertex budgets.

    For every vertex outside the corrupted set M the number of incident flips
    stays at most eps_deg*k; |M| stays at most eps_node*k.  A strategy that
    cannot fit its budgets raises before any edge is touched.

    Strategies:
      {"kind": "random-flips", "num_flips": m}          m seeded uniform flips
      {"kind": "target-clique", "label": l, "num_deletions": m}
                                                        delete m edges inside S_l
      {"kind": "rewrite", "num_vertices": m} or {"kind": "rewrite", "vertices": [...]}
                                                        resample whole neighbourhoods
    """
    if eps_deg < 0 or eps_node < 0:
        raise ModelConstraintError("budgets must be nonnegative")
    k = inst.k
    deg_budget = eps_deg * k
    node_budget = eps_node * k
    n = inst.n
    kind = strategy.get("kind")
    g = rng.stream(seed, rng.ADVERSARY, index=1)

    adj = inst.graph.adj.copy()
    adj.setflags(write=True)
    ledger = AdversaryLedger(eps_deg=eps_deg, eps_node=eps_node, order=["bounded:" + str(kind)])

    if kind == "random-flips":
        m = int(strategy["num_flips"])
        if m > n * deg_budget / 2:
            raise BudgetExceededError(f"{m} flips cannot satisfy per-vertex budget {deg_budget:.1f}")
        counts = np.zeros(n, dtype=np.int64)
        flips: list[tuple[int, int]] = []
        attempts = 0
        while len(flips) < m:
            attempts += 1
            if attempts > 200 * m + 1000:
                raise BudgetExceededError("could not place flips within per-vertex budgets")
            u, v = g.integers(0, n, size=2)
            if u == v:
                continue
            u, v = int(min(u, v)), int(max(u, v))
            if counts[u] + 1 > deg_budget or counts[v] + 1 > deg_budget:
                continue
            if (u, v) in set(flips):
                continue
            flips.append((u, v))
            counts[u] += 1
            counts[v] += 1
        for u, v in flips:
            _flip(adj, u, v)
        ledger.flipped_edges = flips
        ledger.flip_counts = {int(i): int(c) for i, c in enumerate(counts) if c}

    elif kind == "target-clique":
        label = int(strategy["label"])
        m = int(strategy["num_deletions"])
        S = inst.clique(label)
        pairs = [(int(S[i]), int(S[j])) for i in range(len(S)) for j in range(i + 1, len(S))]
        order = g.permutation(len(pairs))
        counts = np.zeros(n, dtype=np.int64)
        flips = []
        for idx in order:
            if len(flips) == m:
                break
            u, v = pairs[idx]
            if not adj[u, v]:
                continue
            if counts[u] + 1 > deg_budget or counts[v] + 1 > deg_budget:
                continue
            flips.append((u, v))
            counts[u] += 1
            counts[v] += 1
        if len(flips) < m:
            raise BudgetExceededError(
                f"only {len(flips)} of {m} in-clique deletions fit budget {deg_budget:.1f}"
            )
        for u, v in flips:
            _flip(adj, u, v)
        ledger.flipped_edges = flips
        ledger.flip_counts = {int(i): int(c) for i, c in enumerate(counts) if c}

    elif kind == "rewrite":
        if "vertices" in strategy:
            M = sorted(int(v) for v in strategy["vertices"])
        else:
            m = int(strategy["num_vertices"])
            M = sorted(int(v) for v in g.choice(n, size=m, replace=False))
        if len(M) > node_budget:
            raise BudgetExceededError(f"|M|={len(M)} exceeds node budget {node_budget:.1f}")
        gr = rng.stream(seed, rng.REWRITE)
        for v in M:
            row = gr.random(n) < 0.5
            row[v] = False
            adj[v, :] = row
            adj[:, v] = row
        # rewrites may clobber each other's entries; re-symmetrize pairs in M
        for i, u in enumerate(M):
            for v in M[i + 1:]:
                adj[v, u] = adj[u, v]
        ledger.corrupted_vertices = M

    else:
        raise ModelConstraintError(f"unknown bounded strategy {kind!r}")

    return Graph(adj), ledger
