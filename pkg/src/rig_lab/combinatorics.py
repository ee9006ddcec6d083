"""Structural statistics of noisy RIGs and brute-force oracles.

Covers the pseudo-randomness measure (r-fold balancedness of bipartite
subgraphs), duplicate/bad-label counting, biclique witness search, outside
degrees into ground-truth cliques, duplicate-free subsets, and exact maximal
clique enumeration used as the identifiability oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import EnumerationCapError, ModelConstraintError
from .graphs import Graph
from .model import RigInstance

PAIR_BUDGET_DEFAULT = 10_000_000
CLIQUE_CAP_DEFAULT = 400


@dataclass(frozen=True)
class BipartiteView:
    """A bipartite cut H = (A ⊎ B) of a host graph; sides must be disjoint."""

    host: Graph
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        A, B = set(self.left), set(self.right)
        if A & B:
            raise ModelConstraintError("bipartition sides must be disjoint")
        n = self.host.n
        if any(not 0 <= v < n for v in A | B):
            raise ModelConstraintError("bipartition references vertices outside the host")


def pair_weight(H: BipartiteView, p: float, u: int, v: int) -> float:
    """Signed edge weight: sqrt((1-p)/p) on edges, -sqrt(p/(1-p)) on non-edges.

    Centered so the expectation under edge probability p is zero.
    """
    if not (0.0 < p < 1.0):
        raise ModelConstraintError(f"p must be in (0,1), got {p}")
    if u not in H.left or v not in H.right:
        raise ModelConstraintError("pair_weight expects u on the left and v on the right")
    if H.host.has_edge(u, v):
        return math.sqrt((1.0 - p) / p)
    return -math.sqrt(p / (1.0 - p))


def _weight_matrix(H: BipartiteView, p: float) -> np.ndarray:
    A = np.asarray(H.left, dtype=np.int64)
    B = np.asarray(H.right, dtype=np.int64)
    W = np.where(
        H.host.adj[np.ix_(A, B)], math.sqrt((1.0 - p) / p), -math.sqrt(p / (1.0 - p))
    )
    return W


@dataclass
class BalancednessReport:
    r: int
    p: float
    delta_max: float
    argmax: Optional[tuple[tuple[int, ...], tuple[int, ...]]]
    pairs_evaluated: int
    exhaustive: bool


def balancedness(
    H: BipartiteView, p: float, r: int, pair_budget: int = PAIR_BUDGET_DEFAULT
) -> BalancednessReport:
    """Exact r-fold balancedness of H.

    Maximizes |sum_{v in B} u_{S,p}(v) u_{R,p}(v)| over S, R subsets of the
    left side with |S| = |R| = r and |S Δ R| >= 3.  The supremum over an
    empty admissible family is 0.  If the number of (S, R) pairs exceeds
    ``pair_budget`` the scan stops early and the report is flagged
    non-exhaustive.
    """
    if not (0.0 < p < 1.0):
        raise ModelConstraintError(f"p must be in (0,1), got {p}")
    if r < 1:
        raise ModelConstraintError(f"r must be >= 1, got {r}")
    a = len(H.left)
    if r > a:
        return BalancednessReport(r, p, 0.0, None, 0, True)

    W = _weight_matrix(H, p)
    subsets = list(combinations(range(a), r))
    total_pairs = len(subsets) * (len(subsets) - 1) // 2 + len(subsets)
    exhaustive = total_pairs <= pair_budget
    if not exhaustive:
        keep = max(1, int(math.isqrt(2 * pair_budget)))
        subsets = subsets[:keep]

    # products of weight rows for every r-subset, then all inner products at once
    U = np.empty((len(subsets), W.shape[1]))
    for i, S in enumerate(subsets):
        U[i] = W[list(S)].prod(axis=0)
    G = np.abs(U @ U.T)

    masks = [sum(1 << j for j in S) for S in subsets]
    best = 0.0
    arg = None
    pairs = 0
    for i in range(len(subsets)):
        mi = masks[i]
        for j in range(i, len(subsets)):
            # |S Δ R| = 2(r - |S ∩ R|) >= 3 iff |S ∩ R| <= r - 2
            if (mi & masks[j]).bit_count() > r - 2:
                continue
            pairs += 1
            if G[i, j] > best:
                best = float(G[i, j])
                arg = (
                    tuple(H.left[t] for t in subsets[i]),
                    tuple(H.left[t] for t in subsets[j]),
                )
    return BalancednessReport(r, p, best, arg, pairs, exhaustive)


@dataclass
class LabelStats:
    duplicates: list[int]
    bad_labels: list[int]
    vertices_of_bad: list[int]
    overlap: list[int]
    split_in: dict[int, list[int]]
    split_out: dict[int, list[int]]


def label_stats(inst: RigInstance, Q: Sequence[int]) -> LabelStats:
    """Duplicate/bad labels of Q and the induced overlap decomposition.

    Duplicates D_Q: labels chosen by >= 2 vertices of Q; bad labels B_Q by
    >= 3.  The overlap R(Q) collects vertices carrying >= 2 bad labels, and
    for each bad label l the clique S_l splits into S_l^in = S_l \\ R(Q) and
    S_l^out = (union of the other bad cliques) \\ R(Q).
    """
    Q = sorted(set(int(v) for v in Q))
    if not Q:
        return LabelStats([], [], [], [], {}, {})
    counts = inst.label_matrix[Q].sum(axis=0)
    dup = [int(l) for l in np.nonzero(counts >= 2)[0]]
    bad = [int(l) for l in np.nonzero(counts >= 3)[0]]
    if not bad:
        return LabelStats(dup, [], [], [], {}, {})
    bad_cols = inst.label_matrix[:, bad]
    per_vertex_bad = bad_cols.sum(axis=1)
    vertices_of_bad = [int(v) for v in np.nonzero(per_vertex_bad >= 1)[0]]
    overlap = [int(v) for v in np.nonzero(per_vertex_bad >= 2)[0]]
    rset = set(overlap)
    split_in: dict[int, list[int]] = {}
    split_out: dict[int, list[int]] = {}
    for l in bad:
        S = set(int(v) for v in inst.clique(l))
        split_in[l] = sorted(S - rset)
        others: set[int] = set()
        for l2 in bad:
            if l2 != l:
                others |= set(int(v) for v in inst.clique(l2))
        split_out[l] = sorted(others - rset)
    return LabelStats(dup, bad, vertices_of_bad, overlap, split_in, split_out)


@dataclass
class EventReport:
    holds: bool
    violations: list[dict]
    exhaustive: bool
    max_duplicates: int
    max_bad: int


def check_event_E(
    inst: RigInstance,
    A: Sequence[int],
    t: int,
    b: int,
    C: float = 10.0,
    subset_budget: int = 2_000_000,
) -> EventReport:
    """Check the well-behaved-labels event on a vertex set A.

    Three conditions: per-vertex label counts within C*log(n)*sqrt(delta*d)
    of delta*d; at most C*t*log(n) duplicate labels in S ∪ R for every pair
    of r-subsets with r <= t; at most b bad labels likewise.  Because
    duplicate/bad sets grow monotonically with the vertex set, the pair
    sweep reduces to scanning subsets of size min(2t, |A|).
    """
    if t < 2:
        raise ModelConstraintError(f"t must be >= 2, got {t}")
    A = sorted(set(int(v) for v in A))
    report = EventReport(True, [], True, 0, 0)
    if not A:
        return report
    n, d = inst.n, inst.d
    dd = inst.delta * d
    tol = C * math.log(max(n, 2)) * math.sqrt(dd)
    counts_per_vertex = inst.label_matrix[A].sum(axis=1)
    for v, c in zip(A, counts_per_vertex):
        if abs(c - dd) > tol:
            report.holds = False
            report.violations.append({"condition": 1, "vertex": int(v), "labels": int(c)})
    dup_cap = C * t * math.log(max(n, 2))
    size = min(2 * t, len(A))
    total = math.comb(len(A), size)
    if total > subset_budget:
        report.exhaustive = False
        total = subset_budget
    scanned = 0
    M = inst.label_matrix[A].astype(np.int16)
    for idx in combinations(range(len(A)), size):
        if scanned >= total:
            break
        scanned += 1
        counts = M[list(idx)].sum(axis=0)
        ndup = int((counts >= 2).sum())
        nbad = int((counts >= 3).sum())
        report.max_duplicates = max(report.max_duplicates, ndup)
        report.max_bad = max(report.max_bad, nbad)
        witness = [A[i] for i in idx]
        if ndup > dup_cap:
            report.holds = False
            report.violations.append({"condition": 2, "subset": witness, "duplicates": ndup})
            return report
        if nbad > b:
            report.holds = False
            report.violations.append({"condition": 3, "subset": witness, "bad_labels": nbad})
            return report
    return report


@dataclass
class BicliqueWitness:
    label: int
    S: list[int]
    T: list[int]


@dataclass
class WitnessReport:
    witness: Optional[BicliqueWitness]
    exhaustive: bool


def find_biclique_witness(
    inst: RigInstance, a: int, b: int, subset_budget: int = 500_000
) -> WitnessReport:
    """Search for S ⊆ S_l (|S| = a) and T outside S_l (|T| = b) fully joined.

    A witness exists iff some a-subset S of a ground-truth clique has at
    least b common neighbours outside that clique, so the scan enumerates
    left sides only.  Exceeding ``subset_budget`` switches to a greedy pass
    flagged non-exhaustive; absence is then only "not found".
    """
    if a < 1 or b < 1:
        raise ModelConstraintError("witness sizes must be >= 1")
    adj = inst.graph.adj
    exhaustive = True
    for l in range(inst.d):
        S_l = inst.clique(l)
        if len(S_l) < a:
            continue
        in_Sl = np.zeros(inst.n, dtype=bool)
        in_Sl[S_l] = True
        if math.comb(len(S_l), a) > subset_budget:
            exhaustive = False
            subsets = _greedy_left_sides(adj, S_l, a, limit=2000)
        else:
            subsets = combinations([int(v) for v in S_l], a)
        for S in subsets:
            common = np.ones(inst.n, dtype=bool)
            for u in S:
                common &= adj[u]
            common &= ~in_Sl
            if int(common.sum()) >= b:
                T = [int(v) for v in np.nonzero(common)[0][:b]]
                return WitnessReport(BicliqueWitness(l, sorted(S), T), exhaustive)
    return WitnessReport(None, exhaustive)


def _greedy_left_sides(adj: np.ndarray, S_l: np.ndarray, a: int, limit: int):
    """Heuristic left sides: grow from each start vertex, keeping the common
    neighbourhood as large as possible."""
    out = []
    members = [int(v) for v in S_l]
    for start in members[:limit]:
        S = [start]
        common = adj[start].copy()
        while len(S) < a:
            cands = [v for v in members if v not in S]
            if not cands:
                break
            best = max(cands, key=lambda v: int((common & adj[v]).sum()))
            S.append(best)
            common &= adj[best]
        if len(S) == a:
            out.append(tuple(sorted(S)))
    return out


def max_degree_into_clique(graph: Graph, S: Sequence[int]) -> tuple[int, Optional[int]]:
    """Max over v outside S of the number of neighbours of v in S, with argmax."""
    S = np.asarray(sorted(set(int(v) for v in S)), dtype=np.int64)
    outside = np.ones(graph.n, dtype=bool)
    outside[S] = False
    out_idx = np.nonzero(outside)[0]
    if len(out_idx) == 0 or len(S) == 0:
        return 0, None
    degs = graph.adj[np.ix_(out_idx, S)].sum(axis=1)
    i = int(np.argmax(degs))
    return int(degs[i]), int(out_idx[i])


def duplicate_free_greedy(
    inst: RigInstance, K: Sequence[int], debug: bool = False
) -> tuple[list[int], dict[frozenset, Optional[int]]]:
    """Greedy extraction of a duplicate-free subset of K.

    Vertices are processed in ascending index order.  When v joins Q, every
    remaining vertex carrying a label that v shares with some member of Q is
    discarded, and each pair {u, v} is assigned the smallest shared label
    (or None).  The result satisfies: every label is assigned to at most one
    pair, and assigned labels are genuinely shared.
    """
    remaining = sorted(set(int(v) for v in K))
    Q: list[int] = []
    g: dict[frozenset, Optional[int]] = {}
    label_sets = {v: set(int(l) for l in inst.labels_of(v)) for v in remaining}
    while remaining:
        if debug:
            for i, u in enumerate(Q):
                for u2 in Q[i + 1:]:
                    shared = label_sets_get(inst, u) & label_sets_get(inst, u2)
                    for w in remaining:
                        assert not (shared & label_sets[w]), "duplicate-free invariant broken"
        v = remaining[0]
        poisoned: set[int] = set()
        for u in Q:
            common = label_sets_get(inst, u) & label_sets[v]
            g[frozenset((u, v))] = min(common) if common else None
            poisoned |= common
        if poisoned:
            remaining = [w for w in remaining if not (label_sets[w] & poisoned)]
            if v in remaining:
                remaining.remove(v)
        else:
            remaining.remove(v)
        Q.append(v)
    return Q, g


def label_sets_get(inst: RigInstance, v: int) -> set[int]:
    return set(int(l) for l in inst.labels_of(v))


def validate_duplicate_free(
    inst: RigInstance, Q: Sequence[int], g: dict[frozenset, Optional[int]]
) -> bool:
    """Independent checker for the duplicate-free definition."""
    used: set[int] = set()
    for pair, l in g.items():
        if l is None:
            continue
        if l in used:
            return False
        used.add(l)
        u, v = sorted(pair)
        if l not in label_sets_get(inst, u) or l not in label_sets_get(inst, v):
            return False
    return True


def enumerate_maximal_cliques(
    graph: Graph, min_size: int, cap: int = CLIQUE_CAP_DEFAULT
) -> list[tuple[int, ...]]:
    """All maximal cliques of size >= min_size, sorted, deduplicated.

    Bron-Kerbosch with pivoting over a degeneracy ordering; branches that
    cannot reach min_size are pruned.  Graphs larger than ``cap`` vertices
    are refused.
    """
    n = graph.n
    if n > cap:
        raise EnumerationCapError(f"graph has {n} > cap={cap} vertices")
    if n == 0:
        return []
    masks = graph.neighbor_masks()
    order = _degeneracy_order(graph)
    found: list[tuple[int, ...]] = []

    def expand(R: list[int], P: int, X: int) -> None:
        if P == 0 and X == 0:
            if len(R) >= min_size:
                found.append(tuple(sorted(R)))
            return
        if len(R) + P.bit_count() < min_size:
            return
        PX = P | X
        pivot = max(_bits(PX), key=lambda u: (P & masks[u]).bit_count())
        cand = P & ~masks[pivot]
        for v in _bits(cand):
            mv = masks[v]
            expand(R + [v], P & mv, X & mv)
            P &= ~(1 << v)
            X |= 1 << v

    P_all = (1 << n) - 1
    pos = {v: i for i, v in enumerate(order)}
    P, X = P_all, 0
    for v in order:
        mv = masks[v]
        expand([v], P & mv, X & mv)
        P &= ~(1 << v)
        X |= 1 << v
    return sorted(set(found))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _degeneracy_order(graph: Graph) -> list[int]:
    n = graph.n
    degs = graph.degrees().astype(np.int64).copy()
    alive = np.ones(n, dtype=bool)
    order = []
    for _ in range(n):
        cand = np.nonzero(alive)[0]
        v = int(cand[np.argmin(degs[cand])])
        order.append(v)
        alive[v] = False
        degs[graph.adj[v] & alive] -= 1
    return order


@dataclass
class SingleLabelReport:
    threshold: int
    cliques_checked: int
    violations: list[tuple[int, ...]]


def single_label_check(
    inst: RigInstance, epsilon: float, cap: int = CLIQUE_CAP_DEFAULT
) -> SingleLabelReport:
    """Empirical single-label clique test.

    Enumerates maximal cliques of size >= (1 - epsilon)k and reports those
    not contained in any ground-truth S_l.
    """
    threshold = max(2, math.ceil((1.0 - epsilon) * inst.k - 1e-9))
    cliques = enumerate_maximal_cliques(inst.graph, threshold, cap=cap)
    ground = [set(int(v) for v in S) for S in inst.cliques()]
    violations = [K for K in cliques if not any(set(K) <= S for S in ground)]
    return SingleLabelReport(threshold, len(cliques), violations)
