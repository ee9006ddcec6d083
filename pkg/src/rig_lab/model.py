"""Noisy random intersection graph generation and model couplings.

The one-sided model on vertex set [n]: every vertex draws a label set
M_v over [d], including each label independently with probability delta;
pairs sharing a label are always adjacent, disjoint pairs are adjacent with
probability q.  delta is the unique value making the per-pair edge marginal
exactly p.  The set S_l = {v : l in M_v} is the ground-truth clique of
label l, of expected size k = delta * n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import rng
from .errors import ModelConstraintError
from .graphs import Graph

_SEED_MAX = 2**64


def _check_probs(p: float, q: float) -> None:
    if not (0.0 <= q < p < 1.0):
        raise ModelConstraintError(f"need 0 <= q < p < 1, got p={p}, q={q}")


@dataclass(frozen=True)
class RigParams:
    n: int
    d: int
    p: float
    q: float
    seed: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ModelConstraintError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        _check_probs(self.p, self.q)
        if not (0 <= self.seed < _SEED_MAX):
            raise ModelConstraintError("seed must fit in 64 bits")

    @property
    def alpha(self) -> float:
        """log(d)/log(n), informational; 0 for degenerate n <= 1 or d = 1."""
        if self.n <= 1 or self.d <= 1:
            return 0.0
        return math.log(self.d) / math.log(self.n)


@dataclass(frozen=True)
class TwoSidedParams:
    n: int
    d: int
    p: float
    q_up: float
    q_down: float
    seed: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ModelConstraintError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        if not (0.0 <= self.q_down < self.q_up <= 1.0):
            raise ModelConstraintError(f"need 0 <= q_down < q_up <= 1, got {self.q_down}, {self.q_up}")
        if not (self.q_down < self.p < self.q_up):
            raise ModelConstraintError("overall density p must lie strictly between q_down and q_up")
        if not (0 <= self.seed < _SEED_MAX):
            raise ModelConstraintError("seed must fit in 64 bits")


def delta_from_params(d: int, p: float, q: float) -> float:
    """Label probability making the edge marginal exactly p.

    Solves p = 1 - (1-q)(1-delta^2)^d in closed form:
    delta = sqrt(1 - exp(-log((1-q)/(1-p)) / d)).
    """
    if d < 1:
        raise ModelConstraintError(f"need d >= 1, got {d}")
    _check_probs(p, q)
    return math.sqrt(1.0 - math.exp(-math.log((1.0 - q) / (1.0 - p)) / d))


def two_sided_delta(d: int, p: float, q_up: float, q_down: float, tol: float = 1e-12) -> float:
    """Label probability for the two-sided model, by bisection.

    Solves p = q_up*(1-(1-delta^2)^d) + q_down*(1-delta^2)^d.  No closed form
    is available in general; q_up = 1 reduces to the one-sided closed form.
    """
    if q_up == 1.0:
        return delta_from_params(d, p, q_down)

    def density(delta: float) -> float:
        base = (1.0 - delta * delta) ** d
        return q_up * (1.0 - base) + q_down * base

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if density(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RigInstance:
    """A sampled instance: parameters, labels, ground truth, and the graph."""

    params: RigParams | TwoSidedParams
    delta: float
    label_matrix: np.ndarray  # (n, d) bool, row v = M_v
    graph: Graph
    pristine: bool = True  # False once an adversary touched the edges

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def k(self) -> float:
        """Expected ground-truth clique size delta * n."""
        return self.delta * self.params.n

    @property
    def two_sided(self) -> bool:
        return isinstance(self.params, TwoSidedParams)

    def labels_of(self, v: int) -> np.ndarray:
        return np.nonzero(self.label_matrix[v])[0]

    def clique(self, label: int) -> np.ndarray:
        """S_l = vertices that chose this label."""
        return np.nonzero(self.label_matrix[:, label])[0]

    def cliques(self) -> list[np.ndarray]:
        return [self.clique(l) for l in range(self.d)]

    def share_matrix(self) -> np.ndarray:
        """(n, n) bool: True where M_u and M_v intersect (ground-truth pairs)."""
        counts = self.label_matrix.astype(np.float32) @ self.label_matrix.astype(np.float32).T
        share = counts > 0.5
        np.fill_diagonal(share, False)
        return share

    def noise_edges(self) -> np.ndarray:
        """Edges between label-disjoint pairs (deletable by a monotone adversary)."""
        share = self.share_matrix()
        noise = self.graph.adj & ~share
        iu, iv = np.nonzero(np.triu(noise, 1))
        return np.stack([iu, iv], axis=1) if len(iu) else np.empty((0, 2), dtype=np.int64)


def _sample_labels(seed: int, n: int, d: int, delta: float) -> np.ndarray:
    return rng.label_uniforms(seed, n, d) < delta


def _adjacency(n: int, share: np.ndarray, noise_mask_upper: np.ndarray) -> Graph:
    iu, iv = np.triu_indices(n, 1)
    adj = np.zeros((n, n), dtype=bool)
    present = share[iu, iv] | noise_mask_upper
    adj[iu[present], iv[present]] = True
    adj |= adj.T
    return Graph(adj)


def sample_rig(params: RigParams) -> RigInstance:
    """Sample RIG(n, d, p, q); fully determined by params.seed."""
    delta = delta_from_params(params.d, params.p, params.q)
    labels = _sample_labels(params.seed, params.n, params.d, delta)
    inst_share = _share_from_labels(labels)
    r = rng.pair_uniforms(params.seed, params.n)
    graph = _adjacency(params.n, inst_share, r < params.q)
    return RigInstance(params=params, delta=delta, label_matrix=labels, graph=graph)


def sample_two_sided(params: TwoSidedParams) -> RigInstance:
    """Sample the two-sided noise variant RIG2(n, d, p, q_up, q_down).

    Generator only: ground truth S_l is stored, but no recovery guarantees
    are attached to this model.
    """
    delta = two_sided_delta(params.d, params.p, params.q_up, params.q_down)
    labels = _sample_labels(params.seed, params.n, params.d, delta)
    share = _share_from_labels(labels)
    r = rng.pair_uniforms(params.seed, params.n)
    iu, iv = np.triu_indices(params.n, 1)
    share_u = share[iu, iv]
    present = np.where(share_u, r < params.q_up, r < params.q_down)
    adj = np.zeros((params.n, params.n), dtype=bool)
    adj[iu[present], iv[present]] = True
    adj |= adj.T
    return RigInstance(params=params, delta=delta, label_matrix=labels, graph=Graph(adj))


def _share_from_labels(labels: np.ndarray) -> np.ndarray:
    counts = labels.astype(np.float32) @ labels.astype(np.float32).T
    share = counts > 0.5
    np.fill_diagonal(share, False)
    return share


def densify_noise(p: float, q: float, p_prime: float) -> float:
    """q' = 1 - (1-p')(1-q)/(1-p); keeps delta fixed while raising density to p'."""
    return 1.0 - (1.0 - p_prime) * (1.0 - q) / (1.0 - p)


def densify(inst: RigInstance, p_prime: float) -> RigInstance:
    """Couple inst upward to overall density p_prime.

    Labels (hence all S_l) are reused bit-for-bit and the shared per-pair
    uniforms only ever add noise edges, so the input edge set is contained in
    the output deterministically.
    """
    if inst.two_sided:
        raise ModelConstraintError("densify applies to the one-sided model only")
    if not inst.pristine:
        raise ModelConstraintError("densify requires an instance untouched by adversaries")
    params = inst.params
    if p_prime < params.p:
        raise ModelConstraintError(f"p' must be >= p, got p'={p_prime} < p={params.p}")
    if p_prime > 0.5:
        raise ModelConstraintError("coupling range requires p' <= 1/2")
    if p_prime == params.p:
        return inst
    q_prime = densify_noise(params.p, params.q, p_prime)
    share = inst.share_matrix()
    r = rng.pair_uniforms(params.seed, params.n)
    graph = _adjacency(params.n, share, r < q_prime)
    new_params = replace(params, p=p_prime, q=q_prime)
    return RigInstance(params=new_params, delta=inst.delta, label_matrix=inst.label_matrix, graph=graph)


def plant_clique_reduction(
    base: Graph, k1: np.ndarray, d: int, delta: float, seed: int
) -> tuple[Graph, list[np.ndarray]]:
    """Extend a single planted clique to a full RIG by planting d-1 more.

    ``base`` is an Erdos-Renyi graph with the clique on ``k1`` already
    planted (membership Binomial(n, delta)).  Each further clique draws its
    members independently with probability delta and its edges are unioned
    in.  With base noise density q the output is distributed as
    RIG(n, d, p, q) for p = 1 - (1-q)(1-delta^2)^d, and k1 is among the
    returned planted sets.
    """
    n = base.n
    k1 = np.asarray(k1, dtype=np.int64)
    sets = [k1]
    adj = base.adj.copy()
    adj.setflags(write=True)
    g = rng.stream(seed, rng.LABELS)
    for _ in range(d - 1):
        members = np.nonzero(g.random(n) < delta)[0]
        sets.append(members)
        if len(members) > 1:
            block = np.ix_(members, members)
            adj[block] = True
            adj[members, members] = False
    return Graph(adj), sets
