import numpy as np
import pytest

from rig_lab.adversary import apply_bounded_adversary, apply_monotone_adversary
from rig_lab.errors import BudgetExceededError, MonotonicityError
from rig_lab.model import RigParams, sample_rig


@pytest.fixture(scope="module")
def inst():
    return sample_rig(RigParams(n=150, d=6, p=0.5, q=0.2, seed=17))


def test_fraction_zero_is_identity(inst):
    out, ledger = apply_monotone_adversary(inst, {"kind": "fraction", "fraction": 0.0}, seed=1)
    assert np.array_equal(out.graph.adj, inst.graph.adj)
    assert ledger.monotone_deletions == []


def test_full_noise_deletion_leaves_label_union(inst):
    out, ledger = apply_monotone_adversary(inst, {"kind": "fraction", "fraction": 1.0}, seed=1)
    share = inst.share_matrix()
    assert np.array_equal(out.graph.adj, share)
    assert len(ledger.monotone_deletions) == len(inst.noise_edges())
    assert not out.pristine


def test_noiseless_instance_is_noop():
    clean = sample_rig(RigParams(n=80, d=3, p=0.3, q=0.0, seed=4))
    out, ledger = apply_monotone_adversary(clean, {"kind": "fraction", "fraction": 1.0}, seed=0)
    assert np.array_equal(out.graph.adj, clean.graph.adj)
    assert ledger.monotone_deletions == []


def test_monotone_deletions_never_touch_ground_truth(inst):
    out, ledger = apply_monotone_adversary(inst, {"kind": "fraction", "fraction": 0.5}, seed=9)
    share = inst.share_matrix()
    for u, v in ledger.monotone_deletions:
        assert not share[u, v]
    for S in inst.cliques():
        assert out.graph.is_clique(S)


def test_target_strategy(inst):
    targets = [0, 1, 2]
    out, ledger = apply_monotone_adversary(inst, {"kind": "target", "vertices": targets}, seed=0)
    share = inst.share_matrix()
    for v in targets:
        row_noise = inst.graph.adj[v] & ~share[v]
        assert not out.graph.adj[v][np.nonzero(row_noise)[0]].any()


def test_custom_rejects_ground_truth_edge(inst):
    share = inst.share_matrix()
    iu, iv = np.nonzero(np.triu(share & inst.graph.adj, 1))
    with pytest.raises(MonotonicityError):
        apply_monotone_adversary(inst, {"kind": "custom", "edges": [[int(iu[0]), int(iv[0])]]}, seed=0)


def test_bounded_identity(inst):
    g, ledger = apply_bounded_adversary(inst, 0.0, 0.0, {"kind": "random-flips", "num_flips": 0}, seed=0)
    assert np.array_equal(g.adj, inst.graph.adj)


def test_random_flips_respect_budget(inst):
    k = inst.k
    eps = 10.0 / k  # budget of 10 flips per vertex
    g, ledger = apply_bounded_adversary(inst, eps, 0.0, {"kind": "random-flips", "num_flips": 60}, seed=3)
    # recount flips from the edge diff, independently of the ledger
    diff = g.adj ^ inst.graph.adj
    per_vertex = diff.sum(axis=1)
    assert per_vertex.max() <= 10
    assert diff.sum() // 2 == 60
    recounted = {int(v): int(c) for v, c in enumerate(per_vertex) if c}
    assert recounted == ledger.flip_counts


def test_random_flips_budget_error(inst):
    with pytest.raises(BudgetExceededError):
        apply_bounded_adversary(inst, 0.0, 0.0, {"kind": "random-flips", "num_flips": 5}, seed=0)


def test_rewrite_row_audit(inst):
    k = inst.k
    g, ledger = apply_bounded_adversary(
        inst, 0.0, 3.0 / k, {"kind": "rewrite", "num_vertices": 3}, seed=5
    )
    M = set(ledger.corrupted_vertices)
    assert len(M) == 3
    diff = g.adj ^ inst.graph.adj
    for v in range(inst.n):
        if v in M:
            continue
        changed = set(int(u) for u in np.nonzero(diff[v])[0])
        assert changed <= M  # rows outside M differ only at columns in M
    assert np.array_equal(g.adj, g.adj.T)


def test_rewrite_node_budget(inst):
    with pytest.raises(BudgetExceededError):
        apply_bounded_adversary(inst, 0.0, 0.0, {"kind": "rewrite", "num_vertices": 1}, seed=0)


def test_target_clique_deletions(inst):
    k = inst.k
    g, ledger = apply_bounded_adversary(
        inst, 5.0 / k, 0.0, {"kind": "target-clique", "label": 0, "num_deletions": 8}, seed=2
    )
    S = set(int(v) for v in inst.clique(0))
    assert len(ledger.flipped_edges) == 8
    for u, v in ledger.flipped_edges:
        assert u in S and v in S
        assert not g.adj[u, v]
    assert max(ledger.flip_counts.values()) <= 5
