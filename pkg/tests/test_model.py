import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rig_lab.errors import ModelConstraintError
from rig_lab.model import (
    RigInstance,
    RigParams,
    TwoSidedParams,
    delta_from_params,
    densify,
    densify_noise,
    plant_clique_reduction,
    sample_rig,
    sample_two_sided,
    two_sided_delta,
)
from rig_lab.graphs import Graph


def test_delta_closed_form_d1():
    # sqrt(1 - 2^(-1/d)) at d=1 is sqrt(1/2)
    assert delta_from_params(1, 0.5, 0.0) == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_delta_closed_form_d100_high_precision():
    # evaluated with mpmath at 50 digits: sqrt(1 - exp(-ln(2)/100))
    assert delta_from_params(100, 0.5, 0.0) == pytest.approx(0.08311139851406708, abs=1e-12)


def test_delta_q_to_p_limit():
    assert delta_from_params(7, 0.3, 0.3 - 1e-12) <= 1e-6


def test_delta_rejects_bad_params():
    with pytest.raises(ModelConstraintError):
        delta_from_params(4, 0.5, 0.5)
    with pytest.raises(ModelConstraintError):
        delta_from_params(4, 1.0, 0.1)
    with pytest.raises(ModelConstraintError):
        delta_from_params(0, 0.5, 0.1)


@given(
    d=st.integers(1, 500),
    p=st.floats(0.01, 0.95),
    frac=st.floats(0.0, 0.95),
)
@settings(max_examples=60, deadline=None)
def test_delta_solves_density_fixed_point(d, p, frac):
    q = p * frac
    delta = delta_from_params(d, p, q)
    assert 0.0 < delta <= 1.0
    recon = 1.0 - (1.0 - q) * (1.0 - delta * delta) ** d
    assert recon == pytest.approx(p, abs=1e-9)


def test_sample_rig_ground_truth_cliques_and_label_edges():
    inst = sample_rig(RigParams(n=120, d=8, p=0.4, q=0.1, seed=3))
    for S in inst.cliques():
        assert inst.graph.is_clique(S)
    # every label-sharing pair is an edge
    share = inst.share_matrix()
    assert not (share & ~inst.graph.adj).any()
    # no self loops
    assert not np.diagonal(inst.graph.adj).any()


def test_sample_rig_single_label_no_noise_structure():
    inst = sample_rig(RigParams(n=60, d=1, p=0.4, q=0.0, seed=11))
    S = set(int(v) for v in inst.clique(0))
    for u, v in inst.graph.edges():
        assert int(u) in S and int(v) in S


def test_sample_rig_near_er_limit():
    p = 0.4
    inst = sample_rig(RigParams(n=80, d=6, p=p, q=p - 1e-9, seed=5))
    assert inst.delta < 1e-4
    assert inst.label_matrix.sum() == 0  # labels essentially never drawn


def test_determinism_same_seed():
    a = sample_rig(RigParams(n=90, d=12, p=0.5, q=0.2, seed=42))
    b = sample_rig(RigParams(n=90, d=12, p=0.5, q=0.2, seed=42))
    assert np.array_equal(a.graph.adj, b.graph.adj)
    assert np.array_equal(a.label_matrix, b.label_matrix)
    c = sample_rig(RigParams(n=90, d=12, p=0.5, q=0.2, seed=43))
    assert not np.array_equal(c.graph.adj, a.graph.adj)


def test_pair_marginal_exact():
    # per-pair marginal equals p: independent seeded instances, one pair each
    p, hits, trials = 0.45, 0, 4000
    for seed in range(trials):
        inst = sample_rig(RigParams(n=2, d=3, p=p, q=0.15, seed=seed))
        hits += int(inst.graph.has_edge(0, 1))
    sd = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) < 4 * sd


def test_densify_coupling_and_formula():
    # Lemma-style closed form: p=0.3, q=0, p'=0.5 gives q' = 2/7
    assert densify_noise(0.3, 0.0, 0.5) == pytest.approx(2.0 / 7.0, abs=1e-15)
    inst = sample_rig(RigParams(n=100, d=6, p=0.3, q=0.05, seed=9))
    dense = densify(inst, 0.5)
    # same labels bit for bit
    assert np.array_equal(inst.label_matrix, dense.label_matrix)
    assert dense.delta == inst.delta
    # edge containment
    assert not (inst.graph.adj & ~dense.graph.adj).any()
    # delta consistency of the new parameters
    assert delta_from_params(6, dense.params.p, dense.params.q) == pytest.approx(inst.delta, abs=1e-12)


def test_densify_identity_and_errors():
    inst = sample_rig(RigParams(n=40, d=4, p=0.3, q=0.1, seed=1))
    assert densify(inst, 0.3) is inst
    with pytest.raises(ModelConstraintError):
        densify(inst, 0.2)
    with pytest.raises(ModelConstraintError):
        densify(inst, 0.7)


def test_two_sided_degenerates_to_one_sided():
    one = sample_rig(RigParams(n=70, d=5, p=0.4, q=0.1, seed=21))
    two = sample_two_sided(TwoSidedParams(n=70, d=5, p=0.4, q_up=1.0, q_down=0.1, seed=21))
    assert np.array_equal(one.graph.adj, two.graph.adj)
    assert np.array_equal(one.label_matrix, two.label_matrix)


def test_two_sided_er_when_rates_close():
    # q_up ~ q_down: labels are irrelevant for edge retention probabilities
    params = TwoSidedParams(n=60, d=4, p=0.5, q_up=0.50001, q_down=0.49999, seed=2)
    inst = sample_two_sided(params)
    dens = inst.graph.edge_count / (60 * 59 / 2)
    assert abs(dens - 0.5) < 0.12


def test_two_sided_fixed_point_and_validation():
    delta = two_sided_delta(16, 0.5, 0.9, 0.1)
    base = (1 - delta**2) ** 16
    assert 0.9 * (1 - base) + 0.1 * base == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(ModelConstraintError):
        TwoSidedParams(n=10, d=2, p=0.5, q_up=0.4, q_down=0.4, seed=0)


def test_two_sided_in_community_density():
    params = TwoSidedParams(n=500, d=16, p=0.5, q_up=0.9, q_down=0.1, seed=7)
    inst = sample_two_sided(params)
    S = inst.clique(0)
    assert len(S) > 20
    sub = inst.graph.adj[np.ix_(S, S)]
    dens = sub.sum() / (len(S) * (len(S) - 1))
    sd = math.sqrt(0.9 * 0.1 / (len(S) * (len(S) - 1) / 2))
    assert abs(dens - 0.9) < 5 * sd


def test_plant_clique_reduction_identity_and_contains_k1():
    g = Graph.from_edges(6, [(0, 1), (2, 3), (0, 2), (1, 2)])  # K1 = {0,1,2} pre-planted
    k1 = np.array([0, 1, 2])
    out, sets = plant_clique_reduction(g, k1, d=1, delta=0.3, seed=0)
    assert out == g and len(sets) == 1
    out2, sets2 = plant_clique_reduction(g, k1, d=5, delta=0.3, seed=0)
    assert [int(v) for v in sets2[0]] == [0, 1, 2]
    assert len(sets2) == 5
    for S in sets2:
        assert out2.is_clique(S)
    # base edges are kept
    assert not (g.adj & ~out2.adj).any()


def test_plant_clique_reduction_density_matches_generator():
    # two-sample comparison against sample_rig at the matched p
    n, d, q, seed_count = 300, 6, 0.1, 12
    delta = delta_from_params(d, 0.4, q)  # any p consistent with (d, q, delta)
    p = 1 - (1 - q) * (1 - delta**2) ** d
    assert p == pytest.approx(0.4, abs=1e-12)
    dens_red, dens_rig = [], []
    from rig_lab import rng as _r

    for seed in range(seed_count):
        g = _r.stream(seed, 777).random((n, n)) < q
        g = np.triu(g, 1)
        g = g | g.T
        k1 = np.nonzero(_r.stream(seed, 778).random(n) < delta)[0]
        base = Graph(g).with_edge_changes(
            add=[(int(k1[i]), int(k1[j])) for i in range(len(k1)) for j in range(i + 1, len(k1))]
        )
        out, _ = plant_clique_reduction(base, k1, d=d, delta=delta, seed=seed)
        dens_red.append(out.edge_count / (n * (n - 1) / 2))
        inst = sample_rig(RigParams(n=n, d=d, p=p, q=q, seed=seed))
        dens_rig.append(inst.graph.edge_count / (n * (n - 1) / 2))
    gap = abs(np.mean(dens_red) - np.mean(dens_rig))
    pooled_sd = math.sqrt((np.var(dens_red) + np.var(dens_rig)) / seed_count) + 1e-12
    assert gap < 3 * pooled_sd + 0.01
