import numpy as np
import pytest

from mxdisc import (
    BenchmarkConfig, DcscConfig, MultiplexNetwork, consensus_cluster, generate_instance,
    laplacian_sum, mx_dcsc_solve, nmi, normalized_laplacian,
)
from mxdisc.dcsc import _Problem
from mxdisc.linalg import orthonormality_residual, projection_distance_sq
from mxdisc.multiplex import layer_laplacians
from mxdisc.spectral import spectral_embedding

from conftest import random_multiplex


def _all_blocks(res):
    return [res.u1_bar, res.u2_bar, res.u1_star, res.u2_star, *res.u1_layers, *res.u2_layers]


def test_decoupled_reduction(rng):
    net1, net2 = random_multiplex(18, 3, rng), random_multiplex(18, 2, rng)
    res = mx_dcsc_solve(net1, net2, DcscConfig(k1=2, k2=2, kt1=3, kt2=4, alpha=0, beta=0, gamma=0))
    assert projection_distance_sq(res.u1_bar, consensus_cluster(net1, 2)[0]) <= 1e-8
    assert projection_distance_sq(res.u1_star, consensus_cluster(net1, 3)[0]) <= 1e-8
    assert projection_distance_sq(res.u2_star, consensus_cluster(net2, 4)[0]) <= 1e-8
    for a, u in zip(net1.layers, res.u1_layers):
        assert projection_distance_sq(u, spectral_embedding(a, 3)) <= 1e-8
    assert res.converged and res.iterations == 1


def test_single_layer_reduction(rng):
    net1, net2 = random_multiplex(12, 1, rng), random_multiplex(12, 1, rng)
    res = mx_dcsc_solve(net1, net2, DcscConfig(k1=2, k2=3, kt1=2, kt2=3, alpha=0, beta=0, gamma=0))
    a1, a2 = net1.layers[0], net2.layers[0]
    for u, a, k in ((res.u1_bar, a1, 2), (res.u1_star, a1, 2), (res.u1_layers[0], a1, 2),
                    (res.u2_bar, a2, 3), (res.u2_star, a2, 3), (res.u2_layers[0], a2, 3)):
        assert projection_distance_sq(u, spectral_embedding(a, k)) <= 1e-8


def test_every_block_is_globally_optimal_and_monotone(rng):
    net1, net2 = random_multiplex(16, 3, rng), random_multiplex(16, 2, rng)
    gaps = []

    def check(name, m, u):
        expected = np.linalg.eigvalsh(m)[: u.shape[1]].sum()
        gaps.append(abs(np.trace(u.T @ m @ u) - expected))

    res = mx_dcsc_solve(net1, net2, DcscConfig(k1=2, k2=1, kt1=3, kt2=3, alpha=0.8, beta=0.6, gamma=0.3, tol=1e-12),
                        callback=check)
    assert max(gaps) <= 1e-8
    assert len(gaps) == res.iterations * (2 + 3 + 2 + 2)
    trace = res.objective_trace
    assert all(b <= a + 1e-8 for a, b in zip(trace, trace[1:]))
    assert max(orthonormality_residual(u) for u in _all_blocks(res)) <= 1e-8


def test_objective_terms_recomputed(rng):
    net1, net2 = random_multiplex(11, 2, rng), random_multiplex(11, 3, rng)
    a, b, g = 0.4, 0.7, 0.2
    cfg = DcscConfig(k1=2, k2=2, kt1=3, kt2=3, alpha=a, beta=b, gamma=g)
    res = mx_dcsc_solve(net1, net2, cfg)
    s1, s2 = laplacian_sum(net1), laplacian_sum(net2)
    l1 = [normalized_laplacian(x) for x in net1.layers]
    l2 = [normalized_laplacian(x) for x in net2.layers]
    proj = lambda blocks: sum(u @ u.T for u in blocks)

    dis1_assembled = np.trace(res.u1_bar.T @ (s1 + a * proj(res.u2_layers)) @ res.u1_bar)
    dis1_parts = np.trace(res.u1_bar.T @ s1 @ res.u1_bar) + a * sum(
        np.trace(res.u1_bar @ res.u1_bar.T @ u @ u.T) for u in res.u2_layers)
    assert dis1_parts == pytest.approx(dis1_assembled, abs=1e-9)

    lw1 = sum(np.trace(u.T @ lap @ u) for u, lap in zip(res.u1_layers, l1))
    con1 = np.trace(res.u1_star.T @ (s1 - b * proj(res.u1_layers)) @ res.u1_star)
    dis2 = np.trace(res.u2_bar.T @ (s2 + a * proj(res.u1_layers)) @ res.u2_bar)
    lw2 = sum(np.trace(u.T @ lap @ u) for u, lap in zip(res.u2_layers, l2))
    con2 = np.trace(res.u2_star.T @ (s2 - b * proj(res.u2_layers)) @ res.u2_star)
    coupling = np.trace(res.u1_bar @ res.u1_bar.T @ res.u2_bar @ res.u2_bar.T)
    total = dis1_assembled + dis2 - g * coupling + lw1 + lw2 + con1 + con2
    assert res.objective_trace[-1] == pytest.approx(total, abs=1e-9)


def test_output_shapes(rng):
    net1, net2 = random_multiplex(14, 3, rng), random_multiplex(14, 2, rng)
    res = mx_dcsc_solve(net1, net2, DcscConfig(k1=1, k2=2, kt1=3, kt2=4))
    assert res.u1_bar.shape == (14, 1) and res.u2_bar.shape == (14, 2)
    assert len(res.u1_layers) == 3 and len(res.u2_layers) == 2
    assert all(u.shape == (14, 3) for u in res.u1_layers)
    assert res.u2_star.shape == (14, 4)
    assert res.consensus_partition_1.max() < 3 and res.consensus_partition_2.max() < 4


@pytest.mark.slow
def test_experiment1_desk_scale_consensus_nmi():
    scores = []
    for seed in range(10):
        cfg = BenchmarkConfig(n=128, layers1=5, layers2=5, k_total1=6, k_total2=5, k_shared=2, mu=0.3, seed=seed)
        inst = generate_instance(cfg)
        res = mx_dcsc_solve(inst.net1, inst.net2, DcscConfig(k1=4, k2=3, kt1=6, kt2=5, seed=seed))
        scores.append(np.mean([nmi(res.consensus_partition_1, inst.truth.reference1),
                               nmi(res.consensus_partition_2, inst.truth.reference2)]))
    assert np.mean(scores) >= 0.90
