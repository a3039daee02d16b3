"""Acceptance criteria, one test each.

Every test appends a ``[PASS]``/``[FAIL]`` line to the terminal summary and
then asserts, so a red criterion shows up both in the summary section and as
a failed test.
"""
import time
import warnings

import numpy as np
import pytest

from mxdisc import (
    BenchmarkConfig, DcscConfig, DscConfig, affinity_degrees, auc_roc, consensus_cluster,
    generate_instance, mx_dcsc_solve, mx_dsc_solve, nmi,
)
from mxdisc.cli import main
from mxdisc.linalg import orthonormality_residual, projection_distance_sq
from mxdisc.pipeline import SolverParams, detect, planted_dims, score_detection, truth_from_instance
from mxdisc.spectral import spectral_embedding

from conftest import ACCEPTANCE_LINES, random_multiplex, random_orthonormal, random_rotation

DESK = dict(n=128, layers1=5, layers2=5, k_total1=6, k_total2=5, k_shared=2, p1=1.0, expected_degree=16.0)
SEEDS = range(10)


def record(num, ok, text):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] C{num} {text}")
    assert ok, text


def desk_auc(mode="mx-dsc", **bench):
    vals = []
    for seed in SEEDS:
        cfg = BenchmarkConfig(**{**DESK, **bench}, seed=seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            inst = generate_instance(cfg)
        det = detect(inst.net1, inst.net2, mode, planted_dims(cfg), SolverParams(), seed)
        vals.append(score_detection(det, truth_from_instance(inst)))
    return vals


def test_c1_experiment1_auc():
    t0 = time.perf_counter()
    low = np.mean([r["auc_mean"] for r in desk_auc(mu=0.1)])
    high = np.mean([r["auc_mean"] for r in desk_auc(mu=0.4)])
    elapsed = time.perf_counter() - t0
    ok = low >= 0.95 and high >= 0.85 and elapsed < 120
    record(1, ok, f"MX-DSC auc_mean mu=0.1: {low:.4f} (>=0.95), mu=0.4: {high:.4f} (>=0.85), "
                  f"runtime {elapsed:.1f}s (<120s)")


def test_c2_experiment3_shape():
    one = np.mean([r["auc_mean"] for r in desk_auc(mu=0.3, k_shared=1)])
    three = np.mean([r["auc_mean"] for r in desk_auc(mu=0.3, k_shared=3)])
    record(2, three - one >= 0.15,
           f"auc_mean k_c=1: {one:.4f}, k_c=3: {three:.4f}, drop {three - one:.4f} (need >=0.15)")


def test_c3_dcsc_consensus_nmi():
    vals = [r["nmi"] for r in desk_auc("mx-dcsc", mu=0.3)]
    record(3, np.mean(vals) >= 0.90, f"MX-DCSC consensus NMI mu=0.3: {np.mean(vals):.4f} (>=0.90)")


def _random_run(r, callback=None, n_max=64):
    n = int(r.integers(6, n_max + 1))
    l1, l2 = (int(x) for x in r.integers(1, 5, size=2))
    net1 = random_multiplex(n, l1, r, density=r.uniform(0.3, 0.9))
    net2 = random_multiplex(n, l2, r, density=r.uniform(0.3, 0.9))
    kmax = max(1, min(4, n // 3))
    k1, k2 = (int(x) for x in r.integers(1, kmax + 1, size=2))
    a, b, g = r.uniform(0, 2, size=3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        if r.random() < 0.5:
            return mx_dsc_solve(net1, net2, DscConfig(k1=k1, k2=k2, alpha=a, gamma=g, tol=1e-9), callback)
        kt1, kt2 = (int(x) for x in r.integers(np.maximum([k1, k2], 1), kmax + 1))
        cfg = DcscConfig(k1=k1, k2=k2, kt1=kt1, kt2=kt2, alpha=a, beta=b, gamma=g, tol=1e-9)
        return mx_dcsc_solve(net1, net2, cfg, callback)


def test_c4_monotonicity_suite():
    r = np.random.default_rng(2024)
    worst, bad = -np.inf, 0
    for _ in range(100):
        trace = np.asarray(_random_run(r).objective_trace)
        steps = np.diff(trace)
        worst = max(worst, steps.max(initial=-np.inf))
        bad += bool((steps > 1e-8).any())
    record(4, bad == 0, f"100 random runs, {bad} with an increase > 1e-8 (largest step {worst:.3g})")


def test_c5_block_optimality_oracle():
    r = np.random.default_rng(77)
    worst, checked, skipped = 0.0, 0, 0

    def oracle(name, m, u):
        nonlocal worst, checked, skipped
        vals, vecs = np.linalg.eigh(m)
        if vals[1] - vals[0] <= 1e-8:
            skipped += 1
            return
        worst = max(worst, projection_distance_sq(u, vecs[:, :1]))
        checked += 1

    for _ in range(50):
        n = int(r.integers(3, 9))
        net1 = random_multiplex(n, int(r.integers(1, 4)), r, density=0.9)
        net2 = random_multiplex(n, int(r.integers(1, 4)), r, density=0.9)
        a, b, g = r.uniform(0, 2, size=3)
        if r.random() < 0.5:
            mx_dsc_solve(net1, net2, DscConfig(k1=1, k2=1, alpha=a, gamma=g), oracle)
        else:
            mx_dcsc_solve(net1, net2, DcscConfig(k1=1, k2=1, kt1=1, kt2=1, alpha=a, beta=b, gamma=g), oracle)
    ok = worst <= 1e-8 and checked > 0
    record(5, ok, f"50 tiny instances, {checked} eigen-updates checked ({skipped} with a tied minimum), "
                  f"max projection distance {worst:.2e} (<=1e-8)")


def test_c6_kernel_invariants():
    r = np.random.default_rng(6)
    emitted = []
    for _ in range(20):
        res = _random_run(r, n_max=32)
        emitted += [res.u1_bar, res.u2_bar]
        if hasattr(res, "u1_star"):
            emitted += [res.u1_star, res.u2_star, *res.u1_layers, *res.u2_layers]
    inst = generate_instance(BenchmarkConfig(n=256, layers1=3, layers2=3, seed=1))
    big = mx_dcsc_solve(inst.net1, inst.net2, DcscConfig(k1=4, k2=3, kt1=6, kt2=5))
    emitted += [big.u1_bar, big.u2_bar, big.u1_star, big.u2_star, *big.u1_layers, *big.u2_layers]
    ortho = max(orthonormality_residual(u) for u in emitted)

    z_err = 0.0
    for u in (big.u1_bar, big.u2_bar):
        z = u @ u.T
        ev = np.linalg.eigvalsh(z)
        z_err = max(z_err, np.abs(z - z.T).max(), np.abs(z @ z - z).max(), abs(np.trace(z) - u.shape[1]),
                    np.minimum(np.abs(ev), np.abs(ev - 1)).max())

    rot_err = 0.0
    for _ in range(100):
        k = int(r.integers(1, 7))
        u, v = random_orthonormal(256, k, r), random_orthonormal(256, int(r.integers(1, 7)), r)
        d = projection_distance_sq(u, v)
        rot_err = max(rot_err,
                      abs(projection_distance_sq(u @ random_rotation(k, r), v) - d),
                      np.abs(affinity_degrees(u @ random_rotation(k, r)) - affinity_degrees(u)).max())
    ok = ortho <= 1e-8 and z_err <= 1e-9 and rot_err <= 1e-9
    record(6, ok, f"orthonormality {ortho:.1e} over {len(emitted)} embeddings (<=1e-8), "
                  f"Z checks at N=256 {z_err:.1e} (<=1e-9), rotation invariance {rot_err:.1e} (<=1e-9)")


def test_c7_metric_oracles():
    exact = [
        nmi([0, 0, 1, 1, 2], [1, 1, 0, 0, 5]) == pytest.approx(1.0, abs=1e-15),
        nmi([0, 0, 0, 0], [0, 1, 0, 1]) == 0.0,
        nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15),
        nmi([0, 0, 1, 1], [0, 0, 1, 0]) == pytest.approx(0.3437110184854508, abs=1e-15),  # hand contingency table
        auc_roc([1, 0, 1, 0], [1, 0, 1, 0]) == 1.0,
        auc_roc([0.3] * 4, [1, 0, 1, 0]) == 0.5,
        auc_roc([0.9, 0.4, 0.6, 0.1], [1, 0, 1, 0]) == 1.0,
        auc_roc([0.4, 0.9, 0.6, 0.1], [1, 0, 1, 0]) == 0.5,
    ]
    r = np.random.default_rng(256)
    truth = np.arange(256) % 6
    null = [nmi(truth, r.permutation(truth)) for _ in range(50)]
    ok = all(exact) and np.mean(null) < 0.05
    record(7, ok, f"{sum(exact)}/{len(exact)} hand-computed metric examples exact, "
                  f"shuffle null NMI mean {np.mean(null):.4f} max {np.max(null):.4f} (mean <0.05)")


def test_c8_reductions():
    r = np.random.default_rng(8)
    worst, cases = 0.0, 0
    for _ in range(10):
        net1, net2 = random_multiplex(20, 3, r), random_multiplex(20, 2, r)
        k1, k2 = (int(x) for x in r.integers(1, 4, size=2))
        dsc = mx_dsc_solve(net1, net2, DscConfig(k1=k1, k2=k2, alpha=0, gamma=0))
        dcsc = mx_dcsc_solve(net1, net2, DcscConfig(k1=k1, k2=k2, kt1=k1 + 1, kt2=k2 + 1,
                                                    alpha=0, beta=0, gamma=0))
        pairs = [
            (dsc.u1_bar, consensus_cluster(net1, k1)[0]),
            (dsc.u2_bar, consensus_cluster(net2, k2)[0]),
            (dcsc.u1_bar, consensus_cluster(net1, k1)[0]),
            (dcsc.u2_bar, consensus_cluster(net2, k2)[0]),
            (dcsc.u1_star, consensus_cluster(net1, k1 + 1)[0]),
            (dcsc.u2_star, consensus_cluster(net2, k2 + 1)[0]),
        ]
        pairs += [(u, spectral_embedding(a, k1 + 1)) for u, a in zip(dcsc.u1_layers, net1.layers)]
        pairs += [(u, spectral_embedding(a, k2 + 1)) for u, a in zip(dcsc.u2_layers, net2.layers)]
        worst = max(worst, max(projection_distance_sq(u, v) for u, v in pairs))
        cases += len(pairs)
        if dsc.degenerate or dcsc.degenerate:
            cases -= len(pairs)  # eigengap below threshold, the span is not unique
    record(8, worst <= 1e-8 and cases > 0,
           f"alpha=beta=gamma=0: {cases} blocks vs single-network embeddings, max projection distance {worst:.1e}")


def test_c9_sweep_determinism(tmp_path):
    import json

    doc = {"version": 1, "methods": ["mx-dsc", "mx-dcsc", "spectral"], "dimensions": "planted",
           "solver": {"alpha": [0.25, 0.5], "gamma": 0.5},
           "experiments": [{"name": "exp1", "vary": "mu", "values": [0.1, 0.3], "repetitions": 2,
                            "base": {**DESK, "n": 64, "layers1": 2, "layers2": 2, "expected_degree": 8.0}}]}
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps(doc))
    outs = []
    for name, jobs in (("a", "1"), ("b", "1"), ("c", "2")):
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / name), "--jobs", jobs]) == 0
        outs.append((tmp_path / name / "results.csv").read_bytes())
    ok = outs[0] == outs[1] == outs[2]
    record(9, ok, f"sweep results.csv byte-identical over 3 reruns (1, 1 and 2 jobs), {len(outs[0])} bytes")


def _per_iteration_seconds(n, reps=3):
    inst = generate_instance(BenchmarkConfig(n=n, layers1=5, layers2=5, seed=0))
    cfg = DscConfig(k1=4, k2=3, tol=1e-300, max_iter=5)
    best = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        res = mx_dsc_solve(inst.net1, inst.net2, cfg)
        best = min(best, (time.perf_counter() - t0) / (res.iterations + 1))
    return best


def test_c10_performance_scaling():
    sizes = [128, 256, 512]
    times = [_per_iteration_seconds(n) for n in sizes]
    ratios = [b / a for a, b in zip(times, times[1:])]
    ratio = float(np.exp(np.mean(np.log(ratios))))
    exponents = ", ".join(f"{np.log2(x):.2f}" for x in ratios)
    record(10, ratio <= 5.0,
           f"per-iteration time {', '.join(f'{t * 1e3:.1f}ms' for t in times)} at N={sizes}; "
           f"doubling ratio {ratio:.2f} (<=5), log2 exponents {exponents}")
