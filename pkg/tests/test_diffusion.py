import io
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homodiff import (
    DiffusionParams,
    NodeIdMap,
    init_state,
    laplacian_residual,
    neighbor_sums,
    read_state,
    run,
    step,
    write_state,
)
from homodiff.diffusion import StateFileError
from helpers import build, complete_graph, path_graph, random_graph, star_graph, store


def step_oracle(g, current, initial, lam):
    """Plain-python reference: anchored average over each neighborhood."""
    n, d = current.shape
    out = np.empty_like(current)
    for x in range(n):
        nb = g.neighbors(x)
        if nb.size == 0:
            out[x] = initial[x]
            continue
        for c in range(d):
            s = 0.0
            for y in nb:
                s += current[int(y), c]
            out[x, c] = (1.0 - lam) * initial[x, c] + lam * (s / nb.size)
    return out


def bfs_distances(g, sources):
    dist = np.full(g.node_count, -1, dtype=np.int64)
    q = deque()
    for s in sources:
        dist[int(s)] = 0
        q.append(int(s))
    while q:
        x = q.popleft()
        for y in g.neighbors(x):
            y = int(y)
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def random_state(rng, n, d):
    raw = rng.random((n, d)) + 1e-3
    return raw / raw.sum(axis=1, keepdims=True)


class TestInitState:
    def test_seeds_one_hot_rest_uniform(self):
        g = path_graph(4)
        labels = store([1, -1, -1, 0], d=2)
        s0 = init_state(g, np.array([0, 3]), labels)
        assert s0[0].tolist() == [0.0, 1.0]
        assert s0[3].tolist() == [1.0, 0.0]
        assert s0[1].tolist() == [0.5, 0.5]
        assert s0[2].tolist() == [0.5, 0.5]

    def test_width_override(self):
        g = path_graph(3)
        labels = store([0, -1, -1], d=2)
        s0 = init_state(g, np.array([0]), labels, d=4)
        assert s0.shape == (3, 4)
        assert s0[1].tolist() == [0.25, 0.25, 0.25, 0.25]

    def test_unlabeled_seed_rejected(self):
        g = path_graph(3)
        labels = store([0, -1, -1], d=2)
        with pytest.raises(ValueError):
            init_state(g, np.array([1]), labels)

    def test_rows_are_simplex(self):
        g = star_graph(6)
        labels = store([2, -1, -1, -1, -1, 1], d=3)
        s0 = init_state(g, np.array([0, 5]), labels)
        assert np.allclose(s0.sum(axis=1), 1.0, atol=0)
        assert (s0 >= 0).all()


class TestFrozenPath:
    # path 0-1-2 with node 0 a category-0 seed, lambda = 1/2:
    # after one sweep the anchor keeps 0 at (3/4, 1/4), the middle moves
    # to (5/8, 3/8), and the far end still sees only uniform mass.
    def test_single_sweep_values_exact(self):
        g = path_graph(3)
        labels = store([0, -1, -1], d=2)
        res = run(g, np.array([0]), labels, DiffusionParams(0.5, 1, 1e-12))
        assert res.state[0].tolist() == [0.75, 0.25]
        assert res.state[1].tolist() == [0.625, 0.375]
        assert res.state[2].tolist() == [0.5, 0.5]
        assert res.iterations == 1

    def test_step_matches_run_single_iteration(self):
        g = path_graph(3)
        labels = store([0, -1, -1], d=2)
        s0 = init_state(g, np.array([0]), labels)
        nxt = step(g, s0, s0, 0.5)
        res = run(g, np.array([0]), labels, DiffusionParams(0.5, 1, 1e-12))
        assert np.array_equal(nxt, res.state)


class TestStepContract:
    def test_matches_reference_loops(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            n = int(rng.integers(3, 40))
            g = random_graph(rng, n, float(rng.uniform(0.05, 0.4)))
            d = int(rng.integers(2, 6))
            init = random_state(rng, n, d)
            cur = random_state(rng, n, d)
            lam = float(rng.uniform(0, 1))
            got = step(g, cur, init, lam)
            want = step_oracle(g, cur, init, lam)
            assert np.allclose(got, want, atol=1e-14)

    def test_isolated_nodes_stay_at_initial(self):
        # node 3 has no edges; its row must not drift
        g = build([(0, 1), (1, 2)], 4)
        init = np.array([[1, 0], [0.5, 0.5], [0.5, 0.5], [0.3, 0.7]])
        out = step(g, init, init, 0.8)
        assert out[3].tolist() == [0.3, 0.7]

    def test_lambda_zero_is_identity_to_initial(self):
        rng = np.random.default_rng(1)
        g = random_graph(rng, 20, 0.2)
        init = random_state(rng, 20, 3)
        cur = random_state(rng, 20, 3)
        out = step(g, cur, init, 0.0)
        assert np.array_equal(out, init)

    def test_lambda_one_is_pure_neighborhood_mean(self):
        g = complete_graph(3)
        init = np.eye(3)
        out = step(g, init, init, 1.0)
        assert np.allclose(out, (np.ones((3, 3)) - np.eye(3)) / 2, atol=0)

    def test_threaded_update_bitwise_equal(self):
        rng = np.random.default_rng(2)
        g = random_graph(rng, 200, 0.05)
        init = random_state(rng, 200, 4)
        cur = random_state(rng, 200, 4)
        base = step(g, cur, init, 0.5, threads=1)
        for t in (2, 3, 8):
            assert np.array_equal(base, step(g, cur, init, 0.5, threads=t))
        sums1 = neighbor_sums(g, cur, threads=1)
        sums4 = neighbor_sums(g, cur, threads=4)
        assert np.array_equal(sums1, sums4)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_step_preserves_simplex(data):
    seed = data.draw(st.integers(0, 2**31 - 1))
    lam = data.draw(st.floats(0.0, 1.0, allow_nan=False))
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 60))
    g = random_graph(rng, n, float(rng.uniform(0, 0.5)))
    d = int(rng.integers(2, 6))
    init = random_state(rng, n, d)
    cur = random_state(rng, n, d)
    out = step(g, cur, init, lam)
    assert (out >= 0).all()
    assert np.abs(out.sum(axis=1) - 1.0).max() <= 1e-9


class TestMemoryAnchor:
    def test_seed_keeps_own_category_floor(self):
        # anchored update can never push a seed's own component below 1-lambda
        rng = np.random.default_rng(3)
        g = random_graph(rng, 50, 0.1)
        cats = rng.integers(0, 4, size=50).astype(np.int32)
        labels = store(cats, d=4)
        seeds = np.sort(rng.choice(50, size=10, replace=False))
        for lam in (0.3, 0.5, 0.9):
            init = init_state(g, seeds, labels)
            cur = init
            for _ in range(8):
                cur = step(g, cur, init, lam)
                own = cur[seeds, cats[seeds]]
                assert (own >= (1.0 - lam) - 1e-12).all()

    def test_clamped_seeds_stay_one_hot(self):
        rng = np.random.default_rng(4)
        g = random_graph(rng, 40, 0.15)
        cats = rng.integers(0, 3, size=40).astype(np.int32)
        labels = store(cats, d=3)
        seeds = np.sort(rng.choice(40, size=8, replace=False))
        res = run(g, seeds, labels, DiffusionParams(0.5, 6, 1e-12), clamp_seeds=True)
        onehot = np.zeros((8, 3))
        onehot[np.arange(8), cats[seeds]] = 1.0
        assert np.array_equal(res.state[seeds], onehot)


class TestLocality:
    # uniform rows are exactly representable (1/d a power of two), so mass
    # provably cannot appear beyond the BFS frontier of the seed set
    @pytest.mark.parametrize("d", [2, 4])
    def test_uniform_beyond_frontier_is_bitwise_exact(self, d):
        rng = np.random.default_rng(5)
        uniform = 1.0 / d
        for trial in range(8):
            n = int(rng.integers(12, 60))
            g = random_graph(rng, n, 0.05)
            seed = int(rng.integers(0, n))
            labels = store(np.zeros(n, dtype=np.int32), d=d)
            dist = bfs_distances(g, [seed])
            init = init_state(g, np.array([seed]), labels)
            cur = init
            for t in range(1, 5):
                cur = step(g, cur, init, float(rng.uniform(0.1, 0.9)))
                beyond = (dist > t) | (dist < 0)
                beyond[seed] = False
                assert (cur[beyond] == uniform).all(), f"trial {trial} t={t}"

    def test_frontier_nodes_do_move(self):
        g = path_graph(5)
        labels = store([0, -1, -1, -1, -1], d=4)
        init = init_state(g, np.array([0]), labels)
        one = step(g, init, init, 0.5)
        assert one[1, 0] > 0.25
        assert (one[2] == 0.25).all()


class TestLaplacianForm:
    def d_inv_a(self, g):
        a = g.adjacency.toarray()
        deg = g.degrees.astype(float)
        deg[deg == 0] = 1.0
        return a / deg[:, None]

    def test_residual_small_on_true_steps(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            n = int(rng.integers(3, 50))
            g = random_graph(rng, n, float(rng.uniform(0.05, 0.4)))
            d = int(rng.integers(2, 5))
            init = random_state(rng, n, d)
            prev = random_state(rng, n, d)
            lam = float(rng.uniform(0, 1))
            nxt = step(g, prev, init, lam)
            assert laplacian_residual(g, nxt, prev, init, lam) <= 1e-12

    def test_residual_matches_dense_rewrite(self):
        # independent check: next - prev == (1-lam)(init - prev) - lam*L*prev
        # with L = I - D^{-1}A built densely
        rng = np.random.default_rng(7)
        g = random_graph(rng, 25, 0.2)
        init = random_state(rng, 25, 3)
        prev = random_state(rng, 25, 3)
        lam = 0.37
        nxt = step(g, prev, init, lam)
        lap = np.eye(25) - self.d_inv_a(g)
        want = prev + (1 - lam) * (init - prev) - lam * (lap @ prev)
        live = g.degrees > 0
        assert np.abs(nxt[live] - want[live]).max() <= 1e-12

    def test_residual_detects_perturbation(self):
        rng = np.random.default_rng(8)
        g = random_graph(rng, 30, 0.2)
        init = random_state(rng, 30, 3)
        prev = random_state(rng, 30, 3)
        nxt = step(g, prev, init, 0.5)
        live = np.flatnonzero(g.degrees > 0)
        bad = nxt.copy()
        bad[live[0], 0] += 1e-6
        assert laplacian_residual(g, bad, prev, init, 0.5) >= 1e-7

    def test_isolated_rows_excluded(self):
        g = build([(0, 1)], 3)
        init = np.array([[1.0, 0.0], [0.5, 0.5], [0.5, 0.5]])
        nxt = step(g, init, init, 0.5)
        # corrupt the isolated row; the residual must ignore it
        bad = nxt.copy()
        bad[2, 0] += 1.0
        assert laplacian_residual(g, bad, init, init, 0.5) <= 1e-12


class TestRun:
    def test_converges_and_reports_delta(self):
        rng = np.random.default_rng(9)
        g = random_graph(rng, 80, 0.1)
        cats = rng.integers(0, 4, size=80).astype(np.int32)
        labels = store(cats, d=4)
        seeds = np.sort(rng.choice(80, size=20, replace=False))
        res = run(g, seeds, labels, DiffusionParams(0.5, 50, 1e-8))
        assert res.iterations < 50
        assert res.final_delta < 1e-8
        assert res.renormalized_rows == 0
        assert np.abs(res.state.sum(axis=1) - 1.0).max() <= 1e-9

    def test_oscillation_hits_iteration_cap(self):
        # lambda=1 on a 2-node graph swaps states forever
        g = build([(0, 1)], 2)
        labels = store([0, -1], d=2)
        res = run(g, np.array([0]), labels, DiffusionParams(1.0, 7, 1e-9))
        assert res.iterations == 7
        assert res.final_delta > 0.1

    def test_lambda_zero_converges_immediately(self):
        g = path_graph(4)
        labels = store([0, -1, -1, 1], d=2)
        res = run(g, np.array([0, 3]), labels, DiffusionParams(0.0, 10, 1e-9))
        assert res.iterations == 1
        assert np.array_equal(res.state, init_state(g, np.array([0, 3]), labels))

    def test_threaded_run_bitwise_equal(self):
        rng = np.random.default_rng(10)
        g = random_graph(rng, 150, 0.06)
        cats = rng.integers(0, 4, size=150).astype(np.int32)
        labels = store(cats, d=4)
        seeds = np.sort(rng.choice(150, size=30, replace=False))
        params = DiffusionParams(0.5, 20, 1e-6)
        a = run(g, seeds, labels, params, threads=1)
        b = run(g, seeds, labels, params, threads=8)
        assert np.array_equal(a.state, b.state)
        assert a.iterations == b.iterations

    def test_empty_seed_set_rejected(self):
        g = path_graph(3)
        labels = store([0, -1, -1], d=2)
        with pytest.raises(ValueError):
            run(g, np.array([], dtype=np.int64), labels, DiffusionParams())


class TestParams:
    def test_bounds(self):
        with pytest.raises(ValueError):
            DiffusionParams(lam=-0.1)
        with pytest.raises(ValueError):
            DiffusionParams(lam=1.5)
        with pytest.raises(ValueError):
            DiffusionParams(max_iterations=0)
        with pytest.raises(ValueError):
            DiffusionParams(tolerance=0.0)
        # both endpoints of lambda are legal
        DiffusionParams(lam=0.0)
        DiffusionParams(lam=1.0)


class TestStateFiles:
    def _idmap(self, n):
        im = NodeIdMap()
        for i in range(n):
            im.add(f"u{i}")
        return im

    def test_round_trip_bitwise(self, tmp_path):
        rng = np.random.default_rng(11)
        state = random_state(rng, 7, 4)
        im = self._idmap(7)
        p = tmp_path / "state.csv"
        write_state(p, state, im, meta={"lam": 0.5, "iterations": 3})
        back, meta = read_state(p, im)
        assert np.array_equal(back, state)
        assert meta["lam"] == 0.5
        assert meta["iterations"] == 3

    def test_missing_node_rejected(self, tmp_path):
        rng = np.random.default_rng(12)
        state = random_state(rng, 3, 2)
        im = self._idmap(3)
        p = tmp_path / "state.csv"
        write_state(p, state, im)
        lines = p.read_text().splitlines()
        p.write_text("\n".join(lines[:-1]) + "\n")  # drop the last row
        with pytest.raises(StateFileError):
            read_state(p, im)

    def test_unknown_id_rejected(self, tmp_path):
        rng = np.random.default_rng(13)
        state = random_state(rng, 2, 2)
        im = self._idmap(2)
        p = tmp_path / "state.csv"
        write_state(p, state, im)
        p.write_text(p.read_text().replace("u1", "ghost"))
        with pytest.raises(StateFileError):
            read_state(p, im)
