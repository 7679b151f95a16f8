import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sominit.errors import DimensionMismatch, EmptyDataSet
from sominit.fvu import fvu_polyline
from sominit.initialization import ri_sample
from sominit.som import (
    MAX_STEPS,
    Chain,
    NeighborhoodSpec,
    assign,
    batch_step,
    neighborhood_matrix,
    neighborhood_weight,
    train,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def brute_force_owner(x, nodes):
    owner = []
    for p in x:
        best, best_i = math.inf, -1
        for i, y in enumerate(nodes):
            d = sum((a - b) ** 2 for a, b in zip(p, y))
            if d < best:
                best, best_i = d, i
        owner.append(best_i)
    return np.array(owner)


def random_problem(seed, n=80, k=6):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 2)) * [2.0, 0.5]
    x[:, 1] += np.sin(x[:, 0])
    return x, ri_sample(x, k, seed)


class TestNeighborhood:
    def test_examples(self):
        assert neighborhood_weight(5, 5) == 1.0
        assert neighborhood_weight(5, 7) == 0.5
        assert neighborhood_weight(5, 9) == 0.0

    def test_matrix_symmetric_banded(self):
        h = neighborhood_matrix(7, NeighborhoodSpec(2))
        np.testing.assert_array_equal(h, h.T)
        assert h[0, 3] == 0.0 and h[0, 2] == pytest.approx(1 / 3)
        for i in range(7):
            for j in range(7):
                assert h[i, j] == neighborhood_weight(i, j, NeighborhoodSpec(2))

    def test_negative_h_max(self):
        with pytest.raises(ValueError):
            NeighborhoodSpec(-1)


class TestAssign:
    def test_points_at_nodes(self):
        asg = assign(np.array([[0.0, 0.0], [10.0, 0.0]]), Chain([[0, 0], [10, 0]]))
        np.testing.assert_array_equal(asg.owner, [0, 1])

    def test_tie_goes_to_lower_index(self):
        asg = assign(np.array([[5.0, 0.0]]), Chain([[0, 0], [10, 0]]))
        np.testing.assert_array_equal(asg.owner, [0])

    def test_matches_exhaustive_scan(self, rng):
        x = rng.uniform(-3, 3, size=(200, 2))
        nodes = rng.uniform(-3, 3, size=(7, 2))
        np.testing.assert_array_equal(assign(x, Chain(nodes)).owner, brute_force_owner(x, nodes))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            assign(np.zeros((3, 3)), Chain([[0, 0]]))

    def test_empty(self):
        with pytest.raises(EmptyDataSet):
            assign(np.empty((0, 2)), Chain([[0, 0]]))


class TestBatchStep:
    def test_single_node_moves_to_mean(self, rng):
        x = rng.normal(size=(30, 2))
        chain = Chain([[5.0, 5.0]])
        new = batch_step(x, chain, assign(x, chain))
        np.testing.assert_allclose(new.nodes[0], x.mean(axis=0), atol=1e-14)

    @pytest.mark.parametrize("m", [1, 3])
    def test_two_clusters(self, m):
        x = np.array([[0.0, 0.0]] * m + [[10.0, 0.0]] * m)
        chain = Chain([[0, 0], [10, 0]])
        new = batch_step(x, chain, assign(x, chain))
        np.testing.assert_allclose(new.nodes, [[30 / 7, 0], [40 / 7, 0]], rtol=0, atol=1e-14)

    def test_empty_neighbourhood_keeps_node(self):
        x = np.array([[0.0, 0.0], [0.1, 0.0]])
        chain = Chain([[0, 0], [1, 0], [2, 0], [50, 50]])
        new = batch_step(x, chain, assign(x, chain), NeighborhoodSpec(1))
        np.testing.assert_array_equal(new.nodes[3], [50, 50])
        np.testing.assert_array_equal(new.nodes[2], [2, 0])

    def test_input_not_mutated(self, rng):
        x = rng.normal(size=(20, 2))
        nodes = rng.normal(size=(4, 2))
        chain = Chain(nodes)
        batch_step(x, chain, assign(x, chain))
        np.testing.assert_array_equal(chain.nodes, nodes)

    @given(seed=seeds)
    def test_zero_radius_is_lloyd_step(self, seed):
        x, chain = random_problem(seed, n=40, k=5)
        asg = assign(x, chain)
        new = batch_step(x, chain, asg, NeighborhoodSpec(0))
        for i in range(chain.k):
            cell = x[asg.owner == i]
            expected = cell.mean(axis=0) if len(cell) else chain.nodes[i]
            np.testing.assert_allclose(new.nodes[i], expected, atol=1e-12)


class TestTrain:
    def test_fixed_point_start(self):
        x = np.array([[0.0, 0.0], [10.0, 0.0]])
        res = train(x, Chain([[30 / 7, 0], [40 / 7, 0]]))
        assert res.converged and res.steps == 2

    def test_two_cluster_converges(self):
        x = np.array([[0.0, 0.0], [10.0, 0.0]])
        res = train(x, Chain([[0, 0], [10, 0]]))
        assert res.converged
        np.testing.assert_allclose(res.final.nodes, [[30 / 7, 0], [40 / 7, 0]], atol=1e-14)
        assert fvu_polyline(x, res.final).fvu == pytest.approx(36 / 49, abs=1e-12)

    def test_single_node(self, rng):
        x = rng.normal(size=(50, 3))
        res = train(x, Chain([[9.0, 9.0, 9.0]]))
        assert res.converged and res.steps == 2
        np.testing.assert_allclose(res.final.nodes[0], x.mean(axis=0), atol=1e-14)

    def test_history(self, rng):
        x, chain = random_problem(4)
        res = train(x, chain, record_history=True)
        assert len(res.history) == res.steps - 1
        np.testing.assert_array_equal(res.history[-1].nodes, res.final.nodes)
        assert train(x, chain).history is None

    def test_cap(self, monkeypatch):
        # a chain that never settles: force the stop rule to fail
        import sominit.som as som

        monkeypatch.setattr(som.Assignment, "same_cells", lambda self, other: False)
        x = np.array([[0.0, 0.0], [1.0, 0.0]])
        res = som.train(x, Chain([[0, 0], [1, 0]]), record_history=True)
        assert not res.converged
        assert res.steps == MAX_STEPS and len(res.history) == MAX_STEPS

    @given(seed=seeds, h_max=st.integers(0, 5))
    def test_terminates_and_fixed_point(self, seed, h_max):
        x, chain = random_problem(seed)
        res = train(x, chain, NeighborhoodSpec(h_max))
        assert 1 <= res.steps <= MAX_STEPS
        if res.converged:
            np.testing.assert_array_equal(assign(x, res.final).owner, res.assignment.owner)

    def test_deterministic(self):
        x, chain = random_problem(12)
        a, b = train(x, chain), train(x, chain)
        assert a.final.nodes.tobytes() == b.final.nodes.tobytes()
        assert a.steps == b.steps

    @given(seed=seeds)
    def test_reversal_equivariance(self, seed):
        x, chain = random_problem(seed)
        fwd = train(x, chain)
        rev = train(x, chain.reversed())
        np.testing.assert_allclose(rev.final.nodes[::-1], fwd.final.nodes, atol=1e-12)
        assert fvu_polyline(x, rev.final).fvu == pytest.approx(fvu_polyline(x, fwd.final).fvu, abs=1e-9)

    @given(seed=seeds, theta=st.floats(0, 2 * math.pi, allow_subnormal=False), scale=st.floats(0.25, 4.0),
           shift=st.tuples(st.floats(-10, 10), st.floats(-10, 10)))
    def test_similarity_equivariance(self, seed, theta, scale, shift):
        x, chain = random_problem(seed)
        c, s = math.cos(theta), math.sin(theta)
        r = np.array([[c, -s], [s, c]])
        t = np.array(shift)

        def move(p):
            return scale * p @ r.T + t

        base = train(x, chain)
        moved = train(move(x), Chain(move(chain.nodes)))
        assert moved.steps == base.steps
        np.testing.assert_array_equal(moved.assignment.owner, base.assignment.owner)
        np.testing.assert_allclose(moved.final.nodes, move(base.final.nodes), atol=1e-9 * scale)
        assert fvu_polyline(move(x), moved.final).fvu == pytest.approx(fvu_polyline(x, base.final).fvu, abs=1e-9)


class TestChainJson:
    def test_round_trip(self, rng):
        chain = Chain(rng.normal(size=(5, 2)) * 1e-7)
        back = Chain.from_json(chain.to_json())
        assert back.nodes.tobytes() == chain.nodes.tobytes()

    def test_header_checked(self):
        with pytest.raises(DimensionMismatch):
            Chain.from_dict({"k": 3, "dim": 2, "nodes": [[0, 0], [1, 1]]})

    def test_immutable(self):
        with pytest.raises(ValueError):
            Chain([[0, 0]]).nodes[0, 0] = 1
