import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfmix import (
    Box,
    DegenerateSequence,
    DenseDirectionSequence,
    DiscreteDirectionSet,
    SetComplete,
    VariablePartition,
    ZeroVector,
    is_primitive,
)


class TestIsPrimitive:
    def test_gcd_one(self):
        assert is_primitive([-3, 7])
        assert is_primitive([0, 1, 0])
        assert is_primitive([2, 3])

    def test_gcd_above_one(self):
        assert not is_primitive([2, 4])
        assert not is_primitive([-6, 0, 9])

    def test_zero_vector_raises(self):
        with pytest.raises(ZeroVector):
            is_primitive([0, 0])

    def test_rejects_fractional_entries(self):
        with pytest.raises(ValueError):
            is_primitive([0.5, 1.0])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(-50, 50), min_size=1, max_size=6))
    def test_matches_math_gcd(self, ints):
        if not any(ints):
            return
        assert is_primitive(ints) == (math.gcd(*ints) == 1 if len(ints) > 1
                                      else abs(ints[0]) == 1)


class TestDenseDirectionSequence:
    def test_unit_norm_and_integer_zeros(self):
        part = VariablePartition((0, 2), (1,))
        seq = DenseDirectionSequence(part, seed=7)
        for _ in range(20):
            s = seq.take()
            assert s.shape == (3,)
            assert s[1] == 0.0
            assert np.linalg.norm(s) == pytest.approx(1.0, abs=1e-12)

    def test_same_seed_replays_the_stream(self):
        part = VariablePartition((0, 1), ())
        a = DenseDirectionSequence(part, seed=3)
        b = DenseDirectionSequence(part, seed=3)
        for _ in range(10):
            np.testing.assert_array_equal(a.take(), b.take())

    def test_different_seeds_differ(self):
        part = VariablePartition((0, 1), ())
        a = DenseDirectionSequence(part, seed=3).take()
        b = DenseDirectionSequence(part, seed=4).take()
        assert not np.array_equal(a, b)

    def test_requires_continuous_variables(self):
        with pytest.raises(ValueError):
            DenseDirectionSequence(VariablePartition((), (0,)), seed=0)

    def test_degenerate_engine_raises(self):
        part = VariablePartition((0, 1), ())
        seq = DenseDirectionSequence(part, seed=0)

        class Stuck:
            def random(self, n):
                return np.full((n, 2), 0.5)  # maps to the zero vector

        seq._engine = Stuck()
        with pytest.raises(DegenerateSequence):
            seq.take()

    def test_angular_coverage_in_dim_2(self):
        # 1e4 draws must pass within 0.05 rad of every angle on a 360 grid
        part = VariablePartition((0, 1), ())
        seq = DenseDirectionSequence(part, seed=0)
        angles = np.array([math.atan2(*reversed(seq.take())) for _ in range(10_000)])
        grid = np.linspace(-math.pi, math.pi, 360, endpoint=False)
        diff = np.abs(angles[None, :] - grid[:, None])
        circular = np.minimum(diff, 2 * math.pi - diff)
        assert float(circular.min(axis=1).max()) <= 0.05


def make_set(lower, upper, start, seed=0, scan_cap=20000):
    n = len(lower)
    part = VariablePartition((), tuple(range(n)))
    box = Box(lower, upper)
    return DiscreteDirectionSet(part, box, np.asarray(start, dtype=float),
                                seed=seed, scan_cap=scan_cap)


def z_vectors(dirset):
    return [tuple(int(v) for v in d) for d in dirset.directions]


class TestDiscreteDirectionSetInit:
    def test_interior_start_gets_all_signed_coordinates(self):
        ds = make_set([0, 0], [10, 10], [5, 5])
        assert z_vectors(ds) == [(1, 0), (-1, 0), (0, 1), (0, -1)]
        assert ds.tentative == [1, 1, 1, 1]

    def test_corner_start_defers_outward_directions(self):
        ds = make_set([0, 0], [10, 10], [0, 10])
        assert z_vectors(ds) == [(1, 0), (0, -1)]

    def test_mixed_partition_embeds_on_integer_coordinates(self):
        part = VariablePartition((1,), (0, 2))
        box = Box([0.0, -1.0, 0.0], [4.0, 1.0, 4.0])
        ds = DiscreteDirectionSet(part, box, np.array([2.0, 0.0, 2.0]))
        first = ds.directions[0]
        np.testing.assert_array_equal(first, [1.0, 0.0, 0.0])
        assert all(d[1] == 0.0 for d in ds.directions)


class TestExpand:
    def test_first_expansion_adds_the_diagonals(self):
        ds = make_set([0, 0], [10, 10], [5, 5])
        added = ds.expand([5.0, 5.0], batch=4)
        assert added == 4
        assert set(z_vectors(ds)[4:]) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}

    def test_everything_generated_is_primitive_and_unique(self):
        ds = make_set([0, 0], [10, 10], [5, 5])
        for _ in range(12):
            try:
                ds.expand([5.0, 5.0], batch=8)
            except SetComplete:
                break
        vecs = z_vectors(ds)
        assert len(vecs) == len(set(vecs))
        for v in vecs:
            assert math.gcd(*map(abs, v)) == 1

    def test_shells_come_out_in_nondecreasing_norm(self):
        ds = make_set([0, 0], [20, 20], [10, 10])
        for _ in range(20):
            ds.expand([10.0, 10.0], batch=6)
        norms = [max(abs(a), abs(b)) for a, b in z_vectors(ds)]
        assert norms == sorted(norms)

    def test_new_directions_respect_feasibility_at_x(self):
        ds = make_set([0, 0], [10, 10], [0, 0])  # corner: only +,+ moves feasible
        ds.expand([0.0, 0.0], batch=8)
        for a, b in z_vectors(ds):
            assert a >= 0 and b >= 0

    def test_deferred_candidates_return_once_feasible(self):
        ds = make_set([0, 0], [10, 10], [0, 10])
        assert z_vectors(ds) == [(1, 0), (0, -1)]
        added = ds.expand([5.0, 5.0], batch=2)
        assert added == 2
        assert z_vectors(ds)[2:] == [(-1, 0), (0, 1)]

    def test_set_complete_when_universe_is_exhausted(self):
        # one integer variable: the only primitive directions are +-1
        ds = make_set([0], [5], [2])
        assert z_vectors(ds) == [(1,), (-1,)]
        with pytest.raises(SetComplete):
            ds.expand([2.0], batch=2)

    def test_set_complete_accounts_for_current_point(self):
        ds = make_set([0], [5], [0])
        assert z_vectors(ds) == [(1,)]  # -1 infeasible at 0, deferred
        assert ds.expand([1.0], batch=2) == 1  # -1 becomes feasible at 1
        assert z_vectors(ds) == [(1,), (-1,)]
        with pytest.raises(SetComplete):
            ds.expand([1.0], batch=2)

    def test_scan_cap_returns_zero_without_completeness_claim(self):
        ds = make_set([0] * 8, [10] * 8, [5] * 8, scan_cap=3)
        total = ds.expand([5.0] * 8, batch=10_000)
        # cap of 3 candidate visits cannot fill the batch; no SetComplete
        assert total <= 3
        more = ds.expand([5.0] * 8, batch=10_000)
        assert total + more <= 6

    def test_same_seed_same_order(self):
        a = make_set([0, 0, 0], [8, 8, 8], [4, 4, 4], seed=11)
        b = make_set([0, 0, 0], [8, 8, 8], [4, 4, 4], seed=11)
        for _ in range(6):
            a.expand([4.0, 4.0, 4.0], batch=5)
            b.expand([4.0, 4.0, 4.0], batch=5)
        assert z_vectors(a) == z_vectors(b)

    def test_no_integer_variables_is_immediately_complete(self):
        part = VariablePartition((0,), ())
        ds = DiscreteDirectionSet(part, Box([0.0], [1.0]), np.array([0.5]))
        assert len(ds) == 0
        with pytest.raises(SetComplete):
            ds.expand([0.5], batch=2)


class TestBlockUnranking:
    def test_vectorized_unranking_matches_the_reference_exhaustively(self):
        for z, s in ((2, 1), (2, 3), (3, 1), (3, 2), (4, 2)):
            ds = make_set([-50] * z, [50] * z, [0] * z)
            big, small = 2 * s + 1, 2 * s - 1
            count = big**z - small**z
            js = np.arange(count, dtype=np.int64)
            vectorized = ds._unrank_vec(js, s)
            reference = np.stack([ds._unrank(int(j), s) for j in js])
            np.testing.assert_array_equal(vectorized, reference)
            assert np.all(np.max(np.abs(vectorized), axis=1) == s)

    def test_block_walk_resumes_exactly_after_partial_consumption(self):
        # two sets, one expanded in many small batches, one in large ones,
        # must generate the identical direction stream
        small_steps = make_set([0] * 4, [6] * 4, [3] * 4, seed=5)
        big_steps = make_set([0] * 4, [6] * 4, [3] * 4, seed=5)
        x = [3.0] * 4
        for _ in range(30):
            small_steps.expand(x, batch=1)
        for _ in range(3):
            big_steps.expand(x, batch=10)
        assert z_vectors(small_steps) == z_vectors(big_steps)
