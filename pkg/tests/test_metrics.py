import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import density_scalar, flat, mann_whitney_auc, nss_scalar, pearson_scalar

from attpush import DimensionMismatch, GridMap, NoFixations, ZeroVariance
from attpush.metrics import FixationRecord, EvalReport, EvalRow, auc, cc, fixation_density, nss, roc_area


def fx(*pts):
    return [FixationRecord(x, y) for x, y in pts]


def random_instance(seed, max_side=16, levels=None):
    rng = np.random.default_rng(seed)
    h, w = rng.integers(2, max_side + 1, size=2)
    vals = rng.random((h, w))
    if levels:
        vals = np.floor(vals * levels) / levels
    n = int(rng.integers(1, min(12, h * w - 1) + 1))
    cells = rng.choice(h * w, size=n, replace=False)
    pts = [(int(c % w), int(c // w)) for c in cells]
    return GridMap(vals), pts


class TestFixationDensity:
    def test_peak_at_fixation(self):
        m = fixation_density(fx((3, 2)), 7, 5, 0.3).values
        assert m[2, 3] == 1.0
        assert np.unravel_index(np.argmax(m), m.shape) == (2, 3)

    def test_duplicates_absorbed(self):
        one = fixation_density(fx((3, 2)), 7, 5, 1.5)
        two = fixation_density(fx((3, 2), (3, 2)), 7, 5, 1.5)
        assert one == two

    def test_5x5_oracle(self):
        m = fixation_density(fx((1, 1), (3, 3)), 5, 5, 1.0)
        np.testing.assert_allclose(flat(m.values), density_scalar([(1, 1), (3, 3)], 5, 5, 1.0), atol=1e-12)

    def test_no_fixations(self):
        with pytest.raises(NoFixations):
            fixation_density([], 5, 5, 1.0)

    @given(st.lists(st.tuples(st.floats(0, 9), st.floats(0, 6)), min_size=1, max_size=8), st.randoms())
    def test_permutation_invariant(self, pts, rnd):
        shuffled = list(pts)
        rnd.shuffle(shuffled)
        assert fixation_density(fx(*pts), 10, 7, 1.3) == fixation_density(fx(*shuffled), 10, 7, 1.3)


class TestAUC:
    def test_perfect_binary(self):
        pts = [(1, 1), (4, 2), (0, 3)]
        vals = np.zeros((4, 5))
        for x, y in pts:
            vals[y, x] = 1
        assert auc(GridMap(vals), fx(*pts), n_negatives=None) == 1.0
        assert auc(GridMap(vals), fx(*pts), n_negatives=3, seed=7) == 1.0

    def test_constant_half(self):
        assert auc(GridMap.full(6, 6, 0.3), fx((1, 1), (2, 5)), n_negatives=None) == 0.5
        assert auc(GridMap.full(6, 6, 0.3), fx((1, 1), (2, 5)), n_negatives=2, seed=3) == 0.5

    def test_8x8_rank_sum(self):
        rng = np.random.default_rng(11)
        vals = rng.random((8, 8))
        pts = [(0, 0), (3, 4), (7, 7), (5, 2), (6, 1)]
        pos = [vals[y, x] for x, y in pts]
        neg = [vals[y, x] for y in range(8) for x in range(8) if (x, y) not in pts]
        assert auc(GridMap(vals), fx(*pts), n_negatives=None) == pytest.approx(mann_whitney_auc(pos, neg), abs=1e-12)

    @given(st.integers(0, 2**32 - 1), st.sampled_from([None, 3, 10]))
    @settings(max_examples=60)
    def test_rank_sum_oracle(self, seed, levels):
        m, pts = random_instance(seed, levels=levels)
        vals = m.values
        fixated = set(pts)
        pos = [vals[y, x] for x, y in pts]
        neg = [vals[y, x] for y in range(m.height) for x in range(m.width) if (x, y) not in fixated]
        assert auc(m, fx(*pts), n_negatives=None) == pytest.approx(mann_whitney_auc(pos, neg), abs=1e-12)

    def test_seeded_deterministic(self):
        m, pts = random_instance(5)
        a = auc(m, fx(*pts), n_negatives=4, seed=99)
        assert a == auc(m, fx(*pts), n_negatives=4, seed=99)

    def test_seed_sequence_accepted(self):
        m, pts = random_instance(5)
        seq = np.random.SeedSequence([1, 2, 3])
        assert auc(m, fx(*pts), 4, seq) == auc(m, fx(*pts), 4, np.random.SeedSequence([1, 2, 3]))

    def test_no_fixations(self):
        with pytest.raises(NoFixations):
            auc(GridMap.zeros(3, 3), [])

    @given(st.integers(0, 2**32 - 1), st.lists(st.floats(0.1, 5), min_size=3, max_size=6))
    @settings(max_examples=60)
    def test_monotone_transform_invariant(self, seed, slopes):
        m, pts = random_instance(seed)
        # strictly increasing piecewise-linear map of [0, 1]
        knots = np.linspace(0, 1, len(slopes) + 1)
        ys = np.concatenate([[0.0], np.cumsum(np.array(slopes) * np.diff(knots))])
        warped = GridMap(np.interp(m.values, knots, ys))
        assert auc(warped, fx(*pts), None) == pytest.approx(auc(m, fx(*pts), None), abs=1e-12)

    def test_roc_area_ties(self):
        assert roc_area([1.0, 0.5], [0.5, 0.0]) == pytest.approx(mann_whitney_auc([1.0, 0.5], [0.5, 0.0]))


class TestNSS:
    def test_spike(self):
        m = GridMap([[1.0, 0.0], [0.0, 0.0]])
        assert nss(m, fx((0, 0))) == pytest.approx(math.sqrt(3), abs=1e-12)
        assert nss(m, fx((0, 0))) == pytest.approx(nss_scalar(m.values.tolist(), [(0, 0)]), abs=1e-12)

    def test_all_pixels(self):
        rng = np.random.default_rng(2)
        m = GridMap(rng.random((4, 5)))
        everywhere = [(x, y) for y in range(4) for x in range(5)]
        assert nss(m, fx(*everywhere)) == pytest.approx(0.0, abs=1e-12)

    def test_constant(self):
        with pytest.raises(ZeroVariance):
            nss(GridMap.full(3, 3, 1.0), fx((1, 1)))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=60)
    def test_oracle(self, seed):
        m, pts = random_instance(seed)
        assert nss(m, fx(*pts)) == pytest.approx(nss_scalar(m.values.tolist(), pts), abs=1e-9)

    @given(st.integers(0, 2**32 - 1), st.floats(0.01, 100), st.floats(0, 10))
    def test_affine_invariant(self, seed, a, c):
        m, pts = random_instance(seed)
        assert nss(GridMap(m.values * a + c), fx(*pts)) == pytest.approx(nss(m, fx(*pts)), abs=1e-9)

    def test_subpixel_rounds_to_nearest(self):
        m = GridMap([[1.0, 0.0], [0.0, 0.0]])
        assert nss(m, fx((0.4, 0.49))) == nss(m, fx((0, 0)))


class TestCC:
    def test_self(self):
        m = GridMap(np.random.default_rng(1).random((5, 6)))
        assert cc(m, m) == pytest.approx(1.0, abs=1e-12)

    def test_affine(self):
        m = GridMap(np.random.default_rng(1).random((5, 6)))
        assert cc(m, GridMap(3 * m.values + 2)) == pytest.approx(1.0, abs=1e-12)

    def test_negated(self):
        m = GridMap(np.random.default_rng(1).random((5, 6)))
        assert cc(m, GridMap(1 - m.values)) == pytest.approx(-1.0, abs=1e-12)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cc(GridMap.zeros(2, 2), GridMap.zeros(3, 2))

    def test_constant(self):
        with pytest.raises(ZeroVariance):
            cc(GridMap.full(2, 2, 1.0), GridMap([[0, 1], [1, 0]]))

    @given(st.integers(0, 2**32 - 1))
    def test_symmetric_bounded_oracle(self, seed):
        rng = np.random.default_rng(seed)
        a, b = GridMap(rng.random((6, 7))), GridMap(rng.random((6, 7)))
        r = cc(a, b)
        assert r == cc(b, a)
        assert -1.0 <= r <= 1.0
        assert r == pytest.approx(pearson_scalar(flat(a.values), flat(b.values)), abs=1e-9)


class TestReport:
    def test_summary(self):
        rep = EvalReport([
            EvalRow("a", "base", 0.5, 1.0, 0.1, 3),
            EvalRow("b", "base", 0.7, 2.0, 0.3, 3),
            EvalRow("c", "base", None, None, None, 0, error="x"),
        ])
        s = rep.summary()["base"]
        assert s["auc"] == pytest.approx(0.6)
        assert s["nss"] == pytest.approx(1.5)
        assert s["n_stimuli"] == 3
