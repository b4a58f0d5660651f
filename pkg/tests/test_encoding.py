import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xofm.dataset_io import Dataset
from xofm.encoding import Discretization, build_discretization, encode, encode_dataset


def _disc(alpha, beta, gamma):
    return Discretization([alpha], [beta], [gamma])


def encode_oracle(x, disc):
    """Three-branch definition evaluated one component at a time."""
    out = []
    for j in range(disc.m):
        pts = [disc.alphas[j] + (k / disc.gammas[j]) * (disc.betas[j] - disc.alphas[j])
               for k in range(disc.gammas[j] + 1)]
        for k in range(1, disc.gammas[j] + 1):
            if disc.betas[j] == disc.alphas[j]:
                out.append(0.0)
            elif x[j] > pts[k]:
                out.append(1.0)
            elif pts[k - 1] <= x[j] <= pts[k]:
                out.append((x[j] - pts[k - 1]) / (pts[k] - pts[k - 1]))
            else:
                out.append(0.0)
    return np.array(out)


class TestDiscretization:
    def test_points_gamma_two(self):
        ds = Dataset(np.arange(11.0)[:, None], [1] * 5 + [2] * 6, ("a",), 2)
        np.testing.assert_array_equal(build_discretization(ds, 2).points(0), [0, 5, 10])

    def test_points_gamma_one(self):
        ds = Dataset(np.array([[3.0], [-1.0], [2.0]]), [1, 2, 2], ("a",), 2)
        np.testing.assert_array_equal(build_discretization(ds, 1).points(0), [-1, 3])

    def test_offsets_and_total(self):
        d = Discretization([0, 0, 0], [1, 1, 1], [2, 3, 1])
        assert d.gamma_total == 6
        assert d.offsets == (0, 2, 5)
        assert [d.block(j) for j in range(3)] == [slice(0, 2), slice(2, 5), slice(5, 6)]

    def test_nine_attributes_default_gamma(self, breast_like):
        assert build_discretization(breast_like, 4).gamma_total == 36
        assert build_discretization(breast_like).gamma_total == 36

    def test_points_formula(self):
        d = _disc(-2.5, 7.25, 7)
        pts = d.points(0)
        expected = [-2.5 + (k / 7) * (7.25 - (-2.5)) for k in range(8)]
        np.testing.assert_array_equal(pts[:-1], expected[:-1])
        assert pts[0] == -2.5 and pts[-1] == 7.25
        assert np.all(np.diff(pts) > 0)

    def test_per_attribute_gammas_length_checked(self, breast_like):
        with pytest.raises(ValueError):
            build_discretization(breast_like, [2, 3])


class TestEncode:
    def test_hand_value(self):
        np.testing.assert_allclose(encode([7.0], _disc(0, 10, 2)), [1.0, 0.4], rtol=0, atol=1e-15)

    def test_alpha_gives_zeros(self):
        np.testing.assert_array_equal(encode([0.0], _disc(0, 10, 4)), np.zeros(4))

    def test_beta_gives_ones(self):
        np.testing.assert_array_equal(encode([10.0], _disc(0, 10, 4)), np.ones(4))

    def test_above_range_clips(self):
        np.testing.assert_array_equal(encode([12.0], _disc(0, 10, 2)), [1.0, 1.0])

    def test_below_range_clips(self):
        np.testing.assert_array_equal(encode([-3.0], _disc(0, 10, 2)), [0.0, 0.0])

    def test_interior_point(self):
        np.testing.assert_array_equal(encode([5.0], _disc(0, 10, 2)), [1.0, 0.0])

    def test_constant_attribute_encodes_zero(self):
        d = Discretization([0.0, 3.0], [1.0, 3.0], [2, 3])
        for x in (2.0, 3.0, 4.0):
            np.testing.assert_array_equal(encode([0.5, x], d)[2:], np.zeros(3))

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            encode([np.nan], _disc(0, 1, 2))

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            encode([1.0, 2.0], _disc(0, 1, 2))

    def test_matches_definition_oracle(self):
        rng = np.random.default_rng(5)
        d = Discretization([0.0, -1.0, 10.0], [1.0, 1.0, 10.0], [3, 4, 2])
        for _ in range(200):
            x = rng.uniform(-2, 12, size=3)
            np.testing.assert_allclose(encode(x, d), encode_oracle(x, d), rtol=0, atol=1e-15)


class TestEncodeDataset:
    def test_single_row(self):
        ds = Dataset([[1.0, 2.0], [3.0, 0.0]], [1, 2], ("a", "b"), 2)
        d = build_discretization(ds, 3)
        np.testing.assert_array_equal(encode_dataset(ds.subset([0]), d), encode(ds.objects[0], d)[None])

    def test_extremes(self):
        ds = Dataset([[0.0, -1.0], [1.0, 4.0], [0.3, 2.0]], [1, 2, 2], ("a", "b"), 2)
        Phi = encode_dataset(ds, build_discretization(ds, 4))
        np.testing.assert_array_equal(Phi[0], np.zeros(8))
        np.testing.assert_array_equal(Phi[1], np.ones(8))

    def test_random_rows_match_loop(self):
        rng = np.random.default_rng(11)
        ds = Dataset(rng.normal(size=(5, 2)), [1, 2, 1, 2, 2], ("a", "b"), 2)
        d = build_discretization(ds, [3, 5])
        Phi = encode_dataset(ds, d)
        for i in range(5):
            np.testing.assert_array_equal(Phi[i], encode(ds.objects[i], d))


finite = st.floats(min_value=-50, max_value=50, allow_nan=False)


class TestProperties:
    disc = Discretization([-10.0, 0.0], [10.0, 5.0], [4, 3])

    @given(st.lists(finite, min_size=2, max_size=2))
    def test_block_shape(self, x):
        phi = encode(x, self.disc)
        assert np.all((phi >= 0) & (phi <= 1))
        for j in range(2):
            b = phi[self.disc.block(j)]
            assert np.all(np.diff(b) <= 0)
            # ones, then at most one fraction, then zeros
            assert np.count_nonzero((b > 0) & (b < 1)) <= 1

    @given(st.lists(finite, min_size=2, max_size=2), st.lists(st.floats(0, 20), min_size=2, max_size=2))
    def test_componentwise_monotone(self, x, dx):
        lo = np.array(x)
        hi = lo + np.array(dx)
        assert np.all(encode(lo, self.disc) <= encode(hi, self.disc))

    def test_piecewise_linear_between_points(self):
        rng = np.random.default_rng(0)
        u = rng.normal(size=self.disc.gamma_total)
        for j in range(2):
            pts = self.disc.points(j)
            base = np.array([0.3, 2.0])
            for a, b in zip(pts[:-1], pts[1:]):
                t = np.linspace(a, b, 101)
                X = np.tile(base, (t.size, 1))
                X[:, j] = t
                f = encode_dataset(X, self.disc) @ u
                # linear interpolation between the segment ends reproduces every grid value
                line = f[0] + (f[-1] - f[0]) * (t - a) / (b - a)
                np.testing.assert_allclose(f, line, rtol=0, atol=1e-12)
            # continuity across each characteristic point
            for c in pts[1:-1]:
                X = np.tile(base, (2, 1))
                X[:, j] = [np.nextafter(c, -np.inf), np.nextafter(c, np.inf)]
                f = encode_dataset(X, self.disc) @ u
                assert abs(f[1] - f[0]) < 1e-12
