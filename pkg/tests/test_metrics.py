import math

import numpy as np
import pytest

from neucmds.embedding import embed_from_decomposition, reconstruct
from neucmds.linalg import double_center, eig_sym
from neucmds.metrics import (
    StressReport,
    avg_geometric_distortion,
    build_report,
    decompose,
    negativity_stats,
    scaled_additive_error,
    stress,
)
from neucmds.selection import METHODS

from conftest import random_hollow

TWO_BY_TWO_U = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


class TestStress:
    def test_zero_when_equal(self, rng):
        d = random_hollow(rng, 6)
        assert stress(d, d) == 0.0

    def test_all_ones_offset(self):
        n = 7
        d = random_hollow(np.random.default_rng(1), n)
        shifted = d + 1.0 - np.eye(n)
        assert stress(d, shifted) == n * (n - 1)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="shapes"):
            stress(np.zeros((3, 3)), np.zeros((4, 4)))


class TestDecompose:
    def test_nothing_dropped(self):
        lam = np.array([2.0, -1.0])
        c1, c2, c3 = decompose(lam, TWO_BY_TWO_U, np.array([True, True]), lam)
        assert (c1, c2, c3) == (0.0, 0.0, 0.0)

    def test_hand_case(self):
        # drop the first eigenvalue of (1, 0); the c3 term vanishes for this u
        lam = np.array([1.0, 0.0])
        w = np.array([False, True])
        c1, c2, c3 = decompose(lam, TWO_BY_TWO_U, w, np.zeros(2))
        assert c1 == 4.0 and c2 == 4.0
        np.testing.assert_allclose(c3, 0.0, atol=1e-12)

    def test_plus_shift_closed_form(self):
        lam = np.array([5.0, 3.0, -1.0, -4.0])
        w = np.array([True, False, False, True])
        k = 2
        shift = lam[~w].sum() / (1 + k)
        lam_tilde = np.where(w, lam + shift, 0.0)
        u = np.linalg.qr(np.random.default_rng(3).normal(size=(4, 4)))[0]
        c1, c2, _ = decompose(lam, u, w, lam_tilde)
        closed = 4.0 * np.sum(lam[~w] ** 2) + 4.0 * lam[~w].sum() ** 2 / (1 + k)
        np.testing.assert_allclose(c1 + c2, closed, rtol=1e-14)

    def test_rejects_value_outside_support(self):
        lam = np.array([1.0, 0.5])
        with pytest.raises(ValueError, match="outside"):
            decompose(lam, TWO_BY_TWO_U, np.array([True, False]), np.array([1.0, 0.5]))


class TestDecompositionIdentity:
    @pytest.mark.parametrize("n", [5, 20, 60])
    def test_identity_all_methods(self, n):
        rng = np.random.default_rng(100 + n)
        d = random_hollow(rng, n)
        dec = eig_sym(double_center(d))
        for method in METHODS:
            for k in {1, max(1, n // 3), n - 1, n}:
                emb = embed_from_decomposition(dec, k, method)
                d_hat = reconstruct(emb)
                ssq = stress(d, d_hat)
                c1, c2, c3 = decompose(
                    dec.eigenvalues, dec.eigenvectors, emb.selection.w,
                    emb.full_axis_values(),
                )
                assert abs(ssq - (c1 + c2 + c3)) <= 1e-8 * max(1.0, ssq)
                assert c3 >= -1e-10 * max(1.0, ssq)

    def test_shift_improves_bound_for_fixed_set(self, rng):
        # with the same support, the shifted bound never exceeds the plain one
        for _ in range(25):
            n = int(rng.integers(3, 30))
            d = random_hollow(rng, n)
            dec = eig_sym(double_center(d))
            k = int(rng.integers(1, n + 1))
            emb = embed_from_decomposition(dec, k, "neuc")
            w = emb.selection.w
            lam = dec.eigenvalues
            plain = np.where(w, lam, 0.0)
            shifted = np.where(w, lam + lam[~w].sum() / (1.0 + k), 0.0)
            c1p, c2p, _ = decompose(lam, dec.eigenvectors, w, plain)
            c1s, c2s, _ = decompose(lam, dec.eigenvectors, w, shifted)
            assert c1s + c2s <= c1p + c2p + 1e-12 * max(1.0, c1p + c2p)


class TestScaledAdditive:
    def test_scaling_compensated(self, rng):
        d = random_hollow(rng, 5)
        assert scaled_additive_error(d, 2.0 * d) <= 1e-12 * np.linalg.norm(d)

    def test_collinear_two_by_two(self):
        d = np.array([[0.0, 1.0], [1.0, 0.0]])
        dh = np.array([[0.0, 3.0], [3.0, 0.0]])
        assert scaled_additive_error(d, dh) == 0.0

    def test_orthogonal_gives_norm(self):
        d = np.array([[0.0, 1.0], [1.0, 0.0]])
        dh = np.zeros((2, 2))
        assert scaled_additive_error(d, dh) == np.linalg.norm(d)
        # orthogonal but nonzero
        d3 = np.zeros((3, 3)); d3[0, 1] = d3[1, 0] = 1.0
        e3 = np.zeros((3, 3)); e3[0, 2] = e3[2, 0] = 1.0
        assert scaled_additive_error(d3, e3) == np.linalg.norm(d3)

    def test_never_exceeds_stress_root(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 15))
            d = random_hollow(rng, n)
            dh = random_hollow(rng, n)
            assert scaled_additive_error(d, dh) <= math.sqrt(stress(d, dh)) + 1e-12


class TestDistortion:
    def test_exact_match(self, rng):
        d = np.abs(random_hollow(rng, 6)) + 1.0 - np.eye(6)
        assert avg_geometric_distortion(d, d) == pytest.approx(1.0)

    def test_uniform_scaling_removed(self, rng):
        d = np.abs(random_hollow(rng, 6)) + 1.0 - np.eye(6)
        assert avg_geometric_distortion(d, 4.0 * d) == pytest.approx(1.0)

    def test_reciprocal_pair(self):
        # ratios sqrt(d/dh) are {2, 1/2}: median scaling keeps them, mean is 2
        d = np.zeros((3, 3))
        dh = np.zeros((3, 3))
        d[0, 1] = d[1, 0] = 4.0
        dh[0, 1] = dh[1, 0] = 1.0
        d[0, 2] = d[2, 0] = 1.0
        dh[0, 2] = dh[2, 0] = 4.0
        assert avg_geometric_distortion(d, dh) == pytest.approx(2.0)

    def test_undefined_without_valid_pairs(self):
        d = np.array([[0.0, -1.0], [-1.0, 0.0]])
        assert avg_geometric_distortion(d, d) is None

    def test_at_least_one(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 12))
            d = random_hollow(rng, n)
            dh = random_hollow(rng, n)
            g = avg_geometric_distortion(d, dh)
            if g is not None:
                assert g >= 1.0


class TestNegativity:
    def test_psd_clean(self):
        d = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert negativity_stats(d, np.array([1, 1])) == (0, 0)

    def test_counts_pairs_once(self):
        d = np.array([[0.0, -1.0], [-1.0, 0.0]])
        assert negativity_stats(d, np.array([1, -1])) == (1, 1)

    def test_zero_matrix(self):
        assert negativity_stats(np.zeros((4, 4)), np.array([-1, -1])) == (0, 2)


def test_build_report_round_trips_to_json(rng):
    d = random_hollow(rng, 10)
    dec = eig_sym(double_center(d))
    emb = embed_from_decomposition(dec, 3, "neuc")
    rep = build_report(
        d, reconstruct(emb), dec.eigenvalues, dec.eigenvectors,
        emb.selection.w, emb.full_axis_values(), emb.signature,
    )
    assert isinstance(rep, StressReport)
    loaded = __import__("json").loads(rep.to_json())
    assert list(loaded) == [
        "stress_sq", "stress", "c1", "c2", "c3",
        "scaled_additive", "avg_distortion", "neg_dissim_count", "neg_axes_count",
    ]
    assert loaded["stress_sq"] == pytest.approx(rep.stress_sq)
