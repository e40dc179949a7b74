import itertools
import math

import numpy as np
import pytest
from scipy import stats

from sofisher.numint import (
    Bessel,
    MonteCarlo,
    Quadrature,
    RotationSample,
    annihilation_residual,
    bessel_i0,
    bessel_i0_derivative,
    distribution_residual,
    fisher_moment,
    fisher_value,
    haar_sample,
    haar_samples,
    hgm_evaluate,
    path_gap,
    quadrature_grid,
    so2_grid,
    so3_grid,
)
from sofisher.songen import (
    SingularLocusError,
    diagonal_operators,
    fisher_generators,
    haar_generators,
    so3_mixed_operators,
)
from sofisher.weylcore import WeylOperator


def _circle_i0(s, nodes=4096):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    return float(np.mean(np.exp(s * np.cos(theta))))


class TestSampling:
    def test_rotation_invariants(self):
        Y = haar_samples(3, 2000, seed=1)
        eye = np.eye(3)
        assert np.max(np.abs(np.einsum("sji,sjk->sik", Y, Y) - eye)) <= 1e-12
        assert np.max(np.abs(np.linalg.det(Y) - 1)) <= 1e-12
        for n in (2, 4, 5):
            q = haar_sample(n, seed=n).matrix
            assert abs(np.linalg.det(q) - 1) <= 1e-12

    def test_rotation_sample_validates(self):
        with pytest.raises(ValueError):
            RotationSample(np.diag([1.0, 1.0, -1.0]), None)

    def test_first_moments(self):
        Y = haar_samples(3, 100_000, seed=2)
        y11 = Y[:, 0, 0]
        se = y11.std(ddof=1) / math.sqrt(y11.size)
        assert abs(y11.mean()) <= 5 * se
        sq = y11**2
        se2 = sq.std(ddof=1) / math.sqrt(sq.size)
        assert abs(sq.mean() - 1 / 3) <= 5 * se2

    def test_left_invariance(self):
        Y = haar_samples(3, 20_000, seed=3)
        Z = haar_samples(3, 20_000, seed=4)
        R = haar_sample(3, seed=99).matrix
        rotated = np.einsum("ij,sjk->sik", R, Z)[:, 0, 0]
        assert stats.ks_2samp(Y[:, 0, 0], rotated).pvalue > 1e-3

    def test_deterministic(self):
        a = haar_samples(3, 1000, seed=5, partitions=4)
        b = haar_samples(3, 1000, seed=5, partitions=4, workers=4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, haar_samples(3, 1000, seed=6, partitions=4))

    def test_orthogonality_relations_vanish(self):
        Y = haar_samples(4, 500, seed=7)
        eye = np.eye(4)
        assert np.max(np.abs(np.einsum("sik,sjk->sij", Y, Y) - eye)) <= 1e-12


class TestGrids:
    def test_so3_weights(self):
        g = so3_grid()
        assert np.all(g.weights > 0)
        assert abs(g.weights.sum() - 1) <= 1e-10
        assert np.max(np.abs(np.linalg.det(g.nodes) - 1)) < 1e-12

    def test_so2(self):
        g = so2_grid(10)
        assert len(g.weights) == 20
        assert abs(g.weights.sum() - 1) < 1e-14

    def test_unsupported(self):
        with pytest.raises(ValueError):
            quadrature_grid(4)

    def test_y11_squared(self):
        v = fisher_moment(np.zeros((3, 3)), {(1, 1): 2}, Quadrature())
        assert abs(v.value - 1 / 3) < 1e-12


class TestFisherValue:
    def test_origin(self):
        for n in (2, 3):
            assert abs(fisher_value(np.zeros((n, n))).value - 1) <= 1e-15
        assert abs(fisher_value(np.zeros((3, 3)), MonteCarlo(1000, seed=1)).value - 1) <= 1e-15

    def test_n2_is_i0(self):
        v = fisher_value(np.diag([0.5, 0.5]), Quadrature())
        assert abs(v.value - 1.2660658777520082) < 1e-12
        b = fisher_value(np.diag([0.3, 0.9]), Bessel())
        assert abs(b.value - bessel_i0(1.2)) < 1e-15

    def test_resolution_agreement(self):
        x = np.diag([0.1, 0.2, 0.3])
        a = fisher_value(x, Quadrature(40)).value
        b = fisher_value(x, Quadrature(20)).value
        assert abs(a - b) < 1e-8

    def test_quadrature_convergence(self):
        x = np.array([[0.4, -0.3, 0.2], [0.1, 0.5, -0.6], [0.3, 0.2, 0.7]])
        ref = fisher_value(x, Quadrature(64)).value
        errs = [abs(fisher_value(x, Quadrature(r)).value - ref) for r in (4, 8, 16)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[1] < 1e-2 * errs[0]

    def test_det_pattern(self):
        rng = np.random.default_rng(8)
        x = rng.uniform(-1, 1, (3, 3))
        f = fisher_value(x).value
        total = 0.0
        for p in itertools.permutations(range(3)):
            sign = np.linalg.det(np.eye(3)[list(p)])
            total += sign * fisher_moment(x, {(i + 1, p[i] + 1): 1 for i in range(3)}).value
        assert abs(total - f) < 1e-12

    def test_mc_vs_quad(self):
        x = np.diag([0.3, -0.2, 0.5])
        mc = fisher_value(x, MonteCarlo(200_000, seed=11))
        q = fisher_value(x, Quadrature())
        assert abs(mc.value - q.value) <= 5 * mc.error

    def test_mc_reproducible(self):
        x = np.diag([0.3, -0.2, 0.5])
        a = fisher_value(x, MonteCarlo(10_000, seed=12))
        b = fisher_value(x, MonteCarlo(10_000, seed=12))
        assert a == b

    def test_json(self):
        e = fisher_value(np.zeros((3, 3)), MonteCarlo(500, seed=3))
        d = e.to_json()
        assert d["method"] == "mc" and d["seed"] == 3 and d["samples"] == 500


class TestBessel:
    def test_values(self):
        assert bessel_i0(0) == 1
        assert abs(bessel_i0(1) - 1.26606588) <= 1e-8
        assert abs(bessel_i0(1) - _circle_i0(1.0)) < 1e-14
        for s in (0.3, 2.5, 7.0, -4.0, 25.0):
            assert abs(bessel_i0(s) - _circle_i0(s)) <= 1e-12 * bessel_i0(s)

    def test_range(self):
        with pytest.raises(ValueError):
            bessel_i0(31)

    def test_ode(self):
        s, h = 1.3, 1e-4
        d1 = (bessel_i0(s + h) - bessel_i0(s - h)) / (2 * h)
        d2 = (bessel_i0(s + h) - 2 * bessel_i0(s) + bessel_i0(s - h)) / h**2
        assert abs(d2 + d1 / s - bessel_i0(s)) <= 1e-6

    def test_derivatives(self):
        s = 0.8
        assert abs(bessel_i0_derivative(s, 1) - (bessel_i0(s + 1e-6) - bessel_i0(s - 1e-6)) / 2e-6) < 1e-8
        assert abs(bessel_i0_derivative(s, 2) + bessel_i0_derivative(s, 1) / s - bessel_i0(s)) < 1e-14


def _regular_points(count, seed, n=3, low=-1.5, high=1.5, gap=0.05):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        x = rng.uniform(low, high, n)
        if min(abs(x[i] ** 2 - x[j] ** 2) for i in range(n) for j in range(i + 1, n)) > gap:
            out.append(x)
    return out


class TestResiduals:
    def test_moment_operator_n2(self):
        op = dict(zip(fisher_generators(2).labels, fisher_generators(2).operators))["col_moment(1,1)"]
        rng = np.random.default_rng(13)
        x = rng.uniform(-1, 1, (2, 2))
        r = annihilation_residual(op, x, Quadrature())
        assert r.normalized <= 1e-8

    def test_det_operator(self):
        op = fisher_generators(3).operators[-1]
        x = np.random.default_rng(14).uniform(-1, 1, (3, 3))
        r = annihilation_residual(op, x, Quadrature())
        assert r.normalized <= max(r.stderr, 1e-13)

    def test_diagonal_bessel(self):
        op = diagonal_operators(2).operators[0]
        r = annihilation_residual(op, (0.5, 0.2), Bessel())
        assert r.normalized < 1e-14

    def test_diagonal_and_mixed_quadrature(self):
        ops = list(diagonal_operators(3).operators) + list(so3_mixed_operators().operators)
        for x in _regular_points(5, 15):
            for op in ops:
                assert annihilation_residual(op, x, Quadrature()).normalized <= 1e-6

    def test_flipped_sign_detected(self):
        op = diagonal_operators(3).operators[0]
        pos = op.positions
        W = lambda text: WeylOperator.parse(text, pos)
        cross = (W("x[1]^2 - x[3]^2") * W("x[1]*dx[1] - x[2]*dx[2]")
                 + W("x[1]^2 - x[2]^2") * W("x[1]*dx[1] - x[3]*dx[3]"))
        bad = op - 2 * cross
        r = annihilation_residual(bad, (0.3, 0.8, 1.4), Quadrature())
        assert r.normalized > 1e-3

    def test_fisher_mc(self):
        gens = fisher_generators(2).operators
        x = np.random.default_rng(16).uniform(-1, 1, (2, 2))
        for op in gens:
            r = annihilation_residual(op, x, MonteCarlo(100_000, seed=17))
            assert r.within()

    def test_non_annihilator_flagged_by_mc(self):
        pos = fisher_generators(2).operators[0].positions
        op = WeylOperator.parse("dx[1,1] - 1", pos)
        r = annihilation_residual(op, np.zeros((2, 2)), MonteCarlo(100_000, seed=18))
        assert not r.within()

    def test_haar_distribution(self):
        x = np.random.default_rng(19).uniform(-1, 1, (3, 3))
        for op in haar_generators(3).operators:
            assert abs(distribution_residual(op, x, Quadrature()).normalized) <= 1e-10

    def test_haar_rejects_other_family(self):
        with pytest.raises(ValueError):
            distribution_residual(fisher_generators(2).operators[0], np.zeros((2, 2)))


class TestHgm:
    def test_identity_path(self):
        tr = hgm_evaluate((0.1, 0.2, 0.3), (0.1, 0.2, 0.3), steps=10)
        assert np.array_equal(tr.final, tr.values[0])

    def test_target(self):
        tr = hgm_evaluate((0.1, 0.2, 0.3), (1, 2, 3), steps=2000)
        q = fisher_value(np.diag([1.0, 2.0, 3.0])).value
        assert abs(tr.final[0] - q) / q <= 1e-5
        for i in range(3):
            m = fisher_moment(np.diag([1.0, 2.0, 3.0]), {(i + 1, i + 1): 1}).value
            assert abs(tr.final[i + 1] - m) / abs(m) <= 1e-4

    def test_fourth_order(self):
        q = fisher_value(np.diag([1.0, 2.0, 3.0])).value
        errs = [abs(hgm_evaluate((0.1, 0.2, 0.3), (1, 2, 3), steps=s).final[0] - q) for s in (20, 40, 80, 160)]
        ratios = [a / b for a, b in zip(errs, errs[1:])]
        assert all(12 < r < 20 for r in ratios), ratios

    def test_singular_path(self):
        with pytest.raises(SingularLocusError) as exc:
            hgm_evaluate((0.1, 0.5, 0.9), (0.7, 0.5, 0.9))
        assert exc.value.t == pytest.approx(2 / 3)
        assert exc.value.pair == (1, 2)

    def test_path_gap(self):
        gap, pair, t = path_gap((0.1, 0.2, 0.3), (1, 2, 3))
        assert gap > 0.02 and pair == (1, 2)

    def test_given_initial_vector(self):
        F0 = np.array([1.0, 0.0, 0.0, 0.0])
        a = hgm_evaluate((0.1, 0.2, 0.3), (0.5, 0.7, 1.1), init=F0, steps=50)
        assert np.array_equal(a.values[0], F0)

    def test_csv(self):
        tr = hgm_evaluate((0.1, 0.2, 0.3), (0.2, 0.4, 0.6), steps=4)
        lines = tr.to_csv().strip().splitlines()
        assert lines[0] == "t,f,f1,f2,f3" and len(lines) == 6
