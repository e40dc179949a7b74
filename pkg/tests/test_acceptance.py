"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (with wall time) that the terminal summary
prints after the run.
"""

import contextlib
import itertools
import random
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE, random_operator, random_polynomial, xs
from sofisher.dgb import (
    characteristic_dimension,
    characteristic_ideal,
    ideal_contains,
    is_holonomic,
    weyl_groebner,
    weyl_normal_form,
)
from sofisher.numint import (
    Bessel,
    MonteCarlo,
    Quadrature,
    annihilation_residual,
    bessel_i0,
    distribution_residual,
    fisher_value,
    hgm_evaluate,
)
from sofisher.polycore import GREVLEX, BudgetExhausted, groebner, krull_dimension
from sofisher.songen import (
    char_ideal_generators,
    diagonal_operators,
    fisher_generators,
    fisher_generators_direct,
    haar_generators,
    matrix_table,
    phi_psi_residuals,
    so3_mixed_operators,
    so_relations,
    xi_symmetry,
    y_table,
)
from sofisher.weylcore import WeylOperator, fourier, fourier_inv, symbol_01, twist


@contextlib.contextmanager
def criterion(number, title, budget_s):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - t0
        assert elapsed < budget_s, f"runtime {elapsed:.1f}s exceeds {budget_s}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title} ({elapsed:.1f}s, limit {budget_s}s)")


def _regular_diagonal_points(count, seed, gap=0.05):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        x = rng.uniform(-2, 2, 3)
        if all(abs(x[i] ** 2 - x[j] ** 2) > gap for i, j in itertools.combinations(range(3), 2)):
            out.append(x)
    return out


def test_1_generator_fidelity():
    with criterion(1, "generator counts and Fourier image = direct Fisher operators, n=2..4", 1.0):
        for n in (2, 3, 4):
            expected = n * (n - 1) // 2 + n * (n + 1) + 1
            assert len(haar_generators(n)) == expected
            assert len(fisher_generators(n)) == expected
            haar = haar_generators(n).operators
            direct = fisher_generators_direct(n).operators
            for h, d in zip(haar, direct):
                assert str(fourier_inv(h)).replace("y", "x") == str(d)


def test_2_algebraic_identities():
    with criterion(2, "phi/psi identities vanish; algebra laws on 200 random operators", 30.0):
        for n in (2, 3):
            assert all(r.is_zero() for _, r in phi_psi_residuals(n))
        rng = random.Random(2024)
        pos = xs(2)
        for _ in range(200):
            a, b, c = (random_operator(rng, pos) for _ in range(3))
            f = random_polynomial(rng, pos, 3, 3)
            assert (a * b) * c == a * (b * c)
            if not (a * b).is_zero():
                assert symbol_01(a * b) == symbol_01(a) * symbol_01(b)
            assert fourier(a * b) == fourier(a) * fourier(b)
            assert fourier_inv(a * b) == fourier_inv(a) * fourier_inv(b)
            assert twist(a * b, f) == twist(a, f) * twist(b, f)


def test_3_dimension_claims():
    with criterion(3, "Krull dimensions 1/3/4 (n=2) and 3/6/9 (n=3)", 120.0):
        for n, expected in ((2, (1, 3, 4)), (3, (3, 6, 9))):
            got = (
                krull_dimension(so_relations(n, y_table(n))),
                krull_dimension(xi_symmetry(n, matrix_table("xi", n))),
                krull_dimension(char_ideal_generators(n, "Jprime").operators),
            )
            assert got == expected, (n, got)


def test_4_holonomicity():
    with criterion(4, "Haar and Fisher ideals at n=2 are holonomic (dim 4); Bernstein bound holds", 600.0):
        for gens in (haar_generators(2).operators, fisher_generators(2).operators):
            rep = is_holonomic(gens)
            assert rep.holonomic and rep.dimension == 4
        tested = [
            haar_generators(2, row_form=True).operators,
            diagonal_operators(2).operators,
            diagonal_operators(3).operators,
            tuple(diagonal_operators(3).operators) + tuple(so3_mixed_operators().operators),
            [WeylOperator.parse("dx[1]", xs(2))],
        ]
        rng = random.Random(4)
        tested += [[random_operator(rng, xs(2), 3, 2)] for _ in range(10)]
        for gens in tested:
            dim = characteristic_dimension(gens)
            if dim is not None:
                assert dim >= gens[0].m
        # n = 3 is best effort only and never gates this criterion
        try:
            weyl_groebner(haar_generators(3).operators, max_pairs=200)
        except BudgetExhausted:
            pass


def test_5_annihilation():
    with criterion(5, "annihilation residuals: quad <= 1e-6, Bessel exact, MC <= 5 sigma", 300.0):
        ops = tuple(diagonal_operators(3).operators) + tuple(so3_mixed_operators().operators)
        for x in _regular_diagonal_points(20, 5):
            for op in ops:
                r = annihilation_residual(op, x, Quadrature())
                assert r.normalized <= 1e-6, (x, r)
        rng = np.random.default_rng(55)
        for _ in range(20):
            x = rng.uniform(-2, 2, 2)
            if abs(x[0] ** 2 - x[1] ** 2) < 1e-3:
                continue
            for op in diagonal_operators(2).operators:
                assert annihilation_residual(op, x, Bessel()).normalized <= 1e-13
        for n, seed in ((2, 7), (3, 8)):
            x = np.random.default_rng(seed).uniform(-1, 1, (n, n))
            mc = MonteCarlo(1_000_000, seed)
            for op in fisher_generators(n).operators:
                r = annihilation_residual(op, x, mc)
                assert r.within(nsigma=5), (n, str(op), r)
            for op in haar_generators(n).operators:
                r = distribution_residual(op, x, mc)
                assert r.within(nsigma=5), (n, str(op), r)


def test_6_oracle_cross_validation():
    with criterion(6, "MC vs quadrature at n=3 within 5 sigma; I0(1) = 1.26606588 +- 1e-8", 120.0):
        x = np.random.default_rng(6).uniform(-1, 1, (3, 3))
        mc = fisher_value(x, MonteCarlo(1_000_000, 6))
        quad = fisher_value(x, Quadrature())
        assert abs(mc.value - quad.value) <= 5 * mc.error
        theta = 2 * np.pi * np.arange(2048) / 2048
        circle = float(np.mean(np.exp(np.cos(theta))))
        assert abs(bessel_i0(1.0) - 1.26606588) <= 1e-8
        assert abs(bessel_i0(1.0) - circle) <= 1e-8


def test_7_hgm():
    with criterion(7, "HGM (0.1,0.2,0.3) -> (1,2,3) within 1e-5; 4th-order step halving", 60.0):
        target = np.diag([1.0, 2.0, 3.0])
        ref = fisher_value(target).value
        tr = hgm_evaluate((0.1, 0.2, 0.3), (1, 2, 3), steps=10_000)
        assert abs(tr.final[0] - ref) / ref <= 1e-5
        errs = [abs(hgm_evaluate((0.1, 0.2, 0.3), (1, 2, 3), steps=s).final[0] - ref) for s in (20, 40, 80, 160)]
        ratios = [a / b for a, b in zip(errs, errs[1:])]
        assert all(12 < r < 20 for r in ratios), ratios


PAIRS = [
    (["dx[1]^2"], ["dx[1]"], 1),
    (["dx[1]", "dx[2]^2"], ["dx[1]", "dx[2]"], 2),
    (["x[1]^2*dx[1]^2 + x[1]*dx[1]"], ["x[1]*dx[1]"], 1),
]


def test_8_strict_initial_ideals():
    with criterion(8, "strict inclusions I < J give strict initial-ideal inclusions (3 pairs)", 60.0):
        for small, big, m in PAIRS:
            t = xs(m)
            I = [WeylOperator.parse(s, t) for s in small]
            J = [WeylOperator.parse(s, t) for s in big]
            gI, gJ = weyl_groebner(I), weyl_groebner(J)
            assert all(weyl_normal_form(g, gJ).is_zero() for g in I)
            assert not all(weyl_normal_form(g, gI).is_zero() for g in J)
            cI = groebner(characteristic_ideal(I, gb=gI), GREVLEX)
            cJ = groebner(characteristic_ideal(J, gb=gJ), GREVLEX)
            assert ideal_contains(cJ, cI.generators)
            assert not ideal_contains(cI, cJ.generators)
