"""Operator families for SO(n): Haar annihilators, Fisher-integral annihilators,
characteristic ideals, the phi/psi identities, diagonal operators and the
Pfaffian system of the diagonal SO(3) Fisher integral.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .polycore import Polynomial, TableMismatchError, var
from .weylcore import WeylOperator, fourier_inv

FAMILIES = ("haar", "haar_row_form", "fisher", "char_J", "char_Jprime", "diagonal", "so3_mixed")


class SingularLocusError(ValueError):
    """Raised at points where x_i^2 == x_j^2 (within tolerance)."""

    def __init__(self, message, pair=None, t=None):
        super().__init__(message)
        self.pair = pair
        self.t = t


def _check_n(n, lo=2, hi=4):
    if not isinstance(n, int) or not lo <= n <= hi:
        raise ValueError(f"matrix size n must be an integer in [{lo}, {hi}], got {n!r}")


def matrix_table(family, n):
    return tuple(var(family, i, j) for i in range(1, n + 1) for j in range(1, n + 1))


def y_table(n):
    return matrix_table("y", n)


def x_table(n):
    return matrix_table("x", n)


def xdiag_table(n):
    return tuple(var("x", i) for i in range(1, n + 1))


def y_xi_table(n):
    return y_table(n) + matrix_table("xi", n)


def permutation_sign(p):
    inv = sum(1 for a, b in itertools.combinations(p, 2) if a > b)
    return -1 if inv % 2 else 1


def determinant(entry, n, zero):
    """Leibniz expansion of ``det(entry(i, j))`` (1-based indices)."""
    total = zero
    for p in itertools.permutations(range(1, n + 1)):
        term = reduce(lambda a, b: a * b, (entry(i, p[i - 1]) for i in range(1, n + 1)))
        total = total + term * permutation_sign(p)
    return total


@dataclass(frozen=True)
class GeneratorSet:
    """A named family of operators (or polynomials) for matrix size ``n``.

    ``prefactors`` is set for cleared-denominator families: operator ``k``
    equals ``prefactors[k]`` times the rational-coefficient form.
    """

    n: int
    family: str
    operators: tuple
    labels: tuple = ()
    prefactors: tuple = None

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def __getitem__(self, k):
        return self.operators[k]

    def to_json(self):
        out = {
            "n": self.n,
            "family": self.family,
            "operators": [
                {"label": lab, "text": str(op), "terms": op.to_json()}
                for lab, op in zip(self.labels or [""] * len(self), self.operators)
            ],
        }
        if self.prefactors is not None:
            for item, pre in zip(out["operators"], self.prefactors):
                item["prefactor"] = str(pre)
        return out


class _Matrix:
    """1-based accessor for the position and derivation generators of a table."""

    def __init__(self, family, n):
        self.n = n
        self.positions = matrix_table(family, n)
        self.pos, self.der = WeylOperator.generators(self.positions)

    def v(self, i, j):
        return self.pos[(i - 1) * self.n + j - 1]

    def d(self, i, j):
        return self.der[(i - 1) * self.n + j - 1]

    def zero(self):
        return WeylOperator(self.positions)


def _skew_column(M, i, j):
    n = M.n
    return sum((M.v(k, i) * M.d(k, j) - M.v(k, j) * M.d(k, i) for k in range(1, n + 1)), M.zero())


def _skew_row(M, i, j):
    n = M.n
    return sum((M.v(i, k) * M.d(j, k) - M.v(j, k) * M.d(i, k) for k in range(1, n + 1)), M.zero())


def _orthogonality(entry_pair, n, zero, i, j):
    return (1 if i == j else 0) - sum((entry_pair(k) for k in range(1, n + 1)), zero)


def haar_generators(n, row_form=False):
    """Annihilators of the Haar distribution on SO(n) in the y-variables.

    Order: skew vector fields (i<j), then for each i<=j the column and row
    orthogonality relations, then ``1 - det y``.  With ``row_form`` the
    vector fields use the row action instead of the column action.
    """
    _check_n(n)
    M = _Matrix("y", n)
    ops, labels = [], []
    skew = _skew_row if row_form else _skew_column
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            ops.append(skew(M, i, j))
            labels.append(f"{'row_' if row_form else ''}skew({i},{j})")
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            ops.append(_orthogonality(lambda k: M.v(k, i) * M.v(k, j), n, M.zero(), i, j))
            labels.append(f"col_orth({i},{j})")
            ops.append(_orthogonality(lambda k: M.v(i, k) * M.v(j, k), n, M.zero(), i, j))
            labels.append(f"row_orth({i},{j})")
    ops.append(1 - determinant(M.v, n, M.zero()))
    labels.append("det")
    family = "haar_row_form" if row_form else "haar"
    return GeneratorSet(n, family, tuple(ops), tuple(labels))


def rename_positions(op, positions):
    positions = tuple(positions)
    if len(positions) != op.m:
        raise TableMismatchError("renaming needs a table of the same size")
    return WeylOperator._raw(positions, dict(op.terms))


def fisher_generators(n):
    """Annihilators of the Fisher integral, built as ``fourier_inv`` of the
    Haar generators with ``y`` renamed to ``x``; checked against the direct
    construction.
    """
    _check_n(n)
    haar = haar_generators(n)
    xt = x_table(n)
    ops = tuple(rename_positions(fourier_inv(g), xt) for g in haar.operators)
    labels = tuple(lab.replace("col_orth", "col_moment").replace("row_orth", "row_moment")
                   for lab in haar.labels)
    direct = fisher_generators_direct(n)
    if ops != direct.operators:
        raise AssertionError("Fourier image disagrees with the direct Fisher generators")
    return GeneratorSet(n, "fisher", ops, labels)


def fisher_generators_direct(n):
    """Fisher-integral annihilators written out in the x-variables."""
    _check_n(n)
    M = _Matrix("x", n)
    ops, labels = [], []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            ops.append(_skew_column(M, i, j))
            labels.append(f"skew({i},{j})")
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            ops.append(_orthogonality(lambda k: M.d(k, i) * M.d(k, j), n, M.zero(), i, j))
            labels.append(f"col_moment({i},{j})")
            ops.append(_orthogonality(lambda k: M.d(i, k) * M.d(j, k), n, M.zero(), i, j))
            labels.append(f"row_moment({i},{j})")
    ops.append(1 - determinant(M.d, n, M.zero()))
    labels.append("det")
    return GeneratorSet(n, "fisher", tuple(ops), tuple(labels))


# ---------------------------------------------------------------------------
# commutative ideals in (y, xi)


class _Poly:
    def __init__(self, n):
        self.n = n
        self.table = y_xi_table(n)
        self._y = [Polynomial.variable(self.table, v) for v in self.table[: n * n]]
        self._xi = [Polynomial.variable(self.table, v) for v in self.table[n * n:]]
        self.zero = Polynomial(self.table)

    def y(self, i, j):
        return self._y[(i - 1) * self.n + j - 1]

    def xi(self, i, j):
        return self._xi[(i - 1) * self.n + j - 1]

    def delta(self, i, j):
        return 1 if i == j else 0

    def ytyc(self, i, l):
        # (y^T y)_{il}
        return sum((self.y(k, i) * self.y(k, l) for k in range(1, self.n + 1)), self.zero)

    def yyt(self, i, l):
        # (y y^T)_{il}
        return sum((self.y(i, k) * self.y(l, k) for k in range(1, self.n + 1)), self.zero)


def so_relations(n, table=None):
    """Orthogonality relations and ``1 - det y`` as polynomials."""
    _check_n(n)
    R = _Poly(n)
    out = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            out.append(R.delta(i, j) - R.ytyc(i, j))
            out.append(R.delta(i, j) - R.yyt(i, j))
    out.append(1 - determinant(R.y, n, R.zero))
    if table is not None:
        return [p.embed(table) for p in out]
    return out


def xi_symmetry(n, table=None):
    """``xi[i,j] - xi[j,i]`` for ``i < j``."""
    _check_n(n)
    R = _Poly(n)
    out = [R.xi(i, j) - R.xi(j, i) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if table is not None:
        return [p.embed(table) for p in out]
    return out


def skew_symbols(n):
    """``sum_k y[k,i] xi[k,j] - y[k,j] xi[k,i]`` for ``i < j``."""
    R = _Poly(n)
    return [
        sum((R.y(k, i) * R.xi(k, j) - R.y(k, j) * R.xi(k, i) for k in range(1, n + 1)), R.zero)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    ]


def char_ideal_generators(n, which):
    """Generators of ``J`` (skew symbols) or ``Jprime`` (xi symmetry) plus the SO relations."""
    _check_n(n)
    if which in ("J", "char_J"):
        first = skew_symbols(n)
    elif which in ("Jprime", "char_Jprime", "J'"):
        first = xi_symmetry(n)
    else:
        raise ValueError(f"unknown characteristic ideal {which!r}")
    gens = so_relations(n) + first
    family = "char_J" if which in ("J", "char_J") else "char_Jprime"
    return GeneratorSet(n, family, tuple(gens))


def phi(p, n):
    """``xi[i,j] -> sum_k y[i,k] xi[k,j]``; y fixed."""
    R = _Poly(n)
    mapping = {
        v: sum((R.y(v.indices[0], k) * R.xi(k, v.indices[1]) for k in range(1, n + 1)), R.zero)
        for v in R.table[n * n:]
    }
    return p.substitute(mapping)


def psi(p, n):
    """``xi[i,j] -> sum_k y[k,i] xi[k,j]``; y fixed."""
    R = _Poly(n)
    mapping = {
        v: sum((R.y(k, v.indices[0]) * R.xi(k, v.indices[1]) for k in range(1, n + 1)), R.zero)
        for v in R.table[n * n:]
    }
    return p.substitute(mapping)


def phi_psi_identities(n):
    """``[(label, lhs, rhs)]`` for the four phi/psi identities.

    The ``psi(phi(xi))`` right-hand side is ``xi[i,j] - sum_l xi[l,j] (delta_il - (y y^T)_il)``.
    """
    _check_n(n, 2, 3)
    R = _Poly(n)
    rng = range(1, n + 1)
    out = []
    for i in rng:
        for j in rng:
            if i < j:
                skew = sum((R.y(k, i) * R.xi(k, j) - R.y(k, j) * R.xi(k, i) for k in rng), R.zero)
                rhs = R.xi(i, j) - R.xi(j, i)
                rhs = rhs - sum(((R.delta(i, l) - R.ytyc(i, l)) * R.xi(l, j) for l in rng), R.zero)
                rhs = rhs + sum(((R.delta(j, l) - R.ytyc(j, l)) * R.xi(l, i) for l in rng), R.zero)
                out.append((f"phi_skew({i},{j})", phi(skew, n), rhs))
                out.append((f"psi_sym({i},{j})", psi(R.xi(i, j) - R.xi(j, i), n), skew))
            rhs14 = R.xi(i, j) - sum((R.xi(l, j) * (R.delta(i, l) - R.ytyc(i, l)) for l in rng), R.zero)
            out.append((f"phi_psi({i},{j})", phi(psi(R.xi(i, j), n), n), rhs14))
            rhs15 = R.xi(i, j) - sum((R.xi(l, j) * (R.delta(i, l) - R.yyt(i, l)) for l in rng), R.zero)
            out.append((f"psi_phi({i},{j})", psi(phi(R.xi(i, j), n), n), rhs15))
    return out


def psi_phi_transposed_rhs(n, i, j):
    """The variant ``xi[i,j] - sum_l xi[j,l] (delta_il - (y y^T)_il)``.

    It differs from ``psi(phi(xi[i,j]))`` by an element of the ideal of the
    orthogonality relations, not identically.
    """
    R = _Poly(n)
    rng = range(1, n + 1)
    return R.xi(i, j) - sum((R.xi(j, l) * (R.delta(i, l) - R.yyt(i, l)) for l in rng), R.zero)


def phi_psi_residuals(n):
    """Residual ``lhs - rhs`` for each identity; all should be zero."""
    return [(label, lhs - rhs) for label, lhs, rhs in phi_psi_identities(n)]


# ---------------------------------------------------------------------------
# diagonal Fisher integral


class _Diag:
    def __init__(self, n):
        self.n = n
        self.positions = xdiag_table(n)
        self.pos, self.der = WeylOperator.generators(self.positions)

    def x(self, i):
        return self.pos[i - 1]

    def d(self, i):
        return self.der[i - 1]


def diagonal_operators(n):
    """Second-order annihilators of the diagonal Fisher integral, denominators cleared.

    Operator ``i`` is ``prefactor_i`` times
    ``d_i^2 + sum_{k != i} (x_i d_i - x_k d_k) / (x_i^2 - x_k^2) - 1``
    with ``prefactor_i = prod_{k != i} (x_i^2 - x_k^2)``.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError("n must be an integer >= 2")
    D = _Diag(n)
    ops, pres, labels = [], [], []
    for i in range(1, n + 1):
        others = [k for k in range(1, n + 1) if k != i]
        gap = {k: D.x(i) * D.x(i) - D.x(k) * D.x(k) for k in others}
        pre = reduce(lambda a, b: a * b, gap.values())
        op = pre * D.d(i) * D.d(i) - pre
        for k in others:
            rest = reduce(lambda a, b: a * b, (gap[l] for l in others if l != k),
                          WeylOperator.constant(D.positions, 1))
            op = op + rest * (D.x(i) * D.d(i) - D.x(k) * D.d(k))
        ops.append(op)
        pres.append(pre)
        labels.append(f"diag({i})")
    return GeneratorSet(n, "diagonal", tuple(ops), tuple(labels), tuple(pres))


def so3_mixed_operators():
    """``(x_i^2-x_j^2) d_i d_j - (x_j d_i - x_i d_j) - (x_i^2-x_j^2) d_k`` for cyclic (i,j,k)."""
    D = _Diag(3)
    ops, labels = [], []
    for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        gap = D.x(i) * D.x(i) - D.x(j) * D.x(j)
        ops.append(gap * D.d(i) * D.d(j) - (D.x(j) * D.d(i) - D.x(i) * D.d(j)) - gap * D.d(k))
        labels.append(f"mixed({i},{j},{k})")
    return GeneratorSet(3, "so3_mixed", tuple(ops), tuple(labels))


def minor_identity(table=None):
    """``y11 y22 - y12 y21 - y33``: vanishes on SO(3) (cofactor of a rotation)."""
    table = table or y_table(3)
    y = lambda i, j: Polynomial.variable(table, var("y", i, j))
    return y(1, 1) * y(2, 2) - y(1, 2) * y(2, 1) - y(3, 3)


def generator_set(family, n=None):
    """Dispatch by family name (underscores or dashes)."""
    family = family.replace("-", "_")
    if family == "haar":
        return haar_generators(n)
    if family in ("haar_row_form", "haar_row"):
        return haar_generators(n, row_form=True)
    if family == "fisher":
        return fisher_generators(n)
    if family in ("char_J", "char_j"):
        return char_ideal_generators(n, "J")
    if family in ("char_Jprime", "char_jprime"):
        return char_ideal_generators(n, "Jprime")
    if family == "diagonal":
        return diagonal_operators(n)
    if family == "so3_mixed":
        if n not in (None, 3):
            raise ValueError("so3_mixed exists only for n = 3")
        return so3_mixed_operators()
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Pfaffian system for diagonal SO(3)


@dataclass(frozen=True)
class PfaffianSystem:
    """``d F / d x_i = A_i F`` for ``F = (f, f_1, f_2, f_3)`` at ``point``.

    ``matrices`` are 4x4 nested lists of ``Fraction`` when the point is
    rational, float ``ndarray`` otherwise.
    """

    point: tuple
    matrices: tuple
    exact: bool = False

    def connection(self, direction):
        """``sum_i direction_i A_i`` as a float array."""
        return sum(float(c) * np.asarray(A, dtype=float) for c, A in zip(direction, self.matrices))

    def to_json(self):
        return {
            "point": [str(c) for c in self.point],
            "matrices": [[[str(v) for v in row] for row in A] for A in self.matrices],
        }


def singular_gap(x):
    """Smallest ``|x_i^2 - x_j^2|`` together with the offending pair."""
    best = None
    for i, j in itertools.combinations(range(len(x)), 2):
        g = abs(x[i] * x[i] - x[j] * x[j])
        if best is None or g < best[0]:
            best = (g, (i + 1, j + 1))
    return best


def pfaffian_matrices(x):
    """Raw 4x4 coefficient matrices at a point (no singularity guard)."""
    zero = x[0] * 0
    A = [[[zero] * 4 for _ in range(4)] for _ in range(3)]
    for i in range(3):
        Ai = A[i]
        Ai[0][i + 1] = zero + 1
        # d_i f_i = f - sum_{k != i} (x_i f_i - x_k f_k) / (x_i^2 - x_k^2)
        Ai[i + 1][0] = zero + 1
        for k in range(3):
            if k == i:
                continue
            g = x[i] * x[i] - x[k] * x[k]
            Ai[i + 1][i + 1] -= x[i] / g
            Ai[i + 1][k + 1] += x[k] / g
        # d_i f_j = (x_j f_i - x_i f_j) / (x_i^2 - x_j^2) + f_k
        for j in range(3):
            if j == i:
                continue
            k = 3 - i - j
            g = x[i] * x[i] - x[j] * x[j]
            Ai[j + 1][i + 1] += x[j] / g
            Ai[j + 1][j + 1] -= x[i] / g
            Ai[j + 1][k + 1] += 1
    return A


def pfaffian_so3(x, eps=1e-8):
    """Pfaffian system of the diagonal SO(3) Fisher integral at ``x``."""
    x = tuple(x)
    if len(x) != 3:
        raise ValueError("pfaffian_so3 needs a point with three coordinates")
    exact = all(isinstance(c, (int, Fraction)) for c in x)
    pt = tuple(Fraction(c) for c in x) if exact else tuple(float(c) for c in x)
    gap, pair = singular_gap(pt)
    if gap <= eps:
        raise SingularLocusError(
            f"point lies on the singular locus |x_{pair[0]}| = |x_{pair[1]}| (gap {float(gap):.3g})",
            pair=pair,
        )
    mats = pfaffian_matrices(pt)
    if not exact:
        mats = [np.array(A, dtype=float) for A in mats]
    return PfaffianSystem(pt, tuple(mats), exact)
