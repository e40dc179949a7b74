"""Numerical ground truth on SO(n).

Haar sampling, Euler-angle quadrature on SO(3), the circle rule on SO(2),
the I0 series for the diagonal SO(2) case, operator residuals evaluated
through moments ``d^beta f(x) = E[y^beta exp(<x, y>)]`` and a fixed-step
RK4 holonomic gradient method for the diagonal SO(3) Fisher integral.

The Fisher integral here is ``f(x) = E[exp(sum_ij x_ij y_ij)]``.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .polycore import Polynomial
from .songen import SingularLocusError, pfaffian_matrices
from .weylcore import ExpPolyFunction, adjoint, apply

DEFAULT_RESOLUTION = 40


# ---------------------------------------------------------------------------
# methods


@dataclass(frozen=True)
class MonteCarlo:
    samples: int
    seed: int
    partitions: int = 1
    workers: int = 1

    name = "mc"

    def describe(self):
        return {"method": "mc", "seed": self.seed, "samples": self.samples,
                "partitions": self.partitions}


@dataclass(frozen=True)
class Quadrature:
    resolution: int = DEFAULT_RESOLUTION

    name = "quad"

    def describe(self):
        return {"method": "quad", "resolution": self.resolution}


@dataclass(frozen=True)
class Bessel:
    """Closed-form oracle for the diagonal SO(2) integral ``I0(x1 + x2)``."""

    name = "bessel"

    def describe(self):
        return {"method": "bessel"}


# ---------------------------------------------------------------------------
# Haar sampling


@dataclass(frozen=True)
class RotationSample:
    matrix: np.ndarray
    seed: object

    def __post_init__(self):
        q = self.matrix
        n = q.shape[0]
        if np.max(np.abs(q.T @ q - np.eye(n))) > 1e-12 or abs(np.linalg.det(q) - 1) > 1e-12:
            raise ValueError("matrix is not a rotation to 1e-12")


def _haar_batch(n, count, rng):
    g = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diagonal(r, axis1=1, axis2=2))
    signs[signs == 0] = 1
    q = q * signs[:, None, :]
    flip = np.linalg.det(q) < 0
    q[flip, :, 0] *= -1
    return q


def haar_sample(n, seed):
    """One Haar-distributed rotation in SO(n)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.default_rng(seed)
    return RotationSample(_haar_batch(n, 1, rng)[0], seed)


def haar_samples(n, count, seed, partitions=1, workers=1):
    """``count`` Haar rotations as an array of shape ``(count, n, n)``.

    The stream is split into ``partitions`` chunks seeded by spawning from
    ``seed``; chunks are concatenated in order, so the result depends only on
    ``(n, count, seed, partitions)``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    count = int(count)
    children = np.random.SeedSequence(seed).spawn(partitions)
    sizes = [count // partitions + (1 if k < count % partitions else 0) for k in range(partitions)]

    def chunk(k):
        return _haar_batch(n, sizes[k], np.random.default_rng(children[k]))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, range(partitions)))
    else:
        parts = [chunk(k) for k in range(partitions)]
    return np.concatenate(parts, axis=0)


@lru_cache(maxsize=4)
def _cached_samples(n, count, seed, partitions):
    out = haar_samples(n, count, seed, partitions)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# quadrature grids


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes (rotation matrices) and positive weights summing to one."""

    n: int
    resolution: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)


def _rz(t):
    c, s = np.cos(t), np.sin(t)
    z, o = np.zeros_like(t), np.ones_like(t)
    return np.stack([np.stack([c, -s, z], -1), np.stack([s, c, z], -1), np.stack([z, z, o], -1)], -2)


def _ry(t):
    c, s = np.cos(t), np.sin(t)
    z, o = np.zeros_like(t), np.ones_like(t)
    return np.stack([np.stack([c, z, s], -1), np.stack([z, o, z], -1), np.stack([-s, z, c], -1)], -2)


@lru_cache(maxsize=8)
def so3_grid(resolution=DEFAULT_RESOLUTION):
    """Z-Y-Z Euler grid: trapezoid in the two azimuths, Gauss-Legendre in the polar angle."""
    N = int(resolution)
    az = 2 * np.pi * np.arange(N) / N
    u, wu = np.polynomial.legendre.leggauss(N)
    beta = np.pi * (u + 1) / 2
    wb = wu * np.pi / 2 * np.sin(beta)
    a, b, g = np.meshgrid(az, beta, az, indexing="ij")
    _, wbeta, _ = np.meshgrid(az, wb, az, indexing="ij")
    rot = _rz(a.ravel()) @ _ry(b.ravel()) @ _rz(g.ravel())
    w = wbeta.ravel() * (2 * np.pi / N) ** 2 / (8 * np.pi**2)
    # the polar rule integrates sin exactly only up to roundoff; pin the total mass to 1
    w = w / w.sum()
    rot.setflags(write=False)
    w.setflags(write=False)
    return QuadratureGrid(3, N, rot, w)


@lru_cache(maxsize=8)
def so2_grid(resolution=DEFAULT_RESOLUTION):
    """Trapezoid rule on the circle with ``2 * resolution`` nodes."""
    N = 2 * int(resolution)
    t = 2 * np.pi * np.arange(N) / N
    c, s = np.cos(t), np.sin(t)
    rot = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
    w = np.full(N, 1.0 / N)
    rot.setflags(write=False)
    w.setflags(write=False)
    return QuadratureGrid(2, N, rot, w)


def quadrature_grid(n, resolution=DEFAULT_RESOLUTION):
    if n == 3:
        return so3_grid(resolution)
    if n == 2:
        return so2_grid(resolution)
    raise ValueError(f"quadrature is available for n = 2 and n = 3 only, not n = {n}")


# ---------------------------------------------------------------------------
# integrals


@dataclass(frozen=True)
class Estimate:
    value: float
    error: float
    info: dict

    def to_json(self):
        out = {"value": self.value, "error_estimate": self.error}
        out.update(self.info)
        return out


def as_matrix(x, n=None):
    """Full ``n x n`` parameter matrix from a matrix, a diagonal vector or a flat row-major list."""
    a = np.asarray(x, dtype=float)
    if a.ndim == 2:
        return a
    if a.ndim == 1:
        if n is not None and a.size == n * n:
            return a.reshape(n, n)
        if n is None or a.size == n:
            return np.diag(a)
    raise ValueError(f"cannot read a parameter matrix from shape {a.shape}")


def _monomial_values(Y, alpha):
    vals = np.ones(Y.shape[0])
    for (i, j), a in np.ndenumerate(alpha):
        if a:
            vals = vals * Y[:, i, j] ** int(a)
    return vals


def _alpha_array(alpha, n):
    if alpha is None:
        return np.zeros((n, n), dtype=int)
    if isinstance(alpha, dict):
        out = np.zeros((n, n), dtype=int)
        for (i, j), a in alpha.items():
            out[i - 1, j - 1] += a
        return out
    out = np.asarray(alpha, dtype=int)
    if out.shape != (n, n):
        raise ValueError("moment exponent must be an n x n array")
    return out


def _wsum(w, v):
    # pairwise summation; BLAS dot loses ~1e-14 over a 64k-node grid
    return np.sum(w * v)


def _weighted_moments(x, alphas, method, n):
    """Per-node contributions for each exponent; returns (weights, [values])."""
    if isinstance(method, MonteCarlo):
        Y = _cached_samples(n, int(method.samples), method.seed, method.partitions)
        w = np.full(Y.shape[0], 1.0 / Y.shape[0])
    elif isinstance(method, Quadrature):
        grid = quadrature_grid(n, method.resolution)
        Y, w = grid.nodes, grid.weights
    else:
        raise ValueError(f"unsupported method {method!r}")
    e = np.exp(np.einsum("sij,ij->s", Y, x))
    return w, [e * _monomial_values(Y, a) for a in alphas]


def _estimate(x, alpha, method, n):
    w, (vals,) = _weighted_moments(x, [alpha], method, n)
    value = float(_wsum(w, vals))
    if isinstance(method, MonteCarlo):
        err = float(np.std(vals, ddof=1) / math.sqrt(vals.size))
    else:
        half = Quadrature(max(2, method.resolution // 2))
        w2, (v2,) = _weighted_moments(x, [alpha], half, n)
        err = abs(value - float(_wsum(w2, v2)))
    return Estimate(value, err, method.describe())


def fisher_moment(x, alpha=None, method=Quadrature(), n=None):
    """``E[y^alpha exp(<x, y>)]`` over Haar measure on SO(n)."""
    x = as_matrix(x, n)
    n = x.shape[0]
    if isinstance(method, Bessel):
        a = _alpha_array(alpha, n)
        if n != 2 or np.any(x != np.diag(np.diag(x))) or np.any(a != np.diag(np.diag(a))):
            raise ValueError("the Bessel oracle covers diagonal parameters and moments at n = 2")
        s = float(x[0, 0] + x[1, 1])
        return Estimate(bessel_i0_derivative(s, int(np.trace(a))), 0.0, method.describe())
    return _estimate(x, _alpha_array(alpha, n), method, n)


def fisher_value(x, method=Quadrature(), n=None):
    """The Fisher integral ``E[exp(<x, y>)]`` with an error estimate."""
    return fisher_moment(x, None, method, n)


# ---------------------------------------------------------------------------
# I0 series


def bessel_i0(s):
    """Modified Bessel function I0 by its power series (``|s| <= 30``)."""
    return bessel_i0_derivative(s, 0)


def bessel_i0_derivative(s, k=0):
    """``k``-th derivative of I0 from the termwise-differentiated series."""
    s = float(s)
    if abs(s) > 30:
        raise ValueError("series regime requires |s| <= 30")
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    total = 0.0
    c = 1.0  # 1 / (4^m m!^2)
    m = 0
    while True:
        if 2 * m >= k:
            falling = 1.0
            for r in range(k):
                falling *= 2 * m - r
            term = c * falling * s ** (2 * m - k)
            total += term
            if m > 0 and abs(term) <= 1e-17 * abs(total):
                break
            if s == 0 and 2 * m >= k:
                break
        m += 1
        c /= 4.0 * m * m
    return total


# ---------------------------------------------------------------------------
# operator residuals


@dataclass(frozen=True)
class Residual:
    """``(P f)(x0)`` with its normalization ``1 + sum |term|``."""

    residual: float
    scale: float
    stderr: float
    method: str

    @property
    def normalized(self):
        return abs(self.residual) / self.scale

    @property
    def normalized_stderr(self):
        return self.stderr / self.scale

    def within(self, tol=1e-6, nsigma=5.0, floor=1e-12):
        """Tolerance test: ``tol`` for deterministic oracles, ``nsigma`` errors for MC."""
        if self.method == "mc":
            return self.normalized <= nsigma * self.normalized_stderr + floor
        return self.normalized <= tol

    def to_json(self):
        return {"residual": self.residual, "normalized": self.normalized,
                "stderr": self.stderr, "method": self.method}


def _operator_layout(P):
    """Matrix size and the (i, j) moment slot of each position variable."""
    fams = {v.family for v in P.positions}
    if fams != {"x"}:
        raise ValueError("residuals need an operator in the x-variables")
    if all(len(v.indices) == 1 for v in P.positions):
        n = len(P.positions)
        slots = [(v.indices[0] - 1, v.indices[0] - 1) for v in P.positions]
        return n, slots, True
    n = int(round(math.sqrt(len(P.positions))))
    slots = [(v.indices[0] - 1, v.indices[1] - 1) for v in P.positions]
    return n, slots, False


def annihilation_residual(P, x0, method=Quadrature()):
    """Evaluate ``(P f)(x0)`` via moments; see :class:`Residual`."""
    n, slots, diagonal = _operator_layout(P)
    m = P.m
    x0 = np.asarray(x0, dtype=float)
    if diagonal:
        point = x0.ravel()
        if point.size != n:
            raise ValueError(f"need {n} diagonal entries")
        xmat = np.diag(point)
    else:
        xmat = as_matrix(x0, n)
        point = np.array([xmat[i, j] for i, j in slots])
    coeffs, alphas = [], []
    for k, c in P.terms.items():
        cx = float(c) * float(np.prod(point ** np.array(k[:m])))
        beta = np.zeros((n, n), dtype=int)
        for (i, j), b in zip(slots, k[m:]):
            beta[i, j] += b
        coeffs.append(cx)
        alphas.append(beta)
    if isinstance(method, Bessel):
        moments = [fisher_moment(xmat, a, method).value for a in alphas]
        contrib = [c * v for c, v in zip(coeffs, moments)]
        return Residual(float(sum(contrib)), 1.0 + sum(abs(t) for t in contrib), 0.0, "bessel")
    w, vals = _weighted_moments(xmat, alphas, method, n)
    per_node = sum(c * v for c, v in zip(coeffs, vals))
    contrib = [c * float(_wsum(w, v)) for c, v in zip(coeffs, vals)]
    value = float(_wsum(w, per_node))
    scale = 1.0 + sum(abs(t) for t in contrib)
    if isinstance(method, MonteCarlo):
        err = float(np.std(per_node, ddof=1) / math.sqrt(per_node.size))
    else:
        half = Quadrature(max(2, method.resolution // 2))
        w2, vals2 = _weighted_moments(xmat, alphas, half, n)
        err = abs(value - float(_wsum(w2, sum(c * v for c, v in zip(coeffs, vals2)))))
    return Residual(value, scale, err, method.name)


# ---------------------------------------------------------------------------
# holonomic gradient method


@dataclass(frozen=True)
class HgmTrajectory:
    start: tuple
    target: tuple
    steps: int
    t: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @property
    def final(self):
        return self.values[-1]

    def to_csv(self):
        buf = io.StringIO()
        buf.write("t,f,f1,f2,f3\n")
        for t, row in zip(self.t, self.values):
            buf.write(",".join(repr(float(v)) for v in (t, *row)) + "\n")
        return buf.getvalue()


def path_gap(x_start, x_target):
    """Minimum over ``t in [0, 1]`` of ``min_{i<j} |x_i(t)^2 - x_j(t)^2|`` on the segment.

    Returns ``(gap, (i, j), t)``.
    """
    a = np.asarray(x_start, dtype=float)
    d = np.asarray(x_target, dtype=float) - a
    best = (math.inf, None, None)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            A = d[i] ** 2 - d[j] ** 2
            B = 2 * (a[i] * d[i] - a[j] * d[j])
            C = a[i] ** 2 - a[j] ** 2
            cands = [0.0, 1.0]
            if A != 0:
                cands.append(-B / (2 * A))
                disc = B * B - 4 * A * C
                if disc >= 0:
                    r = math.sqrt(disc)
                    cands += [(-B - r) / (2 * A), (-B + r) / (2 * A)]
            elif B != 0:
                cands.append(-C / B)
            for t in cands:
                if 0.0 <= t <= 1.0:
                    g = abs(A * t * t + B * t + C)
                    if g < best[0]:
                        best = (g, (i + 1, j + 1), t)
    return best


def initial_vector(x, resolution=DEFAULT_RESOLUTION):
    """``(f, f_1, f_2, f_3)`` at a diagonal point from quadrature."""
    method = Quadrature(resolution)
    xm = np.diag(np.asarray(x, dtype=float))
    out = [fisher_value(xm, method).value]
    for i in range(3):
        a = np.zeros((3, 3), dtype=int)
        a[i, i] = 1
        out.append(fisher_moment(xm, a, method).value)
    return np.array(out)


def hgm_evaluate(x_start, x_target, init="quad", steps=1000, resolution=DEFAULT_RESOLUTION,
                 eps=1e-8):
    """Integrate the Pfaffian system along the segment with classical RK4."""
    a = np.asarray(x_start, dtype=float)
    b = np.asarray(x_target, dtype=float)
    if a.shape != (3,) or b.shape != (3,):
        raise ValueError("hgm works on diagonal SO(3): points need three coordinates")
    gap, pair, t_bad = path_gap(a, b)
    if gap <= eps:
        raise SingularLocusError(
            f"path meets the singular locus |x_{pair[0]}| = |x_{pair[1]}| at t = {t_bad:.6g}",
            pair=pair, t=t_bad,
        )
    if isinstance(init, str):
        if init != "quad":
            raise ValueError(f"unknown init {init!r}")
        F = initial_vector(a, resolution)
    else:
        F = np.asarray(init, dtype=float).copy()
    d = b - a
    steps = int(steps)
    if steps < 1:
        raise ValueError("steps must be positive")
    h = 1.0 / steps

    def rhs(t, F):
        mats = pfaffian_matrices(tuple(a + t * d))
        M = d[0] * np.asarray(mats[0]) + d[1] * np.asarray(mats[1]) + d[2] * np.asarray(mats[2])
        return M @ F

    ts = np.linspace(0.0, 1.0, steps + 1)
    values = np.empty((steps + 1, 4))
    values[0] = F
    for k in range(steps):
        t = ts[k]
        k1 = rhs(t, F)
        k2 = rhs(t + h / 2, F + h / 2 * k1)
        k3 = rhs(t + h / 2, F + h / 2 * k2)
        k4 = rhs(t + h, F + h * k3)
        F = F + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        values[k + 1] = F
    return HgmTrajectory(tuple(a), tuple(b), steps, ts, values)


# ---------------------------------------------------------------------------
# pairing with the Haar distribution


def _rational_matrix(x):
    return [[Fraction(v).limit_denominator(10**9) for v in row] for row in np.asarray(x, dtype=float)]


def distribution_residual(P, x, method=Quadrature()):
    """``<P mu, phi>`` for ``phi(y) = exp(<x, y>)`` and Haar ``mu`` on SO(n).

    Computed as ``E[(adjoint(P) phi)(y)]``; ``P`` is an operator in the
    y-variables.  Zero for every annihilator of ``mu``.
    """
    if {v.family for v in P.positions} != {"y"}:
        raise ValueError("distribution residuals need an operator in the y-variables")
    n = int(round(math.sqrt(P.m)))
    xm = as_matrix(x, n)
    xr = _rational_matrix(xm)
    table = P.positions
    exponent = Polynomial(table, {
        tuple(1 if k == idx else 0 for k in range(len(table))): xr[v.indices[0] - 1][v.indices[1] - 1]
        for idx, v in enumerate(table)
    })
    phi = ExpPolyFunction(Polynomial.constant(table, 1), exponent)
    image = apply(adjoint(P), phi).prefactor
    if isinstance(method, MonteCarlo):
        Y = _cached_samples(n, int(method.samples), method.seed, method.partitions)
        w = np.full(Y.shape[0], 1.0 / Y.shape[0])
    else:
        grid = quadrature_grid(n, method.resolution)
        Y, w = grid.nodes, grid.weights
    e = np.exp(np.einsum("sij,ij->s", Y, np.array(xr, dtype=float)))
    flat = Y.reshape(Y.shape[0], -1)
    slots = [(v.indices[0] - 1) * n + v.indices[1] - 1 for v in table]
    contrib_nodes = []
    for mono, c in image.terms.items():
        vals = np.full(Y.shape[0], float(c))
        for s, a in zip(slots, mono):
            if a:
                vals = vals * flat[:, s] ** a
        contrib_nodes.append(vals * e)
    if not contrib_nodes:
        return Residual(0.0, 1.0, 0.0, method.name)
    per_node = sum(contrib_nodes)
    value = float(_wsum(w, per_node))
    scale = 1.0 + sum(abs(float(_wsum(w, v))) for v in contrib_nodes)
    if isinstance(method, MonteCarlo):
        err = float(np.std(per_node, ddof=1) / math.sqrt(per_node.size))
    else:
        err = 0.0
    return Residual(value, scale, err, method.name)
