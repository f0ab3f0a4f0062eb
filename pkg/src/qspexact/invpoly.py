"""Optimal odd polynomial approximant of 1/x on [-1, -a] U [a, 1].

For ``0 < a < 1`` and ``n >= 1`` the degree ``2n-1`` minimax approximant has
the closed form

    P(x) = (L(y0) - L(y(x))) / (x * L(y0)),

    L(y)  = 2**(1-n) * (T_n(y) + rho * T_{n-1}(y)),   rho = (1-a)/(1+a),
    y(x)  = (2x**2 - (1+a**2)) / (1-a**2),          y0 = y(0).

The numerator is evaluated through the divided difference
``(T_k(u) - T_k(v)) / (u - v)`` so that no cancellation occurs near ``x = 0``,
and ``P(x) - 1/x = -L(y(x)) / (x L(y0))`` gives the error curve without
subtracting two nearly equal numbers.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParityViolation
from .polycore import (
    RealChebPoly,
    chebyshev_interpolate,
    chebyshev_nodes,
    evaluate_chebyshev,
    golden_maximize,
)

PARITY_TOL = 1e-10
ALTERNATION_RTOL = 1e-6
DEFAULT_GRID = 100_000


@dataclass(frozen=True)
class InversionSpec:
    a: float
    n: int

    def __post_init__(self):
        a = float(self.a)
        if not (0.0 < a < 1.0) or not math.isfinite(a):
            raise ValueError(f"a must lie in (0, 1), got {self.a}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "n", int(self.n))

    @property
    def rho(self) -> float:
        return (1 - self.a) / (1 + self.a)

    @property
    def y0(self) -> float:
        return -(1 + self.a**2) / (1 - self.a**2)

    @property
    def degree(self) -> int:
        return 2 * self.n - 1


@dataclass(frozen=True, eq=False)
class InversionPolynomial:
    spec: InversionSpec
    cheb: RealChebPoly
    eps_bound: float
    eps_measured: float
    alternation_count: int

    @property
    def bound_ratio(self) -> float:
        """``eps_bound / eps_measured``; reported, never assumed to be 1."""
        return self.eps_bound / self.eps_measured

    def __call__(self, x):
        return evaluate_chebyshev(self.cheb, x)


def _chebyshev_pair(y, n):
    """Return (T_n(y), T_{n-1}(y)) by the three-term recurrence."""
    y = np.asarray(y, dtype=float)
    t_prev, t = np.ones_like(y), y.copy()
    if n == 0:
        return t_prev, np.zeros_like(y)
    for _ in range(n - 1):
        t_prev, t = t, 2 * y * t - t_prev
    return t, t_prev


def eval_L(y, spec: InversionSpec):
    """``2**(1-n) * (T_n(y) + rho T_{n-1}(y))``, valid for any real ``y``."""
    tn, tn1 = _chebyshev_pair(y, spec.n)
    out = math.ldexp(1.0, 1 - spec.n) * (tn + spec.rho * tn1)
    return out[()] if np.ndim(out) == 0 else out


def _divided_difference(u: float, v, n: int):
    """Return (D_n, D_{n-1}) with ``D_k = (T_k(u) - T_k(v)) / (u - v)``.

    ``D_{k+1} = 2u D_k + 2 T_k(v) - D_{k-1}``, ``D_0 = 0``, ``D_1 = 1``.
    """
    v = np.asarray(v, dtype=float)
    d_prev, d = np.zeros_like(v), np.ones_like(v)
    if n == 0:
        return d_prev, np.zeros_like(v)
    tv_prev, tv = np.ones_like(v), v.copy()
    for _ in range(n - 1):
        d_prev, d = d, 2 * u * d + 2 * tv - d_prev
        tv_prev, tv = tv, 2 * v * tv - tv_prev
    return d, d_prev


def _y_of_x(x, spec: InversionSpec):
    a2 = spec.a**2
    return (2 * np.asarray(x, dtype=float) ** 2 - (1 + a2)) / (1 - a2)


def eval_inversion(x, spec: InversionSpec):
    """Evaluate the optimal approximant P_{2n-1}(x; a); P(0) = 0."""
    x = np.asarray(x, dtype=float)
    n, rho = spec.n, spec.rho
    dn, dn1 = _divided_difference(spec.y0, _y_of_x(x, spec), n)
    # L(y0) - L(y(x)) = 2**(1-n) (y0 - y(x)) (D_n + rho D_{n-1}), y0 - y(x) = -2x^2/(1-a^2)
    scale = math.ldexp(1.0, 1 - n)
    numer_over_x = -scale * 2 * x / (1 - spec.a**2) * (dn + rho * dn1)
    out = numer_over_x / eval_L(spec.y0, spec)
    return out[()] if out.ndim == 0 else out


def residual(x, spec: InversionSpec):
    """Exact error curve ``P(x) - 1/x = -L(y(x)) / (x L(y0))`` for ``x != 0``."""
    x = np.asarray(x, dtype=float)
    out = -eval_L(_y_of_x(x, spec), spec) / (x * eval_L(spec.y0, spec))
    return out[()] if out.ndim == 0 else out


def error_bound(spec: InversionSpec) -> float:
    """``sqrt(1+a^2)/a * (1-a)**n / (1+a)**(n-1)``, evaluated in log space."""
    a, n = spec.a, spec.n
    log_b = 0.5 * math.log1p(a * a) - math.log(a) + n * math.log1p(-a) - (n - 1) * math.log1p(a)
    return math.exp(log_b)


def select_degree(a: float, eps: float) -> int:
    """Smallest ``n`` with ``error_bound(a, n) <= eps``."""
    if not (0.0 < a < 1.0):
        raise ValueError(f"a must lie in (0, 1), got {a}")
    if not (eps > 0.0) or not math.isfinite(eps):
        raise ValueError(f"eps must be positive, got {eps}")
    log_c = 0.5 * math.log1p(a * a) + math.log1p(a) - math.log(a)
    n = max(1, math.ceil((log_c - math.log(eps)) / (math.log1p(a) - math.log1p(-a))))
    while n > 1 and error_bound(InversionSpec(a, n - 1)) <= eps:
        n -= 1
    while error_bound(InversionSpec(a, n)) > eps:
        n += 1
    return n


@functools.lru_cache(maxsize=256)
def _interpolated_coefficients(a: float, n: int) -> RealChebPoly:
    spec = InversionSpec(a, n)
    m = spec.degree
    return chebyshev_interpolate(eval_inversion(chebyshev_nodes(m), spec), m)


def error_curve(ip: InversionPolynomial, x):
    """``P(x) - 1/x`` for the polynomial held by ``ip``.

    The closed-form residual is used for the constructed polynomial; any
    deviation of ``ip.cheb`` from the constructed coefficients (e.g. a
    deliberate perturbation) is added back as a Chebyshev series.
    """
    ref = _interpolated_coefficients(ip.spec.a, ip.spec.n).cheb_coeffs
    c = ip.cheb.cheb_coeffs
    size = max(ref.size, c.size)
    delta = np.pad(c, (0, size - c.size)) - np.pad(ref, (0, size - ref.size))
    out = residual(x, ip.spec)
    if np.any(delta != 0):
        out = out + evaluate_chebyshev(delta, x)
    return out


def _refined_extrema(ip: InversionPolynomial, grid_per_interval: int):
    """Local extrema of the error curve on S(a): list of (x, value), ascending x.

    Both interval endpoints are always included; interior grid maxima of
    ``|error|`` are polished by a bounded scalar search between neighbours.
    """
    a = ip.spec.a
    if grid_per_interval < 100 * ip.spec.n:
        raise ValueError(f"grid_per_interval must be >= 100*n = {100 * ip.spec.n}")
    found = []
    for lo, hi in ((-1.0, -a), (a, 1.0)):
        x = np.linspace(lo, hi, grid_per_interval)
        e = error_curve(ip, x)
        m = np.abs(e)
        found += [(x[0], e[0]), (x[-1], e[-1])]
        idx = np.nonzero((m[1:-1] >= m[:-2]) & (m[1:-1] >= m[2:]))[0] + 1
        if idx.size == 0:
            continue
        sign = np.sign(e[idx])
        xr, _ = golden_maximize(lambda t: sign * error_curve(ip, t), x[idx - 1], x[idx + 1])
        er = error_curve(ip, xr)
        better = np.abs(er) >= m[idx]
        xr = np.where(better, xr, x[idx])
        er = np.where(better, er, e[idx])
        found += list(zip(xr.tolist(), er.tolist()))
    return sorted(found)


def measure_error(ip: InversionPolynomial, grid_per_interval: int = DEFAULT_GRID) -> float:
    """Sup of ``|P(x) - 1/x|`` over S(a) from a uniform grid plus local refinement."""
    return max(abs(e) for _, e in _refined_extrema(ip, grid_per_interval))


def _count_alternations(extrema, peak: float) -> int:
    signs = [np.sign(e) for _, e in extrema if abs(e) >= (1 - ALTERNATION_RTOL) * peak]
    count, last = 0, 0.0
    for s in signs:
        if s != 0 and s != last:
            count += 1
            last = s
    return count


def alternation_count(ip: InversionPolynomial, grid_per_interval: int = DEFAULT_GRID) -> int:
    """Number of sign-alternating extrema within 1e-6 (relative) of the peak error."""
    ext = _refined_extrema(ip, grid_per_interval)
    return _count_alternations(ext, max(abs(e) for _, e in ext))


def build(spec: InversionSpec, grid_per_interval: int = DEFAULT_GRID) -> InversionPolynomial:
    """Construct the approximant's Chebyshev coefficients and verify them."""
    cheb = _interpolated_coefficients(spec.a, spec.n)
    even = np.abs(cheb.cheb_coeffs[0::2])
    if even.size and even.max() > PARITY_TOL:
        raise ParityViolation(
            f"even Chebyshev coefficient of size {even.max():.3e} for a={spec.a}, n={spec.n}"
        )
    ip = InversionPolynomial(spec, cheb, error_bound(spec), float("nan"), 0)
    grid = max(grid_per_interval, 100 * spec.n)
    ext = _refined_extrema(ip, grid)
    peak = max(abs(e) for _, e in ext)
    return InversionPolynomial(spec, cheb, ip.eps_bound, peak, _count_alternations(ext, peak))


def error_samples(ip: InversionPolynomial, n_points: int = 2001):
    """(x, error) pairs over S(a) for plotting, ascending in x."""
    a = ip.spec.a
    x = np.concatenate([np.linspace(-1.0, -a, n_points), np.linspace(a, 1.0, n_points)])
    return x, error_curve(ip, x)


def sup_norm_interval(cheb: RealChebPoly, n_grid: int = 100_001) -> float:
    """Maximum of ``|p(x)|`` over [-1, 1] on a uniform grid with local refinement."""
    x = np.linspace(-1.0, 1.0, n_grid)
    v = np.abs(evaluate_chebyshev(cheb, x))
    k = int(np.argmax(v))
    lo, hi = x[max(k - 1, 0)], x[min(k + 1, n_grid - 1)]
    _, val = golden_maximize(lambda t: np.abs(evaluate_chebyshev(cheb, t)), [lo], [hi])
    return max(float(v[k]), float(val[0]))
