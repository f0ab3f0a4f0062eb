"""Complementary polynomials on the unit circle.

Given ``P`` with ``|P| <= 1`` on the unit circle and ``P(0) != 0``, build ``Q``
of the same degree with ``|P|^2 + |Q|^2 = 1`` on the circle:

    Q(e^{it}) = Q0(e^{it}) * exp(Pi[log((1 - |P|^2) / |Q0|^2)])

where ``Q0 = prod (z - t_j)**l_j`` collects the roots of ``1 - |P|^2`` lying on
the circle (each has even multiplicity ``2 l_j``) and ``Pi`` is the Fourier
multiplier keeping positive frequencies, halving the mean and dropping
negative frequencies. ``exp(Pi[.])`` is the outer spectral factor, so the
returned ``Q`` has no roots in the open unit disk.

The integrand of the contour-integral representations is read as a function
of the integration variable ``z'``; the quadrature evaluators below follow
that reading.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DivisionByZeroQ0,
    NearZeroOnContour,
    NoConvergence,
    NonPositiveRatio,
    OddCircleMultiplicity,
    SupNormExceedsOne,
    ZeroConstantTerm,
)
from .polycore import (
    ComplexPoly,
    UnitGridSamples,
    companion_roots,
    conjugate_reciprocal,
    evaluate_monomial,
    grid_values,
    is_power_of_two,
    next_power_of_two,
    poly_from_roots,
    sup_norm_circle,
    synthetic_divide,
)

log = logging.getLogger(__name__)

TAU_NORM = 1e-10
DELTA_STRICT = 1e-9
NEAR_UNIMODULAR = 1e-4
DEFLATION_RTOL = 1e-9
IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class CompletionConfig:
    tau_defect: float = 1e-12
    tau_tail: float = 1e-13
    tau_circle: float = 1e-8
    n_min: int = 256
    n_max: int = 1 << 20
    detect_circle_roots: bool = True

    def __post_init__(self):
        for name in ("tau_defect", "tau_tail", "tau_circle"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if not (is_power_of_two(self.n_min) and is_power_of_two(self.n_max)):
            raise ValueError("n_min and n_max must be powers of two")
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")


@dataclass(frozen=True, eq=False)
class TargetPolynomial:
    poly: ComplexPoly
    sup_norm: float
    strictly_contractive: bool

    @property
    def degree(self) -> int:
        return self.poly.degree


@dataclass(frozen=True)
class CircleRootSet:
    roots: tuple[tuple[complex, int], ...] = ()

    @property
    def d0(self) -> int:
        return len(self.roots)

    @property
    def total_multiplicity(self) -> int:
        """Degree of Q0, i.e. the sum of the l_j."""
        return sum(l for _, l in self.roots)

    def q0(self) -> ComplexPoly:
        return ComplexPoly(poly_from_roots([t for t, l in self.roots for _ in range(l)]))

    def __bool__(self):
        return bool(self.roots)


@dataclass(frozen=True, eq=False)
class CompletionResult:
    q: ComplexPoly
    n_used: int
    defect: float
    tail_mass: float
    rootset: CircleRootSet
    sup_norm_p: float = float("nan")
    warnings: tuple[str, ...] = field(default=())


def validate_target(p: ComplexPoly, config: CompletionConfig | None = None) -> TargetPolynomial:
    """Check ``p_0 != 0`` and ``sup |p| <= 1`` on the circle."""
    p = p.canonical()
    if p.coeffs[0] == 0:
        raise ZeroConstantTerm(
            "p_0 = 0: divide out the z**k factor first (|z**k P| = |P| on the circle)"
        )
    sup = sup_norm_circle(p, 16 * (p.degree + 1))
    if sup > 1 + TAU_NORM:
        raise SupNormExceedsOne(f"sup |P| on the unit circle is {sup!r} > 1")
    return TargetPolynomial(p, sup, sup < 1 - DELTA_STRICT)


def _gap_polynomial(p: ComplexPoly) -> np.ndarray:
    """Coefficients of ``A(z) = z^d (1 - P(z) P*(1/z))``, degree 2d."""
    d = p.degree
    a = -np.convolve(p.coeffs, conjugate_reciprocal(p).coeffs)
    a[d] += 1
    return a


def _newton(c: np.ndarray, z: complex, iters: int = 60) -> complex:
    dc = npoly.polyder(c)
    for _ in range(iters):
        fp = npoly.polyval(z, dc)
        if fp == 0:
            break
        step = npoly.polyval(z, c) / fp
        z -= step
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    return z


def detect_circle_roots(
    target: TargetPolynomial, config: CompletionConfig | None = None
) -> CircleRootSet:
    """Roots of ``1 - |P|^2`` on the unit circle with half their multiplicity.

    Companion eigenvalues near the circle are clustered (a 2l-fold root splits
    by roughly eps**(1/2l)); each cluster of size m is re-located by Newton's
    method on the (m-1)-th derivative of A, where it is a simple root, and
    accepted when that point lies within ``tau_circle`` of the circle.
    """
    config = config or CompletionConfig()
    if target.strictly_contractive or target.degree == 0:
        return CircleRootSet()
    a = _gap_polynomial(target.poly)
    roots = companion_roots(a)
    radius = 10 * math.sqrt(config.tau_circle)
    cand = sorted((r for r in roots if abs(abs(r) - 1) < radius), key=np.angle)
    clusters: list[list[complex]] = []
    for r in cand:
        for cl in clusters:
            if min(abs(r - s) for s in cl) < radius:
                cl.append(r)
                break
        else:
            clusters.append([r])
    # the angular sort can split one cluster across the branch cut at -1
    merged: list[list[complex]] = []
    for cl in clusters:
        for other in merged:
            if min(abs(r - s) for r in cl for s in other) < radius:
                other.extend(cl)
                break
        else:
            merged.append(cl)

    found = []
    for cl in merged:
        m = len(cl)
        c = a
        for _ in range(m - 1):
            c = npoly.polyder(c)
        t = _newton(c, complex(np.mean(cl)))
        if abs(abs(t) - 1) >= config.tau_circle:
            continue
        if m % 2:
            raise OddCircleMultiplicity(
                f"cluster of {m} roots at {t:.6g} on the unit circle; multiplicity must be even"
            )
        found.append((complex(t / abs(t)), m // 2))
    found.sort(key=lambda tl: np.angle(tl[0]))
    return CircleRootSet(tuple(found))


class _Ratio:
    """Evaluates ``(1 - |P|^2) / |Q0|^2`` at points of the unit circle.

    With circle roots present, ``A`` is deflated by ``prod (z - t_j)**(2 l_j)``
    in coefficient space. On the circle ``|z - t|^2 = -conj(t) (z - t)^2 / z``,
    so the ratio equals ``B(z) z^(L-d) prod (-t_j)**l_j`` with B the quotient.
    """

    def __init__(self, target: TargetPolynomial, rootset: CircleRootSet):
        self.p = target.poly
        self.rootset = rootset
        self.d = target.degree
        if not rootset:
            self.b = None
            return
        a = _gap_polynomial(self.p)
        scale = np.abs(a).max()
        b = a
        for t, l in rootset.roots:
            for _ in range(2 * l):
                b, rem = synthetic_divide(b, t)
                if abs(rem) > DEFLATION_RTOL * scale:
                    raise NonPositiveRatio(
                        f"deflation by (z - {t:.6g}) left remainder {abs(rem):.3e}"
                    )
        self.b = b
        self.shift = rootset.total_multiplicity - self.d
        self.const = np.prod([(-t) ** l for t, l in rootset.roots])

    def at(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.b is None:
            return 1 - np.abs(evaluate_monomial(self.p, z)) ** 2
        return self._finish(evaluate_monomial(self.b, z) * z**self.shift * self.const)

    def on_grid(self, n: int) -> np.ndarray:
        if self.b is None:
            return 1 - np.abs(grid_values(self.p, n)) ** 2
        k = np.arange(n)
        twist = np.exp(2j * np.pi * ((k * self.shift) % n) / n)
        return self._finish(grid_values(self.b, n) * twist * self.const)

    @staticmethod
    def _finish(vals: np.ndarray) -> np.ndarray:
        resid = np.abs(vals.imag).max(initial=0.0)
        if resid > IMAG_RESIDUE_TOL * max(1.0, np.abs(vals.real).max(initial=0.0)):
            raise NonPositiveRatio(f"deflated ratio has imaginary residue {resid:.3e}")
        return vals.real


def ratio_on_grid(target: TargetPolynomial, rootset: CircleRootSet, n: int) -> UnitGridSamples:
    """Real grid values of ``(1 - |P|^2) / |Q0|^2`` at the n-th roots of unity."""
    if not is_power_of_two(n) or n < 8 * (target.degree + 1):
        raise ValueError(f"n must be a power of two >= 8*(d+1), got {n}")
    vals = _Ratio(target, rootset).on_grid(n)
    if np.any(vals <= 0):
        raise NonPositiveRatio(
            f"ratio has non-positive grid value {vals.min():.3e}; circle roots misdetected?"
        )
    return UnitGridSamples(n, vals)


def riesz_project(spectrum) -> np.ndarray:
    """Keep positive frequencies, halve frequency 0, drop negatives and Nyquist.

    ``spectrum`` is in numpy FFT order: index k holds frequency k for
    ``k < N/2`` and ``k - N`` otherwise.
    """
    s = np.array(spectrum, dtype=complex)
    n = s.size
    s[0] *= 0.5
    s[(n + 1) // 2 :] = 0
    return s


def defect(p: ComplexPoly, q: ComplexPoly, n_grid: int | None = None) -> float:
    """``max |1 - |P|^2 - |Q|^2|`` over an n_grid-point uniform grid on the circle."""
    d = max(p.degree, q.degree)
    if n_grid is None:
        n_grid = 16 * (d + 1)
    if n_grid < 4 * (d + 1):
        raise ValueError(f"n_grid must be >= 4*(degree+1) = {4 * (d + 1)}")
    return float(np.abs(1 - np.abs(grid_values(p, n_grid)) ** 2 - np.abs(grid_values(q, n_grid)) ** 2).max())


def defect_curve(p: ComplexPoly, q: ComplexPoly, n_grid: int, max_points: int = 1 << 16):
    """(theta, signed defect ``1 - |P|^2 - |Q|^2``) on a uniform grid.

    Large grids are decimated to at most ``max_points`` evenly spaced nodes.
    """
    step = max(1, -(-n_grid // max_points))
    theta = 2 * np.pi * np.arange(0, n_grid, step) / n_grid
    z = np.exp(1j * theta)
    return theta, 1 - np.abs(evaluate_monomial(p, z)) ** 2 - np.abs(evaluate_monomial(q, z)) ** 2


def _complete_at(target, rootset, ratio: _Ratio, n: int):
    """One pass of the Fourier construction on an n-point grid.

    Returns (q, tail_mass, defect on a 2n grid).
    """
    r = ratio.on_grid(n)
    if np.any(r <= 0):
        raise NonPositiveRatio(
            f"ratio has non-positive grid value {r.min():.3e}; circle roots misdetected?"
        )
    spec = riesz_project(np.fft.fft(np.log(r)))
    outer = np.exp(np.fft.ifft(spec))
    if rootset:
        outer = outer * grid_values(rootset.q0(), n)
    coeffs = np.fft.fft(outer) / n
    d = target.degree
    tail = float(np.linalg.norm(coeffs[d + 1 :]))
    q = ComplexPoly(coeffs[: d + 1])
    return q, tail, defect(target.poly, q, 2 * n)


def complete_fixed(
    target: TargetPolynomial, n: int, rootset: CircleRootSet | None = None
) -> CompletionResult:
    """Single-grid construction at exactly ``n`` points (no acceptance test)."""
    if rootset is None:
        rootset = detect_circle_roots(target)
    q, tail, dfc = _complete_at(target, rootset, _Ratio(target, rootset), n)
    return CompletionResult(q, n, dfc, tail, rootset, target.sup_norm)


def complete(
    target: TargetPolynomial,
    config: CompletionConfig | None = None,
    rootset: CircleRootSet | None = None,
) -> CompletionResult:
    """Complementary polynomial of ``target`` by grid doubling.

    Accepts the first grid size N whose spectral tail beyond degree d is at
    most ``tau_tail`` and whose defect on an independent 2N grid is at most
    ``tau_defect``. ``rootset`` overrides circle-root detection.
    """
    config = config or CompletionConfig()
    if rootset is None:
        rootset = (
            detect_circle_roots(target, config) if config.detect_circle_roots else CircleRootSet()
        )
    warnings = []
    if not rootset and target.sup_norm > 1 - NEAR_UNIMODULAR:
        warnings.append(
            f"near-unimodular target (sup |P| = {target.sup_norm!r}) without circle roots; "
            "grid size may grow large"
        )
    ratio = _Ratio(target, rootset)
    n = max(config.n_min, next_power_of_two(8 * (target.degree + 1)))
    best = None
    while n <= config.n_max:
        q, tail, dfc = _complete_at(target, rootset, ratio, n)
        best = CompletionResult(q, n, dfc, tail, rootset, target.sup_norm, tuple(warnings))
        log.debug("N=%d tail=%.3e defect=%.3e", n, tail, dfc)
        if tail <= config.tau_tail and dfc <= config.tau_defect:
            return best
        n *= 2
    raise NoConvergence(
        f"no grid size up to n_max={config.n_max} met tau_tail={config.tau_tail} "
        f"and tau_defect={config.tau_defect}",
        result=best,
    )


def normalize_phase(q: ComplexPoly) -> ComplexPoly:
    """Rotate ``q`` so its leading coefficient is real and positive."""
    lead = q.coeffs[-1]
    if lead == 0:
        return q
    return q.scaled(abs(lead) / lead)


def _kernel_nodes(m: int, offset: float = 0.0) -> np.ndarray:
    return np.exp(1j * (offset + 2 * np.pi * np.arange(m) / m))


def _szego_exponent(ratio: _Ratio, z: complex, m: int) -> complex:
    """Trapezoid rule for ``(1/4 pi i) oint (z'+z)/(z'-z) R(z') dz'/z'``."""
    w = _kernel_nodes(m)
    return complex(np.mean((w + z) / (w - z) * np.log(ratio.at(w))) / 2)


def eval_Q_interior(target, rootset: CircleRootSet, z: complex, m: int = 2048) -> complex:
    """Evaluate Q at ``|z| < 1`` from the interior integral representation."""
    z = complex(z)
    if abs(z) > 1 - 1e-3:
        raise ValueError("interior quadrature needs |z| <= 1 - 1e-3")
    ratio = _Ratio(target, rootset)
    q0 = evaluate_monomial(rootset.q0(), z) if rootset else 1.0
    return complex(q0 * np.exp(_szego_exponent(ratio, z, m)))


def eval_Q_boundary(target, rootset: CircleRootSet, theta: float, m: int = 2048) -> complex:
    """Evaluate Q at ``exp(i theta)`` via the principal-value representation.

    The singularity is subtracted: ``R(z') - R(z)`` replaces ``R(z')`` (the
    kernel alone has zero principal value) and nodes sit symmetrically at
    half-steps around ``theta``.
    """
    z = complex(np.exp(1j * theta))
    for t, _ in rootset.roots:
        if abs(z - t) <= 1e-6:
            raise ValueError(f"theta={theta} is within 1e-6 of the circle root {t}")
    ratio = _Ratio(target, rootset)
    r_z = float(np.log(ratio.at(z)))
    w = _kernel_nodes(m, theta + np.pi / m)
    pv = np.mean((w + z) / (w - z) * (np.log(ratio.at(w)) - r_z)) / 2
    q0 = evaluate_monomial(rootset.q0(), z) if rootset else 1.0
    return complex(q0 * np.exp(pv + 0.5 * r_z))


def eval_Q_exterior(target, rootset: CircleRootSet, z: complex, m: int = 2048) -> complex:
    """Evaluate Q at ``|z| > 1`` from the exterior integral representation."""
    z = complex(z)
    if abs(z) < 1 + 1e-3:
        raise ValueError("exterior quadrature needs |z| >= 1 + 1e-3")
    p = target.poly
    w = 1 / z
    gap = 1 - evaluate_monomial(p, z) * evaluate_monomial(np.conj(p.coeffs), w)
    q0_star = (
        np.prod([(w - np.conj(t)) ** l for t, l in rootset.roots]) if rootset else 1.0
    )
    if q0_star == 0:
        raise DivisionByZeroQ0(f"Q0*(1/z) vanishes at z={z}")
    ratio = _Ratio(target, rootset)
    return complex(gap / q0_star * np.exp(_szego_exponent(ratio, z, m)))


def _arg_step(q: ComplexPoly, radius: float, t0: float, t1: float, v0, v1, depth: int) -> float:
    step = float(np.angle(v1 / v0))
    if abs(step) < np.pi / 4 or depth > 60:
        return step
    tm = 0.5 * (t0 + t1)
    vm = evaluate_monomial(q, radius * np.exp(1j * tm))
    if abs(vm) == 0:
        raise NearZeroOnContour(f"q vanishes on the contour near theta={tm}")
    return _arg_step(q, radius, t0, tm, v0, vm, depth + 1) + _arg_step(
        q, radius, tm, t1, vm, v1, depth + 1
    )


def winding_number(q: ComplexPoly, radius: float, n_grid: int | None = None) -> int:
    """Number of roots of q inside ``|z| < radius`` by the argument principle.

    Grid steps whose phase increment exceeds pi/4 are bisected recursively so
    roots just outside the contour do not alias.
    """
    if n_grid is None:
        n_grid = max(1024, 16 * (q.degree + 1))
    theta = 2 * np.pi * np.arange(n_grid + 1) / n_grid
    vals = evaluate_monomial(q, radius * np.exp(1j * theta))
    if np.abs(vals).min() <= 1e-9:
        raise NearZeroOnContour(f"|q| = {np.abs(vals).min():.3e} on the contour r={radius}")
    total = 0.0
    for k in range(n_grid):
        total += _arg_step(q, radius, theta[k], theta[k + 1], vals[k], vals[k + 1], 0)
    return int(round(total / (2 * np.pi)))
