"""Small-degree reference constructions for cross-checking the completion.

Everything here goes through explicit root finding and is independent of the
Fourier construction in :mod:`qspexact.completion`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooHigh, LeadingCoefficientZero, UnpairedRoots, ZeroPolynomial
from .polycore import ComplexPoly, companion_roots, conjugate_reciprocal, evaluate_monomial, poly_from_roots

MAX_ROOT_DEGREE = 32
MAX_ORACLE_DEGREE = 8
CIRCLE_TOL = 1e-6
PAIR_TOL = 1e-7


@dataclass(frozen=True)
class RootMultiset:
    roots: tuple[complex, ...]

    def expand(self, lead: complex = 1.0) -> np.ndarray:
        return poly_from_roots(self.roots, lead)

    def __len__(self):
        return len(self.roots)


def roots_via_companion(p: ComplexPoly) -> RootMultiset:
    """Companion-matrix eigenvalues of the monic normalisation, one Newton step each."""
    c = p.coeffs
    if p.degree > MAX_ROOT_DEGREE:
        raise DegreeTooHigh(f"degree {p.degree} exceeds {MAX_ROOT_DEGREE}")
    if abs(c[-1]) <= 1e-12:
        raise LeadingCoefficientZero("leading coefficient is (numerically) zero")
    monic = c / c[-1]
    dc = np.arange(1, monic.size) * monic[1:]
    out = []
    for r in companion_roots(monic):
        f, fp = evaluate_monomial(monic, r), evaluate_monomial(dc, r)
        if fp != 0:
            polished = r - f / fp
            if abs(evaluate_monomial(monic, polished)) < abs(f):
                r = polished
        out.append(complex(r))
    return RootMultiset(tuple(out))


def complementary_by_roots(target) -> ComplexPoly:
    """Complementary polynomial by factoring ``A(z) = z^d (1 - P(z) P*(1/z))``.

    Roots of A come in pairs ``(r, 1/conj(r))``; the factor outside the closed
    disk is kept, matching the outer factor produced by the Fourier
    construction. Roots on the circle (even multiplicity) contribute half of
    their copies. The scale is fixed at the grid point where ``1 - |P|^2`` is
    largest, and the phase makes ``Q(z) / Q0(z)`` real positive at ``z = 0``.
    """
    p = target.poly
    d = p.degree
    if d > MAX_ORACLE_DEGREE:
        raise DegreeTooHigh(f"oracle completion is limited to degree {MAX_ORACLE_DEGREE}")
    if d == 0:
        return ComplexPoly([np.sqrt(1 - abs(p.coeffs[0]) ** 2)])
    a = -np.convolve(p.coeffs, conjugate_reciprocal(p).coeffs)
    a[d] += 1
    roots = np.array(roots_via_companion(ComplexPoly(a)).roots)
    mod = np.abs(roots)
    inside = roots[mod < 1 - CIRCLE_TOL]
    outside = roots[mod > 1 + CIRCLE_TOL]
    circle = roots[np.abs(mod - 1) <= CIRCLE_TOL]

    if inside.size != outside.size or circle.size % 2:
        raise UnpairedRoots(
            f"{inside.size} roots inside, {outside.size} outside, {circle.size} on the circle"
        )
    mirrored = 1 / np.conj(inside)
    unused = list(outside)
    for r in mirrored:
        k = int(np.argmin([abs(r - s) for s in unused]))
        if abs(r - unused[k]) > PAIR_TOL * max(1.0, abs(r)):
            raise UnpairedRoots(f"root {1 / np.conj(r)} has no reciprocal partner")
        unused.pop(k)
    circle = circle[np.argsort(np.angle(circle))]
    # adjacent copies of a split 2l-fold circle root: keep every other one
    on_circle = [c / abs(c) for c in circle[::2]]

    q_monic = poly_from_roots(list(outside) + on_circle)
    theta = 2 * np.pi * np.arange(64 * (d + 1)) / (64 * (d + 1))
    z = np.exp(1j * theta)
    gap = 1 - np.abs(evaluate_monomial(p, z)) ** 2
    k = int(np.argmax(gap))
    scale = np.sqrt(gap[k]) / abs(evaluate_monomial(q_monic, z[k]))
    outer_at_zero = np.prod(-outside) if outside.size else 1.0
    phase = np.conj(outer_at_zero) / abs(outer_at_zero)
    return ComplexPoly(q_monic * scale * phase)


def align_phase(q1: ComplexPoly, q2: ComplexPoly) -> tuple[complex, float]:
    """Unit ``phase`` minimising ``sum |q1_k - phase q2_k|^2`` and the max residual."""
    c1, c2 = q1.coeffs, q2.coeffs
    if c1.size != c2.size:
        raise ValueError(f"degree mismatch: {q1.degree} vs {q2.degree}")
    if not np.any(c1) or not np.any(c2):
        raise ZeroPolynomial("cannot align the phase of a zero polynomial")
    s = np.sum(c1 * np.conj(c2))
    phase = s / abs(s) if s != 0 else 1.0 + 0j
    return complex(phase), float(np.abs(c1 - phase * c2).max())
