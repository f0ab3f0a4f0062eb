"""Dense polynomial containers, evaluation and basis conversions.

Two representations are used throughout the package:

* :class:`ComplexPoly` -- complex coefficients in the monomial basis,
  ``p(z) = c[0] + c[1] z + ... + c[d] z**d``.
* :class:`RealChebPoly` -- real coefficients in the Chebyshev-T basis on
  ``[-1, 1]``, ``p(x) = c[0] T_0(x) + ... + c[m] T_m(x)``.

Values on the unit circle are handled through :class:`UnitGridSamples`, which
stores samples at the N-th roots of unity ``exp(2j*pi*k/N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.fft

TRIM_TOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Polynomial with dense complex monomial coefficients, ascending order."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return evaluate_monomial(self, z)

    def __len__(self):
        return self.coeffs.size

    def __repr__(self):
        return f"ComplexPoly({self.coeffs.tolist()!r})"

    def canonical(self, tol: float = TRIM_TOL) -> "ComplexPoly":
        """Drop trailing coefficients with modulus ``<= tol``.

        The zero polynomial canonicalizes to ``[0]``.
        """
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        if nz.size == 0:
            return ComplexPoly([0.0])
        return ComplexPoly(self.coeffs[: nz[-1] + 1])

    def scaled(self, factor: complex) -> "ComplexPoly":
        return ComplexPoly(self.coeffs * factor)


@dataclass(frozen=True, eq=False)
class RealChebPoly:
    """Real polynomial in the Chebyshev-T basis on [-1, 1]."""

    cheb_coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.cheb_coeffs))
        if np.iscomplexobj(c):
            if np.any(c.imag != 0):
                raise ValueError("Chebyshev coefficients must be real")
            c = c.real
        c = c.astype(float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-D sequence")
        object.__setattr__(self, "cheb_coeffs", _frozen(c))

    @property
    def degree(self) -> int:
        return self.cheb_coeffs.size - 1

    def __call__(self, x):
        return evaluate_chebyshev(self, x)

    def __repr__(self):
        return f"RealChebPoly({self.cheb_coeffs.tolist()!r})"


@dataclass(frozen=True, eq=False)
class UnitGridSamples:
    """Samples at the roots of unity ``exp(2j*pi*k/n_points)``, k = 0..N-1."""

    n_points: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = int(self.n_points)
        if n < 1 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two, got {self.n_points}")
        v = np.asarray(self.values)
        if v.shape != (n,):
            raise ValueError(f"expected {n} samples, got shape {v.shape}")
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "values", _frozen(v))

    @property
    def thetas(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_points) / self.n_points

    def spectrum(self) -> np.ndarray:
        """Fourier coefficients in numpy FFT order (frequency k at index k mod N).

        ``values[j] = sum_k spectrum[k] * exp(2j*pi*j*k/N)``.
        """
        return np.fft.fft(self.values) / self.n_points

    @classmethod
    def from_spectrum(cls, spectrum) -> "UnitGridSamples":
        spectrum = np.asarray(spectrum)
        return cls(spectrum.size, np.fft.ifft(spectrum) * spectrum.size)

    @classmethod
    def from_poly(cls, p: ComplexPoly, n_points: int) -> "UnitGridSamples":
        return cls(n_points, grid_values(p, n_points))


def _coeff_array(p) -> np.ndarray:
    if isinstance(p, ComplexPoly):
        return p.coeffs
    if isinstance(p, RealChebPoly):
        return p.cheb_coeffs
    return np.asarray(p)


def evaluate_monomial(p: ComplexPoly | Sequence[complex], z):
    """Horner evaluation of a monomial-basis polynomial; ``z`` may be an array."""
    c = _coeff_array(p)
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, c[-1], dtype=complex)
    for ck in c[-2::-1]:
        acc = acc * z + ck
    return acc[()] if acc.ndim == 0 else acc


def evaluate_chebyshev(p: RealChebPoly | Sequence[float], x):
    """Clenshaw backward recurrence for ``sum_k c_k T_k(x)``.

    Valid for any real ``x``, including ``|x| > 1``.
    """
    c = _coeff_array(p)
    x = np.asarray(x, dtype=float)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for ck in c[:0:-1]:
        b1, b2 = 2 * x * b1 - b2 + ck, b1
    out = x * b1 - b2 + c[0]
    return out[()] if out.ndim == 0 else out


def conjugate_reciprocal(p: ComplexPoly) -> ComplexPoly:
    """Return ``z**d * conj(p(1/conj(z)))``: conjugated, reversed coefficients."""
    return ComplexPoly(np.conj(p.coeffs[::-1]))


def circle_lift(p: RealChebPoly) -> ComplexPoly:
    """Map ``p(x)`` on [-1, 1] to a degree-2m polynomial on the unit circle.

    Uses ``T_k(Re z) = (z**k + z**-k) / 2`` and multiplies by ``z**m`` so that
    ``|P(exp(i theta))| == |p(cos theta)|``.
    """
    c = p.cheb_coeffs
    m = c.size - 1
    out = np.zeros(2 * m + 1, dtype=complex)
    out[m] = c[0]
    out[m + 1 :] += c[1:] / 2
    out[:m] += c[:0:-1] / 2
    return ComplexPoly(out)


def chebyshev_nodes(m: int) -> np.ndarray:
    """The m+1 Chebyshev-Gauss nodes ``cos((j + 1/2) pi / (m + 1))``."""
    j = np.arange(m + 1)
    return np.cos((j + 0.5) * np.pi / (m + 1))


def chebyshev_interpolate(samples, m: int) -> RealChebPoly:
    """Chebyshev coefficients of the degree-m interpolant at Chebyshev-Gauss nodes.

    ``samples[j]`` must be the function value at ``chebyshev_nodes(m)[j]``.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (m + 1,):
        raise ValueError(f"expected {m + 1} samples for degree {m}, got {samples.shape}")
    c = scipy.fft.dct(samples, type=2) / (m + 1)
    c[0] /= 2
    return RealChebPoly(c)


def chebyshev_to_monomial(p: RealChebPoly) -> np.ndarray:
    """Monomial coefficients of a Chebyshev series (ill-conditioned for large degree)."""
    return np.polynomial.chebyshev.cheb2poly(p.cheb_coeffs)


def grid_values(p: ComplexPoly | Sequence[complex], n: int) -> np.ndarray:
    """Evaluate at ``exp(2j*pi*k/n)`` for k = 0..n-1 via one inverse FFT.

    Coefficients beyond index n-1 are folded (``z**n == 1`` on the grid).
    """
    c = _coeff_array(p).astype(complex)
    if c.size > n:
        folded = np.zeros(n, dtype=complex)
        np.add.at(folded, np.arange(c.size) % n, c)
        c = folded
    return np.fft.ifft(c, n) * n


def sup_norm_circle(p: ComplexPoly, n_grid: int | None = None) -> float:
    """Grid maximum of ``|p|`` on the unit circle, refined around the grid argmax.

    The result is a lower bound on the true supremum.
    """
    d = p.degree
    if n_grid is None:
        n_grid = 16 * (d + 1)
    if n_grid < 4 * (d + 1):
        raise ValueError(f"n_grid must be >= 4*(degree+1) = {4 * (d + 1)}")
    mod = np.abs(grid_values(p, n_grid))
    k = int(np.argmax(mod))
    best = float(mod[k])
    if d == 0:
        return best
    h = 2 * np.pi / n_grid
    _, val = golden_maximize(
        lambda t: np.abs(evaluate_monomial(p, np.exp(1j * t))), [k * h - h], [k * h + h]
    )
    return max(best, float(val[0]))


_INVPHI = (math.sqrt(5) - 1) / 2


def golden_maximize(f, lo, hi, iters: int = 60):
    """Golden-section search for maxima of ``f`` on many brackets at once.

    ``f`` must accept an array of abscissae. Returns (argmax, max) arrays.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        left = f1 >= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x2n = np.where(left, x1, lo + _INVPHI * (hi - lo))
        x1n = np.where(left, hi - _INVPHI * (hi - lo), x2)
        fnew = f(np.where(left, x1n, x2n))
        f1, f2 = np.where(left, fnew, f2), np.where(left, f1, fnew)
        x1, x2 = x1n, x2n
    xs = np.where(f1 >= f2, x1, x2)
    return xs, np.maximum(f1, f2)


def companion_roots(c: Sequence[complex]) -> np.ndarray:
    """Eigenvalues of the companion matrix of ``c`` (ascending coefficients)."""
    c = np.asarray(c, dtype=complex)
    d = c.size - 1
    if d < 1:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((d, d), dtype=complex)
    comp[1:, :-1] = np.eye(d - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(comp)


def poly_from_roots(roots: Sequence[complex], lead: complex = 1.0) -> np.ndarray:
    """Ascending coefficients of ``lead * prod(z - r)``."""
    out = np.array([lead], dtype=complex)
    for r in roots:
        out = np.concatenate([[0], out]) - np.concatenate([out * r, [0]])
    return out


def synthetic_divide(c: Sequence[complex], t: complex) -> tuple[np.ndarray, complex]:
    """Divide ``sum c_k z**k`` by ``(z - t)``; return (quotient, remainder)."""
    c = np.asarray(c, dtype=complex)
    d = c.size - 1
    if d == 0:
        return np.zeros(1, dtype=complex), complex(c[0])
    q = np.empty(d, dtype=complex)
    acc = c[-1]
    for k in range(d - 1, -1, -1):
        q[k] = acc
        acc = acc * t + c[k]
    return q, complex(acc)


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    return 1 << max(0, math.ceil(math.log2(max(n, 1))))
