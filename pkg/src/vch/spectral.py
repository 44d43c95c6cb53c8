"""Fourier representation of periodic functions and linear spectral operators.

Conventions: a function f with period ``L`` (default 1) is stored by its
Fourier coefficients a_k = (1/L) * int_0^L f(x) exp(-2*pi*i*k*x/L) dx, so that
f(x) = sum_k a_k exp(2*pi*i*k*x/L).  Coefficients live in numpy FFT order for
indices k = 0..N/2-1, -N/2..-1.  With this normalization the Plancherel
identity reads  int_0^L |f|^2 dx = L * sum_k |a_k|^2.

Grid size N is even (powers of two preferred for FFT speed).  Nonlinear
products are formed in physical space and dealiased by the 2/3 rule: every
mode with |k| > N//3 is zeroed, which makes quadratic products alias-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpectralField",
    "FrequencyBand",
    "SobolevIndex",
    "SpectralError",
    "analyze",
    "from_coeffs",
    "from_function",
    "derivative",
    "helmholtz_inverse",
    "lp_project",
    "fractional_derivative",
    "multiply",
    "dealias",
    "norms",
    "l2_norm",
    "sup_norm",
    "besov_seminorm",
    "trilinear_integral_check",
    "dealias_limit",
]


class SpectralError(ValueError):
    """Configuration or usage error in the spectral layer."""


def dealias_limit(n_modes: int) -> int:
    """Largest retained wavenumber index under the 2/3 rule."""
    return n_modes // 3


@dataclass(frozen=True)
class SpectralField:
    """A real periodic function stored as complex Fourier coefficients.

    ``coeffs`` is a length-N complex array in numpy FFT order; ``period`` is
    the domain length (1.0 except in the large-box damped mode).  Instances
    are immutable; grid values are synthesized lazily and cached.
    """

    coeffs: np.ndarray
    period: float = 1.0
    _values_cache: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size == 0 or c.size % 2 != 0:
            raise SpectralError(
                f"coefficient array must be 1-d with even positive length, got shape {c.shape}"
            )
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n_modes(self) -> int:
        return self.coeffs.size

    @property
    def wavenumbers(self) -> np.ndarray:
        """Signed integer mode indices in FFT order."""
        n = self.n_modes
        return np.fft.fftfreq(n, d=1.0 / n)

    @property
    def xi(self) -> np.ndarray:
        """Physical frequencies k / period."""
        return self.wavenumbers / self.period

    @property
    def values(self) -> np.ndarray:
        """Real grid values at x_j = j * period / N (cached)."""
        if not self._values_cache:
            v = np.fft.ifft(self.coeffs * self.n_modes).real
            v.setflags(write=False)
            self._values_cache.append(v)
        return self._values_cache[0]

    @property
    def grid(self) -> np.ndarray:
        n = self.n_modes
        return np.arange(n) * (self.period / n)

    @property
    def mean(self) -> float:
        return float(self.coeffs[0].real)

    def coeff(self, k: int) -> complex:
        """Coefficient a_k by signed index."""
        n = self.n_modes
        if not -n // 2 <= k < n // 2:
            raise SpectralError(f"mode index {k} outside -{n // 2}..{n // 2 - 1}")
        return complex(self.coeffs[k % n])

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(coeffs, self.period)

    # small arithmetic surface for the integrator
    def __add__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.coeffs + other.coeffs, self.period)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.coeffs - other.coeffs, self.period)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.coeffs * scalar, self.period)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(-self.coeffs, self.period)


@dataclass(frozen=True)
class FrequencyBand:
    """The set of modes with lo <= |k| <= hi (hi may be math.inf)."""

    lo: int
    hi: float
    dyadic_index: int | None = None

    def __post_init__(self):
        if self.lo < 0:
            raise SpectralError(f"band lower edge must be nonnegative, got {self.lo}")
        if self.hi <= 0 or self.hi < self.lo:
            raise SpectralError(f"invalid band [{self.lo}, {self.hi}]")

    @classmethod
    def low_pass(cls, n: int) -> "FrequencyBand":
        """P_{<=n}: modes with |k| <= n."""
        return cls(0, n)

    @classmethod
    def high_pass(cls, n: int) -> "FrequencyBand":
        """P_{>n}: modes with |k| > n."""
        return cls(n + 1, math.inf)

    @classmethod
    def dyadic(cls, k: int) -> "FrequencyBand":
        """Dyadic block 2^(k-1) < |n| <= 2^(k+1)."""
        if k < 0:
            raise SpectralError(f"dyadic index must be nonnegative, got {k}")
        lo = (1 << (k - 1)) + 1 if k >= 1 else 1
        return cls(lo, 1 << (k + 1), dyadic_index=k)

    def mask(self, field_: SpectralField) -> np.ndarray:
        k = np.abs(field_.wavenumbers)
        return (k >= self.lo) & (k <= self.hi)


@dataclass(frozen=True)
class SobolevIndex:
    """Order s of the |d|^s operator and the H^s / Hdot^s norms."""

    s: float

    def __post_init__(self):
        if not math.isfinite(self.s):
            raise SpectralError(f"Sobolev order must be finite, got {self.s}")


def analyze(values: np.ndarray, period: float = 1.0) -> SpectralField:
    """Build a SpectralField from real samples on the uniform grid."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0 or v.size % 2 != 0:
        raise SpectralError(
            f"grid data must be 1-d with even positive length, got shape {v.shape}"
        )
    coeffs = np.fft.fft(v) / v.size
    return SpectralField(coeffs, period)


def from_coeffs(pairs: dict[int, complex], n_modes: int, period: float = 1.0) -> SpectralField:
    """Build a field from {signed index: coefficient}; Hermitian partner filled in."""
    c = np.zeros(n_modes, dtype=np.complex128)
    for k, a in pairs.items():
        c[k % n_modes] = a
        if k != 0 and -k % n_modes != k % n_modes and (-k) not in pairs:
            c[-k % n_modes] = np.conj(a)
    return SpectralField(c, period)


def from_function(f, n_modes: int, period: float = 1.0) -> SpectralField:
    """Sample a callable f(x) on the grid and analyze."""
    x = np.arange(n_modes) * (period / n_modes)
    return analyze(f(x), period)


def dealias(f: SpectralField) -> SpectralField:
    """Zero every mode with |k| > N//3 (2/3-rule) and the Nyquist mode."""
    kmax = dealias_limit(f.n_modes)
    c = np.where(np.abs(f.wavenumbers) > kmax, 0.0, f.coeffs)
    return f.with_coeffs(c)


def multiply(f: SpectralField, g: SpectralField) -> SpectralField:
    """Pointwise product formed in physical space, then dealiased."""
    return dealias(analyze(f.values * g.values, f.period))


def derivative(f: SpectralField, order: int = 1) -> SpectralField:
    """Spectral derivative of integer order: a_k -> (2*pi*i*xi_k)^order a_k."""
    if order < 1:
        raise SpectralError(f"derivative order must be a positive integer, got {order}")
    return f.with_coeffs(f.coeffs * (2j * np.pi * f.xi) ** order)


def helmholtz_inverse(f: SpectralField) -> SpectralField:
    """(1 - d^2/dx^2)^{-1}: a_k -> a_k / (1 + 4 pi^2 xi_k^2)."""
    return f.with_coeffs(f.coeffs / (1.0 + 4.0 * np.pi**2 * f.xi**2))


def lp_project(f: SpectralField, band: FrequencyBand) -> SpectralField:
    """Sharp Fourier truncation onto a frequency band."""
    return f.with_coeffs(np.where(band.mask(f), f.coeffs, 0.0))


def fractional_derivative(f: SpectralField, s: SobolevIndex | float) -> SpectralField:
    """|d|^s: a_k -> |2 pi xi_k|^s a_k for k != 0; the mean mode is dropped.

    Matches `derivative` at integer s (up to the phase), so H^1 norms built
    from either agree.
    """
    s = s.s if isinstance(s, SobolevIndex) else float(s)
    xi = 2.0 * np.pi * np.abs(f.xi)
    with np.errstate(divide="ignore"):
        w = np.where(xi > 0, xi**s, 0.0)
    return f.with_coeffs(f.coeffs * w)


def l2_norm(f: SpectralField) -> float:
    return math.sqrt(f.period * float(np.sum(np.abs(f.coeffs) ** 2)))


def sup_norm(f: SpectralField, oversample: int = 4) -> float:
    """Max of |f| on an oversampled grid (lower bound on the true sup)."""
    n = f.n_modes * oversample
    c = np.zeros(n, dtype=np.complex128)
    k = f.wavenumbers.astype(int)
    c[k % n] = f.coeffs
    return float(np.max(np.abs(np.fft.ifft(c * n))))


def norms(f: SpectralField, s: SobolevIndex | float) -> tuple[float, float, float]:
    """Return (L2, Hdot^s, H^s) norms.

    Hdot^s = (sum_{k!=0} |a_k|^2 |xi_k|^{2s})^{1/2} scaled by the period,
    H^s = (L2^2 + Hdot^s^2)^{1/2}.  Negative s requires a mean-zero field.
    """
    s = s.s if isinstance(s, SobolevIndex) else float(s)
    if s < 0 and abs(f.coeffs[0]) > 1e-13:
        raise SpectralError(
            f"negative-order norm undefined for nonzero mean (mean={f.coeffs[0]:.3e})"
        )
    l2 = l2_norm(f)
    hdot = l2_norm(fractional_derivative(f, s))
    return l2, hdot, math.sqrt(l2 * l2 + hdot * hdot)


def besov_seminorm(f: SpectralField, s: float = 2.0) -> tuple[float, dict[int, float]]:
    """sup over dyadic k of 2^{s k} * L2 mass of the block 2^{k-1} < |n| <= 2^{k+1}.

    Returns the sup and the full per-block table.
    """
    nmax = f.n_modes // 2 - 1
    table: dict[int, float] = {}
    k = 0
    while FrequencyBand.dyadic(k).lo <= nmax:
        block = l2_norm(lp_project(f, FrequencyBand.dyadic(k)))
        table[k] = 2.0 ** (s * k) * block
        k += 1
    return (max(table.values()) if table else 0.0, table)


def trilinear_integral_check(
    f: SpectralField, g: SpectralField, h: SpectralField
) -> tuple[float, float]:
    """Two routes to int f g h dx: oversampled grid quadrature and the
    Fourier double sum  sum_{m,k} f_m g_{-m-k} h_k  (as a full convolution).
    """
    n = f.n_modes
    # grid size large enough that a triple product of N/2-band-limited
    # factors is quadrature-exact
    m = 1
    while m < 3 * (n // 2) + 2:
        m *= 2

    def resample(u: SpectralField) -> np.ndarray:
        c = np.zeros(m, dtype=np.complex128)
        c[u.wavenumbers.astype(int) % m] = u.coeffs
        return np.fft.ifft(c * m).real

    quad = float(np.mean(resample(f) * resample(g) * resample(h)) * f.period)

    def centered(u: SpectralField) -> np.ndarray:
        return np.fft.fftshift(u.coeffs)

    # conv[i] holds sum over m1+m2 = i - n of f_{m1} g_{m2}
    conv = np.convolve(centered(f), centered(g))
    hs = centered(h)
    total = 0.0 + 0.0j
    half = n // 2
    for j, hk in enumerate(hs):
        q = -(j - half)  # coefficient of e^{2 pi i q x} in f*g pairs with h_{-q}
        idx = q + n
        if 0 <= idx < conv.size:
            total += conv[idx] * hk
    return quad, float(total.real) * f.period
