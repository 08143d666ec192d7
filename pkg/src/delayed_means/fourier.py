"""Double Fourier coefficients, λ weights and rectangular partial sums.

The real expansion is

    f ~ Σ_k Σ_l λ_{k,l} (a cos kx cos ly + b sin kx cos ly
                         + c cos kx sin ly + d sin kx sin ly)

with λ = 1/4, 1/2, 1 according to how many of k, l vanish and
a_{k,l} = π⁻² ∫∫ f(u,v) cos ku cos lv du dv (b, c, d likewise).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .periodic import Grid2D, PeriodicFunction, SampledFunction2D

SPECTRUM_FORMAT = "# delayed-means spectrum v1"


def lambda_weight(k: int, l: int) -> float:
    """Weight of the ``(k, l)`` term in the real double Fourier series."""
    if k < 0 or l < 0:
        raise ValueError(f"degrees must be non-negative, got ({k}, {l})")
    return 0.25 if k == 0 and l == 0 else 0.5 if k == 0 or l == 0 else 1.0


def lambda_table(kmax: int, lmax: int) -> np.ndarray:
    lam = np.ones((kmax + 1, lmax + 1))
    lam[0, :] *= 0.5
    lam[:, 0] *= 0.5
    return lam


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficient tables of shape ``(kmax+1, lmax+1)``.

    Entries multiplying ``sin 0`` (``b[0, :]``, ``c[:, 0]``, ``d[0, :]``,
    ``d[:, 0]``) are stored as computed but never enter any sum.
    """

    kmax: int
    lmax: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        shape = (self.kmax + 1, self.lmax + 1)
        for name in "abcd":
            table = np.array(getattr(self, name), dtype=float)
            if table.shape != shape:
                raise ConfigurationError(f"table {name} has shape {table.shape}, expected {shape}")
            if not np.all(np.isfinite(table)):
                raise ConfigurationError(f"table {name} has non-finite entries")
            table.setflags(write=False)
            object.__setattr__(self, name, table)

    def truncated(self, kmax: int, lmax: int) -> "FourierSpectrum":
        self._check_degree(kmax, lmax)
        cut = (slice(0, kmax + 1), slice(0, lmax + 1))
        return FourierSpectrum(kmax, lmax, self.a[cut], self.b[cut], self.c[cut], self.d[cut])

    def _check_degree(self, n, m):
        if n < 0 or m < 0:
            raise ConfigurationError(f"degrees must be non-negative, got ({n}, {m})")
        if n > self.kmax or m > self.lmax:
            raise ConfigurationError(
                f"degree ({n}, {m}) exceeds stored cutoff ({self.kmax}, {self.lmax})")

    def __add__(self, other: "FourierSpectrum") -> "FourierSpectrum":
        if (other.kmax, other.lmax) != (self.kmax, self.lmax):
            raise ConfigurationError("spectra have different cutoffs")
        return FourierSpectrum(self.kmax, self.lmax, self.a + other.a, self.b + other.b,
                               self.c + other.c, self.d + other.d)


def _check_cutoff(grid: Grid2D, kmax: int, lmax: int):
    if kmax < 0 or lmax < 0:
        raise ConfigurationError("cutoffs must be non-negative")
    if 2 * kmax >= grid.n1 or 2 * lmax >= grid.n2:
        raise ConfigurationError(
            f"cutoff ({kmax}, {lmax}) needs a grid finer than {2 * kmax + 1}x{2 * lmax + 1}, "
            f"got {grid.n1}x{grid.n2}")


def compute_spectrum(fs: SampledFunction2D, kmax: int, lmax: int) -> FourierSpectrum:
    """Fourier coefficients of sampled data up to degree ``(kmax, lmax)``.

    The integrals are taken with the rectangle rule on the periodic grid,
    evaluated through the FFT; the result is exact for trigonometric
    polynomials of coordinate degrees below ``n1/2`` and ``n2/2``.
    """
    grid = fs.grid
    _check_cutoff(grid, kmax, lmax)
    G = np.fft.fft2(fs.values) / (grid.n1 * grid.n2)
    k = np.arange(kmax + 1)[:, None]
    l = np.arange(lmax + 1)[None, :]
    plus = G[k, l]
    minus = G[k, (-l) % grid.n2]
    return FourierSpectrum(
        kmax, lmax,
        a=2.0 * (plus + minus).real,
        b=-2.0 * (plus + minus).imag,
        c=-2.0 * (plus - minus).imag,
        d=2.0 * (minus - plus).real,
    )


def partial_sum_eval(sp: FourierSpectrum, n: int, m: int, x: float, y: float) -> float:
    """Rectangular partial sum ``S_{n,m}`` at a single point."""
    sp._check_degree(n, m)
    k = np.arange(n + 1)
    l = np.arange(m + 1)
    cx, sx = np.cos(k * x), np.sin(k * x)
    cy, sy = np.cos(l * y), np.sin(l * y)
    lam = lambda_table(n, m)
    cut = (slice(0, n + 1), slice(0, m + 1))
    total = 0.0
    for table, u, v in ((sp.a, cx, cy), (sp.b, sx, cy), (sp.c, cx, sy), (sp.d, sx, sy)):
        total += float(u @ (lam * table[cut]) @ v)
    return total


def partial_sum_grid(sp: FourierSpectrum, n: int, m: int, grid: Grid2D) -> SampledFunction2D:
    """``S_{n,m}`` at every node, by direct summation over the real basis."""
    sp._check_degree(n, m)
    k = np.arange(n + 1)
    l = np.arange(m + 1)
    cx, sx = np.cos(np.outer(grid.x, k)), np.sin(np.outer(grid.x, k))
    cy, sy = np.cos(np.outer(grid.y, l)), np.sin(np.outer(grid.y, l))
    lam = lambda_table(n, m)
    cut = (slice(0, n + 1), slice(0, m + 1))
    values = (cx @ (lam * sp.a[cut]) @ cy.T + sx @ (lam * sp.b[cut]) @ cy.T
              + cx @ (lam * sp.c[cut]) @ sy.T + sx @ (lam * sp.d[cut]) @ sy.T)
    return SampledFunction2D(grid, values)


class TrigSeries(PeriodicFunction):
    """A real trigonometric polynomial held as complex exponential coefficients.

    ``coef[k + kmax, l + lmax]`` multiplies ``exp(i(kx + ly))``.  Shifts are
    exact (a phase factor), and sampling on a grid finer than twice the
    degree goes through an inverse FFT.
    """

    def __init__(self, coef: np.ndarray, label: str = "trig series"):
        coef = np.asarray(coef, dtype=complex)
        if coef.ndim != 2 or coef.shape[0] % 2 == 0 or coef.shape[1] % 2 == 0:
            raise ConfigurationError("coefficient array must have odd shape (2K+1, 2L+1)")
        self.coef = coef
        self.kmax = coef.shape[0] // 2
        self.lmax = coef.shape[1] // 2
        self.label = label

    @classmethod
    def from_spectrum(cls, sp: FourierSpectrum, multipliers: Optional[np.ndarray] = None,
                      label: str = "trig series") -> "TrigSeries":
        weight = lambda_table(sp.kmax, sp.lmax)
        if multipliers is not None:
            weight = weight * multipliers
        coef = np.zeros((2 * sp.kmax + 1, 2 * sp.lmax + 1), dtype=complex)
        k = np.arange(sp.kmax + 1)[:, None]
        l = np.arange(sp.lmax + 1)[None, :]
        for sx in (1, -1):
            for sy in (1, -1):
                term = 0.25 * weight * (sp.a - 1j * sx * sp.b - 1j * sy * sp.c - sx * sy * sp.d)
                # k = 0 or l = 0 land on the same index for both signs and add up
                np.add.at(coef, (sx * k + sp.kmax, sy * l + sp.lmax), term)
        return cls(coef, label)

    @classmethod
    def from_samples(cls, fs: SampledFunction2D, kmax: int, lmax: int,
                     label: str = "trig series") -> "TrigSeries":
        """Rectangle-rule coefficients of ``fs`` up to ``(kmax, lmax)``."""
        _check_cutoff(fs.grid, kmax, lmax)
        G = np.fft.fft2(fs.values) / (fs.grid.n1 * fs.grid.n2)
        rows = np.arange(-kmax, kmax + 1) % fs.grid.n1
        cols = np.arange(-lmax, lmax + 1) % fs.grid.n2
        return cls(G[np.ix_(rows, cols)], label)

    def scaled(self, table: np.ndarray, label: Optional[str] = None) -> "TrigSeries":
        """Multiply coefficient ``(±k, ±l)`` by ``table[k, l]``."""
        table = np.asarray(table, float)
        kk = np.abs(np.arange(-self.kmax, self.kmax + 1))
        ll = np.abs(np.arange(-self.lmax, self.lmax + 1))
        if table.shape[0] <= self.kmax or table.shape[1] <= self.lmax:
            padded = np.zeros((max(table.shape[0], self.kmax + 1), max(table.shape[1], self.lmax + 1)))
            padded[:table.shape[0], :table.shape[1]] = table
            table = padded
        return TrigSeries(self.coef * table[np.ix_(kk, ll)], label or self.label)

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        ex = np.exp(1j * x[..., None] * np.arange(-self.kmax, self.kmax + 1))
        ey = np.exp(1j * y[..., None] * np.arange(-self.lmax, self.lmax + 1))
        return np.einsum("...k,kl,...l->...", ex, self.coef, ey).real

    def on_tensor(self, xs, ys):
        ex = np.exp(1j * np.outer(np.asarray(xs, float), np.arange(-self.kmax, self.kmax + 1)))
        ey = np.exp(1j * np.outer(np.asarray(ys, float), np.arange(-self.lmax, self.lmax + 1)))
        return (ex @ self.coef @ ey.T).real

    def sample_shifted(self, grid: Grid2D, z1: float, z2: float) -> np.ndarray:
        if 2 * self.kmax >= grid.n1 or 2 * self.lmax >= grid.n2:
            return self.on_tensor(grid.x + z1, grid.y + z2)
        coef = self.coef
        if z1 or z2:
            coef = (coef * np.exp(1j * z1 * np.arange(-self.kmax, self.kmax + 1))[:, None]
                    * np.exp(1j * z2 * np.arange(-self.lmax, self.lmax + 1))[None, :])
        # half spectrum l >= 0 in FFT layout for irfft2
        half = np.zeros((grid.n1, grid.n2 // 2 + 1), dtype=complex)
        rows = np.arange(-self.kmax, self.kmax + 1) % grid.n1
        half[rows, :self.lmax + 1] = coef[:, self.lmax:]
        return np.fft.irfft2(half, s=grid.shape) * (grid.n1 * grid.n2)

    def sample(self, grid: Grid2D) -> SampledFunction2D:
        return SampledFunction2D(grid, self.sample_shifted(grid, 0.0, 0.0))


def format_spectrum_table(sp: FourierSpectrum) -> str:
    """Plain-text dump: a version header, then ``k l a b c d`` per line."""
    lines = [SPECTRUM_FORMAT, f"# kmax={sp.kmax} lmax={sp.lmax}", "k,l,a,b,c,d"]
    for k in range(sp.kmax + 1):
        for l in range(sp.lmax + 1):
            lines.append(f"{k},{l},{sp.a[k, l] + 0.0:.12g},{sp.b[k, l] + 0.0:.12g},"
                         f"{sp.c[k, l] + 0.0:.12g},{sp.d[k, l] + 0.0:.12g}")
    return "\n".join(lines) + "\n"


def parse_spectrum_table(text: str) -> FourierSpectrum:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != SPECTRUM_FORMAT:
        raise ConfigurationError("missing or unsupported spectrum header")
    rows = [ln.split(",") for ln in lines if not ln.startswith("#") and not ln.startswith("k,")]
    data = np.array([[float(v) for v in row] for row in rows])
    kmax, lmax = int(data[:, 0].max()), int(data[:, 1].max())
    tables = [np.zeros((kmax + 1, lmax + 1)) for _ in range(4)]
    for row in data:
        k, l = int(row[0]), int(row[1])
        for table, value in zip(tables, row[2:]):
            table[k, l] = value
    return FourierSpectrum(kmax, lmax, *tables)
