"""Cesàro and delayed arithmetic means as Fourier multipliers.

Each Cesàro mean σ_{M,N} scales coefficient (k, l) by
(1 - k/(M+1))₊ (1 - l/(N+1))₊.  The delayed means are fixed signed
combinations of four Cesàro means, so they are diagonal too.

Text form of a mean (used by the CLI)::

    cesaro:m=8,n=8
    delayed:m=8,k=16,n=8,l=16
    first:m=8,n=8
    second:m=8,n=8
    even:m=8,n=8,r=4,q=2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .fourier import FourierSpectrum, TrigSeries, partial_sum_grid
from .periodic import Grid2D, SampledFunction2D

KINDS = ("cesaro", "delayed_general", "first_type", "second_type", "even_type")

_SHORT = {"cesaro": "cesaro", "delayed_general": "delayed", "first_type": "first",
          "second_type": "second", "even_type": "even"}
_LONG = {v: k for k, v in _SHORT.items()}
_FIELDS = {"cesaro": ("m", "n"), "delayed_general": ("m", "k", "n", "l"),
           "first_type": ("m", "n"), "second_type": ("m", "n"),
           "even_type": ("m", "n", "r", "q")}


@dataclass(frozen=True)
class MeanSpec:
    """Parameters selecting one summation mean."""

    kind: str
    m: int
    n: int
    k: Optional[int] = None
    l: Optional[int] = None
    r: Optional[int] = None
    q: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown mean kind {self.kind!r}")
        for name in _FIELDS[self.kind]:
            value = getattr(self, name)
            if value is None or int(value) != value:
                raise ConfigurationError(f"{self.kind} mean needs integer {name}, got {value!r}")
        for name in ("k", "l", "r", "q"):
            if name not in _FIELDS[self.kind] and getattr(self, name) is not None:
                raise ConfigurationError(f"{self.kind} mean takes no parameter {name}")
        if self.m < 0 or self.n < 0:
            raise ConfigurationError("m and n must be non-negative")
        if self.kind == "delayed_general" and (self.k < 1 or self.l < 1):
            raise ConfigurationError("window lengths k and l must be >= 1")
        if self.kind in ("first_type", "second_type", "even_type") and (self.m < 1 or self.n < 1):
            raise ConfigurationError(f"{self.kind} mean requires m >= 1 and n >= 1")
        if self.kind == "even_type":
            for name in ("r", "q"):
                value = getattr(self, name)
                if value < 2 or value % 2:
                    raise ConfigurationError(f"{name} must be a positive even integer, got {value}")

    @classmethod
    def parse(cls, text: str) -> "MeanSpec":
        kind, params = _parse_text(text)
        missing = [f for f in _FIELDS[kind] if f not in params]
        if missing:
            raise ConfigurationError(f"mean {text!r} is missing {', '.join(missing)}")
        return cls(kind, **params)

    def __str__(self) -> str:
        body = ",".join(f"{name}={getattr(self, name)}" for name in _FIELDS[self.kind])
        return f"{_SHORT[self.kind]}:{body}"

    def with_indices(self, m: int, n: int) -> "MeanSpec":
        return MeanSpec(self.kind, m, n, self.k, self.l, self.r, self.q)

    @property
    def band(self) -> tuple[int, int]:
        """Highest degrees (x, y) with a non-zero multiplier."""
        terms = cesaro_terms(self)
        return max(t[1] for t in terms), max(t[2] for t in terms)

    @property
    def window(self) -> tuple[int, int, int, int]:
        """The equivalent delayed window ``(m, k, n, l)``; not defined for Cesàro."""
        if self.kind == "delayed_general":
            return self.m, self.k, self.n, self.l
        if self.kind == "first_type":
            return self.m, self.m, self.n, self.n
        if self.kind == "second_type":
            return self.m, 2 * self.m, self.n, 2 * self.n
        if self.kind == "even_type":
            return self.m, self.r * self.m, self.n, self.q * self.n
        raise ConfigurationError("Cesàro means have no delay window")


def _parse_text(text: str):
    head, _, rest = text.strip().partition(":")
    kind = _LONG.get(head.strip(), head.strip())
    if kind not in KINDS:
        raise ConfigurationError(f"unknown mean kind {head!r} in {text!r}")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in _FIELDS[kind]:
            raise ConfigurationError(f"bad parameter {item!r} for {_SHORT[kind]} mean")
        if key in params:
            raise ConfigurationError(f"duplicate parameter {key!r} in {text!r}")
        try:
            params[key] = int(value)
        except ValueError as exc:
            raise ConfigurationError(f"parameter {key} must be an integer, got {value!r}") from exc
    return kind, params


def parse_mean_template(text: str) -> tuple[str, dict]:
    """Parse a mean without its ``m, n`` (the ladder supplies them), e.g. ``even:r=4,q=2``."""
    kind, params = _parse_text(text)
    if "m" in params or "n" in params:
        raise ConfigurationError("a mean template must not fix m or n")
    missing = [f for f in _FIELDS[kind] if f not in params and f not in ("m", "n")]
    if missing:
        raise ConfigurationError(f"mean {text!r} is missing {', '.join(missing)}")
    return kind, params


def cesaro_terms(spec: MeanSpec) -> list[tuple[float, int, int]]:
    """The mean as ``[(weight, M, N), ...]`` meaning Σ weight · σ_{M,N}.

    Terms whose weight vanishes (window start 0) are dropped before any
    σ with a negative index would be formed.
    """
    m, n = spec.m, spec.n
    if spec.kind == "cesaro":
        return [(1.0, m, n)]
    if spec.kind == "first_type":
        return [(4.0, 2 * m - 1, 2 * n - 1), (-2.0, 2 * m - 1, n - 1),
                (-2.0, m - 1, 2 * n - 1), (1.0, m - 1, n - 1)]
    if spec.kind == "second_type":
        return [(9 / 4, 3 * m - 1, 3 * n - 1), (-3 / 4, 3 * m - 1, n - 1),
                (-3 / 4, m - 1, 3 * n - 1), (1 / 4, m - 1, n - 1)]
    if spec.kind == "even_type":
        r, q = spec.r, spec.q
        return [((1 + 1 / r) * (1 + 1 / q), m * (r + 1) - 1, n * (q + 1) - 1),
                (-(1 + 1 / r) / q, m * (r + 1) - 1, n - 1),
                (-(1 + 1 / q) / r, m - 1, n * (q + 1) - 1),
                (1 / (r * q), m - 1, n - 1)]
    k, l = spec.k, spec.l
    terms = [((1 + m / k) * (1 + n / l), m + k - 1, n + l - 1)]
    if n:
        terms.append((-(1 + m / k) * n / l, m + k - 1, n - 1))
    if m:
        terms.append((-(m / k) * (1 + n / l), m - 1, n + l - 1))
    if m and n:
        terms.append((m * n / (k * l), m - 1, n - 1))
    return terms


@dataclass(frozen=True)
class MultiplierTable:
    """Scale factors ``mu[k, l]`` applied to coefficient ``(k, l)``."""

    kmax: int
    lmax: int
    mu: np.ndarray


def _cesaro_factor(M: int, size: int) -> np.ndarray:
    return np.maximum(0.0, 1.0 - np.arange(size) / (M + 1))


def cesaro_multipliers(m: int, n: int, kmax: int, lmax: int) -> MultiplierTable:
    if m < 0 or n < 0:
        raise ConfigurationError("Cesàro indices must be non-negative")
    mu = np.outer(_cesaro_factor(m, kmax + 1), _cesaro_factor(n, lmax + 1))
    return MultiplierTable(kmax, lmax, mu)


def delayed_mean_multipliers(spec: MeanSpec, kmax: int, lmax: int) -> MultiplierTable:
    """Multipliers of any mean in the family, summed term by term."""
    mu = np.zeros((kmax + 1, lmax + 1))
    for weight, M, N in cesaro_terms(spec):
        mu += weight * cesaro_multipliers(M, N, kmax, lmax).mu
    return MultiplierTable(kmax, lmax, mu)


def _check_band(sp: FourierSpectrum, spec: MeanSpec):
    bx, by = spec.band
    if bx > sp.kmax or by > sp.lmax:
        raise ConfigurationError(
            f"mean {spec} needs a spectrum cutoff of at least ({bx}, {by}), "
            f"have ({sp.kmax}, {sp.lmax})")


def mean_series(sp: FourierSpectrum, spec: MeanSpec) -> TrigSeries:
    """The mean of the series ``sp`` as a trigonometric polynomial."""
    _check_band(sp, spec)
    table = delayed_mean_multipliers(spec, sp.kmax, sp.lmax)
    return TrigSeries.from_spectrum(sp, table.mu, label=str(spec))


def apply_mean(sp: FourierSpectrum, spec: MeanSpec, grid: Grid2D) -> SampledFunction2D:
    """Evaluate the mean of the Fourier series ``sp`` at the nodes of ``grid``."""
    return mean_series(sp, spec).sample(grid)


def windowed_average_oracle(sp: FourierSpectrum, m: int, k: int, n: int, l: int,
                            grid: Grid2D) -> SampledFunction2D:
    """Average of the partial sums ``S_{i,j}`` over the delay window, by brute force."""
    if k < 1 or l < 1 or m < 0 or n < 0:
        raise ConfigurationError("need m, n >= 0 and k, l >= 1")
    sp._check_degree(m + k - 1, n + l - 1)
    total = np.zeros(grid.shape)
    for i in range(m, m + k):
        for j in range(n, n + l):
            total += partial_sum_grid(sp, i, j, grid).values
    return SampledFunction2D(grid, total / (k * l))
