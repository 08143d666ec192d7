"""Closed-form kernels of the means and their convolution form.

All kernels here factor as ``g(t1) * g(t2)``.  Each kernel K is normalised
so that the mean equals ``π⁻² ∫₀^π∫₀^π h_{x,y}(t1, t2) K(t1, t2) dt1 dt2``;
in particular the second- and even-type kernels include their ``1/(mn)``.

The closed forms are 0/0 at t = 0.  Where ``|sin(t/2)| < 1e-8`` the
equivalent finite cosine sum is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .periodic import PeriodicFunction

SINGULAR_TOL = 1e-8

KERNEL_KINDS = ("fejer", "second_type", "even_type")


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    m: int
    n: int
    r: Optional[int] = None
    q: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ConfigurationError(f"unknown kernel kind {self.kind!r}")
        low = 0 if self.kind == "fejer" else 1
        if self.m < low or self.n < low:
            raise ConfigurationError(f"{self.kind} kernel requires m, n >= {low}")
        if self.kind == "even_type":
            for name in ("r", "q"):
                value = getattr(self, name)
                if value is None or value < 2 or value % 2:
                    raise ConfigurationError(f"{name} must be a positive even integer, got {value}")
        elif self.r is not None or self.q is not None:
            raise ConfigurationError("r and q apply to even_type kernels only")

    @property
    def frequency(self) -> int:
        """Highest cosine frequency present in either factor."""
        if self.kind == "fejer":
            return max(self.m, self.n) + 1
        if self.kind == "second_type":
            return 3 * max(self.m, self.n)
        return max((self.r + 1) * self.m, (self.q + 1) * self.n)

    def __call__(self, t1, t2):
        if self.kind == "fejer":
            return fejer_kernel(self.m, self.n, t1, t2)
        if self.kind == "second_type":
            return second_type_kernel(self.m, self.n, t1, t2)
        return even_type_kernel(self.m, self.n, self.r, self.q, t1, t2)

    def factors(self, t1, t2):
        if self.kind == "fejer":
            return _fejer_factor(self.m, t1), _fejer_factor(self.n, t2)
        r, q = (2, 2) if self.kind == "second_type" else (self.r, self.q)
        return _delayed_factor(self.m, r, t1), _delayed_factor(self.n, q, t2)


def _fejer_series(M: int, t: np.ndarray) -> np.ndarray:
    """``1/2 + Σ_{j=1}^{M} (1 - j/(M+1)) cos jt``."""
    j = np.arange(1, M + 1)
    return 0.5 + np.cos(np.multiply.outer(t, j)) @ (1.0 - j / (M + 1))


def _stable(t, closed, series):
    t = np.asarray(t, dtype=float)
    s = np.sin(0.5 * t)
    near = np.abs(s) < SINGULAR_TOL
    out = np.empty_like(t)
    far = ~near
    if np.any(far):
        out[far] = closed(t[far], s[far])
    if np.any(near):
        out[near] = series(t[near])
    return out if out.ndim else float(out)


def _fejer_factor(M: int, t):
    # 1 - cos((M+1)t) written as 2 sin² to avoid cancellation
    return _stable(
        t,
        lambda t, s: 2.0 * np.sin(0.5 * (M + 1) * t) ** 2 / ((M + 1) * (2.0 * s) ** 2),
        lambda t: _fejer_series(M, t))


def _delayed_factor(m: int, r: int, t):
    return _stable(
        t,
        lambda t, s: (2.0 * np.sin(0.5 * (r + 2) * m * t) * np.sin(0.5 * r * m * t)
                      / (r * m * (2.0 * s) ** 2)),
        lambda t: (1 + 1 / r) * _fejer_series((r + 1) * m - 1, t) - _fejer_series(m - 1, t) / r)


def fejer_kernel(m: int, n: int, t1, t2):
    """Double Fejér kernel ``F_{m,n}``; tends to ``(m+1)(n+1)/4`` at the origin."""
    return _fejer_factor(m, t1) * _fejer_factor(n, t2)


def s_product(m: int, n: int, t1, t2):
    """``sin 2m t1 · sin m t1 · sin 2n t2 · sin n t2``."""
    return np.sin(2 * m * t1) * np.sin(m * t1) * np.sin(2 * n * t2) * np.sin(n * t2)


def second_type_kernel(m: int, n: int, t1, t2):
    """``S(t1, t2) / (mn (4 sin(t1/2) sin(t2/2))²)`` with the stable branch near 0."""
    if m < 1 or n < 1:
        raise ConfigurationError("second-type kernel requires m, n >= 1")
    t1, t2 = np.broadcast_arrays(np.asarray(t1, float), np.asarray(t2, float))
    s1, s2 = np.sin(0.5 * t1), np.sin(0.5 * t2)
    near = (np.abs(s1) < SINGULAR_TOL) | (np.abs(s2) < SINGULAR_TOL)
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = s_product(m, n, t1, t2) / (m * n * (4.0 * s1 * s2) ** 2)
    if np.any(near):
        closed = np.where(near, _delayed_factor(m, 2, t1) * _delayed_factor(n, 2, t2), closed)
    return closed if np.ndim(closed) else float(closed)


def even_type_kernel(m: int, n: int, r: int, q: int, t1, t2):
    """Kernel of the even-type mean, ``L_{m,rm;n,qn} / (mn)``.

    ``L`` is ``(4/(rq)) sin((r+2)m t1/2) sin(rm t1/2) sin((q+2)n t2/2) sin(qn t2/2)
    / (4 sin(t1/2) sin(t2/2))²``; for ``r = q = 2`` this is the second-type kernel.
    """
    KernelSpec("even_type", m, n, r, q)
    return _delayed_factor(m, r, t1) * _delayed_factor(n, q, t2)


def midpoint_nodes(quad_points: int) -> np.ndarray:
    """Nodes ``(i + 1/2) π / Q`` of the midpoint rule on (0, π); none at 0."""
    return (np.arange(quad_points) + 0.5) * (np.pi / quad_points)


def convolve_mean(f: PeriodicFunction, spec: KernelSpec, x: float, y: float,
                  quad_points: Optional[int] = None) -> float:
    """Evaluate a mean at ``(x, y)`` through its kernel, by midpoint quadrature.

    Exact (up to rounding) for trigonometric polynomials of degree d once
    ``2 * quad_points > d + spec.frequency``.
    """
    need = 8 * spec.frequency
    if quad_points is None:
        quad_points = max(64, 2 * need)
    if quad_points < need:
        raise ConfigurationError(
            f"quad_points={quad_points} too small for {spec.kind} kernel, need >= {need}")
    t = midpoint_nodes(quad_points)
    g1, g2 = spec.factors(t, t)
    h = (f.on_tensor(x + t, y + t) + f.on_tensor(x - t, y + t)
         + f.on_tensor(x + t, y - t) + f.on_tensor(x - t, y - t))
    # (1/π²) Σ h K (π/Q)²
    return float(g1 @ h @ g2) / quad_points ** 2


def kernel_mass_check(m: int, n: int, quad_points: Optional[int] = None) -> float:
    """Midpoint-rule value of ``∫₀^π∫₀^π S / (4 sin(t1/2) sin(t2/2))²``; exact value ``mnπ²/4``."""
    if m < 1 or n < 1:
        raise ConfigurationError("kernel mass requires m, n >= 1")
    if quad_points is None:
        quad_points = 8 * 3 * max(m, n)
    t = midpoint_nodes(quad_points)
    T1, T2 = np.meshgrid(t, t, indexing="ij")
    values = m * n * second_type_kernel(m, n, T1, T2)
    return float(np.sum(values)) * (np.pi / quad_points) ** 2
