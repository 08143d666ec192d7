"""L_p norms, weighted norms, moduli of continuity and generalized Hölder norms.

Suprema over continuous shift parameters are replaced by maxima over finite
probe sets, so every seminorm returned here is a lower bound of the true
supremum.  Shifts are split into a whole number of grid steps (an exact
index rotation of the samples) and a sub-step remainder (evaluated
analytically by the function object).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .periodic import TWO_PI, Grid2D, PeriodicFunction, SampledFunction2D

DEFAULT_GRID = Grid2D(128, 128)
PROBE_COUNT = 1024


@dataclass(frozen=True)
class NormSpec:
    """Exponent ``p`` in [1, ∞] and weight exponents ``beta1, beta2 >= 0``."""

    p: float = 2.0
    beta1: float = 0.0
    beta2: float = 0.0

    def __post_init__(self):
        if not self.p >= 1:
            raise ConfigurationError(f"p = {self.p} must be >= 1")
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ConfigurationError(f"{name} = {value} must be finite and >= 0")

    @property
    def weighted(self) -> bool:
        return self.beta1 > 0 or self.beta2 > 0


def _lp(values: np.ndarray, p: float) -> float:
    if p < 1:
        raise ConfigurationError(f"p = {p} must be >= 1")
    a = np.abs(values)
    if math.isinf(p):
        return float(a.max())
    if p == 1:
        return float(a.mean())
    if p == 2:
        return float(np.sqrt(np.mean(a * a)))
    return float(np.mean(a ** p) ** (1.0 / p))


def lp_norm(fs: SampledFunction2D, p: float) -> float:
    """``((2π)⁻² ∫∫ |f|^p)^{1/p}`` by the rectangle rule; ``p = inf`` is the grid maximum."""
    return _lp(fs.values, p)


def sine_weight(grid: Grid2D, beta1: float, beta2: float) -> np.ndarray:
    """``|sin(x/2)|^β1 |sin(y/2)|^β2`` at the nodes."""
    return np.outer(np.abs(np.sin(0.5 * grid.x)) ** beta1, np.abs(np.sin(0.5 * grid.y)) ** beta2)


def grid_norm(values: np.ndarray, grid: Grid2D, spec: NormSpec) -> float:
    if not spec.weighted:
        return _lp(values, spec.p)
    # weight |sin|^{βp} inside the integral is |f·|sin|^β|^p
    return _lp(values * sine_weight(grid, spec.beta1, spec.beta2), spec.p)


def weighted_lp_norm(fs: SampledFunction2D, spec: NormSpec) -> float:
    """Norm with weight ``|sin(x/2)|^{β1 p} |sin(y/2)|^{β2 p}``, outer exponent ``1/p``."""
    return grid_norm(fs.values, fs.grid, spec)


# Moduli of continuity

@dataclass(frozen=True)
class ModulusOfContinuity:
    evaluator: Callable[[np.ndarray], np.ndarray]
    label: str

    def __call__(self, t):
        return self.evaluator(np.asarray(t, dtype=float))

    def scaled(self, factor: float) -> "ModulusOfContinuity":
        return ModulusOfContinuity(lambda t: factor * self.evaluator(t), f"{factor:g}*{self.label}")


_CUSTOM_MODULI: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "identity": lambda t: t,
    # t (1 + log(2π/t)), extended by 0 at the origin
    "log_lip": lambda t: np.where(t > 0, t * (1.0 + np.log(TWO_PI / np.where(t > 0, t, 1.0))), 0.0),
}


def register_modulus(name: str, evaluator: Callable[[np.ndarray], np.ndarray]) -> None:
    """Make ``custom:<name>`` available to :func:`parse_modulus`."""
    _CUSTOM_MODULI[name] = evaluator


def power_modulus(alpha: float) -> ModulusOfContinuity:
    if not alpha > 0:
        raise ConfigurationError(f"power modulus exponent must be > 0, got {alpha}")
    return ModulusOfContinuity(lambda t: np.abs(t) ** alpha, f"pow:{alpha:g}")


def parse_modulus(descriptor: str) -> ModulusOfContinuity:
    """``pow:<alpha>`` for ``t^alpha`` or ``custom:<name>`` for a registered function."""
    kind, _, arg = descriptor.strip().partition(":")
    if kind == "pow":
        try:
            alpha = float(arg)
        except ValueError as exc:
            raise ConfigurationError(f"bad exponent in modulus {descriptor!r}") from exc
        return power_modulus(alpha)
    if kind == "custom":
        if arg not in _CUSTOM_MODULI:
            raise ConfigurationError(f"no registered modulus named {arg!r}")
        return ModulusOfContinuity(_CUSTOM_MODULI[arg], f"custom:{arg}")
    raise ConfigurationError(f"unknown modulus descriptor {descriptor!r}")


@dataclass
class PropertyCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ModulusReport:
    label: str
    checks: list[PropertyCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> PropertyCheck:
        return next(c for c in self.checks if c.name == name)

    def format(self) -> str:
        lines = [f"modulus {self.label}"]
        for c in self.checks:
            lines.append(f"{c.name:<14} {'PASS' if c.passed else 'FAIL'}  {c.detail}".rstrip())
        lines.append(f"overall        {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def modulus_validate(omega: ModulusOfContinuity, tol: float = 1e-12) -> ModulusReport:
    """Probe the defining properties of a modulus of continuity.

    ``zero``: ω(0) = 0.  ``monotone``: non-negative and non-decreasing on
    a 1024-point grid of [0, 2π].  ``continuity``: the largest jump between
    neighbouring probes shrinks under 16x refinement (a discontinuity would
    not).  ``subadditive``: ω(δ1+δ2) <= ω(δ1)+ω(δ2) on a 64x64 grid of
    [0, π]² plus the anchors 0.5, 1, 2.  ``dilation``: ω(λδ) <= (λ+1)ω(δ).
    """
    report = ModulusReport(omega.label)

    w0 = float(omega(0.0))
    report.checks.append(PropertyCheck("zero", abs(w0) <= tol, f"omega(0)={w0:.6g}"))

    t = np.linspace(0.0, TWO_PI, PROBE_COUNT)
    w = omega(t)
    finite = np.all(np.isfinite(w))
    bad = np.flatnonzero((w < -tol) | np.r_[False, np.diff(w) < -tol]) if finite else [0]
    report.checks.append(PropertyCheck(
        "monotone", finite and len(bad) == 0,
        "" if finite and len(bad) == 0 else f"fails at t={t[bad[0]]:.6g}"))

    fine = omega(np.linspace(0.0, TWO_PI, 16 * (PROBE_COUNT - 1) + 1))
    coarse_jump = float(np.max(np.abs(np.diff(w)))) if finite else math.inf
    fine_jump = float(np.max(np.abs(np.diff(fine)))) if finite else math.inf
    continuous = finite and (coarse_jump <= tol or fine_jump < 0.9 * coarse_jump)
    report.checks.append(PropertyCheck(
        "continuity", continuous, f"max jump {coarse_jump:.3g} -> {fine_jump:.3g} on refinement"))

    d = np.union1d(np.linspace(0.0, np.pi, 64), [0.5, 1.0, 2.0])
    D1, D2 = np.meshgrid(d, d, indexing="ij")
    excess = omega(D1 + D2) - omega(D1) - omega(D2)
    worst = np.unravel_index(np.argmax(excess), excess.shape)
    ok = bool(np.all(excess <= tol))
    report.checks.append(PropertyCheck(
        "subadditive", ok, "" if ok else
        f"fails at delta1={d[worst[0]]:.6g}, delta2={d[worst[1]]:.6g}: "
        f"{float(omega(D1[worst] + D2[worst])):.6g} > "
        f"{float(omega(D1[worst]) + omega(D2[worst])):.6g}"))

    lams = np.array([0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0])
    d = np.linspace(0.0, TWO_PI, 64)
    L, D = np.meshgrid(lams, d, indexing="ij")
    valid = L * D <= TWO_PI
    excess = np.where(valid, omega(L * D) - (L + 1) * omega(D), -np.inf)
    ok = bool(np.all(excess <= tol))
    worst = np.unravel_index(np.argmax(excess), excess.shape)
    report.checks.append(PropertyCheck(
        "dilation", ok, "" if ok else f"fails at lambda={lams[worst[0]]:g}, delta={d[worst[1]]:.6g}"))
    return report


def ratio_monotone_check(omega: ModulusOfContinuity, v: ModulusOfContinuity,
                         tol: float = 1e-12) -> PropertyCheck:
    """Whether ``omega(t)/v(t)`` is non-decreasing on 1024 probes of (0, 2π]."""
    t = np.linspace(TWO_PI / PROBE_COUNT, TWO_PI, PROBE_COUNT)
    vt = v(t)
    if np.any(vt <= 0):
        raise DomainError(f"{v.label} vanishes at t={t[np.argmax(vt <= 0)]:.6g}")
    ratio = omega(t) / vt
    drops = np.flatnonzero(np.diff(ratio) < -tol * np.maximum(1.0, np.abs(ratio[:-1])))
    name = f"{omega.label}/{v.label}"
    if len(drops):
        i = drops[0]
        return PropertyCheck(name, False, f"decreases between t={t[i]:.6g} and t={t[i + 1]:.6g}")
    return PropertyCheck(name, True, "non-decreasing")


# Shifted differences

def default_shift_set(octaves: int = 20) -> list[tuple[float, float]]:
    """Shifts ``(a, b)`` and ``(a, -b)`` for ``a, b`` in ``{2π·2^-j : j = 1..octaves}``.

    On a grid of ``2^J`` nodes the shifts with ``j <= J`` are whole grid
    steps; the finer ones resolve the behaviour near zero.
    """
    s = [TWO_PI * 2.0 ** -j for j in range(1, octaves + 1)]
    return [(a, sign * b) for a in s for b in s for sign in (1.0, -1.0)]


def _split(z: float, step: float, n: int) -> tuple[int, float]:
    q = z / step
    i = round(q)
    if abs(q - i) <= 1e-9 * max(1.0, abs(q)):
        return i % n, 0.0
    i = math.floor(q)
    return i % n, z - i * step


def shift_difference_norms(f: PeriodicFunction, grid: Grid2D, spec: NormSpec,
                           shifts: Sequence[tuple[float, float]]) -> np.ndarray:
    """``||f(·+z1, ·+z2) - f||`` for every shift, in the order given."""
    base = f.sample_shifted(grid, 0.0, 0.0)
    weight = sine_weight(grid, spec.beta1, spec.beta2) if spec.weighted else None
    dx, dy = grid.step
    groups: dict[tuple[float, float], list[tuple[int, int, int]]] = {}
    for idx, (z1, z2) in enumerate(shifts):
        i1, r1 = _split(z1, dx, grid.n1)
        i2, r2 = _split(z2, dy, grid.n2)
        groups.setdefault((r1, r2), []).append((idx, i1, i2))
    out = np.empty(len(shifts))
    for (r1, r2), members in groups.items():
        frac = base if r1 == 0.0 and r2 == 0.0 else f.sample_shifted(grid, r1, r2)
        for idx, i1, i2 in members:
            diff = np.roll(frac, (-i1, -i2), axis=(0, 1)) - base
            if weight is not None:
                diff *= weight
            out[idx] = _lp(diff, spec.p)
    return out


def _shift_list(shift_set: Optional[Iterable[tuple[float, float]]]) -> list[tuple[float, float]]:
    shifts = default_shift_set() if shift_set is None else [(float(a), float(b)) for a, b in shift_set]
    if not shifts:
        raise DomainError("shift set is empty")
    return shifts


def holder_seminorm(f: PeriodicFunction, omega1: ModulusOfContinuity,
                    omega2: ModulusOfContinuity, spec: NormSpec = NormSpec(),
                    shift_set: Optional[Iterable[tuple[float, float]]] = None,
                    grid: Optional[Grid2D] = None) -> float:
    """Max over the shift set of ``||f(·+z) - f|| / (omega1(|z1|) + omega2(|z2|))``.

    Both shift coordinates must be non-zero.  The result is a lower bound
    of the supremum over all such shifts.
    """
    shifts = _shift_list(shift_set)
    for z1, z2 in shifts:
        if z1 == 0 or z2 == 0:
            raise DomainError(f"shift ({z1}, {z2}) has a zero coordinate")
    grid = grid or DEFAULT_GRID
    diffs = shift_difference_norms(f, grid, spec, shifts)
    z = np.abs(np.array(shifts))
    denom = omega1(z[:, 0]) + omega2(z[:, 1])
    return float(np.max(diffs / denom))


def holder_norm(f: PeriodicFunction, omega1: ModulusOfContinuity,
                omega2: ModulusOfContinuity, spec: NormSpec = NormSpec(),
                shift_set: Optional[Iterable[tuple[float, float]]] = None,
                grid: Optional[Grid2D] = None) -> float:
    """Norm plus Hölder seminorm (weighted when ``spec`` has positive betas)."""
    grid = grid or DEFAULT_GRID
    base = f.sample_shifted(grid, 0.0, 0.0)
    return (grid_norm(base, grid, spec)
            + holder_seminorm(f, omega1, omega2, spec, shift_set, grid))


def integral_modulus(f: PeriodicFunction, delta1: float, delta2: float, p: float,
                     probe_count: int = 33, grid: Optional[Grid2D] = None) -> float:
    """Max of ``||f(·+h1, ·+h2) - f||_p`` over a lattice of ``0 <= h_i <= delta_i``."""
    for name, delta in (("delta1", delta1), ("delta2", delta2)):
        if not 0.0 <= delta <= TWO_PI:
            raise DomainError(f"{name} = {delta} outside [0, 2π]")
    grid = grid or DEFAULT_GRID
    h1 = np.linspace(0.0, delta1, probe_count)
    h2 = np.linspace(0.0, delta2, probe_count)
    shifts = [(a, b) for a in h1 for b in h2]
    return float(np.max(shift_difference_norms(f, grid, NormSpec(p), shifts)))
