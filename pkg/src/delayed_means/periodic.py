"""Doubly 2π-periodic functions, uniform grids and the test corpus.

Functions are evaluated vectorised: ``f(x, y)`` broadcasts like a numpy
ufunc.  Every function object can also be sampled on a tensor grid shifted
by an arbitrary vector, which is what the shifted-difference norms need.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, EvaluationError

TWO_PI = 2.0 * np.pi

#: Seed used by ``trig_poly`` when the descriptor does not carry one.
DEFAULT_SEED = 7

CORPUS_NAMES = ("constant", "trig_poly", "lip_pair", "lip_mixed")


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Uniform half-open grid on [0, 2π)², node ``(i, j)`` at ``(2πi/n1, 2πj/n2)``."""

    n1: int
    n2: int

    def __post_init__(self):
        for name in ("n1", "n2"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or n < 8 or not _is_power_of_two(int(n)):
                raise ConfigurationError(f"grid {name}={n!r} must be a power of two >= 8")

    @classmethod
    def square(cls, n: int) -> "Grid2D":
        return cls(n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def x(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n1) / self.n1

    @property
    def y(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n2) / self.n2

    @property
    def step(self) -> tuple[float, float]:
        return (TWO_PI / self.n1, TWO_PI / self.n2)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")


@dataclass(frozen=True)
class SampledFunction2D:
    """Values of a function at the nodes of ``grid``; ``values[i, j] = f(x_i, y_j)``."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ConfigurationError(
                f"values shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise EvaluationError(f"non-finite sample at node ({i}, {j})")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __sub__(self, other: "SampledFunction2D") -> "SampledFunction2D":
        if other.grid != self.grid:
            raise ConfigurationError("cannot combine samples on different grids")
        return SampledFunction2D(self.grid, self.values - other.values)


class PeriodicFunction:
    """Base class for real functions on the torus.

    Subclasses implement ``__call__`` (pointwise, broadcasting) and may
    override :meth:`on_tensor` with something faster than a meshgrid.
    """

    label = "f"

    def __call__(self, x, y):
        raise NotImplementedError

    def on_tensor(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Values at every ``(xs[i], ys[j])``."""
        X, Y = np.meshgrid(np.asarray(xs, float), np.asarray(ys, float), indexing="ij")
        return np.asarray(self(X, Y), dtype=float)

    def sample_shifted(self, grid: Grid2D, z1: float, z2: float) -> np.ndarray:
        """Values of ``f(x_i + z1, y_j + z2)`` at the nodes of ``grid``."""
        return self.on_tensor(grid.x + z1, grid.y + z2)

    def __add__(self, other: "PeriodicFunction") -> "PeriodicFunction":
        return _Combination(((1.0, self), (1.0, other)))

    def __sub__(self, other: "PeriodicFunction") -> "PeriodicFunction":
        return _Combination(((1.0, self), (-1.0, other)))

    def __rmul__(self, scalar: float) -> "PeriodicFunction":
        return _Combination(((float(scalar), self),))


class _Combination(PeriodicFunction):
    def __init__(self, terms):
        self.terms = tuple(terms)
        self.label = " + ".join(f"{c:g}*{g.label}" for c, g in self.terms)

    def __call__(self, x, y):
        return sum(c * np.asarray(g(x, y), float) for c, g in self.terms)

    def on_tensor(self, xs, ys):
        return sum(c * g.on_tensor(xs, ys) for c, g in self.terms)

    def sample_shifted(self, grid, z1, z2):
        return sum(c * g.sample_shifted(grid, z1, z2) for c, g in self.terms)


@dataclass(frozen=True, eq=False)
class AnalyticPeriodicFunction(PeriodicFunction):
    """A closed-form function, 2π-periodic in each variable.

    ``evaluator`` must broadcast over numpy arrays.  ``tensor`` is an
    optional fast path for tensor-grid evaluation.  ``known_lip`` records
    the exponents (α, β) of a Lipschitz class the function is known to
    belong to.
    """

    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    label: str = "f"
    known_lip: Optional[tuple[float, float]] = None
    tensor: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = field(
        default=None, repr=False)

    def __call__(self, x, y):
        return self.evaluator(x, y)

    def on_tensor(self, xs, ys):
        if self.tensor is not None:
            return np.asarray(self.tensor(np.asarray(xs, float), np.asarray(ys, float)), float)
        return super().on_tensor(xs, ys)


def sample(f: PeriodicFunction, grid: Grid2D) -> SampledFunction2D:
    """Evaluate ``f`` at every node of ``grid``."""
    values = np.asarray(f.on_tensor(grid.x, grid.y), dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise EvaluationError(
            f"{f.label}: non-finite value at node ({i}, {j}) = "
            f"({grid.x[i]:.6g}, {grid.y[j]:.6g})")
    return SampledFunction2D(grid, values)


# Symmetrised differences used by the convolution form of the means.

def h_sum(f, x, y, t1, t2):
    """Four-point symmetric sum ``f(x±t1, y±t2)``."""
    return f(x + t1, y + t2) + f(x - t1, y + t2) + f(x + t1, y - t2) + f(x - t1, y - t2)


def phi(f, x, y, t1, t2):
    """Quarter of :func:`h_sum` minus the centre value."""
    return 0.25 * h_sum(f, x, y, t1, t2) - f(x, y)


def H_diff(f, x, z1, y, z2, t1, t2):
    """``phi`` at the centre shifted by ``(z1, z2)`` minus ``phi`` at ``(x, y)``."""
    return phi(f, x + z1, y + z2, t1, t2) - phi(f, x, y, t1, t2)


# Corpus

def _check_exponent(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 < value <= 1.0:
        raise ConfigurationError(f"{name} = {value} must lie in (0, 1]")
    return value


def _abs_sin_half(t, alpha):
    return np.abs(np.sin(0.5 * np.asarray(t, float))) ** alpha


def trig_poly_tables(d1: int, d2: int, seed: int = DEFAULT_SEED):
    """Coefficient tables ``(a, b, c, d)`` of the seeded ``trig_poly`` corpus member.

    Entries are drawn uniformly from [-1, 1] by ``numpy.random.default_rng(seed)``
    in the order a, b, c, d; entries multiplying ``sin 0`` are then zeroed.
    """
    if d1 < 0 or d2 < 0:
        raise ConfigurationError("trig_poly degrees must be non-negative")
    rng = np.random.default_rng(seed)
    a, b, c, d = (rng.uniform(-1.0, 1.0, size=(d1 + 1, d2 + 1)) for _ in range(4))
    b[0, :] = 0.0
    c[:, 0] = 0.0
    d[0, :] = 0.0
    d[:, 0] = 0.0
    return a, b, c, d


def _lambda_table(kmax, lmax):
    lam = np.ones((kmax + 1, lmax + 1))
    lam[0, :] *= 0.5
    lam[:, 0] *= 0.5
    return lam


def _trig_poly(d1: int, d2: int, seed: int) -> AnalyticPeriodicFunction:
    a, b, c, d = trig_poly_tables(d1, d2, seed)
    lam = _lambda_table(d1, d2)
    a, b, c, d = (lam * t for t in (a, b, c, d))
    kx = np.arange(d1 + 1)
    ly = np.arange(d2 + 1)

    def evaluator(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        cx, sx = np.cos(x[..., None] * kx), np.sin(x[..., None] * kx)
        cy, sy = np.cos(y[..., None] * ly), np.sin(y[..., None] * ly)
        return (np.einsum("...k,kl,...l->...", cx, a, cy)
                + np.einsum("...k,kl,...l->...", sx, b, cy)
                + np.einsum("...k,kl,...l->...", cx, c, sy)
                + np.einsum("...k,kl,...l->...", sx, d, sy))

    def tensor(xs, ys):
        cx, sx = np.cos(np.outer(xs, kx)), np.sin(np.outer(xs, kx))
        cy, sy = np.cos(np.outer(ys, ly)), np.sin(np.outer(ys, ly))
        return cx @ a @ cy.T + sx @ b @ cy.T + cx @ c @ sy.T + sx @ d @ sy.T

    return AnalyticPeriodicFunction(evaluator, f"trig_poly:{d1},{d2},{seed}", (1.0, 1.0), tensor)


def _lip(alpha: float, beta: float, label: str) -> AnalyticPeriodicFunction:
    def evaluator(x, y):
        return _abs_sin_half(x, alpha) + _abs_sin_half(y, beta)

    def tensor(xs, ys):
        return _abs_sin_half(xs, alpha)[:, None] + _abs_sin_half(ys, beta)[None, :]

    return AnalyticPeriodicFunction(evaluator, label, (alpha, beta), tensor)


def corpus(name: str, params: Sequence[float] = (), seed: Optional[int] = None) -> AnalyticPeriodicFunction:
    """Build a member of the built-in test corpus.

    ``constant [c]``, ``trig_poly [d1, d2(, seed)]``, ``lip_pair [α]`` and
    ``lip_mixed [α, β]``.  ``lip_pair(α)`` is ``|sin(x/2)|^α + |sin(y/2)|^α``.
    ``seed`` overrides the default seed of ``trig_poly`` when the parameter
    list does not carry one.
    """
    params = list(params)

    def need(count):
        if len(params) != count:
            raise ConfigurationError(f"corpus {name!r} takes {count} parameter(s), got {params}")

    if name == "constant":
        need(1)
        value = float(params[0])
        return AnalyticPeriodicFunction(
            lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, value),
            f"constant:{value:g}", (1.0, 1.0),
            lambda xs, ys: np.full((len(xs), len(ys)), value))
    if name == "trig_poly":
        if len(params) == 2:
            params.append(DEFAULT_SEED if seed is None else seed)
        need(3)
        d1, d2, s = (int(v) for v in params)
        if any(int(v) != float(v) for v in params):
            raise ConfigurationError(f"trig_poly parameters must be integers, got {params}")
        return _trig_poly(d1, d2, s)
    if name == "lip_pair":
        need(1)
        alpha = _check_exponent("alpha", params[0])
        return _lip(alpha, alpha, f"lip_pair:{alpha:g}")
    if name == "lip_mixed":
        need(2)
        alpha = _check_exponent("alpha", params[0])
        beta = _check_exponent("beta", params[1])
        return _lip(alpha, beta, f"lip_mixed:{alpha:g},{beta:g}")
    raise ConfigurationError(f"unknown corpus function {name!r}; expected one of {CORPUS_NAMES}")


def parse_corpus(descriptor: str, seed: Optional[int] = None) -> AnalyticPeriodicFunction:
    """Build a corpus function from text such as ``lip_pair:0.8`` or ``trig_poly:4,4,7``."""
    name, _, rest = descriptor.strip().partition(":")
    try:
        params = [float(v) for v in rest.split(",")] if rest.strip() else []
    except ValueError as exc:
        raise ConfigurationError(f"bad corpus descriptor {descriptor!r}") from exc
    return corpus(name.strip(), params, seed=seed)
