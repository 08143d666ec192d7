"""Rate experiments: approximation error of a mean along a ladder of (m, n).

A config file is flat ``key = value`` text, ``#`` starts a comment and
unknown keys are rejected::

    function = lip_pair:0.8        # corpus descriptor
    mean = second                  # mean kind plus extra parameters, e.g. even:r=4,q=2
    ladder = 8, 16, 32, 64, 128    # m=n diagonal; "8x4" gives m=8, n=4
    omega = pow:0.8                # smoothness modulus of f
    v = pow:0.3                    # modulus of the Hölder norm; "none" = plain L_p norm
    p = 2                          # 1 <= p, or "inf"
    beta1 = 0                      # weight exponents
    beta2 = 0
    grid = 1024                    # evaluation grid for the norms
    spectrum_grid = 2048           # sampling grid for the Fourier coefficients
    seed = 7                       # seed for trig_poly corpus members
    output = results/holder_p2    # writes <output>.csv and <output>.summary.txt
    expect_slope = -0.5            # optional: also require the fitted slope ...
    slope_tolerance = 0.15         # ... to lie within this distance
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, EvaluationError
from .fourier import TrigSeries
from .means import MeanSpec, delayed_mean_multipliers, parse_mean_template
from .norms import (ModulusOfContinuity, NormSpec, PropertyCheck, grid_norm,
                    holder_seminorm, parse_modulus, ratio_monotone_check)
from .periodic import DEFAULT_SEED, Grid2D, parse_corpus, sample

log = logging.getLogger(__name__)

CONFIG_KEYS = ("function", "mean", "ladder", "omega", "v", "p", "beta1", "beta2", "grid",
               "spectrum_grid", "seed", "output", "expect_slope", "slope_tolerance")
REQUIRED_KEYS = ("function", "mean", "ladder", "omega", "v", "output")

#: Ratios below this are treated as exact reproduction by the ratio check.
RATIO_FLOOR = 1e-9


@dataclass(frozen=True)
class ExperimentConfig:
    function: str
    mean: str
    ladder: tuple[tuple[int, int], ...]
    omega: str
    v: Optional[str]
    output: str
    p: float = 2.0
    beta1: float = 0.0
    beta2: float = 0.0
    grid: int = 256
    spectrum_grid: Optional[int] = None
    seed: int = DEFAULT_SEED
    expect_slope: Optional[float] = None
    slope_tolerance: float = 0.15

    def __post_init__(self):
        if not self.ladder:
            raise ConfigurationError("ladder is empty")
        ms = [m for m, _ in self.ladder]
        ns = [n for _, n in self.ladder]
        if any(b <= a for a, b in zip(ms, ms[1:])) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigurationError(f"ladder must be strictly increasing in m and n: {self.ladder}")
        Grid2D.square(self.grid)
        Grid2D.square(self.spectrum_grid_size)
        self.norm_spec
        parse_modulus(self.omega)
        if self.v is not None:
            parse_modulus(self.v)
        kind, params = parse_mean_template(self.mean)
        limit = min(self.grid, self.spectrum_grid_size) // 2
        for m, n in self.ladder:
            bx, by = self.mean_at(m, n).band
            if max(bx, by) >= limit:
                raise ConfigurationError(
                    f"mean {self.mean_at(m, n)} has band ({bx}, {by}); grids of "
                    f"{self.grid} and {self.spectrum_grid_size} nodes allow degrees below {limit}")
        parse_corpus(self.function, seed=self.seed)

    @property
    def spectrum_grid_size(self) -> int:
        return self.spectrum_grid if self.spectrum_grid is not None else 2 * self.grid

    @property
    def norm_spec(self) -> NormSpec:
        return NormSpec(self.p, self.beta1, self.beta2)

    def mean_at(self, m: int, n: int) -> MeanSpec:
        kind, params = parse_mean_template(self.mean)
        return MeanSpec(kind, m, n, **params)


def _parse_ladder(text: str) -> tuple[tuple[int, int], ...]:
    ladder = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        m, sep, n = item.partition("x")
        try:
            ladder.append((int(m), int(n) if sep else int(m)))
        except ValueError as exc:
            raise ConfigurationError(f"bad ladder entry {item!r}") from exc
    return tuple(ladder)


def parse_config(text: str) -> ExperimentConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq:
            raise ConfigurationError(f"line {lineno}: expected key = value")
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    missing = [k for k in REQUIRED_KEYS if k not in raw]
    if missing:
        raise ConfigurationError(f"config is missing {', '.join(missing)}")

    def num(key, cast, default=None):
        if key not in raw:
            return default
        try:
            return cast(raw[key])
        except ValueError as exc:
            raise ConfigurationError(f"{key} = {raw[key]!r} is not a valid number") from exc

    return ExperimentConfig(
        function=raw["function"], mean=raw["mean"], ladder=_parse_ladder(raw["ladder"]),
        omega=raw["omega"], v=None if raw["v"] == "none" else raw["v"], output=raw["output"],
        p=num("p", float, 2.0), beta1=num("beta1", float, 0.0), beta2=num("beta2", float, 0.0),
        grid=num("grid", int, 256), spectrum_grid=num("spectrum_grid", int),
        seed=num("seed", int, DEFAULT_SEED), expect_slope=num("expect_slope", float),
        slope_tolerance=num("slope_tolerance", float, 0.15))


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


@dataclass
class RateRow:
    m: int
    n: int
    h1: float
    h2: float
    error: float
    bound: float
    ratio: float


@dataclass
class RateReport:
    label: str
    rows: list[RateRow]
    slope: float = math.nan
    intercept: float = math.nan
    r_squared: float = math.nan
    monotone: Optional[PropertyCheck] = None
    notes: list[str] = field(default_factory=list)
    config: Optional[ExperimentConfig] = None


def fit_loglog_slope(points: Sequence[tuple[float, float]]) -> tuple[float, float, float]:
    """Least-squares line through ``(log size, log error)``: ``(slope, intercept, r²)``."""
    if len(points) < 3:
        raise ValueError("need at least 3 points for a slope fit")
    pts = np.asarray(points, dtype=float)
    if np.any(pts <= 0):
        raise ValueError("sizes and errors must be positive")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def bound_value(spec: MeanSpec, omega: ModulusOfContinuity, v: Optional[ModulusOfContinuity],
                h1: float, h2: float) -> float:
    """``ω(h1)/v(h1) + ω(h2)/v(h2)``; even-type terms carry ``r/2`` and ``q/2``."""
    def part(h):
        return float(omega(h) / v(h)) if v is not None else float(omega(h))

    sx, sy = (spec.r / 2, spec.q / 2) if spec.kind == "even_type" else (1.0, 1.0)
    return sx * part(h1) + sy * part(h2)


def run_rate_experiment(cfg: ExperimentConfig) -> RateReport:
    """Error of the configured mean along the ladder, with bounds and a slope fit.

    The mean is computed from rectangle-rule coefficients on the spectrum
    grid and compared against the exact values of ``f`` on the evaluation
    grid, in ``||.||_p`` plus the Hölder seminorm for ``(v, v)``.
    """
    f = parse_corpus(cfg.function, seed=cfg.seed)
    omega = parse_modulus(cfg.omega)
    v = parse_modulus(cfg.v) if cfg.v is not None else None
    spec_norm = cfg.norm_spec
    grid = Grid2D.square(cfg.grid)
    report = RateReport(label=f"{cfg.function} {cfg.mean}", rows=[], config=cfg)
    if v is not None:
        report.monotone = ratio_monotone_check(omega, v)
        if not report.monotone.passed:
            msg = f"{report.monotone.name} is not non-decreasing: {report.monotone.detail}"
            log.warning(msg)
            report.notes.append(msg)

    means = [cfg.mean_at(m, n) for m, n in cfg.ladder]
    kx = max(s.band[0] for s in means)
    ky = max(s.band[1] for s in means)
    base = TrigSeries.from_samples(sample(f, Grid2D.square(cfg.spectrum_grid_size)), kx, ky)
    for spec in means:
        mu = delayed_mean_multipliers(spec, *spec.band).mu
        err_fn = base.scaled(mu, label=str(spec)) - f
        values = err_fn.sample_shifted(grid, 0.0, 0.0)
        error = grid_norm(values, grid, spec_norm)
        if v is not None:
            error += holder_seminorm(err_fn, v, v, spec_norm, grid=grid)
        h1, h2 = math.pi / spec.m, math.pi / spec.n
        bound = bound_value(spec, omega, v, h1, h2)
        row = RateRow(spec.m, spec.n, h1, h2, error, bound, error / bound)
        if not all(math.isfinite(x) for x in (row.error, row.bound, row.ratio)):
            raise EvaluationError(f"non-finite result in row m={spec.m}, n={spec.n}: {row}")
        log.info("m=%d n=%d error=%.6g bound=%.6g", spec.m, spec.n, error, bound)
        report.rows.append(row)

    points = [(r.m, r.error) for r in report.rows if r.error > 0]
    if len(points) >= 3:
        report.slope, report.intercept, report.r_squared = fit_loglog_slope(points)
    return report


@dataclass
class RatioCheck:
    passed: bool
    max_ratio: float
    limit: float


def theorem_ratio_check(report: RateReport) -> RatioCheck:
    """Boundedness of error/bound: max ratio <= 10 x median ratio.

    Ratios at or below :data:`RATIO_FLOOR` (exact reproduction) always pass.
    """
    ratios = np.array([r.ratio for r in report.rows])
    limit = max(10.0 * float(np.median(ratios)), RATIO_FLOOR)
    top = float(ratios.max())
    return RatioCheck(top <= limit, top, limit)


def slope_check(report: RateReport) -> Optional[bool]:
    cfg = report.config
    if cfg is None or cfg.expect_slope is None:
        return None
    return math.isfinite(report.slope) and abs(report.slope - cfg.expect_slope) <= cfg.slope_tolerance


def report_passed(report: RateReport) -> bool:
    return theorem_ratio_check(report).passed and slope_check(report) is not False


def _fmt(x: float) -> str:
    return format(x + 0.0, ".12g")


def format_csv(report: RateReport) -> str:
    lines = ["m,n,h1,h2,error,bound,ratio"]
    for r in report.rows:
        lines.append(",".join([str(r.m), str(r.n)] + [_fmt(x) for x in
                                                      (r.h1, r.h2, r.error, r.bound, r.ratio)]))
    return "\n".join(lines) + "\n"


def format_summary(report: RateReport) -> str:
    ratio = theorem_ratio_check(report)
    lines = [f"experiment: {report.label}"]
    cfg = report.config
    if cfg is not None:
        lines.append(f"norm: p={_fmt(cfg.p)} beta1={_fmt(cfg.beta1)} beta2={_fmt(cfg.beta2)} "
                     f"omega={cfg.omega} v={cfg.v or 'none'}")
    lines += [f"slope: {_fmt(report.slope)}", f"intercept: {_fmt(report.intercept)}",
              f"r_squared: {_fmt(report.r_squared)}",
              f"ratio_check: {'PASS' if ratio.passed else 'FAIL'} "
              f"(max ratio {_fmt(ratio.max_ratio)}, limit {_fmt(ratio.limit)})"]
    sc = slope_check(report)
    if sc is not None:
        lines.append(f"slope_check: {'PASS' if sc else 'FAIL'} "
                     f"(expected {_fmt(cfg.expect_slope)} +/- {_fmt(cfg.slope_tolerance)})")
    if report.monotone is not None:
        lines.append(f"ratio_monotone: {'PASS' if report.monotone.passed else 'FAIL'}")
    lines += [f"note: {n}" for n in report.notes]
    lines.append(f"result: {'PASS' if report_passed(report) else 'FAIL'}")
    return "\n".join(lines) + "\n"


def emit_report(report: RateReport, path_prefix) -> tuple[Path, Path]:
    """Write ``<prefix>.csv`` and ``<prefix>.summary.txt``."""
    if not report.rows:
        raise ConfigurationError("refusing to write an empty report")
    prefix = Path(path_prefix)
    csv_path = prefix.with_name(prefix.name + ".csv")
    summary_path = prefix.with_name(prefix.name + ".summary.txt")
    try:
        prefix.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(format_csv(report))
        summary_path.write_text(format_summary(report))
    except OSError as exc:
        raise OSError(f"cannot write report to {prefix}: {exc}") from exc
    return csv_path, summary_path


_SHARED = ("function", "ladder", "p", "beta1", "beta2", "grid", "spectrum_grid_size", "seed")


def compare_means(cfgs: Sequence[ExperimentConfig]) -> tuple[list[RateReport], str]:
    """Run several configs that differ only in mean/moduli; returns reports and a CSV table."""
    if not cfgs:
        raise ConfigurationError("nothing to compare")
    first = cfgs[0]
    for cfg in cfgs[1:]:
        for key in _SHARED:
            if getattr(cfg, key) != getattr(first, key):
                raise ConfigurationError(
                    f"configs disagree on {key}: {getattr(first, key)!r} vs {getattr(cfg, key)!r}")
    reports = [run_rate_experiment(cfg) for cfg in cfgs]
    header = ["m", "n"] + [cfg.mean for cfg in cfgs]
    if len(set(header)) != len(header):
        raise ConfigurationError("compared configs must use distinct means")
    lines = [",".join(header)]
    for i, (m, n) in enumerate(first.ladder):
        lines.append(",".join([str(m), str(n)] + [_fmt(rep.rows[i].error) for rep in reports]))
    return reports, "\n".join(lines) + "\n"


def format_compare_summary(cfgs: Sequence[ExperimentConfig], reports: Sequence[RateReport]) -> str:
    lines = [f"function: {cfgs[0].function}"]
    for cfg, rep in zip(cfgs, reports):
        ratio = theorem_ratio_check(rep)
        lines.append(f"{cfg.mean}: slope {_fmt(rep.slope)} r_squared {_fmt(rep.r_squared)} "
                     f"ratio_check {'PASS' if ratio.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


@dataclass
class KernelCheckRow:
    check: str
    value: float
    target: float
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


def kernel_check(m: int, n: int, quad_points: Optional[int] = None,
                 samples: int = 10_000, seed: int = 0) -> list[KernelCheckRow]:
    """Mass and combination identities of the kernels for one ``(m, n)``."""
    from .kernels import (even_type_kernel, fejer_kernel, kernel_mass_check,
                          midpoint_nodes, second_type_kernel)

    if m < 1 or n < 1:
        raise ConfigurationError("kernel-check needs m, n >= 1")
    q = quad_points or 8 * 5 * max(m, n)
    if q < 8 * 3 * max(m, n):
        raise ConfigurationError(f"--quad {q} too small, need >= {8 * 3 * max(m, n)}")
    rows = []
    target = m * n * math.pi ** 2 / 4
    mass = kernel_mass_check(m, n, q)
    rows.append(KernelCheckRow("second_type_mass", mass, target, abs(mass / target - 1), 1e-8))

    rng = np.random.default_rng(seed)
    t1 = rng.uniform(0.0, math.pi, samples)
    t2 = rng.uniform(0.0, math.pi, samples)
    combo = (9 * fejer_kernel(3 * m - 1, 3 * n - 1, t1, t2) - 3 * fejer_kernel(3 * m - 1, n - 1, t1, t2)
             - 3 * fejer_kernel(m - 1, 3 * n - 1, t1, t2) + fejer_kernel(m - 1, n - 1, t1, t2)) / 4
    second = second_type_kernel(m, n, t1, t2)
    rows.append(KernelCheckRow("fejer_combination", 0.0, 0.0,
                               float(np.max(np.abs(second - combo))), 1e-10))
    even = even_type_kernel(m, n, 2, 2, t1, t2)
    rows.append(KernelCheckRow("even_r2_q2_vs_second", 0.0, 0.0,
                               float(np.max(np.abs(even - second))), 1e-12))

    t = midpoint_nodes(q)
    T1, T2 = np.meshgrid(t, t, indexing="ij")
    h2 = (math.pi / q) ** 2
    fejer_mass = float(np.sum(fejer_kernel(m, n, T1, T2))) * h2
    rows.append(KernelCheckRow("fejer_mass", fejer_mass, math.pi ** 2 / 4,
                               abs(fejer_mass / (math.pi ** 2 / 4) - 1), 1e-8))
    for r, qq in ((2, 2), (4, 2)):
        if 8 * max((r + 1) * m, (qq + 1) * n) > 2 * q:
            continue
        # constants are reproduced: (1/π²) ∫∫ 4 K = 1
        unit = 4.0 * float(np.sum(even_type_kernel(m, n, r, qq, T1, T2))) * h2 / math.pi ** 2
        rows.append(KernelCheckRow(f"even_r{r}_q{qq}_constant", unit, 1.0, abs(unit - 1.0), 1e-8))
    return rows


def format_kernel_check(m: int, n: int, rows: Sequence[KernelCheckRow]) -> str:
    lines = [f"# kernel-check m={m} n={n}", "check,value,target,error,tolerance,status"]
    for r in rows:
        lines.append(",".join([r.check, _fmt(r.value), _fmt(r.target), _fmt(r.error),
                               _fmt(r.tolerance), "PASS" if r.passed else "FAIL"]))
    return "\n".join(lines) + "\n"
