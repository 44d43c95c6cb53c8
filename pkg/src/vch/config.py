"""Experiment configuration: schema, parsing, validation, recipes.

Config files are line-oriented INI text.  Sections and keys:

    [simulation]
    mode = viscous | damped | inviscid_test
    resolution = 256              # grid size, power of two
    box_length = 1.0              # 32 is the usual damped-mode box
    dt = auto | 1e-3
    t_end = 10.0
    output_stride = 10            # steps between snapshots when dt is fixed
    snapshots = 50                # snapshot count when dt = auto

    [viscosity]
    a = 1 + 0.1*cos(2*pi*x)       # closed form, or "coeffs: k:re:im, ..."
    epsilon = 0.5
    delta = 0.05
    flag = small_lipschitz | second_derivative_bound | none

    [forcing]
    g = zero | <expression> | spectral_decay(A, p, seed, band)
    mean_zero = true
    mu = 0.0

    [initial]
    recipe = expr: sin(2*pi*x) | random_h1(B, seed) | localized(B, seed)

    [diagnostics]
    dyadic_k = 1,2,3,4,5
    tail_N = 2,4,8

    [ensemble]                    # presence marks an attractor-suite config
    ball_radius = 1, 10
    count = 8
    base_seed = 0
    t_end = 80
    sample_times = 60, 65, 70, 75, 80

Validation is exhaustive: every violation in the file is reported, not just
the first, and each semantic violation names the analytical hypothesis it
breaks.
"""

from __future__ import annotations

import configparser
import io
import re
from dataclasses import dataclass, field, replace

import numpy as np

from .operators import (
    ForcingTerm,
    Mode,
    ProfileError,
    StructuralFlag,
    ViscosityProfile,
    validate_profile,
)
from .spectral import SpectralField, analyze, dealias, dealias_limit, from_coeffs, norms

__all__ = [
    "SimulationConfig",
    "EnsembleSettings",
    "ConfigError",
    "parse_config",
    "parse_config_file",
    "build_initial",
    "random_h1_field",
    "localized_field",
    "evaluate_expression",
]

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Carries the full list of violations found in a config."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("config rejected:\n" + "\n".join(f"  - {v}" for v in violations))


@dataclass(frozen=True)
class EnsembleSettings:
    ball_radii: tuple[float, ...]
    count: int
    base_seed: int
    t_end: float
    sample_times: tuple[float, ...]

    @property
    def seeds(self) -> tuple[int, ...]:
        return tuple(self.base_seed + i for i in range(self.count))


@dataclass(frozen=True)
class SimulationConfig:
    mode: Mode
    resolution: int
    box_length: float
    dt: float | None
    t_end: float
    output_stride: int
    snapshots: int
    a_expr: str
    epsilon: float
    delta: float
    flag: StructuralFlag
    g_expr: str
    mean_zero: bool
    mu: float
    initial_recipe: str
    dyadic_ks: tuple[int, ...]
    tail_scales: tuple[float, ...]
    out_dir: str = "."
    formats: tuple[str, ...] = ("csv", "json")
    profile: ViscosityProfile | None = field(default=None, compare=False)
    forcing: ForcingTerm | None = field(default=None, compare=False)
    ensemble: EnsembleSettings | None = None

    def as_dict(self) -> dict:
        """Flat, serializable view embedded in every output file."""
        d = {
            "schema_version": SCHEMA_VERSION,
            "mode": self.mode.value,
            "resolution": self.resolution,
            "box_length": self.box_length,
            "dt": "auto" if self.dt is None else self.dt,
            "t_end": self.t_end,
            "output_stride": self.output_stride,
            "snapshots": self.snapshots,
            "a": self.a_expr,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "flag": self.flag.value,
            "g": self.g_expr,
            "mean_zero": self.mean_zero,
            "mu": self.mu,
            "initial": self.initial_recipe,
            "dyadic_k": list(self.dyadic_ks),
            "tail_N": list(self.tail_scales),
        }
        if self.forcing is not None:
            d["g_l2"] = self.forcing.g_l2
        if self.ensemble is not None:
            d["ensemble"] = {
                "ball_radius": list(self.ensemble.ball_radii),
                "count": self.ensemble.count,
                "base_seed": self.ensemble.base_seed,
                "t_end": self.ensemble.t_end,
                "sample_times": list(self.ensemble.sample_times),
            }
        return d


_SAFE_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "tanh": np.tanh,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "pi": np.pi,
}


def evaluate_expression(expr: str, n: int, period: float) -> SpectralField:
    """Evaluate a closed-form expression of x on the grid."""
    x = np.arange(n) * (period / n)
    namespace = dict(_SAFE_FUNCS)
    namespace["x"] = x
    namespace["L"] = period
    namespace["bump"] = lambda y, center=0.0, width=1.0: np.exp(-(((y - center) / width) ** 2))
    try:
        values = eval(expr, {"__builtins__": {}}, namespace)  # noqa: S307 - sandboxed names
    except Exception as exc:
        raise ConfigError([f"cannot evaluate expression {expr!r}: {exc}"]) from exc
    values = np.broadcast_to(np.asarray(values, dtype=float), (n,))
    return dealias(analyze(values, period))


def random_h1_field(
    B: float, seed: int, n: int, period: float = 1.0, decay: float = 1.51
) -> SpectralField:
    """Mean-zero rough sample with |c_k| ~ |k|^-decay, scaled to ||u||_H1 = B.

    Phases are drawn sequentially in k, so refining the grid with the same
    seed reproduces the shared low modes exactly.
    """
    rng = np.random.default_rng(seed)
    kmax = dealias_limit(n)
    pairs: dict[int, complex] = {}
    for k in range(1, kmax + 1):
        theta = rng.uniform(0.0, 2.0 * np.pi)
        pairs[k] = 0.5 * k ** (-decay) * np.exp(1j * theta)
    u = from_coeffs(pairs, n, period)
    _, _, h1 = norms(u, 1.0)
    return u * (B / h1)


def localized_field(B: float, seed: int, n: int, period: float) -> SpectralField:
    """Sum of a few random bumps near the box center, scaled to ||u||_H1 = B."""
    rng = np.random.default_rng(seed)
    x = np.arange(n) * (period / n)
    center = 0.5 * period
    values = np.zeros(n)
    for _ in range(3):
        c = center + rng.uniform(-0.125, 0.125) * period / 4.0
        w = rng.uniform(0.5, 1.2)
        amp = rng.uniform(-1.0, 1.0)
        values += amp * np.exp(-(((x - c) / w) ** 2))
    u = dealias(analyze(values, period))
    _, _, h1 = norms(u, 1.0)
    if h1 == 0:
        raise ConfigError([f"localized initial sample degenerate for seed {seed}"])
    return u * (B / h1)


_RECIPE_RE = re.compile(r"^(random_h1|localized)\(\s*([^,]+)\s*,\s*(\d+)\s*\)$")


def build_initial(config: SimulationConfig, seed_offset: int = 0) -> SpectralField:
    """Realize the initial-data recipe (deterministic given the seed)."""
    recipe = config.initial_recipe.strip()
    if recipe.startswith("expr:"):
        return evaluate_expression(recipe[5:].strip(), config.resolution, config.box_length)
    m = _RECIPE_RE.match(recipe)
    if not m:
        raise ConfigError([f"unknown initial-data recipe {recipe!r}"])
    kind, B, seed = m.group(1), float(m.group(2)), int(m.group(3)) + seed_offset
    if kind == "random_h1":
        return random_h1_field(B, seed, config.resolution, config.box_length)
    return localized_field(B, seed, config.resolution, config.box_length)


_SPECTRAL_DECAY_RE = re.compile(
    r"^spectral_decay\(\s*([^,]+)\s*,\s*([^,]+)\s*,\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)$"
)


def _build_forcing_field(expr: str, n: int, period: float) -> SpectralField:
    expr = expr.strip()
    if expr in ("zero", "0"):
        return from_coeffs({}, n, period)
    m = _SPECTRAL_DECAY_RE.match(expr)
    if m:
        amp, p, seed = float(m.group(1)), float(m.group(2)), int(m.group(3))
        band = int(m.group(4)) if m.group(4) else dealias_limit(n)
        band = min(band, dealias_limit(n))
        rng = np.random.default_rng(seed)
        pairs = {
            k: 0.5 * amp * k ** (-p) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
            for k in range(1, band + 1)
        }
        return from_coeffs(pairs, n, period)
    return evaluate_expression(expr, n, period)


def _get(cp, section, key, default=None):
    try:
        return cp.get(section, key)
    except (configparser.NoSectionError, configparser.NoOptionError):
        return default


def parse_config(text: str) -> SimulationConfig:
    """Parse and validate; raises ConfigError listing every violation found."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_file(io.StringIO(text))
    except configparser.Error as exc:
        raise ConfigError([f"syntax error: {exc}"]) from exc

    violations: list[str] = []

    def number(section, key, default, conv=float):
        raw = _get(cp, section, key)
        if raw is None:
            return default
        try:
            return conv(raw)
        except ValueError:
            violations.append(f"[{section}] {key} = {raw!r} is not a number")
            return default

    mode_raw = _get(cp, "simulation", "mode", "viscous")
    try:
        mode = Mode(mode_raw)
    except ValueError:
        violations.append(
            f"unknown mode {mode_raw!r} (expected viscous, damped or inviscid_test)"
        )
        mode = Mode.VISCOUS

    resolution = number("simulation", "resolution", 256, int)
    if resolution < 8 or resolution & (resolution - 1):
        violations.append(f"resolution must be a power of two >= 8, got {resolution}")
        resolution = 256
    box_length = number("simulation", "box_length", 32.0 if mode is Mode.DAMPED else 1.0)
    if box_length <= 0:
        violations.append(f"box_length must be positive, got {box_length}")
        box_length = 1.0

    dt_raw = _get(cp, "simulation", "dt", "auto")
    if dt_raw == "auto":
        dt = None
    else:
        try:
            dt = float(dt_raw)
            if dt <= 0:
                violations.append(f"dt must be positive, got {dt}")
                dt = None
        except ValueError:
            violations.append(f"dt = {dt_raw!r} is neither 'auto' nor a number")
            dt = None
    t_end = number("simulation", "t_end", 1.0)
    if t_end < 0:
        violations.append(f"t_end must be nonnegative, got {t_end}")
        t_end = 0.0
    output_stride = number("simulation", "output_stride", 1, int)
    snapshots = number("simulation", "snapshots", 50, int)

    a_expr = _get(cp, "viscosity", "a", "1")
    epsilon = number("viscosity", "epsilon", 0.5)
    delta = number("viscosity", "delta", 0.0)
    flag_raw = _get(cp, "viscosity", "flag", "none")
    try:
        flag = StructuralFlag(flag_raw)
    except ValueError:
        violations.append(f"unknown structural flag {flag_raw!r}")
        flag = StructuralFlag.NONE

    g_expr = _get(cp, "forcing", "g", "zero")
    mean_zero_raw = _get(cp, "forcing", "mean_zero", "true")
    mean_zero = mean_zero_raw.strip().lower() in ("1", "true", "yes", "on")
    mu = number("forcing", "mu", 0.0)
    if mu < 0:
        violations.append(f"damping coefficient mu must be nonnegative, got {mu}")
        mu = 0.0
    if mode is Mode.DAMPED and mu == 0:
        violations.append(
            "damped mode needs mu > 0: the whole-line proxy relies on the damping "
            "term for its absorbing ball"
        )

    initial_recipe = _get(cp, "initial", "recipe", "expr: 0*x")

    def int_list(raw):
        return tuple(int(v) for v in raw.replace(",", " ").split())

    def float_list(raw):
        return tuple(float(v) for v in raw.replace(",", " ").split())

    try:
        dyadic_ks = int_list(_get(cp, "diagnostics", "dyadic_k", ""))
    except ValueError:
        violations.append("diagnostics dyadic_k must be a list of integers")
        dyadic_ks = ()
    try:
        tail_scales = float_list(_get(cp, "diagnostics", "tail_N", ""))
    except ValueError:
        violations.append("diagnostics tail_N must be a list of numbers")
        tail_scales = ()

    out_dir = _get(cp, "output", "dir", ".")
    formats = tuple(
        f.strip() for f in _get(cp, "output", "format", "csv,json").split(",") if f.strip()
    )
    for f in formats:
        if f not in ("csv", "json"):
            violations.append(f"unknown output format {f!r} (expected csv or json)")

    ensemble = None
    if cp.has_section("ensemble"):
        try:
            radii = float_list(_get(cp, "ensemble", "ball_radius", "1"))
        except ValueError:
            violations.append("ensemble ball_radius must be a list of numbers")
            radii = (1.0,)
        count = number("ensemble", "count", 8, int)
        base_seed = number("ensemble", "base_seed", 0, int)
        e_t_end = number("ensemble", "t_end", t_end)
        raw_samples = _get(cp, "ensemble", "sample_times")
        if raw_samples:
            try:
                sample_times = float_list(raw_samples)
            except ValueError:
                violations.append("ensemble sample_times must be a list of numbers")
                sample_times = (e_t_end,)
        else:
            sample_times = tuple(e_t_end * q for q in (0.625, 0.75, 0.875, 1.0))
        if count < 1:
            violations.append(f"ensemble count must be >= 1, got {count}")
            count = 1
        bad = [s for s in sample_times if not 0 <= s <= e_t_end]
        if bad:
            violations.append(f"ensemble sample_times outside [0, t_end]: {bad}")
            sample_times = tuple(s for s in sample_times if 0 <= s <= e_t_end) or (e_t_end,)
        ensemble = EnsembleSettings(
            ball_radii=radii,
            count=count,
            base_seed=base_seed,
            t_end=e_t_end,
            sample_times=tuple(sorted(sample_times)),
        )

    # build the numeric objects, collecting semantic violations
    profile = None
    forcing = None
    try:
        a_field = evaluate_expression(a_expr, resolution, box_length)
    except ConfigError as exc:
        violations.extend(exc.violations)
        a_field = None
    if a_field is not None and epsilon > 0:
        try:
            profile = validate_profile(a_field, epsilon, delta, flag)
        except ProfileError as exc:
            violations.append(str(exc))
        if mode is Mode.DAMPED and flag is StructuralFlag.NONE and profile is not None:
            if profile.max_slope > delta * epsilon and profile.max_structural_excess > 0:
                violations.append(
                    "neither structural hypothesis for the damped attractor holds: "
                    f"max|a'| = {profile.max_slope:.6g} > delta*epsilon = "
                    f"{delta * epsilon:.6g} and max(a'' - 2a) = "
                    f"{profile.max_structural_excess:.6g} > 0"
                )
                profile = None
    elif epsilon <= 0:
        violations.append(
            f"coercivity hypothesis needs epsilon > 0, got epsilon = {epsilon}"
        )

    try:
        g_field = _build_forcing_field(g_expr, resolution, box_length)
    except ConfigError as exc:
        violations.extend(exc.violations)
        g_field = None
    if g_field is not None:
        g_mean = abs(g_field.coeffs[0])
        attractor_context = ensemble is not None and mode is Mode.VISCOUS
        if (mean_zero or attractor_context) and g_mean > 1e-14:
            violations.append(
                "forcing must have mean value zero (int g dx = 0): without it the "
                f"mean of u grows linearly and no bounded absorbing set exists; "
                f"got |mean(g)| = {g_mean:.3e}"
            )
        else:
            try:
                forcing = ForcingTerm(g=g_field, mean_zero=g_mean <= 1e-14, mu=mu)
            except ValueError as exc:
                violations.append(str(exc))

    config = SimulationConfig(
        mode=mode,
        resolution=resolution,
        box_length=box_length,
        dt=dt,
        t_end=t_end,
        output_stride=output_stride,
        snapshots=snapshots,
        a_expr=a_expr,
        epsilon=epsilon,
        delta=delta,
        flag=flag,
        g_expr=g_expr,
        mean_zero=mean_zero,
        mu=mu,
        initial_recipe=initial_recipe,
        dyadic_ks=dyadic_ks,
        tail_scales=tail_scales,
        out_dir=out_dir,
        formats=formats,
        profile=profile,
        forcing=forcing,
        ensemble=ensemble,
    )

    # initial data must be realizable; ensembles in viscous mode need mean-zero data
    try:
        u0 = build_initial(config)
        if (
            ensemble is not None
            and mode is Mode.VISCOUS
            and abs(u0.coeffs[0]) > 1e-12
        ):
            violations.append(
                "attractor-suite initial data must be mean-zero (the dynamics is "
                f"studied on the mean-zero subspace); got mean = {u0.mean:.3e}"
            )
    except ConfigError as exc:
        violations.extend(exc.violations)

    if violations:
        raise ConfigError(violations)
    return config


def parse_config_file(path: str) -> SimulationConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
