"""Experiment configuration: flat key-value text with [section] headers.

Parsed with configparser; the schema is documented in the README.  Variant
sections ([variant.<label>]) inherit the [problem]/[plan] defaults and may
override scheme, corrector, targets, horizons, and forcing per variant.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .errors import ConfigurationError

_EQUATIONS = ("advection", "burgers", "burgers_forced",
              "burgers_nonconservative", "dg_burgers", "euler2d", "euler1d")
_ICS = ("sine", "sum_of_sines", "sod", "random_vorticity", "random_euler")
_SCHEMES = ("centered", "upwind", "godunov", "lax_friedrichs", "muscl",
            "surrogate")
_CORRECTORS = ("none", "flux_l2", "rhs_l2", "increment_l2", "dg_l2", "energy",
               "euler1d_entropy")


@dataclass
class VariantConfig:
    label: str
    scheme: str = "muscl"
    corrector: str = "none"
    target: str = "clamp"            # clamp | fixed:<rate> | tracked
    step_correction: str = "none"    # none | clamp | fixed:<delta> | tracked
    entropy_ratio: float = 1.0
    positivity: bool = True
    t_end: float = None              # per-variant horizon override
    cfl: float = None
    forcing: str = None              # per-variant forcing override
    nu: float = None
    expect_blowup: bool = False


@dataclass
class ExperimentConfig:
    # problem
    equation: str = "advection"
    length: float = 1.0
    c: float = 1.0
    nu: float = 0.0
    gamma: float = 1.4
    boundary: str = "periodic"
    ic: str = "sine"
    ic_seed: int = 0
    ic_offset: float = 0.0
    dg_degree: int = 1
    forcing: str = "none"
    forcing_seed: int = 0
    kolmogorov_k: int = 4
    drag: float = 0.1
    # plan
    integrator: str = "ssprk3"
    cfl: float = 0.3
    t_end: float = 1.0
    snapshots: int = 11
    max_steps: int = 500000
    # run layout
    resolutions: tuple = (64,)
    reference_resolution: int = 0    # 0: no reference run
    reference_scheme: str = "muscl"
    output: str = "out"
    # surrogate
    surrogate_base: str = "upwind"
    surrogate_amplitude: float = 0.0
    surrogate_seed: int = 0
    # verify
    verify_seed: int = 0
    verify_trials: int = 200
    variants: list = field(default_factory=list)


def _get(cfg, section, key, conv, default, errors):
    if not cfg.has_option(section, key):
        return default
    raw = cfg.get(section, key)
    try:
        if conv is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return conv(raw)
    except ValueError:
        errors.append(f"[{section}] {key} = {raw!r}: expected {conv.__name__}")
        return default


def parse_config(path):
    """Parse and validate an experiment config; raises ConfigurationError
    with per-field diagnostics on malformed input."""
    cfg = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            cfg.read_file(fh)
    except OSError as err:
        raise ConfigurationError(f"cannot read config {path}: {err}") from err
    except configparser.Error as err:
        raise ConfigurationError(f"config parse error in {path}: {err}") from err

    errors = []
    ec = ExperimentConfig()
    g = lambda s, k, conv, d: _get(cfg, s, k, conv, d, errors)

    ec.equation = g("problem", "equation", str, ec.equation)
    ec.length = g("problem", "length", float, ec.length)
    ec.c = g("problem", "c", float, ec.c)
    ec.nu = g("problem", "nu", float, ec.nu)
    ec.gamma = g("problem", "gamma", float, ec.gamma)
    ec.boundary = g("problem", "boundary", str, ec.boundary)
    ec.ic = g("problem", "ic", str, ec.ic)
    ec.ic_seed = g("problem", "ic_seed", int, ec.ic_seed)
    ec.ic_offset = g("problem", "ic_offset", float, ec.ic_offset)
    ec.dg_degree = g("problem", "dg_degree", int, ec.dg_degree)
    ec.forcing = g("problem", "forcing", str, ec.forcing)
    ec.forcing_seed = g("problem", "forcing_seed", int, ec.forcing_seed)
    ec.kolmogorov_k = g("problem", "kolmogorov_k", int, ec.kolmogorov_k)
    ec.drag = g("problem", "drag", float, ec.drag)

    ec.integrator = g("plan", "integrator", str, ec.integrator)
    ec.cfl = g("plan", "cfl", float, ec.cfl)
    ec.t_end = g("plan", "t_end", float, ec.t_end)
    ec.snapshots = g("plan", "snapshots", int, ec.snapshots)
    ec.max_steps = g("plan", "max_steps", int, ec.max_steps)

    if cfg.has_option("run", "resolutions"):
        try:
            ec.resolutions = tuple(
                int(tok) for tok in cfg.get("run", "resolutions").split(","))
        except ValueError:
            errors.append("[run] resolutions: expected comma-separated integers")
    ec.reference_resolution = g("run", "reference_resolution", int,
                                ec.reference_resolution)
    ec.reference_scheme = g("run", "reference_scheme", str, ec.reference_scheme)
    ec.output = g("run", "output", str, ec.output)

    ec.surrogate_base = g("surrogate", "base", str, ec.surrogate_base)
    ec.surrogate_amplitude = g("surrogate", "amplitude", float,
                               ec.surrogate_amplitude)
    ec.surrogate_seed = g("surrogate", "seed", int, ec.surrogate_seed)

    ec.verify_seed = g("verify", "seed", int, ec.verify_seed)
    ec.verify_trials = g("verify", "trials", int, ec.verify_trials)

    for section in cfg.sections():
        if not section.startswith("variant."):
            continue
        v = VariantConfig(label=section.split(".", 1)[1])
        v.scheme = g(section, "scheme", str, v.scheme)
        v.corrector = g(section, "corrector", str, v.corrector)
        v.target = g(section, "target", str, v.target)
        v.step_correction = g(section, "step_correction", str, v.step_correction)
        v.entropy_ratio = g(section, "entropy_ratio", float, v.entropy_ratio)
        v.positivity = g(section, "positivity", bool, v.positivity)
        v.t_end = g(section, "t_end", float, v.t_end)
        v.cfl = g(section, "cfl", float, v.cfl)
        v.forcing = g(section, "forcing", str, v.forcing)
        v.nu = g(section, "nu", float, v.nu)
        v.expect_blowup = g(section, "expect_blowup", bool, v.expect_blowup)
        ec.variants.append(v)

    # validation
    if ec.equation not in _EQUATIONS:
        errors.append(f"[problem] equation must be one of {_EQUATIONS}")
    if ec.ic not in _ICS:
        errors.append(f"[problem] ic must be one of {_ICS}")
    if ec.boundary not in ("periodic", "dirichlet"):
        errors.append("[problem] boundary must be periodic or dirichlet")
    if not 0.0 < ec.cfl <= 1.0:
        errors.append("[plan] cfl must lie in (0, 1]")
    for v in ec.variants:
        if v.scheme not in _SCHEMES:
            errors.append(f"[variant.{v.label}] scheme must be one of {_SCHEMES}")
        if v.corrector not in _CORRECTORS:
            errors.append(f"[variant.{v.label}] corrector must be one of "
                          f"{_CORRECTORS}")
        for key, val in (("target", v.target), ("step_correction",
                                                v.step_correction)):
            head = val.split(":", 1)[0]
            if head not in ("clamp", "fixed", "tracked", "none"):
                errors.append(f"[variant.{v.label}] {key} must be clamp, "
                              f"fixed:<value>, tracked, or none")
            if head == "fixed":
                try:
                    float(val.split(":", 1)[1])
                except (IndexError, ValueError):
                    errors.append(f"[variant.{v.label}] {key}: fixed needs a "
                                  "numeric value, e.g. fixed:0")
    if ec.reference_resolution:
        for n in ec.resolutions:
            if ec.reference_resolution % n != 0:
                errors.append(f"[run] reference_resolution "
                              f"{ec.reference_resolution} not divisible by {n}")
    if errors:
        raise ConfigurationError(
            f"invalid config {path}:\n  " + "\n  ".join(errors))
    return ec
