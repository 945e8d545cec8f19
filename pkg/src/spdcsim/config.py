"""Run configuration: strict INI parsing, presets, and config hashing.

Unknown sections or keys are errors; silent typos in physics parameters
are the dominant failure mode, so nothing is ignored.  Every artifact
carries a hash of the fully resolved configuration (presets expanded,
defaults applied); runtime plumbing such as the output directory or the
thread count does not enter the hash.
"""

from __future__ import annotations

import configparser
import hashlib
import math
import os
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .biphoton import GridAxis, GridSpec, ModelKind
from .errors import ValidationError
from .modes import CollectionSpec
from .params import CRYSTAL_PRESET_NAMES, CrystalSpec, PulseRegime, PumpSpec, SpdcType, crystal_preset
from .purity import SWEEP_AXES, PmfSimplification, default_purity_quad
from .quadrature import QuadratureSpec

__all__ = ["RunConfig", "COMMANDS", "load_config", "resolved_config_hash"]

COMMANDS = ("pmf-slice", "jsa", "purity-sweep", "compare-models", "selftest")

_MODEL_KINDS = {k.value: k for k in ModelKind}
_SIMPLIFICATIONS = {s.value: s for s in PmfSimplification}
_REGIMES = {"short": PulseRegime.SHORT, "long": PulseRegime.LONG}

_GRID_FIXED_KEYS = ("lambda_s_nm", "lambda_i_nm", "q_sx", "q_sy", "q_ix", "q_iy", "x_s_um", "x_i_um")

_SECTION_KEYS = {
    "pump": {"lambda_p_um", "w_p_um", "tau_fs"},
    "crystal": {
        "preset",
        "crystal",
        "spdc_type",
        "L_mm",
        "v_g_p",
        "v_g_s",
        "v_g_i",
        "gvd_p_fs2_mm",
        "gvd_s_fs2_mm",
        "gvd_i_fs2_mm",
        "n_p",
        "k_p_um",
    },
    "model": {"kind", "regime"},
    "collection": {"ell", "p_rad", "w0_um", "ws_over_wp"},
    "grid": {"axis1", "axis2"} | set(_GRID_FIXED_KEYS),
    "sweep": {"axis", "values", "start", "stop", "count"},
    "quadrature": {"radial_order", "azimuthal_order", "spectral_order", "tol", "max_refine", "simplification"},
}

_REQUIRED_SECTIONS = {
    "pmf-slice": ("pump", "crystal", "model", "grid"),
    "jsa": ("pump", "crystal", "model", "grid"),
    "compare-models": ("pump", "crystal", "model", "grid"),
    "purity-sweep": ("pump", "crystal", "model", "collection", "sweep"),
    "selftest": (),
}


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved run: command, physics, grids/sweeps, plumbing."""

    command: str
    kind: ModelKind
    pump: PumpSpec
    crystal: CrystalSpec
    regime_override: Optional[PulseRegime]
    collection: Optional[CollectionSpec]
    simplification: PmfSimplification
    purity_quad: QuadratureSpec
    grid: Optional[GridSpec]
    sweep_axis: Optional[str]
    sweep_values: Optional[tuple]
    config_hash: str
    out_dir: str = "."
    figures: bool = False
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    timings: bool = False


def _fail(section: str, key: str, message: str) -> ValidationError:
    return ValidationError(f"[{section}] {key}: {message}")


def _check_keys(cp: configparser.ConfigParser, section: str):
    allowed = _SECTION_KEYS[section]
    for key in cp[section]:
        if key not in allowed:
            raise _fail(section, key, f"unknown key; allowed: {', '.join(sorted(allowed))}")


def _get_float(cp, section: str, key: str, default=None) -> float:
    if not cp.has_option(section, key):
        if default is None:
            raise _fail(section, key, "missing required value")
        return default
    raw = cp.get(section, key)
    try:
        value = float(raw)
    except ValueError:
        raise _fail(section, key, f"not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise _fail(section, key, f"must be finite, got {raw!r}")
    return value


def _get_int(cp, section: str, key: str, default=None) -> int:
    if not cp.has_option(section, key):
        if default is None:
            raise _fail(section, key, "missing required value")
        return default
    raw = cp.get(section, key)
    try:
        return int(raw)
    except ValueError:
        raise _fail(section, key, f"not an integer: {raw!r}") from None


def _get_choice(cp, section: str, key: str, choices: dict, default=None):
    if not cp.has_option(section, key):
        if default is None:
            raise _fail(section, key, "missing required value")
        return default
    raw = cp.get(section, key).strip().strip('"').strip("'")
    if raw not in choices:
        raise _fail(section, key, f"unknown value {raw!r}; allowed: {', '.join(sorted(choices))}")
    return choices[raw]


def _parse_pump(cp) -> PumpSpec:
    return PumpSpec(
        lambda_p_um=_get_float(cp, "pump", "lambda_p_um"),
        w_p_um=_get_float(cp, "pump", "w_p_um"),
        tau_fs=_get_float(cp, "pump", "tau_fs"),
    )


def _parse_crystal(cp) -> CrystalSpec:
    preset_key = "preset" if cp.has_option("crystal", "preset") else ("crystal" if cp.has_option("crystal", "crystal") else None)
    explicit = [
        k
        for k in ("spdc_type", "v_g_p", "v_g_s", "v_g_i", "gvd_p_fs2_mm", "gvd_s_fs2_mm", "gvd_i_fs2_mm", "n_p", "k_p_um")
        if cp.has_option("crystal", k)
    ]
    if preset_key is not None:
        if explicit:
            raise _fail("crystal", preset_key, f"a preset cannot be mixed with explicit material keys ({', '.join(explicit)})")
        name = cp.get("crystal", preset_key).strip().strip('"').strip("'")
        if name not in CRYSTAL_PRESET_NAMES:
            raise _fail("crystal", preset_key, f"unknown preset {name!r}; available: {', '.join(CRYSTAL_PRESET_NAMES)}")
        base = crystal_preset(name)
        if cp.has_option("crystal", "L_mm"):
            base = replace(base, L_mm=_get_float(cp, "crystal", "L_mm"))
        return base
    spdc_type = _get_choice(cp, "crystal", "spdc_type", {"I": SpdcType.TYPE_I, "II": SpdcType.TYPE_II})
    n_p = _get_float(cp, "crystal", "n_p", default=math.nan)
    k_p = _get_float(cp, "crystal", "k_p_um", default=math.nan)
    return CrystalSpec(
        spdc_type=spdc_type,
        L_mm=_get_float(cp, "crystal", "L_mm"),
        v_g_p=_get_float(cp, "crystal", "v_g_p"),
        v_g_s=_get_float(cp, "crystal", "v_g_s"),
        v_g_i=_get_float(cp, "crystal", "v_g_i"),
        gvd_p_fs2_mm=_get_float(cp, "crystal", "gvd_p_fs2_mm"),
        gvd_s_fs2_mm=_get_float(cp, "crystal", "gvd_s_fs2_mm"),
        gvd_i_fs2_mm=_get_float(cp, "crystal", "gvd_i_fs2_mm"),
        n_p=None if math.isnan(n_p) else n_p,
        k_p_um=None if math.isnan(k_p) else k_p,
    )


def _parse_collection(cp, pump: PumpSpec) -> CollectionSpec:
    has_w0 = cp.has_option("collection", "w0_um")
    has_ratio = cp.has_option("collection", "ws_over_wp")
    if has_w0 == has_ratio:
        raise _fail("collection", "w0_um", "exactly one of w0_um or ws_over_wp must be given")
    w0 = _get_float(cp, "collection", "w0_um") if has_w0 else _get_float(cp, "collection", "ws_over_wp") * pump.w_p_um
    return CollectionSpec(ell=_get_int(cp, "collection", "ell"), p_rad=_get_int(cp, "collection", "p_rad", default=0), w0_um=w0)


def _parse_axis(section: str, key: str, raw: str) -> GridAxis:
    parts = [p.strip() for p in raw.split(":")]
    if len(parts) != 4:
        raise _fail(section, key, f"expected name:lo:hi:points, got {raw!r}")
    name, lo, hi, n = parts
    try:
        return GridAxis(name=name, lo=float(lo), hi=float(hi), points=int(n))
    except ValueError as exc:
        raise _fail(section, key, f"bad axis numbers in {raw!r}: {exc}") from None


def _parse_grid(cp) -> GridSpec:
    if not cp.has_option("grid", "axis1"):
        raise _fail("grid", "axis1", "missing required value")
    axes = [_parse_axis("grid", "axis1", cp.get("grid", "axis1"))]
    if cp.has_option("grid", "axis2"):
        axes.append(_parse_axis("grid", "axis2", cp.get("grid", "axis2")))
    fixed = {}
    for key in _GRID_FIXED_KEYS:
        if cp.has_option("grid", key):
            fixed[key] = _get_float(cp, "grid", key)
    return GridSpec(axes=tuple(axes), fixed=fixed)


def _parse_sweep(cp):
    axis = cp.get("sweep", "axis", fallback=None)
    if axis is None:
        raise _fail("sweep", "axis", "missing required value")
    axis = axis.strip()
    if axis not in SWEEP_AXES:
        raise _fail("sweep", "axis", f"unknown axis {axis!r}; allowed: {', '.join(SWEEP_AXES)}")
    has_values = cp.has_option("sweep", "values")
    has_range = any(cp.has_option("sweep", k) for k in ("start", "stop", "count"))
    if has_values == has_range:
        raise _fail("sweep", "values", "give either values = v1, v2, ... or start/stop/count, not both")
    if has_values:
        raw = cp.get("sweep", "values")
        try:
            values = tuple(float(tok) for tok in raw.split(",") if tok.strip())
        except ValueError:
            raise _fail("sweep", "values", f"not a comma-separated number list: {raw!r}") from None
        if not values:
            raise _fail("sweep", "values", "empty list")
    else:
        start = _get_float(cp, "sweep", "start")
        stop = _get_float(cp, "sweep", "stop")
        count = _get_int(cp, "sweep", "count")
        if count < 2:
            raise _fail("sweep", "count", f"need at least 2 points, got {count}")
        values = tuple(float(v) for v in np.linspace(start, stop, count))
    return axis, values


def _parse_quadrature(cp, kind: ModelKind):
    if not cp.has_section("quadrature"):
        return default_purity_quad(kind), PmfSimplification.QUADRATIC_ONLY
    quad = default_purity_quad(
        kind,
        radial_order=_get_int(cp, "quadrature", "radial_order", default=24),
        azimuthal_order=_get_int(cp, "quadrature", "azimuthal_order", default=16),
        spectral_order=_get_int(cp, "quadrature", "spectral_order", default=12),
        tol=_get_float(cp, "quadrature", "tol", default=1.0e-3),
        max_refine=_get_int(cp, "quadrature", "max_refine", default=3),
    )
    simplification = _get_choice(cp, "quadrature", "simplification", _SIMPLIFICATIONS, default=PmfSimplification.QUADRATIC_ONLY)
    return quad, simplification


def load_config(
    command: str,
    path: Optional[str],
    out_dir: str = ".",
    figures: bool = False,
    threads: Optional[int] = None,
    timings: bool = False,
) -> RunConfig:
    """Parse and resolve a config file for a command (strict)."""
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case-sensitive (L_mm vs l_mm typos must not alias)
    if path is None:
        if command != "selftest":
            raise ValidationError(f"{command} requires --config")
        cp.read_string("")
    else:
        if not os.path.isfile(path):
            raise ValidationError(f"config file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as fh:
                cp.read_file(fh)
        except configparser.Error as exc:
            raise ValidationError(f"config parse error in {path}: {exc}") from None
    for section in cp.sections():
        if section not in _SECTION_KEYS:
            raise ValidationError(f"unknown section [{section}]; allowed: {', '.join(sorted(_SECTION_KEYS))}")
        _check_keys(cp, section)
    for section in _REQUIRED_SECTIONS[command]:
        if not cp.has_section(section):
            raise ValidationError(f"[{section}]: section required for {command}")

    has_physics = cp.has_section("pump") and cp.has_section("crystal") and cp.has_section("model")
    if command == "selftest" and not has_physics:
        pump = PumpSpec(lambda_p_um=0.4, w_p_um=28.0, tau_fs=50.0)
        crystal = crystal_preset("BBO-Fig5")
        kind = ModelKind.FOUR_GAUSSIAN
        regime = None
    else:
        if not cp.has_section("model"):
            raise ValidationError("[model]: section required")
        pump = _parse_pump(cp)
        crystal = _parse_crystal(cp)
        kind = _get_choice(cp, "model", "kind", _MODEL_KINDS)
        regime = _get_choice(cp, "model", "regime", _REGIMES) if cp.has_option("model", "regime") else None

    collection = _parse_collection(cp, pump) if cp.has_section("collection") else None
    if command == "purity-sweep" and collection is None:
        raise ValidationError("[collection]: section required for purity-sweep")
    grid = _parse_grid(cp) if cp.has_section("grid") else None
    if command in ("pmf-slice", "jsa", "compare-models") and grid is None:
        raise ValidationError(f"[grid]: section required for {command}")
    sweep_axis = sweep_values = None
    if cp.has_section("sweep"):
        sweep_axis, sweep_values = _parse_sweep(cp)
    if command == "purity-sweep" and sweep_axis is None:
        raise ValidationError("[sweep]: section required for purity-sweep")
    purity_quad, simplification = _parse_quadrature(cp, kind)

    cfg = RunConfig(
        command=command,
        kind=kind,
        pump=pump,
        crystal=crystal,
        regime_override=regime,
        collection=collection,
        simplification=simplification,
        purity_quad=purity_quad,
        grid=grid,
        sweep_axis=sweep_axis,
        sweep_values=sweep_values,
        config_hash="",
        out_dir=out_dir,
        figures=figures,
        threads=threads if threads is not None else (os.cpu_count() or 1),
        timings=timings,
    )
    return replace(cfg, config_hash=resolved_config_hash(cfg))


def _canon(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (ModelKind, PmfSimplification, SpdcType, PulseRegime)):
        return value.value if not isinstance(value, PulseRegime) else value.name.lower()
    return str(value)


def resolved_config_hash(cfg: RunConfig) -> str:
    """12-hex digest of the resolved physics configuration.

    Output plumbing (out_dir, figures, threads, timings) is excluded so
    reruns of the same physics produce byte-identical CSV bodies.
    """
    lines = [f"command={cfg.command}", f"model.kind={_canon(cfg.kind)}"]
    if cfg.regime_override is not None:
        lines.append(f"model.regime={_canon(cfg.regime_override)}")
    p = cfg.pump
    lines += [f"pump.lambda_p_um={_canon(p.lambda_p_um)}", f"pump.w_p_um={_canon(p.w_p_um)}", f"pump.tau_fs={_canon(p.tau_fs)}"]
    c = cfg.crystal
    lines += [
        f"crystal.spdc_type={_canon(c.spdc_type)}",
        f"crystal.L_mm={_canon(c.L_mm)}",
        f"crystal.v_g_p={_canon(c.v_g_p)}",
        f"crystal.v_g_s={_canon(c.v_g_s)}",
        f"crystal.v_g_i={_canon(c.v_g_i)}",
        f"crystal.gvd_p_fs2_mm={_canon(c.gvd_p_fs2_mm)}",
        f"crystal.gvd_s_fs2_mm={_canon(c.gvd_s_fs2_mm)}",
        f"crystal.gvd_i_fs2_mm={_canon(c.gvd_i_fs2_mm)}",
        f"crystal.n_p={_canon(c.n_p) if c.n_p is not None else 'none'}",
        f"crystal.k_p_um={_canon(c.k_p_um) if c.k_p_um is not None else 'none'}",
    ]
    if cfg.collection is not None:
        col = cfg.collection
        lines += [
            f"collection.ell={col.ell}",
            f"collection.p_rad={col.p_rad}",
            f"collection.w0_um={_canon(col.w0_um)}",
        ]
    q = cfg.purity_quad
    orders = ",".join(str(ax.order) for ax in q.axes)
    rules = ",".join(ax.rule.value for ax in q.axes)
    lines += [
        f"quadrature.orders={orders}",
        f"quadrature.rules={rules}",
        f"quadrature.tol={_canon(q.tol)}",
        f"quadrature.max_refine={q.max_refine}",
        f"quadrature.simplification={_canon(cfg.simplification)}",
    ]
    if cfg.grid is not None:
        for i, ax in enumerate(cfg.grid.axes, start=1):
            lines.append(f"grid.axis{i}={ax.name}:{_canon(ax.lo)}:{_canon(ax.hi)}:{ax.points}")
        for key in sorted(cfg.grid.fixed):
            lines.append(f"grid.{key}={_canon(cfg.grid.fixed[key])}")
    if cfg.sweep_axis is not None:
        lines.append(f"sweep.axis={cfg.sweep_axis}")
        lines.append("sweep.values=" + ",".join(_canon(v) for v in cfg.sweep_values))
    digest = hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()
    return digest[:12]
