"""Command-line front end.

spdc <command> --config <file> [--out DIR] [--figures] [--threads N] [--timings]

Commands: pmf-slice, jsa, purity-sweep, compare-models, selftest.  CSV
is the source of truth (first line is a # config_hash comment, floats
written via repr so reruns are byte-identical); figures are convenience
SVGs rendered deterministically.  wall_time_ms is written as 0 unless
--timings is given, keeping sweep CSVs reproducible by default.

Exit codes: 0 success (including sweeps with per-row failures), 2
validation error, 3 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from .biphoton import (
    BiphotonModel,
    JsaField,
    ModelKind,
    grid_coordinates,
    jsa_grid,
    pmf_grid,
)
from .config import COMMANDS, RunConfig, load_config
from .errors import ConvergenceError, SpdcError, ValidationError
from .params import SpdcType
from .phasematch import PmfKind
from .purity import PuritySetting, SweepRow, purity_sweep

__all__ = ["main", "run"]

_COORD_TOKENS = ("q_sx", "q_sy", "q_ix", "q_iy")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: str, config_hash: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _artifact_path(cfg: RunConfig, suffix: str) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return os.path.join(cfg.out_dir, f"{cfg.command}_{cfg.kind.value}_{cfg.config_hash}.{suffix}")


def _model(cfg: RunConfig, kind: ModelKind = None) -> BiphotonModel:
    return BiphotonModel.create(kind or cfg.kind, cfg.pump, cfg.crystal, cfg.regime_override)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "spdcsim"
    return plt


def _save_figure(fig, path: str):
    fig.savefig(path, format="svg", metadata={"Date": None})


def _field_rows(field: JsaField, extra=()):
    """Row-major (axis values..., field value, *extra) rows for a field."""
    grids = np.meshgrid(*[ax.values() for ax in field.axes], indexing="ij")
    flat_axes = [g.ravel() for g in grids]
    flat_vals = field.values.ravel()
    for i in range(flat_vals.size):
        yield [_fmt(col[i]) for col in flat_axes] + [_fmt(flat_vals[i])] + list(extra)


def _run_pmf_slice(cfg: RunConfig):
    model = _model(cfg)
    field = pmf_grid(model, cfg.grid)
    coords = grid_coordinates(model, cfg.grid)
    shape = field.values.shape
    cols = {t: np.broadcast_to(np.asarray(coords[t], dtype=float), shape).ravel() for t in _COORD_TOKENS}
    om_s = np.broadcast_to(coords["Omega_s"], shape).ravel()
    om_i = np.broadcast_to(coords["Omega_i"], shape).ravel()
    kind = PmfKind.GENERAL_SINC if model.kind is ModelKind.GENERAL else PmfKind.DOUBLE_SINC
    flat = field.values.ravel()
    rows = [
        [
            _fmt(cols["q_sx"][i]),
            _fmt(cols["q_sy"][i]),
            _fmt(cols["q_ix"][i]),
            _fmt(cols["q_iy"][i]),
            _fmt(om_s[i]),
            _fmt(om_i[i]),
            kind.value,
            _fmt(flat[i]),
        ]
        for i in range(flat.size)
    ]
    path = _artifact_path(cfg, "csv")
    _write_csv(path, cfg.config_hash, ["q_sx", "q_sy", "q_ix", "q_iy", "Omega_s", "Omega_i", "pmf_kind", "value"], rows)
    artifacts = [path]
    if cfg.figures:
        artifacts.append(_pmf_figure(cfg, field))
    return artifacts


def _pmf_figure(cfg: RunConfig, field: JsaField) -> str:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    if len(field.axes) == 1:
        ax.plot(field.axes[0].values(), field.values, lw=1.2)
        ax.set_xlabel(field.axes[0].name)
        ax.set_ylabel("pmf")
    else:
        _imshow_field(ax, field, fig)
    fig.tight_layout()
    path = _artifact_path(cfg, "svg")
    _save_figure(fig, path)
    plt.close(fig)
    return path


def _imshow_field(ax, field: JsaField, fig):
    ax0, ax1 = field.axes
    im = ax.imshow(
        field.values.T,
        origin="lower",
        aspect="auto",
        extent=(ax0.lo, ax0.hi, ax1.lo, ax1.hi),
    )
    ax.set_xlabel(ax0.name)
    ax.set_ylabel(ax1.name)
    fig.colorbar(im, ax=ax)


def _run_jsa(cfg: RunConfig):
    model = _model(cfg)
    field = jsa_grid(model, cfg.grid)
    header = [ax.name for ax in field.axes] + ["intensity"]
    path = _artifact_path(cfg, "csv")
    _write_csv(path, cfg.config_hash, header, _field_rows(field))
    artifacts = [path]
    if cfg.figures:
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(5.0, 4.2))
        if len(field.axes) == 1:
            ax.plot(field.axes[0].values(), field.values, lw=1.2)
            ax.set_xlabel(field.axes[0].name)
            ax.set_ylabel("intensity")
        else:
            _imshow_field(ax, field, fig)
        fig.tight_layout()
        fig_path = _artifact_path(cfg, "svg")
        _save_figure(fig, fig_path)
        plt.close(fig)
        artifacts.append(fig_path)
    return artifacts


def _run_compare_models(cfg: RunConfig):
    fields = {}
    for kind in ModelKind:
        fields[kind] = jsa_grid(_model(cfg, kind), cfg.grid)
    axes = cfg.grid.axes
    header = [ax.name for ax in axes] + [f"intensity_{k.value.replace('-', '_')}" for k in ModelKind]
    grids = np.meshgrid(*[ax.values() for ax in axes], indexing="ij")
    flat_axes = [g.ravel() for g in grids]
    flats = [fields[k].values.ravel() for k in ModelKind]
    rows = [
        [_fmt(col[i]) for col in flat_axes] + [_fmt(f[i]) for f in flats]
        for i in range(flats[0].size)
    ]
    path = _artifact_path(cfg, "csv")
    _write_csv(path, cfg.config_hash, header, rows)
    artifacts = [path]
    if cfg.figures:
        plt = _pyplot()
        if len(axes) == 1:
            fig, ax = plt.subplots(figsize=(5.0, 3.6))
            x = axes[0].values()
            for kind in ModelKind:
                ax.plot(x, fields[kind].values, lw=1.2, label=kind.value)
            ax.set_xlabel(axes[0].name)
            ax.set_ylabel("intensity")
            ax.legend()
        else:
            fig, axs = plt.subplots(1, 3, figsize=(12.0, 3.8))
            for sub, kind in zip(axs, ModelKind):
                _imshow_field(sub, fields[kind], fig)
                sub.set_title(kind.value)
        fig.tight_layout()
        fig_path = _artifact_path(cfg, "svg")
        _save_figure(fig, fig_path)
        plt.close(fig)
        artifacts.append(fig_path)
    return artifacts


def _sweep_metadata(cfg: RunConfig, row: SweepRow):
    """The nine descriptive CSV fields for one sweep row.

    Failed rows echo the base configuration with the swept value
    substituted, so the offending input stays visible.
    """
    if row.setting is not None:
        m, col = row.setting.model, row.setting.collection
        ell, p_rad, w0 = col.ell, col.p_rad, col.w0_um
        kind, spdc, l_mm, w_p, tau = m.kind, m.spdc_type, m.crystal.L_mm, m.pump.w_p_um, m.pump.tau_fs
    else:
        kind, spdc = cfg.kind, cfg.crystal.spdc_type
        ell, p_rad, w0 = cfg.collection.ell, cfg.collection.p_rad, cfg.collection.w0_um
        l_mm, w_p, tau = cfg.crystal.L_mm, cfg.pump.w_p_um, cfg.pump.tau_fs
        if row.axis == "ws_over_wp":
            w0 = row.value * w_p
        elif row.axis == "ell":
            ell = row.value
        elif row.axis == "L":
            l_mm = row.value
        elif row.axis == "tau":
            tau = row.value
        elif row.axis == "w_p":
            w_p = row.value
    return [
        kind.value,
        spdc.value,
        _fmt(ell),
        _fmt(p_rad),
        _fmt(float(l_mm)),
        _fmt(float(w_p)),
        _fmt(float(w0)),
        _fmt(float(tau)),
        _fmt(float(w0) / float(w_p)),
    ]


def _run_purity_sweep(cfg: RunConfig):
    base = PuritySetting(
        model=_model(cfg),
        collection=cfg.collection,
        quad=cfg.purity_quad,
        simplification=cfg.simplification,
    )
    rows = purity_sweep(base, cfg.sweep_axis, cfg.sweep_values, threads=cfg.threads)
    header = [
        "model",
        "spdc_type",
        "ell",
        "p",
        "L_mm",
        "w_p_um",
        "w0_um",
        "tau_fs",
        "ws_over_wp",
        "purity",
        "trace_check",
        "converged",
        "wall_time_ms",
        "error",
    ]
    csv_rows = []
    for row in rows:
        meta = _sweep_metadata(cfg, row)
        if row.result is not None:
            r = row.result
            wall = _fmt(r.wall_time_ms) if cfg.timings else "0"
            csv_rows.append(meta + [_fmt(r.purity), _fmt(r.trace_check), _fmt(r.converged), wall, ""])
        else:
            csv_rows.append(meta + ["", "", "False", "", row.error])
    path = _artifact_path(cfg, "csv")
    _write_csv(path, cfg.config_hash, header, csv_rows)
    artifacts = [path]
    if cfg.figures:
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        xs = [row.value for row in rows if row.result is not None]
        ps = [row.result.purity for row in rows if row.result is not None]
        ax.plot(xs, ps, marker="o", lw=1.2)
        ax.set_xlabel(cfg.sweep_axis)
        ax.set_ylabel("purity")
        ax.set_ylim(0.0, 1.05)
        fig.tight_layout()
        fig_path = _artifact_path(cfg, "svg")
        _save_figure(fig, fig_path)
        plt.close(fig)
        artifacts.append(fig_path)
    return artifacts


def _run_selftest(cfg: RunConfig):
    from .selftest import run_selftest

    checks = run_selftest()
    width = max(len(name) for name, _, _ in checks)
    failed = 0
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        line = f"{status}  {name.ljust(width)}"
        if detail and not ok:
            line += f"  {detail}"
        print(line)
        failed += 0 if ok else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    if failed:
        raise _SelftestFailure(f"{failed} selftest check(s) failed")
    return []


class _SelftestFailure(Exception):
    pass


def run(cfg: RunConfig):
    """Execute a resolved config; returns the artifact paths written."""
    runner = {
        "pmf-slice": _run_pmf_slice,
        "jsa": _run_jsa,
        "compare-models": _run_compare_models,
        "purity-sweep": _run_purity_sweep,
        "selftest": _run_selftest,
    }[cfg.command]
    return runner(cfg)


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="spdc",
        description="Biphoton wavefunction models, JSA grids and spatial-purity sweeps.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="INI config file (sections [pump], [crystal], [model], ...)")
    parser.add_argument("--out", default=".", help="output directory (created if missing)")
    parser.add_argument("--figures", action="store_true", help="also render SVG figures")
    parser.add_argument("--threads", type=int, default=None, help="sweep worker threads (default: CPU count)")
    parser.add_argument("--timings", action="store_true", help="write measured wall_time_ms instead of 0")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = _parse_args(argv)
    try:
        cfg = load_config(
            args.command,
            args.config,
            out_dir=args.out,
            figures=args.figures,
            threads=args.threads,
            timings=args.timings,
        )
        if cfg.threads < 1:
            raise ValidationError(f"--threads must be >= 1, got {cfg.threads}")
        artifacts = run(cfg)
        for path in artifacts:
            print(f"wrote {path}")
        return 0
    except _SelftestFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SpdcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
