"""Command-line front end.

Subcommands: ``figure1`` reproduces the reference three-panel comparison,
``correlate`` dispatches any single correlator, ``modes`` runs the
discrete loss-of-one-photon analysis, ``sweep`` tabulates summary metrics
over one parameter. All numeric CSV output uses %.12e and newline line
endings so reruns are byte identical.

Exit codes: 0 success, 1 I/O failure, 2 usage or schema error,
3 numerical or degenerate-input error, 4 physics property violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import correlators as corr
from . import modes as mspace
from . import qubits
from .config import ExperimentConfig, config_to_dict, parse_config
from .correlators import CorrelationSurface
from .errors import (
    EXIT_OK,
    PropertyViolationError,
    TriphotonError,
    UsageError,
)

DEFAULT_CONFIG_PATH = "triphoton.json"
SWEEPABLE = ("filter_sigma", "t12_ps", "alpha_max", "n_bins")


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def _thread_cap() -> int:
    """Parallelism cap from TRIPHOTON_THREADS (0 = auto).

    Evaluation is currently serial, which respects any cap; the value is
    validated and echoed so configurations stay portable.
    """
    raw = os.environ.get("TRIPHOTON_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"TRIPHOTON_THREADS must be an integer, got {raw!r}") from None
    if cap < 0:
        raise UsageError(f"TRIPHOTON_THREADS must be >= 0, got {cap}")
    return cap


def _load_config(path_arg: str | None) -> ExperimentConfig:
    if path_arg is None:
        path = Path(DEFAULT_CONFIG_PATH)
        if not path.exists():
            return parse_config("{}")
    else:
        path = Path(path_arg)
        if not path.exists():
            raise UsageError(f"config file not found: {path}")
    return parse_config(path.read_bytes())


def _out_dir(cfg: ExperimentConfig, out_arg: str | None) -> Path:
    out = Path(out_arg) if out_arg is not None else Path(cfg.output.dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise OSError(f"cannot create output directory {out}: {err}") from err
    if not out.is_dir():
        raise NotADirectoryError(f"output path is not a directory: {out}")
    return out


def _write_text(path: Path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as err:
        raise OSError(f"cannot write {path}: {err}") from err


def write_curve_csv(path: Path, axis_name: str, value_name: str,
                    surface: CorrelationSurface, mask_negative_axis: bool = False) -> None:
    xs = surface.grid.points()
    vs = surface.values
    if mask_negative_axis:
        keep = xs >= 0.0
        xs, vs = xs[keep], vs[keep]
    lines = [f"{axis_name},{value_name}"]
    lines += [f"{_fmt(x)},{_fmt(v)}" for x, v in zip(xs, vs)]
    _write_text(path, "\n".join(lines) + "\n")


def write_surface_csv(path: Path, axis_names: tuple[str, str], value_name: str,
                      surface: CorrelationSurface, mask_negative_axis: bool = False) -> None:
    xs = surface.axes[0].points()
    ys = surface.axes[1].points()
    vals = surface.values
    lines = [f"{axis_names[0]},{axis_names[1]},{value_name}"]
    for a, x in enumerate(xs):
        if mask_negative_axis and x < 0.0:
            continue
        for b, y in enumerate(ys):
            if mask_negative_axis and y < 0.0:
                continue
            lines.append(f"{_fmt(x)},{_fmt(y)},{_fmt(vals[a, b])}")
    _write_text(path, "\n".join(lines) + "\n")


def _write_json(path: Path, payload: dict[str, Any]) -> None:
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _peak_location(surface: CorrelationSurface) -> list[float]:
    flat = int(np.argmax(surface.values))
    idx = np.unravel_index(flat, surface.values.shape)
    return [float(g.points()[i]) for g, i in zip(surface.axes, idx)]


def _summary(command: str, cfg: ExperimentConfig, outputs: list[str],
             metrics: dict[str, Any], started: float) -> dict[str, Any]:
    wall_ms = (time.perf_counter() - started) * 1e3
    for key, value in metrics.items():
        if isinstance(value, float) and not np.isfinite(value):
            raise TriphotonError(f"summary metric {key} is not finite")
    return {
        "command": command,
        "config": config_to_dict(cfg),
        "metrics": metrics,
        "outputs": sorted(outputs),
        "thread_cap": _thread_cap(),
        "wall_ms": wall_ms,
    }


def _filters3(cfg: ExperimentConfig):
    if len(cfg.filters) < 3:
        raise UsageError("this command needs 3 filters, config provides "
                         f"{len(cfg.filters)}")
    return cfg.filters[0], cfg.filters[1], cfg.filters[2]


def cmd_figure1(cfg: ExperimentConfig, out_dir: Path, physical_mask: bool = True) -> dict[str, Any]:
    """Three-panel reference comparison: the full two-delay surface, the
    conditional slice across it, and the pair correlation."""
    started = time.perf_counter()
    f1, f2, f3 = _filters3(cfg)
    g12 = cfg.grid("tau12_ps")
    g32 = cfg.grid("tau32_ps")

    surface = corr.g3_w_temporal(cfg.phase_match, f1, f2, f3, cfg.quadrature, (g12, g32))
    conditional = corr.g3_w_conditional(cfg.phase_match, f1, f2, f3, cfg.quadrature, g12)
    pair = corr.g2_w_temporal(cfg.phase_match, f1, f2, cfg.quadrature, g12)

    paths = {
        "a": out_dir / "fig1a_g3_w_temporal.csv",
        "b": out_dir / "fig1b_g3_w_conditional.csv",
        "c": out_dir / "fig1c_g2_w_temporal.csv",
    }
    write_surface_csv(paths["a"], ("tau12_ps", "tau32_ps"), "g3", surface, physical_mask)
    write_curve_csv(paths["b"], "tau12_ps", "g3", conditional, physical_mask)
    write_curve_csv(paths["c"], "tau12_ps", "g2", pair, physical_mask)

    fwhm_b = corr.fwhm(conditional)
    fwhm_c = corr.fwhm(pair)
    metrics = {
        "conditional_line_tau32_ps": f"-tau12 + {abs(cfg.phase_match.t12)}",
        "fwhm_conditional_ps": fwhm_b,
        "fwhm_g2_ps": fwhm_c,
        "peak_conditional_tau12_ps": _peak_location(conditional)[0],
        "peak_g2_tau12_ps": _peak_location(pair)[0],
        "peak_surface_tau_ps": _peak_location(surface),
        "physical_mask": physical_mask,
        "width_ordering_ok": bool(fwhm_b < fwhm_c),
    }
    summary = _summary("figure1", cfg, [str(p) for p in paths.values()], metrics, started)
    _write_json(out_dir / "figure1_summary.json", summary)
    return summary


_VALID_COMBOS = (
    ("w111", "time", 2), ("w111", "time", 3), ("w111", "space", 2), ("w111", "space", 3),
    ("ghz12", "time", 2), ("ghz12", "time", 3), ("ghz12", "space", 2), ("ghz12", "space", 3),
)


def cmd_correlate(cfg: ExperimentConfig, out_dir: Path, state: str, domain: str,
                  order: int, physical_mask: bool = False) -> dict[str, Any]:
    """Evaluate one correlator and serialize it."""
    started = time.perf_counter()
    combo = (state, domain, order)
    if combo not in _VALID_COMBOS:
        raise UsageError(
            f"unsupported combination {combo}; valid: "
            + ", ".join(f"{s}/{d}/{o}" for s, d, o in _VALID_COMBOS))
    stem = f"correlate_{state}_{domain}_g{order}"
    outputs: list[str] = []
    metrics: dict[str, Any] = {}

    if state == "w111" and domain == "time":
        if order == 2:
            surf = corr.g2_w_temporal(cfg.phase_match, cfg.filters[0], cfg.filters[1],
                                      cfg.quadrature, cfg.grid("tau12_ps"))
            path = out_dir / f"{stem}.csv"
            write_curve_csv(path, "tau12_ps", "g2", surf, physical_mask)
        else:
            f1, f2, f3 = _filters3(cfg)
            surf = corr.g3_w_temporal(cfg.phase_match, f1, f2, f3, cfg.quadrature,
                                      (cfg.grid("tau12_ps"), cfg.grid("tau32_ps")))
            path = out_dir / f"{stem}.csv"
            write_surface_csv(path, ("tau12_ps", "tau32_ps"), "g3", surf, physical_mask)
        outputs.append(str(path))
        metrics["peak_location"] = _peak_location(surf)
        if len(surf.axes) == 1:
            metrics["fwhm"] = corr.fwhm(surf)
    elif state == "w111" and domain == "space":
        if order == 2:
            surf = corr.g2_w_spatial(cfg.transverse, cfg.grid("rho12_um"))
            path = out_dir / f"{stem}.csv"
            write_curve_csv(path, "rho12_um", "g2", surf)
            metrics["fwhm"] = corr.fwhm(surf)
        else:
            surf = corr.g3_w_spatial(cfg.transverse, (cfg.grid("rho12_um"), cfg.grid("rho32_um")))
            path = out_dir / f"{stem}.csv"
            write_surface_csv(path, ("rho12_um", "rho32_um"), "g3", surf)
        outputs.append(str(path))
        metrics["peak_location"] = _peak_location(surf)
    elif state == "ghz12" and domain == "time":
        if order == 2:
            value = corr.g2_ghz_temporal(cfg.phase_match, cfg.filters[0], cfg.filters[1],
                                         cfg.quadrature)
            path = out_dir / f"{stem}.json"
            _write_json(path, {"value": value, "delay_independent": True})
            outputs.append(str(path))
            metrics["value"] = value
            metrics["delay_independent"] = True
        else:
            surf = corr.g3_ghz_temporal(cfg.phase_match, cfg.filters[0], cfg.filters[1],
                                        cfg.quadrature, cfg.grid("tau12_ps"))
            path = out_dir / f"{stem}.csv"
            write_curve_csv(path, "tau12_ps", "g3", surf, physical_mask)
            outputs.append(str(path))
            metrics["peak_location"] = _peak_location(surf)
            metrics["fwhm"] = corr.fwhm(surf)
    else:
        if order == 2:
            value = corr.g2_ghz_spatial(cfg.transverse)
            path = out_dir / f"{stem}.json"
            _write_json(path, {"value": value, "displacement_independent": True})
            outputs.append(str(path))
            metrics["value"] = value
            metrics["displacement_independent"] = True
        else:
            surf = corr.g3_ghz_spatial(cfg.transverse, cfg.grid("rho12_um"))
            path = out_dir / f"{stem}.csv"
            write_curve_csv(path, "rho12_um", "g3", surf)
            outputs.append(str(path))
            metrics["peak_location"] = _peak_location(surf)
            metrics["fwhm"] = corr.fwhm(surf)

    summary = _summary("correlate", cfg, outputs, metrics, started)
    _write_json(out_dir / f"{stem}_summary.json", summary)
    return summary


def _qubit_checks() -> dict[str, Any]:
    ghz = qubits.make_ghz().density()
    w = qubits.make_w().density()
    ghz12 = qubits.partial_trace(ghz, (0, 1))
    w12 = qubits.partial_trace(w, (0, 1))
    even = np.zeros((4, 4), dtype=complex)
    even[0, 0] = even[3, 3] = 0.5
    ghz_neg = qubits.negativity(ghz12, (0,))
    w_neg = qubits.negativity(w12, (0,))
    fid = qubits.fidelity(ghz12, qubits.DensityMatrix(even, (2, 2)))
    return {
        "ghz_traced_fidelity_vs_even_mixture": fid,
        "ghz_traced_negativity": ghz_neg,
        "w_traced_negativity": w_neg,
        "pass": bool(ghz_neg <= 1e-10 and w_neg > 1e-6 and abs(fid - 1.0) <= 1e-9),
    }


def cmd_modes(cfg: ExperimentConfig, out_dir: Path) -> dict[str, Any]:
    """Discrete loss-of-one-photon report for both states.

    Fails (exit 4) if the degenerate-pair reduction shows entanglement,
    if the three-mode reduction shows none, or if the exact qubit
    fixtures break.
    """
    started = time.perf_counter()
    grid = cfg.mode_grid
    f1, f2, f3 = _filters3(cfg)

    w_state = mspace.build_w_discrete(cfg.phase_match, (f1, f2, f3), grid)
    w_red = mspace.reduce_w_trace3(w_state)
    w_neg = qubits.negativity(w_red, (0,))
    w_pur = mspace.purity(w_red)

    ghz_state = mspace.build_ghz_discrete(cfg.phase_match, (f1, f2), grid)
    ghz_red = mspace.reduce_ghz_trace_one_degenerate(ghz_state)
    ghz_neg = qubits.negativity(ghz_red, (0,))
    ghz_pur = mspace.purity(ghz_red)
    off = ghz_red.matrix - np.diag(np.diag(ghz_red.matrix))
    ghz_offdiag = float(np.max(np.abs(off)))

    checks = _qubit_checks()
    w_ok = w_neg > 1e-6
    ghz_ok = ghz_neg <= 1e-10 and ghz_offdiag < 1e-14
    report = {
        "ghz12": {
            "diagonal": bool(ghz_offdiag < 1e-14),
            "max_offdiagonal": ghz_offdiag,
            "negativity": ghz_neg,
            "purity": ghz_pur,
            "separable_after_loss": ghz_ok,
        },
        "mode_grid": {"n_bins": grid.n_bins, "nu_min_rad_per_ps": grid.nu_min,
                      "nu_max_rad_per_ps": grid.nu_max},
        "pass": bool(w_ok and ghz_ok and checks["pass"]),
        "qubit_checks": checks,
        "w111": {
            "entangled_after_loss": bool(w_ok),
            "negativity": w_neg,
            "purity": w_pur,
        },
    }
    summary = _summary("modes", cfg, [], report, started)
    report["wall_ms"] = summary["wall_ms"]
    _write_json(out_dir / "modes_report.json", report)
    if not report["pass"]:
        raise PropertyViolationError(
            "loss-of-one-photon signature failed: "
            f"w_negativity={w_neg:.3e}, ghz_negativity={ghz_neg:.3e}")
    return report


def _config_with_param(cfg_dict: dict[str, Any], param: str, value: float) -> ExperimentConfig:
    doc = json.loads(json.dumps(cfg_dict))  # deep copy
    if param == "filter_sigma":
        for f in doc["filters"]:
            f["sigma_rad_per_ps"] = value
    elif param == "t12_ps":
        doc["phase_match"]["t12_ps"] = value
    elif param == "alpha_max":
        doc["transverse"]["alpha_max_rad_per_um"] = value
    elif param == "n_bins":
        if value != int(value):
            raise UsageError(f"n_bins sweep values must be integers, got {value}")
        doc["mode_grid"]["n_bins"] = int(value)
    else:
        raise UsageError(f"parameter {param!r} is not sweepable; choose one of {', '.join(SWEEPABLE)}")
    row = parse_config(json.dumps(doc))
    # widen the integration span when the swept value pushes past it
    needed = corr.required_span(row.phase_match, row.filters)
    if row.quadrature.nu_span < needed:
        doc["quadrature"]["nu_span_rad_per_ps"] = needed
        row = parse_config(json.dumps(doc))
    return row


def cmd_sweep(cfg: ExperimentConfig, out_dir: Path, param: str, values: Sequence[float]) -> dict[str, Any]:
    """One summary-metric row per parameter value, in the order given."""
    started = time.perf_counter()
    if param not in SWEEPABLE:
        raise UsageError(f"parameter {param!r} is not sweepable; choose one of {', '.join(SWEEPABLE)}")
    if not values:
        raise UsageError("sweep needs at least one value")
    base = config_to_dict(cfg)
    header = ("param,value,g2_w_fwhm_ps,g3_w_conditional_fwhm_ps,"
              "g3_ghz_spatial_fwhm_um,w_negativity,ghz_negativity")
    lines = [header]
    for value in values:
        row_cfg = _config_with_param(base, param, value)
        f1, f2, f3 = _filters3(row_cfg)
        g12 = row_cfg.grid("tau12_ps")
        pair = corr.g2_w_temporal(row_cfg.phase_match, f1, f2, row_cfg.quadrature, g12)
        conditional = corr.g3_w_conditional(row_cfg.phase_match, f1, f2, f3,
                                            row_cfg.quadrature, g12)
        spatial = corr.g3_ghz_spatial(row_cfg.transverse, row_cfg.grid("rho12_um"))
        w_red = mspace.reduce_w_trace3(
            mspace.build_w_discrete(row_cfg.phase_match, (f1, f2, f3), row_cfg.mode_grid))
        ghz_red = mspace.reduce_ghz_trace_one_degenerate(
            mspace.build_ghz_discrete(row_cfg.phase_match, (f1, f2), row_cfg.mode_grid))
        lines.append(",".join([
            param, _fmt(float(value)),
            _fmt(corr.fwhm(pair)), _fmt(corr.fwhm(conditional)), _fmt(corr.fwhm(spatial)),
            _fmt(qubits.negativity(w_red, (0,))), _fmt(qubits.negativity(ghz_red, (0,))),
        ]))
    path = out_dir / f"sweep_{param}.csv"
    _write_text(path, "\n".join(lines) + "\n")
    summary = _summary("sweep", cfg, [str(path)],
                       {"param": param, "rows": len(values)}, started)
    _write_json(out_dir / f"sweep_{param}_summary.json", summary)
    return summary


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triphoton",
                                     description="Triphoton correlation simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", default=None,
                       help=f"JSON config path (default ./{DEFAULT_CONFIG_PATH} if present)")
        p.add_argument("--out", default=None, help="output directory (default from config)")

    p_fig = sub.add_parser("figure1", help="reproduce the three-panel temporal comparison")
    add_common(p_fig)
    p_fig.add_argument("--physical-mask", action=argparse.BooleanOptionalAction, default=True,
                       help="drop negative delays from the written files")

    p_cor = sub.add_parser("correlate", help="evaluate one correlation function")
    add_common(p_cor)
    p_cor.add_argument("--state", required=True, choices=["w111", "ghz12"])
    p_cor.add_argument("--domain", required=True, choices=["time", "space"])
    p_cor.add_argument("--order", required=True, type=int, choices=[2, 3])
    p_cor.add_argument("--physical-mask", action=argparse.BooleanOptionalAction, default=False)

    p_modes = sub.add_parser("modes", help="discrete loss-of-one-photon analysis")
    add_common(p_modes)

    p_sweep = sub.add_parser("sweep", help="summary metrics over one parameter")
    add_common(p_sweep)
    p_sweep.add_argument("--param", required=True,
                         help=f"one of: {', '.join(SWEEPABLE)}")
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated numeric values")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _thread_cap()
        cfg = _load_config(args.config)
        out_dir = _out_dir(cfg, args.out)
        if args.command == "figure1":
            cmd_figure1(cfg, out_dir, physical_mask=args.physical_mask)
        elif args.command == "correlate":
            cmd_correlate(cfg, out_dir, args.state, args.domain, args.order,
                          physical_mask=args.physical_mask)
        elif args.command == "modes":
            cmd_modes(cfg, out_dir)
        elif args.command == "sweep":
            try:
                values = [float(v) for v in args.values.split(",") if v.strip() != ""]
            except ValueError:
                raise UsageError(f"--values must be comma-separated numbers, got {args.values!r}")
            cmd_sweep(cfg, out_dir, args.param, values)
        return EXIT_OK
    except TriphotonError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
