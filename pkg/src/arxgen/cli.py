"""Command-line front end: ``arxgen {simulate,estimate,validate,roundtrip,ingest}``.

Settings resolve as flags > ``--config`` JSON file > built-in defaults. The
config file may be flat or hold one object per command name. Every file
written carries the resolved settings in a metadata block.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical or
recovery error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .datafiles import (
    read_dataset_csv,
    read_json,
    tool_metadata,
    write_dataset_csv,
    write_json,
)
from .discretize import ORDERS, Method, Output, discretize
from .errors import ArxgenError, ConfigError, DataError
from .model import GeneratorParams, validate_params
from .pmu_io import DEFAULT_SCHEMA, PmuMeta, prepare_dataset, read_meta_sidecar, read_pmu_csv
from .recover import EstimationResult, estimate_parameters, recover
from .regression import build_regression, write_regression_csv
from .simulate import ScenarioConfig, generate_dataset
from .validate import fit_metrics, playback, write_overlay_csv

log = logging.getLogger("arxgen")

BENCHMARK = {"H": 2.5, "R": 0.05, "T": 0.5}

DEFAULTS = {
    "simulate": {
        **BENCHMARK, "D": 0.0, "h": 0.1, "step": 0.2, "step_time": 1.0, "duration": 15.0,
        "noise_var": 1e-4, "output_noise_var": 0.0, "seed": 0, "method": "zoh",
        "output": "omega", "out": "dataset.csv",
    },
    "estimate": {"data": None, "method": "zoh", "output": None, "out": None,
                 "dump_regression": None},
    "validate": {"data": None, "result": None, "H": None, "R": None, "T": None,
                 "method": None, "overlay": None, "report": None},
    "roundtrip": {**BENCHMARK, "methods": "zoh,tustin", "outputs": "omega,delta",
                  "h_values": "0.1,0.01,0.001", "rtol": 1e-8, "param_grid": False, "out": None},
    "ingest": {"pmu": None, "meta": None, "col_t": DEFAULT_SCHEMA["t"],
               "col_freq": DEFAULT_SCHEMA["freq"], "col_power": DEFAULT_SCHEMA["power"],
               "f_nom": None, "s_base": None, "prescaled": None, "threshold": 0.02,
               "pre": 1.0, "post": 60.0, "pre_event_samples": 30, "out": "prepared.csv"},
}

# parameter sweep used by ``roundtrip --param-grid``
GRID_H = (1.0, 2.5, 5.0, 10.0)
GRID_R = (0.02, 0.05, 0.1)
GRID_T = (0.2, 0.5, 1.0)


def _add(p: argparse.ArgumentParser, *flags, **kw):
    p.add_argument(*flags, default=argparse.SUPPRESS, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arxgen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"arxgen {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def params(p):
        _add(p, "--H", type=float, help="inertia constant (s)")
        _add(p, "--R", type=float, help="droop (p.u.)")
        _add(p, "--T", type=float, help="governor time constant (s)")

    s = sub.add_parser("simulate", help="generate a step-test dataset")
    _add(s, "--config")
    params(s)
    _add(s, "--D", type=float, help="damping; only 0 is supported")
    _add(s, "--h", type=float, help="sampling interval (s)")
    _add(s, "--step", type=float, help="step amplitude (p.u.)")
    _add(s, "--step-time", type=float)
    _add(s, "--duration", type=float)
    _add(s, "--noise-var", type=float, help="input noise variance (p.u.^2)")
    _add(s, "--output-noise-var", type=float, help="output noise variance (p.u.^2)")
    _add(s, "--seed", type=int)
    _add(s, "--method", help="zoh or tustin model used to generate the data")
    _add(s, "--output", help="omega or delta")
    _add(s, "--out", help="dataset CSV path; scenario JSON goes next to it")

    e = sub.add_parser("estimate", help="fit an ARX structure and recover H, R, T")
    _add(e, "--config")
    _add(e, "--data", help="dataset CSV with columns t,u,y")
    _add(e, "--method", help="assumed ARX structure: zoh or tustin")
    _add(e, "--output", help="omega or delta (default: from dataset metadata)")
    _add(e, "--out", help="result JSON path")
    _add(e, "--dump-regression", help="write the regression matrix [A | b] as CSV")

    v = sub.add_parser("validate", help="playback of estimated parameters against a dataset")
    _add(v, "--config")
    _add(v, "--data")
    _add(v, "--result", help="result JSON from 'estimate'")
    params(v)
    _add(v, "--method")
    _add(v, "--overlay", help="overlay CSV path (t,measured,predicted)")
    _add(v, "--report", help="fit report JSON path")

    r = sub.add_parser("roundtrip", help="discretize then recover over a method/output/h grid")
    _add(r, "--config")
    params(r)
    _add(r, "--methods")
    _add(r, "--outputs")
    _add(r, "--h-values")
    _add(r, "--rtol", type=float)
    _add(r, "--param-grid", action="store_true", help="sweep the built-in H, R, T grid")
    _add(r, "--out", help="report JSON path")

    i = sub.add_parser("ingest", help="prepare a PMU CSV for estimation")
    _add(i, "--config")
    _add(i, "--pmu", help="PMU CSV path")
    _add(i, "--meta", help="metadata sidecar JSON")
    _add(i, "--col-t")
    _add(i, "--col-freq")
    _add(i, "--col-power")
    _add(i, "--f-nom", type=float)
    _add(i, "--s-base", type=float)
    _add(i, "--prescaled", action="store_true")
    _add(i, "--threshold", type=float, help="event threshold on |dPe| (p.u.)")
    _add(i, "--pre", type=float, help="seconds kept before the event")
    _add(i, "--post", type=float, help="seconds kept after the event")
    _add(i, "--pre-event-samples", type=int)
    _add(i, "--out", help="prepared dataset CSV path")
    return parser


def resolve_config(command: str, flags: dict) -> dict:
    cfg = dict(DEFAULTS[command])
    path = flags.pop("config", None)
    if path:
        try:
            raw = read_json(path)
        except FileNotFoundError:
            raise ConfigError(f"config file {path} not found") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path}: {exc}") from None
        section = raw.get(command, raw) if isinstance(raw, dict) else None
        if not isinstance(section, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        unknown = set(section) - set(cfg) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config key(s) for {command}: {sorted(unknown)}")
        cfg.update({k: v for k, v in section.items() if k in cfg})
    cfg.update(flags)
    return cfg


def _require(cfg: dict, *keys):
    missing = [k for k in keys if cfg.get(k) in (None, "")]
    if missing:
        raise ConfigError("missing required setting(s): " + ", ".join("--" + k.replace("_", "-")
                                                                     for k in missing))


def _parse_list(text, parse):
    if isinstance(text, (list, tuple)):
        return [parse(x) for x in text]
    try:
        return [parse(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _params(cfg) -> GeneratorParams:
    return validate_params({k: cfg.get(k) for k in ("H", "R", "T", "D") if cfg.get(k) is not None})


def cmd_simulate(cfg: dict) -> int:
    p = _params(cfg)
    try:
        scenario = ScenarioConfig(step_amplitude=float(cfg["step"]), step_time=float(cfg["step_time"]),
                                  duration=float(cfg["duration"]), noise_variance=float(cfg["noise_var"]),
                                  rng_seed=int(cfg["seed"]),
                                  output_noise_variance=float(cfg["output_noise_var"]))
        method, output = Method.parse(cfg["method"]), Output.parse(cfg["output"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ds = generate_dataset(p, float(cfg["h"]), scenario, method, output)
    meta = {**tool_metadata(cfg), **ds.metadata()}
    out = Path(cfg["out"])
    write_dataset_csv(out, ds.u, ds.y, meta)
    scenario_path = out.with_suffix(".json")
    write_json(scenario_path, {**meta, "model": ds.model.to_dict()})
    print(f"wrote {out} ({len(ds.u)} samples, h={ds.model.h:g} s, "
          f"{method.value}/{output.value}) and {scenario_path}")
    return 0


def format_estimate_table(result: EstimationResult) -> str:
    lines = [f"{'Coefficient':<12}{result.method.value.upper() + ' method':>22}"]
    order = sorted(result.coefficients, key=lambda k: (k[0] != "b", -int(k[1:])))
    for name in order:
        lines.append(f"{name:<12}{result.coefficients[name]:>22.10g}")
    lines.append("")
    lines.append(f"{'Parameter':<12}{'h=' + format(result.h, 'g'):>22}")
    if result.params is not None:
        for name in ("T", "R", "H"):
            lines.append(f"{name:<12}{getattr(result.params, name):>22.6f}")
    else:
        lines.append(f"{'(none)':<12}{result.error:>22}")
    lines.append("")
    lines.append(f"residual rms {result.residual['rms']:.4g}, max {result.residual['max_abs']:.4g}, "
                 f"condition {result.condition_estimate:.3g}, {result.n_equations} equations")
    return "\n".join(lines)


def cmd_estimate(cfg: dict) -> int:
    _require(cfg, "data")
    u, y, meta = read_dataset_csv(cfg["data"])
    output = cfg.get("output") or meta.get("output") or "omega"
    try:
        method, output = Method.parse(cfg["method"]), Output.parse(output)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.get("dump_regression"):
        n, m = ORDERS[method, output]
        write_regression_csv(build_regression(y, u, n, m), cfg["dump_regression"])
    result = estimate_parameters(u, y, method, output, strict=False)
    print(format_estimate_table(result))
    out = cfg.get("out") or str(Path(cfg["data"]).with_name(
        f"{Path(cfg['data']).stem}_{method.value}_{output.value}.result.json"))
    write_json(out, {**tool_metadata({**cfg, "output": output.value}), "result": result.to_dict()})
    print(f"wrote {out}")
    for w in result.warnings:
        log.warning(w)
    if result.error:
        print(f"error: {result.error}", file=sys.stderr)
        return 4
    return 0


def cmd_validate(cfg: dict) -> int:
    _require(cfg, "data")
    u, y, meta = read_dataset_csv(cfg["data"])
    method = cfg.get("method")
    if cfg.get("result"):
        res = EstimationResult.from_dict(read_json(cfg["result"]).get("result", {}))
        if res.params is None:
            raise ConfigError(f"{cfg['result']} holds no recovered parameters ({res.error})")
        p = res.params
        method = method or res.method.value
    else:
        _require(cfg, "H", "R", "T")
        p = _params(cfg)
    try:
        method = Method.parse(method or "zoh")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if meta.get("output", "omega") != "omega":
        raise DataError("playback validates speed-output datasets only")
    predicted = playback(p, method, u)
    report = fit_metrics(y, predicted)
    print(f"params H={p.H:.6g} R={p.R:.6g} T={p.T:.6g} ({method.value} playback)")
    print(f"rmse {report.rmse:.6g}  nrmse_fit {report.nrmse_fit:.3f}%  "
          f"max_abs_err {report.max_abs_err:.6g}")
    md = {**tool_metadata(cfg), "params": p.as_dict(), "method": method.value,
          "fit": report.as_dict()}
    overlay = cfg.get("overlay") or str(Path(cfg["data"]).with_name(
        f"{Path(cfg['data']).stem}_overlay.csv"))
    write_overlay_csv(overlay, y, predicted, md)
    print(f"wrote {overlay}")
    if cfg.get("report"):
        write_json(cfg["report"], md)
    return 0


def roundtrip_cells(params, methods, outputs, h_values, rtol):
    """One row per (method, output, h); status is PASS, FAIL or an error code."""
    rows = []
    for method in methods:
        for output in outputs:
            for h in h_values:
                status, worst, detail = "PASS", 0.0, ""
                for p in params:
                    try:
                        q = recover(discretize(p, h, method, output))
                    except ArxgenError as exc:
                        status, detail = exc.code, str(exc)
                        break
                    err = max(abs(q.H - p.H) / p.H, abs(q.R - p.R) / p.R, abs(q.T - p.T) / p.T)
                    worst = max(worst, err)
                    if err > rtol:
                        status = "FAIL"
                rows.append({"method": method.value, "output": output.value, "h": h,
                             "status": status, "max_rel_err": worst, "detail": detail})
    return rows


def grid_params():
    out = []
    for H in GRID_H:
        for R in GRID_R:
            for T in GRID_T:
                if 2.0 * T > H * R:
                    out.append(GeneratorParams(H, R, T))
    return out


def cmd_roundtrip(cfg: dict) -> int:
    try:
        methods = _parse_list(cfg["methods"], Method.parse)
        outputs = _parse_list(cfg["outputs"], Output.parse)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    h_values = _parse_list(cfg["h_values"], float)
    params = grid_params() if cfg.get("param_grid") else [_params(cfg)]
    rows = roundtrip_cells(params, methods, outputs, h_values, float(cfg["rtol"]))
    print(f"{'method':<8}{'output':<8}{'h':>10}  {'status':<16}{'max rel err':>12}")
    for r in rows:
        print(f"{r['method']:<8}{r['output']:<8}{r['h']:>10g}  {r['status']:<16}"
              f"{r['max_rel_err']:>12.3g}")
    if cfg.get("out"):
        write_json(cfg["out"], {**tool_metadata(cfg), "cells": rows})
    return 4 if any(r["status"] == "FAIL" for r in rows) else 0


def cmd_ingest(cfg: dict) -> int:
    _require(cfg, "pmu")
    meta = read_meta_sidecar(cfg["meta"]) if cfg.get("meta") else PmuMeta()
    overrides = {k: cfg[k] for k in ("f_nom", "s_base", "prescaled") if cfg.get(k) is not None}
    if overrides:
        meta = PmuMeta(**{**meta.as_dict(), **overrides})
    schema = {"t": cfg["col_t"], "freq": cfg["col_freq"], "power": cfg["col_power"]}
    rec = read_pmu_csv(cfg["pmu"], schema, meta)
    ds = prepare_dataset(rec, threshold=float(cfg["threshold"]), pre=float(cfg["pre"]),
                         post=float(cfg["post"]), pre_event_samples=int(cfg["pre_event_samples"]))
    md = {**tool_metadata(cfg), **ds.metadata, "output": "omega"}
    write_dataset_csv(cfg["out"], ds.u, ds.y, md)
    w = ds.window
    print(f"h = {ds.h:.6g} s, event at sample {w.anchor}, window [{w.start}, {w.stop}) "
          f"-> {len(ds.u)} samples")
    print(f"wrote {cfg['out']}")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "validate": cmd_validate,
    "roundtrip": cmd_roundtrip,
    "ingest": cmd_ingest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    logging.basicConfig(level=logging.DEBUG if args.pop("verbose") else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    command = args.pop("command")
    try:
        cfg = resolve_config(command, args)
        return COMMANDS[command](cfg)
    except ArxgenError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error [FileError]: {exc}", file=sys.stderr)
        return DataError.exit_code
    except (TypeError, ValueError) as exc:
        print(f"error [ConfigError]: {exc}", file=sys.stderr)
        return ConfigError.exit_code


if __name__ == "__main__":
    sys.exit(main())
