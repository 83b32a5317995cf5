"""Command-line runner for the asymmetry pipelines.

Four subcommands: ``timeseries`` evolves one initial state and records
S_n(t), dS_n(t) plus fitted rates and a restoration verdict;
``crossing`` runs two initial states on a shared grid and reports
whether and where their asymmetry curves cross, together with the
slow-mode prediction; ``sweep`` fans a base configuration out over a
parameter grid in parallel; ``oracle-check`` reruns a finite chain
against the dense oracle and fails loudly on any deviation.

All artifacts are deterministic: identical configurations produce
byte-identical files no matter how many worker processes are used.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import analysis, ed, gaussian, grids, quasiparticle, ssh, xy
from .errors import DegenerateModeError

SCHEMA = "noclick-csv-v1"
SWEEP_SCHEMA = "noclick-sweep-summary-v1"
COLUMNS = ("t", "S_n", "dS_n", "Z_residual", "oracle_S_n", "oracle_dS_n")

_PARAM_KEYS = {"xy": ("kappa", "h", "gamma"), "ssh": ("h", "kappa", "h_ev", "gamma")}
_ORACLE_L_MAX = 10
_CRITERION_NK = 1024


@dataclass(frozen=True)
class RunConfig:
    """One fully-specified run; every output embeds it for replay."""

    protocol: str
    params: dict
    params_b: dict | None = None
    ell: int = 20
    n: int = 2
    t_max: float = 10.0
    dt: float = 0.05
    nk: int = grids.NK_DEFAULT
    n_alpha: int | None = None
    finite_length: int | None = None
    oracle: bool = False
    qp_alpha: float | None = None
    noise_floor: float = analysis.NOISE_FLOOR
    tail_tol: float = 1e-3
    threads: int = 1

    def validate(self) -> "RunConfig":
        if self.protocol not in _PARAM_KEYS:
            raise ValueError("protocol: must be 'xy' or 'ssh'")
        self._check_params("params", self.params)
        if self.params_b is not None:
            self._check_params("params_b", self.params_b)
        if not isinstance(self.ell, int) or self.ell < 2:
            raise ValueError("ell: need an integer subsystem of at least 2 sites")
        if self.protocol == "ssh" and self.ell % 2:
            raise ValueError("ell: the dimer protocol needs an even subsystem")
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("n: Renyi index must be an integer >= 2")
        if not self.dt > 0:
            raise ValueError("time_grid: dt must be positive")
        if self.t_max < 0:
            raise ValueError("time_grid: t_max must be non-negative")
        if self.nk < 2:
            raise ValueError("quadrature: nk must be at least 2")
        if self.n_alpha is not None and (self.n_alpha < 16 or self.n_alpha % 2):
            raise ValueError("quadrature: n_alpha must be even and >= 16")
        if self.finite_length is not None:
            L = self.finite_length
            if L < 2 * self.ell:
                raise ValueError("finite-L: need L >= 2*ell")
            step = 4 if self.protocol == "ssh" else 2
            if L % step:
                raise ValueError(
                    "finite-L: L must be a multiple of %d for this protocol" % step
                )
        if self.oracle:
            if self.finite_length is None:
                raise ValueError("oracle: dense comparison needs finite-L")
            if self.finite_length > _ORACLE_L_MAX:
                raise ValueError(
                    "oracle: dense comparison is capped at L = %d" % _ORACLE_L_MAX
                )
        if self.qp_alpha is not None:
            if self.protocol != "ssh":
                raise ValueError("qp-overlay: only the dimer protocol has a prediction")
            if self.params["gamma"] != 0.0:
                raise ValueError("qp-overlay: the prediction needs gamma = 0")
            if self.n != 2:
                raise ValueError("qp-overlay: implemented for n = 2")
        if self.noise_floor <= 0 or self.tail_tol <= 0:
            raise ValueError("analysis: noise_floor and tail_tol must be positive")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ValueError("threads: need a positive integer")
        return self

    def _check_params(self, label: str, given: dict) -> None:
        keys = _PARAM_KEYS[self.protocol]
        if set(given) != set(keys):
            raise ValueError(
                "%s: %s protocol needs exactly %s"
                % (label, self.protocol, ",".join(keys))
            )
        for key, val in given.items():
            if not isinstance(val, (int, float)) or not math.isfinite(val):
                raise ValueError("%s: %s must be a finite number" % (label, key))

    def times(self) -> np.ndarray:
        n_steps = int(math.floor(self.t_max / self.dt + 1e-9))
        return np.arange(n_steps + 1) * self.dt

    def as_dict(self) -> dict:
        # threads is an execution resource, not part of the run identity;
        # dropping it keeps artifacts byte-identical across worker counts
        out = dataclasses.asdict(self)
        del out["threads"]
        return out


def _quench(cfg: RunConfig, params: dict | None = None):
    p = cfg.params if params is None else params
    if cfg.protocol == "xy":
        return xy.PairingQuench(kappa=p["kappa"], h=p["h"], gamma=p["gamma"])
    return ssh.DimerQuench(h=p["h"], kappa=p["kappa"], h_ev=p["h_ev"], gamma=p["gamma"])


@dataclass
class RunRecord:
    """Computed series plus the analysis block and the config echo."""

    config: RunConfig
    times: np.ndarray
    s_n: np.ndarray
    ds_n: np.ndarray
    residual: np.ndarray
    oracle_s_n: np.ndarray | None = None
    oracle_ds_n: np.ndarray | None = None
    analysis: dict = field(default_factory=dict)
    schema: str = SCHEMA

    def rows(self):
        for i, t in enumerate(self.times):
            yield (
                float(t),
                float(self.s_n[i]),
                float(self.ds_n[i]),
                float(self.residual[i]),
                None if self.oracle_s_n is None else float(self.oracle_s_n[i]),
                None if self.oracle_ds_n is None else float(self.oracle_ds_n[i]),
            )


def _engine_point(cfg: RunConfig, p, t: float):
    if cfg.protocol == "xy":
        basis = "nambu-site"

        def sym(k):
            return xy.symbol(p, k, t)

    else:
        basis = "nambu-cell"
        sym = ssh.correlation_symbol(p, t)
    if cfg.finite_length is None:
        G = gaussian.build_correlation(sym, cfg.ell, basis=basis, nk=cfg.nk)
    else:
        G = gaussian.build_correlation(
            sym, cfg.ell, "finite", length=cfg.finite_length, basis=basis
        )
    mask = gaussian.charge_mask(basis, cfg.ell)
    res = gaussian.entanglement_asymmetry(G, mask, n=cfg.n, n_alpha=cfg.n_alpha)
    return res.entropy, res.value, res.residual_estimate


def _oracle_context(cfg: RunConfig):
    L = cfg.finite_length
    p = cfg.params
    if cfg.protocol == "xy":
        Hi = ed.build_hamiltonian("xy-init", {"kappa": p["kappa"], "h": p["h"]}, L)
        He = ed.build_hamiltonian("xx-evolve", {"gamma": p["gamma"]}, L)
    else:
        Hi = ed.build_hamiltonian("ssh-init", {"kappa": p["kappa"], "h": p["h"]}, L)
        He = ed.build_hamiltonian(
            "ssh-evolve", {"h_ev": p["h_ev"], "gamma": p["gamma"]}, L
        )
    return ed.ground_state(Hi), He


def _chunk_worker(args):
    cfg, times = args
    p = _quench(cfg)
    ctx = _oracle_context(cfg) if cfg.oracle else None
    rows = []
    for t in times:
        s, a, r = _engine_point(cfg, p, float(t))
        if ctx is None:
            rows.append((s, a, r, None, None))
        else:
            psi = ed.evolve_noclick(ctx[0], ctx[1], float(t))
            rho = ed.reduced_density_matrix(psi, cfg.ell)
            rows.append(
                (s, a, r, ed.dense_renyi_entropy(rho, cfg.n), ed.exact_asymmetry(rho, cfg.n))
            )
    return rows


def _fit_block(times, values, window):
    try:
        series = analysis.AsymmetrySeries(times, np.maximum(values, 0.0))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            rate, r2 = analysis.fit_decay_rate(series, window)
        return {"rate": rate, "r_squared": r2, "window": [window[0], window[1]]}
    except ValueError as exc:
        return {"error": str(exc)}


def _series_analysis(cfg: RunConfig, times, s_n, ds_n) -> dict:
    info = {"noise_floor": cfg.noise_floor, "tail_tol": cfg.tail_tol}
    if len(times) >= 4 and times[-1] > 0:
        window = (0.5 * float(times[-1]), float(times[-1]))
        info["rate_S_n"] = _fit_block(times, s_n, window)
        info["rate_dS_n"] = _fit_block(times, ds_n, window)
        try:
            series = analysis.AsymmetrySeries(times, np.maximum(ds_n, 0.0))
            info["restored"] = bool(
                analysis.restoration_verdict(series, tol=cfg.tail_tol)
            )
        except ValueError as exc:
            info["restored"] = None
            info["restored_error"] = str(exc)
    if cfg.qp_alpha is not None:
        p = _quench(cfg)
        a = float(cfg.qp_alpha)
        raw, connected = [], []
        for t in times:
            tau = float(t) / cfg.ell
            r_a = quasiparticle.qp_charged_moment_ratio(p, [a, 0.0], tau=tau, nk=cfg.nk)
            r_0 = quasiparticle.qp_charged_moment_ratio(p, [0.0, 0.0], tau=tau, nk=cfg.nk)
            raw.append(r_a)
            connected.append(r_a - r_0)
        info["qp_overlay"] = {
            "alpha": a,
            "tau": [float(t) / cfg.ell for t in times],
            "log_ratio": raw,
            "connected": connected,
        }
    return info


def run_timeseries(config: RunConfig) -> RunRecord:
    """Evolve one state over the configured grid and assemble the record."""
    cfg = config.validate()
    times = cfg.times()
    worker_cfg = dataclasses.replace(cfg, params_b=None, threads=1)
    if cfg.threads == 1 or len(times) < 2:
        rows = _chunk_worker((worker_cfg, times))
    else:
        chunks = np.array_split(times, min(cfg.threads, len(times)))
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(pool.map(_chunk_worker, [(worker_cfg, c) for c in chunks]))
        rows = [row for part in parts for row in part]
    s_n = np.array([r[0] for r in rows])
    ds_n = np.array([r[1] for r in rows])
    residual = np.array([r[2] for r in rows])
    record = RunRecord(cfg, times, s_n, ds_n, residual)
    if cfg.oracle:
        record.oracle_s_n = np.array([r[3] for r in rows])
        record.oracle_ds_n = np.array([r[4] for r in rows])
    record.analysis = _series_analysis(cfg, times, s_n, ds_n)
    if cfg.oracle:
        record.analysis["oracle"] = {
            "max_dev_S_n": float(np.max(np.abs(s_n - record.oracle_s_n))),
            "max_dev_dS_n": float(np.max(np.abs(ds_n - record.oracle_ds_n))),
        }
    return record


def _dimer_criterion(pa, pb, late_lower: str, n_crossings: int) -> str:
    """Late-time ordering check for the dimer protocol.

    The symmetry-breaking correlator decays with a state-independent
    rate, so the state whose asymptotic amplitude zeta_tilde carries
    the smaller Brillouin-zone weight ends up with the lower asymmetry.
    """
    if pa.gamma != pb.gamma or pa.h_ev != pb.h_ev:
        return "unavailable"
    if n_crossings > 1:
        return "mixed"
    try:
        k = grids.momentum_grid(_CRITERION_NK)
        ia = float(grids.bz_mean(np.abs(ssh.zeta_tilde(k, pa)) ** 2))
        ib = float(grids.bz_mean(np.abs(ssh.zeta_tilde(k, pb)) ** 2))
    except DegenerateModeError:
        return "unavailable"
    if np.isclose(ia, ib, rtol=1e-9, atol=1e-12):
        predicted = "none"
    else:
        predicted = "first" if ia < ib else "second"
    return "consistent" if predicted == late_lower else "inconsistent"


def run_crossing(config_a: RunConfig, config_b: RunConfig):
    """Run two states on one grid and attach the crossing report to both."""
    cfg_a = config_a.validate()
    cfg_b = config_b.validate()
    grid_fields = ("protocol", "ell", "n", "t_max", "dt", "nk", "n_alpha", "finite_length")
    for name in grid_fields:
        if getattr(cfg_a, name) != getattr(cfg_b, name):
            raise ValueError("crossing: configs must agree on %s" % name)
    if cfg_a.params == cfg_b.params:
        raise ValueError("crossing: indistinct states")
    rec_a = run_timeseries(cfg_a)
    rec_b = run_timeseries(cfg_b)
    pa, pb = _quench(cfg_a), _quench(cfg_b)
    s1 = analysis.AsymmetrySeries(
        rec_a.times, np.maximum(rec_a.ds_n, 0.0), params=pa, n=cfg_a.n, ell=cfg_a.ell
    )
    s2 = analysis.AsymmetrySeries(
        rec_b.times, np.maximum(rec_b.ds_n, 0.0), params=pb, n=cfg_b.n, ell=cfg_b.ell
    )
    report = analysis.detect_crossing(s1, s2, noise_floor=cfg_a.noise_floor)
    verdict = report.criterion_verdict
    if cfg_a.protocol == "ssh" and verdict == "unavailable":
        verdict = _dimer_criterion(
            pa, pb, report.late_lower, len(report.crossing_times)
        )
    block = dataclasses.asdict(report)
    block["criterion_verdict"] = verdict
    block["crossing_times"] = list(report.crossing_times)
    rec_a.analysis["crossing"] = block
    rec_b.analysis["crossing"] = block
    return rec_a, rec_b


@dataclass
class SweepResult:
    base: RunConfig
    sweep: dict
    records: list
    summary: list


def _sweep_worker(args):
    cfg, index = args
    try:
        return index, run_timeseries(cfg), ""
    except Exception as exc:  # isolate per-point failures
        return index, None, "%s: %s" % (type(exc).__name__, exc)


def run_sweep(base: RunConfig, sweep: dict) -> SweepResult:
    """Fan the base config out over a zipped parameter grid.

    ``sweep`` maps parameter names to equal-length value lists; point i
    overrides each named parameter with its i-th value.  Points run in
    parallel but results keep grid order, and one failing point is
    reported in the summary instead of aborting the sweep.
    """
    cfg = base.validate()
    if not sweep:
        raise ValueError("sweep: empty grid")
    keys = sorted(sweep)
    lengths = {len(sweep[k]) for k in keys}
    if len(lengths) != 1 or 0 in lengths:
        raise ValueError("sweep: value lists must be non-empty and equal-length")
    allowed = set(_PARAM_KEYS[cfg.protocol])
    bad = [k for k in keys if k not in allowed]
    if bad:
        raise ValueError("sweep: unknown parameter(s) %s" % ",".join(bad))
    n_points = lengths.pop()
    configs = []
    for i in range(n_points):
        params = dict(cfg.params)
        for k in keys:
            params[k] = float(sweep[k][i])
        # not validated here: a bad point must fail inside its own worker
        configs.append(dataclasses.replace(cfg, params=params, threads=1))
    if cfg.threads == 1 or n_points < 2:
        results = [_sweep_worker((c, i)) for i, c in enumerate(configs)]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(
                pool.map(_sweep_worker, [(c, i) for i, c in enumerate(configs)])
            )
    records, summary = [], []
    for (index, record, err), point_cfg in zip(results, configs):
        records.append(record)
        row = {"index": index}
        for k in keys:
            row[k] = point_cfg.params[k]
        if record is None:
            row.update(
                {"late_dS_n": None, "rate_S_n": None, "rate_dS_n": None,
                 "restored": None, "error": err}
            )
        else:
            tail = max(1, len(record.times) // 10)
            rate_s = record.analysis.get("rate_S_n", {})
            rate_ds = record.analysis.get("rate_dS_n", {})
            row.update(
                {
                    "late_dS_n": float(np.mean(record.ds_n[-tail:])),
                    "rate_S_n": rate_s.get("rate"),
                    "rate_dS_n": rate_ds.get("rate"),
                    "restored": record.analysis.get("restored"),
                    "error": "",
                }
            )
        summary.append(row)
    return SweepResult(cfg, {k: list(map(float, sweep[k])) for k in keys}, records, summary)


def run_oracle_check(config: RunConfig, tol_entropy: float, tol_asymmetry: float):
    """Timeseries with the dense oracle forced on, plus pass/fail deltas."""
    cfg = dataclasses.replace(config, oracle=True).validate()
    record = run_timeseries(cfg)
    dev_s = record.analysis["oracle"]["max_dev_S_n"]
    dev_ds = record.analysis["oracle"]["max_dev_dS_n"]
    ok = dev_s <= tol_entropy and dev_ds <= tol_asymmetry
    record.analysis["oracle"].update(
        {"tol_S_n": tol_entropy, "tol_dS_n": tol_asymmetry, "passed": ok}
    )
    return record, ok


# ---------------------------------------------------------------- artifacts


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _json_line(payload) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, separators=(",", ":"))


def _fmt(x) -> str:
    return "" if x is None else "%.17g" % x


def record_to_csv(record: RunRecord) -> str:
    lines = [
        "# schema: " + record.schema,
        "# config: " + _json_line(record.config.as_dict()),
        ",".join(COLUMNS),
    ]
    for row in record.rows():
        lines.append(",".join(_fmt(x) for x in row))
    lines.append("# analysis: " + _json_line(record.analysis))
    return "\n".join(lines) + "\n"


def record_to_json(record: RunRecord) -> dict:
    return {
        "schema": record.schema,
        "config": _jsonable(record.config.as_dict()),
        "columns": list(COLUMNS),
        "rows": [_jsonable(list(row)) for row in record.rows()],
        "analysis": _jsonable(record.analysis),
    }


def write_record(record: RunRecord, path: str, fmt: str = "csv") -> None:
    if fmt == "csv":
        text = record_to_csv(record)
    elif fmt == "json":
        text = json.dumps(record_to_json(record), sort_keys=True, indent=1) + "\n"
    else:
        raise ValueError("format must be 'csv' or 'json'")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_record(path: str) -> dict:
    """Parse a schema-v1 CSV back into config, rows, and analysis."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# schema: "):
        raise ValueError("missing schema tag in %s" % path)
    schema = lines[0][len("# schema: "):]
    if schema != SCHEMA:
        raise ValueError("unsupported schema %r (expected %r)" % (schema, SCHEMA))
    config = json.loads(lines[1][len("# config: "):])
    if lines[2].split(",") != list(COLUMNS):
        raise ValueError("column header does not match schema v1")
    rows, tail = [], {}
    for line in lines[3:]:
        if line.startswith("# analysis: "):
            tail = json.loads(line[len("# analysis: "):])
            continue
        if not line:
            continue
        cells = line.split(",")
        rows.append([None if c == "" else float(c) for c in cells])
    return {"schema": schema, "config": config, "rows": rows, "analysis": tail}


def _split_out(path: str, suffix: str) -> str:
    stem, ext = os.path.splitext(path)
    return "%s_%s%s" % (stem, suffix, ext or ".csv")


def write_crossing(rec_a: RunRecord, rec_b: RunRecord, path: str, fmt: str) -> list:
    if fmt == "json":
        payload = {
            "schema": SCHEMA,
            "series_a": record_to_json(rec_a),
            "series_b": record_to_json(rec_b),
        }
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(payload, sort_keys=True, indent=1) + "\n")
        return [path]
    paths = [_split_out(path, "a"), _split_out(path, "b")]
    write_record(rec_a, paths[0], "csv")
    write_record(rec_b, paths[1], "csv")
    return paths


_SUMMARY_COLUMNS = ("late_dS_n", "rate_S_n", "rate_dS_n", "restored", "error")


def sweep_summary_csv(result: SweepResult) -> str:
    keys = sorted(result.sweep)
    lines = [
        "# schema: " + SWEEP_SCHEMA,
        "# config: " + _json_line({"base": result.base.as_dict(), "sweep": result.sweep}),
        ",".join(("index",) + tuple(keys) + _SUMMARY_COLUMNS),
    ]
    for row in result.summary:
        cells = [str(row["index"])]
        cells += [_fmt(row[k]) for k in keys]
        cells += [_fmt(row["late_dS_n"]), _fmt(row["rate_S_n"]), _fmt(row["rate_dS_n"])]
        restored = row["restored"]
        cells.append("" if restored is None else ("true" if restored else "false"))
        cells.append(str(row["error"]).replace(",", ";"))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_sweep(result: SweepResult, path: str, fmt: str) -> list:
    written = []
    if fmt == "json":
        payload = {
            "schema": SWEEP_SCHEMA,
            "config": _jsonable({"base": result.base.as_dict(), "sweep": result.sweep}),
            "summary": _jsonable(result.summary),
            "records": [
                None if r is None else record_to_json(r) for r in result.records
            ],
        }
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(payload, sort_keys=True, indent=1) + "\n")
        return [path]
    for i, record in enumerate(result.records):
        if record is None:
            continue
        p = _split_out(path, "%03d" % i)
        write_record(record, p, "csv")
        written.append(p)
    summary_path = _split_out(path, "summary")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(sweep_summary_csv(result))
    written.append(summary_path)
    return written


# ------------------------------------------------------------------- main


def _parse_params(text: str) -> dict:
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise ValueError("params: expected key=value, got %r" % item)
        key, _, val = item.partition("=")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise ValueError("params: %s must be a number, got %r" % (key, val))
    return out


def _parse_sweep(items) -> dict:
    out = {}
    for item in items:
        key, _, vals = item.partition("=")
        if not vals:
            raise ValueError("sweep: expected key=v1,v2,..., got %r" % item)
        try:
            out[key.strip()] = [float(v) for v in vals.split(",")]
        except ValueError:
            raise ValueError("sweep: values of %s must be numbers" % key)
    return out


_CONFIG_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def _load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config: top level must be an object")
    unknown = set(data) - _CONFIG_FIELDS
    if unknown:
        raise ValueError("config: unknown field(s) %s" % ",".join(sorted(unknown)))
    return data


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file mirroring the run configuration")
    sub.add_argument("--protocol", choices=("xy", "ssh"))
    sub.add_argument("--params", help="comma list, e.g. kappa=0.5,h=0.3,gamma=0.5")
    sub.add_argument("--ell", type=int)
    sub.add_argument("--n", type=int)
    sub.add_argument("--tmax", type=float, dest="t_max")
    sub.add_argument("--dt", type=float)
    sub.add_argument("--nk", type=int)
    sub.add_argument("--nalpha", type=int, dest="n_alpha")
    sub.add_argument("--finite-L", type=int, dest="finite_length")
    sub.add_argument("--oracle", action="store_const", const=True)
    sub.add_argument("--qp-alpha", type=float, dest="qp_alpha")
    sub.add_argument("--noise-floor", type=float, dest="noise_floor")
    sub.add_argument("--tail-tol", type=float, dest="tail_tol")
    sub.add_argument("--threads", type=int)
    sub.add_argument("--out", help="output path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def _build_config(args) -> RunConfig:
    merged: dict = {}
    if args.config:
        merged.update(_load_config_file(args.config))
    for name in _CONFIG_FIELDS:
        val = getattr(args, name, None)
        if val is not None:
            merged[name] = val
    if isinstance(merged.get("params"), str):
        merged["params"] = _parse_params(merged["params"])
    if isinstance(merged.get("params_b"), str):
        merged["params_b"] = _parse_params(merged["params_b"])
    if "protocol" not in merged:
        raise ValueError("protocol: required")
    if "params" not in merged:
        raise ValueError("params: required")
    if "t_max" not in merged:
        merged["t_max"] = 10.0 if merged["protocol"] == "xy" else 20.0
    return RunConfig(**merged).validate()


def _print_record_summary(record: RunRecord) -> None:
    cfg = record.config
    print(
        "%s ell=%d n=%d points=%d  S_n(end)=%.6g  dS_n(end)=%.6g"
        % (cfg.protocol, cfg.ell, cfg.n, len(record.times),
           record.s_n[-1], record.ds_n[-1])
    )
    for label in ("rate_S_n", "rate_dS_n"):
        block = record.analysis.get(label)
        if block and "rate" in block:
            print("%s: rate=%.6g r^2=%.4f" % (label, block["rate"], block["r_squared"]))
    if "restored" in record.analysis:
        print("restored: %s" % record.analysis["restored"])
    oracle = record.analysis.get("oracle")
    if oracle:
        print(
            "oracle: max|S_n dev|=%.3e max|dS_n dev|=%.3e"
            % (oracle["max_dev_S_n"], oracle["max_dev_dS_n"])
        )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="noclick",
        description="No-click quench asymmetry runs, crossings, sweeps, and oracle checks.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name in ("timeseries", "crossing", "sweep", "oracle-check"):
        sub = subs.add_parser(name)
        _add_common(sub)
        if name == "crossing":
            sub.add_argument("--params-b", dest="params_b",
                             help="second parameter set, same syntax as --params")
        if name == "sweep":
            sub.add_argument("--sweep", action="append", default=[],
                             help="key=v1,v2,... (repeatable; lists zip together)")
        if name == "oracle-check":
            sub.add_argument("--tol-entropy", type=float, default=1e-9)
            sub.add_argument("--tol-asymmetry", type=float, default=1e-8)
    args = parser.parse_args(argv)

    try:
        cfg = _build_config(args)
        if args.command == "timeseries":
            record = run_timeseries(cfg)
            if args.out:
                write_record(record, args.out, args.format)
            _print_record_summary(record)
            return 0
        if args.command == "crossing":
            if cfg.params_b is None:
                raise ValueError("params_b: required for crossing runs")
            cfg_a = dataclasses.replace(cfg, params_b=None)
            cfg_b = dataclasses.replace(cfg, params=cfg.params_b, params_b=None)
            rec_a, rec_b = run_crossing(cfg_a, cfg_b)
            if args.out:
                for p in write_crossing(rec_a, rec_b, args.out, args.format):
                    print("wrote %s" % p)
            block = rec_a.analysis["crossing"]
            print(
                "crossed=%s t_M=%s late_lower=%s criterion=%s"
                % (block["crossed"], block["t_m"], block["late_lower"],
                   block["criterion_verdict"])
            )
            return 0
        if args.command == "sweep":
            sweep = _parse_sweep(args.sweep)
            result = run_sweep(cfg, sweep)
            if args.out:
                for p in write_sweep(result, args.out, args.format):
                    print("wrote %s" % p)
            for row in result.summary:
                print(
                    "point %d: late_dS_n=%s rate_dS_n=%s restored=%s %s"
                    % (row["index"], row["late_dS_n"], row["rate_dS_n"],
                       row["restored"], row["error"])
                )
            return 0
        # oracle-check
        record, ok = run_oracle_check(cfg, args.tol_entropy, args.tol_asymmetry)
        if args.out:
            write_record(record, args.out, args.format)
        oracle = record.analysis["oracle"]
        print(
            "oracle-check S_n: max dev %.3e (tol %.1e) %s"
            % (oracle["max_dev_S_n"], args.tol_entropy,
               "PASS" if oracle["max_dev_S_n"] <= args.tol_entropy else "FAIL")
        )
        print(
            "oracle-check dS_n: max dev %.3e (tol %.1e) %s"
            % (oracle["max_dev_dS_n"], args.tol_asymmetry,
               "PASS" if oracle["max_dev_dS_n"] <= args.tol_asymmetry else "FAIL")
        )
        return 0 if ok else 1
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
