"""Builders for schema-v1 CSV files used across the figure tests."""

import json

import numpy as np

HEADER = "t,S_n,dS_n,Z_residual,oracle_S_n,oracle_dS_n"


def write_csv(path, t, ds, s=None, config=None, analysis=None, kind=None,
              schema="noclick-csv-v1"):
    lines = ["# schema: " + schema, "# config: " + json.dumps(config or {})]
    if kind:
        lines.append("# kind: " + kind)
    lines.append(HEADER)
    s = ds if s is None else s
    for ti, si, di in zip(t, s, ds):
        lines.append("%.17g,%.17g,%.17g,0,," % (ti, si, di))
    if analysis is not None:
        lines.append("# analysis: " + json.dumps(analysis))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return str(path)


def crossing_pair(tmpdir):
    """Two exponentials with rates 1 and 2 crossing at exactly t = 0.462."""
    t = np.arange(0.0, 2.0001, 0.05)
    slow = np.exp(-t)
    fast = np.exp(0.462 - 2.0 * t)
    report = {"crossing": {"crossed": True, "t_m": 0.462, "late_lower": "second"}}
    a = write_csv(tmpdir / "slow.csv", t, slow,
                  config={"params": {"gamma": 0.5}}, analysis=report)
    b = write_csv(tmpdir / "fast.csv", t, fast,
                  config={"params": {"gamma": 1.0}})
    return a, b


def sweep_quartet(tmpdir):
    """Four decay curves shaped like a loss-rate sweep of the dimer run."""
    t = np.arange(0.0, 20.0001, 0.2)
    paths = []
    for gamma, floor in ((1.0, 0.9), (2.5, 0.3), (4.5, 0.0), (5.0, 0.0)):
        ds = floor + (1.8 - floor) * np.exp(-0.5 * gamma * t)
        cfg = {
            "protocol": "ssh",
            "params": {"h": 0.6, "kappa": 0.8, "h_ev": 0.0, "gamma": gamma},
        }
        paths.append(write_csv(tmpdir / ("sweep_g%s.csv" % gamma), t, ds, config=cfg))
    return paths
