"""The command-line pipeline end to end, in-process.

Drives the same entry points the installed ``noclick`` executable
exposes: a dense-oracle cross-check on a small chain, then a timeseries
run written to a schema-v1 CSV and parsed back.  Runs in a few seconds.
"""

import os
import tempfile

from noclick import cli

# 1. oracle-check: Gaussian engine vs dense matrices on an 8-site chain
print("$ noclick oracle-check --protocol xy ...")
code = cli.main([
    "oracle-check",
    "--protocol", "xy",
    "--params", "kappa=0.5,h=0.3,gamma=0.5",
    "--ell", "4",
    "--finite-L", "8",
    "--tmax", "2.0",
    "--dt", "0.5",
])
print("exit code %d" % code)

# 2. timeseries to CSV and back
with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "run.csv")
    print()
    print("$ noclick timeseries --protocol xy ... --out run.csv")
    cli.main([
        "timeseries",
        "--protocol", "xy",
        "--params", "kappa=0.5,h=0.3,gamma=0.5",
        "--ell", "10",
        "--tmax", "4.0",
        "--dt", "0.5",
        "--nk", "2048",
        "--out", out,
    ])
    data = cli.read_record(out)
    print()
    print("parsed back: schema=%s rows=%d" % (data["schema"], len(data["rows"])))
    print("first row:", data["rows"][0])
    print("fitted dS_2 rate:", data["analysis"]["rate_dS_n"])
