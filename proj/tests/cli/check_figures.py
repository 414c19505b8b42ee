"""Runs every command of the figure table in docs/figures.md and checks its .dat file."""

import math
import re
import shlex
import subprocess
import sys
import tempfile
from pathlib import Path


def table_rows(doc: Path):
    for line in doc.read_text().splitlines():
        cells = [c.strip() for c in re.split(r"(?<!\\)\|", line.strip())[1:-1]]
        if len(cells) != 5 or not cells[2].startswith("`susyqm"):
            continue
        yield cells[0].strip("`"), cells[2].strip("`"), cells[3].split(), int(cells[4])


def main() -> int:
    exe, doc = Path(sys.argv[1]).resolve(), Path(sys.argv[2])
    rows = list(table_rows(doc))
    listed = subprocess.run([exe, "figure", "--list"], capture_output=True, text=True, check=True).stdout
    presets = [line.split(",")[0] for line in listed.splitlines()[1:] if line]
    failures = []
    if sorted(presets) != sorted(r[0] for r in rows):
        failures.append(f"table presets {sorted(r[0] for r in rows)} != figure --list {sorted(presets)}")

    with tempfile.TemporaryDirectory() as tmp:
        for name, command, columns, n_rows in rows:
            argv = shlex.split(command)
            argv[0] = str(exe)
            argv += ["--gnuplot", f"{name}.gp"]
            run = subprocess.run(argv, cwd=tmp, capture_output=True, text=True)
            if run.returncode != 0:
                failures.append(f"{name}: exit {run.returncode}: {run.stderr.strip()}")
                continue
            dat = Path(tmp) / f"{name}.dat"
            lines = dat.read_text().splitlines()
            header = [l for l in lines if l.startswith("#")]
            data = [l.split() for l in lines if l and not l.startswith("#")]
            got_columns = next((h.split()[2:] for h in header if h.startswith("# columns:")), None)
            if got_columns != columns:
                failures.append(f"{name}: columns {got_columns} != {columns}")
            if len(data) != n_rows:
                failures.append(f"{name}: {len(data)} rows, expected {n_rows}")
            if any(len(r) != len(columns) for r in data):
                failures.append(f"{name}: ragged rows")
            values = [float(v) for r in data for v in r]
            if not all(math.isfinite(v) for v in values):
                failures.append(f"{name}: non-finite values")
            xs = [float(r[0]) for r in data]
            if xs != sorted(xs):
                failures.append(f"{name}: first column not sorted")
            if f'"{name}.dat"' not in (Path(tmp) / f"{name}.gp").read_text():
                failures.append(f"{name}: gnuplot script does not plot its data file")
            print(f"{name}: {len(data)} rows")

    for f in failures:
        print("FAIL", f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
