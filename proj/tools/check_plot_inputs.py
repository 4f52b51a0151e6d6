#!/usr/bin/env python3
"""Validate the CSV files consumed by the plotting scripts.

Usage: check_plot_inputs.py DIR [DIR ...]

Each directory is scanned for sweep.csv, qq.csv and histogram.csv; every file
found must carry the expected header and numeric columns.
"""
import csv
import math
import sys
from pathlib import Path

SCHEMAS = {
    "sweep.csv": ["metric", "n", "p", "d", "M", "value"],
    "qq.csv": ["p", "q_exact", "q_sample"],
    "histogram.csv": ["bin_left", "bin_right", "count"],
}


def check(path: Path, header: list[str]) -> list[str]:
    problems = []
    with path.open(newline="") as f:
        rows = list(csv.reader(f))
    if not rows or rows[0] != header:
        return [f"{path}: header {rows[0] if rows else None} != {header}"]
    numeric = [i for i, name in enumerate(header) if name != "metric"]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            problems.append(f"{path}:{lineno}: {len(row)} fields")
            continue
        for i in numeric:
            try:
                v = float(row[i])
            except ValueError:
                problems.append(f"{path}:{lineno}: {header[i]}={row[i]!r} not numeric")
                continue
            if header[i] != "value" and not math.isfinite(v):
                problems.append(f"{path}:{lineno}: {header[i]} not finite")
    return problems


def main(argv: list[str]) -> int:
    if len(argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    problems, seen = [], 0
    for d in map(Path, argv[1:]):
        for name, header in SCHEMAS.items():
            p = d / name
            if p.exists():
                seen += 1
                problems += check(p, header)
    for p in problems:
        print(p)
    print(f"{seen} files checked, {len(problems)} problems")
    return 1 if problems or seen == 0 else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
