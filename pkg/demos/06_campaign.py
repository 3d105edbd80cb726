"""Run a small seeded campaign and read back its CSV and summary."""

import json
import sys
import tempfile
from pathlib import Path

from pierce_lab import RunConfig, run_suite


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="pierce-lab-"))
    rep = run_suite(RunConfig("pierce8", 200, seed=1, out_dir=str(out)))
    summary = json.loads(rep.summary_path.read_text())
    print(f"exit code {rep.exit_code}; files in {out}")
    print("max exact tau:", summary["max_tau_exact"], "max output size:", summary["max_pierce_size"])
    print("tau histogram:", summary["tau_histogram"])
    print("first rows:")
    for line in rep.csv_path.read_text().splitlines()[:4]:
        print(" ", line)


if __name__ == "__main__":
    main()
