"""Run verify-trmc / verify-mtrmc on every fixture in data/ and print a summary."""

import argparse
import json
from pathlib import Path

from toric_residue.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default=str(DATA))
    parser.add_argument("--out", default="fixture_reports")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    for path in sorted(Path(args.data).glob("*.json")):
        data = json.loads(path.read_text())
        if "P" not in data or "z" not in data:
            continue
        command = "verify-mtrmc" if "partition" in data else "verify-trmc"
        report = out / f"{path.stem}.{command}.json"
        code = run([command, "-i", str(path), "-o", str(report)])
        if report.exists() and code in (0, 3):
            rep = json.loads(report.read_text())
            print(f"{path.name:<16}{command:<14}exit {code}  gap {rep['abs_gap']:.2e}  {rep['verdict']}")
        else:
            print(f"{path.name:<16}{command:<14}exit {code}")


if __name__ == "__main__":
    main()
