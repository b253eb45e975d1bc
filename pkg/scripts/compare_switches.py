#!/usr/bin/env python3
"""Compare the three angiogenic-switch presets on one patient baseline.

Usage: python scripts/compare_switches.py [--patient 3] [--seeds 30]
"""

import argparse
from pathlib import Path

from oncograph.harness import (
    builtin_baselines,
    builtin_switches,
    emit_switch_comparison_csv,
    run_switch_comparison,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--patient", type=int, default=3, choices=[1, 2, 3, 4])
    parser.add_argument("--seeds", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="out/switch_comparison.csv")
    parser.add_argument("--parallel", action="store_true")
    args = parser.parse_args()

    base = builtin_baselines(master_seed=args.seed)[args.patient - 1]
    rows = run_switch_comparison(
        base, builtin_switches(), args.seeds, parallel=args.parallel
    )
    for row in rows:
        s = row.summary()
        print(
            f"{s['switch']}: inflamed median {s['median_inflamed']:.1f} "
            f"[{s['q1_inflamed']:.1f}, {s['q3_inflamed']:.1f}]  "
            f"dead median {s['median_dead']:.1f}"
        )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(emit_switch_comparison_csv(rows))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
