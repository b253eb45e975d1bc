#!/usr/bin/env python3
"""Run the four patient baselines and emit profile tables + metrics CSVs.

Usage: python scripts/run_baselines.py [--seed 0] [--out out/baselines]
"""

import argparse

from oncograph.harness import builtin_baselines, run_baseline, write_suite_outputs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="out/baselines")
    parser.add_argument("--parallel", action="store_true")
    args = parser.parse_args()

    configs = builtin_baselines(master_seed=args.seed)
    records = {}
    for config in configs:
        print(f"running {config.name} "
              f"({config.initial_stem_cells} -> {config.target_cells}) ...")
        records[config.name] = run_baseline(config, parallel=args.parallel)
    write_suite_outputs(configs, records, args.out)
    print(f"wrote {args.out}/manifest.json")
    for name, recs in records.items():
        vals = ", ".join(
            f"GP{r.profile.pattern_index}={r.profile.essential_genomic_profile:.2E}"
            for r in recs
        )
        print(f"  {name}: {vals}")


if __name__ == "__main__":
    main()
