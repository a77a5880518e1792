"""Sweep N for a correlation config and write one JSON report per N.

    python scripts/run_correlation.py configs/two_definite.json --N 500 1000 2000 3000 --out results/
"""
import argparse
import json
from pathlib import Path

from bqfcorr.cli import dumps, load_config
from bqfcorr.correlation import predict_and_compare, validate_system


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--N", type=int, nargs="+", default=[500, 1000, 1500, 3000])
    ap.add_argument("--pmax", type=int, default=50)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    system, forms, box = load_config(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    rows = []
    for N in args.N:
        check = validate_system(system, forms, box, N)
        if not check.ok:
            raise SystemExit(f"{args.config}: {check.describe()}")
        rep = predict_and_compare(system, forms, box, N, p_max=args.pmax, threads=args.threads)
        (out_dir / f"{stem}_N{N}.json").write_text(dumps(rep.to_dict()) + "\n")
        rows.append((N, rep.empirical_sum, rep.predicted, rep.relative_error))
        print(f"N={N:>6}  empirical={rep.empirical_sum:>12}  predicted={rep.predicted:14.2f}  "
              f"rel.err={rep.relative_error:.4%}")
    summary = [dict(zip(("N", "empirical", "predicted", "relative_error"), r)) for r in rows]
    (out_dir / f"{stem}_summary.json").write_text(json.dumps(summary, indent=1) + "\n")


if __name__ == "__main__":
    main()
