"""Running means (1/N) sum_{n <= N} r_f(n) against the archimedean density."""
import argparse

import numpy as np

from bqfcorr import QuadForm
from bqfcorr.correlation import arch_density
from bqfcorr.repcount import build_rep_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--forms", nargs="+", default=["1,0,1", "1,0,-2", "1,1,-1", "1,0,2"])
    ap.add_argument("--N", type=int, default=10**6)
    args = ap.parse_args()

    checkpoints = [10**k for k in range(2, 10) if 10**k <= args.N]
    for text in args.forms:
        f = QuadForm.parse(text)
        target = arch_density(f)
        cum = np.cumsum(build_rep_table(f, args.N).counts)
        print(f"form {f}  D={f.D}  density={target:.6f}")
        for N in checkpoints:
            mean = cum[N] / N
            print(f"  N={N:>10}  mean={mean:.6f}  rel.err={abs(mean - target) / target:.4%}")


if __name__ == "__main__":
    main()
