"""Regenerate the loss-probability comparison as a text table.

Runs the segmented-burst experiment for the rate-2/3 pair
{(1,2),(2,5)} and prints loss probability per maximum burst length for
the embedded code, the interference-avoidance baseline, and the
information-debt model of a random linear code.
"""

import argparse

from streamfec import cli


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--segments", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    ns = argparse.Namespace(
        b1=1, t1=2, alpha_num=2, alpha_den=1,
        bmax_list="0,1,2,3,4,5,6,7,8",
        segment_len=100, segments=args.segments, seed=args.seed,
        schemes="desco,ia,rlc", users="1,2", out="-")
    records = cli.simulate_records(ns)
    loss = {(r["scheme"], r["user"], r["b_max"]): r["loss_probability"]
            for r in records}
    bmaxes = sorted({r["b_max"] for r in records})

    for user in (1, 2):
        print(f"\nuser {user} loss probability "
              f"({args.segments} segments, seed {args.seed})")
        print("  b_max |" + "".join(f" {b:>9}" for b in bmaxes))
        for scheme in ("desco", "ia", "rlc"):
            cells = "".join(f" {loss[(scheme, user, b)]:>9.6f}" for b in bmaxes)
            print(f"  {scheme:>5} |{cells}")


if __name__ == "__main__":
    main()
