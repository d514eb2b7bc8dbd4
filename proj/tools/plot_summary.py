#!/usr/bin/env python3
# Copyright 2026 The fedsel Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Quick-look plots from a rounds.csv produced by `fedsel run`."""

import argparse
import collections
import csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("rounds_csv")
    parser.add_argument("-o", "--out", default="summary.png")
    parser.add_argument("--window", type=int, default=10)
    args = parser.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = collections.defaultdict(lambda: collections.defaultdict(list))
    with open(args.rounds_csv, newline="") as fh:
        for row in csv.DictReader(fh):
            key = (row["policy"], row["seed"])
            series[key]["lat"].append(float(row["cum_latency"]))
            series[key]["acc"].append(float(row["accuracy"]))
            series[key]["leak"].append(float(row["max_leakage"]))
            series[key]["t"].append(int(row["t"]))

    def smooth(xs, w):
        out, acc = [], 0.0
        for i, x in enumerate(xs):
            acc += x
            if i >= w:
                acc -= xs[i - w]
            out.append(acc / min(i + 1, w))
        return out

    fig, (ax_acc, ax_leak) = plt.subplots(1, 2, figsize=(11, 4))
    policies = sorted({p for p, _ in series})
    for policy in policies:
        cells = [v for (p, _), v in series.items() if p == policy]
        for i, cell in enumerate(cells):
            ax_acc.plot(cell["lat"], smooth(cell["acc"], args.window),
                        alpha=0.8 if i == 0 else 0.25,
                        label=policy if i == 0 else None)
            ax_leak.plot(cell["t"], cell["leak"],
                         alpha=0.8 if i == 0 else 0.25,
                         label=policy if i == 0 else None)
    ax_acc.set_xlabel("cumulative latency")
    ax_acc.set_ylabel(f"accuracy (window {args.window})")
    ax_leak.set_xlabel("round")
    ax_leak.set_ylabel("max leakage")
    ax_acc.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
