"""Regenerate ``src/hybridmoea/data/kursawe_front.txt``.

Evaluates Kursawe on the full grid over [-5, 5]^3 with step 0.01
(1001^3 points), one x1-slab at a time, keeps the nondominated points of each
slab, then filters the merged candidates once more.

    python scripts/make_kursawe_front.py [--step 0.01] [--out PATH]
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from hybridmoea.benchmarks import front_mask_2d, kursawe

OUT = Path(__file__).resolve().parents[1] / "src" / "hybridmoea" / "data" / "kursawe_front.txt"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()

    count = int(round(10.0 / args.step)) + 1
    axis = np.linspace(-5.0, 5.0, count)
    x2, x3 = np.meshgrid(axis, axis, indexing="ij")
    tail = np.column_stack([x2.ravel(), x3.ravel()])
    kept = []
    for x1 in axis:
        X = np.column_stack([np.full(tail.shape[0], x1), tail])
        F = kursawe(X)
        kept.append(F[front_mask_2d(F)])
    F = np.concatenate(kept)
    F = F[front_mask_2d(F)]
    # rounding to the stored precision can create ties; filter again afterwards
    F = np.round(F, 12)
    F = F[front_mask_2d(F)]
    F = F[np.argsort(F[:, 0], kind="stable")]
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", encoding="utf-8") as fh:
        fh.write("".join(f"{a:.12f} {b:.12f}\n" for a, b in F))
    print(f"{F.shape[0]} points -> {args.out}")


if __name__ == "__main__":
    main()
