"""Write a synthetic stand-in for the first 1000 rows of FIMI ``mushroom.dat``.

The real file is not redistributed here.  The stand-in copies its shape: 23
one-hot encoded categorical attributes (119 items, exactly 23 items per
transaction, one constant attribute) drawn from a mixture of latent classes
so that items are strongly correlated.  Point ``MUSHROOM_DAT`` at the real
file to use it instead.
"""

import argparse
from pathlib import Path

import numpy as np

# value counts of the 23 attributes of the UCI agaricus-lepiota table
CARDINALITIES = [2, 6, 4, 10, 2, 9, 2, 2, 2, 12, 2, 5, 4, 4, 9, 9, 1, 4, 3, 5, 9, 6, 7]


def generate(n_rows: int, seed: int, n_classes: int = 5, concentration: float = 0.1):
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.full(n_classes, 2.0))
    tables = [rng.dirichlet(np.full(k, concentration), size=n_classes) for k in CARDINALITIES]
    offsets = np.cumsum([1] + CARDINALITIES[:-1])
    classes = rng.choice(n_classes, size=n_rows, p=weights)
    rows = []
    for z in classes:
        items = [int(off + rng.choice(len(t[z]), p=t[z])) for off, t in zip(offsets, tables)]
        rows.append(items)
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=8124)
    parser.add_argument("--out", type=Path, default=Path("data/mushroom_surrogate_1k.dat"))
    args = parser.parse_args()
    rows = generate(args.rows, args.seed)
    args.out.write_text("".join(" ".join(map(str, r)) + "\n" for r in rows))


if __name__ == "__main__":
    main()
