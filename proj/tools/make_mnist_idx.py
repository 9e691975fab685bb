#!/usr/bin/env python3
"""Builds the bundled 2000/1000 MNIST subset as IDX files.

Source: the 5000-image MNIST sample shipped inside the mlxtend wheel
(mlxtend/data/data/mnist_5k.csv.gz; 784 pixels then the label per row).
Fetch it with: pip download --no-deps mlxtend==0.24.0 -d /tmp/mlx
"""
import argparse
import gzip
import pathlib
import random
import struct
import zipfile

CSV = "mlxtend/data/data/mnist_5k.csv.gz"


def write_images(path, images):
    with open(path, "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))


def write_labels(path, labels):
    with open(path, "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("wheel", type=pathlib.Path)
    ap.add_argument("out", type=pathlib.Path)
    ap.add_argument("--train-per-class", type=int, default=200)
    ap.add_argument("--test-per-class", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    text = gzip.decompress(zipfile.ZipFile(args.wheel).read(CSV)).decode()
    by_class = {d: [] for d in range(10)}
    for line in text.split():
        values = [int(float(v)) for v in line.split(",")]
        by_class[values[-1]].append(values[:-1])

    rng = random.Random(args.seed)
    train, test = [], []
    for digit in range(10):
        rows = by_class[digit]
        rng.shuffle(rows)
        train += [(r, digit) for r in rows[: args.train_per_class]]
        test += [(r, digit) for r in rows[args.train_per_class : args.train_per_class + args.test_per_class]]
    rng.shuffle(train)
    rng.shuffle(test)

    args.out.mkdir(parents=True, exist_ok=True)
    for name, rows in (("train", train), ("test", test)):
        write_images(args.out / f"{name}-images.idx", [r for r, _ in rows])
        write_labels(args.out / f"{name}-labels.idx", [d for _, d in rows])
        print(f"{name}: {len(rows)} images")


if __name__ == "__main__":
    main()
