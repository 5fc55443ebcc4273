#!/usr/bin/env python3
"""Write a 5000-digit MNIST subset (500 per class) as IDX files.

The digits come from the copy bundled inside the mlxtend wheel, which is
reachable through an ordinary package index even on machines without general
internet access. Output:

    <out>/train-images-idx3-ubyte
    <out>/train-labels-idx1-ubyte
"""
import argparse
import gzip
import io
import struct
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def fetch_wheel(workdir: Path) -> Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "mlxtend", "--no-deps",
         "--only-binary", ":all:", "-q", "-d", str(workdir)],
        check=True)
    wheels = sorted(workdir.glob("mlxtend-*.whl"))
    if not wheels:
        sys.exit("mlxtend wheel not found after download")
    return wheels[-1]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data/mnist")
    ap.add_argument("--wheel", help="use an already downloaded mlxtend wheel")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        wheel = Path(args.wheel) if args.wheel else fetch_wheel(Path(tmp))
        with zipfile.ZipFile(wheel) as zf:
            raw = gzip.decompress(zf.read(MEMBER)).decode()

    images, labels = [], []
    for line in io.StringIO(raw):
        line = line.strip()
        if not line:
            continue
        vals = [int(float(v)) for v in line.split(",")]
        images.append(bytes(vals[:-1]))
        labels.append(vals[-1])

    n = len(images)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "train-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, n, 28, 28))
        for img in images:
            f.write(img)
    with open(out / "train-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, n))
        f.write(bytes(labels))
    print(f"wrote {n} digits to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
