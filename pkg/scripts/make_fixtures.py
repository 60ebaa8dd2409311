"""Regenerate the committed test fixtures under tests/data.

Everything is seeded, so rerunning this script reproduces the same files
byte for byte. The 30-node fixture feeds the golden pipeline run and
includes the parser's special rows (comment, blank, neutral, duplicate,
self-loop) on purpose. The noise fixture plants a tightly wired
target-to-oncogene cluster on top of sparse background noise so the known
combinations sit in a clearly dominant bucket.
"""

import argparse
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"


def write_lines(path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def make_net30():
    rng = np.random.default_rng(20260401)
    n = 30
    syms = [f"G{i:02d}" for i in range(1, n + 1)]
    targets = ["G01", "G02", "G03", "G04", "G05", "G06", "G07", "G08"]
    onco = ["G25", "G26", "G27", "G28"]

    edges = set()
    # Backbone: every target reaches some oncogene in 2-3 hops through the
    # middle band, so the d=5 subnetwork is well populated.
    mid = [f"G{i:02d}" for i in range(9, 25)]
    for i, t in enumerate(targets):
        a = mid[(2 * i) % len(mid)]
        b = mid[(2 * i + 5) % len(mid)]
        edges.add((t, a))
        edges.add((a, b))
        edges.add((b, onco[i % len(onco)]))
    # Random sprinkle over the middle band plus a detached tail (G29, G30
    # and friends stay outside every short target-to-oncogene walk).
    for _ in range(40):
        u = mid[int(rng.integers(0, len(mid)))]
        v = syms[int(rng.integers(0, n))]
        if u != v:
            edges.add((u, v))
    edges.add(("G29", "G30"))
    edges.add(("G30", "G29"))
    edges.add(("G28", "G29"))

    rows = []
    for u, v in sorted(edges):
        sign = -1 if rng.random() < 0.15 else 1
        rows.append(f"{u}\t{v}\t{sign:+d}")

    lines = ["# thirty-node fixture network"]
    lines.extend(rows[:10])
    lines.append("")
    lines.append("G01\tG09\t0")        # neutral, dropped on load
    lines.extend(rows[10:])
    lines.append(rows[4])               # duplicate row
    lines.append("G10\tG10\t+1")       # self-loop, dropped with a warning count
    write_lines(DATA / "net30.tsv", lines)

    write_lines(DATA / "oncogenes30.txt", onco + ["GX99"])
    drug_rows = [
        "DR1\tG01", "DR1\tG02", "DR1\tG03",
        "DR2\tG04", "DR2\tG05",
        "DR3\tG05", "DR3\tG06", "DR3\tG07", "DR3\tG08",
        "DR4\tG02", "DR4\tG07",
        "DR5\tGZ42",                    # only unresolved targets: kept, empty
    ]
    write_lines(DATA / "drugs30.tsv", drug_rows)


def make_noise_net():
    rng = np.random.default_rng(20260402)
    targets = [f"T{i}" for i in range(1, 5)]
    genes = [f"ON{i}" for i in range(1, 4)]
    backg = [f"B{i:02d}" for i in range(1, 41)]
    syms = targets + genes + backg

    edges = set()
    # Planted cluster: every target hits every oncogene directly and via one
    # relay, so removing a few edges cannot disconnect the cluster.
    for t in targets:
        for g in genes:
            edges.add((t, g))
    for i, t in enumerate(targets):
        relay = backg[i]
        edges.add((t, relay))
        for g in genes:
            edges.add((relay, g))
    # Background: sparse random wiring among background nodes, plus a few
    # links back toward the cluster inputs.
    for _ in range(160):
        u = backg[int(rng.integers(0, len(backg)))]
        v = backg[int(rng.integers(0, len(backg)))]
        if u != v:
            edges.add((u, v))
    for _ in range(12):
        u = backg[int(rng.integers(0, len(backg)))]
        edges.add((u, targets[int(rng.integers(0, len(targets)))]))

    rows = []
    for u, v in sorted(edges):
        sign = -1 if rng.random() < 0.1 else 1
        rows.append(f"{u}\t{v}\t{sign:+d}")
    write_lines(DATA / "noise_net.tsv", rows)
    write_lines(DATA / "noise_oncogenes.txt", genes)
    write_lines(DATA / "noise_drugs.tsv", [f"DX\t{t}" for t in targets])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.parse_args()
    make_net30()
    make_noise_net()
    print(f"fixtures written under {DATA}")


if __name__ == "__main__":
    main()
