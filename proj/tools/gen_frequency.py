#!/usr/bin/env python3
"""Write data/sample_frequency.csv: synthetic Zipf-like order counts.

Item i gets round(100000 / (i + 1) ** 0.8) orders; rows are shuffled with a
fixed seed so the file order carries no rank information.
"""
import csv
import random
from pathlib import Path

ITEMS = 2000
rows = [(i, round(100000 / (i + 1) ** 0.8)) for i in range(ITEMS)]
random.Random(7).shuffle(rows)
out = Path(__file__).resolve().parent.parent / "data" / "sample_frequency.csv"
with out.open("w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["item", "count"])
    w.writerows(rows)
print(f"wrote {out} ({ITEMS} items)")
