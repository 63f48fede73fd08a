"""Write full-precision per-(label, sweep) medians of a sweep CSV as JSON.

The JSON is the reference the renderer's median computation is tested
against; numpy's median is the independent implementation. Non-finite
medians are stored as the string "inf" because JSON has no infinity.
"""

import csv
import json
import math
import sys

import numpy as np


def main(src: str, dst: str) -> None:
    groups: dict = {}
    with open(src, newline="") as fh:
        for row in csv.DictReader(fh):
            label = groups.setdefault(row["label"], {})
            label.setdefault(row["sweep"], []).append(float(row["peb_m"]))
    medians = {}
    for label, sweeps in groups.items():
        medians[label] = {}
        for sweep, values in sweeps.items():
            med = float(np.median(values))
            medians[label][sweep] = med if math.isfinite(med) else "inf"
    with open(dst, "w") as fh:
        json.dump(medians, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
