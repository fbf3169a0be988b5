"""Plot I(E) curves from `milnequant scan` CSV files.

Developer tooling; needs matplotlib, which the package itself does not.

    python3 tools/plot_figures.py fig2.png minus.csv:I- plus.csv:I+
"""
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def load(path):
    E, I = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["I"] != "nan":
                E.append(float(row["E"]))
                I.append(float(row["I"]))
    return E, I


def main(argv):
    if len(argv) < 2:
        sys.exit(__doc__)
    out, curves = argv[0], argv[1:]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for spec in curves:
        path, _, label = spec.partition(":")
        ax.plot(*load(path), label=label or path)
    ax.set_xlabel("E")
    ax.set_ylabel("I(E)")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


if __name__ == "__main__":
    main(sys.argv[1:])
