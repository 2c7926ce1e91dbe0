"""Report rendering: delimited tables and matplotlib figures.

The report path of the CLI writes, next to each other, a CSV table of the
per-degree homology data (and class group invariants when an order is
present) and PNG figures of the same numbers.  Figures are rendered with the
Agg backend so the command works headless; all rows are sorted so reruns are
bit-identical.
"""

from __future__ import annotations

import csv
import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def homology_rows(pres):
    """Rows (degree, free_rank, torsion-string) of a homology presentation."""
    rows = []
    for g in pres.degrees():
        comp = pres.component(g)
        torsion = ".".join(str(t) for t in comp.torsion)
        rows.append((g, comp.free_rank, torsion))
    return rows


def write_homology_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["degree", "free_rank", "torsion_invariants"])
        for g, free, torsion in rows:
            w.writerow([g, free, torsion])


def render_homology_figure(path, rows, title="homology"):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if rows:
        degs = [r[0] for r in rows]
        free = [r[1] for r in rows]
        tors = [len(r[2].split(".")) if r[2] else 0 for r in rows]
        ax.bar([d - 0.18 for d in degs], free, width=0.36, label="free rank")
        ax.bar([d + 0.18 for d in degs], tors, width=0.36, label="torsion factors")
        for r in rows:
            if r[2]:
                ax.annotate(r[2], (r[0] + 0.18, len(r[2].split("."))),
                            ha="center", va="bottom", fontsize=8)
        ax.set_xticks(degs)
        ax.legend(frameon=False)
    else:
        ax.text(0.5, 0.5, "zero homology", ha="center", va="center",
                transform=ax.transAxes)
    ax.set_xlabel("degree")
    ax.set_ylabel("rank / #factors")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_classgroup_figure(path, groups, title="class groups"):
    """groups: list of (label, invariant list)."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    labels = [g[0] for g in groups]
    orders = []
    for _, invs in groups:
        o = 1
        for d in invs:
            o *= d
        orders.append(o)
    xs = range(len(labels))
    ax.bar(xs, orders, width=0.5)
    for x, (label, invs) in zip(xs, groups):
        text = " x ".join(f"C{d}" for d in invs) if invs else "trivial"
        ax.annotate(text, (x, orders[x]), ha="center", va="bottom", fontsize=9)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels)
    ax.set_ylabel("group order")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_summary_json(path, summary):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
