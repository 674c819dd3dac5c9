"""Static reporting: data-map figures plus delimited coordinate output.

The report directory holds everything a session produces for offline
inspection: datamap.png (confidence vs. variability scatter, marker shape
by gold label, color by region, mined DCCs ringed in black), regions.png
(per-region example and DCC counts), coords.csv, coords.jsonl, and
dccs.jsonl with the full mined records.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.lines import Line2D

from .corpus import CorpusHandle, Label
from .datamap import DataMapCoords, Region, write_coords_jsonl
from .mining import DccRecord, dccs_to_jsonl

# circle = entailment, triangle = neutral, square = contradiction
LABEL_MARKERS: dict[Label, str] = {
    Label.ENTAILMENT: "o",
    Label.NEUTRAL: "^",
    Label.CONTRADICTION: "s",
}

REGION_COLORS: dict[Region, str] = {
    Region.EASY_TO_LEARN: "tab:blue",
    Region.AMBIGUOUS: "tab:orange",
    Region.HARD_TO_LEARN: "tab:red",
    Region.OTHER: "tab:gray",
}


def write_coords_csv(
    coords: Mapping[str, DataMapCoords],
    corpus: CorpusHandle,
    dcc_ids: frozenset[str],
    path: str | Path,
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "confidence", "variability", "region", "gold_label", "is_dcc"])
        for pid in sorted(coords):
            c = coords[pid]
            writer.writerow(
                [
                    pid,
                    repr(c.confidence),
                    repr(c.variability),
                    c.region.value,
                    corpus.point(pid).gold_label.value,
                    int(pid in dcc_ids),
                ]
            )


def render_datamap_figure(
    coords: Mapping[str, DataMapCoords],
    corpus: CorpusHandle,
    dcc_ids: frozenset[str],
    path: str | Path,
    dpi: int = 150,
) -> None:
    """Scatter of the data map with DCCs highlighted.

    x = variability (clamped axis [0, 0.5]), y = confidence ([0, 1]).
    """
    fig, ax = plt.subplots(figsize=(7, 6))
    for label, marker in LABEL_MARKERS.items():
        for region, color in REGION_COLORS.items():
            xs, ys = [], []
            for pid, c in coords.items():
                if corpus.point(pid).gold_label is label and c.region is region:
                    xs.append(c.variability)
                    ys.append(c.confidence)
            if xs:
                ax.scatter(xs, ys, marker=marker, c=color, s=22, alpha=0.75, linewidths=0)
    if dcc_ids:
        xs = [coords[pid].variability for pid in sorted(dcc_ids)]
        ys = [coords[pid].confidence for pid in sorted(dcc_ids)]
        ax.scatter(
            xs, ys, marker="o", facecolors="none", edgecolors="black", s=110,
            linewidths=1.6, label="DCC",
        )
    ax.set_xlim(0.0, 0.5)
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("variability")
    ax.set_ylabel("confidence")
    ax.set_title("Data map")
    shape_handles = [
        Line2D([], [], color="k", marker=m, linestyle="", label=lab.value)
        for lab, m in LABEL_MARKERS.items()
    ]
    region_handles = [
        Line2D([], [], color=c, marker="o", linestyle="", label=r.value)
        for r, c in REGION_COLORS.items()
    ]
    dcc_handle = [
        Line2D([], [], marker="o", markerfacecolor="none", markeredgecolor="black",
               linestyle="", label="DCC")
    ]
    ax.legend(
        handles=shape_handles + region_handles + dcc_handle,
        loc="lower right", fontsize=8, framealpha=0.9,
    )
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def render_region_counts_figure(
    coords: Mapping[str, DataMapCoords],
    dcc_ids: frozenset[str],
    path: str | Path,
    dpi: int = 150,
) -> None:
    """Bar chart: examples per region, with the DCC share stacked on top."""
    regions = list(REGION_COLORS)
    totals = {r: 0 for r in regions}
    dcc_counts = {r: 0 for r in regions}
    for pid, c in coords.items():
        totals[c.region] += 1
        if pid in dcc_ids:
            dcc_counts[c.region] += 1
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = range(len(regions))
    plain = [totals[r] - dcc_counts[r] for r in regions]
    mined = [dcc_counts[r] for r in regions]
    ax.bar(xs, plain, color=[REGION_COLORS[r] for r in regions], alpha=0.75, label="examples")
    ax.bar(xs, mined, bottom=plain, color="black", label="DCCs")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r.value for r in regions], rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("examples")
    ax.set_title("Examples per region")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def write_report(
    coords: Mapping[str, DataMapCoords],
    corpus: CorpusHandle,
    dcc_records: list[DccRecord],
    out_dir: str | Path,
) -> dict[str, Path]:
    """Write figures, delimited coordinates, and mined-record JSONL into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dcc_ids = frozenset(r.id for r in dcc_records)
    paths = {
        "figure": out / "datamap.png",
        "regions_figure": out / "regions.png",
        "coords": out / "coords.csv",
        "coords_jsonl": out / "coords.jsonl",
        "dccs": out / "dccs.jsonl",
    }
    render_datamap_figure(coords, corpus, dcc_ids, paths["figure"])
    render_region_counts_figure(coords, dcc_ids, paths["regions_figure"])
    write_coords_csv(coords, corpus, dcc_ids, paths["coords"])
    write_coords_jsonl(coords, paths["coords_jsonl"])
    paths["dccs"].write_text(dccs_to_jsonl(dcc_records), encoding="utf-8")
    return paths
