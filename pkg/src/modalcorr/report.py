"""Batch report: one delimited summary file plus rendered figures.

For every input formula the report runs the full pipeline (classify,
correspond, oracle verification) and writes one CSV row.  Dependency
digraphs are rendered to PNG alongside the CSV, and when verification
finds a counterexample frame, that frame is rendered too.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from . import classify, correspond, fol, modal, semantics
from .errors import ModalCorrError, Unsupported

CSV_COLUMNS = [
    "index",
    "formula",
    "class",
    "definite",
    "letters",
    "digraph_edges",
    "order",
    "conjuncts",
    "combined",
    "verdict",
    "counterexample",
    "digraph_figure",
    "frame_figure",
]


def draw_digraph(digraph: classify.DependencyDigraph, title: str, path: Path) -> None:
    g = nx.DiGraph()
    g.add_nodes_from(sorted(digraph.vertices))
    g.add_edges_from(sorted(digraph.edges))
    pos = nx.circular_layout(g)
    fig, ax = plt.subplots(figsize=(4, 4))
    nx.draw_networkx(
        g,
        pos,
        ax=ax,
        node_color="#c7dcf0",
        edgecolors="#2c5d8a",
        node_size=900,
        arrowsize=18,
        font_size=11,
    )
    ax.set_title(title, fontsize=9)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def draw_frame(frame: semantics.Frame, world: int | None, title: str, path: Path) -> None:
    g = nx.DiGraph()
    g.add_nodes_from(range(frame.size))
    g.add_edges_from(frame.pairs())
    pos = nx.circular_layout(g)
    colors = [
        "#f2b8b5" if world is not None and w == world else "#c7dcf0"
        for w in range(frame.size)
    ]
    fig, ax = plt.subplots(figsize=(4, 4))
    nx.draw_networkx(
        g,
        pos,
        ax=ax,
        node_color=colors,
        edgecolors="#2c5d8a",
        node_size=900,
        arrowsize=18,
        font_size=11,
    )
    ax.set_title(title, fontsize=9)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(
    formulas: list[str],
    out_dir: str | Path,
    max_n: int = 3,
    sample4: int = 0,
    seed: int = semantics.DEFAULT_SEED,
) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    rows = []
    for i, text in enumerate(formulas):
        f = modal.parse_modal(text)
        report = classify.classify(f)
        row = {
            "index": i,
            "formula": modal.print_modal(f),
            "class": report.syntactic_class.name,
            "definite": "yes" if report.definite else "no",
            "letters": " ".join(modal.prop_letters(f)),
            "digraph_edges": "",
            "order": "",
            "conjuncts": "",
            "combined": "",
            "verdict": "",
            "counterexample": "",
            "digraph_figure": "",
            "frame_figure": "",
        }
        if report.digraph is not None:
            row["digraph_edges"] = " ".join(
                f"{a}->{b}" for a, b in sorted(report.digraph.edges)
            )
            row["order"] = " ".join(report.order) if report.order else "(cyclic)"
            fig_path = out / f"digraph_{i}.png"
            draw_digraph(report.digraph, modal.print_modal(f), fig_path)
            row["digraph_figure"] = fig_path.name
            written.append(fig_path)
        try:
            res = correspond.correspond(f)
        except Unsupported:
            row["verdict"] = "unsupported"
            rows.append(row)
            continue
        except ModalCorrError as exc:
            row["verdict"] = f"error: {exc}"
            rows.append(row)
            continue
        row["conjuncts"] = str(len(res.conjuncts))
        row["combined"] = fol.print_fo(res.combined)
        bad = semantics.check_local_correspondence(
            f, res.combined, max_n, sample4=sample4, seed=seed
        )
        if bad is None:
            row["verdict"] = "pass"
        else:
            row["verdict"] = "counterexample"
            row["counterexample"] = f"{bad.frame.to_literal()} @ {bad.world}"
            fig_path = out / f"frame_{i}.png"
            draw_frame(
                bad.frame,
                bad.world,
                f"{modal.print_modal(f)} fails at {bad.world}",
                fig_path,
            )
            row["frame_figure"] = fig_path.name
            written.append(fig_path)
        rows.append(row)
    csv_path = out / "report.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    written.insert(0, csv_path)
    return written
