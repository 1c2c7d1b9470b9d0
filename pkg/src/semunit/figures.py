"""Matplotlib renderings for the CLI report path.

``su profile --out DIR`` drops these PNGs next to the CSV summary;
``su mindmap`` draws a unit's display graph. Layouts are seeded so two
runs over the same store produce the same pictures.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .explore import FrequencyDistribution, NumericDistribution, ProfileSummary
from .schemas import MindMapGraph


def profile_figures(summary: ProfileSummary, outdir) -> list[Path]:
    """Bar charts for unit classes and ontology classes, plus one value
    histogram-style figure per numeric slot distribution."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def bars(counts: dict, title: str, filename: str) -> None:
        if not counts:
            return
        labels = [str(k).rsplit("/", 1)[-1].rsplit("#", 1)[-1] for k in sorted(counts)]
        values = [counts[k] for k in sorted(counts)]
        fig, ax = plt.subplots(figsize=(8, max(2.0, 0.4 * len(labels) + 1)))
        ax.barh(labels, values, color="#4878a8")
        ax.set_xlabel("count")
        ax.set_title(title)
        fig.tight_layout()
        path = outdir / filename
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    bars(summary.unit_class_counts, "Semantic units per class", "unit_classes.png")
    bars(summary.class_instance_counts, "Instances per ontology class", "class_instances.png")

    for (cls, slot), dist in sorted(summary.slot_distributions.items()):
        stem = f"{str(cls).rsplit('/', 1)[-1]}_{slot}".replace("#", "_")
        if isinstance(dist, NumericDistribution):
            fig, ax = plt.subplots(figsize=(6, 3))
            lo, hi, mean = float(dist.minimum), float(dist.maximum), float(dist.mean)
            ax.hlines(1, lo, hi, color="#4878a8", linewidth=6, alpha=0.5)
            ax.plot([mean], [1], "o", color="#a84848")
            ax.set_yticks([])
            ax.set_xlabel(slot)
            ax.set_title(f"{stem}: n={dist.count}, min={lo}, mean={mean:.4g}, max={hi}")
        elif isinstance(dist, FrequencyDistribution):
            labels = [v for v, _ in dist.top]
            values = [c for _, c in dist.top]
            fig, ax = plt.subplots(figsize=(6, max(2.0, 0.35 * len(labels) + 1)))
            ax.barh(labels, values, color="#6a9a58")
            ax.set_xlabel("count")
            ax.set_title(stem)
        else:  # pragma: no cover - future distribution kinds
            continue
        fig.tight_layout()
        path = outdir / f"slot_{stem}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def mindmap_figure(mindmap: MindMapGraph, path, seed: int = 7) -> Path:
    """Draw a mind-map render model as a labeled node-edge figure."""
    graph = nx.DiGraph()
    labels = {}
    for node in mindmap.nodes:
        graph.add_node(node.id)
        labels[node.id] = node.display_label
    edge_labels = {}
    for edge in mindmap.edges:
        graph.add_edge(edge.source, edge.target)
        edge_labels[(edge.source, edge.target)] = edge.label
    pos = nx.spring_layout(graph, seed=seed)
    fig, ax = plt.subplots(figsize=(7, 5))
    nx.draw_networkx_nodes(graph, pos, ax=ax, node_color="#cfe0f0", node_size=2200)
    nx.draw_networkx_edges(graph, pos, ax=ax, arrows=True, edge_color="#555555")
    nx.draw_networkx_labels(graph, pos, labels, ax=ax, font_size=9)
    nx.draw_networkx_edge_labels(graph, pos, edge_labels, ax=ax, font_size=8)
    ax.set_axis_off()
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
