"""Report figures rendered next to the delimited outputs.

Kept deliberately plain: these are working plots for inspecting a run, not
publication layouts.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def sweep_figure(rows, path):
    """Two panels: F1 against CK (one curve per PK) and against PK (per CK)."""
    pks = sorted({r[0] for r in rows})
    cks = sorted({r[1] for r in rows})
    f1 = {(pk, ck): v for pk, ck, _, _, v in rows}
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for pk in pks:
        ax1.plot(cks, [f1[(pk, ck)] for ck in cks], marker="o", label=f"PK={pk:g}")
    ax1.set_xlabel("CK")
    ax1.set_ylabel("F1")
    ax1.set_title("F1 over CK")
    ax1.legend(fontsize=8)
    for ck in cks:
        ax2.plot(pks, [f1[(pk, ck)] for pk in pks], marker="o", label=f"CK={ck:g}")
    ax2.set_xlabel("PK")
    ax2.set_ylabel("F1")
    ax2.set_title("F1 over PK")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def classify_figure(graph, partition, path):
    """Class sizes plus the edge-weight matrix reordered by class."""
    classes = partition.classes()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.5))
    sizes = [len(classes[cid]) for cid in sorted(classes)]
    ax1.bar(range(len(sizes)), sizes)
    ax1.set_xlabel("class id")
    ax1.set_ylabel("members")
    ax1.set_title(f"{partition.num_classes} classes, "
                  f"modularity {partition.modularity:.3f}")
    order = [w for cid in sorted(classes) for w in classes[cid]]
    pos = {w: i for i, w in enumerate(order)}
    n = len(order)
    mat = np.zeros((n, n))
    for i, j, w in graph.edges:
        a, b = pos[graph.nodes[i]], pos[graph.nodes[j]]
        mat[a, b] = mat[b, a] = w
    im = ax2.imshow(mat, cmap="viridis")
    ax2.set_title("edge weights (class-ordered)")
    fig.colorbar(im, ax=ax2, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
