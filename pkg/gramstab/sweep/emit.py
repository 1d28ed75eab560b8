from pathlib import Path

import matplotlib
import numpy as np
import pandas as pd
from loguru import logger
from matplotlib.colors import ListedColormap
from matplotlib.figure import Figure
from matplotlib.patches import Patch

from ..core import Family
from .engine import SweepResult

matplotlib.use("Agg")

ORACLE_COLUMN = "oracle_unstable"
LAYER_ALPHA = 0.35


def column_name(criterion: str) -> str:
    return criterion.replace("-", "_")


def to_frame(result: SweepResult) -> pd.DataFrame:
    cfg = result.config
    frame = pd.DataFrame(
        {
            "k": [record.k for record in result.records],
            "c": [record.c for record in result.records],
        }
    )
    for index, criterion in enumerate(cfg.criteria):
        frame[column_name(criterion)] = [int(r.fired[index]) for r in result.records]
    if cfg.oracle:
        # failed oracle cells stay empty
        frame[ORACLE_COLUMN] = pd.array(
            [r.oracle_unstable for r in result.records], dtype="Int64"
        )
    return frame


def emit_csv(result: SweepResult, destination: str | Path):
    to_frame(result).to_csv(
        destination,
        index=False,
        float_format="%.17g",
        lineterminator="\n",
        encoding="utf-8",
    )
    logger.info("Wrote {} cells to {}", len(result.records), destination)


def emit_svg(result: SweepResult, destination: str | Path):
    """
    One translucent layer per criterion over the ``(k, c)`` plane, an outline of
    the oracle's unstable set when available, and a legend for every layer.
    """
    cfg = result.config
    ks, cs = cfg.k_values(), cfg.c_values()
    colors = matplotlib.colormaps["tab10"].colors

    fig = Figure(figsize=(6, 5))
    ax = fig.add_subplot()
    handles = []
    for index, criterion in enumerate(cfg.criteria):
        color = colors[index % len(colors)]
        grid = result.fired_grid(criterion)
        if grid.any():
            ax.pcolormesh(
                ks,
                cs,
                np.ma.masked_where(~grid.T, grid.T.astype(float)),
                cmap=ListedColormap([color]),
                shading="nearest",
                alpha=LAYER_ALPHA,
                linewidth=0,
                antialiased=False,
            )
        handles.append(Patch(facecolor=color, alpha=LAYER_ALPHA, label=criterion))

    if cfg.oracle:
        unstable = result.oracle_grid()
        if unstable.any() and not unstable.all():
            ax.contour(ks, cs, unstable.T.astype(float), levels=[0.5], colors="black")
        handles.append(Patch(facecolor="none", edgecolor="black", label="oracle unstable"))

    if cfg.family == Family.CHARGED_PARTICLE:
        ax.axhline(0.0, color="grey", linestyle="--", linewidth=0.8)
        ax.axvline(0.0, color="grey", linestyle="--", linewidth=0.8)

    ax.set_xlim(cfg.k_min, cfg.k_max)
    ax.set_ylim(cfg.c_min, cfg.c_max)
    ax.set_xlabel("k")
    ax.set_ylabel("c")
    ax.set_title(f"Instability regions: {cfg.family.safe_name}")
    ax.legend(handles=handles, fontsize=8, loc="upper right")
    fig.tight_layout()
    fig.savefig(destination, format="svg", metadata={"Date": None})
    logger.info("Wrote region image to {}", destination)
