import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from cpa.src.engine import SweepTrajectory

PathLike = Union[str, Path]


def _save(fig: plt.Figure, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    logging.info(f"Saved plot to {path}")


def plot_sweep(trajectory: SweepTrajectory, path: PathLike, highlight: Optional[int] = None) -> None:
    """
    Peak |rho| of every guess against the number of traces. The highlighted
    guess (usually the true key byte) is drawn on top in red.
    """
    table = trajectory.scores_table()
    fig, ax = plt.subplots(1, 1, figsize=(10, 6))
    counts = list(table.columns)
    for guess, row in table.iterrows():
        if guess != highlight:
            ax.plot(counts, row.to_numpy(), color="grey", linewidth=0.5)
    if highlight is not None:
        ax.plot(counts, table.loc[highlight].to_numpy(), color="red", linewidth=2, label=f"guess {highlight:02X}")
        ax.legend()
    ax.set_xscale("log")
    ax.set_xlabel("number of traces")
    ax.set_ylabel("peak |correlation|")
    ax.set_title(f"key byte {trajectory.byte_index}")
    _save(fig, path)


def plot_correlation_vs_time(table: pd.DataFrame, path: PathLike, guesses: Optional[Sequence[int]] = None) -> None:
    fig, ax = plt.subplots(1, 1, figsize=(10, 6))
    for guess in (guesses if guesses is not None else table.index):
        ax.plot(table.columns, table.loc[guess].to_numpy(), label=f"guess {guess:02X}")
    if len(table.index) <= 8 or guesses is not None:
        ax.legend()
    ax.set_xlabel("sample")
    ax.set_ylabel("correlation")
    _save(fig, path)


def plot_histogram(table: pd.DataFrame, path: PathLike, title: str = "") -> None:
    fig, ax = plt.subplots(1, 1, figsize=(10, 6))
    widths = (table["bin_high"] - table["bin_low"]).to_numpy()
    ax.bar(table["bin_low"].to_numpy(), table["count"].to_numpy(), width=widths, align="edge")
    ax.axhline(float(np.mean(table["count"])), color="red", linewidth=1)
    ax.set_xlabel("value")
    ax.set_ylabel("count")
    ax.set_title(title)
    _save(fig, path)
