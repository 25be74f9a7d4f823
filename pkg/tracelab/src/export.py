"""
Comma-separated exports. Every table has a header row so any plotting tool
can read it back.
"""
import logging
from pathlib import Path
from typing import Union

import pandas as pd

from attacks.src.report import AttackReport
from cpa.src.engine import SweepTrajectory

PathLike = Union[str, Path]


def _write(frame: pd.DataFrame, path: PathLike, index: bool) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=index)
    logging.info(f"Wrote {path}")


def export_correlation_csv(table: pd.DataFrame, path: PathLike) -> None:
    """
    Rows are guesses, columns sample indices.
    """
    _write(table, path, index=True)


def export_sweep_csv(trajectory: SweepTrajectory, path: PathLike) -> None:
    """
    Rows are guesses, columns grid counts.
    """
    _write(trajectory.scores_table(), path, index=True)


def export_histogram_csv(table: pd.DataFrame, path: PathLike) -> None:
    _write(table, path, index=False)


def export_report_csv(report: AttackReport, path: PathLike) -> None:
    _write(report.to_dataframe(), path, index=False)


def export_table_csv(table: pd.DataFrame, path: PathLike) -> None:
    _write(table, path, index=False)
