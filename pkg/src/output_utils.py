import os
from typing import Dict

from .figures import FIGURES


def figure_path(output_dir: str, fig_id: int) -> str:
    return os.path.join(output_dir, f"figure_{fig_id}.csv")


def figure_status(output_dir: str) -> Dict[int, bool]:
    """Return which figure CSVs already exist (and are non-empty) in output_dir."""
    status = {}
    for fig_id in FIGURES:
        path = figure_path(output_dir, fig_id)
        status[fig_id] = os.path.exists(path) and os.path.getsize(path) > 0
    return status


def check_figures_exist(output_dir: str) -> bool:
    """Check whether the data behind every figure has been generated.

    Returns:
        bool: True if all figure CSVs exist and are non-empty.
    """
    return all(figure_status(output_dir).values())
