import os
import tempfile
from pathlib import Path

import pandas as pd

from src.infrastructure.lib.logger import frac_logger

FLOAT_FORMAT = "%.16e"


def write_csv_atomic(frame: pd.DataFrame, path: str | Path) -> Path:
    """
    Write ``frame`` as UTF-8 CSV with 17 significant digits.

    The file is written next to its destination and moved into place, so a
    reader never observes a partially written report.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(
        prefix=f".{target.name}.", suffix=".tmp", dir=target.parent
    )
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
            frame.to_csv(stream, index=False, float_format=FLOAT_FORMAT)
        os.replace(temp_name, target)
    except Exception:
        if os.path.exists(temp_name):
            os.remove(temp_name)
        raise

    frac_logger.debug(f"Wrote {len(frame)} rows to {target}")
    return target


def read_samples_csv(path: str | Path) -> tuple[pd.Series | None, pd.Series]:
    """
    Read a sampled function from CSV.

    Accepts either a ``t,u`` pair of columns or a single ``u`` column; the
    node column is returned as ``None`` when absent.
    """
    frame = pd.read_csv(path)
    if "u" not in frame.columns:
        raise ValueError(f"{path}: expected a 'u' column, found {list(frame.columns)}")
    nodes = frame["t"] if "t" in frame.columns else None
    return nodes, frame["u"]
