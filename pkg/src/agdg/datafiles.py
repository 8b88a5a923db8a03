"""Location of the bundled TSV tables (overridable with AGDG_DATA_DIR)."""

from __future__ import annotations

import csv
import os
from pathlib import Path

PACKAGE_DATA = Path(__file__).with_name("data")


def data_dir() -> Path:
    env = os.environ.get("AGDG_DATA_DIR")
    return Path(env) if env else PACKAGE_DATA


def data_path(name: str) -> Path:
    p = data_dir() / name
    if not p.exists():
        # fall back to the bundled copy so a partial override still works
        p = PACKAGE_DATA / name
    return p


def read_tsv(name: str) -> list[list[str]]:
    """Rows of a bundled TSV file with comment lines dropped."""
    rows = []
    with open(data_path(name), encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh, delimiter="\t"):
            if not row or row[0].startswith("#"):
                continue
            rows.append(row)
    return rows
