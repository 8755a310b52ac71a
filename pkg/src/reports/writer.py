"""
Output bundle writer.

Writes tables as CSV files into one directory and finishes with a manifest
that is enough to re-run the bundle exactly.
"""

import hashlib
from pathlib import Path
from typing import Dict, List, Union

import structlog

from .tables import Table

logger = structlog.get_logger()

MANIFEST_NAME = "manifest.txt"


class BundleWriter:
    """
    Collects tables into an output directory.

    Example:
        writer = BundleWriter("output/state_a")
        writer.write(jsi_table(jsa))
        writer.write_manifest({"seed": "7"})
    """

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir)
        self.written: Dict[str, str] = {}

    def write(self, table: Table) -> Path:
        """Write one table; returns its path."""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / table.filename
        payload = table.to_csv().encode("utf-8")
        path.write_bytes(payload)
        self.written[table.filename] = hashlib.sha256(payload).hexdigest()
        logger.debug("Wrote table", path=str(path), rows=len(table.rows))
        return path

    def write_all(self, tables: List[Table]) -> List[Path]:
        return [self.write(table) for table in tables]

    def write_manifest(self, entries: Dict[str, str]) -> Path:
        """
        Write `manifest.txt`: run entries, then one sha256 line per file.

        Entries are written in sorted key order and carry no timestamps.
        """
        self.out_dir.mkdir(parents=True, exist_ok=True)
        lines = [f"{key}: {entries[key]}" for key in sorted(entries)]
        for filename in sorted(self.written):
            lines.append(f"file {filename}: sha256 {self.written[filename]}")
        path = self.out_dir / MANIFEST_NAME
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info("Bundle complete", directory=str(self.out_dir), files=len(self.written))
        return path
