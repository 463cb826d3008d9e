# services/storage_service.py
# Output writer: every artifact carries the run's config fingerprint
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Union

import pandas as pd

logger = logging.getLogger(__name__)

FINGERPRINT_KEY = "config_fingerprint"

Rows = Union[pd.DataFrame, Iterable[Mapping[str, Any]]]


class OutputWriter:
    """Writes CSV/JSON under one directory and remembers every path so a failed run can be rolled back."""

    def __init__(self, base: Union[str, Path], fingerprint: str):
        self.base = Path(base)
        self.fingerprint = fingerprint
        self.written: List[Path] = []
        self.base.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        p = self.base / name
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    def track(self, path: Union[str, Path]) -> Path:
        p = Path(path)
        if p not in self.written:
            self.written.append(p)
        return p

    def save_csv(self, rows: Rows, name: str, columns: Optional[List[str]] = None, index: bool = False) -> Path:
        frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows), columns=columns)
        p = self.track(self.path(name))
        with p.open("w", encoding="utf-8", newline="") as fh:
            fh.write(f"# {FINGERPRINT_KEY}={self.fingerprint}\n")
            frame.to_csv(fh, index=index, lineterminator="\n")
        logger.info("Saved CSV to %s (%d rows)", p, len(frame))
        return p

    def save_json(self, obj: Dict[str, Any], name: str) -> Path:
        payload = dict(obj)
        payload[FINGERPRINT_KEY] = self.fingerprint
        p = self.track(self.path(name))
        p.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
        logger.info("Saved JSON to %s", p)
        return p

    def rollback(self) -> int:
        removed = 0
        for p in reversed(self.written):
            if p.is_file():
                p.unlink()
                removed += 1
        # drop directories this run left empty
        for p in sorted({q.parent for q in self.written}, key=lambda d: len(d.parts), reverse=True):
            if p != self.base and p.is_dir() and not any(p.iterdir()):
                p.rmdir()
        logger.warning("Rolled back %d output files in %s", removed, self.base)
        self.written.clear()
        return removed


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Reads a CSV written by OutputWriter, skipping the fingerprint line."""
    return pd.read_csv(path, skiprows=_fingerprint_lines(path))


def read_fingerprint(path: Union[str, Path]) -> Optional[str]:
    with Path(path).open(encoding="utf-8") as fh:
        first = fh.readline().strip()
    prefix = f"# {FINGERPRINT_KEY}="
    return first[len(prefix):] if first.startswith(prefix) else None


def _fingerprint_lines(path: Union[str, Path]) -> int:
    return 1 if read_fingerprint(path) is not None else 0
