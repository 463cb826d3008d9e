from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Protocol, Sequence, Union

import pandas as pd


class PolarityScorer(Protocol):
    def score(self, tokens: Sequence[str]) -> float:
        ...


class OutputSink(Protocol):
    fingerprint: str
    written: List[Path]

    def save_csv(self, rows: Union[pd.DataFrame, Iterable[Mapping[str, Any]]], name: str,
                 columns: Union[List[str], None] = None, index: bool = False) -> Path:
        ...

    def save_json(self, obj: Dict[str, Any], name: str) -> Path:
        ...

    def path(self, name: str) -> Path:
        ...

    def track(self, path: Union[str, Path]) -> Path:
        ...

    def rollback(self) -> int:
        ...
