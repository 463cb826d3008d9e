# adapters/triplet_io.py
"""
Sparse matrix text format: a `# M=<m> nnz=<k>` header (plus `N=<n>` for non-square
matrices) and one `row col value` line per stored entry.
"""
import logging
import re
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.sparse as sp

from core.errors import InputDataError

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^#\s*M=(\d+)\s+nnz=(\d+)(?:\s+N=(\d+))?\s*$")


def write_triplets(matrix, path, fingerprint: Optional[str] = None) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    coo = sp.coo_matrix(matrix)
    coo.sum_duplicates()
    m, n = coo.shape
    header = f"# M={m} nnz={coo.nnz}" + ("" if m == n else f" N={n}")
    lines = [header]
    if fingerprint:
        lines.append(f"# config_fingerprint={fingerprint}")
    order = np.lexsort((coo.col, coo.row))
    for i in order:
        lines.append(f"{int(coo.row[i])} {int(coo.col[i])} {float(coo.data[i])!r}")
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug("Wrote %dx%d matrix with %d entries to %s", m, n, coo.nnz, p)
    return p


def read_triplets(path) -> sp.csr_matrix:
    p = Path(path)
    if not p.exists():
        raise InputDataError("triplet file not found", path=str(p))
    lines = p.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise InputDataError("empty triplet file", path=str(p))
    match = _HEADER.match(lines[0].strip())
    if not match:
        raise InputDataError("malformed triplet header", path=str(p), row=1)
    m, nnz = int(match.group(1)), int(match.group(2))
    n = int(match.group(3)) if match.group(3) else m
    rows, cols, vals = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputDataError("malformed triplet line (expected row col value)", path=str(p), row=lineno)
        try:
            r, c, v = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise InputDataError(f"non-numeric triplet '{line.strip()}'", path=str(p), row=lineno) from exc
        if not (0 <= r < m and 0 <= c < n):
            raise InputDataError(f"entry ({r}, {c}) outside {m}x{n}", path=str(p), row=lineno)
        rows.append(r)
        cols.append(c)
        vals.append(v)
    if len(vals) != nnz:
        raise InputDataError(f"header declares {nnz} entries but {len(vals)} were read", path=str(p))
    return sp.csr_matrix((vals, (rows, cols)), shape=(m, n))
