# adapters/seanmf_store.py
"""SeaNMF model directory: W.txt, Wc.txt, H.txt in triplet format plus meta.txt."""
import logging
from pathlib import Path
from typing import Optional

import numpy as np

from adapters.triplet_io import read_triplets, write_triplets
from core.errors import InputDataError
from schemas.topics import SeanmfModel

logger = logging.getLogger(__name__)

_FACTORS = ("W", "Wc", "H")


def save_seanmf(model: SeanmfModel, directory, fingerprint: Optional[str] = None) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name in _FACTORS:
        write_triplets(getattr(model, name), d / f"{name}.txt", fingerprint)
    meta = [
        f"K = {model.n_topics}",
        f"alpha = {float(model.alpha)!r}",
        f"seed = {model.seed}",
        "objective_trace = " + ",".join(repr(float(v)) for v in model.objective_trace),
    ]
    if fingerprint:
        meta.append(f"config_fingerprint = {fingerprint}")
    (d / "meta.txt").write_text("\n".join(meta) + "\n", encoding="utf-8")
    logger.info("Saved SeaNMF model (K=%d) to %s", model.n_topics, d)
    return d


def load_seanmf(directory) -> SeanmfModel:
    d = Path(directory)
    meta_path = d / "meta.txt"
    if not meta_path.exists():
        raise InputDataError("model metadata not found", path=str(meta_path))
    meta = {}
    for lineno, line in enumerate(meta_path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise InputDataError("malformed metadata line", path=str(meta_path), row=lineno)
        key, value = line.split("=", 1)
        meta[key.strip()] = value.strip()
    factors = {name: read_triplets(d / f"{name}.txt").toarray() for name in _FACTORS}
    k = int(meta["K"])
    if any(f.shape[1] != k for f in factors.values()):
        raise InputDataError(f"factor widths do not match K={k}", path=str(d))
    trace = [float(v) for v in meta.get("objective_trace", "").split(",") if v]
    return SeanmfModel(
        W=np.asarray(factors["W"]),
        Wc=np.asarray(factors["Wc"]),
        H=np.asarray(factors["H"]),
        alpha=float(meta["alpha"]),
        seed=int(meta["seed"]),
        objective_trace=trace,
    )
