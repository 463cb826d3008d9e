# core/errors.py
"""
Exception hierarchy for the forecasting pipeline.

InputDataError maps to CLI exit code 2, every other PipelineError to exit code 1.
"""
from __future__ import annotations

from typing import Optional


class PipelineError(RuntimeError):
    """Base class for every error raised by the pipeline."""


class InputDataError(PipelineError):
    """Bad or missing input: files, columns, dates, lexicon lines, config values."""

    def __init__(self, message: str, path: Optional[str] = None, row: Optional[int] = None):
        self.path = path
        self.row = row
        parts = [message]
        if path:
            parts.append(f"path={path}")
        if row is not None:
            parts.append(f"row={row}")
        super().__init__(" | ".join(parts))


class ComputationError(PipelineError):
    """A numerical stage could not produce a valid result."""


class EmptyVocabularyError(ComputationError):
    pass


class DimensionMismatchError(ComputationError):
    pass


class DivergenceError(ComputationError):
    def __init__(self, message: str, step: Optional[int] = None):
        self.step = step
        super().__init__(message if step is None else f"{message} (step {step})")


class CollinearityError(ComputationError):
    pass


class NotPositiveDefiniteError(ComputationError):
    pass


class InsufficientDataError(ComputationError):
    pass


class DateAlignmentError(ComputationError):
    pass


class MetricsError(ComputationError):
    def __init__(self, message: str, index: Optional[int] = None):
        self.index = index
        super().__init__(message if index is None else f"{message} (index {index})")


class AllRoundsDiscardedError(ComputationError):
    pass
