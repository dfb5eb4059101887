# app/linalg/signs.py

from app.core.exceptions import DimensionMismatch
from typing import Any, Sequence, Tuple
from app.linalg.matrix import RationalMatrix
from pydantic import BaseModel, ConfigDict, model_validator

Sign = int  # -1, 0 or +1


class SignPattern(BaseModel):
    """Sign pattern of a matrix, the representative of its qualitative class."""

    n_rows: int
    n_cols: int
    entries: Tuple[Tuple[Sign, ...], ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_entries(self):
        if len(self.entries) != self.n_rows or any(len(row) != self.n_cols for row in self.entries):
            raise ValueError("sign pattern dimensions do not match its entries")
        if any(s not in (-1, 0, 1) for row in self.entries for s in row):
            raise ValueError("sign pattern entries must be -1, 0 or 1")
        return self

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols


def _sign(value: Any, tolerance: float = 0.0) -> Sign:
    if value > tolerance:
        return 1
    if value < -tolerance:
        return -1
    return 0


def _rows_of(matrix: Any) -> Sequence[Sequence[Any]]:
    if isinstance(matrix, RationalMatrix):
        return matrix.rows
    return [list(row) for row in matrix]


def sign_pattern(matrix: Any) -> SignPattern:
    rows = _rows_of(matrix)
    entries = tuple(tuple(_sign(a) for a in row) for row in rows)
    n_cols = len(entries[0]) if entries else (matrix.n_cols if isinstance(matrix, RationalMatrix) else 0)
    return SignPattern(n_rows=len(entries), n_cols=n_cols, entries=entries)


def _signs_against(matrix: Any, pattern: SignPattern, tolerance: float):
    rows = _rows_of(matrix)
    if len(rows) != pattern.n_rows or any(len(row) != pattern.n_cols for row in rows):
        raise DimensionMismatch(f"matrix does not match a {pattern.shape} sign pattern")
    for row, pattern_row in zip(rows, pattern.entries):
        for value, p in zip(row, pattern_row):
            yield _sign(value, tolerance), p


def in_Q(matrix: Any, pattern: SignPattern, tolerance: float = 0.0) -> bool:
    """Same sign pattern, entry for entry."""
    return all(s == p for s, p in _signs_against(matrix, pattern, tolerance))


def in_Q0(matrix: Any, pattern: SignPattern, tolerance: float = 0.0) -> bool:
    """Closure of the qualitative class: pattern nonzeros may vanish, pattern zeros must stay zero."""
    return all(s == p or (s == 0 and p != 0) for s, p in _signs_against(matrix, pattern, tolerance))


def in_Q1(matrix: Any, pattern: SignPattern, tolerance: float = 0.0) -> bool:
    """Like in_Q0 without the zero-preservation clause."""
    return all(s == p or s == 0 or p == 0 for s, p in _signs_against(matrix, pattern, tolerance))
