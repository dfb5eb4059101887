# app/linalg/matrix.py

from app.helpers.rational import format_fraction, to_fraction
from app.core.exceptions import DimensionMismatch
from typing import Any, Iterable, List, Optional, Sequence, Tuple
from pydantic_core import core_schema
from fractions import Fraction
import numpy as np


class RationalMatrix:
    """Dense, immutable matrix of Fractions stored row-major."""

    __slots__ = ("_rows", "_n_rows", "_n_cols")

    def __init__(self, rows: Iterable[Iterable[Any]], n_cols: Optional[int] = None):
        data = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        if n_cols is None:
            n_cols = len(data[0]) if data else 0
        if any(len(row) != n_cols for row in data):
            raise DimensionMismatch("ragged rows in matrix")
        self._rows = data
        self._n_rows = len(data)
        self._n_cols = n_cols

    # ------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------
    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "RationalMatrix":
        return cls(([0] * n_cols for _ in range(n_rows)), n_cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @classmethod
    def diagonal(cls, values: Sequence[Any]) -> "RationalMatrix":
        n = len(values)
        return cls(([values[i] if i == j else 0 for j in range(n)] for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], n_rows: Optional[int] = None) -> "RationalMatrix":
        if not columns:
            return cls(([] for _ in range(n_rows or 0)), 0)
        return cls(zip(*columns), len(columns))

    # ------------------------------------------------------------
    # shape and access
    # ------------------------------------------------------------
    @property
    def n_rows(self) -> int:
        return self._n_rows

    @property
    def n_cols(self) -> int:
        return self._n_cols

    @property
    def shape(self) -> Tuple[int, int]:
        return self._n_rows, self._n_cols

    @property
    def rows(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return self._rows

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self._rows)

    def columns(self) -> List[Tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self._n_cols)]

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self._rows[i][j]

    def submatrix(self, rows: Sequence[int], cols: Optional[Sequence[int]] = None) -> "RationalMatrix":
        cols = range(self._n_cols) if cols is None else cols
        return RationalMatrix(([self._rows[i][j] for j in cols] for i in rows), len(cols))

    # ------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------
    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(([row[j] for row in self._rows] for j in range(self._n_cols)), self._n_rows)

    def transpose(self) -> "RationalMatrix":
        return self.T

    def apply(self, vector: Sequence[Any]) -> List[Fraction]:
        """Matrix-vector product."""
        if len(vector) != self._n_cols:
            raise DimensionMismatch(f"vector of length {len(vector)} against {self._n_cols} columns")
        v = [to_fraction(x) for x in vector]
        return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self._rows]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self._n_cols != other._n_rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        columns = other.columns()
        return RationalMatrix(
            ([sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in columns] for row in self._rows),
            other._n_cols,
        )

    def _zip(self, other: "RationalMatrix", op) -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes differ: {self.shape} and {other.shape}")
        return RationalMatrix(
            ([op(a, b) for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)), self._n_cols
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, factor: Any) -> "RationalMatrix":
        k = to_fraction(factor)
        return RationalMatrix(([k * a for a in row] for row in self._rows), self._n_cols)

    def map_rows(self, factors: Sequence[Any]) -> "RationalMatrix":
        """diag(factors) @ self"""
        return RationalMatrix(
            ([to_fraction(k) * a for a in row] for k, row in zip(factors, self._rows)), self._n_cols
        )

    def map_columns(self, factors: Sequence[Any]) -> "RationalMatrix":
        """self @ diag(factors)"""
        ks = [to_fraction(k) for k in factors]
        return RationalMatrix(([a * k for a, k in zip(row, ks)] for row in self._rows), self._n_cols)

    # ------------------------------------------------------------
    # predicates and conversion
    # ------------------------------------------------------------
    def is_zero(self) -> bool:
        return all(a == 0 for row in self._rows for a in row)

    def nonzero_count(self) -> int:
        return sum(1 for row in self._rows for a in row if a != 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_fraction(a) for a in row) for row in self._rows)
        return f"RationalMatrix({self._n_rows}x{self._n_cols}: [{body}])"

    def to_strings(self) -> List[List[str]]:
        return [[format_fraction(a) for a in row] for row in self._rows]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(a) for a in row] for row in self._rows], dtype=float).reshape(self.shape)

    # ------------------------------------------------------------
    # pydantic integration (serialized as nested lists of "p/q" strings)
    # ------------------------------------------------------------
    @classmethod
    def _validate(cls, value: Any) -> "RationalMatrix":
        if isinstance(value, RationalMatrix):
            return value
        try:
            return cls(value)
        except (DimensionMismatch, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational matrix: {exc}") from exc

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type: Any, handler: Any) -> core_schema.CoreSchema:
        return core_schema.no_info_plain_validator_function(
            cls._validate,
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda m: m.to_strings()
            ),
        )
