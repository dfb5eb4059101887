# app/helpers/rational.py

from fractions import Fraction
from pydantic import PlainSerializer, PlainValidator
from typing import Annotated, Any, Iterable, List, Sequence, Tuple, Union
from numbers import Rational
from math import gcd, lcm

RationalLike = Union[int, Fraction, str]


def to_fraction(value: Union[RationalLike, float]) -> Fraction:
    """Exact conversion; floats are taken at their binary value."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def format_fraction(value: Fraction) -> str:
    """'p/q' string, or 'p' for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def fraction_vector(values: Iterable[Union[RationalLike, float]]) -> List[Fraction]:
    return [to_fraction(v) for v in values]


def format_vector(values: Iterable[Fraction]) -> List[str]:
    return [format_fraction(v) for v in values]


def format_vector_line(values: Iterable[Fraction]) -> str:
    return "(" + ", ".join(format_vector(values)) + ")"


def sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def is_zero_vector(values: Sequence[Fraction]) -> bool:
    return all(v == 0 for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def primitive_integer_vector(values: Sequence[Fraction]) -> List[Fraction]:
    """Scale a nonzero vector to coprime integers with first nonzero entry positive."""
    denominators = [Fraction(v).denominator for v in values if v != 0]
    if not denominators:
        return [Fraction(0)] * len(values)
    scale = lcm(*denominators)
    integers = [int(Fraction(v) * scale) for v in values]
    divisor = 0
    for n in integers:
        divisor = gcd(divisor, n)
    first = next(n for n in integers if n != 0)
    if first < 0:
        divisor = -divisor
    return [Fraction(n // divisor) for n in integers]


def _validate_vector(value: Any) -> Tuple[Fraction, ...]:
    if isinstance(value, (str, bytes)):
        raise ValueError("expected a sequence of rationals")
    try:
        return tuple(to_fraction(v) for v in value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational vector: {exc}") from exc


# Exact vector field for pydantic models, serialized as "p/q" strings
RationalVector = Annotated[
    Tuple[Fraction, ...],
    PlainValidator(_validate_vector),
    PlainSerializer(format_vector, return_type=list),
]
