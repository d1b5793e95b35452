"""Exact/float number handling shared by every module.

Tables are numpy arrays: ``dtype=object`` holding :class:`fractions.Fraction`
in rational mode, ``float64`` in double mode.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

RATIONAL = "rational"
DOUBLE = "double"
MODES = (RATIONAL, DOUBLE)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown numeric mode {mode!r}; expected one of {MODES}")
    return mode


def as_fraction(x) -> Fraction:
    """Convert ``x`` to a Fraction.

    Floats go through their shortest repr, so ``0.29`` becomes ``29/100``
    rather than the binary expansion. Strings may be ``"n/d"`` or decimals.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        return Fraction(int(x))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise ValueError(f"cannot represent {x!r} exactly")
        return Fraction(repr(float(x)))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def convert(x, mode: str):
    """Scalar conversion into the number type of ``mode``."""
    return as_fraction(x) if mode == RATIONAL else float(x)


def to_array(values, mode: str) -> np.ndarray:
    arr = np.asarray(values, dtype=object if mode == RATIONAL else None)
    if mode == RATIONAL:
        out = np.empty(arr.shape, dtype=object)
        flat = out.reshape(-1)
        for k, v in enumerate(arr.reshape(-1)):
            flat[k] = as_fraction(v)
        return out
    return np.asarray(arr, dtype=np.float64)


def mode_of(arr: np.ndarray) -> str:
    return RATIONAL if arr.dtype == object else DOUBLE


def to_float_array(arr: np.ndarray) -> np.ndarray:
    return np.asarray(arr, dtype=np.float64)


def zero(mode: str):
    return Fraction(0) if mode == RATIONAL else 0.0


def one(mode: str):
    return Fraction(1) if mode == RATIONAL else 1.0


def format_number(x, digits: int = 12) -> str:
    """``n/d`` for exact values, 12 significant digits for floats."""
    if isinstance(x, Fraction):
        return str(x)
    return f"{float(x):.{digits}g}"


def parse_number(x, mode: str):
    """Parse a JSON scalar (number or ``"n/d"`` string)."""
    if mode == RATIONAL:
        return as_fraction(x)
    if isinstance(x, str):
        return float(Fraction(x.strip()))
    return float(x)
