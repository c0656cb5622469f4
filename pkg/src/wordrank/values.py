"""Exact extended-rational values: fractions plus an explicit infinity."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Union


@total_ordering
class _Infinity:
    """The value ``∞``; compares greater than every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "infinity"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("wordrank-infinity")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("∞ - ∞ is undefined")
        return self

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

Value = Union[Fraction, _Infinity]


def is_infinite(x) -> bool:
    return x is INFINITY


def format_value(x) -> str:
    if x is INFINITY:
        return "infinity"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_value(text: str):
    t = text.strip().lower()
    if t in ("infinity", "inf", "∞"):
        return INFINITY
    return Fraction(t)


def vmin(a, b):
    return b if b < a else a
