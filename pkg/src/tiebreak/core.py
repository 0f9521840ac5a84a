"""Exact scalars, weight vectors, and sparse linear branching functionals.

Everything downstream (solvers, traces, the harness) works over arbitrary
precision rationals; no floats anywhere. `Rational` is an alias for
`fractions.Fraction`, which already guarantees lowest terms, a positive
denominator, and exact arithmetic. The wire format is stricter than what
`Fraction()` accepts, so parsing goes through `parse_rational`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence, Union

from .errors import DomainError, FormatError, StructureError

Rational = Fraction

RationalLike = Union[int, Fraction]

#: Signs are plain ints in {-1, 0, +1}; they order naturally.
NEGATIVE_SIGN = -1
ZERO_SIGN = 0
POSITIVE_SIGN = 1

_RATIONAL_RE = re.compile(r"[+-]?[0-9]+(?:/(?P<den>[0-9]+))?\Z")


def sign(x: RationalLike) -> int:
    """Sign of an exact scalar: -1, 0, or +1."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def parse_rational(token: str) -> Fraction:
    """Parse `-7/3`, `42`, or `0`.

    Grammar: optional sign, integer, optionally `/` and a positive integer
    denominator. No whitespace anywhere inside the token.
    """
    m = _RATIONAL_RE.match(token)
    if m is None:
        raise FormatError(f"malformed rational {token!r}")
    den = m.group("den")
    if den is not None and int(den) == 0:
        raise FormatError(f"zero denominator in rational {token!r}")
    return Fraction(token)


def format_rational(q: RationalLike) -> str:
    """Canonical text for a rational: no `/1` suffix, no spaces."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_weights(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    """Coerce a sequence of exact numbers into a weight vector (1-based users).

    Length must be at least 1. Entries are not sign-checked here; solvers
    impose nonnegativity at their own boundary.
    """
    w = tuple(Fraction(v) for v in values)
    if not w:
        raise StructureError("weight vector must have at least one entry")
    return w


def require_nonnegative_weights(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    """`as_weights` plus the nonnegativity check the optimizers need."""
    w = as_weights(values)
    for i, x in enumerate(w, start=1):
        if x < 0:
            raise DomainError(f"weight {i} is negative: {format_rational(x)}")
    return w


def clear_denominators(values: Sequence[RationalLike]) -> tuple[int, list[int]]:
    """Common positive scale L and the integer vector [L * v_i].

    Lets hot loops run on plain ints; dividing by L recovers exact values.
    """
    fractions = [Fraction(v) for v in values]
    scale = lcm(*(x.denominator for x in fractions)) if fractions else 1
    return scale, [int(x * scale) for x in fractions]


class LinearFunctional:
    """Sparse linear map from weight vectors to rationals.

    Coefficients are keyed by 1-based weight index; zero coefficients are
    dropped at construction so equality and hashing are structural on the
    support. Instances are immutable.
    """

    __slots__ = ("_items",)

    def __init__(self, coeffs: Mapping[int, RationalLike] | Iterable[tuple[int, RationalLike]]):
        if isinstance(coeffs, Mapping):
            pairs = coeffs.items()
        else:
            pairs = tuple(coeffs)
        items = []
        for index, coeff in pairs:
            if not isinstance(index, int) or isinstance(index, bool) or index < 1:
                raise StructureError(f"functional index must be a positive int, got {index!r}")
            if coeff:
                items.append((index, coeff))
        items.sort()
        for (a, _), (b, _) in zip(items, items[1:]):
            if a == b:
                raise StructureError(f"duplicate functional index {a}")
        object.__setattr__(self, "_items", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("LinearFunctional is immutable")

    @classmethod
    def _trusted(cls, items: tuple[tuple[int, RationalLike], ...]) -> "LinearFunctional":
        # Solver-internal fast path: `items` must already be sorted, duplicate
        # free, zero free, and 1-based. The validating constructor costs more
        # than the comparison loops it sits in can afford.
        f = object.__new__(cls)
        object.__setattr__(f, "_items", items)
        return f

    @property
    def coeffs(self) -> dict[int, RationalLike]:
        return dict(self._items)

    def items(self) -> tuple[tuple[int, RationalLike], ...]:
        """Nonzero (index, coefficient) pairs in increasing index order."""
        return self._items

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._items)

    def max_index(self) -> int:
        """Largest referenced index; 0 for the zero functional."""
        return self._items[-1][0] if self._items else 0

    def leading(self) -> tuple[int, RationalLike] | None:
        """Lowest-index nonzero term, or None for the zero functional."""
        return self._items[0] if self._items else None

    def is_zero(self) -> bool:
        return not self._items

    def is_unit_form(self) -> bool:
        """True when every coefficient is -1 or +1 and the support is nonempty.

        This is the shape every solver in this package emits: a difference of
        two disjoint index sets.
        """
        return bool(self._items) and all(c == 1 or c == -1 for _, c in self._items)

    def evaluate(self, values: Sequence[RationalLike]) -> RationalLike:
        """Exact dot product against `values` (values[0] is index 1)."""
        n = len(values)
        if self._items and self._items[-1][0] > n:
            raise StructureError(
                f"functional references index {self._items[-1][0]} but vector has length {n}"
            )
        total = 0
        for index, coeff in self._items:
            total += coeff * values[index - 1]
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearFunctional):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {format_rational(c)}" for i, c in self._items)
        return f"LinearFunctional({{{body}}})"


def evaluate(f: LinearFunctional, values: Sequence[RationalLike]) -> RationalLike:
    """Free-function spelling of `LinearFunctional.evaluate`."""
    return f.evaluate(values)
