"""Two-way number partitioning demo: instrumented greedy and an exact oracle.

The greedy heuristic sorts weights in nonincreasing order and drops each one
onto the currently lighter side. Both the sort and the side choice run
through the same comparison machinery as the tree solver: every executed
comparison is a linear functional recorded in a decision trace, and every
exact tie is settled by the shadow direction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import (
    LinearFunctional,
    RationalLike,
    clear_denominators,
    require_nonnegative_weights,
)
from .errors import CapacityError, DomainError, FormatError, StructureError
from .perturb import ShadowVector, dyadic_shadow
from .trace import ComparisonRecord, DecisionTrace

BRUTE_FORCE_CAP = 16

#: An assignment maps each index to side 1 or side 2.
Assignment = tuple[int, ...]


def format_assignment(assignment: Assignment) -> str:
    return "".join(str(side) for side in assignment)


def parse_assignment(text: str) -> Assignment:
    """Parse a string over {1, 2}; one character per index."""
    if not text:
        raise FormatError("assignment must have at least one entry")
    sides = []
    for col, ch in enumerate(text, start=1):
        if ch not in "12":
            raise FormatError(f"assignment characters must be 1 or 2, got {ch!r}", line=1, column=col)
        sides.append(int(ch))
    return tuple(sides)


def partition_value(assignment: Assignment, w: Sequence[RationalLike]) -> Fraction:
    """Absolute difference of the two side sums."""
    if len(assignment) != len(w):
        raise StructureError(f"assignment covers {len(assignment)} indices but instance has {len(w)}")
    diff = Fraction(0)
    for side, weight in zip(assignment, w):
        if side == 1:
            diff += Fraction(weight)
        elif side == 2:
            diff -= Fraction(weight)
        else:
            raise StructureError(f"assignment sides must be 1 or 2, got {side!r}")
    return abs(diff)


def brute_force_partition(w: Sequence[RationalLike]) -> Fraction:
    """Exact optimum over all 2^n assignments. Capped at n = 16."""
    vec = require_nonnegative_weights(w)
    n = len(vec)
    if n > BRUTE_FORCE_CAP:
        raise CapacityError(f"brute force is capped at n = {BRUTE_FORCE_CAP}, got {n}")
    scale, scaled = clear_denominators(vec)
    total = sum(scaled)
    # Index 1 pinned to side 1; the value is symmetric under swapping sides.
    sums = [0]
    for x in scaled[1:]:
        sums += [s + x for s in sums]
    best = min(abs(total - 2 * s) for s in sums)
    return Fraction(best, scale)


def greedy_partition(
    w: Sequence[RationalLike], s: ShadowVector | None = None
) -> tuple[Assignment, DecisionTrace]:
    """Sorted greedy assignment with a full decision trace.

    Sorting uses insertion sort with explicit pairwise comparisons (the
    functional is the weight difference of the two indices); placement
    compares the running side difference (coefficients +1 on side 1, -1 on
    side 2) against zero. The shadow defaults to the positive dyadic
    direction, which keeps perturbed instances inside the nonnegative
    domain.
    """
    vec = require_nonnegative_weights(w)
    n = len(vec)
    if s is None:
        s = dyadic_shadow(n)
    if len(s.entries) != n:
        raise StructureError(f"instance has {n} weights but shadow has {len(s.entries)}")
    scale, scaled = clear_denominators(vec)
    shadow_entries = s.entries
    records: list[ComparisonRecord] = []

    def decide(coeffs: dict[int, int], diff: int) -> int:
        if diff:
            realized = 1 if diff > 0 else -1
        else:
            drift = sum(c * shadow_entries[i - 1] for i, c in coeffs.items())
            if drift > 0:
                realized = 1
            elif drift < 0:
                realized = -1
            else:
                raise DomainError("shadow direction fails to resolve a tie")
        f = LinearFunctional._trusted(tuple(sorted(coeffs.items())))
        records.append(
            ComparisonRecord.make(len(records) + 1, f, Fraction(diff, scale), realized)
        )
        return realized

    # Nonincreasing insertion sort; ties fall to the shadow, so the order is
    # total and the comparison sequence deterministic.
    order: list[int] = []
    for index in range(1, n + 1):
        pos = len(order)
        while pos > 0:
            other = order[pos - 1]
            outcome = decide({index: 1, other: -1}, scaled[index - 1] - scaled[other - 1])
            if outcome > 0:
                pos -= 1
            else:
                break
        order.insert(pos, index)

    sides: dict[int, int] = {}
    balance = 0  # side-1 total minus side-2 total, scaled
    side_coeffs: dict[int, int] = {}
    for index in order:
        if not side_coeffs:
            chosen = 1  # both sides empty; no functional exists to compare
        else:
            outcome = decide(dict(side_coeffs), balance)
            chosen = 2 if outcome > 0 else 1
        sides[index] = chosen
        if chosen == 1:
            balance += scaled[index - 1]
            side_coeffs[index] = 1
        else:
            balance -= scaled[index - 1]
            side_coeffs[index] = -1

    assignment = tuple(sides[i] for i in range(1, n + 1))
    trace = DecisionTrace(n=n, records=tuple(records))
    return assignment, trace
