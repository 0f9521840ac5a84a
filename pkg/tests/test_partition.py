"""Greedy two-way partition demo and its exhaustive oracle."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tiebreak.errors import CapacityError, FormatError, StructureError
from tiebreak.partition import (
    BRUTE_FORCE_CAP,
    brute_force_partition,
    format_assignment,
    greedy_partition,
    parse_assignment,
    partition_value,
)
from tiebreak.perturb import NEGATIVE, dyadic_shadow
from tiebreak.trace import stability_witness, verify_policy


def test_assignment_text_roundtrip() -> None:
    assert format_assignment((1, 2, 2, 1)) == "1221"
    assert parse_assignment("1221") == (1, 2, 2, 1)


def test_parse_assignment_rejects_bad_characters() -> None:
    with pytest.raises(FormatError, match="column 3"):
        parse_assignment("1231")
    with pytest.raises(FormatError, match="column 1"):
        parse_assignment(" 1221")
    with pytest.raises(FormatError):
        parse_assignment("")


def test_partition_value_is_absolute_difference() -> None:
    w = (3, 1, 4)
    assert partition_value((1, 2, 1), w) == abs(3 + 4 - 1)
    assert partition_value((2, 1, 2), w) == abs(3 + 4 - 1)
    assert partition_value((1, 2), (Fraction(1, 2), Fraction(1, 2))) == 0
    with pytest.raises(StructureError):
        partition_value((1, 2), w)
    with pytest.raises(StructureError):
        partition_value((1, 2, 3), w)


def test_brute_force_frozen_values() -> None:
    assert brute_force_partition((3, 1, 1, 2, 2, 1)) == 0
    assert brute_force_partition((1, 2, 4)) == 1
    assert brute_force_partition((Fraction(5),)) == 5
    with pytest.raises(CapacityError):
        brute_force_partition([1] * (BRUTE_FORCE_CAP + 1))


def test_greedy_frozen_instance() -> None:
    w = (3, 1, 1, 2, 2, 1)
    assignment, trace = greedy_partition(w)
    assert format_assignment(assignment) == "112221"
    assert partition_value(assignment, w) == 0
    assert trace.n == 6
    assert trace.records


def test_greedy_single_item() -> None:
    assignment, trace = greedy_partition((Fraction(7),))
    assert assignment == (1,)
    assert trace.records == ()


def test_greedy_is_deterministic() -> None:
    w = tuple(Fraction(k, 3) for k in (5, 5, 2, 8, 1, 1))
    first = greedy_partition(w)
    second = greedy_partition(w)
    assert first[0] == second[0]
    assert first[1].records == second[1].records


def test_greedy_handles_all_equal_weights() -> None:
    w = (Fraction(2),) * 8
    assignment, trace = greedy_partition(w)
    assert partition_value(assignment, w) == 0
    assert any(rec.tie for rec in trace.records)


def test_greedy_rejects_short_shadow() -> None:
    with pytest.raises(StructureError):
        greedy_partition((1, 2, 3), dyadic_shadow(2))


def test_greedy_traces_verify_and_bound_holds() -> None:
    rng = random.Random("partition-oracle")
    for _ in range(120):
        n = rng.randint(1, 10)
        w = tuple(Fraction(rng.randint(0, 12), 1 << rng.randint(0, 2)) for _ in range(n))
        assignment, trace = greedy_partition(w)
        s = dyadic_shadow(n)
        report = verify_policy(trace, w, s)
        assert report.passed, report.first_failure
        assert partition_value(assignment, w) >= brute_force_partition(w)
        step = stability_witness(trace, w, s, verified=True)
        if trace.records:
            _, replay = greedy_partition(tuple(x + step * e for x, e in zip(w, s.entries)))
            assert not any(rec.tie for rec in replay.records)
            assert [r.branch for r in replay.records] == [r.branch for r in trace.records]


def test_greedy_alternate_shadow_direction_still_verifies() -> None:
    w = (2, 2, 2, 2)
    s = dyadic_shadow(4, NEGATIVE)
    _, trace = greedy_partition(w, s)
    assert verify_policy(trace, w, s).passed
