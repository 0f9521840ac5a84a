"""Scalar parsing, weight vectors, and LinearFunctional behavior."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tiebreak.core import (
    LinearFunctional,
    as_weights,
    clear_denominators,
    evaluate,
    format_rational,
    parse_rational,
    require_nonnegative_weights,
    sign,
)
from tiebreak.errors import DomainError, FormatError, StructureError


def test_sign_covers_all_three_outcomes() -> None:
    assert sign(Fraction(3, 7)) == 1
    assert sign(0) == 0
    assert sign(Fraction(-1, 1000)) == -1
    assert sign(-5) == -1


@pytest.mark.parametrize(
    "token, value",
    [
        ("42", Fraction(42)),
        ("0", Fraction(0)),
        ("-7/3", Fraction(-7, 3)),
        ("+5/10", Fraction(1, 2)),
        ("007", Fraction(7)),
        ("-0", Fraction(0)),
    ],
)
def test_parse_rational_accepts(token: str, value: Fraction) -> None:
    assert parse_rational(token) == value


@pytest.mark.parametrize(
    "token",
    ["", "1.5", "a", "1/ 2", " 1", "1/", "/2", "1//2", "1/-2", "0x10", "1e3"],
)
def test_parse_rational_rejects(token: str) -> None:
    with pytest.raises(FormatError):
        parse_rational(token)


def test_parse_rational_rejects_zero_denominator() -> None:
    with pytest.raises(FormatError, match="zero denominator"):
        parse_rational("3/0")


def test_format_rational_canonical() -> None:
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_rational(0) == "0"
    assert format_rational(7) == "7"


def test_format_parse_roundtrip_random() -> None:
    rng = random.Random("core-roundtrip")
    for _ in range(200):
        q = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        assert parse_rational(format_rational(q)) == q


def test_as_weights_coerces_and_requires_an_entry() -> None:
    assert as_weights([1, Fraction(1, 2)]) == (Fraction(1), Fraction(1, 2))
    with pytest.raises(StructureError):
        as_weights([])


def test_require_nonnegative_weights_names_the_offender() -> None:
    with pytest.raises(DomainError, match="weight 2"):
        require_nonnegative_weights([Fraction(1), Fraction(-1, 3)])
    assert require_nonnegative_weights([0, 1]) == (Fraction(0), Fraction(1))


def test_clear_denominators() -> None:
    scale, scaled = clear_denominators([Fraction(1, 2), Fraction(1, 3), 2])
    assert scale == 6
    assert scaled == [3, 2, 12]
    assert all(isinstance(x, int) for x in scaled)

    scale, scaled = clear_denominators([5, 7])
    assert scale == 1
    assert scaled == [5, 7]


def test_clear_denominators_recovers_exact_values() -> None:
    rng = random.Random("core-clear")
    for _ in range(100):
        vec = [Fraction(rng.randint(0, 60), rng.randint(1, 24)) for _ in range(8)]
        scale, scaled = clear_denominators(vec)
        assert [Fraction(x, scale) for x in scaled] == vec


def test_functional_drops_zeros_and_sorts() -> None:
    f = LinearFunctional({3: 1, 1: -1, 2: 0})
    assert f.items() == ((1, -1), (3, 1))
    assert f.support() == (1, 3)
    assert f.max_index() == 3
    assert f.leading() == (1, -1)
    assert not f.is_zero()
    assert f.is_unit_form()


def test_functional_from_pairs_equals_mapping_form() -> None:
    assert LinearFunctional([(2, 5), (1, -3)]) == LinearFunctional({1: -3, 2: 5})


def test_functional_zero_and_non_unit_forms() -> None:
    zero = LinearFunctional({})
    assert zero.is_zero()
    assert zero.max_index() == 0
    assert zero.leading() is None
    assert not zero.is_unit_form()
    assert not LinearFunctional({1: 2}).is_unit_form()


@pytest.mark.parametrize("index", [0, -1, True, "1", Fraction(1)])
def test_functional_rejects_bad_indices(index: object) -> None:
    with pytest.raises(StructureError):
        LinearFunctional([(index, 1)])  # type: ignore[list-item]


def test_functional_rejects_duplicate_indices() -> None:
    with pytest.raises(StructureError, match="duplicate"):
        LinearFunctional([(2, 1), (2, 1)])


def test_functional_is_immutable() -> None:
    f = LinearFunctional({1: 1})
    with pytest.raises(AttributeError):
        f._items = ()  # type: ignore[misc]


def test_functional_coeffs_is_a_copy() -> None:
    f = LinearFunctional({1: 1, 4: -1})
    coeffs = f.coeffs
    coeffs[9] = 7
    assert f.coeffs == {1: 1, 4: -1}


def test_evaluate_is_an_exact_dot_product() -> None:
    f = LinearFunctional({1: -1, 3: 1})
    assert f.evaluate([Fraction(1, 2), Fraction(99), Fraction(1, 3)]) == Fraction(-1, 6)
    assert evaluate(f, [1, 0, 1]) == 0
    assert LinearFunctional({}).evaluate([]) == 0


def test_evaluate_rejects_short_vectors() -> None:
    f = LinearFunctional({4: 1})
    with pytest.raises(StructureError, match="index 4"):
        f.evaluate([1, 2, 3])


def test_functional_equality_and_hash_are_structural() -> None:
    a = LinearFunctional({1: -1, 2: 1})
    b = LinearFunctional([(2, 1), (1, -1), (5, 0)])
    assert a == b
    assert hash(a) == hash(b)
    assert a != LinearFunctional({1: -1})
    assert a != "not a functional"
    assert len({a, b}) == 1


def test_functional_repr_shows_coefficients() -> None:
    assert repr(LinearFunctional({2: Fraction(1, 2)})) == "LinearFunctional({2: 1/2})"
