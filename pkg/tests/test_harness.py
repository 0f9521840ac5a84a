"""Instance families, certification checks, and campaign plumbing."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from tiebreak.alphabetic import LEFTMOST, POLICY_ORIENTATION, RIGHTMOST
from tiebreak.errors import DomainError, FormatError, StructureError
from tiebreak.harness import (
    ALL_EQUAL,
    DEGENERATE_FAMILIES,
    EQUAL_BLOCKS,
    FAMILY_NAMES,
    PAIR_SUM_TIES,
    PALINDROME,
    UNIFORM_RANDOM,
    ZERO_SPRINKLED,
    CampaignConfig,
    Family,
    check_instance,
    check_lipschitz,
    generate,
    leaves_family,
    parse_config,
    resolve_orientation_binding,
    run_campaign,
)
from tiebreak.perturb import CUSTOM, ShadowVector, dyadic_shadow


# -- families ---------------------------------------------------------------


def test_family_tokens_roundtrip() -> None:
    assert Family(ALL_EQUAL).token() == "all-equal"
    assert Family(EQUAL_BLOCKS, block_count=5).token() == "equal-blocks:5"
    assert Family(ZERO_SPRINKLED, zero_fraction=Fraction(1, 3)).token() == "zero-sprinkled:1/3"
    for name in FAMILY_NAMES:
        family = Family(name)
        assert Family.parse(family.token()) == family


def test_family_parse_defaults_and_errors() -> None:
    assert Family.parse("equal-blocks").block_count == 3
    assert Family.parse("zero-sprinkled").zero_fraction == Fraction(1, 4)
    with pytest.raises(FormatError, match="unknown instance family"):
        Family.parse("sawtooth")
    with pytest.raises(FormatError, match="takes no parameter"):
        Family.parse("palindrome:2")
    with pytest.raises(FormatError, match="block count"):
        Family.parse("equal-blocks:x")
    with pytest.raises(StructureError, match="block count"):
        Family.parse("equal-blocks:1")
    with pytest.raises(StructureError, match="zero fraction"):
        Family.parse("zero-sprinkled:2")


def test_degenerate_families_cover_all_but_uniform() -> None:
    assert UNIFORM_RANDOM not in DEGENERATE_FAMILIES
    assert DEGENERATE_FAMILIES == frozenset(FAMILY_NAMES) - {UNIFORM_RANDOM}


def test_generate_is_deterministic_and_size_checked() -> None:
    family = Family(UNIFORM_RANDOM)
    assert generate(family, 30, 7) == generate(family, 30, 7)
    assert generate(family, 30, 7) != generate(family, 30, 8)
    with pytest.raises(DomainError):
        generate(family, 0, 7)
    for name in FAMILY_NAMES:
        assert len(generate(Family(name), 1, 3)) == 1


def test_generate_family_structure() -> None:
    assert generate(Family(ALL_EQUAL), 6, 1) == (Fraction(1),) * 6

    w = generate(Family(EQUAL_BLOCKS, block_count=3), 20, 2)
    values = sorted(set(w))
    assert len(values) == 3
    for value in values:
        positions = [i for i, x in enumerate(w) if x == value]
        assert positions == list(range(positions[0], positions[-1] + 1))

    w = generate(Family(ZERO_SPRINKLED), 16, 3)
    assert sum(1 for x in w if x == 0) == 4
    assert all(x >= 0 for x in w)

    w = generate(Family(PAIR_SUM_TIES), 9, 4)
    sums = {a + b for a, b in zip(w, w[1:])}
    assert len(sums) == 1

    w = generate(Family(PALINDROME), 9, 5)
    assert w == tuple(reversed(w))


def test_leaves_family_contract() -> None:
    s = dyadic_shadow(4)
    w = (Fraction(1),) * 4
    assert leaves_family(Family(UNIFORM_RANDOM), w, s, Fraction(1)) is None
    assert leaves_family(Family(ALL_EQUAL), w, s, Fraction(1, 100)) is True
    with pytest.raises(DomainError, match="positive"):
        leaves_family(Family(ALL_EQUAL), w, s, Fraction(0))
    # A shadow with repeated entries cannot separate equal weights.
    flat = ShadowVector((Fraction(1), Fraction(1)), CUSTOM)
    assert leaves_family(Family(ALL_EQUAL), (1, 1), flat, Fraction(1)) is False


# -- single-instance certification ------------------------------------------


def test_check_instance_passing_run() -> None:
    verdict = check_instance((1, 2, 3), RIGHTMOST, family=Family(UNIFORM_RANDOM), seed="t")
    assert verdict.passed
    assert verdict.feasible and verdict.optimal
    assert verdict.policy_verified and verdict.equivalent
    assert verdict.stability == "pass"
    assert verdict.stability_mode == "witness"  # positive orientation never clamps
    assert verdict.witness == Fraction(2, 7)
    assert verdict.cost == 9 and verdict.dp_cost == 9
    assert verdict.oracles_agree is True and verdict.optima == 1
    row = verdict.as_row()
    assert row["kind"] == "instance"
    assert row["verdict"] == "PASS"
    assert row["repro"] is None
    assert row["witness"] == "2/7"


def test_check_instance_single_leaf_and_boundary() -> None:
    verdict = check_instance((Fraction(5),), RIGHTMOST)
    assert verdict.passed
    assert verdict.stability == "pass"

    # All-zero weights with the negative orientation: no admissible step.
    verdict = check_instance((0,), LEFTMOST)
    assert verdict.passed
    assert verdict.stability == "skipped-boundary"
    assert verdict.stability_mode is None


def test_check_instance_clamps_on_negative_orientation() -> None:
    # Degenerate and tiny: the witness (1 on an all-tie trace) would step
    # outside the nonnegative domain, so the replay runs at the clamp.
    verdict = check_instance((Fraction(1, 64),) * 3, LEFTMOST)
    assert verdict.passed
    assert verdict.stability == "pass"
    assert verdict.stability_mode == "clamped"


def test_check_instance_flags_wrong_oracle_values() -> None:
    verdict = check_instance((1, 2, 3), RIGHTMOST, dp_cost=Fraction(10))
    assert not verdict.passed
    assert verdict.failure == "optimality"
    assert verdict.as_row()["repro"] == "1 2 3"

    verdict = check_instance((1, 2, 3), RIGHTMOST, brute=(Fraction(10), 1))
    assert verdict.failure == "oracle-agreement"


def test_check_instance_large_sizes_skip_enumeration() -> None:
    verdict = check_instance((1,) * 12, RIGHTMOST)
    assert verdict.passed
    assert verdict.optima is None
    assert verdict.oracles_agree is None


# -- continuity -------------------------------------------------------------


def test_check_lipschitz() -> None:
    assert check_lipschitz((1, 2, 3), (0, 0, 0)) is True
    assert check_lipschitz((1, 2, 3), (Fraction(1, 2), 0, Fraction(-1, 2))) is True
    with pytest.raises(StructureError):
        check_lipschitz((1, 2), (1,))
    with pytest.raises(DomainError):
        check_lipschitz((1, 2), (0, -3))


# -- orientation binding ----------------------------------------------------


def test_resolved_binding_matches_configuration() -> None:
    assert resolve_orientation_binding() == POLICY_ORIENTATION


# -- campaign config --------------------------------------------------------


def test_campaign_config_validation() -> None:
    with pytest.raises(StructureError, match="seed"):
        CampaignConfig(seed="7", counts=())  # type: ignore[arg-type]
    with pytest.raises(StructureError, match="policy"):
        CampaignConfig(seed=7, counts=(), policies=("sideways",))
    with pytest.raises(StructureError, match="duplicate"):
        CampaignConfig(seed=7, counts=(), policies=(LEFTMOST, LEFTMOST))
    with pytest.raises(StructureError, match="n_min"):
        CampaignConfig(seed=7, counts=(), n_min=0)
    with pytest.raises(StructureError, match="configured twice"):
        CampaignConfig(seed=7, counts=((Family(ALL_EQUAL), 1), (Family(ALL_EQUAL), 2)))
    with pytest.raises(StructureError, match=">= 0"):
        CampaignConfig(seed=7, counts=((Family(ALL_EQUAL), -1),))
    with pytest.raises(StructureError, match="lipschitz_pairs"):
        CampaignConfig(seed=7, counts=(), lipschitz_pairs=-1)


def test_parse_config_full_document() -> None:
    text = """
    # campaign
    seed = 99
    n_min = 1
    n_max = 12   # inline comment
    policies = leftmost, rightmost
    count.all-equal = 3
    count.equal-blocks:4 = 2
    lipschitz_pairs = 5
    """
    config = parse_config(text)
    assert config.seed == 99
    assert config.n_max == 12
    assert config.policies == (LEFTMOST, RIGHTMOST)
    assert dict(config.as_obj()["counts"]) == {"all-equal": 3, "equal-blocks:4": 2}
    assert config.lipschitz_pairs == 5
    assert config.lipschitz_n_max == 12  # defaults to min(40, n_max)


@pytest.mark.parametrize(
    "text, message",
    [
        ("n_max = 5", "config must set seed"),
        ("seed 7", "line 1.*expected 'key = value'"),
        ("seed = 7\nwat = 3", "line 2.*unknown key"),
        ("seed = 7\nseed = 8", "line 2.*duplicate"),
        ("seed = 7\ncount.sawtooth = 1", "line 2.*unknown instance family"),
        ("seed = 7\nn_min = x", "line 2.*expected an integer"),
        ("seed = 7\ncount.all-equal = 1\ncount.all-equal = 2", "line 3.*twice"),
        ("seed = 7\nn_min = 5\nn_max = 2", "n_min"),
    ],
)
def test_parse_config_errors(text: str, message: str) -> None:
    with pytest.raises(FormatError, match=message):
        parse_config(text)


# -- campaigns --------------------------------------------------------------


def _tiny_config() -> CampaignConfig:
    return CampaignConfig(
        seed=41,
        counts=((Family(ALL_EQUAL), 3), (Family(UNIFORM_RANDOM), 2)),
        n_min=1,
        n_max=7,
        lipschitz_pairs=4,
        lipschitz_n_max=6,
    )


def test_campaign_counts_and_ordering() -> None:
    report = run_campaign(_tiny_config())
    assert report.passed
    agg = report.aggregate
    assert agg["weight_vectors"] == 5
    assert agg["solver_runs"] == 10  # both policies per vector
    assert agg["failing_runs"] == 0
    assert agg["lipschitz_pairs"] == 4
    assert agg["lipschitz_failures"] == 0
    assert agg["binding_matches_configuration"] is True
    assert agg["verdict"] == "PASS"
    assert agg["degenerate_vectors"] == 3

    sizes = {(v.family, v.n) for v in report.instances}
    # The first two draws per family pin the extremes.
    for token in ("all-equal", "uniform-random"):
        assert (token, 7) in sizes
        assert (token, 1) in sizes

    keys = [(v.family, v.n, v.seed, v.policy) for v in report.instances]
    assert keys == sorted(keys)


def test_campaign_report_renders_machine_readable_rows() -> None:
    report = run_campaign(_tiny_config())
    text = report.render()
    lines = text.splitlines()
    objs = [json.loads(line) for line in lines if not line.startswith("#")]
    assert objs[0]["kind"] == "header"
    assert objs[0]["config"]["seed"] == 41
    assert objs[-1]["kind"] == "aggregate"
    kinds = {obj["kind"] for obj in objs}
    assert kinds == {"header", "instance", "lipschitz", "aggregate"}
    assert any(line.startswith("#") for line in lines)


def test_campaign_is_reproducible_byte_for_byte() -> None:
    first = run_campaign(_tiny_config()).render()
    second = run_campaign(_tiny_config()).render()
    assert first == second


def test_campaign_with_no_work_still_reports() -> None:
    report = run_campaign(CampaignConfig(seed=1, counts=()))
    assert report.passed
    assert report.aggregate["weight_vectors"] == 0
    assert report.aggregate["verdict"] == "PASS"
