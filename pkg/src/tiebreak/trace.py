"""Decision traces: the comparisons a solver made, and tools to audit them.

A trace captures every branching comparison as (functional, value, sign,
branch). Auditing re-evaluates each functional against the instance: a
mismatch with the recorded value means the trace is corrupt, while a sign
that contradicts the shadow direction means the solver did not follow the
claimed tie policy. A verified trace also yields a concrete step bound
below which the whole decision path is insensitive to perturbation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .core import (
    LinearFunctional,
    RationalLike,
    clear_denominators,
    format_rational,
    parse_rational,
    sign,
)
from .errors import CorruptTraceError, FormatError, PolicyMismatchError, StructureError
from .perturb import ShadowVector

LEFT = "L"
RIGHT = "R"


class ComparisonRecord:
    """One branching comparison.

    `realized_sign` is the sign the solver acted on after tie-breaking, so it
    is never 0; `tie` is true exactly when the primary value was 0 and the
    shadow had to decide. The branch letter is redundant with the sign and is
    kept because the wire format stores it. Immutable; a slotted class rather
    than a dataclass because solvers mint one per comparison and the frozen
    dataclass protocol is measurably too slow for that.
    """

    __slots__ = ("step", "functional", "primary_value", "realized_sign", "tie", "branch")

    def __init__(
        self,
        *,
        step: int,
        functional: LinearFunctional,
        primary_value: Fraction,
        realized_sign: int,
        tie: bool,
        branch: str,
    ):
        if step < 1:
            raise StructureError(f"step must be >= 1, got {step}")
        if realized_sign not in (-1, 1):
            raise StructureError(f"realized sign must be -1 or +1, got {realized_sign}")
        if tie != (primary_value == 0):
            raise StructureError(f"step {step}: tie flag contradicts the recorded value")
        if not tie and realized_sign != sign(primary_value):
            raise StructureError(f"step {step}: sign contradicts the recorded value")
        if branch != (LEFT if realized_sign < 0 else RIGHT):
            raise StructureError(f"step {step}: branch {branch!r} contradicts the sign")
        bind = object.__setattr__
        bind(self, "step", step)
        bind(self, "functional", functional)
        bind(self, "primary_value", primary_value)
        bind(self, "realized_sign", realized_sign)
        bind(self, "tie", tie)
        bind(self, "branch", branch)

    def __setattr__(self, name, value):
        raise AttributeError("ComparisonRecord is immutable")

    @classmethod
    def make(
        cls, step: int, functional: LinearFunctional, primary: RationalLike, realized: int
    ) -> "ComparisonRecord":
        """Build a record, deriving the tie flag and branch letter.

        Trusts its arguments to be consistent (the derivation makes them so);
        this is the solvers' hot path.
        """
        if type(primary) is not Fraction:
            primary = Fraction(primary)
        rec = object.__new__(cls)
        bind = object.__setattr__
        bind(rec, "step", step)
        bind(rec, "functional", functional)
        bind(rec, "primary_value", primary)
        bind(rec, "realized_sign", realized)
        bind(rec, "tie", not primary)
        bind(rec, "branch", LEFT if realized < 0 else RIGHT)
        return rec

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComparisonRecord):
            return NotImplemented
        return (
            self.primary_value == other.primary_value
            and self.realized_sign == other.realized_sign
            and self.step == other.step
            and self.tie == other.tie
            and self.branch == other.branch
            and self.functional == other.functional
        )

    def __hash__(self) -> int:
        return hash((self.step, self.functional, self.primary_value, self.realized_sign))

    def __repr__(self) -> str:
        return (
            f"ComparisonRecord(step={self.step}, functional={self.functional!r}, "
            f"primary_value={self.primary_value!r}, realized_sign={self.realized_sign}, "
            f"tie={self.tie}, branch={self.branch!r})"
        )


@dataclass(frozen=True, slots=True)
class DecisionTrace:
    """An ordered run of comparison records over an n-entry instance."""

    n: int
    records: tuple[ComparisonRecord, ...]

    def __post_init__(self):
        if self.n < 1:
            raise StructureError(f"trace instance size must be >= 1, got {self.n}")
        expected = 1
        for rec in self.records:
            if rec.step != expected:
                raise StructureError(
                    f"trace steps must increase from 1 without gaps; "
                    f"expected {expected}, got {rec.step}"
                )
            if rec.functional.max_index() > self.n:
                raise StructureError(
                    f"step {rec.step} references index {rec.functional.max_index()} "
                    f"outside 1..{self.n}"
                )
            expected += 1

    def __len__(self) -> int:
        return len(self.records)


@dataclass(slots=True)
class RecordCheck:
    step: int
    recomputed: Fraction
    expected_sign: int
    ok: bool


@dataclass(frozen=True, slots=True)
class VerificationReport:
    """Per-record policy audit plus the overall verdict."""

    passed: bool
    checks: tuple[RecordCheck, ...]
    first_failure: int | None


def verify_policy(trace: DecisionTrace, w: Sequence[RationalLike], s: ShadowVector) -> VerificationReport:
    """Audit a trace against its instance and a shadow direction.

    Each functional is re-evaluated at w. Disagreement with the recorded
    value raises CorruptTraceError; an otherwise intact record fails when its
    realized sign differs from the sign the shadow direction dictates.
    """
    if len(w) != trace.n:
        raise StructureError(f"trace is over {trace.n} weights but instance has {len(w)}")
    if len(s.entries) != trace.n:
        raise StructureError(f"trace is over {trace.n} weights but shadow has {len(s.entries)}")
    scale, scaled = clear_denominators(w)
    shadow_entries = s.entries
    unit = scale == 1
    checks = []
    first_failure = None
    for rec in trace.records:
        f = rec.functional
        # Evaluate over denominator-cleared weights; agreement with the
        # record is the cross-multiplied identity raw * qd == qn * scale.
        raw = sum(c * scaled[i - 1] for i, c in f.items())
        recorded = rec.primary_value
        if raw * recorded.denominator != recorded.numerator * scale:
            recomputed = Fraction(raw, scale)
            raise CorruptTraceError(
                f"step {rec.step}: recorded value {format_rational(recorded)} "
                f"but re-evaluation gives {format_rational(recomputed)}"
            )
        # Same contract as perturbed_sign: primary sign, shadow on a tie.
        expected = sign(raw) or sign(f.evaluate(shadow_entries))
        ok = expected == rec.realized_sign
        if not ok and first_failure is None:
            first_failure = rec.step
        recomputed = Fraction(raw) if unit else Fraction(raw, scale)
        checks.append(RecordCheck(rec.step, recomputed, expected, ok))
    return VerificationReport(first_failure is None, tuple(checks), first_failure)


def stability_witness(
    trace: DecisionTrace,
    w: Sequence[RationalLike],
    s: ShadowVector,
    *,
    verified: bool = False,
) -> Fraction:
    """A step a* > 0 below which every recorded sign survives perturbation.

    For all rational 0 < a <= a*, sign(f(w + a*s)) equals the recorded
    realized sign for every record f. Requires the trace to pass
    verify_policy; pass verified=True when the caller already audited it.
    The bound is the minimum of |value| / (|f(s)| + 1) over non-tie records
    and 1 when every comparison was a tie (or the trace is empty).
    """
    if not verified:
        report = verify_policy(trace, w, s)
        if not report.passed:
            raise PolicyMismatchError(
                f"trace fails policy verification at step {report.first_failure}; "
                f"no stability witness exists"
            )
    # A verified trace's recorded values equal f(w), so the per-record bound
    # |f(w)| / (|f(s)| + 1) only needs the shadow drift f(s) recomputed.
    entries = s.entries
    drifts = []
    witness = Fraction(1)
    for rec in trace.records:
        drift = sum(c * entries[i - 1] for i, c in rec.functional.items())
        drifts.append(drift)
        if not rec.tie:
            bound = abs(rec.primary_value) / (abs(drift) + 1)
            if bound < witness:
                witness = bound
    an, ad = witness.numerator, witness.denominator
    for rec, drift in zip(trace.records, drifts):
        # sign(p + a*d) via the integer (or at worst rational) numerator of
        # p*ad + an*d over the positive denominator pd*ad.
        p = rec.primary_value
        shifted = p.numerator * ad + an * drift * p.denominator
        assert sign(shifted) == rec.realized_sign, (
            f"witness failed its own re-evaluation at step {rec.step}"
        )
    return witness


def same_decision_path(a: DecisionTrace, b: DecisionTrace) -> bool:
    """True when two traces took the same branches through the same functionals.

    Primary values and tie flags may differ; this is the equality that matters
    when re-solving a perturbed instance.
    """
    if a.n != b.n or len(a.records) != len(b.records):
        return False
    return all(
        ra.functional == rb.functional and ra.branch == rb.branch
        for ra, rb in zip(a.records, b.records)
    )


def dump_trace(trace: DecisionTrace) -> str:
    """Serialize to line-delimited records, one JSON object per comparison."""
    lines = []
    for rec in trace.records:
        obj = {
            "step": rec.step,
            "coeffs": {str(i): format_rational(c) for i, c in rec.functional.items()},
            "value": format_rational(rec.primary_value),
            "tie": rec.tie,
            "branch": rec.branch,
        }
        lines.append(json.dumps(obj))
    return "\n".join(lines) + ("\n" if lines else "")


_TRACE_KEYS = {"step", "coeffs", "value", "tie", "branch"}


def load_trace(text: str, n: int) -> DecisionTrace:
    """Parse the line-delimited trace format for an n-entry instance.

    Blank lines are ignored. Any malformed line, unknown key, or record that
    contradicts itself raises FormatError naming the line.
    """
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not a valid record: {exc.msg}", line=lineno) from exc
        if not isinstance(obj, dict):
            raise FormatError("record must be a key-value object", line=lineno)
        if set(obj) != _TRACE_KEYS:
            raise FormatError(
                f"record keys must be exactly {sorted(_TRACE_KEYS)}, got {sorted(obj)}",
                line=lineno,
            )
        try:
            records.append(_record_from_obj(obj))
        except (StructureError, FormatError) as exc:
            raise FormatError(str(exc), line=lineno) from exc
    try:
        return DecisionTrace(n=n, records=tuple(records))
    except StructureError as exc:
        raise FormatError(str(exc)) from exc


def _record_from_obj(obj: dict) -> ComparisonRecord:
    step = obj["step"]
    if not isinstance(step, int) or isinstance(step, bool):
        raise FormatError(f"step must be an integer, got {step!r}")
    raw_coeffs = obj["coeffs"]
    if not isinstance(raw_coeffs, dict):
        raise FormatError("coeffs must be a map from index to rational text")
    coeffs: dict[int, RationalLike] = {}
    for key, text in raw_coeffs.items():
        try:
            index = int(key)
        except ValueError:
            raise FormatError(f"coefficient index {key!r} is not an integer") from None
        if not isinstance(text, str):
            raise FormatError(f"coefficient for index {key} must be rational text")
        value = parse_rational(text)
        # Integral coefficients are held as ints so functionals from a file
        # compare equal, structurally, to freshly built ones.
        coeffs[index] = value.numerator if value.denominator == 1 else value
    if not isinstance(obj["value"], str):
        raise FormatError("value must be rational text")
    value = parse_rational(obj["value"])
    tie = obj["tie"]
    if not isinstance(tie, bool):
        raise FormatError(f"tie must be a boolean, got {tie!r}")
    branch = obj["branch"]
    if branch not in (LEFT, RIGHT):
        raise FormatError(f"branch must be {LEFT!r} or {RIGHT!r}, got {branch!r}")
    realized = -1 if branch == LEFT else 1
    record = ComparisonRecord(
        step=step,
        functional=LinearFunctional(coeffs),
        primary_value=value,
        realized_sign=realized,
        tie=tie,
        branch=branch,
    )
    return record


class TraceCollector:
    """Record sink that accumulates into a DecisionTrace."""

    def __init__(self, n: int):
        self.n = n
        self._records: list[ComparisonRecord] = []

    def __call__(self, record: ComparisonRecord) -> None:
        self._records.append(record)

    def trace(self) -> DecisionTrace:
        return DecisionTrace(n=self.n, records=tuple(self._records))


RecordSink = Callable[[ComparisonRecord], None]
