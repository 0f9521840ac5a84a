"""Optimal ordered-leaf binary trees: solver, oracles, and tree utilities.

The solver is the classic two-phase method: phase 1 repeatedly combines the
minimum-weight combinable pair of sequence nodes (two nodes are combinable
when only internal nodes sit between them), phase 2 rebuilds an order-
preserving tree from the leaf depths phase 1 produced. All minimum finding
is done through explicit pairwise comparisons so that every branch the
solver takes lands in a decision trace, and every exact tie is resolved by a
shadow direction rather than by an ad-hoc rule.

Two independent oracles ship alongside: an interval dynamic program for the
optimal cost, and exhaustive enumeration of all ordered trees for small n.
"""

from __future__ import annotations

import re
from fractions import Fraction
from operator import add
from typing import Callable, Iterator, Sequence, Union

from .core import (
    LinearFunctional,
    RationalLike,
    clear_denominators,
    require_nonnegative_weights,
)
from .errors import CapacityError, DomainError, FormatError, StructureError
from .perturb import NEGATIVE, POSITIVE, ShadowVector, dyadic_shadow
from .trace import ComparisonRecord, DecisionTrace, RecordSink, TraceCollector

#: A tree is a 1-based leaf index or a (left, right) pair of trees.
Tree = Union[int, tuple["Tree", "Tree"]]

LEFTMOST = "leftmost"
RIGHTMOST = "rightmost"
POLICIES = (LEFTMOST, RIGHTMOST)

#: Which shadow orientation realizes which tie policy. Configuration, not a
#: law of nature: the harness re-derives this binding empirically against a
#: direct positional implementation of the policies.
POLICY_ORIENTATION = {LEFTMOST: NEGATIVE, RIGHTMOST: POSITIVE}

ENUMERATION_CAP = 12


# ---------------------------------------------------------------------------
# Tree values


def leaves_in_order(tree: Tree) -> tuple[int, ...]:
    """Leaf indices in left-to-right order."""
    out: list[int] = []
    stack: list[Tree] = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, int):
            out.append(node)
        else:
            left, right = node
            stack.append(right)
            stack.append(left)
    return tuple(out)


def validate_tree(tree: Tree) -> int:
    """Check the leaf order is exactly 1..n; returns n."""
    seq = leaves_in_order(tree)
    if seq != tuple(range(1, len(seq) + 1)):
        raise StructureError(f"leaves out of order: {seq}")
    return len(seq)


def _leaf_depths(tree: Tree) -> dict[int, int]:
    depths: dict[int, int] = {}
    stack: list[tuple[Tree, int]] = [(tree, 0)]
    while stack:
        node, d = stack.pop()
        if isinstance(node, int):
            if node in depths:
                raise StructureError(f"leaf {node} appears twice")
            depths[node] = d
        else:
            left, right = node
            stack.append((left, d + 1))
            stack.append((right, d + 1))
    return depths


def tree_depths(tree: Tree) -> tuple[int, ...]:
    """Depth of each leaf, indexed by leaf number (entry 0 is leaf 1)."""
    depths = _leaf_depths(tree)
    n = len(depths)
    if set(depths) != set(range(1, n + 1)):
        raise StructureError(f"leaves must be 1..{n}, got {sorted(depths)}")
    return tuple(depths[i] for i in range(1, n + 1))


def tree_cost(tree: Tree, w: Sequence[RationalLike]) -> Fraction:
    """Sum of weight times leaf depth."""
    depths = tree_depths(tree)
    if len(depths) != len(w):
        raise StructureError(f"tree has {len(depths)} leaves but instance has {len(w)}")
    return sum((Fraction(wi) * d for wi, d in zip(w, depths)), Fraction(0))


def mirror_tree(tree: Tree, n: int) -> Tree:
    """Reverse left-right: children swap and leaf i becomes n + 1 - i."""
    if isinstance(tree, int):
        return n + 1 - tree
    left, right = tree
    return (mirror_tree(right, n), mirror_tree(left, n))


def format_tree(tree: Tree) -> str:
    """Render as leaf names and parenthesized pairs: ((b1 b2) b3)."""
    if isinstance(tree, int):
        return f"b{tree}"
    left, right = tree
    return f"({format_tree(left)} {format_tree(right)})"


_TREE_TOKEN = re.compile(r"\(|\)|b[0-9]+")


def parse_tree(text: str) -> Tree:
    """Parse the parenthesized tree format; column numbers on errors."""
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _TREE_TOKEN.match(text, pos)
        if m is None:
            raise FormatError(f"unexpected character {ch!r}", line=1, column=pos + 1)
        tokens.append((m.group(), pos + 1))
        pos = m.end()
    if not tokens:
        raise FormatError("empty tree text")

    index = 0

    def parse_node() -> Tree:
        nonlocal index
        if index >= len(tokens):
            raise FormatError("unexpected end of tree text", line=1, column=len(text) + 1)
        token, col = tokens[index]
        index += 1
        if token == "(":
            left = parse_node()
            right = parse_node()
            if index >= len(tokens) or tokens[index][0] != ")":
                raise FormatError(
                    "expected ')'",
                    line=1,
                    column=tokens[index][1] if index < len(tokens) else len(text) + 1,
                )
            index += 1
            return (left, right)
        if token == ")":
            raise FormatError("unexpected ')'", line=1, column=col)
        leaf = int(token[1:])
        if leaf < 1:
            raise FormatError(f"leaf index must be >= 1, got {token}", line=1, column=col)
        return leaf

    tree = parse_node()
    if index != len(tokens):
        raise FormatError("trailing tokens after tree", line=1, column=tokens[index][1])
    return tree


def tree_to_obj(tree: Tree) -> dict:
    """Nested-object form for machine use: {"leaf": i} or {"left",...,"right",...}."""
    if isinstance(tree, int):
        return {"leaf": tree}
    left, right = tree
    return {"left": tree_to_obj(left), "right": tree_to_obj(right)}


def tree_from_obj(obj: dict) -> Tree:
    if not isinstance(obj, dict):
        raise FormatError(f"tree node must be an object, got {type(obj).__name__}")
    if set(obj) == {"leaf"}:
        leaf = obj["leaf"]
        if not isinstance(leaf, int) or isinstance(leaf, bool) or leaf < 1:
            raise FormatError(f"leaf must be a positive integer, got {leaf!r}")
        return leaf
    if set(obj) == {"left", "right"}:
        return (tree_from_obj(obj["left"]), tree_from_obj(obj["right"]))
    raise FormatError(f"tree node keys must be ['leaf'] or ['left', 'right'], got {sorted(obj)}")


# ---------------------------------------------------------------------------
# Phase 1: combine minimum-weight pairs under an instrumented comparator


class _SeqNode:
    __slots__ = ("weight", "leaves", "shape", "is_leaf")

    def __init__(self, weight, leaves: tuple[int, ...], shape: Tree, is_leaf: bool):
        self.weight = weight
        self.leaves = leaves
        self.shape = shape
        self.is_leaf = is_leaf


def _difference_coeffs(
    plus_a: _SeqNode, plus_b: _SeqNode, minus_a: _SeqNode, minus_b: _SeqNode
) -> dict[int, int]:
    """Coefficients of (plus pair) minus (minus pair); shared nodes cancel."""
    plus = [plus_a, plus_b]
    minus = []
    for node in (minus_a, minus_b):
        for k, candidate in enumerate(plus):
            if candidate is node:
                del plus[k]
                break
        else:
            minus.append(node)
    coeffs: dict[int, int] = {}
    for node in plus:
        coeffs.update(dict.fromkeys(node.leaves, 1))
    for node in minus:
        coeffs.update(dict.fromkeys(node.leaves, -1))
    return coeffs


def _phase1(
    entry_weights: Sequence,
    weight_add: Callable,
    weight_sub: Callable,
    judge: Callable[[dict[int, int], object], int],
) -> Tree:
    """Run the combine loop; returns the phase-1 combine shape.

    `judge(coeffs, diff)` must return -1 when the later (minuend) candidate
    pair is to win the comparison and +1 when the incumbent (subtrahend)
    keeps it; 0 is not an answer. The incumbent is always the earlier pair in
    left-to-right order, which is what makes the emitted functionals start
    with a -1 coefficient.
    """
    nodes = [
        _SeqNode(wi, (i,), i, True) for i, wi in enumerate(entry_weights, start=1)
    ]
    while len(nodes) > 1:
        m = len(nodes)
        # Combinable pairs in (left, right) lexicographic order: for each
        # left end, the right end extends until it swallows the next leaf.
        best_i = 0
        best_j = 1
        best_sum = weight_add(nodes[0].weight, nodes[1].weight)
        for i in range(m - 1):
            j = i + 1
            while True:
                if i or j != 1:
                    cand_sum = weight_add(nodes[i].weight, nodes[j].weight)
                    coeffs = _difference_coeffs(
                        nodes[i], nodes[j], nodes[best_i], nodes[best_j]
                    )
                    outcome = judge(coeffs, weight_sub(cand_sum, best_sum))
                    if outcome < 0:
                        best_i, best_j, best_sum = i, j, cand_sum
                if nodes[j].is_leaf or j + 1 >= m:
                    break
                j += 1
        left, right = nodes[best_i], nodes[best_j]
        merged = _SeqNode(
            weight_add(left.weight, right.weight),
            tuple(sorted(left.leaves + right.leaves)),
            (left.shape, right.shape),
            False,
        )
        nodes[best_i] = merged
        del nodes[best_j]
        assert all(a.leaves[0] < b.leaves[0] for a, b in zip(nodes, nodes[1:])), (
            "sequence must stay ordered by leftmost descendant leaf"
        )
    return nodes[0].shape


def _shape_to_depths(shape: Tree, n: int) -> tuple[int, ...]:
    depths = _leaf_depths(shape)
    if set(depths) != set(range(1, n + 1)):
        raise StructureError("combine shape lost leaves")
    return tuple(depths[i] for i in range(1, n + 1))


def _check_shadow(n: int, s: ShadowVector) -> None:
    if len(s.entries) != n:
        raise StructureError(f"instance has {n} weights but shadow has {len(s.entries)}")


def hu_tucker_phase1(
    w: Sequence[RationalLike],
    policy: str,
    s: ShadowVector,
    on_record: RecordSink | None = None,
) -> tuple[tuple[int, ...], DecisionTrace | None]:
    """Combine phase under a shadow direction; returns (leaf depths, trace).

    Ties are resolved by the sign of the functional on `s`, which is what
    realizes `policy`; whether a given orientation realizes leftmost or
    rightmost selection is validated externally, not assumed here. When
    `on_record` is given, records stream to it and the returned trace is
    None.
    """
    if policy not in POLICIES:
        raise DomainError(f"policy must be one of {POLICIES}, got {policy!r}")
    vec = require_nonnegative_weights(w)
    n = len(vec)
    _check_shadow(n, s)
    scale, scaled = clear_denominators(vec)
    shadow_entries = s.entries
    unit = scale == 1
    collector = TraceCollector(n) if on_record is None else None
    sink = on_record if on_record is not None else collector
    step = 0

    def judge(coeffs: dict[int, int], diff: int) -> int:
        nonlocal step
        step += 1
        if diff:
            realized = 1 if diff > 0 else -1
        else:
            drift = sum(c * shadow_entries[i - 1] for i, c in coeffs.items())
            if drift > 0:
                realized = 1
            elif drift < 0:
                realized = -1
            else:
                raise DomainError(
                    f"shadow direction fails to resolve the tie at step {step}"
                )
        # Difference coefficients are already unique, 1-based, and nonzero.
        f = LinearFunctional._trusted(tuple(sorted(coeffs.items())))
        primary = Fraction(diff) if unit else Fraction(diff, scale)
        sink(ComparisonRecord.make(step, f, primary, realized))
        return realized

    shape = _phase1(scaled, add, lambda a, b: a - b, judge)
    depths = _shape_to_depths(shape, n)
    return depths, (collector.trace() if collector is not None else None)


def phase1_explicit_shadow(
    w: Sequence[RationalLike],
    s: ShadowVector,
    on_record: RecordSink | None = None,
) -> tuple[tuple[int, ...], DecisionTrace | None]:
    """Combine phase over two-component weights (w_i, s_i), no tie policy.

    Every comparison is a plain lexicographic sign of the componentwise
    difference. Emits the same record stream as `hu_tucker_phase1` would
    with the matching shadow; a comparison with both components zero cannot
    be resolved and raises DomainError (it never happens for dyadic shadows).
    """
    vec = require_nonnegative_weights(w)
    n = len(vec)
    _check_shadow(n, s)
    scale, scaled = clear_denominators(vec)
    paired = list(zip(scaled, s.entries))
    unit = scale == 1
    collector = TraceCollector(n) if on_record is None else None
    sink = on_record if on_record is not None else collector
    step = 0

    def judge(coeffs: dict[int, int], diff) -> int:
        nonlocal step
        step += 1
        primary, drift = diff
        if primary:
            realized = 1 if primary > 0 else -1
        elif drift:
            realized = 1 if drift > 0 else -1
        else:
            raise DomainError(f"two-component comparison is exactly zero at step {step}")
        f = LinearFunctional._trusted(tuple(sorted(coeffs.items())))
        value = Fraction(primary) if unit else Fraction(primary, scale)
        sink(ComparisonRecord.make(step, f, value, realized))
        return realized

    shape = _phase1(
        paired,
        lambda a, b: (a[0] + b[0], a[1] + b[1]),
        lambda a, b: (a[0] - b[0], a[1] - b[1]),
        judge,
    )
    depths = _shape_to_depths(shape, n)
    return depths, (collector.trace() if collector is not None else None)


# ---------------------------------------------------------------------------
# Phase 2: rebuild an ordered tree from leaf depths


def reconstruct_from_depths(depths: Sequence[int]) -> Tree | None:
    """Build the ordered tree realizing the given leaf depths, or None.

    Left-to-right stack construction: push each leaf, and while the top two
    subtrees sit at the same positive depth, merge them one level up. The
    sequence is realizable exactly when a single depth-0 tree remains.
    Infeasibility is an answer, not an error.
    """
    if not depths:
        raise StructureError("depth sequence must have at least one entry")
    for d in depths:
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise StructureError(f"depths must be nonnegative integers, got {d!r}")
    stack: list[tuple[Tree, int]] = []
    for leaf, d in enumerate(depths, start=1):
        stack.append((leaf, d))
        while len(stack) >= 2 and stack[-1][1] == stack[-2][1] and stack[-1][1] >= 1:
            (right, rd) = stack.pop()
            (left, _) = stack.pop()
            stack.append(((left, right), rd - 1))
    if len(stack) == 1 and stack[0][1] == 0:
        return stack[0][0]
    return None


# ---------------------------------------------------------------------------
# Full solver


def hu_tucker(
    w: Sequence[RationalLike],
    policy: str,
    orientation: str | None = None,
) -> tuple[Tree | None, DecisionTrace]:
    """Solve an instance under a tie policy; returns (tree or None, trace).

    The shadow is the dyadic direction bound to the policy (negative for
    leftmost, positive for rightmost by default; pass `orientation` to
    override). A None tree means the depth sequence from phase 1 was not
    realizable, which the underlying theory rules out; it is reported, never
    raised.
    """
    if policy not in POLICIES:
        raise DomainError(f"policy must be one of {POLICIES}, got {policy!r}")
    vec = require_nonnegative_weights(w)
    s = dyadic_shadow(len(vec), orientation or POLICY_ORIENTATION[policy])
    depths, trace = hu_tucker_phase1(vec, policy, s)
    assert trace is not None
    return reconstruct_from_depths(depths), trace


# ---------------------------------------------------------------------------
# Oracles


def dp_optimal_cost(w: Sequence[RationalLike]) -> Fraction:
    """Optimal cost by interval dynamic programming, exact.

    cost(i, j) = min over splits of cost(i, k) + cost(k+1, j) plus the total
    weight of the interval; denominators are cleared once so the cubic loop
    runs on machine-or-big ints only.
    """
    vec = require_nonnegative_weights(w)
    n = len(vec)
    scale, scaled = clear_denominators(vec)
    if n == 1:
        return Fraction(0)
    prefix = [0] * (n + 1)
    for i, x in enumerate(scaled, start=1):
        prefix[i] = prefix[i - 1] + x
    # rows[i][j] and cols[j][i] both hold cost(i, j), 1-based.
    rows = [[0] * (n + 1) for _ in range(n + 2)]
    cols = [[0] * (n + 2) for _ in range(n + 1)]
    for span in range(2, n + 1):
        for i in range(1, n - span + 2):
            j = i + span - 1
            row_i = rows[i]
            best = min(map(add, row_i[i : j], cols[j][i + 1 : j + 1]))
            value = best + prefix[j] - prefix[i - 1]
            row_i[j] = value
            cols[j][i] = value
    return Fraction(rows[1][n], scale)


def enumerate_trees(n: int) -> Iterator[Tree]:
    """Yield every ordered binary tree over leaves 1..n. Capped at n = 12."""
    if n < 1:
        raise DomainError(f"need at least one leaf, got {n}")
    if n > ENUMERATION_CAP:
        raise CapacityError(f"enumeration is capped at n = {ENUMERATION_CAP}, got {n}")

    def gen(lo: int, hi: int) -> Iterator[Tree]:
        if lo == hi:
            yield lo
            return
        for k in range(lo, hi):
            for left in gen(lo, k):
                for right in gen(k + 1, hi):
                    yield (left, right)

    return gen(1, n)


def _all_depth_vectors(n: int) -> list[tuple[int, ...]]:
    # One vector per tree; ordered-leaf trees and their depth vectors biject.
    return [tree_depths(t) for t in enumerate_trees(n)]


_DEPTH_VECTORS: dict[int, list[tuple[int, ...]]] = {}


def brute_force_optimal(w: Sequence[RationalLike]) -> tuple[Fraction, int]:
    """Minimum cost over every ordered tree, and how many trees attain it."""
    vec = require_nonnegative_weights(w)
    n = len(vec)
    if n > ENUMERATION_CAP:
        raise CapacityError(f"brute force is capped at n = {ENUMERATION_CAP}, got {n}")
    if n not in _DEPTH_VECTORS:
        _DEPTH_VECTORS[n] = _all_depth_vectors(n)
    scale, scaled = clear_denominators(vec)
    best: int | None = None
    count = 0
    for depths in _DEPTH_VECTORS[n]:
        cost = sum(map(int.__mul__, scaled, depths))
        if best is None or cost < best:
            best = cost
            count = 1
        elif cost == best:
            count += 1
    assert best is not None
    return Fraction(best, scale), count
