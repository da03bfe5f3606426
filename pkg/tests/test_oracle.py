"""The brute-force oracle: grounding, conflicts, search, witnesses."""

import random

import pytest

from parachk import (
    BoundExceeded,
    ID,
    ListOf,
    ListV,
    Realizable,
    Signature,
    SketchKind,
    UNIT,
    UnitV,
    Unrealizable,
    atom,
    build_problem,
    ground,
    oracle_check,
    oracle_decide,
    propagate,
    validate_summary,
    verdict_name,
)
from parachk.oracle import (
    OracleBounds,
    ShapeConflict,
    Ungroundable,
    resolve_intermediate_shapes,
)
from parachk.functors import size_of

import support


def lst(*vs):
    return ListV(tuple(vs))


def tail_sig():
    return Signature(UNIT, ID, ListOf(ID))


def raw_list_sig():
    return Signature(UNIT, ListOf(ID), ListOf(ID))


def tail_sc_problem():
    return build_problem(
        "tail-sc",
        tail_sig(),
        SketchKind.FOLDR,
        [
            (UnitV(), [atom("A"), atom("B"), atom("C")], lst(atom("B"), atom("C")), lst()),
            (UnitV(), [atom("x"), atom("y")], lst(atom("y")), lst()),
            (UnitV(), [atom("z")], lst(), lst()),
        ],
    )


def test_tail_intermediates_resolved_by_suffix_chase():
    # the fold results on the suffixes [C] and [B,C] are pinned by the
    # length-1 and length-2 examples: sizes 0 and 1
    cs = propagate(tail_sc_problem())
    resolved = resolve_intermediate_shapes(cs)
    sizes = sorted(size_of(ListOf(ID), s) for s in resolved.values())
    assert sizes == [0, 0, 1]  # Y1, Y2 of the 3-example plus Y1 of the 2-example
    trace_sizes = [size_of(ListOf(ID), resolved[uid]) for uid in (0, 1)]
    assert trace_sizes == [0, 1]


def test_tail_sc_is_unrealizable():
    assert isinstance(oracle_decide(propagate(tail_sc_problem())), Unrealizable)


def test_raw_and_map_ground_without_unknowns():
    p = build_problem(
        "rev",
        raw_list_sig(),
        SketchKind.RAW,
        [(UnitV(), [lst(atom("a"), atom("b"))], lst(atom("b"), atom("a")))],
    )
    gi = ground(propagate(p))
    assert gi.inter_shapes == {}
    assert len(gi.constraints) == 1


def test_shape_conflict_detected_in_ground():
    p = build_problem(
        "sortdedup",
        raw_list_sig(),
        SketchKind.RAW,
        [
            (UnitV(), [lst(atom("a"), atom("a"))], lst(atom("a"))),
            (UnitV(), [lst(atom("a"), atom("b"))], lst(atom("a"), atom("b"))),
        ],
    )
    with pytest.raises(ShapeConflict):
        ground(propagate(p))
    assert isinstance(oracle_decide(propagate(p)), Unrealizable)


def test_position_conflict_detected_in_search():
    p = build_problem(
        "swap",
        raw_list_sig(),
        SketchKind.RAW,
        [
            (UnitV(), [lst(atom("a"), atom("b"))], lst(atom("a"), atom("b"))),
            (UnitV(), [lst(atom("b"), atom("a"))], lst(atom("a"), atom("b"))),
        ],
    )
    assert isinstance(oracle_decide(propagate(p)), Unrealizable)


def test_atom_consistency_failure():
    p = build_problem(
        "fAC",
        Signature(UNIT, ID, ID),
        SketchKind.RAW,
        [(UnitV(), [atom("A")], atom("C"))],
    )
    assert isinstance(oracle_decide(propagate(p)), Unrealizable)


def test_reverse_witness_positions():
    p = build_problem(
        "rev",
        raw_list_sig(),
        SketchKind.RAW,
        [
            (UnitV(), [lst()], lst()),
            (UnitV(), [lst(atom("a"))], lst(atom("a"))),
            (UnitV(), [lst(atom("a"), atom("b"))], lst(atom("b"), atom("a"))),
            (UnitV(), [lst(atom("a"), atom("b"), atom("c"))], lst(atom("c"), atom("b"), atom("a"))),
        ],
    )
    cs = propagate(p)
    verdict = oracle_decide(cs)
    assert isinstance(verdict, Realizable)
    table = verdict.witness.position_table
    for n in (1, 2, 3):
        for i in range(n):
            assert table[((n,), i)] == n - 1 - i
    assert validate_summary(cs, verdict.witness)


def test_oracle_requires_shape_completeness():
    p = build_problem(
        "tail-min",
        tail_sig(),
        SketchKind.FOLDR,
        [
            (UnitV(), [atom("A"), atom("B"), atom("C")], lst(atom("B"), atom("C")), lst()),
            (UnitV(), [atom("D"), atom("E")], lst(atom("E")), lst()),
        ],
    )
    with pytest.raises(Ungroundable):
        ground(propagate(p))


def test_bound_exceeded():
    xs = [atom(f"x{i}") for i in range(20)]
    p = build_problem(
        "big",
        raw_list_sig(),
        SketchKind.RAW,
        [(UnitV(), [lst(*xs)], lst(*xs))],
    )
    with pytest.raises(BoundExceeded):
        oracle_check(ground(propagate(p)))
    # a generous bound allows it
    verdict = oracle_check(ground(propagate(p)), OracleBounds(max_positions=32))
    assert isinstance(verdict, Realizable)


def test_determinism():
    rng = random.Random(99)
    for _ in range(10):
        p = support.random_foldr_problem(rng)
        cs = propagate(p)
        v1, v2 = oracle_decide(cs), oracle_decide(cs)
        assert verdict_name(v1) == verdict_name(v2)
        if isinstance(v1, Realizable):
            assert v1.witness == v2.witness


def test_oracle_witnesses_validate():
    rng = random.Random(41)
    checked = 0
    for _ in range(40):
        p = support.random_foldr_problem(rng)
        cs = propagate(p)
        verdict = oracle_decide(cs)
        if isinstance(verdict, Realizable):
            assert validate_summary(cs, verdict.witness)
            checked += 1
    assert checked >= 10
