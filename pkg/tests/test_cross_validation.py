"""Oracle versus SMT backend on random shape-complete instances. The
acceptance suite runs the full 200-instance agreement check; this is the
fast everyday version."""

import random

from parachk import (
    Realizable,
    check,
    oracle_decide,
    propagate,
    shape_complete,
    validate_summary,
)
from parachk.verdict import same_variant, verdict_name

import support
from conftest import needs_solver


@needs_solver
def test_oracle_and_solver_agree_on_random_instances(cfg):
    rng = random.Random(2024)
    for _ in range(40):
        p = support.random_problem(rng)
        assert shape_complete(p).complete
        cs = propagate(p)
        oracle_verdict = oracle_decide(cs)
        solver_verdict = check(p, cfg).verdict
        assert same_variant(oracle_verdict, solver_verdict), (
            f"{p.name}: oracle {verdict_name(oracle_verdict)} vs "
            f"solver {verdict_name(solver_verdict)}"
        )


@needs_solver
def test_oracle_and_solver_agree_on_the_benchmark(cfg):
    from parachk import corpus

    for entry in corpus():
        cs = propagate(entry.problem_sc)
        oracle_verdict = oracle_decide(cs)
        solver_verdict = check(entry.problem_sc, cfg).verdict
        assert same_variant(oracle_verdict, solver_verdict), entry.name
        expected = Realizable if entry.expected_fold else type(oracle_verdict)
        assert verdict_name(oracle_verdict).startswith(
            "Realizable" if entry.expected_fold else "Unrealizable"
        ), entry.name


@needs_solver
def test_solver_witnesses_replay_like_oracle_witnesses(cfg):
    rng = random.Random(555)
    validated = 0
    for _ in range(20):
        p = support.random_foldr_problem(rng)
        cs = propagate(p)
        report = check(p, cfg)
        if isinstance(report.verdict, Realizable):
            assert validate_summary(cs, report.verdict.witness)
            validated += 1
        oracle_verdict = oracle_decide(cs)
        if isinstance(oracle_verdict, Realizable):
            assert validate_summary(cs, oracle_verdict.witness)
    assert validated >= 5
