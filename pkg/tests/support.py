"""Shared test helpers: random shape-complete fold problems with known
construction, plus small transforms used by the invariance suites.

Realizable instances are built by sampling an actual container morphism
lazily (one output shape per fresh input shape, one source per output
position) and running it along each trace, so the sampled morphism is a
witness by construction. Unrealizable instances are made from realizable
ones by local output mutations; mutations may happen to stay realizable,
which is fine for agreement testing.
"""

from __future__ import annotations

import random

from parachk import (
    Atom,
    size_of,
    BoolV,
    ID,
    INT,
    IntS,
    IntV,
    JustV,
    ListOf,
    ListS,
    ListV,
    IdS,
    MaybeOf,
    MaybeS,
    NothingV,
    PairV,
    ProdOf,
    ProdS,
    Problem,
    Signature,
    SketchKind,
    UNIT,
    UnitV,
    Value,
    atom,
    build_problem,
    flatten_shape,
    from_extension,
    shape_of,
    to_extension,
    relabel_problem,
)
from parachk.functors import Extension, ShapeValue

ATOM_POOL = ["a", "b", "c", "d", "e", "f"]

H_POOL = [UNIT, INT, ListOf(ID)]
F_POOL = [ID, ProdOf(ID, ID), ListOf(ID)]
G_POOL = [ListOf(ID), MaybeOf(ID), INT, ProdOf(ListOf(ID), ListOf(ID))]


def _random_atom(rng) -> Value:
    return atom(rng.choice(ATOM_POOL))


def random_value(rng, f, list_cap=3) -> Value:
    if f == ID:
        return _random_atom(rng)
    if f == UNIT:
        return UnitV()
    if f == INT:
        return IntV(rng.randint(-2, 5))
    if isinstance(f, ListOf):
        n = rng.randint(0, list_cap)
        return ListV(tuple(random_value(rng, f.inner, list_cap) for _ in range(n)))
    if isinstance(f, ProdOf):
        return PairV(random_value(rng, f.left, list_cap), random_value(rng, f.right, list_cap))
    if isinstance(f, MaybeOf):
        return JustV(random_value(rng, f.inner, list_cap)) if rng.random() < 0.6 else NothingV()
    if f.__class__.__name__ == "ConstBool":
        return BoolV(rng.random() < 0.5)
    raise AssertionError(f"no generator for {f}")


def _random_g_shape(rng, g, empty: bool) -> ShapeValue:
    """A small shape of g; with empty=True, one with zero positions."""
    if g == INT:
        return IntS(rng.randint(-2, 5))
    if isinstance(g, MaybeOf):
        return MaybeS(None) if (empty or rng.random() < 0.4) else MaybeS(IdS())
    if isinstance(g, ListOf):
        n = 0 if empty else rng.randint(0, 3)
        return ListS(tuple([IdS()] * n)) if g.inner == ID else ListS(
            tuple([ProdS(IdS(), IdS())] * n)
        )
    if isinstance(g, ProdOf):
        return ProdS(_random_g_shape(rng, g.left, empty), _random_g_shape(rng, g.right, empty))
    raise AssertionError(f"no shape generator for {g}")


def random_foldr_problem(rng: random.Random, realizable: bool = True) -> Problem:
    """A shape-complete fold problem with input lengths 0..L (L <= 4).

    One extra value is shared by every example, so the base is shared too
    and suffix closure holds by construction (examples form a tower: the
    length-n example uses the last n shapes of one maximal shape sequence).
    """
    sig = Signature(rng.choice(H_POOL), rng.choice(F_POOL), rng.choice(G_POOL))
    extra = random_value(rng, sig.extra, list_cap=2)
    base = random_value(rng, sig.result, list_cap=2)
    max_len = rng.randint(1, 4)
    tower = [random_value(rng, sig.element, list_cap=2) for _ in range(max_len)]
    tower_shapes = [shape_of(sig.element, v) for v in tower]

    h_ext = to_extension(sig.extra, extra)
    shape_morphism: dict = {}
    pos_morphism: dict = {}
    out_schema = flatten_shape(sig.result)

    def apply_morphism(x_ext: Extension, acc_ext: Extension) -> Extension:
        key = (
            tuple(flatten_shape(sig.extra).encode_shape(h_ext.shape)),
            tuple(flatten_shape(sig.element).encode_shape(x_ext.shape)),
            tuple(out_schema.encode_shape(acc_ext.shape)),
        )
        in_elems = [*h_ext.elements, *x_ext.elements, *acc_ext.elements]
        if key not in shape_morphism:
            shape_morphism[key] = _random_g_shape(rng, sig.result, empty=not in_elems)
        shape = shape_morphism[key]
        elems = []
        for q in range(size_of(sig.result, shape)):
            if (key, q) not in pos_morphism:
                pos_morphism[(key, q)] = rng.randrange(len(in_elems))
            elems.append(in_elems[pos_morphism[(key, q)]])
        return Extension(sig.result, shape, tuple(elems))

    examples = []
    for n in range(max_len + 1):
        inputs = []
        for i in range(n):
            shape = tower_shapes[n - 1 - i]
            ext = to_extension(sig.element, tower[n - 1 - i])
            fresh = tuple(Atom(-1, rng.choice(ATOM_POOL)) for _ in ext.elements)
            inputs.append(from_extension(Extension(sig.element, shape, fresh)))
        acc = to_extension(sig.result, base)
        for step in range(n):
            x_ext = to_extension(sig.element, inputs[n - 1 - step])
            acc = apply_morphism(x_ext, acc)
        examples.append((extra, inputs, from_extension(acc), base))

    problem = build_problem(f"random-{rng.randrange(10**6)}", sig, SketchKind.FOLDR, examples)
    if realizable:
        return problem
    return mutate_problem(rng, problem)


def mutate_problem(rng: random.Random, p: Problem) -> Problem:
    """Perturb one output; the result is often, not always, unrealizable."""
    examples = [list(ex) for ex in ((e.extra, e.inputs, e.output, e.base) for e in p.examples)]
    candidates = [i for i, e in enumerate(examples) if e[1]]
    if not candidates:
        return p
    i = rng.choice(candidates)
    ext = to_extension(p.signature.result, examples[i][2])
    if ext.elements and rng.random() < 0.7:
        elems = list(ext.elements)
        j = rng.randrange(len(elems))
        elems[j] = Atom(-1, rng.choice(ATOM_POOL))
        mutated = from_extension(Extension(ext.functor, ext.shape, tuple(elems)))
    else:
        mutated = random_value(rng, p.signature.result, list_cap=2)
    examples[i][2] = mutated
    try:
        return build_problem(p.name + "-mut", p.signature, p.sketch, examples)
    except Exception:
        return p


def random_raw_problem(rng: random.Random) -> Problem:
    sig = Signature(UNIT, rng.choice([ID, ListOf(ID), ProdOf(ID, ID)]),
                    rng.choice([ID, ListOf(ID), MaybeOf(ID)]))
    examples = [
        (UnitV(), [random_value(rng, sig.element, list_cap=3)],
         random_value(rng, sig.result, list_cap=3))
        for _ in range(rng.randint(1, 4))
    ]
    return build_problem(f"raw-{rng.randrange(10**6)}", sig, SketchKind.RAW, examples)


def random_problem(rng: random.Random) -> Problem:
    if rng.random() < 0.25:
        return random_raw_problem(rng)
    return random_foldr_problem(rng, realizable=rng.random() < 0.55)


def fresh_relabeling(p: Problem) -> dict[str, str]:
    return {label: f"{label}$" for label in p.atoms.labels}


def permuted_examples(rng: random.Random, p: Problem) -> Problem:
    order = list(range(len(p.examples)))
    rng.shuffle(order)
    exs = [p.examples[i] for i in order]
    return build_problem(p.name + "-perm", p.signature, p.sketch, exs)


def with_constant_extra(p: Problem, literal: int = 7) -> Problem:
    """Replace a Unit extra with the same integer literal on every example."""
    assert p.signature.extra == UNIT
    sig = Signature(INT, p.signature.element, p.signature.result)
    exs = [(IntV(literal), ex.inputs, ex.output, ex.base) for ex in p.examples]
    return build_problem(p.name + "-extra", sig, p.sketch, exs)


def duplicate_relabeled_example(rng: random.Random, p: Problem) -> Problem:
    """Append a copy of one example with all atoms renamed injectively;
    shapes are unchanged, so shape completeness is preserved."""
    mapping = fresh_relabeling(p)
    shadow = relabel_problem(p, mapping)
    candidates = [i for i, e in enumerate(p.examples) if e.inputs]
    if not candidates:
        return p
    i = rng.choice(candidates)
    exs = [(e.extra, e.inputs, e.output, e.base) for e in p.examples]
    dup = shadow.examples[i]
    # keep the foldr base-consistency invariant: the duplicate must reuse
    # the original extra and base when extras collide after relabeling
    exs.append((p.examples[i].extra, dup.inputs, dup.output, p.examples[i].base))
    return build_problem(p.name + "-dup", p.signature, p.sketch, exs)
