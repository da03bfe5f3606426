"""Container translation: typechecking, shapes, canonical positions, and
shape schemas."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parachk import (
    Atom,
    AtomV,
    BOOL,
    BoolV,
    ID,
    INT,
    IdS,
    IntS,
    IntV,
    JustV,
    ListOf,
    ListS,
    ListV,
    MaybeOf,
    MaybeS,
    NothingV,
    PairV,
    ProdOf,
    ProdS,
    UNIT,
    UnitV,
    flatten_shape,
    from_extension,
    shape_of,
    size_of,
    to_extension,
    typecheck,
)
from parachk.functors import (
    ArityMismatch,
    Extension,
    ShapeMismatch,
    TypeMismatch,
    UnsupportedFunctor,
)

A, B, C = Atom(0, "A"), Atom(1, "B"), Atom(2, "C")


def lst(*vs):
    return ListV(tuple(vs))


def test_typecheck_structural():
    assert typecheck(ListOf(ID), lst(AtomV(A), AtomV(B), AtomV(C)))
    assert not typecheck(ListOf(ID), lst(AtomV(A), IntV(3)))
    assert typecheck(
        ProdOf(ListOf(ID), ListOf(ID)),
        PairV(lst(AtomV(A)), lst(AtomV(B), AtomV(C))),
    )
    assert not typecheck(ID, IntV(1))
    assert typecheck(MaybeOf(INT), JustV(IntV(2)))
    assert not typecheck(MaybeOf(INT), JustV(BoolV(True)))


def test_shape_of_erases_atoms_keeps_constants():
    assert shape_of(ListOf(ID), lst(AtomV(A), AtomV(B), AtomV(C))) == ListS(
        (IdS(), IdS(), IdS())
    )
    assert shape_of(MaybeOf(ID), NothingV()) == MaybeS(None)
    s = shape_of(
        ProdOf(ListOf(ID), ListOf(ID)),
        PairV(lst(AtomV(A)), lst(AtomV(B), AtomV(C))),
    )
    assert s == ProdS(ListS((IdS(),)), ListS((IdS(), IdS())))
    assert shape_of(INT, IntV(7)) == IntS(7)
    with pytest.raises(TypeMismatch):
        shape_of(ListOf(ID), lst(IntV(1)))


def test_size_of():
    assert size_of(ProdOf(ListOf(ID), ListOf(ID)), ProdS(ListS((IdS(),)), ListS((IdS(), IdS())))) == 3
    assert size_of(ListOf(ProdOf(ID, ID)), ListS((ProdS(IdS(), IdS()), ProdS(IdS(), IdS())))) == 4
    assert size_of(INT, IntS(7)) == 0
    with pytest.raises(ShapeMismatch):
        size_of(ListOf(ID), IntS(1))


def test_to_extension_canonical_order():
    e = to_extension(ListOf(ID), lst(AtomV(A), AtomV(B), AtomV(C)))
    assert [a.label for a in e.elements] == ["A", "B", "C"]
    e = to_extension(ID, AtomV(A))
    assert e.shape == IdS() and [a.label for a in e.elements] == ["A"]


def _tagged_product_positions(f, v):
    """Independent enumeration of product positions: collect the left
    component's elements tagged inl and the right's tagged inr, then apply
    the order-preserving bijection inl k -> k, inr k -> size(left) + k."""
    left = to_extension(f.left, v.first)
    right = to_extension(f.right, v.second)
    out = {}
    for k, a in enumerate(left.elements):
        out[k] = a
    for k, a in enumerate(right.elements):
        out[len(left.elements) + k] = a
    return [out[i] for i in range(len(out))]


def test_product_offset_matches_tagged_sum():
    f = ProdOf(ListOf(ID), ListOf(ID))
    v = PairV(lst(AtomV(A)), lst(AtomV(B), AtomV(C)))
    assert list(to_extension(f, v).elements) == _tagged_product_positions(f, v)
    g = ProdOf(ProdOf(ID, ID), ListOf(ID))
    w = PairV(PairV(AtomV(B), AtomV(A)), lst(AtomV(C)))
    assert list(to_extension(g, w).elements) == _tagged_product_positions(g, w)


def test_from_extension_cases():
    assert from_extension(to_extension(ListOf(ID), lst())) == lst()
    assert from_extension(Extension(MaybeOf(ID), MaybeS(IdS()), (A,))) == JustV(AtomV(A))
    with pytest.raises(ArityMismatch):
        from_extension(Extension(ListOf(ID), ListS((IdS(), IdS())), (A,)))


def test_flatten_shape_product_of_lists():
    sch = flatten_shape(ProdOf(ListOf(ID), ListOf(ID)))
    assert [s.kind for s in sch.slots] == ["nat", "nat"]
    assert sch.refines((1, 2)) and not sch.refines((-1, 0))
    assert sch.count_value((1, 2)) == 3


def test_flatten_shape_const_bool():
    sch = flatten_shape(BOOL)
    assert len(sch.slots) == 1 and sch.count_value((1,)) == 0
    assert sch.refines((0,)) and sch.refines((1,)) and not sch.refines((2,))


def test_flatten_shape_maybe_by_enumeration():
    sch = flatten_shape(MaybeOf(ID))
    for shape in (MaybeS(None), MaybeS(IdS())):
        slots = sch.encode_shape(shape)
        assert sch.count_value(slots) == size_of(MaybeOf(ID), shape)
        assert sch.decode_slots(slots) == shape
    assert sch.count_value(sch.encode_shape(MaybeS(IdS()))) == 1


def test_flatten_shape_list_of_pairs():
    sch = flatten_shape(ListOf(ProdOf(ID, ID)))
    assert len(sch.slots) == 1
    assert sch.count_value((2,)) == 4


def test_flatten_shape_rejects_nested_variable_lists():
    with pytest.raises(UnsupportedFunctor) as err:
        flatten_shape(ListOf(ListOf(ID)))
    assert "List(List(Id))" in str(err.value)
    with pytest.raises(UnsupportedFunctor):
        flatten_shape(ProdOf(ID, ListOf(BOOL)))


# ---------------------------------------------------------------------------
# Property suites

LABELS = "abcdef"

functor_exprs = st.recursive(
    st.sampled_from([ID, UNIT, INT, BOOL]),
    lambda inner: st.one_of(
        inner.map(ListOf),
        st.tuples(inner, inner).map(lambda t: ProdOf(t[0], t[1])),
        inner.map(MaybeOf),
    ),
    max_leaves=4,
)


def value_strategy(f):
    if f == ID:
        return st.sampled_from(LABELS).map(lambda s: AtomV(Atom(LABELS.index(s), s)))
    if f == UNIT:
        return st.just(UnitV())
    if f == INT:
        return st.integers(-5, 5).map(IntV)
    if f == BOOL:
        return st.booleans().map(BoolV)
    if isinstance(f, ListOf):
        return st.lists(value_strategy(f.inner), max_size=5).map(lambda xs: ListV(tuple(xs)))
    if isinstance(f, ProdOf):
        return st.tuples(value_strategy(f.left), value_strategy(f.right)).map(
            lambda t: PairV(t[0], t[1])
        )
    if isinstance(f, MaybeOf):
        return st.one_of(st.just(NothingV()), value_strategy(f.inner).map(JustV))
    raise AssertionError(f)


typed_values = functor_exprs.flatmap(
    lambda f: st.tuples(st.just(f), value_strategy(f))
)


@given(typed_values)
@settings(max_examples=150)
def test_roundtrip_extension(fv):
    f, v = fv
    assert from_extension(to_extension(f, v)) == v


@given(typed_values)
@settings(max_examples=150)
def test_size_coherence(fv):
    f, v = fv
    ext = to_extension(f, v)
    assert len(ext.elements) == size_of(f, shape_of(f, v))


@given(typed_values.filter(lambda fv: isinstance(fv[0], ProdOf) or True), typed_values)
@settings(max_examples=100)
def test_offset_coherence(fv, gw):
    f, v = fv
    g, w = gw
    prod = to_extension(ProdOf(f, g), PairV(v, w))
    left = to_extension(f, v)
    for k in range(len(left.elements)):
        assert prod.elements[k] == left.elements[k]


@given(typed_values)
@settings(max_examples=150)
def test_schema_coherence(fv):
    f, v = fv
    try:
        sch = flatten_shape(f)
    except UnsupportedFunctor:
        return
    shape = shape_of(f, v)
    slots = sch.encode_shape(shape)
    assert sch.refines(slots)
    assert sch.count_value(slots) == size_of(f, shape)
    assert sch.decode_slots(slots) == shape
