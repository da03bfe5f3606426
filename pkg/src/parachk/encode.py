"""SMT-LIB2 encoding of constraint sets.

The morphism is encoded as uninterpreted functions over the flattened input
shape slots: one function per output shape slot, plus one position function
mapping (input shape slots, output position) to the source input position.
Unknown intermediates contribute slot constants guarded by their schema's
refinement and an uninterpreted element function; element functions are only
constrained inside their dependency bounds, and output positions of unknown
containers are universally quantified under a guard. Constraints with known
outputs are fully enumerated and stay quantifier free.

Script generation is deterministic: a fixed problem yields byte-identical
text.
"""

from __future__ import annotations

from dataclasses import dataclass

from .functors import (
    FunctorExpr,
    ProdOf,
    ProdS,
    ShapeValue,
    flatten_shape,
    size_of,
)
from .propagate import ConstraintSet, Known, Unknown


class EncodeError(Exception):
    pass


@dataclass(frozen=True)
class SmtScript:
    logic: str
    declarations: tuple[str, ...]
    assertions: tuple[str, ...]

    def text(self, produce_model: bool = True) -> str:
        lines = []
        if produce_model:
            lines.append("(set-option :produce-models true)")
        lines.append(f"(set-logic {self.logic})")
        lines.extend(self.declarations)
        lines.extend(f"(assert {a})" for a in self.assertions)
        lines.append("(check-sat)")
        if produce_model:
            lines.append("(get-model)")
        return "\n".join(lines) + "\n"


def _app(name: str, args: list[str]) -> str:
    if not args:
        return name
    return f"({name} " + " ".join(args) + ")"


def _num(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


def mid_terms(uid: int, schema) -> list[str]:
    return [f"mid{uid}_{slot.name}" for slot in schema.slots]


def _blocks(f: FunctorExpr) -> list[FunctorExpr]:
    if isinstance(f, ProdOf):
        return _blocks(f.left) + _blocks(f.right)
    return [f]


def _block_shapes(f: FunctorExpr, s: ShapeValue) -> list[ShapeValue]:
    if isinstance(f, ProdOf):
        assert isinstance(s, ProdS)
        return _block_shapes(f.left, s.left) + _block_shapes(f.right, s.right)
    return [s]


def encode(cs: ConstraintSet, naive_products: bool = False) -> SmtScript:
    """Translate a constraint set to a solver-ready script."""
    part_schemas = [flatten_shape(f) for f in cs.input_parts]
    out_schema = flatten_shape(cs.output_functor)
    in_arity = sum(len(s.slots) for s in part_schemas)

    unknowns: dict[int, object] = {}
    for c in cs.constraints:
        for part in (*c.inputs, c.output):
            if isinstance(part, Unknown):
                unknowns[part.uid] = part.schema

    int_args = " ".join(["Int"] * in_arity)
    decls = [
        f"(declare-fun oshape{j} ({int_args}) Int)"
        for j in range(len(out_schema.slots))
    ]
    pos_args = " ".join(["Int"] * (in_arity + (2 if naive_products else 1)))
    if naive_products:
        decls.append(f"(declare-fun srcblk ({pos_args}) Int)")
        decls.append(f"(declare-fun srcoff ({pos_args}) Int)")
    else:
        decls.append(f"(declare-fun srcpos ({pos_args}) Int)")
    for uid in sorted(unknowns):
        schema = unknowns[uid]
        for term in mid_terms(uid, schema):
            decls.append(f"(declare-fun {term} () Int)")
        decls.append(f"(declare-fun elem{uid} (Int) Int)")

    assertions = []
    for uid in sorted(unknowns):
        schema = unknowns[uid]
        assertions.extend(schema.smt_refinements(mid_terms(uid, schema)))

    def slot_terms(part, schema) -> list[str]:
        if isinstance(part, Known):
            return [_num(v) for v in schema.encode_shape(part.ext.shape)]
        return mid_terms(part.uid, part.schema)

    for c in cs.constraints:
        ins = [t for part, schema in zip(c.inputs, part_schemas) for t in slot_terms(part, schema)]
        if isinstance(c.output, Known):
            out_slots = [_num(v) for v in out_schema.encode_shape(c.output.ext.shape)]
        else:
            out_slots = mid_terms(c.output.uid, c.output.schema)
        for j, term in enumerate(out_slots):
            assertions.append(f"(= {_app(f'oshape{j}', ins)} {term})")
        if naive_products:
            assertions.extend(_positions_naive(cs, c, ins, out_schema))
        else:
            assertions.extend(_positions(cs, c, ins, out_schema))

    logic = "UFLIA" if cs.unknown_count else "QF_UFLIA"
    return SmtScript(logic, tuple(decls), tuple(assertions))


def shrink_assertions(cs: ConstraintSet) -> list[str]:
    """Sound-for-sat bounds on intermediate list lengths, used only when
    hunting for a small witness after satisfiability is already settled.
    Solvers are free to pick absurdly large unconstrained shapes; a model of
    the bounded script is still a model of the exact one."""
    cap = 8
    for c in cs.constraints:
        known = sum(
            len(p.ext.elements) for p in (*c.inputs, c.output) if isinstance(p, Known)
        )
        cap = max(cap, 8 + known)
    out = []
    seen = set()
    for c in cs.constraints:
        for part in (*c.inputs, c.output):
            if isinstance(part, Unknown) and part.uid not in seen:
                seen.add(part.uid)
                for slot, term in zip(part.schema.slots, mid_terms(part.uid, part.schema)):
                    if slot.kind == "nat":
                        out.append(f"(<= {term} {cap})")
    return out


def _or(disjuncts: list[str]) -> str:
    if not disjuncts:
        return "false"
    if len(disjuncts) == 1:
        return disjuncts[0]
    return "(or " + " ".join(disjuncts) + ")"


def _positions(cs, c, ins, out_schema) -> list[str]:
    """Position and element-consistency assertions for one constraint."""
    known_pos: list[tuple[int, int]] = []  # absolute position, element code
    window = None  # (uid, base offset, count form string)
    off = 0
    for part in c.inputs:
        if isinstance(part, Known):
            if window is not None and part.ext.elements:
                raise EncodeError("known input positions after a symbolic container")
            for a in part.ext.elements:
                known_pos.append((off, a.code))
                off += 1
        else:
            cf = part.schema.count.smt(mid_terms(part.uid, part.schema))
            window = (part.uid, off, cf)

    def disjuncts(q_term: str, target: str) -> str:
        g = _app("srcpos", ins + [q_term])
        ds = [f"(and (= {g} {p}) (= {code} {target}))" for p, code in known_pos]
        if window is not None:
            uid, base, cf = window
            upper = f"(+ {base} {cf})" if cf != "0" else str(base)
            ds.append(
                f"(and (>= {g} {base}) (< {g} {upper}) "
                f"(= (elem{uid} (- {g} {base})) {target}))"
            )
        return _or(ds)

    out = []
    if isinstance(c.output, Known):
        for q, a in enumerate(c.output.ext.elements):
            out.append(disjuncts(str(q), str(a.code)))
    else:
        uid = c.output.uid
        cf = c.output.schema.count.smt(mid_terms(uid, c.output.schema))
        body = disjuncts("q", f"(elem{uid} q)")
        out.append(
            f"(forall ((q Int)) (=> (and (>= q 0) (< q {cf})) {body}))"
        )
    return out


def _positions_naive(cs, c, ins, out_schema) -> list[str]:
    """Tagged-union position encoding: positions are (block, offset) pairs
    over the product structure, so the solver must reason about the union."""
    in_blocks = []  # (kind, payload)
    for part in c.inputs:
        if isinstance(part, Known):
            shapes = _block_shapes(part.ext.functor, part.ext.shape)
            fs = _blocks(part.ext.functor)
            taken = 0
            for bf, bs in zip(fs, shapes):
                n = size_of(bf, bs)
                codes = [a.code for a in part.ext.elements[taken : taken + n]]
                taken += n
                in_blocks.append(("known", codes))
        else:
            terms = mid_terms(part.uid, part.schema)
            sub = [flatten_shape(bf) for bf in _blocks(part.schema.functor)]
            start = 0
            bases: list[str] = []
            for schema in sub:
                width = len(schema.slots)
                cf = schema.count.smt(terms[start : start + width])
                in_blocks.append(("window", (part.uid, list(bases), cf)))
                bases.append(cf)
                start += width

    def disjuncts(qb: str, qo: str, target: str) -> str:
        blk = _app("srcblk", ins + [qb, qo])
        off_t = _app("srcoff", ins + [qb, qo])
        ds = []
        for bi, (kind, payload) in enumerate(in_blocks):
            if kind == "known":
                for j, code in enumerate(payload):
                    ds.append(
                        f"(and (= {blk} {bi}) (= {off_t} {j}) (= {code} {target}))"
                    )
            else:
                uid, bases, cf = payload
                idx = " ".join([*bases, off_t])
                lin = f"(+ {idx})" if bases else off_t
                ds.append(
                    f"(and (= {blk} {bi}) (>= {off_t} 0) (< {off_t} {cf}) "
                    f"(= (elem{uid} {lin}) {target}))"
                )
        return _or(ds)

    out = []
    out_fs = _blocks(cs.output_functor)
    if isinstance(c.output, Known):
        shapes = _block_shapes(cs.output_functor, c.output.ext.shape)
        taken = 0
        for b, (bf, bs) in enumerate(zip(out_fs, shapes)):
            n = size_of(bf, bs)
            for q in range(n):
                code = c.output.ext.elements[taken + q].code
                out.append(disjuncts(str(b), str(q), str(code)))
            taken += n
    else:
        uid = c.output.uid
        terms = mid_terms(uid, c.output.schema)
        sub = [flatten_shape(bf) for bf in out_fs]
        start = 0
        bases: list[str] = []
        for b, schema in enumerate(sub):
            width = len(schema.slots)
            cf = schema.count.smt(terms[start : start + width])
            idx = " ".join([*bases, "q"])
            lin = f"(+ {idx})" if bases else "q"
            body = disjuncts(str(b), "q", f"(elem{uid} {lin})")
            out.append(
                f"(forall ((q Int)) (=> (and (>= q 0) (< q {cf})) {body}))"
            )
            bases.append(cf)
            start += width
    return out
