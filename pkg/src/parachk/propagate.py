"""Propagation of input-output examples through sketches into symbolic
container-morphism constraints, and the shape-completeness check for folds.

Each constraint states that one application of the unknown morphism maps a
tuple of input containers to an output container. For raw and map sketches
every container is known. For foldr sketches the morphism takes the triple
(extra, element, accumulator); the accumulators threading a trace are fresh
unknowns whose shapes come from the result functor's schema. Inputs of an
example are numbered right to left, so constraint 0 of a trace consumes the
last list element and the given base value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .functors import (
    Extension,
    FunctorExpr,
    ProdOf,
    ShapeSchema,
    flatten_shape,
    shape_of,
    show_shape,
    to_extension,
)
from .problem import AtomTable, Problem, SketchKind


class PropagationUnrealizable(Exception):
    """The problem is unrealizable for a reason visible before solving."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class Known:
    ext: Extension


@dataclass(frozen=True)
class Unknown:
    uid: int
    schema: ShapeSchema


SymbolicContainer = Known | Unknown


@dataclass(frozen=True)
class MorphismConstraint:
    inputs: tuple[SymbolicContainer, ...]
    output: SymbolicContainer


@dataclass(frozen=True)
class ConstraintSet:
    input_parts: tuple[FunctorExpr, ...]
    output_functor: FunctorExpr
    constraints: tuple[MorphismConstraint, ...]
    unknown_count: int
    atoms: AtomTable

    @property
    def input_functor(self) -> FunctorExpr:
        """The morphism domain as a single right-nested product."""
        return reduce(lambda acc, f: ProdOf(f, acc), reversed(self.input_parts))


def propagate(p: Problem) -> ConstraintSet:
    if p.sketch is SketchKind.RAW:
        return propagate_raw(p)
    if p.sketch is SketchKind.MAP:
        return propagate_map(p)
    return propagate_foldr(p)


def propagate_raw(p: Problem) -> ConstraintSet:
    sig = p.signature
    constraints = [
        MorphismConstraint(
            (Known(to_extension(sig.element, ex.inputs[0])),),
            Known(to_extension(sig.result, ex.output)),
        )
        for ex in p.examples
    ]
    return ConstraintSet((sig.element,), sig.result, tuple(constraints), 0, p.atoms)


def propagate_map(p: Problem) -> ConstraintSet:
    """One constraint per list element. A map cannot change the outer list
    length, so a length mismatch is already an unrealizability verdict."""
    sig = p.signature
    constraints = []
    for i, ex in enumerate(p.examples):
        outs = ex.output.items  # validated to be a ListV
        if len(ex.inputs) != len(outs):
            raise PropagationUnrealizable(
                f"example {i}: map preserves list length, but {len(ex.inputs)} "
                f"inputs map to {len(outs)} outputs"
            )
        for x, y in zip(ex.inputs, outs):
            constraints.append(
                MorphismConstraint(
                    (Known(to_extension(sig.element, x)),),
                    Known(to_extension(sig.result, y)),
                )
            )
    return ConstraintSet((sig.element,), sig.result, tuple(constraints), 0, p.atoms)


def propagate_foldr(p: Problem) -> ConstraintSet:
    sig = p.signature
    schema = flatten_shape(sig.result)
    constraints = []
    uid = 0
    for i, ex in enumerate(p.examples):
        n = len(ex.inputs)
        if n == 0:
            if ex.base != ex.output:
                raise PropagationUnrealizable(
                    f"example {i}: an empty input forces the output to equal "
                    f"the base case"
                )
            continue
        extra = Known(to_extension(sig.extra, ex.extra))
        accs: list[SymbolicContainer] = [Known(to_extension(sig.result, ex.base))]
        for _ in range(n - 1):
            accs.append(Unknown(uid, schema))
            uid += 1
        accs.append(Known(to_extension(sig.result, ex.output)))
        for step in range(n):
            elem = Known(to_extension(sig.element, ex.inputs[n - 1 - step]))
            constraints.append(
                MorphismConstraint((extra, elem, accs[step]), accs[step + 1])
            )
    return ConstraintSet(
        (sig.extra, sig.element, sig.result),
        sig.result,
        tuple(constraints),
        uid,
        p.atoms,
    )


# ---------------------------------------------------------------------------
# Shape completeness


@dataclass(frozen=True)
class CompletenessReport:
    complete: bool
    missing: tuple[str, ...]


def shape_complete(p: Problem) -> CompletenessReport:
    """A foldr example set is shape complete when, for every example, each
    nonempty proper suffix of its input shapes recurs as the full input of
    some example with the same extra shape. The empty suffix needs no
    example: its result is the given base case.

    Raw and map sketches have no unknown intermediates and are trivially
    complete.
    """
    if p.sketch is not SketchKind.FOLDR:
        return CompletenessReport(True, ())
    sig = p.signature
    keys = []
    for ex in p.examples:
        h = shape_of(sig.extra, ex.extra)
        seq = tuple(shape_of(sig.element, v) for v in ex.inputs)
        keys.append((h, seq))
    present = set(keys)
    missing = []
    seen = set()
    for h, seq in keys:
        for k in range(1, len(seq)):
            suffix = seq[len(seq) - k :]
            if (h, suffix) not in present and (h, suffix) not in seen:
                seen.add((h, suffix))
                missing.append(
                    "extra "
                    + show_shape(h)
                    + ", inputs ["
                    + ", ".join(show_shape(s) for s in suffix)
                    + "]"
                )
    return CompletenessReport(not missing, tuple(missing))
