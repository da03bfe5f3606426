"""External SMT solver driver and result interpretation.

The solver runs as a one-shot subprocess fed SMT-LIB2 on standard input
(`z3 -in` by default, overridable per call or through the PARACHK_SOLVER
environment variable). A `sat` answer is never trusted raw: the model text
is parsed, the morphism tables and intermediates are read off it, and every
constraint is replayed concretely. Only a witness that survives this replay
yields a Realizable verdict.
"""

from __future__ import annotations

import os
import re
import shlex
import subprocess
import time
from dataclasses import dataclass, field

from .encode import SmtScript, encode, shrink_assertions, _block_shapes, _blocks
from .functors import Atom, Extension, ShapeMismatch, flatten_shape, size_of
from .problem import Problem
from .propagate import (
    ConstraintSet,
    PropagationUnrealizable,
    Unknown,
    propagate,
)
from .verdict import (
    Realizable,
    Unrealizable,
    UnknownVerdict,
    Verdict,
    WitnessSummary,
    constraint_key,
    resolve_constraint,
    validate_summary,
)


def default_solver_command() -> str:
    return os.environ.get("PARACHK_SOLVER", "z3 -in")


@dataclass
class SolverConfig:
    solver_command: str = field(default_factory=default_solver_command)
    timeout_ms: int = 10_000
    produce_model: bool = True

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout must be positive")


@dataclass(frozen=True)
class RawResult:
    kind: str  # "sat" | "unsat" | "unknown" | "timeout" | "error"
    model_text: str
    duration_ms: float
    detail: str = ""


class SolverError(Exception):
    pass


def run_solver(script: SmtScript, cfg: SolverConfig) -> RawResult:
    cmd = shlex.split(cfg.solver_command)
    if not cmd:
        raise SolverError("empty solver command")
    text = script.text(produce_model=cfg.produce_model)
    start = time.perf_counter()
    try:
        proc = subprocess.run(
            cmd,
            input=text,
            capture_output=True,
            text=True,
            timeout=cfg.timeout_ms / 1000.0,
        )
    except FileNotFoundError as e:
        raise SolverError(f"cannot spawn solver {cmd[0]!r}: {e}") from None
    except subprocess.TimeoutExpired:
        return RawResult("timeout", "", (time.perf_counter() - start) * 1000.0)
    duration = (time.perf_counter() - start) * 1000.0
    lines = proc.stdout.splitlines()
    status = next((ln.strip() for ln in lines if ln.strip()), "")
    if status == "sat":
        idx = lines.index(next(ln for ln in lines if ln.strip() == "sat"))
        return RawResult("sat", "\n".join(lines[idx + 1 :]), duration)
    if status == "unsat":
        return RawResult("unsat", "", duration)
    if status == "unknown":
        return RawResult("unknown", "", duration)
    detail = (proc.stdout + proc.stderr).strip()
    return RawResult("error", "", duration, detail or f"exit status {proc.returncode}")


# ---------------------------------------------------------------------------
# Model parsing and evaluation


class ModelError(Exception):
    pass


_TOKEN = re.compile(r"""\(|\)|[^\s()]+""")
_INT = re.compile(r"^-?\d+$")


def _parse_sexprs(text: str) -> list:
    tokens = _TOKEN.findall(text)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ModelError("unexpected end of model text")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(parse())
            if pos >= len(tokens):
                raise ModelError("unbalanced parenthesis in model")
            pos += 1
            return items
        if tok == ")":
            raise ModelError("unexpected ')' in model")
        return tok

    out = []
    while pos < len(tokens):
        out.append(parse())
    return out


class ModelFunctions:
    """The define-funs of a solver model, evaluable at concrete points.

    Functions the solver left out of the model were never constrained; they
    default to zero, matching any completion the solver could have chosen.
    """

    def __init__(self, funcs: dict):
        self.funcs = funcs
        self._cache: dict = {}

    @classmethod
    def parse(cls, text: str) -> "ModelFunctions":
        forms = _parse_sexprs(text)
        if not forms:
            return cls({})
        model = forms[0]
        if not isinstance(model, list):
            raise ModelError("model is not a parenthesized list")
        entries = model[1:] if model and model[0] == "model" else model
        funcs = {}
        for entry in entries:
            if not isinstance(entry, list) or not entry or entry[0] != "define-fun":
                continue
            if len(entry) != 5:
                raise ModelError(f"malformed define-fun: {entry!r}")
            _, name, params, _sort, body = entry
            names = [p[0] for p in params]
            funcs[name] = (names, body)
        return cls(funcs)

    def call(self, name: str, args: list[int]) -> int:
        if name not in self.funcs:
            return 0
        key = (name, tuple(args))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        params, body = self.funcs[name]
        if len(params) != len(args):
            raise ModelError(f"{name} expects {len(params)} arguments, got {len(args)}")
        value = self._eval(body, dict(zip(params, args)))
        if isinstance(value, bool):
            value = int(value)
        self._cache[key] = value
        return value

    def _eval(self, node, env: dict):
        if isinstance(node, str):
            if node in env:
                return env[node]
            if _INT.match(node):
                return int(node)
            if node == "true":
                return True
            if node == "false":
                return False
            if node in self.funcs:
                return self.call(node, [])
            raise ModelError(f"unbound symbol in model: {node!r}")
        if not node:
            raise ModelError("empty application in model")
        head = node[0]
        if head == "ite":
            return self._eval(node[2] if self._eval(node[1], env) else node[3], env)
        if head == "let":
            extended = dict(env)
            for name, expr in ((b[0], b[1]) for b in node[1]):
                extended[name] = self._eval(expr, env)
            return self._eval(node[2], extended)
        if head in ("and", "or"):
            vals = [bool(self._eval(x, env)) for x in node[1:]]
            return all(vals) if head == "and" else any(vals)
        if head == "not":
            return not self._eval(node[1], env)
        if head == "=>":
            vals = [bool(self._eval(x, env)) for x in node[1:]]
            out = vals[-1]
            for v in reversed(vals[:-1]):
                out = (not v) or out
            return out
        if head == "=":
            vals = [self._eval(x, env) for x in node[1:]]
            return all(v == vals[0] for v in vals)
        if head == "distinct":
            vals = [self._eval(x, env) for x in node[1:]]
            return len(set(vals)) == len(vals)
        if head in ("<", "<=", ">", ">="):
            a, b = (self._eval(x, env) for x in node[1:3])
            return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[head]
        if head == "+":
            return sum(self._eval(x, env) for x in node[1:])
        if head == "*":
            out = 1
            for x in node[1:]:
                out *= self._eval(x, env)
            return out
        if head == "-":
            vals = [self._eval(x, env) for x in node[1:]]
            if len(vals) == 1:
                return -vals[0]
            out = vals[0]
            for v in vals[1:]:
                out -= v
            return out
        if head == "div":
            a, b = (self._eval(x, env) for x in node[1:3])
            return a // b
        if head == "mod":
            a, b = (self._eval(x, env) for x in node[1:3])
            return a % b
        if head == "abs":
            return abs(self._eval(node[1], env))
        if isinstance(head, str) and head in self.funcs:
            return self.call(head, [self._eval(x, env) for x in node[1:]])
        raise ModelError(f"cannot evaluate model term {node!r}")


# ---------------------------------------------------------------------------
# Witness extraction


class WitnessError(Exception):
    pass


def extract_witness(
    model_text: str, cs: ConstraintSet, naive_products: bool = False
) -> WitnessSummary:
    """Read the morphism tables and intermediates off a sat model."""
    try:
        fns = ModelFunctions.parse(model_text)
    except ModelError as e:
        raise WitnessError(str(e)) from None

    intermediates: dict[int, Extension] = {}
    seen: dict[int, object] = {}
    for c in cs.constraints:
        for part in (*c.inputs, c.output):
            if isinstance(part, Unknown):
                seen[part.uid] = part.schema
    try:
        for uid in sorted(seen):
            schema = seen[uid]
            slots = [fns.call(f"mid{uid}_{s.name}", []) for s in schema.slots]
            shape = schema.decode_slots(slots)
            count = schema.count_value(slots)
            if count > 20_000:
                raise WitnessError(
                    f"intermediate {uid} has {count} positions, too large to replay"
                )
            elems = []
            for q in range(count):
                code = fns.call(f"elem{uid}", [q])
                elems.append(Atom(code, cs.atoms.label_of(code)))
            intermediates[uid] = Extension(cs.output_functor, shape, tuple(elems))
    except (ModelError, ShapeMismatch, RecursionError) as e:
        raise WitnessError(f"intermediates unreadable: {e}") from None

    out_schema = flatten_shape(cs.output_functor)
    shape_table: dict = {}
    position_table: dict = {}
    try:
        for c in cs.constraints:
            parts, out = resolve_constraint(c, intermediates)
            key = constraint_key(parts)
            if key not in shape_table:
                shape_table[key] = tuple(
                    fns.call(f"oshape{j}", list(key))
                    for j in range(len(out_schema.slots))
                )
            n_out = len(out.elements)
            if naive_products:
                _extract_naive_positions(
                    fns, cs, parts, out, key, position_table
                )
            else:
                for q in range(n_out):
                    if (key, q) not in position_table:
                        position_table[(key, q)] = fns.call("srcpos", [*key, q])
    except (ModelError, RecursionError) as e:
        raise WitnessError(str(e)) from None
    return WitnessSummary(shape_table, position_table, intermediates)


def _extract_naive_positions(fns, cs, parts, out, key, position_table) -> None:
    in_bases = []
    base = 0
    for ext in parts:
        for bf, bs in zip(
            _blocks(ext.functor), _block_shapes(ext.functor, ext.shape)
        ):
            in_bases.append(base)
            base += size_of(bf, bs)
    total = base
    q = 0
    for b, (bf, bs) in enumerate(
        zip(_blocks(out.functor), _block_shapes(out.functor, out.shape))
    ):
        for qo in range(size_of(bf, bs)):
            if (key, q) not in position_table:
                blk = fns.call("srcblk", [*key, b, qo])
                off = fns.call("srcoff", [*key, b, qo])
                if 0 <= blk < len(in_bases):
                    position_table[(key, q)] = in_bases[blk] + off
                else:
                    position_table[(key, q)] = total  # out of range, fails replay
            q += 1


def validate_witness(model_text: str, cs: ConstraintSet, naive_products: bool = False) -> bool:
    """True iff the model's witness survives concrete replay of every
    constraint. Unparseable or corrupt models are simply not witnesses."""
    try:
        summary = extract_witness(model_text, cs, naive_products)
    except WitnessError:
        return False
    return validate_summary(cs, summary)


def interpret(
    raw: RawResult, cs: ConstraintSet, naive_products: bool = False
) -> Verdict:
    if raw.kind == "unsat":
        return Unrealizable()
    if raw.kind == "timeout":
        return UnknownVerdict("timeout")
    if raw.kind == "unknown":
        return UnknownVerdict("solver-unknown")
    if raw.kind == "error":
        raise SolverError(raw.detail)
    try:
        summary = extract_witness(raw.model_text, cs, naive_products)
    except WitnessError:
        return UnknownVerdict("witness-validation-failed")
    if not validate_summary(cs, summary):
        return UnknownVerdict("witness-validation-failed")
    return Realizable(summary)


# ---------------------------------------------------------------------------
# End-to-end check


@dataclass(frozen=True)
class CheckReport:
    verdict: Verdict
    total_ms: float
    solver_ms: float
    fast_path: bool = False


def check(
    problem: Problem,
    cfg: SolverConfig | None = None,
    naive_products: bool = False,
) -> CheckReport:
    """Propagate, encode, solve, and interpret. Unrealizability that is
    already visible during propagation skips the solver."""
    if cfg is None:
        cfg = problem.options if isinstance(problem.options, SolverConfig) else SolverConfig()
    start = time.perf_counter()
    try:
        cs = propagate(problem)
    except PropagationUnrealizable as e:
        total = (time.perf_counter() - start) * 1000.0
        return CheckReport(Unrealizable(e.reason), total, 0.0, fast_path=True)
    script = encode(cs, naive_products=naive_products)
    raw = run_solver(script, cfg)
    solver_ms = raw.duration_ms
    if raw.kind == "sat" and cs.unknown_count and cfg.produce_model:
        # settle the verdict on the exact script, then hunt for a small
        # witness: solvers may pick huge unconstrained intermediate shapes
        bounded = SmtScript(
            script.logic,
            script.declarations,
            script.assertions + tuple(shrink_assertions(cs)),
        )
        shrink_cfg = SolverConfig(
            solver_command=cfg.solver_command,
            timeout_ms=min(cfg.timeout_ms, 2_000),
            produce_model=True,
        )
        raw2 = run_solver(bounded, shrink_cfg)
        solver_ms += raw2.duration_ms
        if raw2.kind == "sat":
            raw = raw2
    verdict = interpret(raw, cs, naive_products)
    total = (time.perf_counter() - start) * 1000.0
    return CheckReport(verdict, total, solver_ms)
