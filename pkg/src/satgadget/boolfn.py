"""Boolean formulas: parsing, evaluation, and brute-force ground truth.

Assignments are indexed little-endian: assignment ``i`` sets ``x0`` to the
least significant bit of ``i``.  Grammar precedence is NOT > AND > XOR > OR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_VARS = 20
_PARSE_INDEX_LIMIT = 1 << 20


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class BoolExpr:
    kind: str  # var | const | not | and | or | xor
    args: tuple = ()
    index: int = 0  # variable index, or constant value for kind == const
    nvars: int = 0

    def __post_init__(self):
        arity = {"var": 0, "const": 0, "not": 1, "and": 2, "or": 2, "xor": 2}
        if self.kind not in arity:
            raise FormulaError(f"unknown node kind {self.kind!r}")
        if len(self.args) != arity[self.kind]:
            raise FormulaError(f"{self.kind} takes {arity[self.kind]} children")


def var(i: int, nvars: int | None = None) -> BoolExpr:
    return BoolExpr("var", (), i, nvars if nvars is not None else i + 1)


def const(v: int, nvars: int = 0) -> BoolExpr:
    return BoolExpr("const", (), int(bool(v)), nvars)


def not_(e: BoolExpr) -> BoolExpr:
    return BoolExpr("not", (e,), 0, e.nvars)


def _binop(kind, a, b):
    return BoolExpr(kind, (a, b), 0, max(a.nvars, b.nvars))


def and_(a, b):
    return _binop("and", a, b)


def or_(a, b):
    return _binop("or", a, b)


def xor(a, b):
    return _binop("xor", a, b)


def with_vars(e: BoolExpr, nvars: int) -> BoolExpr:
    if nvars < e.nvars:
        raise FormulaError(f"cannot shrink variable count below {e.nvars}")
    return BoolExpr(e.kind, e.args, e.index, nvars)


@dataclass(frozen=True)
class TruthTable:
    v: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != 1 << self.v:
            raise FormulaError("truth table length must be 2^v")


@dataclass(frozen=True)
class WitnessPair:
    z1: tuple[int, ...]
    z2: tuple[int, ...]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise FormulaError(f"{msg} at position {self.pos}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        e = self.parse_or()
        if self.peek() != "":
            self.error(f"unexpected {self.peek()!r}")
        return e

    def parse_or(self):
        e = self.parse_xor()
        while self.peek() == "|":
            self.pos += 1
            e = or_(e, self.parse_xor())
        return e

    def parse_xor(self):
        e = self.parse_and()
        while self.peek() == "^":
            self.pos += 1
            e = xor(e, self.parse_and())
        return e

    def parse_and(self):
        e = self.parse_unary()
        while self.peek() == "&":
            self.pos += 1
            e = and_(e, self.parse_unary())
        return e

    def parse_unary(self):
        ch = self.peek()
        if ch == "~":
            self.pos += 1
            return not_(self.parse_unary())
        if ch == "(":
            self.pos += 1
            e = self.parse_or()
            self.expect(")")
            return e
        if ch == "x":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                self.error("expected variable index after 'x'")
            idx = int(self.text[start : self.pos])
            if idx >= _PARSE_INDEX_LIMIT:
                self.error(f"variable index x{idx} overflows the supported range")
            return var(idx)
        if ch in ("0", "1"):
            self.pos += 1
            return const(int(ch))
        self.error(f"unexpected {ch!r}" if ch else "unexpected end of input")


def parse_expr(text: str, nvars: int | None = None) -> BoolExpr:
    """Parse a formula; v defaults to 1 + max variable index."""
    e = _Parser(text).parse()
    if nvars is not None:
        e = with_vars(e, nvars)
    return e


def emit_expr(e: BoolExpr) -> str:
    prec = {"or": 0, "xor": 1, "and": 2, "not": 3, "var": 4, "const": 4}
    sym = {"or": "|", "xor": "^", "and": "&"}

    def emit(node, parent_prec):
        p = prec[node.kind]
        if node.kind == "var":
            s = f"x{node.index}"
        elif node.kind == "const":
            s = str(node.index)
        elif node.kind == "not":
            s = "~" + emit(node.args[0], p)
        else:
            s = emit(node.args[0], p) + sym[node.kind] + emit(node.args[1], p)
        return f"({s})" if p < parent_prec else s

    return emit(e, 0)


def parse_dimacs(text: str) -> BoolExpr:
    """AND of OR-clauses from DIMACS CNF; negated literals become NOT."""
    nvars = None
    nclauses = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise FormulaError(f"line {lineno}: malformed header {line!r}")
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormulaError(f"line {lineno}: malformed header {line!r}")
            if nvars < 0 or nclauses < 0:
                raise FormulaError(f"line {lineno}: malformed header {line!r}")
            continue
        if nvars is None:
            raise FormulaError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormulaError(f"line {lineno}: bad literal {tok!r}")
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                if abs(lit) > nvars:
                    raise FormulaError(f"line {lineno}: literal {lit} out of range")
                current.append(lit)
    if nvars is None:
        raise FormulaError("missing 'p cnf' header")
    if current:
        raise FormulaError("missing clause terminator 0")
    if nclauses is not None and len(clauses) != nclauses:
        raise FormulaError(
            f"header declares {nclauses} clauses, found {len(clauses)}"
        )

    def literal(lit):
        e = var(abs(lit) - 1)
        return not_(e) if lit < 0 else e

    def clause_expr(cl):
        if not cl:
            return const(0)
        e = literal(cl[0])
        for lit in cl[1:]:
            e = or_(e, literal(lit))
        return e

    if not clauses:
        e = const(1)
    else:
        e = clause_expr(clauses[0])
        for cl in clauses[1:]:
            e = and_(e, clause_expr(cl))
    return with_vars(e, max(nvars, e.nvars))


def eval_bits(e: BoolExpr, assigns: np.ndarray) -> np.ndarray:
    """Evaluate over an array of little-endian assignment integers."""
    if e.kind == "var":
        return ((assigns >> e.index) & 1).astype(np.uint8)
    if e.kind == "const":
        return np.full(assigns.shape, e.index, dtype=np.uint8)
    if e.kind == "not":
        return 1 - eval_bits(e.args[0], assigns)
    a = eval_bits(e.args[0], assigns)
    b = eval_bits(e.args[1], assigns)
    if e.kind == "and":
        return a & b
    if e.kind == "or":
        return a | b
    return a ^ b


def evaluate(e: BoolExpr, assignment) -> int:
    """Evaluate at one assignment (int or bit sequence, x0 least significant)."""
    if not isinstance(assignment, int):
        assignment = sum(int(b) << i for i, b in enumerate(assignment))
    return int(eval_bits(e, np.array([assignment]))[0])


def _check_size(e: BoolExpr):
    if e.nvars > MAX_VARS:
        raise FormulaError(f"{e.nvars} variables exceeds the limit {MAX_VARS}")


def truth_table(f: BoolExpr) -> TruthTable:
    _check_size(f)
    bits = eval_bits(f, np.arange(1 << f.nvars, dtype=np.int64))
    return TruthTable(f.nvars, tuple(int(b) for b in bits))


def _index_to_bits(i: int, v: int) -> tuple[int, ...]:
    return tuple((i >> j) & 1 for j in range(v))


def brute_sat(f: BoolExpr):
    """Least satisfying assignment in the global little-endian index order,
    or None when unsatisfiable."""
    _check_size(f)
    bits = eval_bits(f, np.arange(1 << f.nvars, dtype=np.int64))
    hits = np.flatnonzero(bits)
    if hits.size == 0:
        return None
    return _index_to_bits(int(hits[0]), f.nvars)


def find_witness_pair(f: BoolExpr):
    """WitnessPair (z1 with f=1, z2 with f=0, least indices) for non-constant f;
    the constant value 0 or 1 otherwise."""
    _check_size(f)
    bits = eval_bits(f, np.arange(1 << f.nvars, dtype=np.int64))
    ones = np.flatnonzero(bits)
    zeros = np.flatnonzero(bits == 0)
    if ones.size == 0:
        return 0
    if zeros.size == 0:
        return 1
    return WitnessPair(
        _index_to_bits(int(ones[0]), f.nvars), _index_to_bits(int(zeros[0]), f.nvars)
    )
