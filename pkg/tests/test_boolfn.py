import random

import numpy as np
import pytest

from satgadget import boolfn
from satgadget.boolfn import (
    FormulaError,
    WitnessPair,
    brute_sat,
    emit_expr,
    evaluate,
    find_witness_pair,
    parse_dimacs,
    parse_expr,
    truth_table,
)

from conftest import all_two_var_formulas, random_formula


def test_parse_contradiction():
    e = parse_expr("x0 & ~x0")
    assert e.kind == "and"
    assert e.args[0].kind == "var" and e.args[1].kind == "not"
    assert e.nvars == 1


def test_xor_evaluation():
    e = parse_expr("x0 ^ x1")
    assert evaluate(e, (1, 1)) == 0
    assert evaluate(e, (1, 0)) == 1


def test_three_var_evaluation():
    e = parse_expr("(x0 | x1) & ~x2")
    assert evaluate(e, (0, 0, 0)) == 0
    assert evaluate(e, (1, 0, 0)) == 1


def test_precedence_not_and_xor_or():
    # ~ binds tighter than &, & tighter than ^, ^ tighter than |
    e = parse_expr("~x0 & x1 ^ x2 | x3")
    assert e.kind == "or"
    assert e.args[0].kind == "xor"
    assert e.args[0].args[0].kind == "and"
    assert e.args[0].args[0].args[0].kind == "not"


def test_parse_errors_carry_position():
    with pytest.raises(FormulaError, match="position"):
        parse_expr("x0 &")
    with pytest.raises(FormulaError, match="position"):
        parse_expr("(x0 | x1")
    with pytest.raises(FormulaError, match="overflow"):
        parse_expr("x99999999")


def test_dimacs_single_clause():
    e = parse_dimacs("p cnf 1 1\n1 0\n")
    assert truth_table(e).bits == (0, 1)


def test_dimacs_contradiction():
    e = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")
    assert brute_sat(e) is None


def test_dimacs_negated_literal():
    e = parse_dimacs("p cnf 2 1\n1 -2 0\n")
    # x0 | ~x1
    assert truth_table(e).bits == (1, 1, 0, 1)


def test_dimacs_errors():
    with pytest.raises(FormulaError, match="header"):
        parse_dimacs("p dnf 1 1\n1 0\n")
    with pytest.raises(FormulaError, match="out of range"):
        parse_dimacs("p cnf 1 1\n2 0\n")
    with pytest.raises(FormulaError, match="terminator"):
        parse_dimacs("p cnf 1 1\n1\n")
    with pytest.raises(FormulaError, match="clauses"):
        parse_dimacs("p cnf 1 2\n1 0\n")


def test_dimacs_comments_and_multiline_clauses():
    e = parse_dimacs("c comment\np cnf 3 2\n1 -2\n3 0\n2 0\n")
    assert e.nvars == 3
    assert evaluate(e, (0, 1, 1)) == 1


def test_truth_table_basic():
    assert truth_table(parse_expr("x0")).bits == (0, 1)
    assert truth_table(parse_expr("x0&x1")).bits == (0, 0, 0, 1)
    assert truth_table(parse_expr("x0|~x0")).bits == (1, 1)


def test_truth_table_size_limit():
    f = boolfn.with_vars(parse_expr("x0"), 21)
    with pytest.raises(FormulaError, match="exceeds"):
        truth_table(f)


def test_brute_sat_examples():
    assert brute_sat(parse_expr("x0&~x0")) is None
    assert brute_sat(parse_expr("x0&x1")) == (1, 1)
    assert brute_sat(boolfn.with_vars(parse_expr("x0|~x0"), 2)) == (0, 0)


def test_witness_pair_examples():
    assert find_witness_pair(parse_expr("x0")) == WitnessPair((1,), (0,))
    assert find_witness_pair(parse_expr("x0|~x0")) == 1
    assert find_witness_pair(parse_expr("x0&~x0")) == 0
    # least-index tie-breaking, scanned over the truth table
    assert find_witness_pair(parse_expr("x0&x1")) == WitnessPair((1, 1), (0, 0))


def test_roundtrip_corpus():
    rng = random.Random(11)
    corpus = all_two_var_formulas() + [random_formula(rng, 3) for _ in range(50)]
    for f in corpus:
        g = boolfn.with_vars(parse_expr(emit_expr(f)), f.nvars)
        assert truth_table(g) == truth_table(f)


def test_brute_sat_matches_truth_table_exhaustive():
    rng = random.Random(7)
    for v in range(1, 5):
        for _ in range(40):
            f = random_formula(rng, v)
            tt = truth_table(f)
            sat = brute_sat(f)
            assert (sat is not None) == (1 in tt.bits)
            if sat is not None:
                idx = sum(b << i for i, b in enumerate(sat))
                assert tt.bits[idx] == 1
                assert all(b == 0 for b in tt.bits[:idx])


def test_witness_none_iff_constant():
    rng = random.Random(13)
    for _ in range(120):
        f = random_formula(rng, 3)
        tt = truth_table(f)
        w = find_witness_pair(f)
        if all(b == 0 for b in tt.bits):
            assert w == 0
        elif all(b == 1 for b in tt.bits):
            assert w == 1
        else:
            assert isinstance(w, WitnessPair)
            assert evaluate(f, w.z1) == 1 and evaluate(f, w.z2) == 0
