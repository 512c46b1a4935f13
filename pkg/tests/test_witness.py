import random

import pytest

from trapgraph.decomp import heuristic_decomposition, make_nice
from trapgraph.dpcore import run_dp
from trapgraph.oracle import brute_force_enumerate
from trapgraph.tanner import TannerGraph, gamma_odd
from trapgraph.witness import WitnessError, extract_witness
from helpers import HAMMING_74, is_codeword_support, random_graph, random_td


def solve_with_witness(g, ntd, b):
    res = run_dp(g, ntd, b, retain_tables=True)
    if not res.found:
        return res, None
    return res, extract_witness(g, ntd, b, res.tables)


def test_repetition_code_witness():
    g = TannerGraph.from_matrix([[1, 1]])
    ntd = make_nice(g, heuristic_decomposition(g))
    res, w = solve_with_witness(g, ntd, 0)
    assert w == frozenset({0, 1})


def test_hamming_witness_is_one_of_the_seven():
    g = TannerGraph.from_matrix(HAMMING_74)
    ntd = make_nice(g, heuristic_decomposition(g))
    res, w = solve_with_witness(g, ntd, 0)
    assert (res.a_min, res.count) == (3, 7)
    supports = {frozenset(r.members) for r in brute_force_enumerate(g, 3, 0)}
    assert w in supports
    assert is_codeword_support(g, w)


def test_witness_validity_fuzz():
    rng = random.Random(91)
    for _ in range(120):
        g = random_graph(rng, max_var=10, max_chk=8)
        ntd = make_nice(g, random_td(g, rng))
        for b in (0, 1, 2):
            res, w = solve_with_witness(g, ntd, b)
            if w is None:
                continue
            assert len(w) == res.a_min
            assert len(gamma_odd(g, w)) == b
            if b == 0:
                assert is_codeword_support(g, w)


def test_witness_deterministic():
    rng = random.Random(92)
    for _ in range(30):
        g = random_graph(rng, max_var=9, max_chk=7)
        ntd = make_nice(g, random_td(g, rng))
        first = solve_with_witness(g, ntd, 1)[1]
        second = solve_with_witness(g, ntd, 1)[1]
        assert first == second


def test_requires_retained_tables():
    g = TannerGraph.from_matrix([[1, 1]])
    ntd = make_nice(g, heuristic_decomposition(g))
    res = run_dp(g, ntd, 0)
    with pytest.raises(WitnessError, match="retained"):
        extract_witness(g, ntd, 0, res.tables)


def test_no_witness_when_root_state_absent():
    # single-variable code: no codeword support exists
    g = TannerGraph.from_matrix([[1]])
    ntd = make_nice(g, heuristic_decomposition(g))
    res = run_dp(g, ntd, 0, retain_tables=True)
    assert not res.found
    with pytest.raises(WitnessError, match="no .*trapping set"):
        extract_witness(g, ntd, 0, res.tables)
