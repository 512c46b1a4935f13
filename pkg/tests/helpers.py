"""Shared test utilities: random instances and independent oracles.

The oracles here are deliberately written along different routes than the
library code they check: the minimum-distance oracle works on GF(2) null
spaces, and ``run_dp_b0`` is a separate d-free dynamic program.
"""

from __future__ import annotations

import itertools
import random

from trapgraph.decomp import (
    INTRO_CHK,
    INTRO_VAR,
    FORGET_CHK,
    FORGET_VAR,
    JOIN,
    LEAF,
    NiceTreeDecomposition,
    TreeDecomposition,
)
from trapgraph.tanner import TannerGraph, gamma_odd_mask

HAMMING_74 = [
    [1, 0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 1],
]


def random_graph(rng: random.Random, max_var=14, max_chk=10) -> TannerGraph:
    n = rng.randint(1, max_var)
    m = rng.randint(1, max_chk)
    p = rng.uniform(0.05, 0.4)
    adj = [[v for v in range(n) if rng.random() < p] for _ in range(m)]
    return TannerGraph.from_check_adj(n, m, adj)


def random_td(g: TannerGraph, rng: random.Random) -> TreeDecomposition:
    """Valid decomposition from a random elimination ordering.

    Each eliminated node forms a bag with its current neighborhood, which is
    then turned into a clique; a bag's parent is the bag of its
    earliest-eliminated neighbor, and parentless bags are chained together.
    """
    total = g.n_var + g.n_chk
    if total == 0:
        return TreeDecomposition(0, (frozenset(),), ())
    adj: dict[int, set[int]] = {x: set() for x in range(total)}
    for c in range(g.n_chk):
        for v in g.chk_adj[c]:
            adj[v].add(g.n_var + c)
            adj[g.n_var + c].add(v)
    order = list(range(total))
    rng.shuffle(order)
    pos = {x: i for i, x in enumerate(order)}
    bag_of = {}
    bags: list[frozenset[int]] = []
    pending: list[tuple[int, int]] = []
    parentless: list[int] = []
    for x in order:
        nbrs = set(adj[x])
        idx = len(bags)
        bag_of[x] = idx
        bags.append(frozenset({x} | nbrs))
        for a in nbrs:
            adj[a].discard(x)
            adj[a] |= nbrs - {a}
        if nbrs:
            u = min(nbrs, key=pos.__getitem__)
            pending.append((idx, u))      # u's bag does not exist yet
        else:
            parentless.append(idx)
    edges = [(i, bag_of[u]) for i, u in pending]
    edges.extend(zip(parentless, parentless[1:]))
    return TreeDecomposition(total, tuple(bags), tuple(edges))


def single_bag_td(g: TannerGraph) -> TreeDecomposition:
    total = g.n_var + g.n_chk
    return TreeDecomposition(total, (frozenset(range(total)),), ())


def gf2_nullspace_weights(h_rows: list[list[int]]) -> dict[int, int]:
    """Hamming-weight histogram of the nonzero null space of H over GF(2).

    Gaussian elimination for a basis, then enumeration of all combinations;
    feasible for n - rank up to ~20.
    """
    if not h_rows:
        raise ValueError("empty matrix")
    n = len(h_rows[0])
    rows = []
    for r in h_rows:
        mask = 0
        for j, x in enumerate(r):
            if x % 2:
                mask |= 1 << j
        rows.append(mask)
    pivots = []
    for col in range(n):
        pivot = None
        for i, r in enumerate(rows):
            if r & (1 << col):
                pivot = i
                break
        if pivot is None:
            continue
        prow = rows.pop(pivot)
        rows = [r ^ prow if r & (1 << col) else r for r in rows]
        pivots.append((col, prow))
    free_cols = sorted(set(range(n)) - {c for c, _ in pivots})
    basis = []
    for fc in free_cols:
        vec = 1 << fc
        for col, prow in reversed(pivots):
            if (prow & vec).bit_count() % 2:
                vec |= 1 << col
        basis.append(vec)
    hist: dict[int, int] = {}
    for r in range(1, 1 << len(basis)):
        x = 0
        rr = r
        while rr:
            low = rr & -rr
            x ^= basis[low.bit_length() - 1]
            rr ^= low
        w = x.bit_count()
        hist[w] = hist.get(w, 0) + 1
    return hist


def min_weight_and_count(h_rows: list[list[int]]) -> tuple[int, int] | None:
    hist = gf2_nullspace_weights(h_rows)
    if not hist:
        return None
    w = min(hist)
    return w, hist[w]


def is_codeword_support(g: TannerGraph, members) -> bool:
    qm = 0
    for v in members:
        qm |= 1 << v
    return gamma_odd_mask(g.var_masks, qm, (1 << g.n_chk) - 1) == 0 \
        if g.n_chk else True


# ---------------------------------------------------------------------------
# independent b=0 dynamic program (keys (R, Q), no d dimension)

def run_dp_b0(g: TannerGraph, ntd: NiceTreeDecomposition):
    """Self-oracle for the b=0 slice of the general engine."""
    var_masks = g.var_masks
    tables: list[dict | None] = [None] * len(ntd.nodes)

    def merge(tab, key, f, cnt):
        old = tab.get(key)
        if old is None or f < old[0]:
            tab[key] = (f, cnt)
        elif f == old[0]:
            tab[key] = (f, old[1] + cnt)

    for idx, node in enumerate(ntd.nodes):
        kind = node.kind
        if kind == LEAF:
            tab = {}
        elif kind == INTRO_VAR:
            child = tables[node.children[0]]
            v = node.elem
            vb = 1 << v
            iv = var_masks[v] & node.bag_c
            tab = dict(child)
            for (r, q), (f, cnt) in child.items():
                if (r, q) != (0, 0):
                    tab[(r ^ iv, q | vb)] = (f + 1, cnt)
            tab[(iv, vb)] = (1, 1)
        elif kind == FORGET_VAR:
            child = tables[node.children[0]]
            vb = 1 << node.elem
            tab = {}
            for (r, q), (f, cnt) in child.items():
                merge(tab, (r, q & ~vb), f, cnt)
        elif kind == INTRO_CHK:
            child = tables[node.children[0]]
            c = node.elem
            cb = 1 << c
            cmask = g.chk_masks[c]
            tab = {}
            for (r, q), ent in child.items():
                if (cmask & q).bit_count() & 1:
                    tab[(r | cb, q)] = ent
                else:
                    tab[(r, q)] = ent
        elif kind == FORGET_CHK:
            child = tables[node.children[0]]
            cb = 1 << node.elem
            tab = {}
            for (r, q), (f, cnt) in child.items():
                if r & cb:
                    continue      # its odd check leaves the bag: dead for b=0
                merge(tab, (r, q), f, cnt)
        else:  # join
            left = tables[node.children[0]]
            right = tables[node.children[1]]
            tab = {}
            by_q: dict[int, list] = {}
            for (r2, q2), (f2, g2) in right.items():
                by_q.setdefault(q2, []).append((r2, f2, g2))
            for (r1, q), (f1, g1) in left.items():
                gam = gamma_odd_mask(var_masks, q, node.bag_c)
                for r2, f2, g2 in by_q.get(q, ()):
                    merge(tab, (r1 ^ r2 ^ gam, q),
                          f1 + f2 - q.bit_count(), g1 * g2)
            for (r, q), (f, cnt) in left.items():
                if q == 0:
                    merge(tab, (r, q), f, cnt)
            for (r, q), (f, cnt) in right.items():
                if q == 0:
                    merge(tab, (r, q), f, cnt)
        tables[idx] = tab
        for ch in node.children:
            tables[ch] = None
    root = tables[ntd.root].get((0, 0))
    return None if root is None else root


def all_nonempty_subsets(n: int):
    for a in range(1, n + 1):
        yield from itertools.combinations(range(n), a)
