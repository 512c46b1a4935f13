"""Tree decompositions of Tanner graphs and their rooted nice form.

Plain decompositions carry bags in the combined node namespace (variables
0..n-1, checks n..n+m-1).  The nice form splits every bag into a variable
part and a check part, each stored as a bitmask in its own namespace, and
lays the rooted tree out as a post-order array (children precede parents).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from trapgraph.tanner import TannerGraph, ScLdpcParams

LEAF = "leaf"
INTRO_VAR = "intro_var"
FORGET_VAR = "forget_var"
INTRO_CHK = "intro_chk"
FORGET_CHK = "forget_chk"
JOIN = "join"


class TdFormatError(ValueError):
    """Malformed .td input.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags over the combined namespace plus an undirected tree on bag indices."""

    n_nodes: int
    bags: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]
    root: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def width(td: TreeDecomposition) -> int:
    """Maximum bag size minus one."""
    if not td.bags:
        raise ValueError("decomposition has no bags")
    return max(len(b) for b in td.bags) - 1


def _tree_ok(num_bags: int, edges) -> str | None:
    """Return a violation string if the edge set is not a tree, else None."""
    if num_bags == 0:
        return "no bags"
    seen = set()
    adj = {i: [] for i in range(num_bags)}
    for i, j in edges:
        if i == j:
            return f"self-loop on bag {i}"
        key = (min(i, j), max(i, j))
        if key in seen:
            return f"duplicate tree edge {key}"
        seen.add(key)
        adj[i].append(j)
        adj[j].append(i)
    if len(seen) != num_bags - 1:
        return f"{len(seen)} edges for {num_bags} bags (tree needs {num_bags - 1})"
    reached = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in reached:
                reached.add(y)
                queue.append(y)
    if len(reached) != num_bags:
        return "tree edges do not connect all bags"
    return None


def validate(g: TannerGraph, td: TreeDecomposition) -> ValidationReport:
    """Check the decomposition conditions; violations become report entries."""
    total = g.n_var + g.n_chk
    violations: list[str] = []

    for i, bag in enumerate(td.bags):
        for x in bag:
            if not 0 <= x < total:
                violations.append(f"bag {i}: node id {x} out of range")

    tree_err = _tree_ok(len(td.bags), td.edges)
    if tree_err:
        violations.append(f"tree structure: {tree_err}")
        return ValidationReport(tuple(violations))

    occurrence: dict[int, list[int]] = {x: [] for x in range(total)}
    for i, bag in enumerate(td.bags):
        for x in bag:
            if 0 <= x < total:
                occurrence[x].append(i)

    for x in range(total):
        if not occurrence[x]:
            violations.append(f"node {x} appears in no bag")

    for c in range(g.n_chk):
        cc = g.n_var + c
        for v in g.chk_adj[c]:
            if not any(v in td.bags[i] for i in occurrence.get(cc, ())):
                violations.append(f"edge (v{v}, c{c}) is covered by no bag")

    # connectivity of each node's occurrence set: a subforest of a tree is
    # connected iff #bags == #edges-within + 1
    bag_sets = [set(b) for b in td.bags]
    for x in range(total):
        occ = occurrence[x]
        if not occ:
            continue
        inside = sum(1 for i, j in td.edges
                     if x in bag_sets[i] and x in bag_sets[j])
        if len(occ) != inside + 1:
            violations.append(f"node {x}: occurrence bags are disconnected")

    return ValidationReport(tuple(violations))


def parse_td(text: str | bytes) -> TreeDecomposition:
    """Parse the PACE-2017 .td exchange format (1-indexed, combined namespace)."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "s":
            if header is not None:
                raise TdFormatError("duplicate header", lineno)
            if len(toks) != 5 or toks[1] != "td":
                raise TdFormatError("header must be 's td <bags> <max_bag> <nodes>'",
                                    lineno)
            try:
                header = tuple(int(t) for t in toks[2:])
            except ValueError:
                raise TdFormatError("non-integer header field", lineno) from None
        elif toks[0] == "b":
            if header is None:
                raise TdFormatError("bag line before header", lineno)
            try:
                ids = [int(t) for t in toks[1:]]
            except ValueError:
                raise TdFormatError("non-integer bag entry", lineno) from None
            if not ids:
                raise TdFormatError("bag line without bag id", lineno)
            bag_id, contents = ids[0], ids[1:]
            if not 1 <= bag_id <= header[0]:
                raise TdFormatError(f"bag id {bag_id} out of range", lineno)
            if bag_id - 1 in bags:
                raise TdFormatError(f"duplicate bag {bag_id}", lineno)
            for x in contents:
                if not 1 <= x <= header[2]:
                    raise TdFormatError(f"bag {bag_id}: node id {x} out of range",
                                        lineno)
            bags[bag_id - 1] = frozenset(x - 1 for x in contents)
        else:
            if header is None:
                raise TdFormatError("edge line before header", lineno)
            try:
                i, j = (int(t) for t in toks)
            except ValueError:
                raise TdFormatError("malformed tree-edge line", lineno) from None
            if not (1 <= i <= header[0] and 1 <= j <= header[0]):
                raise TdFormatError(f"tree edge ({i},{j}) out of range", lineno)
            edges.append((i - 1, j - 1))
    if header is None:
        raise TdFormatError("missing 's td' header")
    num_bags = header[0]
    bag_list = tuple(bags.get(i, frozenset()) for i in range(num_bags))
    tree_err = _tree_ok(num_bags, edges)
    if tree_err:
        raise TdFormatError(f"edge set is not a tree: {tree_err}")
    return TreeDecomposition(header[2], bag_list, tuple(edges))


def serialize_td(td: TreeDecomposition) -> str:
    """Canonical .td text: bags in index order, sorted contents."""
    max_bag = max((len(b) for b in td.bags), default=0)
    out = [f"s td {len(td.bags)} {max_bag} {td.n_nodes}"]
    for i, bag in enumerate(td.bags):
        items = " ".join(str(x + 1) for x in sorted(bag))
        out.append(f"b {i + 1} {items}".rstrip())
    for i, j in td.edges:
        out.append(f"{i + 1} {j + 1}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    elem: int | None          # variable or check id in its own namespace
    bag_v: int                # bitmask over variable ids
    bag_c: int                # bitmask over check ids
    children: tuple[int, ...]

    @property
    def bag_size(self) -> int:
        return self.bag_v.bit_count() + self.bag_c.bit_count()


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted nice decomposition in post-order array form; the root is last."""

    n_var: int
    n_chk: int
    nodes: tuple[NiceNode, ...]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    def width(self) -> int:
        return max(n.bag_size for n in self.nodes) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        """Combined-namespace view, e.g. for re-validation."""
        bags = []
        edges = []
        for i, node in enumerate(self.nodes):
            bag = {v for v in _bits(node.bag_v)}
            bag |= {self.n_var + c for c in _bits(node.bag_c)}
            bags.append(frozenset(bag))
            for ch in node.children:
                edges.append((ch, i))
        return TreeDecomposition(self.n_var + self.n_chk, tuple(bags),
                                 tuple(edges), root=self.root)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _NiceBuilder:
    def __init__(self, n_var: int):
        self.n_var = n_var
        self.nodes: list[NiceNode] = []

    def emit(self, kind, elem, bag_v, bag_c, children=()) -> int:
        self.nodes.append(NiceNode(kind, elem, bag_v, bag_c, tuple(children)))
        return len(self.nodes) - 1

    def masks(self, bag: frozenset[int]) -> tuple[int, int]:
        bv = bc = 0
        for x in bag:
            if x < self.n_var:
                bv |= 1 << x
            else:
                bc |= 1 << (x - self.n_var)
        return bv, bc

    def chain(self, idx: int, cur: frozenset[int], target: frozenset[int]) -> int:
        """Bridge two bags with forgets (ascending id) then introduces."""
        n = self.n_var
        for x in sorted(cur - target):
            cur = cur - {x}
            bv, bc = self.masks(cur)
            if x < n:
                idx = self.emit(FORGET_VAR, x, bv, bc, (idx,))
            else:
                idx = self.emit(FORGET_CHK, x - n, bv, bc, (idx,))
        for x in sorted(target - cur):
            cur = cur | {x}
            bv, bc = self.masks(cur)
            if x < n:
                idx = self.emit(INTRO_VAR, x, bv, bc, (idx,))
            else:
                idx = self.emit(INTRO_CHK, x - n, bv, bc, (idx,))
        return idx

    def leaf_chain(self, target: frozenset[int]) -> int:
        idx = self.emit(LEAF, None, 0, 0)
        return self.chain(idx, frozenset(), target)


def make_nice(g: TannerGraph, td: TreeDecomposition) -> NiceTreeDecomposition:
    """Transform a valid decomposition into rooted nice form, width preserved.

    The tree is rooted at ``td.root`` when set, otherwise at the
    smallest-index bag of tree-degree at most one (for a path: an endpoint,
    which yields a join-free nice form).  Multi-child bags become binary join
    cascades; adjacent differing bags are bridged by forget-then-introduce
    chains in ascending id order.
    """
    report = validate(g, td)
    if not report.ok:
        raise ValueError("invalid tree decomposition: "
                         + "; ".join(report.violations[:5]))

    num = len(td.bags)
    adj: list[list[int]] = [[] for _ in range(num)]
    for i, j in td.edges:
        adj[i].append(j)
        adj[j].append(i)
    for nbrs in adj:
        nbrs.sort()

    if td.root is not None:
        root = td.root
    else:
        root = min((i for i in range(num) if len(adj[i]) <= 1), default=0)

    # orient the tree away from the root
    parent = [-1] * num
    order: list[int] = []
    queue = deque([root])
    seen = {root}
    while queue:
        x = queue.popleft()
        order.append(x)
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                queue.append(y)
    children: list[list[int]] = [[] for _ in range(num)]
    for x in order:
        if parent[x] >= 0:
            children[parent[x]].append(x)

    b = _NiceBuilder(g.n_var)
    top: dict[int, int] = {}
    for x in reversed(order):              # post-order over original bags
        bag = td.bags[x]
        kids = children[x]
        if not kids:
            top[x] = b.leaf_chain(bag)
            continue
        tops = [b.chain(top[k], td.bags[k], bag) for k in kids]
        idx = tops[0]
        bv, bc = b.masks(bag)
        for other in tops[1:]:
            idx = b.emit(JOIN, None, bv, bc, (idx, other))
        top[x] = idx

    b.chain(top[root], td.bags[root], frozenset())
    ntd = NiceTreeDecomposition(g.n_var, g.n_chk, tuple(b.nodes))
    assert ntd.width() == width(td)
    return ntd


def sc_path_decomposition(g: TannerGraph, p: ScLdpcParams) -> TreeDecomposition:
    """Sliding-window path decomposition for a spatially coupled code.

    Bag t holds check block t together with the variable blocks of its
    coupling window; rooted at bag 0 so the nice form is join-free.
    """
    if g.n_var != p.n_var or g.n_chk != p.n_chk:
        raise ValueError(
            f"graph is {g.n_var}x{g.n_chk}, parameters say {p.n_var}x{p.n_chk}")
    r, c, L, w = p.base_rows, p.base_cols, p.coupling_len, p.coupling_width
    for chk in range(g.n_chk):
        t = chk // r
        lo, hi = max(0, t - w + 1) * c, min(t, L - 1) * c + c
        for v in g.chk_adj[chk]:
            if not lo <= v < hi:
                raise ValueError(
                    f"check {chk} (block {t}) adjacent to variable {v} "
                    "outside its coupling window")
    bags = []
    for t in range(L + w - 1):
        bag = {g.n_var + r * t + i for i in range(r)}
        for j in range(max(0, t - w + 1), min(t, L - 1) + 1):
            bag |= {j * c + i for i in range(c)}
        bags.append(frozenset(bag))
    edges = tuple((t, t + 1) for t in range(len(bags) - 1))
    return TreeDecomposition(g.n_var + g.n_chk, tuple(bags), edges, root=0)


def heuristic_decomposition(g: TannerGraph) -> TreeDecomposition:
    """Greedy min-fill decomposition; valid for any graph, no width guarantee."""
    total = g.n_var + g.n_chk
    if total == 0:
        return TreeDecomposition(0, (frozenset(),), ())
    gx = nx.Graph()
    gx.add_nodes_from(range(total))
    for c in range(g.n_chk):
        for v in g.chk_adj[c]:
            gx.add_edge(v, g.n_var + c)
    _, tree = nx.approximation.treewidth_min_fill_in(gx)
    bag_list = list(tree.nodes)
    index = {bag: i for i, bag in enumerate(bag_list)}
    bags = tuple(frozenset(bag) for bag in bag_list)
    edges = tuple((index[a], index[b]) for a, b in tree.edges)
    return TreeDecomposition(total, bags, edges)
