"""Problem instances, their text formats, and seeded generators.

Subsets of an ``n``-element ground set are plain ``int`` bitmasks in every
algorithm; :class:`SubsetMask` wraps one when a checked value object is
wanted at an API boundary.

Text formats (UTF-8, one record per line, ``#`` starts a comment)::

    graph <n>            then "u v w" or "u v" (weight 1), 0-indexed, undirected
    matrix <n>           then n rows of n entries, "-" for an absent edge
    digraph <n>          then "u v" arcs, 0-indexed
    setcover <n> <m>     then m lines of space-separated elements, 1-indexed
    hypercube <n>        then "x i" present edges (x a binary literal, bit i
                         counted from the right), optional "invalid x" lines

Set cover also accepts the inline form ``n=3; {1,2},{3}``.
"""

from __future__ import annotations

import enum
import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Union

MAX_N = 30
MAX_WEIGHT = 2**31
MAX_PATH_WEIGHT = 2**40
# materialized comparisons / rendering of oracle instances
MAX_EXPLICIT_N = 16

KINDS = ("hypercube", "tsp", "graph", "digraph", "setcover")
KIND_ALIASES = {
    "bandwidth": "graph",
    "ordering": "graph",
    "fas": "digraph",
    "cover": "setcover",
}


class Outcome(enum.Enum):
    """Answers that are not numbers."""

    UNREACHABLE = "unreachable"
    INFEASIBLE = "infeasible"

    def __str__(self) -> str:
        return self.value


UNREACHABLE = Outcome.UNREACHABLE
INFEASIBLE = Outcome.INFEASIBLE


class ParseError(ValueError):
    """Malformed instance text; ``line`` is 1-based, 0 when not line-specific."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def canonical_kind(kind: str) -> str:
    kind = KIND_ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown problem kind {kind!r}")
    return kind


def popcount(x: int) -> int:
    return x.bit_count()


def bits_of(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def masks_of_weight(n: int, w: int) -> list[int]:
    """All ``n``-bit masks with exactly ``w`` bits set, in increasing order."""
    if w < 0 or w > n:
        return []
    return sorted(sum(1 << i for i in c) for c in itertools.combinations(range(n), w))


def submasks_of_weight(x: int, w: int, base: int = 0) -> Iterator[int]:
    """Masks ``base | s`` where ``s`` ranges over ``w``-subsets of the bits of ``x``."""
    for combo in itertools.combinations(list(bits_of(x)), w):
        m = base
        for b in combo:
            m |= 1 << b
        yield m


@dataclass(frozen=True)
class SubsetMask:
    bits: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"ground set size {self.n} outside 1..{MAX_N}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"mask {self.bits:#x} has bits outside the low {self.n}")

    @classmethod
    def from_elements(cls, elements: Sequence[int], n: int) -> SubsetMask:
        bits = 0
        for e in elements:
            if not 0 <= e < n:
                raise ValueError(f"element {e} outside 0..{n - 1}")
            bits |= 1 << e
        return cls(bits, n)

    def _check(self, other: SubsetMask) -> None:
        if other.n != self.n:
            raise ValueError("masks over different ground sets")

    def popcount(self) -> int:
        return self.bits.bit_count()

    def issubset(self, other: SubsetMask) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __le__(self, other: SubsetMask) -> bool:
        return self.issubset(other)

    def union(self, other: SubsetMask) -> SubsetMask:
        self._check(other)
        return SubsetMask(self.bits | other.bits, self.n)

    def difference(self, other: SubsetMask) -> SubsetMask:
        self._check(other)
        return SubsetMask(self.bits & ~other.bits, self.n)

    def flip(self, i: int) -> SubsetMask:
        if not 0 <= i < self.n:
            raise ValueError(f"bit {i} outside 0..{self.n - 1}")
        return SubsetMask(self.bits ^ (1 << i), self.n)

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return bits_of(self.bits)

    def __str__(self) -> str:
        return format(self.bits, f"0{self.n}b")


EdgeOracle = Callable[[int, int], bool]
ValidityOracle = Callable[[int], bool]


@dataclass(frozen=True, eq=False)
class HypercubeInstance:
    """Subgraph of the directed hypercube, given by oracles.

    ``edge_oracle(x, i)`` answers whether the edge ``x -> x | (1 << i)`` is
    present; it is only ever asked about pairs with bit ``i`` of ``x`` clear.
    """

    n: int
    edge_oracle: EdgeOracle
    validity_oracle: Optional[ValidityOracle] = None

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise ValueError(f"dimension {self.n} outside 0..{MAX_N}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, x: int, i: int) -> bool:
        if x >> i & 1:
            raise ValueError(f"edge query ({x:b}, {i}) with bit {i} already set")
        return bool(self.edge_oracle(x, i))

    def is_valid(self, x: int) -> bool:
        return True if self.validity_oracle is None else bool(self.validity_oracle(x))

    @classmethod
    def explicit(cls, n: int, edges, invalid=()) -> HypercubeInstance:
        table = bytearray(n << n) if n else bytearray(1)
        for x, i in edges:
            if x >> i & 1 or x >> n or not 0 <= i < n:
                raise ValueError(f"({x:b}, {i}) is not an edge of Q_{n}")
            table[x * n + i] = 1
        bad = frozenset(invalid)
        validity = None if not bad else (lambda x: x not in bad)
        return cls(n, lambda x, i: bool(table[x * n + i]), validity)

    @classmethod
    def full_cube(cls, n: int) -> HypercubeInstance:
        return cls(n, lambda x, i: True)

    def edge_list(self) -> list[tuple[int, int]]:
        if self.n > MAX_EXPLICIT_N:
            raise ValueError(f"refusing to materialize Q_{self.n}")
        return [(x, i) for x in range(1 << self.n) for i in range(self.n) if not x >> i & 1 and self.edge_oracle(x, i)]

    def invalid_list(self) -> list[int]:
        if self.validity_oracle is None:
            return []
        return [x for x in range(1 << self.n) if not self.validity_oracle(x)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, HypercubeInstance) or other.n != self.n:
            return NotImplemented if not isinstance(other, HypercubeInstance) else False
        return self.edge_list() == other.edge_list() and self.invalid_list() == other.invalid_list()

    __hash__ = None


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with nonnegative integer weights; ``None`` marks no edge."""

    n: int
    weights: tuple[tuple[Optional[int], ...], ...]
    _nbrs: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = self.n
        if not 1 <= n <= MAX_N:
            raise ValueError(f"vertex count {n} outside 1..{MAX_N}")
        if len(self.weights) != n or any(len(row) != n for row in self.weights):
            raise ValueError("weight matrix is not n x n")
        for u in range(n):
            if self.weights[u][u] is not None:
                raise ValueError(f"self-loop at vertex {u}")
            for v in range(n):
                w = self.weights[u][v]
                if w != self.weights[v][u]:
                    raise ValueError(f"asymmetric weights between {u} and {v}")
                if w is not None and (not isinstance(w, int) or w < 0):
                    raise ValueError(f"weight {w!r} on ({u}, {v}) is not a nonnegative integer")
        L = self.max_weight
        if L > MAX_WEIGHT or n * L >= MAX_PATH_WEIGHT:
            raise ValueError(f"max weight {L} too large for n={n}")
        nbrs = tuple(sum(1 << v for v in range(n) if self.weights[u][v] is not None) for u in range(n))
        object.__setattr__(self, "_nbrs", nbrs)

    @classmethod
    def from_edges(cls, n: int, edges) -> WeightedGraph:
        W: list[list[Optional[int]]] = [[None] * n for _ in range(n)]
        for e in edges:
            u, v, w = (e[0], e[1], e[2] if len(e) > 2 else 1)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            W[u][v] = W[v][u] = w
        return cls(n, tuple(map(tuple, W)))

    @property
    def max_weight(self) -> int:
        return max((w for row in self.weights for w in row if w is not None), default=0)

    def weight(self, u: int, v: int) -> Optional[int]:
        return self.weights[u][v]

    def has_edge(self, u: int, v: int) -> bool:
        return self.weights[u][v] is not None

    def edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, self.weights[u][v]) for u in range(self.n) for v in range(u + 1, self.n) if self.weights[u][v] is not None]

    def neighbor_masks(self) -> tuple[int, ...]:
        return self._nbrs

    def components(self) -> list[list[int]]:
        nbrs = self.neighbor_masks()
        seen = 0
        out = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp, frontier = 1 << s, 1 << s
            while frontier:
                nxt = 0
                for u in bits_of(frontier):
                    nxt |= nbrs[u]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            out.append(list(bits_of(comp)))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def induced(self, vertices: Sequence[int]) -> WeightedGraph:
        vs = list(vertices)
        return WeightedGraph(len(vs), tuple(tuple(self.weights[a][b] for b in vs) for a in vs))

    def relabel(self, perm: Sequence[int]) -> WeightedGraph:
        """Graph where old vertex ``v`` becomes ``perm[v]``."""
        inv = [0] * self.n
        for old, new in enumerate(perm):
            inv[new] = old
        return WeightedGraph(self.n, tuple(tuple(self.weights[inv[a]][inv[b]] for b in range(self.n)) for a in range(self.n)))


@dataclass(frozen=True)
class DirectedGraph:
    n: int
    arcs: tuple[frozenset, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"vertex count {self.n} outside 1..{MAX_N}")
        if len(self.arcs) != self.n:
            raise ValueError("need one out-neighbour set per vertex")
        for u, outs in enumerate(self.arcs):
            if u in outs:
                raise ValueError(f"self-loop at vertex {u}")
            if any(not 0 <= v < self.n for v in outs):
                raise ValueError(f"arc from {u} leaves the vertex range")

    @classmethod
    def from_arcs(cls, n: int, arcs) -> DirectedGraph:
        outs: list[set] = [set() for _ in range(n)]
        for u, v in arcs:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            outs[u].add(v)
        return cls(n, tuple(frozenset(s) for s in outs))

    def arc_list(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.arcs[u])]

    def out_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v in outs) for outs in self.arcs)


@dataclass(frozen=True)
class SetCoverInstance:
    """Universe ``{0..n-1}`` and a collection of nonempty subsets (bitmasks)."""

    n: int
    sets: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"universe size {self.n} outside 1..{MAX_N}")
        union = 0
        for j, s in enumerate(self.sets):
            if s <= 0:
                raise ValueError(f"set {j + 1} is empty")
            if s >> self.n:
                raise ValueError(f"set {j + 1}: element out of range")
            union |= s
        if union != self.universe:
            missing = [e + 1 for e in bits_of(self.universe & ~union)]
            raise ValueError(f"sets do not cover the universe (missing {missing})")

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def universe(self) -> int:
        return (1 << self.n) - 1

    def masks(self) -> list[SubsetMask]:
        return [SubsetMask(s, self.n) for s in self.sets]


@dataclass(frozen=True)
class OrderingObjective:
    """Vertex-ordering cost ``f(graph, prefix, v)`` combined by ``max`` or ``sum``.

    ``prefix`` is the bitmask of vertices placed before ``v``.
    """

    mode: str
    f: Callable[[WeightedGraph, int, int], int] = field(compare=False)
    name: str = "custom"

    def __post_init__(self):
        if self.mode not in ("max", "sum"):
            raise ValueError(f"mode must be 'max' or 'sum', got {self.mode!r}")

    def combine(self, a: int, b: int) -> int:
        return max(a, b) if self.mode == "max" else a + b


def _cut_size(g: WeightedGraph, placed: int) -> int:
    nbrs = g.neighbor_masks()
    return sum((nbrs[u] & ~placed).bit_count() for u in bits_of(placed))


def _boundary_size(g: WeightedGraph, placed: int) -> int:
    nbrs = g.neighbor_masks()
    return sum(1 for u in bits_of(placed) if nbrs[u] & ~placed)


def cutwidth() -> OrderingObjective:
    return OrderingObjective("max", lambda g, s, v: _cut_size(g, s | 1 << v), "cutwidth")


def linear_arrangement() -> OrderingObjective:
    # sum over gaps of the cut equals the total edge length of the layout
    return OrderingObjective("sum", lambda g, s, v: _cut_size(g, s | 1 << v), "linear-arrangement")


def vertex_separation() -> OrderingObjective:
    return OrderingObjective("max", lambda g, s, v: _boundary_size(g, s | 1 << v), "vertex-separation")


def sum_cut() -> OrderingObjective:
    return OrderingObjective("sum", lambda g, s, v: _boundary_size(g, s | 1 << v), "sum-cut")


OBJECTIVES = {
    "cutwidth": cutwidth,
    "linear-arrangement": linear_arrangement,
    "vertex-separation": vertex_separation,
    "sum-cut": sum_cut,
}


Instance = Union[HypercubeInstance, WeightedGraph, DirectedGraph, SetCoverInstance]


# ---------------------------------------------------------------- parsing


def _records(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} {tok!r} is not an integer", lineno) from None


def _header(records, expect: Sequence[str], nargs: int):
    if not records:
        raise ParseError("empty input")
    lineno, toks = records[0]
    if toks[0] not in expect:
        raise ParseError(f"expected header {' or '.join(repr(e) for e in expect)}, got {toks[0]!r}", lineno)
    if len(toks) != nargs + 1:
        raise ParseError(f"header {toks[0]!r} takes {nargs} argument(s)", lineno)
    return toks[0], [_int(t, lineno, "header field") for t in toks[1:]], lineno


def _vertex(tok: str, n: int, lineno: int) -> int:
    v = _int(tok, lineno, "vertex")
    if not 0 <= v < n:
        raise ParseError(f"vertex {v} out of range 0..{n - 1}", lineno)
    return v


def _wrap(fn, lineno: int):
    try:
        return fn()
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def _parse_graph(records) -> WeightedGraph:
    head, (n,), hline = _header(records, ("graph", "matrix"), 1)
    if not 1 <= n <= MAX_N:
        raise ParseError(f"vertex count {n} outside 1..{MAX_N}", hline)
    if head == "matrix":
        rows = records[1:]
        if len(rows) != n:
            raise ParseError(f"matrix needs {n} rows, found {len(rows)}", hline)
        W = []
        for lineno, toks in rows:
            if len(toks) != n:
                raise ParseError(f"matrix row has {len(toks)} entries, expected {n}", lineno)
            W.append(tuple(None if t == "-" else _int(t, lineno, "weight") for t in toks))
        for u in range(n):
            for v in range(n):
                if W[u][v] != W[v][u]:
                    raise ParseError(f"asymmetric matrix: w({u},{v})={W[u][v]} but w({v},{u})={W[v][u]}", rows[u][0])
        return _wrap(lambda: WeightedGraph(n, tuple(W)), hline)
    W = [[None] * n for _ in range(n)]
    for lineno, toks in records[1:]:
        if len(toks) not in (2, 3):
            raise ParseError("edge line must be 'u v' or 'u v w'", lineno)
        u, v = _vertex(toks[0], n, lineno), _vertex(toks[1], n, lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        w = _int(toks[2], lineno, "weight") if len(toks) == 3 else 1
        if w < 0:
            raise ParseError(f"negative weight {w}", lineno)
        if W[u][v] is not None and W[u][v] != w:
            raise ParseError(f"asymmetric weights for edge {{{u},{v}}}: {W[u][v]} and {w}", lineno)
        W[u][v] = W[v][u] = w
    return _wrap(lambda: WeightedGraph(n, tuple(map(tuple, W))), hline)


def _parse_digraph(records) -> DirectedGraph:
    _, (n,), hline = _header(records, ("digraph",), 1)
    if not 1 <= n <= MAX_N:
        raise ParseError(f"vertex count {n} outside 1..{MAX_N}", hline)
    arcs = []
    for lineno, toks in records[1:]:
        if len(toks) != 2:
            raise ParseError("arc line must be 'u v'", lineno)
        u, v = _vertex(toks[0], n, lineno), _vertex(toks[1], n, lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        arcs.append((u, v))
    return DirectedGraph.from_arcs(n, arcs)


_INLINE_COVER = re.compile(r"^\s*n\s*=\s*(\d+)\s*;(.*)$", re.S)


def _cover_from_lists(n: int, lists, linenos) -> SetCoverInstance:
    sets = []
    for elems, lineno in zip(lists, linenos):
        mask = 0
        for e in elems:
            if not 1 <= e <= n:
                raise ParseError(f"element {e} out of range 1..{n}", lineno)
            mask |= 1 << (e - 1)
        if not mask:
            raise ParseError("empty set", lineno)
        sets.append(mask)
    return _wrap(lambda: SetCoverInstance(n, tuple(sets)), linenos[0] if linenos else 0)


def _parse_setcover(text: str, records) -> SetCoverInstance:
    inline = _INLINE_COVER.match(text)
    if inline:
        n = int(inline.group(1))
        body = inline.group(2)
        groups = re.findall(r"\{([^}]*)\}", body)
        if not groups or re.sub(r"\{[^}]*\}|[\s,]", "", body):
            raise ParseError("inline set cover must look like 'n=3; {1,2},{3}'", 1)
        lists = []
        for grp in groups:
            toks = [t for t in re.split(r"[\s,]+", grp.strip()) if t]
            lists.append([_int(t, 1, "element") for t in toks])
        return _cover_from_lists(n, lists, [1] * len(lists))
    _, (n, m), hline = _header(records, ("setcover",), 2)
    if not 1 <= n <= MAX_N:
        raise ParseError(f"universe size {n} outside 1..{MAX_N}", hline)
    body = records[1:]
    if len(body) != m:
        raise ParseError(f"header announces {m} sets, found {len(body)}", hline)
    lists = [[_int(t, lineno, "element") for t in toks] for lineno, toks in body]
    return _cover_from_lists(n, lists, [lineno for lineno, _ in body])


def _parse_hypercube(records) -> HypercubeInstance:
    _, (n,), hline = _header(records, ("hypercube",), 1)
    if not 0 <= n <= MAX_EXPLICIT_N:
        raise ParseError(f"explicit hypercube dimension {n} outside 0..{MAX_EXPLICIT_N}", hline)

    def vertex(tok: str, lineno: int) -> int:
        if len(tok) != n or set(tok) - {"0", "1"}:
            raise ParseError(f"vertex {tok!r} is not a {n}-bit binary string", lineno)
        return int(tok, 2) if n else 0

    edges, invalid = [], []
    for lineno, toks in records[1:]:
        if toks[0] == "invalid":
            if len(toks) != 2:
                raise ParseError("expected 'invalid x'", lineno)
            invalid.append(vertex(toks[1], lineno))
            continue
        if len(toks) != 2:
            raise ParseError("edge line must be 'x i'", lineno)
        x, i = vertex(toks[0], lineno), _int(toks[1], lineno, "bit index")
        if not 0 <= i < n:
            raise ParseError(f"bit index {i} out of range 0..{n - 1}", lineno)
        if x >> i & 1:
            raise ParseError(f"bit {i} of {toks[0]} is already set", lineno)
        edges.append((x, i))
    return HypercubeInstance.explicit(n, edges, invalid)


def parse_instance(text: str, kind: str) -> Instance:
    kind = canonical_kind(kind)
    records = _records(text)
    if kind in ("tsp", "graph"):
        return _parse_graph(records)
    if kind == "digraph":
        return _parse_digraph(records)
    if kind == "setcover":
        return _parse_setcover(text, records)
    return _parse_hypercube(records)


def render_instance(inst: Instance) -> str:
    if isinstance(inst, WeightedGraph):
        lines = [f"graph {inst.n}"] + [f"{u} {v} {w}" for u, v, w in inst.edges()]
    elif isinstance(inst, DirectedGraph):
        lines = [f"digraph {inst.n}"] + [f"{u} {v}" for u, v in inst.arc_list()]
    elif isinstance(inst, SetCoverInstance):
        lines = [f"setcover {inst.n} {inst.m}"] + [" ".join(str(e + 1) for e in bits_of(s)) for s in inst.sets]
    elif isinstance(inst, HypercubeInstance):
        fmt = f"0{inst.n}b"
        lines = [f"hypercube {inst.n}"]
        lines += [f"{format(x, fmt)} {i}" for x, i in inst.edge_list()]
        lines += [f"invalid {format(x, fmt)}" for x in inst.invalid_list()]
    else:
        raise TypeError(f"cannot render {type(inst).__name__}")
    return "\n".join(lines) + "\n"


def kind_of(inst: Instance) -> str:
    if isinstance(inst, HypercubeInstance):
        return "hypercube"
    if isinstance(inst, WeightedGraph):
        return "graph"
    if isinstance(inst, DirectedGraph):
        return "digraph"
    if isinstance(inst, SetCoverInstance):
        return "setcover"
    raise TypeError(type(inst).__name__)


# ------------------------------------------------------------- generators


def _random_tree_edges(rng: random.Random, n: int) -> list[tuple[int, int]]:
    order = list(range(n))
    rng.shuffle(order)
    return [(order[i], order[rng.randrange(i)]) for i in range(1, n)]


def generate_random(kind: str, n: int, seed: int, **params) -> Instance:
    """Deterministic random instance of ``kind`` with ``n`` ground elements.

    Parameters per kind (defaults in brackets):

    * hypercube: ``density`` [0.7] edge probability, ``valid_density`` [1.0]
      probability that an interior vertex is valid
    * tsp: ``wmin`` [1], ``wmax`` [9], ``density`` [1.0]
    * graph: ``density`` [0.3], ``connected`` [True], ``weighted`` [False]
    * digraph: ``density`` [0.3], ``tournament`` [False]
    * setcover: ``m`` [n], ``max_size`` [max(1, n // 3)]
    """
    kind = KIND_ALIASES.get(kind, kind)
    if kind != "bandwidth":
        kind = canonical_kind(kind)
    if not 1 <= n <= MAX_N:
        raise ValueError(f"unsupported size n={n} (need 1..{MAX_N})")
    rng = random.Random(f"{kind}:{n}:{seed}")

    if kind == "hypercube":
        if n > 22:
            raise ValueError(f"unsupported size n={n} for a materialized random hypercube")
        p = params.get("density", 0.7)
        q = params.get("valid_density", 1.0)
        edges = [(x, i) for x in range(1 << n) for i in range(n) if not x >> i & 1 and rng.random() < p]
        full = (1 << n) - 1
        invalid = [] if q >= 1.0 else [x for x in range(1, full) if rng.random() >= q]
        return HypercubeInstance.explicit(n, edges, invalid)

    if kind == "tsp":
        lo, hi = params.get("wmin", 1), params.get("wmax", 9)
        p = params.get("density", 1.0)
        edges = [(u, v, rng.randint(lo, hi)) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        return WeightedGraph.from_edges(n, edges)

    if kind == "graph":
        p = params.get("density", 0.3)
        weighted = params.get("weighted", False)
        chosen = set()
        if params.get("connected", True):
            chosen |= {tuple(sorted(e)) for e in _random_tree_edges(rng, n)}
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    chosen.add((u, v))
        edges = [(u, v, rng.randint(1, 9) if weighted else 1) for u, v in sorted(chosen)]
        return WeightedGraph.from_edges(n, edges)

    if kind == "digraph":
        if params.get("tournament", False):
            arcs = [(u, v) if rng.random() < 0.5 else (v, u) for u in range(n) for v in range(u + 1, n)]
        else:
            p = params.get("density", 0.3)
            arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
        return DirectedGraph.from_arcs(n, arcs)

    # setcover
    m = params.get("m", n)
    max_size = max(1, min(n, params.get("max_size", max(1, n // 3))))
    if m < 1:
        raise ValueError("need at least one set")
    sets = []
    for _ in range(m):
        size = rng.randint(1, max_size)
        sets.append(sum(1 << e for e in rng.sample(range(n), size)))
    # post-filter: every uncovered element joins a random set with room left
    union = 0
    for s in sets:
        union |= s
    for e in range(n):
        if not union >> e & 1:
            roomy = [j for j, s in enumerate(sets) if s.bit_count() < max_size] or list(range(m))
            sets[rng.choice(roomy)] |= 1 << e
    return SetCoverInstance(n, tuple(sets))


# ------------------------------------------------------------ restriction


def _scatter_table(free_bits: Sequence[int]) -> list[int]:
    table = [0] * (1 << len(free_bits))
    for j, b in enumerate(free_bits):
        step = 1 << j
        for local in range(step, step << 1):
            table[local] = table[local - step] | (1 << b)
    return table


def subcube_restrict(inst: HypercubeInstance, lo: int, hi: int) -> HypercubeInstance:
    """The interval ``lo <= z <= hi`` of ``inst`` as a cube of its own.

    Local coordinate ``j`` is the ``j``-th lowest bit of ``hi & ~lo``.
    """
    if isinstance(lo, SubsetMask):
        lo = lo.bits
    if isinstance(hi, SubsetMask):
        hi = hi.bits
    if lo & ~hi:
        raise ValueError(f"{lo:b} is not below {hi:b}")
    free = list(bits_of(hi & ~lo))
    scatter = _scatter_table(free) if len(free) <= 20 else None

    def up(local: int) -> int:
        if scatter is not None:
            return lo | scatter[local]
        z = lo
        for j, b in enumerate(free):
            if local >> j & 1:
                z |= 1 << b
        return z

    edge = lambda x, i: inst.edge_oracle(up(x), free[i])
    valid = None if inst.validity_oracle is None else (lambda x: inst.validity_oracle(up(x)))
    return HypercubeInstance(len(free), edge, valid)
