"""Bucket assignments and valid sets for the exact bandwidth decision.

For a candidate bandwidth ``b`` the ``n`` positions are cut into
``k = ceil(n / (b + 1))`` buckets of ``b + 1`` positions; the last bucket
keeps the ``n - (k - 1)(b + 1)`` positions left over.  Assignments of
vertices to buckets are generated from a BFS spanning tree, each non-root
vertex sitting at offset -1, 0 or +1 from its parent's bucket.

Partial orderings fill buckets round-robin: the t-th placed vertex goes to
offset ``t // k`` of bucket ``t % k`` (skipping a full short last bucket), so
the bucket sizes of a reachable set form a staircase.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .instances import WeightedGraph, bits_of


@dataclass(frozen=True)
class SpanningTree:
    root: int
    parent: tuple[int, ...]  # parent[root] == -1
    order: tuple[int, ...]  # BFS order, root first

    @classmethod
    def bfs(cls, g: WeightedGraph, root: int = 0) -> SpanningTree:
        nbrs = g.neighbor_masks()
        parent = [-2] * g.n
        parent[root] = -1
        order = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in bits_of(nbrs[u]):
                if parent[v] == -2:
                    parent[v] = u
                    order.append(v)
                    queue.append(v)
        if len(order) != g.n:
            raise ValueError("graph is not connected")
        return cls(root, tuple(parent), tuple(order))

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for v in self.order[1:]:
            kids[self.parent[v]].append(v)
        return kids


@dataclass(frozen=True)
class BucketLayout:
    n: int
    b: int

    def __post_init__(self):
        if self.b < 1 or self.n < 1:
            raise ValueError(f"need n >= 1 and b >= 1, got n={self.n}, b={self.b}")

    @property
    def width(self) -> int:
        return self.b + 1

    @property
    def k(self) -> int:
        return -(-self.n // self.width)

    @cached_property
    def caps(self) -> tuple[int, ...]:
        k, w = self.k, self.width
        return tuple([w] * (k - 1) + [self.n - (k - 1) * w])

    @cached_property
    def fill_order(self) -> tuple[int, ...]:
        """Bucket receiving the t-th placed vertex, for t = 0..n-1."""
        return tuple(i for j in range(self.width) for i in range(self.k) if j < self.caps[i])

    @cached_property
    def staircase(self) -> tuple[tuple[int, ...], ...]:
        """Bucket sizes after t placements, for t = 0..n."""
        sizes = [0] * self.k
        out = [tuple(sizes)]
        for i in self.fill_order:
            sizes[i] += 1
            out.append(tuple(sizes))
        return tuple(out)

    def bound(self) -> int:
        """Valid-pair bound ``2 k 5^n``."""
        return 2 * self.k * 5**self.n


def enumerate_assignments(
    g: WeightedGraph,
    b: int,
    tree: Optional[SpanningTree] = None,
    *,
    correct_only: bool = True,
    prune_edges: bool = True,
) -> Iterator[tuple[int, ...]]:
    """Bucket assignments generated by tree offsets, as tuples ``sigma[v]``.

    With ``correct_only`` only assignments that stay inside ``[0, k)`` and
    fill every bucket exactly to capacity are produced; ``prune_edges``
    further drops assignments with an edge spanning two or more buckets.
    Without ``correct_only`` every offset vector is produced, including
    out-of-range buckets.
    """
    tree = tree or SpanningTree.bfs(g)
    layout = BucketLayout(g.n, b)
    k, caps = layout.k, layout.caps
    nbrs = g.neighbor_masks()
    order, parent = tree.order, tree.parent
    sigma = [0] * g.n
    counts = [0] * k
    assigned = 0

    def rec(idx: int) -> Iterator[tuple[int, ...]]:
        nonlocal assigned
        if idx == len(order):
            yield tuple(sigma)
            return
        v = order[idx]
        for s in (-1, 0, 1):
            bucket = sigma[parent[v]] + s
            if correct_only and (not 0 <= bucket < k or counts[bucket] >= caps[bucket]):
                continue
            if prune_edges and any(abs(sigma[u] - bucket) >= 2 for u in bits_of(nbrs[v] & assigned)):
                continue
            sigma[v] = bucket
            if correct_only:
                counts[bucket] += 1
            assigned |= 1 << v
            yield from rec(idx + 1)
            assigned &= ~(1 << v)
            if correct_only:
                counts[bucket] -= 1

    root = tree.root
    for start in range(k):
        sigma[root] = start
        counts[start] += 1
        assigned = 1 << root
        yield from rec(1)
        counts[start] -= 1


class SigmaProblem:
    """The ordering subproblem for one bucket assignment, as a hypercube."""

    def __init__(self, g: WeightedGraph, b: int, sigma: Sequence[int], tree: SpanningTree):
        self.g = g
        self.n = g.n
        self.layout = BucketLayout(g.n, b)
        self.sigma = tuple(sigma)
        self.tree = tree
        self.nbrs = g.neighbor_masks()
        k = self.layout.k
        self.bucket_mask = [0] * (k + 2)  # padded so i-1 and i+1 are always indexable
        for v, i in enumerate(self.sigma):
            if 0 <= i < k:
                self.bucket_mask[i + 1] |= 1 << v
        self._up = 0  # children at offset +1
        self._down = 0  # children at offset -1
        for v in tree.order[1:]:
            s = self.sigma[v] - self.sigma[tree.parent[v]]
            if s not in (-1, 0, 1):
                raise ValueError(f"vertex {v} is {s} buckets from its tree parent")
            if s == 1:
                self._up |= 1 << v
            elif s == -1:
                self._down |= 1 << v
        self.staircase = set(self.layout.staircase)

    def sizes(self, S: int) -> tuple[int, ...]:
        return tuple((S & self.bucket_mask[i + 1]).bit_count() for i in range(self.layout.k))

    def parent_in(self, S: int) -> int:
        """Mask of non-root vertices whose tree parent lies in ``S``."""
        out = 0
        parent = self.tree.parent
        for v in self.tree.order[1:]:
            if S >> parent[v] & 1:
                out |= 1 << v
        return out

    def pair_valid(self, S: int) -> bool:
        """The two tree-offset conditions on ``(sigma, S)``."""
        pin = self.parent_in(S)
        if self._up & pin & ~S:
            return False
        if self._down & ~pin & S & ~(1 << self.tree.root):
            return False
        return True

    def valid(self, S: int) -> bool:
        return self.sizes(S) in self.staircase and self.pair_valid(S)

    def last_max_bucket(self, S: int) -> int:
        sizes = self.sizes(S)
        top = max(sizes)
        return max(i for i, s in enumerate(sizes) if s == top)

    def edge(self, P: int, v: int) -> bool:
        """Whether ``v`` may be placed after the partial ordering of ``P``."""
        S = P | 1 << v
        i = self.last_max_bucket(S)
        if self.sigma[v] != i:
            return False
        nv = self.nbrs[v]
        if nv & P & self.bucket_mask[i]:
            return False
        if nv & self.bucket_mask[i + 2] & ~P:
            return False
        return True

    def successors(self, P: int) -> Iterator[int]:
        """Valid one-vertex extensions of a valid set ``P``."""
        t = P.bit_count()
        if t == self.n:
            return
        i = self.layout.fill_order[t]
        for v in bits_of(self.bucket_mask[i + 1] & ~P):
            S = P | 1 << v
            if self.edge(P, v) and self.valid(S):
                yield S

    def count_pairs(self) -> int:
        """Number of ``S`` with ``(sigma, S)`` satisfying the tree-offset conditions."""
        kids = self.tree.children()
        ways: list = [None] * self.n
        for v in reversed(self.tree.order):
            w_out, w_in = 1, 1
            for c in kids[v]:
                c_out, c_in = ways[c]
                up, down = self._up >> c & 1, self._down >> c & 1
                # parent in S: a +1 child must be in S
                w_in *= c_in if up else c_out + c_in
                # parent not in S: a -1 child must be out of S
                w_out *= c_out if down else c_out + c_in
            ways[v] = (w_out, w_in)
        return sum(ways[self.tree.root])


def count_valid_pairs(g: WeightedGraph, b: int, sigma: Optional[Sequence[int]] = None, *, correct_only: bool = True) -> int:
    tree = SpanningTree.bfs(g)
    if sigma is not None:
        return SigmaProblem(g, b, sigma, tree).count_pairs()
    total = 0
    for sig in enumerate_assignments(g, b, tree, correct_only=correct_only, prune_edges=False):
        total += SigmaProblem(g, b, sig, tree).count_pairs()
    return total
