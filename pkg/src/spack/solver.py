"""Exact S-packing coloring search.

The decision procedure is a depth-first search over a static vertex order
(descending degree, ties by index). A color ``i`` is open for ``v`` when no
vertex already holding ``i`` lies within distance ``s_i`` of ``v``; colors
in a run of equal ``s`` values are interchangeable, so inside a run only the
first unused one is tried.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .graph import UNREACHABLE, DistanceMatrix, Graph, _bits, all_pairs_distances, is_connected
from .packing import PackingSequence


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    """Colors ``1..k`` listed in vertex order."""

    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if any(c < 1 for c in self.colors):
            raise ValueError(f"colors must be positive: {self.colors}")

    @classmethod
    def parse(cls, text: str) -> Coloring:
        return cls(tuple(int(t) for t in text.replace(",", " ").split()))

    @property
    def k(self) -> int:
        return max(self.colors, default=0)

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def text(self) -> str:
        return " ".join(map(str, self.colors))

    def __str__(self) -> str:
        return self.text()


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: int = 0

    def add(self, other: SearchStats) -> None:
        self.nodes += other.nodes
        self.prunes += other.prunes


@dataclass(frozen=True)
class ChiResult:
    chi: int
    witness: Coloring
    stats: SearchStats = field(default_factory=SearchStats, compare=False)


class GXBound(NamedTuple):
    bound: int
    equality: bool


def first_violation(
    g: Graph, dist: DistanceMatrix, s: PackingSequence, c: Coloring
) -> tuple[int, int] | None:
    """First pair ``(u, v)``, ``u < v``, sharing color ``i`` with ``d(u, v) <= s_i``."""
    if len(c) != g.n:
        raise ValueError(f"coloring has {len(c)} entries for {g.n} vertices")
    for u in range(g.n):
        cu = c[u]
        limit = s.value_at(cu)
        row = dist.rows[u]
        for v in range(u + 1, g.n):
            if c[v] == cu and row[v] != UNREACHABLE and row[v] <= limit:
                return u, v
    return None


def is_valid_coloring(
    g: Graph, dist: DistanceMatrix | None, s: PackingSequence, c: Coloring
) -> bool:
    if dist is None:
        dist = all_pairs_distances(g)
    return first_violation(g, dist, s, c) is None


class _Engine:
    """Precomputed per-graph data shared by the decision calls."""

    def __init__(self, g: Graph, dist: DistanceMatrix | None = None):
        self.g = g
        self.dist = dist if dist is not None else all_pairs_distances(g)
        self.order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
        self._balls: dict[int, list[int]] = {}

    def balls(self, radius: int) -> list[int]:
        cached = self._balls.get(radius)
        if cached is None:
            cached = [self.dist.ball(v, radius) for v in range(self.g.n)]
            self._balls[radius] = cached
        return cached

    def decide(self, s: PackingSequence, k: int, stats: SearchStats | None = None) -> Coloring | None:
        n = self.g.n
        if n == 0:
            return Coloring(())
        k = min(k, n)
        if k <= 0:
            return None
        stats = stats if stats is not None else SearchStats()
        svals = s.prefix(k)
        ball = [self.balls(r) for r in svals]
        # run_start[i]: first color of the run of equal s-values holding color i
        run_start = [0] * k
        for i in range(1, k):
            run_start[i] = run_start[i - 1] if svals[i] == svals[i - 1] else i
        order = self.order
        classes = [0] * k
        used = [False] * k
        color = [0] * n

        def dfs(pos: int) -> bool:
            if pos == n:
                return True
            stats.nodes += 1
            v = order[pos]
            bit = 1 << v
            for i in range(k):
                if not used[i] and i != run_start[i] and not used[i - 1]:
                    continue
                if classes[i] & ball[i][v]:
                    continue
                fresh = not used[i]
                classes[i] |= bit
                used[i] = True
                color[v] = i + 1
                if dfs(pos + 1):
                    return True
                classes[i] ^= bit
                if fresh:
                    used[i] = False
            stats.prunes += 1
            return False

        if dfs(0):
            return Coloring(tuple(color))
        return None


def exists_coloring(
    g: Graph, s: PackingSequence, k: int, dist: DistanceMatrix | None = None
) -> Coloring | None:
    """A valid S-packing coloring with colors in ``1..k``, or ``None``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return _Engine(g, dist).decide(s, k)


def clique_number(g: Graph) -> int:
    best = 0

    def expand(size: int, cand: int) -> None:
        nonlocal best
        if size > best:
            best = size
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = cand.bit_length() - 1
            cand ^= 1 << v
            expand(size + 1, cand & g.adj[v])

    expand(0, (1 << g.n) - 1)
    return best


def chi_S(g: Graph, s: PackingSequence, dist: DistanceMatrix | None = None) -> ChiResult:
    """S-packing chromatic number with a witness coloring.

    Searches upward from the clique number; every clique needs distinct
    colors since all ``s_i >= 1``.
    """
    stats = SearchStats()
    if g.n == 0:
        return ChiResult(0, Coloring(()), stats)
    engine = _Engine(g, dist)
    k = max(1, clique_number(g))
    while True:
        witness = engine.decide(s, k, stats)
        if witness is not None:
            return ChiResult(k, witness, stats)
        k += 1


def chromatic_number(g: Graph) -> int:
    return chi_S(g, PackingSequence.proper()).chi


def alpha_k(g: Graph, k: int) -> tuple[int, frozenset[int]]:
    """Largest vertex set inducing a properly ``k``-colorable subgraph.

    Branch and bound: each vertex in turn is left out or given one of ``k``
    colors (first-use order); a branch dies when even taking every remaining
    vertex cannot beat the incumbent.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    order = sorted(range(n), key=lambda v: (g.degree(v), v))
    adj = g.adj
    best_size = 0
    best_set = 0
    classes = [0] * k

    def dfs(pos: int, size: int, chosen: int, opened: int) -> None:
        nonlocal best_size, best_set
        if size + (n - pos) <= best_size:
            return
        if pos == n:
            best_size, best_set = size, chosen
            return
        v = order[pos]
        for i in range(min(opened + 1, k)):
            if classes[i] & adj[v]:
                continue
            classes[i] |= 1 << v
            dfs(pos + 1, size + 1, chosen | 1 << v, max(opened, i + 1))
            classes[i] ^= 1 << v
        dfs(pos + 1, size, chosen, opened)

    dfs(0, 0, 0, 0)
    return best_size, frozenset(_bits(best_set))


def goddard_xu_bound(g: Graph, s: PackingSequence) -> GXBound:
    """``n - alpha_l + min(l, chi)`` for ``S = (1^l, s_{l+1}, ...)``, with the equality flag ``diam <= s_{l+1}``."""
    if not is_connected(g):
        raise PreconditionError("the bound is evaluated on connected graphs only")
    ell = s.leading_ones(max(g.n, len(s)) + 1)
    if ell < 1:
        raise PreconditionError(f"sequence {s} does not start with 1")
    if s.value_at(ell + 1) < 2:
        raise PreconditionError(f"sequence {s} has no term >= 2 after its leading ones")
    size, _ = alpha_k(g, ell)
    bound = g.n - size + min(ell, chromatic_number(g))
    diam = all_pairs_distances(g).diameter()
    return GXBound(bound, diam <= s.value_at(ell + 1))
