"""Simple undirected graphs on vertices ``0..n-1`` with bitset adjacency.

Besides the :class:`Graph` container this module holds the graph6 codec,
BFS distances, connectivity, vertex deletion and a canonical labeling used
to compare graphs up to isomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

UNREACHABLE = -1
MAX_GRAPH6_ORDER = 62
MAX_CANONICAL_ORDER = 16

_GRAPH6_HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    """Raised for malformed or unsupported graph6 text."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"vertex {u} has a neighbour outside 0..{self.n - 1}")
            if row >> u & 1:
                raise ValueError(f"loop at vertex {u}")
            for v in _bits(row):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for order {n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int = 0) -> Graph:
        return cls(n, (0,) * n)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        rows = [0] * self.n
        for u in range(self.n):
            row = 0
            for v in _bits(self.adj[u]):
                row |= 1 << perm[v]
            rows[perm[u]] = row
        return Graph(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Induced subgraph; ``vertices[i]`` becomes vertex ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            row = 0
            for w in _bits(self.adj[v]):
                if w in index:
                    row |= 1 << index[w]
            rows.append(row)
        return Graph(len(vertices), tuple(rows))

    def add_vertex(self, neighbors: int) -> Graph:
        """Append vertex ``n`` adjacent to the bitmask ``neighbors``."""
        rows = [row | ((neighbors >> u & 1) << self.n) for u, row in enumerate(self.adj)]
        rows.append(neighbors)
        return Graph(self.n + 1, tuple(rows))

    def add_edge(self, u: int, v: int) -> Graph:
        return Graph.from_edges(self.n, self.edges() + [(u, v)])

    def remove_edge(self, u: int, v: int) -> Graph:
        return Graph.from_edges(self.n, [e for e in self.edges() if e != (min(u, v), max(u, v))])


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shifted = [(u + g.n, v + g.n) for u, v in h.edges()]
    return Graph.from_edges(g.n + h.n, g.edges() + shifted)


# -- graph6 -----------------------------------------------------------------


def parse_graph6(text: str | bytes) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    text = text.rstrip("\r\n")
    start = 0
    if text.startswith(_GRAPH6_HEADER):
        start = len(_GRAPH6_HEADER)
    if start >= len(text):
        raise Graph6Error("empty graph6 string", start)
    for i in range(start, len(text)):
        if not 63 <= ord(text[i]) <= 126:
            raise Graph6Error(f"invalid graph6 character {text[i]!r}", i)
    n = ord(text[start]) - 63
    if n == 63:
        raise Graph6Error(f"orders above {MAX_GRAPH6_ORDER} are not supported", start)
    body = text[start + 1:]
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(body) < nbytes:
        raise Graph6Error(
            f"truncated edge field: expected {nbytes} bytes, found {len(body)}",
            start + 1 + len(body),
        )
    if len(body) > nbytes:
        raise Graph6Error("trailing data after edge field", start + 1 + nbytes)
    bits = 0
    for ch in body:
        bits = (bits << 6) | (ord(ch) - 63)
    pad = nbytes * 6 - nbits
    if bits & ((1 << pad) - 1):
        raise Graph6Error("non-zero padding bits", start + nbytes)
    bits >>= pad
    rows = [0] * n
    k = nbits - 1
    for j in range(1, n):
        for i in range(j):
            if bits >> k & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k -= 1
    return Graph(n, tuple(rows))


def to_graph6(g: Graph) -> str:
    if g.n > MAX_GRAPH6_ORDER:
        raise Graph6Error(f"order {g.n} exceeds the supported maximum {MAX_GRAPH6_ORDER}")
    chars = [chr(g.n + 63)]
    acc = 0
    used = 0
    for j in range(1, g.n):
        col = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (col >> i & 1)
            used += 1
            if used == 6:
                chars.append(chr(acc + 63))
                acc = used = 0
    if used:
        chars.append(chr((acc << (6 - used)) + 63))
    return "".join(chars)


# -- distances --------------------------------------------------------------


class DistanceMatrix:
    """All-pairs BFS distances; ``UNREACHABLE`` marks pairs in different components."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[int]]):
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)

    def __getitem__(self, key: tuple[int, int]) -> int:
        u, v = key
        return self.rows[u][v]

    def __eq__(self, other) -> bool:
        return isinstance(other, DistanceMatrix) and self.rows == other.rows

    def ball(self, v: int, radius: int) -> int:
        """Bitmask of vertices ``u != v`` with ``d(u, v) <= radius``."""
        mask = 0
        for u, d in enumerate(self.rows[v]):
            if 0 < d <= radius:
                mask |= 1 << u
        return mask

    def sphere(self, v: int, radius: int) -> list[int]:
        return [u for u, d in enumerate(self.rows[v]) if d == radius]

    def eccentricity(self, v: int) -> int | None:
        row = self.rows[v]
        if UNREACHABLE in row:
            return None
        return max(row)

    def diameter(self) -> int | None:
        if self.n == 0:
            return 0
        best = 0
        for row in self.rows:
            if UNREACHABLE in row:
                return None
            best = max(best, max(row))
        return best


def bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [UNREACHABLE] * g.n
    dist[source] = 0
    frontier = 1 << source
    seen = frontier
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for u in _bits(frontier):
            nxt |= g.adj[u]
        nxt &= ~seen
        seen |= nxt
        for u in _bits(nxt):
            dist[u] = d
        frontier = nxt
    return dist


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    return DistanceMatrix([bfs_distances(g, v) for v in range(g.n)])


def diameter(g: Graph) -> int | None:
    """Largest distance, or ``None`` when ``g`` is disconnected."""
    return all_pairs_distances(g).diameter()


def component_mask(g: Graph, v: int) -> int:
    seen = frontier = 1 << v
    while frontier:
        nxt = 0
        for u in _bits(frontier):
            nxt |= g.adj[u]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    return component_mask(g, 0) == (1 << g.n) - 1


def components(g: Graph) -> list[list[int]]:
    left = (1 << g.n) - 1
    out = []
    while left:
        v = (left & -left).bit_length() - 1
        comp = component_mask(g, v)
        out.append(list(_bits(comp)))
        left &= ~comp
    return out


def delete_vertex(g: Graph, v: int) -> Graph:
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for order {g.n}")
    return g.induced([u for u in range(g.n) if u != v])


# -- canonical labeling ------------------------------------------------------


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition.

    Cells split by neighbour counts into each splitter cell; the pieces are
    ordered by count, so the result commutes with vertex relabeling.
    """
    changed = True
    while changed:
        changed = False
        for s in range(len(cells)):
            splitter = 0
            for v in cells[s]:
                splitter |= 1 << v
            out: list[list[int]] = []
            for cell in cells:
                if len(cell) == 1:
                    out.append(cell)
                    continue
                groups: dict[int, list[int]] = {}
                for v in cell:
                    groups.setdefault((adj[v] & splitter).bit_count(), []).append(v)
                if len(groups) == 1:
                    out.append(cell)
                else:
                    out.extend(groups[c] for c in sorted(groups))
            if len(out) != len(cells):
                cells = out
                changed = True
                break
    return cells


def _certificate(adj: Sequence[int], order: Sequence[int]) -> int:
    pos = [0] * len(order)
    for i, v in enumerate(order):
        pos[v] = i
    cert = 0
    for j in range(1, len(order)):
        row = adj[order[j]]
        for i in range(j):
            cert = (cert << 1) | (row >> order[i] & 1)
    return cert


def _orbit_roots(n: int, generators: list[tuple[int, ...]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gen in generators:
        for v, w in enumerate(gen):
            a, b = find(v), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def canonical_order(g: Graph) -> list[int]:
    """Vertex order whose relabeled graph is the same for every isomorphic copy.

    Individualization-refinement search; the leaf with the largest adjacency
    certificate wins. Subtrees are skipped when a known automorphism fixing
    the current prefix maps them onto an explored sibling.
    """
    n = g.n
    if n == 0:
        return []
    adj = g.adj
    best: list = [-1, None]
    seen_leaves: dict[int, list[int]] = {}
    automorphisms: list[tuple[int, ...]] = []

    def search(cells: list[list[int]], prefix: list[int]) -> None:
        cells = _refine(adj, cells)
        target_index = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target_index is None:
            order = [c[0] for c in cells]
            cert = _certificate(adj, order)
            other = seen_leaves.get(cert)
            if other is None:
                seen_leaves[cert] = order
            else:
                gamma = [0] * n
                for a, b in zip(other, order):
                    gamma[a] = b
                automorphisms.append(tuple(gamma))
            if cert > best[0]:
                best[0], best[1] = cert, order
            return
        target = cells[target_index]
        tried: list[int] = []
        for v in target:
            if tried:
                stabilizer = [a for a in automorphisms if all(a[p] == p for p in prefix)]
                if stabilizer:
                    roots = _orbit_roots(n, stabilizer)
                    if any(roots[v] == roots[w] for w in tried):
                        continue
            child = cells[:target_index] + [[v], [w for w in target if w != v]] + cells[target_index + 1:]
            search(child, prefix + [v])
            tried.append(v)

    degree_groups: dict[int, list[int]] = {}
    for v in range(n):
        degree_groups.setdefault(adj[v].bit_count(), []).append(v)
    search([degree_groups[d] for d in sorted(degree_groups)], [])
    return best[1]


def canonical_graph(g: Graph) -> Graph:
    order = canonical_order(g)
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    return g.relabel(perm)


def canonical_form(g: Graph) -> bytes:
    """Canonical label: graph6 bytes of the canonically relabeled graph."""
    if g.n > MAX_CANONICAL_ORDER:
        raise ValueError(f"canonical labeling supports order <= {MAX_CANONICAL_ORDER}, got {g.n}")
    return to_graph6(canonical_graph(g)).encode("ascii")


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_form(g) == canonical_form(h)
