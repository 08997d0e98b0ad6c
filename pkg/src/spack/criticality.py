"""Vertex-criticality verdicts with per-vertex certificates."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, delete_vertex
from .packing import PackingSequence
from .solver import Coloring, _Engine, chi_S


@dataclass(frozen=True)
class VertexDeletion:
    vertex: int
    chi: int
    witness: Coloring  # coloring of G - vertex, gap-closed labels


@dataclass(frozen=True)
class CriticalityVerdict:
    chi: int
    is_critical: bool
    per_vertex: tuple[VertexDeletion, ...]

    def first_non_decreasing(self) -> int | None:
        for d in self.per_vertex:
            if d.chi >= self.chi:
                return d.vertex
        return None


def is_vertex_critical(g: Graph, s: PackingSequence) -> CriticalityVerdict:
    """Solve ``G`` and every ``G - u``; all certificates are kept.

    The empty graph has chi 0, so ``K_1`` is 1-critical.
    """
    if g.n < 1:
        raise ValueError("criticality needs at least one vertex")
    whole = chi_S(g, s)
    deletions = []
    for u in range(g.n):
        sub = chi_S(delete_vertex(g, u), s)
        deletions.append(VertexDeletion(u, sub.chi, sub.witness))
    critical = all(d.chi < whole.chi for d in deletions)
    return CriticalityVerdict(whole.chi, critical, tuple(deletions))


def criticality_class(g: Graph, s: PackingSequence, target: int) -> bool:
    """True iff ``chi_S(G) == target`` and ``G`` is vertex-critical.

    Uses decision calls only: no ``(target-1)``-coloring of ``G``, a
    ``target``-coloring of ``G``, and a ``(target-1)``-coloring of each ``G - u``.
    """
    if target < 1:
        raise ValueError("target must be >= 1")
    if g.n < target:
        return False
    engine = _Engine(g)
    if engine.decide(s, target - 1) is not None:
        return False
    if engine.decide(s, target) is None:
        return False
    for u in range(g.n):
        if _Engine(delete_vertex(g, u)).decide(s, target - 1) is None:
            return False
    return True
