"""Named graphs, infinite families, closed-form predictors and the sporadic registry."""
from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import Graph, are_isomorphic, canonical_form, parse_graph6, to_graph6
from .packing import SequenceClass

REGISTRY_ENV = "SPACK_REGISTRY"
REGISTRY_HEADER = "# spack sporadic registry v1"

CLASS_14BAR = "S1-4bar"
CLASS_134BAR = "S1-3-4bar"
CLASS_133 = "S1-3-3"
KNOWN_CLASSES = (CLASS_14BAR, CLASS_134BAR, CLASS_133)


class ConstructionError(ValueError):
    pass


class RegistryError(RuntimeError):
    pass


def make_path(n: int) -> Graph:
    if n < 1:
        raise ConstructionError(f"path needs n >= 1, got {n}")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise ConstructionError(f"cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def make_complete(n: int) -> Graph:
    if n < 1:
        raise ConstructionError(f"complete graph needs n >= 1, got {n}")
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def make_g2k(k: int) -> Graph:
    """``P_2k`` with a pendant on each support vertex.

    Path vertices are ``0..2k-1``; the pendant at vertex 1 is ``2k`` and the
    pendant at vertex ``2k-2`` is ``2k+1``.
    """
    if k < 3:
        raise ConstructionError(f"G_2k needs k >= 3, got {k}")
    n = 2 * k
    edges = [(i, i + 1) for i in range(n - 1)] + [(1, n), (n - 2, n + 1)]
    return Graph.from_edges(n + 2, edges)


def predicted_chi_rho_cycle(n: int) -> int:
    if n < 3:
        raise ValueError("cycles need n >= 3")
    return 3 if n == 3 or n % 4 == 0 else 4


def predicted_chi_cycle_133(n: int, s4: int) -> int:
    """Packing chromatic number of ``C_n`` for ``S = (1, 3, 3, s4, ...)``."""
    if n < 3:
        raise ValueError("cycles need n >= 3")
    if n == 3 or n % 4 == 0:
        return 3
    if n % 4 in (1, 2) or s4 < n // 2:
        return 4
    return 5


def in_cycle_family(n: int, s4: int) -> bool:
    if n < 5:
        return False
    return n % 4 in (1, 2) or (n % 4 == 3 and s4 < n // 2)


# -- explicit coloring patterns ------------------------------------------------


def pattern_1213(n: int, start: int = 0) -> list[int]:
    """``1 2 1 3 1 2 1 3 ...`` of length ``n``, optionally rotated."""
    base = (1, 2, 1, 3)
    return [base[(i + start) % 4] for i in range(n)]


def cycle_pattern_133(n: int, s4: int) -> list[int]:
    """Optimal coloring of ``C_n`` (vertices in cycle order) for ``(1, 3, 3, s4, ...)``."""
    if n == 3:
        return [1, 2, 3]
    r = n % 4
    body = pattern_1213(n - r)
    if r == 0:
        return body
    if r == 1:
        return body + [4]
    if r == 2:
        return body + [1, 4]
    if s4 < n // 2:
        return cycle_4k3_coloring((n - 3) // 4)
    return body + [1, 4, 5]


def cycle_4k3_coloring(k: int) -> list[int]:
    """Piecewise 4-coloring of ``C_{4k+3}`` valid when ``s_4 < 2k + 1``."""
    if k < 1:
        raise ValueError("needs k >= 1")
    n = 4 * k + 3
    mid = 2 * k + 1
    out = []
    for i in range(n):
        if i in (mid, 4 * k + 2):
            out.append(4)
        elif i % 4 == 0 or i % 4 == 2:
            out.append(1)
        elif (i % 4 == 3 and i < mid) or (i % 4 == 1 and i > mid):
            out.append(2)
        else:
            out.append(3)
    return out


def g2k_coloring(k: int) -> list[int]:
    """4-coloring of :func:`make_g2k` labels: path ``1 2 1 3 ...``, pendants 1 and 4."""
    return pattern_1213(2 * k) + [1, 4]


# -- structural sketches of the figure-only graphs ----------------------------
#
# Rebuilt from the adjacency facts stated in the proofs. They only serve to
# name graphs recovered by the census; the census set itself is authoritative.


def _g(n: int, edges: str) -> Graph:
    return Graph.from_edges(n, [(ord(e[0]) - 97, ord(e[1]) - 97) for e in edges.split()])


SKETCHES: dict[str, Graph] = {
    # diamond abcd (chord bd) with a pendant on a degree-2 vertex
    "H1": _g(5, "ab bc cd da bd ae"),
    # two triangles sharing one vertex
    "H2": _g(5, "ab bc ca ad de ea"),
    # triangle, every corner of degree 3
    "H3": _g(6, "ab bc ca ad be cf"),
    # triangle abc with a path b-d-e, d(a) = 2
    "H4": _g(5, "ab bc ca bd de"),
    # 4-cycle with pendants at two adjacent vertices
    "H5": _g(6, "ab bc cd da be cf"),
    # 4-cycle with a 2-vertex tail
    "H6": _g(6, "ab bc cd da ce ef"),
    # H6 plus ae
    "H7": _g(6, "ab bc cd da ce ef ae"),
    # P5 with a pendant at its centre
    "H8": _g(6, "ab bc cd de cf"),
    # 4-cycle with a 4-vertex tail
    "H9": _g(8, "ab bc cd da ce ef fg gh"),
    # H9 closed into two 4-cycles joined by an edge; not critical
    "H10": _g(8, "ab bc cd da ce ef fg gh eh"),
    # 4-cycle with 2-vertex tails at opposite vertices
    "H11": _g(8, "ab bc cd da ce ef ag gh"),
    # P7 abcdefg with a pendant on e, a neighbour of the centre
    "H12": _g(8, "ab bc cd de ef fg eh"),
    # P6 with pendants at b and e
    "H13": _g(8, "ab bc cd de ef bg eh"),
    # edge ac, a has x1 = b, x2 = d; c has y1 = e, y2 = f; x1' = g on b
    "H14": _g(7, "ac ab ad ce cf bg"),
    # H14 plus x1'x2
    "H15": _g(7, "ac ab ad ce cf bg gd"),
}

NON_CRITICAL_SKETCHES = ("H10",)
NON_CRITICAL_KEY = "noncritical"


def named_graphs() -> dict[str, Graph]:
    """Fixed named graphs appearing in the characterizations."""
    return {
        "K4": make_complete(4),
        "C5": make_cycle(5),
        "C6": make_cycle(6),
        "C8": make_cycle(8),
        "P6": make_path(6),
        "P8": make_path(8),
    }


def identify(g: Graph) -> str | None:
    """Name of a known named graph or sketch isomorphic to ``g``."""
    for name, h in {**named_graphs(), **SKETCHES}.items():
        if name not in NON_CRITICAL_SKETCHES and are_isomorphic(g, h):
            return name
    return None


# -- registry -----------------------------------------------------------------


@dataclass(frozen=True)
class RegistryEntry:
    cls: str
    name: str
    graph6: str

    @property
    def graph(self) -> Graph:
        return parse_graph6(self.graph6)

    @property
    def order(self) -> int:
        return self.graph.n


def registry_path() -> Path:
    override = os.environ.get(REGISTRY_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("spack") / "data" / "registry.tsv"))


def load_registry(path: str | Path | None = None) -> dict[str, list[RegistryEntry]]:
    path = Path(path) if path is not None else registry_path()
    if not path.exists():
        raise RegistryError(
            f"sporadic registry not found at {path}; run `spack pin` to build it"
        )
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != REGISTRY_HEADER:
        raise RegistryError(f"{path}: missing or unknown registry header")
    out: dict[str, list[RegistryEntry]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise RegistryError(f"{path}:{lineno}: expected class<TAB>name<TAB>graph6")
        entry = RegistryEntry(*parts)
        parse_graph6(entry.graph6)
        out.setdefault(entry.cls, []).append(entry)
    return out


def write_registry(entries: list[RegistryEntry], path: str | Path) -> None:
    lines = [REGISTRY_HEADER]
    lines += [f"{e.cls}\t{e.name}\t{e.graph6}" for e in entries]
    Path(path).write_text("\n".join(lines) + "\n")


def class_key(cls: SequenceClass | str) -> str:
    """Registry key; pins beyond ``s_3`` (the ``s_4`` parameter) are dropped."""
    if isinstance(cls, str):
        cls = SequenceClass.parse(cls)
    return SequenceClass(cls.constraints[:3]).name() if len(cls.constraints) > 3 else cls.name()


def expected_critical_set(
    cls: SequenceClass | str,
    s4: int | None,
    max_order: int,
    registry: dict[str, list[RegistryEntry]] | None = None,
) -> list[tuple[str, Graph]]:
    """Graphs of order ``<= max_order`` that the characterization lists as 4-critical."""
    if max_order < 4:
        raise ValueError("max_order must be >= 4")
    key = class_key(cls)
    registry = registry if registry is not None else load_registry()
    if key not in registry:
        raise RegistryError(f"registry has no entries for class {key}; run `spack pin`")
    out = [(e.name, e.graph) for e in registry[key] if e.order <= max_order]
    if key == CLASS_133:
        if s4 is None:
            raise ValueError(f"class {key} needs s4")
        out += [(f"C{n}", make_cycle(n)) for n in range(5, max_order + 1) if in_cycle_family(n, s4)]
        out += [(f"G{2 * k}", make_g2k(k)) for k in range(3, max_order) if 2 * k + 2 <= max_order]
    labels = [canonical_form(g) for _, g in out]
    if len(set(labels)) != len(labels):
        raise RegistryError(f"expected set for {key} contains isomorphic duplicates")
    return out


def registry_entry(cls: str, name: str, g: Graph) -> RegistryEntry:
    return RegistryEntry(cls, name, to_graph6(g))
