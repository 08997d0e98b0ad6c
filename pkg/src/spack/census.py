"""Small-graph census: enumeration, classification, persistence and theorem checks."""
from __future__ import annotations

import itertools
import re
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator

from . import __version__
from .criticality import criticality_class, is_vertex_critical
from .families import (
    CLASS_133,
    NON_CRITICAL_KEY,
    NON_CRITICAL_SKETCHES,
    KNOWN_CLASSES,
    SKETCHES,
    RegistryEntry,
    RegistryError,
    class_key,
    expected_critical_set,
    identify,
    in_cycle_family,
    load_registry,
    make_cycle,
    make_g2k,
)
from .graph import Graph, Graph6Error, canonical_form, canonical_graph, is_connected, parse_graph6, to_graph6
from .packing import PackingSequence, SequenceClass, class_representatives

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_ENUMERATION_ORDER = 9
CONNECTED_COUNTS = (1, 1, 2, 6, 21, 112, 853, 11117, 261080)


class CensusError(RuntimeError):
    pass


class SchemaError(CensusError):
    pass


# -- enumeration ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _connected_level(n: int) -> tuple[str, ...]:
    """Canonical graph6 strings of the connected graphs of order ``n``, sorted.

    Every connected graph has a vertex whose removal keeps it connected, so
    extending each order ``n - 1`` class by one vertex with a non-empty
    neighbourhood reaches every class; the canonical label keeps one copy.
    """
    if n == 1:
        return (to_graph6(Graph.empty(1)),)
    found: set[bytes] = set()
    for parent_code in _connected_level(n - 1):
        parent = parse_graph6(parent_code)
        for mask in range(1, 1 << (n - 1)):
            found.add(canonical_form(parent.add_vertex(mask)))
    return tuple(sorted(label.decode() for label in found))


def enumerate_connected(n: int) -> Iterator[Graph]:
    if not 1 <= n <= MAX_ENUMERATION_ORDER:
        raise CensusError(
            f"built-in enumeration covers orders 1..{MAX_ENUMERATION_ORDER}; ingest a graph6 file for n = {n}"
        )
    for code in _connected_level(n):
        yield parse_graph6(code)


def enumerate_up_to(cap: int) -> Iterator[Graph]:
    for n in range(1, cap + 1):
        yield from enumerate_connected(n)


@dataclass
class IngestDiagnostic:
    line: int
    message: str


def ingest_graph6(
    path: str | Path,
    *,
    fail_fast: bool = False,
    dedup: bool = False,
    diagnostics: list[IngestDiagnostic] | None = None,
) -> Iterator[Graph]:
    """Graphs from a graph6 file in file order; bad lines are reported by line number."""
    seen: set[bytes] = set()
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                g = parse_graph6(text)
            except Graph6Error as exc:
                if fail_fast:
                    raise Graph6Error(f"{path}:{lineno}: {exc}") from exc
                log.warning("%s:%d: %s", path, lineno, exc)
                if diagnostics is not None:
                    diagnostics.append(IngestDiagnostic(lineno, str(exc)))
                continue
            if dedup:
                label = canonical_form(g)
                if label in seen:
                    continue
                seen.add(label)
            yield g


# -- classification ---------------------------------------------------------------


@dataclass(frozen=True)
class SequenceResult:
    sequence: str
    chi: int
    critical: bool


@dataclass(frozen=True)
class CensusRecord:
    graph6: str
    order: int
    canonical: str
    per_sequence: tuple[SequenceResult, ...]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "graph6": self.graph6,
            "order": self.order,
            "canonical": self.canonical,
            "results": {r.sequence: {"chi": r.chi, "critical": r.critical} for r in self.per_sequence},
        }

    @classmethod
    def from_json(cls, obj: dict) -> CensusRecord:
        if obj.get("schema") != SCHEMA_VERSION:
            raise SchemaError(f"record schema {obj.get('schema')!r} != {SCHEMA_VERSION}")
        results = tuple(
            SequenceResult(seq, int(r["chi"]), bool(r["critical"])) for seq, r in obj["results"].items()
        )
        return cls(obj["graph6"], int(obj["order"]), obj["canonical"], results)


def classify_one(g: Graph, sequences: list[PackingSequence]) -> CensusRecord:
    results = []
    for s in sequences:
        verdict = is_vertex_critical(g, s)
        results.append(SequenceResult(s.text(), verdict.chi, verdict.is_critical))
    return CensusRecord(to_graph6(g), g.n, canonical_form(g).decode(), tuple(results))


def _classify_code(args: tuple[str, tuple[str, ...]]) -> CensusRecord:
    code, seq_texts = args
    return classify_one(parse_graph6(code), [PackingSequence.parse(t) for t in seq_texts])


def classify(
    graphs: Iterable[Graph], sequences: list[PackingSequence], jobs: int = 1
) -> Iterator[CensusRecord]:
    """One record per input graph, in input order."""
    if not sequences:
        raise ValueError("at least one sequence is required")
    if jobs <= 1:
        for g in graphs:
            yield classify_one(g, sequences)
        return
    texts = tuple(s.text() for s in sequences)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        work = ((to_graph6(g), texts) for g in graphs)
        yield from pool.map(_classify_code, work, chunksize=16)


# -- persistence --------------------------------------------------------------------


def persist(records: Iterable[CensusRecord], path: str | Path) -> int:
    count = 0
    with open(path, "w") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json(), sort_keys=True) + "\n")
            count += 1
    return count


def load(path: str | Path) -> Iterator[CensusRecord]:
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield CensusRecord.from_json(json.loads(line))
            except SchemaError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc


def manifest_for(sequences: list[PackingSequence], cap: int) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "sequences": [s.text() for s in sequences],
        "order_cap": cap,
        "version": __version__,
    }


def run_census(
    cap: int, sequences: list[PackingSequence], out: str | Path, jobs: int = 1
) -> list[CensusRecord]:
    """Classify every connected graph of order ``<= cap`` into ``out`` (JSONL).

    A ``<out>.manifest.json`` describes the run; if it matches, records
    already present in ``out`` are reused rather than re-solved. The output is
    sorted by canonical label, so reruns are byte-identical.
    """
    out = Path(out)
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest = manifest_for(sequences, cap)
    done: dict[str, CensusRecord] = {}
    if out.exists() and manifest_path.exists():
        if json.loads(manifest_path.read_text()) == manifest:
            done = {r.canonical: r for r in load(out)}
    todo = [g for g in enumerate_up_to(cap) if canonical_form(g).decode() not in done]
    for record in classify(todo, sequences, jobs=jobs):
        done[record.canonical] = record
    records = [done[k] for k in sorted(done, key=lambda c: (len(c), c))]
    persist(records, out)
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return records


# -- theorem verification -------------------------------------------------------------


def known_class(name: str, s4: int | None = None) -> SequenceClass:
    key = class_key(name)
    if key not in KNOWN_CLASSES:
        raise CensusError(f"unknown class {name!r}; expected one of {', '.join(KNOWN_CLASSES)}")
    cls = SequenceClass.parse(key)
    if key == CLASS_133:
        if s4 is None:
            raise CensusError(f"class {key} needs --s4")
        if s4 < 3:
            raise CensusError("s4 must be >= 3 in class S1-3-3")
        cls = cls.pin(4, s4)
    return cls


@dataclass(frozen=True)
class ClassVerdict:
    canonical: str
    critical: bool
    anomaly: bool
    votes: tuple[bool, ...]


def class_verdict(g: Graph, reps: list[PackingSequence], all_reps: bool) -> ClassVerdict:
    """4-critical for the class iff 4-critical under every representative.

    With ``all_reps`` false the remaining representatives are skipped once
    the first says "not critical".
    """
    votes = [criticality_class(g, reps[0], 4)]
    if all_reps or votes[0]:
        votes += [criticality_class(g, s, 4) for s in reps[1:]]
    return ClassVerdict(canonical_form(g).decode(), all(votes), len(set(votes)) > 1, tuple(votes))


def _class_verdict_code(args: tuple[str, tuple[str, ...], bool]) -> ClassVerdict:
    code, texts, all_reps = args
    return class_verdict(parse_graph6(code), [PackingSequence.parse(t) for t in texts], all_reps)


@dataclass
class VerificationReport:
    cls: str
    s4: int | None
    order_cap: int
    representatives: list[str]
    graphs_checked: int
    found: dict[str, str]
    expected: dict[str, str]
    anomalies: list[str] = field(default_factory=list)

    @property
    def missing(self) -> list[str]:
        return sorted(set(self.expected) - set(self.found))

    @property
    def extra(self) -> list[str]:
        return sorted(set(self.found) - set(self.expected))

    @property
    def passed(self) -> bool:
        return not self.missing and not self.extra

    def summary(self) -> dict:
        return {
            "class": self.cls,
            "s4": self.s4,
            "order_cap": self.order_cap,
            "representatives": self.representatives,
            "graphs_checked": self.graphs_checked,
            "found": {k: self.found[k] for k in sorted(self.found)},
            "expected": {k: self.expected[k] for k in sorted(self.expected)},
            "missing": self.missing,
            "extra": self.extra,
            "anomalies": self.anomalies,
            "verdict": "pass" if self.passed else "fail",
        }

    def text(self) -> str:
        head = f"class {self.cls}" + (f", s4 = {self.s4}" if self.s4 is not None else "")
        lines = [
            f"{head}, order <= {self.order_cap}: {self.graphs_checked} connected graphs",
            f"representatives: {' '.join(self.representatives)}",
            f"found {len(self.found)} 4-critical classes, expected {len(self.expected)}",
        ]
        for label in sorted(self.found, key=lambda c: (len(c), c)):
            lines.append(f"  {self.found[label]:<8} {label}")
        for label in self.missing:
            lines.append(f"  MISSING {self.expected[label]} {label}")
        for label in self.extra:
            lines.append(f"  EXTRA   {label}")
        for label in self.anomalies:
            lines.append(f"  ANOMALY representatives disagree on {label}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def find_class_critical(
    cls: SequenceClass,
    order_cap: int,
    graphs: Iterable[Graph] | None = None,
    jobs: int = 1,
    all_reps_max_order: int = 7,
) -> tuple[list[ClassVerdict], list[str], int]:
    """Class-level 4-critical verdicts over all connected graphs of order ``<= order_cap``.

    Returns the critical verdicts, the representative texts and the number
    of graphs examined.
    """
    reps = class_representatives(cls, 4, max(order_cap - 1, 1))
    texts = tuple(s.text() for s in reps)
    graphs = list(graphs) if graphs is not None else list(enumerate_up_to(order_cap))
    args = [(to_graph6(g), texts, g.n <= all_reps_max_order) for g in graphs]
    if jobs <= 1:
        verdicts = [_class_verdict_code(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(_class_verdict_code, args, chunksize=64))
    return verdicts, list(texts), len(graphs)


def verify_theorem(
    cls: SequenceClass | str,
    s4: int | None,
    order_cap: int,
    registry: dict[str, list[RegistryEntry]] | None = None,
    graphs: Iterable[Graph] | None = None,
    jobs: int = 1,
) -> VerificationReport:
    """Compare the census critical set of a known class against the characterization."""
    if isinstance(cls, str):
        cls = known_class(cls, s4)
    key = class_key(cls)
    if registry is None:
        registry = load_registry()
    if key not in registry:
        raise RegistryError(f"registry has no entries for {key}; run `spack pin` first")
    expected = {canonical_form(g).decode(): name for name, g in expected_critical_set(key, s4, order_cap, registry)}
    verdicts, texts, checked = find_class_critical(cls, order_cap, graphs, jobs)
    found = {}
    for v in verdicts:
        if v.critical:
            found[v.canonical] = expected.get(v.canonical) or identify(parse_graph6(v.canonical)) or "?"
    anomalies = [v.canonical for v in verdicts if v.anomaly]
    return VerificationReport(key, s4, order_cap, texts, checked, found, expected, anomalies)


# -- registry pinning ---------------------------------------------------------------------


def has_spanning_cycle(g: Graph) -> bool:
    if g.n < 3:
        return False
    for rest in itertools.permutations(range(1, g.n)):
        if rest[0] > rest[-1]:
            continue
        path = (0,) + rest
        if all(g.has_edge(path[i], path[(i + 1) % g.n]) for i in range(g.n)):
            return True
    return False


def family_member_name(g: Graph, cls_key: str, s4: int | None) -> str | None:
    """Name of ``g`` if it belongs to an infinite family of the class."""
    if cls_key != CLASS_133:
        return None
    for n in range(5, g.n + 1):
        if n == g.n and in_cycle_family(n, s4) and canonical_form(g) == canonical_form(make_cycle(n)):
            return f"C{n}"
    if g.n % 2 == 0 and g.n >= 8 and canonical_form(g) == canonical_form(make_g2k(g.n // 2 - 1)):
        return f"G{g.n - 2}"
    return None


def sporadic_names(graphs: Iterable[Graph]) -> dict[str, str]:
    """Names for sporadic graphs keyed by canonical label.

    Known graphs get their sketch name; Hamiltonian graphs of order 5 or 6
    other than the cycle get ``CF5-i`` / ``CF6-i`` by edge count then label;
    anything else is ``X-i``.
    """
    names: dict[str, str] = {}
    pending: dict[str, list[Graph]] = {"CF5": [], "CF6": [], "X": []}
    queued: set[str] = set()
    for g in graphs:
        label = canonical_form(g).decode()
        if label in names or label in queued:
            continue
        queued.add(label)
        name = identify(g)
        if name is not None:
            names[label] = name
        elif g.n in (5, 6) and has_spanning_cycle(g):
            pending[f"CF{g.n}"].append(g)
        else:
            pending["X"].append(g)
    for prefix, items in pending.items():
        items.sort(key=lambda h: (h.num_edges, canonical_form(h)))
        for i, h in enumerate(items, start=1):
            names[canonical_form(h).decode()] = f"{prefix}-{i}"
    return names


def pin_registry(order_cap: int = 8, s4: int = 3, jobs: int = 1) -> list[RegistryEntry]:
    """Run the class census and keep the sporadic part as registry entries."""
    per_class: dict[str, list[Graph]] = {}
    for key in KNOWN_CLASSES:
        cls = known_class(key, s4 if key == CLASS_133 else None)
        verdicts, _, _ = find_class_critical(cls, order_cap, jobs=jobs)
        for v in verdicts:
            if v.anomaly:
                raise CensusError(f"representatives disagree on {v.canonical} in {key}")
        graphs = [parse_graph6(v.canonical) for v in verdicts if v.critical]
        per_class[key] = [g for g in graphs if family_member_name(g, key, s4) is None]
    names = sporadic_names(g for gs in per_class.values() for g in gs)
    entries = []
    for key in KNOWN_CLASSES:
        graphs = sorted(per_class[key], key=lambda g: _name_key(names[canonical_form(g).decode()]))
        for g in graphs:
            entries.append(RegistryEntry(key, names[canonical_form(g).decode()], to_graph6(g)))
    for name in NON_CRITICAL_SKETCHES:
        entries.append(RegistryEntry(NON_CRITICAL_KEY, name, to_graph6(canonical_graph(SKETCHES[name]))))
    return entries


def _name_key(name: str) -> tuple:
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name))


def sporadic_union(registry: dict[str, list[RegistryEntry]]) -> set[str]:
    """Canonical labels of every sporadic 4-critical graph over the known classes."""
    return {canonical_form(e.graph).decode() for key in KNOWN_CLASSES for e in registry.get(key, [])}


def check_connected(graphs: Iterable[Graph]) -> bool:
    return all(is_connected(g) for g in graphs)
