from __future__ import annotations

import itertools

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from oracles import to_nx
from spack.criticality import is_vertex_critical
from spack.families import (
    CLASS_14BAR,
    CLASS_133,
    CLASS_134BAR,
    KNOWN_CLASSES,
    NON_CRITICAL_KEY,
    SKETCHES,
    ConstructionError,
    RegistryError,
    cycle_4k3_coloring,
    cycle_pattern_133,
    expected_critical_set,
    g2k_coloring,
    identify,
    in_cycle_family,
    load_registry,
    make_complete,
    make_cycle,
    make_g2k,
    make_path,
    pattern_1213,
    predicted_chi_cycle_133,
    predicted_chi_rho_cycle,
    write_registry,
)
from spack.graph import Graph, all_pairs_distances, are_isomorphic, delete_vertex
from spack.packing import PackingSequence
from spack.solver import Coloring, alpha_k, is_valid_coloring

P = PackingSequence.of


class TestConstructors:
    def test_small_cases(self):
        assert make_path(2) == make_complete(2)
        assert make_cycle(3) == make_complete(3)
        assert make_complete(4).num_edges == 6

    @pytest.mark.parametrize("fn, n", [(make_path, 0), (make_cycle, 2), (make_complete, 0), (make_g2k, 2)])
    def test_minimum_order(self, fn, n):
        with pytest.raises(ConstructionError):
            fn(n)

    def test_g2k_k3(self):
        g = make_g2k(3)
        assert g.n == 8 and g.num_edges == 7
        assert sorted(g.degrees()) == [1, 1, 1, 1, 2, 2, 3, 3]
        assert g.has_edge(1, 6) and g.has_edge(4, 7)

    def test_g2k_k4(self):
        g = make_g2k(4)
        assert g.n == 10
        assert all_pairs_distances(g).diameter() == 7
        assert nx.diameter(to_nx(g)) == 7

    @pytest.mark.parametrize("k", range(3, 9))
    def test_g2k_is_a_tree_with_two_degree_3_vertices(self, k):
        h = to_nx(make_g2k(k))
        assert nx.is_tree(h)
        assert [d for _, d in h.degree()].count(3) == 2


class TestPredictors:
    @pytest.mark.parametrize("n, expect", [(3, 3), (8, 3), (5, 4), (6, 4), (7, 4), (12, 3)])
    def test_rho_cycle(self, n, expect):
        assert predicted_chi_rho_cycle(n) == expect

    @pytest.mark.parametrize("n, s4, expect", [(8, 3, 3), (8, 99, 3), (7, 3, 5), (11, 4, 4), (11, 5, 5), (3, 3, 3), (9, 3, 4)])
    def test_cycle_133(self, n, s4, expect):
        assert predicted_chi_cycle_133(n, s4) == expect

    @pytest.mark.parametrize("n, s4, expect", [(5, 3, True), (8, 3, False), (7, 3, False), (15, 5, True), (4, 3, False), (6, 9, True)])
    def test_cycle_family(self, n, s4, expect):
        assert in_cycle_family(n, s4) is expect

    def test_invalid(self):
        with pytest.raises(ValueError):
            predicted_chi_rho_cycle(2)
        with pytest.raises(ValueError):
            predicted_chi_cycle_133(2, 3)


class TestPatterns:
    def test_1213(self):
        assert pattern_1213(6) == [1, 2, 1, 3, 1, 2]
        assert pattern_1213(3, start=1) == [2, 1, 3]

    @pytest.mark.parametrize("n", range(3, 25))
    @pytest.mark.parametrize("s4", [3, 4, 5, 10])
    def test_cycle_pattern_is_valid_and_tight(self, n, s4):
        c = Coloring(tuple(cycle_pattern_133(n, s4)))
        assert is_valid_coloring(make_cycle(n), None, P(1, 3, 3, s4), c)
        assert c.k == predicted_chi_cycle_133(n, s4)

    @pytest.mark.parametrize("k", range(2, 8))
    def test_4k3_piecewise(self, k):
        n = 4 * k + 3
        c = Coloring(tuple(cycle_4k3_coloring(k)))
        assert c.k == 4
        assert is_valid_coloring(make_cycle(n), None, P(1, 3, 3, 2 * k), c)
        # s_4 = floor(n/2) is the first value where the two 4s clash
        assert not is_valid_coloring(make_cycle(n), None, P(1, 3, 3, 2 * k + 1), c)

    @pytest.mark.parametrize("k", range(3, 9))
    def test_g2k_coloring(self, k):
        c = Coloring(tuple(g2k_coloring(k)))
        assert is_valid_coloring(make_g2k(k), None, P(1, 3, 3, 3), c)


# Reference certificates: colorings of G - x listed over the remaining
# vertices in alphabetical order, plus an optional coloring of G itself.
CERTIFICATES = {
    "H1": (P(1, 4, 4, 4), None, {"a": "1231", "b": "1132", "c": "1232", "e": "1213"}),
    "H2": (P(1, 4, 4, 4), None, {"a": "2113", "b": "2113"}),
    "H3": (P(1, 4, 4, 4), None, {"a": "23111", "d": "12311"}),
    "H4": (P(1, 4, 4, 4), None, {"a": "3112", "b": "2112", "d": "2132", "e": "2311"}),
    "H5": (P(1, 4, 4, 4), None, {"a": "12113", "b": "32113", "f": "31211"}),
    "H6": (P(1, 4, 4, 4), None, {"a": "12113", "b": "11231", "c": "21113", "e": "31213", "f": "31211"}),
    "H7": (P(1, 4, 4, 4), None, {"a": "12113", "b": "12311", "c": "21113", "e": "12131"}),
    "H8": (P(1, 4, 4, 4), None, {"a": "12131", "b": "22131", "c": "21131", "f": "12131"}),
    "H9": (P(1, 3, 4, 4), "21311214", {
        "a": "1211312", "c": "2111213", "d": "1213121", "e": "2131213",
        "f": "2131113", "g": "2131123", "h": "2131121"}),
    "H11": (P(1, 3, 4, 4), "21311214", {"a": "1311213", "d": "1312121", "g": "2131123", "h": "2131121"}),
    "H12": (P(1, 3, 4, 4), "41213121", {
        "a": "1213121", "b": "3213121", "c": "3113121", "d": "3123121",
        "e": "3121121", "f": "2131221", "g": "2131211", "h": "1213121"}),
    "H13": (P(1, 3, 4, 4), "12131214", {"b": "1312111", "c": "1312111", "g": "2131211"}),
    "H14": (P(1, 3, 4, 4), "2131214", {
        "a": "123111", "b": "223111", "c": "123111", "d": "213211", "f": "121311", "g": "213121"}),
    "H15": (P(1, 3, 4, 4), "4121311", {"a": "121311", "b": "112311", "c": "211311", "e": "131211", "f": "213112"}),
}


def _certificates_hold(g: Graph, s, full, deletions, letter_to_vertex) -> bool:
    n = g.n
    if full is not None:
        colors = [0] * n
        for letter, col in enumerate(full):
            colors[letter_to_vertex[letter]] = int(col)
        if not is_valid_coloring(g, None, s, Coloring(tuple(colors))):
            return False
    for x, text in deletions.items():
        xl = ord(x) - 97
        xv = letter_to_vertex[xl]
        h = delete_vertex(g, xv)
        index = {v: i for i, v in enumerate(v for v in range(n) if v != xv)}
        colors = [0] * (n - 1)
        remaining = [letter_to_vertex[l] for l in range(n) if l != xl]
        for v, col in zip(remaining, text):
            colors[index[v]] = int(col)
        if not is_valid_coloring(h, None, s, Coloring(tuple(colors))):
            return False
    return True


@pytest.mark.parametrize("name", sorted(CERTIFICATES, key=lambda k: int(k[1:])))
def test_sketch_realizes_reference_certificates(name):
    # some labeling of the sketch must make every listed coloring valid
    s, full, deletions = CERTIFICATES[name]
    g = SKETCHES[name]
    assert any(
        _certificates_hold(g, s, full, deletions, perm)
        for perm in itertools.permutations(range(g.n))
    )


class TestSketches:
    ORDERS = {"H1": 5, "H2": 5, "H4": 5, "H3": 6, "H5": 6, "H6": 6, "H7": 6, "H8": 6,
              "H14": 7, "H15": 7, "H9": 8, "H10": 8, "H11": 8, "H12": 8, "H13": 8}

    def test_orders(self):
        assert {k: g.n for k, g in SKETCHES.items()} == self.ORDERS

    def test_pairwise_non_isomorphic(self):
        names = sorted(SKETCHES)
        for a, b in itertools.combinations(names, 2):
            assert not are_isomorphic(SKETCHES[a], SKETCHES[b]), (a, b)

    def test_alpha(self):
        assert alpha_k(SKETCHES["H6"], 1)[0] == alpha_k(SKETCHES["H8"], 1)[0] == 3

    def test_h10_not_critical(self):
        g = SKETCHES["H10"]
        for s in (P(1, 3, 4, 4), P(1, 4, 4, 4), P(1, 3, 3, 3)):
            assert not is_vertex_critical(g, s).is_critical
        # deleting g still leaves a copy of H15
        rest = to_nx(delete_vertex(g, 6))
        assert GraphMatcher(rest, to_nx(SKETCHES["H15"])).subgraph_is_monomorphic()

    def test_h13_is_g6(self):
        assert are_isomorphic(SKETCHES["H13"], make_g2k(3))

    def test_identify(self):
        assert identify(make_cycle(5).relabel([2, 0, 4, 1, 3])) == "C5"
        assert identify(SKETCHES["H7"]) == "H7"
        assert identify(SKETCHES["H10"]) is None
        assert identify(make_path(3)) is None


class TestRegistry:
    def test_shipped_registry_shape(self, registry):
        assert set(registry) == set(KNOWN_CLASSES) | {NON_CRITICAL_KEY}
        counts = {k: len(v) for k, v in registry.items()}
        assert counts == {CLASS_14BAR: 19, CLASS_134BAR: 24, CLASS_133: 16, NON_CRITICAL_KEY: 1}

    def test_entries_non_isomorphic_within_class(self, registry):
        for entries in registry.values():
            graphs = [e.graph for e in entries]
            for a, b in itertools.combinations(graphs, 2):
                assert not nx.is_isomorphic(to_nx(a), to_nx(b))

    def test_names_match_structure(self, registry):
        for key in KNOWN_CLASSES:
            for e in registry[key]:
                if e.name.startswith("CF"):
                    order = int(e.name[2])
                    assert e.order == order
                    assert to_nx(e.graph).number_of_edges() > order
                else:
                    ref = {**SKETCHES, "K4": make_complete(4), "C5": make_cycle(5), "C6": make_cycle(6),
                           "C8": make_cycle(8), "P6": make_path(6), "P8": make_path(8)}[e.name]
                    assert nx.is_isomorphic(to_nx(e.graph), to_nx(ref))

    def test_cycle_family_members(self, registry):
        cf5 = [e.graph for e in registry[CLASS_14BAR] if e.name.startswith("CF5")]
        cf6 = [e.graph for e in registry[CLASS_14BAR] if e.name.startswith("CF6")]
        assert len(cf5) == 4 and len(cf6) == 3
        for g in cf5 + cf6:
            assert nx.is_biconnected(to_nx(g))

    def test_expected_sets(self, registry):
        assert len(expected_critical_set(CLASS_14BAR, None, 8, registry)) == 19
        assert len(expected_critical_set(CLASS_134BAR, None, 8, registry)) == 24
        names = {n for n, _ in expected_critical_set(CLASS_133, 3, 8, registry)}
        assert {"K4", "C5", "C6", "G6"} <= names and "C7" not in names
        assert "C7" in {n for n, _ in expected_critical_set(CLASS_133, 2, 7, registry)}
        small = expected_critical_set(CLASS_14BAR, None, 5, registry)
        assert all(g.n <= 5 for _, g in small)

    def test_expected_set_errors(self, registry):
        with pytest.raises(ValueError):
            expected_critical_set(CLASS_133, None, 8, registry)
        with pytest.raises(RegistryError):
            expected_critical_set(CLASS_14BAR, None, 8, {})
        with pytest.raises(ValueError):
            expected_critical_set(CLASS_14BAR, None, 3, registry)

    def test_round_trip_and_env_override(self, registry, tmp_path, monkeypatch):
        path = tmp_path / "reg.tsv"
        write_registry([e for v in registry.values() for e in v], path)
        monkeypatch.setenv("SPACK_REGISTRY", str(path))
        assert load_registry() == registry

    def test_malformed(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("wrong header\n")
        with pytest.raises(RegistryError):
            load_registry(bad)
        bad.write_text("# spack sporadic registry v1\nS1-4bar\tK4\n")
        with pytest.raises(RegistryError):
            load_registry(bad)
        with pytest.raises(RegistryError):
            load_registry(tmp_path / "missing.tsv")
