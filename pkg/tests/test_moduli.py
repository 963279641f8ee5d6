"""Index-2 and index-3 configurations, chains, boundary graphs, duality."""

from __future__ import annotations

import pytest

from askein.corpus import named_entries
from askein.diagram import Cap, Cross, Cup, SliceWord, braid_word
from askein.moduli import (OPPOSITE, RIGHT_PAIR, BoundaryGraph, Chain,
                           DecoratedConfig, ModuliError, PrintedChain,
                           PrintedGraph, RealizedConfig, boundary_graph,
                           canonical_form, chain_census, dual_graph_iso,
                           harvest_decorated, has_coleaf, has_leaf,
                           ladybug_kind, ladybug_matching, match_printed_graph,
                           maximal_chains, verify_moduli)

HEXAGON_SLICE = SliceWord(2, [Cross(1, 1), Cup(1), Cross(2, 1), Cross(2, 1),
                              Cap(3)])
HEXAGON_BRAID = braid_word(2, [-1, 1, 1])

V, VM, W, WM = ("v", 1), ("v", -1), ("w", 1), ("w", -1)


def printed_graph(z1s, z2s) -> PrintedGraph:
    """The hand-drawn boundary graph shared by the two hexagon words:
    twelve chains in two 6-cycles, with the ladybug edges crossing
    between the first and last chain blocks."""
    orders = ((1, 2, 3), (1, 3, 2), (1, 2, 3), (1, 3, 2),
              (2, 1, 3), (2, 3, 1), (2, 1, 3), (2, 3, 1),
              (3, 1, 2), (3, 2, 1), (3, 1, 2), (3, 2, 1))
    chains = tuple(PrintedChain(order, z1, z2)
                   for order, z1, z2 in zip(orders, z1s, z2s))
    return PrintedGraph(
        chains,
        ((1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12), (1, 5), (3, 7)),
        ((2, 9), (4, 11), (6, 10), (8, 12)),
        ((1, 2, 9, 10, 6, 5), (3, 4, 11, 12, 8, 7)))


PRINTED_SLICE = printed_graph(
    [(V, VM), (V, VM), (VM, V), (VM, V), (V, VM), (V, VM), (VM, V), (VM, V),
     (W, WM), (W, WM), (WM, W), (WM, W)],
    [(V, WM, VM), (WM,), (VM, WM, V), (WM,), (V, WM, VM), (WM,),
     (VM, WM, V), (WM,), (WM,), (WM,), (WM,), (WM,)])

PRINTED_BRAID = printed_graph(
    [(W, WM), (W, WM), (WM, W), (WM, W), (W, WM), (W, WM), (WM, W), (WM, W),
     (V, VM), (V, VM), (VM, V), (VM, V)],
    [(W, WM, WM), (WM,), (WM, WM, W), (WM,), (W, WM, WM), (WM,),
     (WM, WM, W), (WM,), (WM,), (WM,), (WM,), (WM,)])


def named(name: str) -> SliceWord:
    return next(e.word for e in named_entries() if e.name == name)


class TestChainCounts:
    @pytest.mark.parametrize("name", ["trefoil", "figure-eight",
                                      "ladybug-two-braid", "hexagon-slice",
                                      "hexagon-two-braid"])
    def test_index2_chain_counts(self, name):
        word = named(name)
        seen = 0
        for dec in harvest_decorated(word, 2):
            seen += 1
            m = len(dec.chains())
            assert m in (2, 4)
            if m == 4:
                assert ladybug_kind(dec.cfg) is not None
        assert seen > 0

    def test_ladybug_face_on_two_braid(self):
        """The 0-state of the one-positive-one-negative word carries the
        double-split face whose matching convention matters."""
        word = named("ladybug-two-braid")
        cfg = RealizedConfig(word, 0, (0, 1))
        kind = ladybug_kind(cfg)
        assert kind is not None
        matching = ladybug_matching(cfg)
        assert sorted(matching) == sorted(matching.values())

    def test_four_chain_decorations_unique_per_ladybug_face(self):
        """The four-chain count forces the decoration: each ladybug face
        admits exactly one label pair with four chains."""
        for name in ("ladybug-two-braid", "hexagon-two-braid",
                     "hexagon-slice"):
            word = named(name)
            per_face = {}
            for dec in harvest_decorated(word, 2):
                if len(dec.chains()) == 4:
                    key = (dec.cfg.state, dec.cfg.arcs)
                    per_face.setdefault(key, []).append((dec.y, dec.x))
            for face, decs in per_face.items():
                assert len(decs) == 1, (name, face, decs)

    def test_maximal_chains_structure(self):
        word = named("hexagon-slice")
        cfg = RealizedConfig(word, 0, (0, 1, 2))
        chains = maximal_chains(cfg, 1, 0)
        assert chains
        for chain in chains:
            assert isinstance(chain, Chain)
            assert sorted(chain.order) == [0, 1, 2]

    def test_chain_census_matches_decorations(self):
        word = named("trefoil")
        cfg = RealizedConfig(word, 0, (0, 1))
        found = False
        for dec in harvest_decorated(word, 2):
            if (dec.cfg.state, dec.cfg.arcs) != (cfg.state, cfg.arcs):
                continue
            found = True
            census = chain_census(dec.cfg, dec.y)
            assert dec.chains() == census[dec.x]
            for chain in dec.chains():
                # an index-2 chain records exactly one intermediate label
                assert len(chain.mids) == 1
        assert found


class TestBoundaryGraphs:
    @pytest.mark.parametrize("name", ["trefoil", "figure-eight",
                                      "hexagon-slice", "hexagon-two-braid"])
    def test_index3_graphs(self, name):
        word = named(name)
        seen = 0
        for dec in harvest_decorated(word, 3):
            seen += 1
            graph = boundary_graph(dec.cfg, dec.y, dec.x)
            assert isinstance(graph, BoundaryGraph)
            assert graph.is_two_regular()
            assert graph.is_six_cycles()
            assert graph.covers_trivially()
        assert seen > 0

    def test_components_partition_chains(self):
        word = named("hexagon-slice")
        cfg = RealizedConfig(word, 0, (0, 1, 2))
        graph = boundary_graph(cfg, 1, 0)
        comps = graph.components()
        flattened = sorted(v for comp in comps for v in comp)
        assert flattened == list(range(len(graph.chains)))
        assert all(len(comp) == 6 for comp in comps)

    @pytest.mark.parametrize("convention", [RIGHT_PAIR, OPPOSITE])
    def test_printed_cycles_on_hexagon_slice(self, convention):
        cfg = RealizedConfig(HEXAGON_SLICE, 0, (1, 2, 0))
        match = match_printed_graph(cfg, 1, 0, {1: 1, 2: 2, 3: 0},
                                    PRINTED_SLICE, convention)
        assert match is not None

    @pytest.mark.parametrize("convention", [RIGHT_PAIR, OPPOSITE])
    def test_printed_cycles_on_hexagon_braid(self, convention):
        cfg = RealizedConfig(HEXAGON_BRAID, 0, (1, 2, 0))
        match = match_printed_graph(cfg, 1, 0, {1: 1, 2: 2, 3: 0},
                                    PRINTED_BRAID, convention)
        assert match is not None

    def test_printed_mismatch_detected(self):
        cfg = RealizedConfig(HEXAGON_SLICE, 0, (1, 2, 0))
        names = {1: 1, 2: 2, 3: 0}
        wrong_edges = PRINTED_SLICE._replace(
            plain_edges=((1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12),
                         (1, 7), (3, 5)))
        assert match_printed_graph(cfg, 1, 0, names, wrong_edges) is None
        wrong_matching = PRINTED_SLICE._replace(
            ladybug_edges=((2, 11), (4, 9), (6, 10), (8, 12)))
        assert match_printed_graph(cfg, 1, 0, names, wrong_matching) is None
        wrong_label = PRINTED_SLICE._replace(
            chains=PRINTED_SLICE.chains[:11]
            + (PRINTED_SLICE.chains[11]._replace(z1=(W, W)),))
        assert match_printed_graph(cfg, 1, 0, names, wrong_label) is None


class TestDuality:
    @pytest.mark.parametrize("name", ["trefoil", "hexagon-slice",
                                      "figure-eight"])
    def test_dual_graph_isomorphism(self, name):
        word = named(name)
        for dec in harvest_decorated(word, 3):
            assert dual_graph_iso(dec.cfg, dec.y, dec.x)
            assert dual_graph_iso(dec.cfg, dec.y, dec.x,
                                  convention=OPPOSITE)

    @pytest.mark.parametrize("name", ["trefoil", "hexagon-slice"])
    def test_dual_is_involution_up_to_isomorphism(self, name):
        word = named(name)
        for dec in harvest_decorated(word, 2):
            cfg = dec.cfg
            double = cfg.dual().dual()
            assert canonical_form(double) == canonical_form(cfg)


class TestLeaves:
    def test_leaf_classification_consistent(self):
        word = named("figure-eight")
        for dec in harvest_decorated(word, 2):
            cfg = dec.cfg
            if ladybug_kind(cfg) is not None:
                # a ladybug face has neither a leaf nor a co-leaf
                assert not has_leaf(cfg) and not has_coleaf(cfg)
                continue
            # non-ladybug index-2 faces have two chains only
            assert len(dec.chains()) == 2


class TestVerifyModuli:
    def test_hexagon_slice_verdicts(self):
        v2 = verify_moduli(HEXAGON_SLICE, 2)
        assert v2["ok"] and v2["violations"] == 0
        assert v2["configurations"] > 0
        v3 = verify_moduli(HEXAGON_SLICE, 3)
        assert v3["ok"] and v3["violations"] == 0
        assert all(e["kind"] == "hexagon" for e in v3["entries"])
        assert all(len(c["vertices"]) == 6
                   for e in v3["entries"] for c in e["cycles"])

    def test_trefoil_verdict_counts(self, trefoil):
        word = trefoil.to_slice_word()
        v2 = verify_moduli(word, 2)
        assert v2["ok"]
        assert v2["configurations"] == len(v2["entries"])

    def test_list_limit_truncates(self):
        v = verify_moduli(named("figure-eight"), 2, list_limit=3)
        assert v["truncated"] is True
        assert len(v["entries"]) == 3

    def test_invalid_index_rejected(self):
        with pytest.raises(ModuliError):
            verify_moduli(HEXAGON_SLICE, 4)
        with pytest.raises(ModuliError):
            verify_moduli(HEXAGON_SLICE, 2, convention="sideways")
