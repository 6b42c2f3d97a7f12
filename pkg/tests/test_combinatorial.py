"""Walk enumeration, signed counting and the verdicts they support."""

import pytest

from netident import (
    Assignment,
    Edge,
    IDENTIFIABLE,
    INCONCLUSIVE,
    NOT_IDENTIFIABLE,
    DECOUPLED_GENERIC,
    GLOBAL_SEPARABLE,
    NetworkModel,
    NoUnknownEdgesError,
    NotBijectiveError,
    NotSquareError,
    PathCollection,
    collection_assignment,
    collection_monomial,
    collection_sign,
    combinatorial_verdict,
    enumerate_walks,
    exhaustive_degree_bound,
    format_monomial,
    format_walk,
    generic_det_nonzero,
    local_identifiability,
    monomial_degree,
    monomial_of,
    necessary_condition_any_topology,
    repetition_table,
    separate,
    sign_of,
    verdict_from_table,
    walk_nodes,
)

from corpus import (
    bipartite_net,
    chain_net,
    cyclic9_net,
    fan_net,
    minimal_net,
    separable_square_corpus,
    unreachable_net,
)


def cancel_net() -> NetworkModel:
    """Two relays, two unknowns from the same tail: the only monomial cancels."""
    return NetworkModel(
        6,
        [
            Edge(0, 2, known=True),
            Edge(1, 2, known=True),
            Edge(3, 5, known=True),
            Edge(4, 5, known=True),
            Edge(2, 3, known=False),
            Edge(2, 4, known=False),
        ],
        [0, 1],
        [5],
    )


class TestMonomials:
    def test_canonical_form(self):
        assert monomial_of([2, 0, 2]) == ((0, 1), (2, 2))
        assert monomial_of([]) == ()
        assert monomial_degree(((0, 1), (2, 2))) == 3
        assert monomial_degree(()) == 0

    def test_formatting(self):
        net = chain_net()
        assert format_monomial(net, ()) == "1"
        assert format_monomial(net, ((0, 1),)) == "g(1->2)"
        assert format_monomial(net, ((0, 2),)) == "g(1->2)^2"


class TestSign:
    def test_identity_assignment_is_positive(self):
        assert sign_of(Assignment(pairs=((0, 0), (0, 1)), n_measured=2)) == 1
        assert sign_of(Assignment(pairs=((0, 0), (0, 1), (1, 0), (1, 1)), n_measured=2)) == 1

    def test_single_swap_is_negative(self):
        assert sign_of(Assignment(pairs=((0, 1), (0, 0)), n_measured=2)) == -1
        assert sign_of(Assignment(pairs=((0, 0), (0, 1), (1, 1), (1, 0)), n_measured=2)) == -1

    def test_duplicate_pair_rejected(self):
        with pytest.raises(NotBijectiveError):
            sign_of(Assignment(pairs=((0, 0), (0, 0)), n_measured=2))

    def test_gap_in_rows_rejected(self):
        with pytest.raises(NotBijectiveError):
            sign_of(Assignment(pairs=((0, 0), (1, 1)), n_measured=3))


class TestEnumerateWalks:
    def test_chain_single_walk(self):
        net = chain_net()
        blocks = separate(net)
        walks = enumerate_walks(net, blocks, net.edges[1], 3, 3)
        assert len(walks) == 1
        w = walks[0]
        assert w.edges == (0, 1)
        assert (w.start, w.end, w.pivot, w.pivot_pos) == (0, 2, 1, 1)
        assert w.degree == 1
        assert w.known_edge_indices() == (0,)
        assert walk_nodes(net, w) == [0, 1, 2]
        assert format_walk(net, w) == "1 -> 2 => 3"

    def test_minimal_degree_zero_walk(self):
        net = minimal_net()
        walks = enumerate_walks(net, separate(net), net.edges[0], 2, 2)
        assert [format_walk(net, w) for w in walks] == ["1 => 2"]
        assert walks[0].degree == 0

    def test_fan_two_prefixes_per_pivot(self):
        net = fan_net()
        blocks = separate(net)
        walks = enumerate_walks(net, blocks, net.edges[4], 2, 2)
        assert sorted((w.start, w.edges) for w in walks) == [(0, (0, 4)), (1, (2, 4))]

    def test_prefix_bound_respected(self):
        net = chain_net()
        walks = enumerate_walks(net, separate(net), net.edges[1], 0, 3)
        assert walks == []

    def test_cyclic_block_walks_grow_with_bound(self):
        net = cyclic9_net()
        blocks = separate(net)
        pivot = net.edges[9]
        short = enumerate_walks(net, blocks, pivot, 3, 0)
        long = enumerate_walks(net, blocks, pivot, 5, 0)
        assert len(long) > len(short)
        assert all(w.degree <= 5 for w in long)


class TestCollections:
    def test_fan_crossing_collection(self):
        net = fan_net()
        blocks = separate(net)
        w4 = {w.start: w for w in enumerate_walks(net, blocks, net.edges[4], 2, 2)}
        w5 = {w.start: w for w in enumerate_walks(net, blocks, net.edges[5], 2, 2)}
        straight = PathCollection(walks=(w4[0], w5[1]))
        crossed = PathCollection(walks=(w4[1], w5[0]))
        assert collection_assignment(net, straight) == Assignment(((0, 0), (1, 0)), 1)
        assert collection_monomial(straight) == ((0, 1), (3, 1))
        assert collection_sign(net, straight) == 1
        assert collection_monomial(crossed) == ((1, 1), (2, 1))
        assert collection_sign(net, crossed) == -1

    def test_shared_pair_rejected(self):
        net = fan_net()
        blocks = separate(net)
        w4 = {w.start: w for w in enumerate_walks(net, blocks, net.edges[4], 2, 2)}
        w5 = {w.start: w for w in enumerate_walks(net, blocks, net.edges[5], 2, 2)}
        with pytest.raises(NotBijectiveError):
            collection_sign(net, PathCollection(walks=(w4[0], w5[0])))


class TestRepetitionTable:
    def test_minimal(self):
        t = repetition_table(minimal_net(), 2)
        assert t.entries == {(): 1}
        assert t.exhaustive is True
        assert t.infeasible_pivots == ()

    def test_chain(self):
        t = repetition_table(chain_net(), 3)
        assert t.entries == {((0, 1),): 1}
        assert t.exhaustive is True

    def test_fan_two_signed_monomials(self):
        t = repetition_table(fan_net(), 4)
        assert t.entries == {((0, 1), (3, 1)): 1, ((1, 1), (2, 1)): -1}
        assert t.exhaustive is True

    def test_bipartite_identity(self):
        t = repetition_table(bipartite_net(), 2)
        assert t.entries == {(): 1}
        assert t.exhaustive is True

    def test_unreachable_pivot_empty_but_exhaustive(self):
        t = repetition_table(unreachable_net(), 4)
        assert t.entries == {}
        assert t.exhaustive is True
        assert t.infeasible_pivots == (0,)

    def test_cancellation_kept_as_zero_entry(self):
        t = repetition_table(cancel_net(), 12)
        assert t.entries == {((0, 1), (1, 1), (2, 1), (3, 1)): 0}
        assert t.exhaustive is True

    def test_raising_the_bound_never_changes_counts(self):
        for net in separable_square_corpus(10, acyclic=False, start_seed=700):
            lo = repetition_table(net, 4)
            hi = repetition_table(net, 6)
            for mu, r in lo.entries.items():
                assert hi.entries[mu] == r
            assert set(lo.entries) <= set(hi.entries)

    def test_entries_respect_the_degree_bound(self):
        for net in separable_square_corpus(8, acyclic=False, start_seed=750):
            t = repetition_table(net, 5)
            assert all(monomial_degree(mu) <= 5 for mu in t.entries)

    def test_rejects_non_square(self):
        net = NetworkModel(3, [Edge(0, 2, known=False), Edge(1, 2, known=False)], [0], [2])
        with pytest.raises(NotSquareError):
            repetition_table(net, 3)

    def test_rejects_negative_bound(self):
        with pytest.raises(ValueError):
            repetition_table(minimal_net(), -1)


class TestExhaustiveBound:
    def test_handmade_values(self):
        assert exhaustive_degree_bound(minimal_net()) == 0
        assert exhaustive_degree_bound(chain_net()) == 1
        assert exhaustive_degree_bound(fan_net()) == 2
        assert exhaustive_degree_bound(cancel_net()) == 4
        assert exhaustive_degree_bound(unreachable_net()) == 0
        assert exhaustive_degree_bound(cyclic9_net()) is None

    def test_bound_marks_the_exhaustive_threshold(self):
        for net in separable_square_corpus(10, acyclic=True, start_seed=800):
            d = exhaustive_degree_bound(net)
            assert d is not None
            assert repetition_table(net, d).exhaustive is True
            if d > 0 and not repetition_table(net, d - 1).infeasible_pivots:
                assert repetition_table(net, d - 1).exhaustive is False


class TestVerdicts:
    def test_minimal_witness(self):
        v = combinatorial_verdict(minimal_net())
        assert v.decision == IDENTIFIABLE
        assert v.notion == GLOBAL_SEPARABLE
        assert v.exhaustive is True
        assert v.witness == {
            "monomial": "1",
            "repetition": 1,
            "walks": [{"nodes": [1, 2], "pivot": "1->2"}],
        }

    def test_fan_witness_is_lex_smallest(self):
        v = combinatorial_verdict(fan_net())
        assert v.decision == IDENTIFIABLE
        assert v.witness["monomial"] == "g(1->3)*g(2->4)"
        assert v.witness["repetition"] == 1
        assert v.witness["walks"] == [
            {"nodes": [1, 3, 5], "pivot": "3->5"},
            {"nodes": [2, 4, 5], "pivot": "4->5"},
        ]

    def test_unreachable_no_walk_witness(self):
        v = combinatorial_verdict(unreachable_net())
        assert v.decision == NOT_IDENTIFIABLE
        assert v.exhaustive is True
        assert v.witness == {"no_walk_pivots": ["2->3"]}

    def test_cancellation_refuted_without_witness(self):
        v = combinatorial_verdict(cancel_net())
        assert v.decision == NOT_IDENTIFIABLE
        assert v.exhaustive is True
        assert v.witness is None

    def test_cyclic_bound_sensitivity(self):
        """Degree 4 sees only cancellations; degree 5 finds a survivor."""
        net = cyclic9_net()
        v4 = combinatorial_verdict(net, max_degree=4)
        assert v4.decision == INCONCLUSIVE
        assert v4.exhaustive is False
        t4 = repetition_table(net, 4)
        assert t4.entries and all(r == 0 for r in t4.entries.values())
        v5 = combinatorial_verdict(net, max_degree=5)
        assert v5.decision == IDENTIFIABLE
        assert v5.exhaustive is False
        t5 = repetition_table(net, 5)
        assert any(r == 0 for r in t5.entries.values()), "cancelled entries must be retained"

    def test_witness_repetition_matches_table(self):
        for net in separable_square_corpus(12, acyclic=False, start_seed=900):
            v = combinatorial_verdict(net, max_degree=6)
            if v.decision != IDENTIFIABLE:
                continue
            t = repetition_table(net, 6)
            key = {format_monomial(net, mu): r for mu, r in t.entries.items()}
            assert key[v.witness["monomial"]] == v.witness["repetition"]
            assert len(v.witness["walks"]) == net.m_unknown
            pivots = {w["pivot"] for w in v.witness["walks"]}
            assert pivots == {str(e) for e in net.unknown_edges}

    def test_agrees_with_generic_determinant_when_conclusive(self):
        for net in separable_square_corpus(20, acyclic=True, start_seed=1000):
            bound = exhaustive_degree_bound(net)
            v = verdict_from_table(net, repetition_table(net, bound))
            assert v.decision != INCONCLUSIVE
            assert (v.decision == IDENTIFIABLE) == generic_det_nonzero(net), f"split on {net}"

    def test_rejects_no_unknowns(self):
        net = NetworkModel(2, [Edge(0, 1, known=True)], [0], [1])
        with pytest.raises(NoUnknownEdgesError):
            combinatorial_verdict(net)


class TestNecessaryCondition:
    def test_minimal_identifiable(self):
        v = necessary_condition_any_topology(minimal_net())
        assert v.decision == IDENTIFIABLE
        assert v.notion == DECOUPLED_GENERIC

    def test_unreachable_refuted(self):
        v = necessary_condition_any_topology(unreachable_net())
        assert v.decision == NOT_IDENTIFIABLE

    def test_refutation_implies_local_refutation(self):
        """not-identifiable on the decoupled form must force the local verdict down."""
        for net in separable_square_corpus(10, acyclic=True, start_seed=1100):
            v = necessary_condition_any_topology(net)
            if v.decision == NOT_IDENTIFIABLE:
                assert local_identifiability(net).decision == NOT_IDENTIFIABLE

    def test_rejects_non_square_source(self):
        net = NetworkModel(2, [Edge(0, 1, known=False), Edge(1, 0, known=False)], [0], [1])
        with pytest.raises(NotSquareError):
            necessary_condition_any_topology(net)
