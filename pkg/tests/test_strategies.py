import pytest

from ggc.coloring import ColoringState
from ggc.errors import StrategyError
from ggc.graph import complete, disjoint_union, enumerate_graphs, path, star, total_graph
from ggc.marking import MarkingState, Winner, gcol, threshold_violation
from ggc.orientation import Orientation
from ggc.strategies import (
    COLORING,
    MARKING,
    ActivationAlice,
    ActivationMemory,
    CallableStrategy,
    MatchTrace,
    OptimalStrategy,
    RandomStrategy,
    Strategy,
    activation_alice_move,
    activation_violations,
    exhaustive_verify,
    lift_bob,
    play_match,
    scripted_alice_k3k1,
    scripted_bob_k3,
    verify_activation,
)


def labels(G, flats):
    return [G.ref(f).label for f in flats]


@pytest.fixture
def p3_chain(p3):
    return Orientation(p3, (0, 1))  # a->b->c


def test_activation_opening_on_p3(p3, p3_chain):
    mem = ActivationMemory(p3_chain)
    x = activation_alice_move(mem, MarkingState(total_graph(p3)), None)
    assert p3.ref(x).label == "v2"
    assert labels(p3, mem.last_tour) == ["e0", "v1", "e1", "v2"]
    assert set(labels(p3, [f for f in range(5) if mem.is_active(f)])) == {"e0", "v1", "e1", "v2"}


def test_activation_answers_bob(p3, p3_chain):
    mem = ActivationMemory(p3_chain)
    s = MarkingState(total_graph(p3)).apply("v1")
    x = activation_alice_move(mem, s, s.history[-1])
    assert p3.ref(x).label == "v2"
    assert labels(p3, mem.last_tour) == ["v1", "e1", "v2"]


def test_activation_marks_first_active_object(p3, p3_chain):
    mem = ActivationMemory(p3_chain)
    mem.active = 1 << 4  # e1 (bc) active from an earlier tour
    x = activation_alice_move(mem, MarkingState(total_graph(p3)), None)
    assert p3.ref(x).label == "e1"
    assert labels(p3, mem.last_tour) == ["e0", "v1", "e1"]


def test_activation_on_edgeless_graph():
    G = disjoint_union(complete(1), complete(1))
    mem = ActivationMemory(Orientation(G, ()))
    assert activation_alice_move(mem, MarkingState(total_graph(G)), None) == 0


def test_activation_rejects_other_games(p3, k3):
    alice = ActivationAlice(p3)
    with pytest.raises(StrategyError):
        alice.choose(MarkingState(total_graph(k3)))


@pytest.mark.parametrize("strict", [False, True])
def test_activation_invariants_on_small_graphs(strict):
    for n in range(1, 5):
        for G in enumerate_graphs(n):
            res, k = verify_activation(G, strict_rule7=strict)
            assert res.ok, (G, res.status, res.invariant_failures[:2])


def test_activation_violations_flags_inactive_marks(p3, p3_chain):
    mem = ActivationMemory(p3_chain)
    s = MarkingState(total_graph(p3)).apply(0)
    assert activation_violations(mem, s, "A")
    assert not activation_violations(mem, s, "B")


def test_lift_bob_k3_k2(k3):
    c = total_graph(k3)
    trace = play_match(MARKING, c, 2, OptimalStrategy(MARKING, c, 2), lift_bob(k3, 2))
    assert trace.winner is Winner.BOB and not trace.forfeit
    assert trace.replay()


def test_lift_bob_p3_k1(p3):
    c = total_graph(p3)
    trace = play_match(MARKING, c, 1, OptimalStrategy(MARKING, c, 1), lift_bob(p3, 1))
    assert trace.winner is Winner.BOB
    assert len(trace.moves) == 1  # Alice's first mark already violates


def test_lift_bob_refuses_losing_inner(k3):
    with pytest.raises(StrategyError):
        lift_bob(k3, 3)


def test_lift_bob_small_corpus():
    for n in range(1, 5):
        for G in enumerate_graphs(n):
            c = total_graph(G)
            for k in range(1, gcol(G, "edge")):
                trace = play_match(MARKING, c, k, OptimalStrategy(MARKING, c, k), lift_bob(G, k))
                assert trace.winner is Winner.BOB, (G, k)


def test_scripted_bob_examples(k3):
    s = ColoringState(total_graph(k3), 4).apply("v0", 0)
    i, c = scripted_bob_k3(s)
    assert (s.conflict.vertices[i].label, c) == ("e2", 1)
    s = s.apply(i, c).apply("v1", 2)
    i, c = scripted_bob_k3(s)
    assert (s.conflict.vertices[i].label, c) == ("e1", 3)  # edge ac, the last color
    with pytest.raises(StrategyError):
        scripted_bob_k3(ColoringState(total_graph(path(3)), 4).apply(0, 0))
    with pytest.raises(StrategyError):
        scripted_bob_k3(ColoringState(total_graph(k3), 4))


def test_scripted_alice_examples(k3k1):
    c = total_graph(k3k1)
    s = ColoringState(c, 3)
    assert scripted_alice_k3k1(s) == (3, 0)
    s = s.apply(3, 0).apply("v0", 2)
    i, col = scripted_alice_k3k1(s)
    assert (c.vertices[i].label, col) == ("e2", 2)
    s = ColoringState(c, 3).apply(3, 0).apply("e0", 1)
    i, col = scripted_alice_k3k1(s)
    assert (c.vertices[i].label, col) == ("v2", 1)
    with pytest.raises(StrategyError):
        scripted_alice_k3k1(ColoringState(total_graph(complete(3)), 3))


def test_match_examples(k3, k3k1, p3):
    c = total_graph(k3)
    t = play_match(COLORING, c, 4, OptimalStrategy(COLORING, c, 4), CallableStrategy(scripted_bob_k3))
    assert t.winner is Winner.BOB and not t.forfeit
    c = total_graph(k3k1)
    t = play_match(COLORING, c, 3, CallableStrategy(scripted_alice_k3k1), OptimalStrategy(COLORING, c, 3))
    assert t.winner is Winner.ALICE and not t.forfeit
    t = play_match(MARKING, total_graph(p3), 6, ActivationAlice(p3), RandomStrategy(1))
    assert t.winner is Winner.ALICE
    assert t.replay()


def test_scripted_alice_beats_every_bob(k3k1):
    res = exhaustive_verify(COLORING, total_graph(k3k1), 3, CallableStrategy(scripted_alice_k3k1))
    assert res.status == "ok" and res.lines > 0


def test_illegal_move_forfeits(k3):
    class Stubborn(Strategy):
        def choose(self, state):
            return 0

    c = total_graph(k3)
    t = play_match(MARKING, c, 5, Stubborn(), Stubborn())
    assert t.winner is Winner.ALICE and t.forfeit.startswith("B:")


@pytest.mark.parametrize("G, k", [(path(3), 6), (star(4), 8)])
def test_exhaustive_activation_ok(G, k):
    res = exhaustive_verify(MARKING, total_graph(G), k, ActivationAlice(G))
    assert res.status == "ok" and res.lines > 0


@pytest.mark.parametrize("make", [lambda G, c: ActivationAlice(G), lambda G, c: OptimalStrategy(MARKING, c, 4),
                                  lambda G, c: RandomStrategy(3)])
def test_exhaustive_finds_counterexample(k3, make):
    c = total_graph(k3)
    res = exhaustive_verify(MARKING, c, 4, make(k3, c))
    assert res.status == "counterexample"
    assert res.trace.winner is Winner.BOB and res.trace.replay()


def test_exhaustive_budget(k3):
    res = exhaustive_verify(MARKING, total_graph(complete(4)), 20, ActivationAlice(complete(4)), node_budget=3)
    assert res.status == "budget" and not res.ok


def test_trace_round_trip_and_tamper(k3):
    c = total_graph(k3)
    t = play_match(COLORING, c, 4, OptimalStrategy(COLORING, c, 4), CallableStrategy(scripted_bob_k3))
    text = t.to_text()
    assert "turn=1 player=A object=" in text and "max_marked_nbrs=" in text
    back = MatchTrace.from_text(text)
    assert back == t and back.replay()
    bad = text.replace("max_marked_nbrs=1", "max_marked_nbrs=2", 1)
    assert not MatchTrace.from_text(bad).replay()


def test_optimal_marking_match_matches_solver():
    for G in enumerate_graphs(3):
        c = total_graph(G)
        for k in range(1, c.max_degree() + 2):
            t = play_match(MARKING, c, k, OptimalStrategy(MARKING, c, k), OptimalStrategy(MARKING, c, k))
            s = MarkingState(c)
            for mv in t.moves:
                s = s.apply(mv.obj)
            assert (t.winner is Winner.BOB) == (threshold_violation(s, k) is not None)
