"""Executable strategies, match running, and exhaustive verification.

A strategy is any object with ``choose(state)``; for marking games it returns
a conflict index, for coloring games an ``(index, color)`` pair. Strategies
may keep private memory between turns, and ``clone()`` copies it so the
verifier can branch a match.
"""

from __future__ import annotations

import copy
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .coloring import UNCOLORED, ColoringSolver, ColoringState, legal_moves
from .errors import BudgetExceeded, GGCError, GraphError, IllegalMove, StrategyError
from .graph import ConflictGraph, ConflictMode, ObjectKind, SimpleGraph, line_plus_isolated, max_degree, to_graph6
from .marking import MarkingSolver, MarkingState, Winner, iter_bits, solve_marking, threshold_violation
from .orientation import Orientation, min_max_outdegree_orientation

MARKING = "marking"
COLORING = "coloring"


class Strategy:
    def choose(self, state):
        raise NotImplementedError

    def clone(self) -> Strategy:
        return copy.deepcopy(self)


class OptimalStrategy(Strategy):
    """Plays a lowest-index winning move, backed by an exact solver."""

    def __init__(self, game: str, conflict: ConflictGraph, k: int, solver=None):
        if solver is None:
            solver = MarkingSolver(conflict, k) if game == MARKING else ColoringSolver(conflict, k)
        self.game = game
        self.solver = solver

    def choose(self, state):
        return self.solver.choose(state)

    def clone(self):
        # the memo is position-keyed, so clones can share it
        return self


class RandomStrategy(Strategy):
    def __init__(self, seed: int | None = None):
        self.seed = seed
        self.rng = random.Random(seed)

    def choose(self, state):
        if isinstance(state, MarkingState):
            return self.rng.choice(state.unmarked())
        moves = legal_moves(state)
        obj, color = self.rng.choice(moves)
        return state.conflict.locate(obj), color


class CallableStrategy(Strategy):
    """Adapter for a stateless ``state -> move`` function."""

    def __init__(self, fn: Callable):
        self.fn = fn

    def choose(self, state):
        return self.fn(state)

    def clone(self):
        return self


# --------------------------------------------------------------------------
# activation strategy


@dataclass
class ActivationMemory:
    orientation: Orientation
    active: int = 0
    last_tour: list[int] = field(default_factory=list)
    strict_rule7: bool = False

    def is_active(self, flat: int) -> bool:
        return bool(self.active >> flat & 1)

    def copy(self) -> ActivationMemory:
        return ActivationMemory(self.orientation, self.active, list(self.last_tour), self.strict_rule7)


def activation_alice_move(mem: ActivationMemory, s: MarkingState, bob_last: int | None) -> int:
    """One move of the activation strategy on the total marking game.

    Alice walks along the orientation, activating what she lands on, and marks
    the first already-active object she reaches (or the last object she
    activated when she cannot jump further). Returns the flat index to mark
    and records the tour in ``mem.last_tour``.

    Choices left open by the rules are resolved by lowest index: the out-edge
    taken from a vertex, and the edge a fresh tour starts from.
    """
    D = mem.orientation
    G = D.graph
    n = G.n
    if s.conflict.mode is not ConflictMode.TOTAL or s.conflict.source != G:
        raise StrategyError("activation strategy plays the total marking game on its own graph")
    marked = s.marked
    total = G.n + G.m
    if marked == (1 << total) - 1:
        raise IllegalMove("no unmarked object left")
    tour: list[int] = []

    def is_marked(f: int) -> bool:
        return bool(marked >> f & 1)

    def first_unmarked_out_edge(x: int) -> int | None:
        for j in D.out_edges(x):
            if not is_marked(n + j):
                return n + j
        return None

    def jump_from(cur: int) -> int | None:
        if cur >= n:
            y = D.head(cur - n)
            if not is_marked(y):
                return y
            return first_unmarked_out_edge(y)
        return first_unmarked_out_edge(cur)

    def land(f: int) -> bool:
        """Visit ``f``; True when Alice should mark it and stop."""
        tour.append(f)
        if mem.active >> f & 1:
            return True
        mem.active |= 1 << f
        return False

    def walk(cur: int) -> int | None:
        while True:
            nxt = jump_from(cur)
            if nxt is None:
                # stuck: mark the last visited object, unless that is Bob's
                return None if is_marked(cur) else cur
            if land(nxt):
                return nxt
            cur = nxt

    def from_marked(f: int) -> int | None:
        tour.append(f)
        mem.active |= 1 << f
        return walk(f)

    def fresh_tour() -> int | None:
        if mem.strict_rule7 and G.m:
            start = n
            if is_marked(start):
                target = from_marked(start)
                if target is not None:
                    return target
            else:
                return start if land(start) else walk(start)
        start = next((n + j for j in range(G.m) if not is_marked(n + j)), None)
        if start is None:
            start = next((v for v in range(n) if not is_marked(v)), None)
        if start is None:
            return None
        return start if land(start) else walk(start)

    target = None
    if bob_last is not None:
        target = from_marked(bob_last)
    if target is None:
        target = fresh_tour()
    if target is None:
        target = next(f for f in range(total) if not is_marked(f))
        mem.active |= 1 << target
        tour.append(target)
    mem.last_tour = tour
    return target


class ActivationAlice(Strategy):
    def __init__(self, G: SimpleGraph, orientation: Orientation | None = None, strict_rule7: bool = False):
        D = orientation if orientation is not None else min_max_outdegree_orientation(G)
        if D.graph != G:
            raise StrategyError("orientation belongs to another graph")
        self.graph = G
        self.memory = ActivationMemory(D, strict_rule7=strict_rule7)

    def choose(self, state: MarkingState) -> int:
        if not state.alice_to_move:
            raise StrategyError("activation strategy only plays Alice's turns")
        bob_last = state.history[-1] if state.history else None
        return activation_alice_move(self.memory, state, bob_last)

    def clone(self):
        twin = copy.copy(self)
        twin.memory = self.memory.copy()
        return twin


def activation_violations(mem: ActivationMemory, s: MarkingState, after: str) -> list[str]:
    """Check the activation bookkeeping claims on one position.

    ``after`` is ``"A"`` right after Alice's move and ``"B"`` right after
    Bob's. Checked: marked objects are active (all of them after Alice; all
    but Bob's latest after Bob), and every unmarked vertex has at most
    ``Delta + d + 2`` active neighbors, every unmarked edge at most
    ``Delta + 3d``, where ``d`` is the orientation's max outdegree.
    """
    G = mem.orientation.graph
    d = mem.orientation.max_outdegree
    delta = max_degree(G)
    out = []
    inactive_marked = s.marked & ~mem.active
    if after == "A" and inactive_marked:
        out.append(f"marked but inactive after Alice: {[str(G.ref(f)) for f in iter_bits(inactive_marked)]}")
    if after == "B":
        allowed = 1 << s.history[-1]
        if inactive_marked & ~allowed:
            out.append(f"marked inactive objects besides Bob's last: {[str(G.ref(f)) for f in iter_bits(inactive_marked)]}")
    masks = s.conflict.masks
    for f in s.unmarked():
        count = (masks[f] & mem.active).bit_count()
        limit = delta + d + 2 if f < G.n else delta + 3 * d
        if count > limit:
            out.append(f"{G.ref(f)} has {count} active neighbors > {limit}")
    return out


# --------------------------------------------------------------------------
# lifted Bob


class LiftedBob(Strategy):
    """Bob for the total marking game on ``G``, copying an inner Bob.

    The inner strategy plays the marking game on ``L(G)`` plus ``n``
    isolated vertices, whose vertices carry exactly the labels of the
    objects of ``G``; every position is mirrored label for label.
    """

    def __init__(self, G: SimpleGraph, k: int, inner: Strategy | None = None):
        self.graph = G
        self.k = k
        self.inner_conflict = line_plus_isolated(G)
        if solve_marking(self.inner_conflict, k) is not Winner.BOB:
            raise StrategyError(f"Bob does not win the marking game on L(G) + {G.n}K1 at k={k}")
        self.inner = inner if inner is not None else OptimalStrategy(MARKING, self.inner_conflict, k)

    def choose(self, state: MarkingState) -> int:
        if state.conflict.vertices != self.inner_conflict.vertices:
            raise StrategyError("lifted Bob needs the total marking game on its own graph")
        mirrored = MarkingState(self.inner_conflict, state.marked, state.history)
        return self.inner_conflict.locate(self.inner.choose(mirrored))

    def clone(self):
        twin = copy.copy(self)
        twin.inner = self.inner.clone()
        return twin


def lift_bob(G: SimpleGraph, k: int, inner: Strategy | None = None) -> LiftedBob:
    return LiftedBob(G, k, inner)


# --------------------------------------------------------------------------
# scripted strategies for the two small examples


def _triangle_antipodes(G: SimpleGraph, triangle: tuple[int, int, int]) -> dict[int, int]:
    """Flat index -> flat index of the unique nonincident object in T(K3)."""
    anti = {}
    for v in triangle:
        a, b = sorted(u for u in triangle if u != v)
        e = G.n + G.edge_index[(a, b)]
        anti[v] = e
        anti[e] = v
    return anti


def _check_k3(s: ColoringState) -> dict[int, int]:
    G = s.conflict.source
    if s.conflict.mode is not ConflictMode.TOTAL or G.n != 3 or G.m != 3:
        raise StrategyError("scripted Bob plays only the total game on K3")
    if s.k != 4:
        raise StrategyError("scripted Bob expects exactly 4 colors")
    return _triangle_antipodes(G, (0, 1, 2))


def scripted_bob_k3(s: ColoringState) -> tuple[int, int]:
    """Answer Alice on T(K3) by coloring the object opposite her last one,
    using the lowest color nobody has used yet."""
    anti = _check_k3(s)
    if s.alice_to_move or not s.history:
        raise StrategyError("scripted Bob moves right after Alice")
    last, _ = s.history[-1]
    target = anti[last]
    if s.colors[target] != UNCOLORED:
        raise StrategyError(f"object opposite {s.conflict.vertices[last]} is already colored")
    used = {c for c in s.colors if c != UNCOLORED}
    fresh = [c for c in range(s.k) if c not in used]
    if not fresh:
        raise StrategyError("no unused color left")
    return target, fresh[0]


def _check_k3k1(s: ColoringState) -> tuple[int, dict[int, int]]:
    G = s.conflict.source
    if s.conflict.mode is not ConflictMode.TOTAL or G.n != 4 or G.m != 3:
        raise StrategyError("scripted Alice plays only the total game on K3 + K1")
    isolated = [v for v in range(4) if G.degree(v) == 0]
    tri = tuple(v for v in range(4) if G.degree(v) == 2)
    if len(isolated) != 1 or len(tri) != 3:
        raise StrategyError("graph is not K3 + K1")
    if s.k != 3:
        raise StrategyError("scripted Alice expects exactly 3 colors")
    return isolated[0], _triangle_antipodes(G, tri)


def scripted_alice_k3k1(s: ColoringState) -> tuple[int, int]:
    """Color the isolated vertex first, then mirror Bob across the triangle."""
    iso, anti = _check_k3k1(s)
    if not s.alice_to_move:
        raise StrategyError("scripted Alice moves on Alice's turns")
    if not s.history:
        return iso, 0
    last, color = s.history[-1]
    if last not in anti:
        raise StrategyError("Bob's last move is outside the triangle")
    target = anti[last]
    if s.colors[target] != UNCOLORED:
        raise StrategyError("mirror object is already colored")
    return target, color


# --------------------------------------------------------------------------
# matches and traces


@dataclass
class TraceMove:
    player: str
    obj: str
    color: int | None
    snapshot: int

    def line(self, turn: int) -> str:
        color = f" color={self.color}" if self.color is not None else ""
        return f"turn={turn} player={self.player} object={self.obj}{color} max_marked_nbrs={self.snapshot}"


@dataclass
class MatchTrace:
    game: str
    graph6: str
    conflict: str
    k: int
    moves: list[TraceMove] = field(default_factory=list)
    winner: Winner | None = None
    forfeit: str | None = None

    def to_text(self) -> str:
        lines = [f"# game={self.game} graph6={self.graph6} conflict={self.conflict} k={self.k}"]
        lines.extend(m.line(i) for i, m in enumerate(self.moves, 1))
        tail = f"# winner={self.winner.value if self.winner else 'none'}"
        if self.forfeit:
            tail += f" forfeit={self.forfeit.replace(' ', '_')}"
        lines.append(tail)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> MatchTrace:
        header = None
        moves = []
        winner = None
        forfeit = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                fields = dict(tok.split("=", 1) for tok in line[1:].split() if "=" in tok)
                if "game" in fields:
                    header = fields
                if "winner" in fields:
                    winner = None if fields["winner"] == "none" else Winner(fields["winner"])
                    forfeit = fields.get("forfeit")
                continue
            fields = dict(tok.split("=", 1) for tok in line.split())
            color = int(fields["color"]) if "color" in fields else None
            moves.append(TraceMove(fields["player"], fields["object"], color, int(fields["max_marked_nbrs"])))
        if header is None:
            raise ValueError("trace has no '# game=...' header")
        return cls(header["game"], header["graph6"], header["conflict"], int(header["k"]), moves, winner, forfeit)

    def build_conflict(self) -> ConflictGraph:
        from .graph import conflict_graph, line_plus_isolated, parse_graph6

        G = parse_graph6(self.graph6)
        if self.conflict == ConflictMode.LINE_PLUS_ISOLATED.value:
            return line_plus_isolated(G)
        names = {"identity": "vertex", "line": "edge", "total": "total"}
        return conflict_graph(G, names[self.conflict])

    def replay(self) -> bool:
        """Replay every move from the empty position; True iff all snapshots
        and the recorded winner are reproduced."""
        c = self.build_conflict()
        state = _initial(self.game, c, self.k)
        over = None
        for i, mv in enumerate(self.moves):
            expected = "A" if i % 2 == 0 else "B"
            if mv.player != expected or over is not None:
                return False
            try:
                state = _apply(state, c.locate(mv.obj), mv.color)
            except (IllegalMove, GraphError):
                return False
            if _snapshot(state) != mv.snapshot:
                return False
            over = _outcome(state, self.k)
        if self.forfeit:
            return True
        return over is self.winner


def _initial(game: str, c: ConflictGraph, k: int):
    if game == MARKING:
        return MarkingState(c)
    if game == COLORING:
        return ColoringState(c, k)
    raise ValueError(f"unknown game {game!r}")


def _apply(state, i: int, color: int | None):
    if isinstance(state, MarkingState):
        return state.apply(i)
    if color is None:
        raise IllegalMove("coloring move without a color")
    return state.apply(i, color)


def _snapshot(state) -> int:
    if isinstance(state, MarkingState):
        return state.max_marked_neighbors()
    return state.max_neighbor_colors()


def _outcome(state, k: int) -> Winner | None:
    """Winner if the game is decided at this position, else None."""
    if isinstance(state, MarkingState):
        if threshold_violation(state, k) is not None:
            return Winner.BOB
        return Winner.ALICE if state.complete else None
    if state.dead_objects():
        return Winner.BOB
    return Winner.ALICE if state.complete else None


def _normalize(state, move):
    c = state.conflict
    if isinstance(state, MarkingState):
        i = c.locate(move)
        if state.is_marked(i):
            raise IllegalMove(f"{c.vertices[i]} is already marked")
        return i, None
    obj, color = move
    return c.locate(obj), int(color)


def _trace_for(game: str, c: ConflictGraph, k: int) -> MatchTrace:
    return MatchTrace(game, to_graph6(c.source), c.mode.value, k)


def _record(trace: MatchTrace, state, i: int, color: int | None):
    player = "A" if len(trace.moves) % 2 == 0 else "B"
    trace.moves.append(TraceMove(player, state.conflict.vertices[i].label, color, _snapshot(state)))


def play_match(game: str, c: ConflictGraph, k: int, alice: Strategy, bob: Strategy) -> MatchTrace:
    """Play one full match; an illegal move forfeits the game for its player."""
    state = _initial(game, c, k)
    trace = _trace_for(game, c, k)
    if c.size == 0:
        trace.winner = Winner.ALICE
        return trace
    while True:
        alice_turn = len(trace.moves) % 2 == 0
        player = alice if alice_turn else bob
        try:
            i, color = _normalize(state, player.choose(state))
            state = _apply(state, i, color)
        except (GGCError, ValueError, TypeError) as exc:
            trace.winner = Winner.BOB if alice_turn else Winner.ALICE
            trace.forfeit = f"{'A' if alice_turn else 'B'}: {exc}"
            return trace
        _record(trace, state, i, color)
        result = _outcome(state, k)
        if result is not None:
            trace.winner = result
            return trace


# --------------------------------------------------------------------------
# exhaustive verification


@dataclass
class VerifyResult:
    status: str
    nodes: int = 0
    lines: int = 0
    trace: MatchTrace | None = None
    invariant_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "ok" and not self.invariant_failures


def _bob_moves(state) -> Iterator[tuple[int, int | None]]:
    if isinstance(state, MarkingState):
        for i in state.unmarked():
            yield i, None
    else:
        for obj, color in legal_moves(state):
            yield state.conflict.locate(obj), color


def exhaustive_verify(
    game: str,
    c: ConflictGraph,
    k: int,
    alice: Strategy,
    node_budget: int | None = 1_000_000,
    check: Callable[[Strategy, object, str], list[str]] | None = None,
    max_failures: int = 20,
) -> VerifyResult:
    """Play a deterministic Alice against every possible Bob.

    ``check(alice, state, after)`` is called after each move (``after`` is
    ``"A"`` or ``"B"``) and returns invariant failure messages. The result is
    ``"ok"`` when Alice wins every line, ``"counterexample"`` with the first
    losing line as a trace, or ``"budget"`` when the node budget runs out.
    """
    result = VerifyResult("ok")

    class _Found(Exception):
        pass

    def fail(trace: MatchTrace, winner: Winner, forfeit: str | None = None):
        trace.winner = winner
        trace.forfeit = forfeit
        result.status = "counterexample"
        result.trace = trace
        raise _Found

    def note(strategy, state, after, trace):
        if check is None or len(result.invariant_failures) >= max_failures:
            return
        for msg in check(strategy, state, after):
            result.invariant_failures.append(f"after turn {len(trace.moves)} ({after}) [{_moves_text(trace)}]: {msg}")

    def alice_turn(state, strategy: Strategy, trace: MatchTrace):
        result.nodes += 1
        if node_budget is not None and result.nodes > node_budget:
            raise BudgetExceeded(result.nodes)
        try:
            i, color = _normalize(state, strategy.choose(state))
            state = _apply(state, i, color)
        except (GGCError, ValueError, TypeError) as exc:
            fail(trace, Winner.BOB, f"A: {exc}")
        _record(trace, state, i, color)
        note(strategy, state, "A", trace)
        outcome = _outcome(state, k)
        if outcome is Winner.BOB:
            fail(trace, Winner.BOB)
        if outcome is Winner.ALICE:
            result.lines += 1
            return
        for bi, bcolor in _bob_moves(state):
            branch = strategy.clone()
            child = _apply(state, bi, bcolor)
            sub = copy.copy(trace)
            sub.moves = list(trace.moves)
            _record(sub, child, bi, bcolor)
            note(branch, child, "B", sub)
            outcome = _outcome(child, k)
            if outcome is Winner.BOB:
                fail(sub, Winner.BOB)
            if outcome is Winner.ALICE:
                result.lines += 1
                continue
            alice_turn(child, branch, sub)

    state = _initial(game, c, k)
    trace = _trace_for(game, c, k)
    if c.size == 0:
        return result
    try:
        alice_turn(state, alice.clone(), trace)
    except _Found:
        pass
    except BudgetExceeded:
        result.status = "budget"
    return result


def _moves_text(trace: MatchTrace) -> str:
    return " ".join(f"{m.player}:{m.obj}" + (f"/{m.color}" if m.color is not None else "") for m in trace.moves)


def activation_check(strategy: ActivationAlice, state: MarkingState, after: str) -> list[str]:
    return activation_violations(strategy.memory, state, after)


def verify_activation(
    G: SimpleGraph,
    k: int | None = None,
    orientation: Orientation | None = None,
    strict_rule7: bool = False,
    node_budget: int | None = 1_000_000,
) -> tuple[VerifyResult, int]:
    """Exhaustively verify the activation strategy on ``T(G)``.

    ``k`` defaults to ``Delta + 3 d + 1`` for the orientation's max outdegree
    ``d``. Returns the result and the parameter used.
    """
    from .graph import total_graph

    alice = ActivationAlice(G, orientation, strict_rule7)
    d = alice.memory.orientation.max_outdegree
    if k is None:
        k = max_degree(G) + 3 * d + 1
    res = exhaustive_verify(MARKING, total_graph(G), k, alice, node_budget, activation_check)
    return res, k
