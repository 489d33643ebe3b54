"""Marking games on conflict graphs and the game coloring number.

Alice and Bob alternately mark unmarked vertices of a conflict graph, Alice
first, until everything is marked. With parameter ``k`` Alice wins iff no
unmarked vertex ever has ``k`` or more marked neighbors.

Positions are bitmasks of marked conflict vertices; the side to move is the
parity of the mask's popcount.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import BudgetExceeded, GraphError, IllegalMove, InconsistencyError
from .graph import ConflictGraph, ObjectRef, SimpleGraph, conflict_graph


class Winner(str, enum.Enum):
    ALICE = "Alice"
    BOB = "Bob"


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class MarkingState:
    conflict: ConflictGraph
    marked: int = 0
    history: tuple[int, ...] = ()

    @property
    def alice_to_move(self) -> bool:
        return len(self.history) % 2 == 0

    @property
    def complete(self) -> bool:
        return self.marked == (1 << self.conflict.size) - 1

    def is_marked(self, i: int) -> bool:
        return bool(self.marked >> i & 1)

    def unmarked(self) -> list[int]:
        return [i for i in range(self.conflict.size) if not self.marked >> i & 1]

    def marked_neighbors(self, i: int) -> int:
        return (self.conflict.masks[i] & self.marked).bit_count()

    def apply(self, obj: ObjectRef | int | str) -> MarkingState:
        i = self.conflict.locate(obj)
        if self.marked >> i & 1:
            raise IllegalMove(f"{self.conflict.vertices[i]} is already marked")
        return MarkingState(self.conflict, self.marked | 1 << i, self.history + (i,))

    def max_marked_neighbors(self) -> int:
        """Largest marked-neighbor count over unmarked objects (0 if none)."""
        return max((self.marked_neighbors(i) for i in self.unmarked()), default=0)


def apply_mark(s: MarkingState, x: ObjectRef | int | str) -> MarkingState:
    return s.apply(x)


def threshold_violation(s: MarkingState, k: int) -> ObjectRef | None:
    """Lowest-index unmarked object with at least ``k`` marked neighbors."""
    if k < 1:
        raise ValueError("k must be at least 1")
    for i in s.unmarked():
        if s.marked_neighbors(i) >= k:
            return s.conflict.vertices[i]
    return None


class MarkingSolver:
    """Exact minimax solver for the marking game on one ``(conflict, k)``.

    The memo table lives on the instance, so strategies backed by a solver
    reuse work across their turns.

    Bob's win is detected the moment a violation appears rather than at the
    end of play. This is equivalent: marked-neighbor counts only grow and an
    object stays unmarked until someone marks it, but the violation already
    happened "at some moment", which is all the rules ask for.
    """

    def __init__(self, conflict: ConflictGraph, k: int, node_budget: int | None = None):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.conflict = conflict
        self.k = k
        self.node_budget = node_budget
        self.nodes = 0
        self.full = (1 << conflict.size) - 1
        self._masks = conflict.masks
        # objects that could ever reach k marked neighbors
        self._risky = sum(1 << i for i in range(conflict.size) if conflict.degree(i) >= k)
        self._memo: dict[int, bool] = {}

    def violates(self, marked: int, x: int) -> bool:
        """Does marking ``x`` on a violation-free position create a violation?"""
        new = marked | 1 << x
        masks, k = self._masks, self.k
        for y in iter_bits(masks[x] & ~new):
            if (masks[y] & new).bit_count() >= k:
                return True
        return False

    def alice_wins(self, marked: int = 0) -> bool:
        """Game value of a violation-free position."""
        if marked == self.full or not (self._risky & ~marked):
            return True
        memo = self._memo
        hit = memo.get(marked)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceeded(self.nodes)
        alice = marked.bit_count() % 2 == 0
        moves = self._ordered_moves(marked)
        if alice:
            result = any(not self.violates(marked, x) and self.alice_wins(marked | 1 << x) for x in moves)
        else:
            result = not any(self.violates(marked, x) for x in moves) and all(
                self.alice_wins(marked | 1 << x) for x in moves
            )
        memo[marked] = result
        return result

    def _ordered_moves(self, marked: int) -> list[int]:
        unmarked = self.full & ~marked
        masks = self._masks
        return sorted(iter_bits(unmarked), key=lambda x: -(masks[x] & unmarked).bit_count())

    def winner(self) -> Winner:
        return Winner.ALICE if self.alice_wins(0) else Winner.BOB

    def mover_wins(self, s: MarkingState) -> bool:
        if threshold_violation(s, self.k) is not None:
            return not s.alice_to_move
        return self.alice_wins(s.marked) == s.alice_to_move

    def choose(self, s: MarkingState) -> int:
        """Lowest-index move that keeps the mover winning, else a fallback.

        A losing Alice still avoids creating a violation when she can.
        """
        if s.conflict is not self.conflict and s.conflict != self.conflict:
            raise GraphError("state belongs to a different conflict graph")
        moves = s.unmarked()
        if not moves:
            raise IllegalMove("no unmarked object left")
        alice = s.alice_to_move
        safe = []
        for x in moves:
            bad = self.violates(s.marked, x)
            if alice and not bad:
                safe.append(x)
                if self.alice_wins(s.marked | 1 << x):
                    return x
            if not alice and (bad or not self.alice_wins(s.marked | 1 << x)):
                return x
        return safe[0] if safe else moves[0]


def solve_marking(c: ConflictGraph, k: int, node_budget: int | None = None) -> Winner:
    return MarkingSolver(c, k, node_budget).winner()


def marking_profile(c: ConflictGraph, node_budget: int | None = None) -> dict[int, Winner]:
    """Winner for every ``k`` from 1 up to the first Alice win.

    ``max_degree + 1`` always suffices since no object can then collect ``k``
    marked neighbors; losing there means the solver is broken.
    """
    cap = c.max_degree() + 1
    out = {}
    for k in range(1, cap + 1):
        out[k] = solve_marking(c, k, node_budget)
        if out[k] is Winner.ALICE:
            return out
    raise InconsistencyError(f"Alice loses the marking game at k={cap} = max degree + 1")


def game_coloring_number(c: ConflictGraph, node_budget: int | None = None) -> int:
    return max(marking_profile(c, node_budget))


def gcol(G: SimpleGraph, mode: str, node_budget: int | None = None) -> int:
    """Game coloring number of ``G`` in ``vertex``, ``edge`` or ``total`` mode."""
    return game_coloring_number(conflict_graph(G, mode), node_budget)
