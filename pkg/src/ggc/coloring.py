"""Coloring games on conflict graphs and game chromatic numbers.

Alice and Bob alternately color uncolored vertices of a conflict graph from
``k`` colors, Alice first, always keeping the partial coloring proper. Alice
wins iff the whole conflict graph ends up colored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded, GraphError, IllegalMove, InconsistencyError
from .graph import ConflictGraph, ObjectRef, SimpleGraph, conflict_graph
from .marking import Winner, iter_bits

UNCOLORED = -1


@dataclass(frozen=True)
class ColoringState:
    conflict: ConflictGraph
    k: int
    colors: tuple[int, ...] = None
    history: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.colors is None:
            object.__setattr__(self, "colors", (UNCOLORED,) * self.conflict.size)

    @property
    def alice_to_move(self) -> bool:
        return len(self.history) % 2 == 0

    @property
    def complete(self) -> bool:
        return UNCOLORED not in self.colors

    def neighbor_colors(self, i: int) -> set[int]:
        return {self.colors[j] for j in self.conflict.adjacency[i] if self.colors[j] != UNCOLORED}

    def is_dead(self, i: int) -> bool:
        """Uncolored and every color already used around it."""
        return self.colors[i] == UNCOLORED and len(self.neighbor_colors(i)) == self.k

    def dead_objects(self) -> list[int]:
        return [i for i in range(self.conflict.size) if self.is_dead(i)]

    def apply(self, obj: ObjectRef | int | str, color: int) -> ColoringState:
        i = self.conflict.locate(obj)
        label = self.conflict.vertices[i]
        if not 0 <= color < self.k:
            raise IllegalMove(f"color {color} is outside 0..{self.k - 1}")
        if self.colors[i] != UNCOLORED:
            raise IllegalMove(f"{label} is already colored {self.colors[i]}")
        for j in self.conflict.adjacency[i]:
            if self.colors[j] == color:
                raise IllegalMove(f"{label} with color {color} conflicts with {self.conflict.vertices[j]}")
        colors = list(self.colors)
        colors[i] = color
        return ColoringState(self.conflict, self.k, tuple(colors), self.history + ((i, color),))

    def class_masks(self) -> tuple[int, ...]:
        classes = [0] * self.k
        for i, c in enumerate(self.colors):
            if c != UNCOLORED:
                classes[c] |= 1 << i
        return tuple(classes)

    def max_neighbor_colors(self) -> int:
        return max((len(self.neighbor_colors(i)) for i, c in enumerate(self.colors) if c == UNCOLORED), default=0)


def legal_moves(s: ColoringState) -> list[tuple[ObjectRef, int]]:
    """Every ``(object, color)`` pair a player may play, in flat-then-color order."""
    out = []
    for i, c in enumerate(s.colors):
        if c != UNCOLORED:
            continue
        used = s.neighbor_colors(i)
        out.extend((s.conflict.vertices[i], col) for col in range(s.k) if col not in used)
    return out


def apply_color(s: ColoringState, x: ObjectRef | int | str, c: int) -> ColoringState:
    return s.apply(x, c)


def _canon(classes) -> tuple[int, ...]:
    return tuple(sorted(cl for cl in classes if cl))


class ColoringSolver:
    """Exact minimax solver for the coloring game on one ``(conflict, k)``.

    Positions are keyed by the sorted tuple of nonempty color-class bitmasks;
    color names are interchangeable, so this collapses all ``k!`` renamings.

    Bob wins the moment some uncolored object is dead (all ``k`` colors in
    its neighborhood). Colors are never removed, so a dead object stays
    uncolorable and the graph can no longer be completed; conversely, while
    nothing is dead every uncolored object still has a legal color, so the
    game cannot stall before completion.
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
        self._memo: dict[tuple[int, ...], bool] = {}

    def _kills(self, classes: tuple[int, ...], x: int, uncolored: int) -> bool:
        """After coloring ``x`` (already folded into ``classes``), is a neighbor dead?"""
        if len(classes) < self.k:
            return False
        masks = self._masks
        for y in iter_bits(masks[x] & uncolored):
            my = masks[y]
            if all(cl & my for cl in classes):
                return True
        return False

    def _safe(self, classes: tuple[int, ...], uncolored: int) -> bool:
        # nobody can die if, for every uncolored y, the colors already around
        # it plus its uncolored neighbors stay below k
        masks, k = self._masks, self.k
        for y in iter_bits(uncolored):
            my = masks[y]
            if (my & uncolored).bit_count() + sum(1 for cl in classes if cl & my) >= k:
                return False
        return True

    def successors(self, classes: tuple[int, ...]):
        """Yield ``(x, class_position, child_classes, kills)`` for canonical moves.

        ``class_position`` is the index into ``classes``, or ``len(classes)``
        for a fresh color (only one representative fresh color is tried).
        """
        colored = 0
        for cl in classes:
            colored |= cl
        uncolored = self.full & ~colored
        masks = self._masks
        for x in iter_bits(uncolored):
            bit = 1 << x
            rest = uncolored & ~bit
            for pos, cl in enumerate(classes):
                if not cl & masks[x]:
                    child = classes[:pos] + (cl | bit,) + classes[pos + 1:]
                    yield x, pos, child, self._kills(child, x, rest)
            if len(classes) < self.k:
                child = classes + (bit,)
                yield x, len(classes), child, self._kills(child, x, rest)

    def alice_wins(self, classes: tuple[int, ...] = ()) -> bool:
        """Game value of a position with no dead object (canonical classes)."""
        colored = 0
        for cl in classes:
            colored |= cl
        if colored == self.full:
            return True
        memo = self._memo
        hit = memo.get(classes)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceeded(self.nodes)
        uncolored = self.full & ~colored
        if self._safe(classes, uncolored):
            memo[classes] = True
            return True
        children = list(self.successors(classes))
        if colored.bit_count() % 2 == 0:
            result = any(not kills and self.alice_wins(_canon(child)) for _, _, child, kills in children)
        else:
            result = not any(kills for *_, kills in children) and all(
                self.alice_wins(_canon(child)) for _, _, child, _ in children
            )
        memo[classes] = result
        return result

    def winner(self) -> Winner:
        return Winner.ALICE if self.alice_wins(()) else Winner.BOB

    def value_after(self, s: ColoringState, i: int, color: int) -> bool:
        """Does Alice win after ``(i, color)`` is played from ``s``?"""
        t = s.apply(i, color)
        if t.dead_objects():
            return False
        return self.alice_wins(_canon(t.class_masks()))

    def choose(self, s: ColoringState) -> tuple[int, int]:
        """Lowest ``(object, color)`` keeping the mover winning, else the first legal move."""
        if s.k != self.k or (s.conflict is not self.conflict and s.conflict != self.conflict):
            raise GraphError("state belongs to a different game")
        first = None
        alice = s.alice_to_move
        for i, c in enumerate(s.colors):
            if c != UNCOLORED:
                continue
            used = s.neighbor_colors(i)
            for col in range(s.k):
                if col in used:
                    continue
                if first is None:
                    first = (i, col)
                if self.value_after(s, i, col) == alice:
                    return i, col
        if first is None:
            raise IllegalMove("no legal move")
        return first


def solve_coloring(c: ConflictGraph, k: int, node_budget: int | None = None) -> Winner:
    return ColoringSolver(c, k, node_budget).winner()


@dataclass
class GameChromatic:
    value: int
    wins: dict[int, Winner] = field(default_factory=dict)

    @property
    def monotone(self) -> bool:
        seen_win = False
        for k in sorted(self.wins):
            if self.wins[k] is Winner.ALICE:
                seen_win = True
            elif seen_win:
                return False
        return True


def coloring_profile(c: ConflictGraph, node_budget: int | None = None) -> GameChromatic:
    """Winner for every ``k`` in ``1..max_degree+1`` and the least winning ``k``.

    No monotonicity in ``k`` is assumed, so the full range is solved.
    """
    if c.size == 0:
        return GameChromatic(0, {})
    cap = c.max_degree() + 1
    wins = {k: solve_coloring(c, k, node_budget) for k in range(1, cap + 1)}
    winning = [k for k, w in wins.items() if w is Winner.ALICE]
    if not winning:
        raise InconsistencyError(f"Alice loses the coloring game at k={cap} = max degree + 1")
    return GameChromatic(min(winning), wins)


def game_chromatic_profile(G: SimpleGraph, mode: str, node_budget: int | None = None) -> GameChromatic:
    return coloring_profile(conflict_graph(G, mode), node_budget)


def game_chromatic(G: SimpleGraph, mode: str, node_budget: int | None = None) -> int:
    """Game chromatic number of ``G``; ``mode="total"`` gives the total one."""
    return game_chromatic_profile(G, mode, node_budget).value


# --------------------------------------------------------------------------
# offline chromatic number


def _max_clique(masks: list[int], candidates: int) -> int:
    best = 0

    def grow(size: int, cand: int):
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if not cand:
            best = max(best, size)
            return
        for v in iter_bits(cand):
            grow(size + 1, cand & masks[v])
            cand &= ~(1 << v)
            if size + cand.bit_count() <= best:
                return

    grow(0, candidates)
    return best


def _colorable(masks: list[int], n: int, k: int) -> bool:
    colors = [UNCOLORED] * n

    def pick() -> int:
        # DSATUR: most distinct neighbor colors, then highest degree
        best, key = -1, None
        for v in range(n):
            if colors[v] != UNCOLORED:
                continue
            sat = len({colors[u] for u in iter_bits(masks[v]) if colors[u] != UNCOLORED})
            cand = (sat, masks[v].bit_count())
            if key is None or cand > key:
                best, key = v, cand
        return best

    def go(count: int, used: int) -> bool:
        if count == n:
            return True
        v = pick()
        around = {colors[u] for u in iter_bits(masks[v])}
        # colors beyond the first unused one are symmetric
        for c in range(min(k, used + 1)):
            if c in around:
                continue
            colors[v] = c
            if go(count + 1, max(used, c + 1)):
                return True
        colors[v] = UNCOLORED
        return False

    return go(0, 0)


def offline_chromatic(c: ConflictGraph) -> int:
    """Chromatic number of the conflict graph by clique-bounded backtracking."""
    n = c.size
    if n == 0:
        return 0
    masks = list(c.masks)
    k = max(1, _max_clique(masks, (1 << n) - 1))
    while not _colorable(masks, n, k):
        k += 1
    return k
