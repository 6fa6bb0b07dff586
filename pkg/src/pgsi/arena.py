"""Parity games, PGSolver text I/O, escape arenas and graph analyses.

The game graph is a finite directed graph whose nodes carry an owner
(player 0 or 1) and a non-negative color.  Player 0 wins a play iff the
maximum color seen infinitely often is even.  The solver works on the
*escape arena*: the game plus a fresh sink node that every player-0 node
may move to, ending the play.

This module also hosts the two graph primitives everything else is built
on: player attractors (with ranks and an attracting strategy) and the
detection of nodes lying on cycles whose maximum color has a given parity.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import FormatError, InvariantViolation


@dataclass(frozen=True)
class ParityGame:
    """Immutable parity game with nodes indexed 0..n-1.

    Successor lists keep their input order but duplicates are collapsed,
    so edges form a set.  Every node has at least one successor.
    """

    owner: tuple[int, ...]
    color: tuple[int, ...]
    successors: tuple[tuple[int, ...], ...]
    names: tuple[str | None, ...] | None = None

    def __post_init__(self):
        n = len(self.owner)
        if len(self.color) != n or len(self.successors) != n:
            raise ValueError("owner, color and successors must have equal length")
        if self.names is None:
            object.__setattr__(self, "names", (None,) * n)
        elif len(self.names) != n:
            raise ValueError("names must have one entry per node")
        deduped = []
        for v in range(n):
            if self.owner[v] not in (0, 1):
                raise ValueError("node %d has owner %r" % (v, self.owner[v]))
            if self.color[v] < 0:
                raise ValueError("node %d has negative color" % v)
            seen, keep = set(), []
            for t in self.successors[v]:
                if not 0 <= t < n:
                    raise ValueError("node %d has successor %d outside the game" % (v, t))
                if t not in seen:
                    seen.add(t)
                    keep.append(t)
            if not keep:
                raise ValueError("node %d has no successors" % v)
            deduped.append(tuple(keep))
        object.__setattr__(self, "successors", tuple(deduped))

    @property
    def n(self) -> int:
        return len(self.owner)

    @cached_property
    def d(self) -> int:
        """Number of colors: one past the largest color in the game."""
        return max(self.color) + 1 if self.owner else 1

    def player_nodes(self, player: int) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.owner[v] == player)


_HEADER_RE = re.compile(r"^\s*parity\s+(\d+)\s*;\s*$")
_NODE_RE = re.compile(
    r'^\s*(\d+)\s+(\d+)\s+([01])\s+([0-9][0-9,\s]*?)\s*(?:"([^"]*)")?\s*;\s*$'
)


def parse_pgsolver(text: str) -> ParityGame:
    """Parse PGSolver game text.

    The format is line based: an optional ``parity <maxid>;`` header
    followed by one ``<id> <color> <owner> <succ>,<succ>,... ["name"];``
    statement per line.  Input is whitespace-tolerant; blank lines are
    skipped.  Raises FormatError on malformed lines, duplicate or gapped
    node ids, and successors that name no declared node.
    """
    entries: dict[int, tuple[int, int, tuple[int, ...], str | None]] = {}
    header_allowed = True
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if header_allowed and _HEADER_RE.match(line):
            header_allowed = False
            continue
        header_allowed = False
        m = _NODE_RE.match(line)
        if not m:
            raise FormatError("line %d: malformed node line: %r" % (lineno, line.strip()))
        node = int(m.group(1))
        if node in entries:
            raise FormatError("line %d: duplicate node id %d" % (lineno, node))
        succs = []
        for piece in m.group(4).split(","):
            piece = piece.strip()
            if not piece:
                raise FormatError("line %d: empty successor entry" % lineno)
            succs.append(int(piece))
        name = m.group(5) or None
        entries[node] = (int(m.group(2)), int(m.group(3)), tuple(succs), name)

    n = len(entries)
    for node in entries:
        if not 0 <= node < n:
            raise FormatError("node ids must form 0..%d, found %d" % (n - 1, node))
    colors, owners, succs, names = [], [], [], []
    for node in range(n):
        color, owner, targets, name = entries[node]
        for t in targets:
            if t not in entries:
                raise FormatError("node %d lists undeclared successor %d" % (node, t))
        colors.append(color)
        owners.append(owner)
        succs.append(targets)
        names.append(name)
    return ParityGame(tuple(owners), tuple(colors), tuple(succs), tuple(names))


def serialize_pgsolver(game: ParityGame) -> str:
    """Render a game in canonical PGSolver text.

    Header always present, nodes in id order, successors comma-separated
    without spaces, names quoted when set, LF line endings.  The output
    re-parses to an identical game and is a fixpoint of parse+serialize.
    """
    lines = ["parity %d;" % (game.n - 1 if game.n else 0)]
    for v in range(game.n):
        entry = "%d %d %d %s" % (v, game.color[v], game.owner[v],
                                 ",".join(str(t) for t in game.successors[v]))
        name = game.names[v]
        if name:
            entry += ' "%s"' % name
        lines.append(entry + ";")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GraphView:
    """A concrete directed-graph slice handed to attractor/cycle analyses.

    `succ` maps every node of `nodes` to its successor tuple inside the
    view.  `color` may omit nodes that cannot lie on a cycle (the sink).
    """

    nodes: tuple[int, ...]
    succ: dict[int, tuple[int, ...]]
    owner: dict[int, int]
    color: dict[int, int]


@dataclass(frozen=True)
class EscapeArena:
    """A parity game extended with an escape sink, possibly restricted.

    `nodes` lists the surviving game nodes (ascending, original ids) and
    `succ` their surviving game successors.  The sink has id `game.n`, is
    owned by player 0 and has no outgoing edges; every surviving player-0
    node has an implicit extra edge to it.
    """

    game: ParityGame
    sink: int
    nodes: tuple[int, ...]
    succ: dict[int, tuple[int, ...]]

    @property
    def d(self) -> int:
        return self.game.d

    def owner(self, v: int) -> int:
        return 0 if v == self.sink else self.game.owner[v]

    def color(self, v: int) -> int:
        return self.game.color[v]

    @cached_property
    def player0_nodes(self) -> tuple[int, ...]:
        return tuple(v for v in self.nodes if self.game.owner[v] == 0)

    @cached_property
    def player1_nodes(self) -> tuple[int, ...]:
        return tuple(v for v in self.nodes if self.game.owner[v] == 1)

    @cached_property
    def escape_choices(self) -> dict[int, tuple[int, ...]]:
        """Per player-0 node: its game successors plus the sink."""
        return {v: self.succ[v] + (self.sink,) for v in self.player0_nodes}

    def restrict(self, keep: Iterable[int]) -> "EscapeArena":
        kept = set(keep)
        nodes = tuple(v for v in self.nodes if v in kept)
        succ = {v: tuple(t for t in self.succ[v] if t in kept) for v in nodes}
        return EscapeArena(self.game, self.sink, nodes, succ)

    def strategy_view(self, choices: Mapping[int, tuple[int, ...]]) -> GraphView:
        """The arena restricted to a player-0 edge set: player-1 nodes keep
        all their edges, player-0 nodes keep exactly `choices[v]`."""
        owner_of = self.game.owner
        succ = {v: self.succ[v] if owner_of[v] == 1 else tuple(choices[v])
                for v in self.nodes}
        succ[self.sink] = ()
        owner = {v: owner_of[v] for v in self.nodes}
        owner[self.sink] = 0
        color = {v: self.game.color[v] for v in self.nodes}
        return GraphView(self.nodes + (self.sink,), succ, owner, color)

    def player1_view(self) -> GraphView:
        """The subgraph induced by player-1 nodes (no sink, no escapes)."""
        owner_of = self.game.owner
        nodes = self.player1_nodes
        member = set(nodes)
        succ = {v: tuple(t for t in self.succ[v] if t in member) for v in nodes}
        owner = {v: 1 for v in nodes}
        color = {v: self.game.color[v] for v in nodes}
        return GraphView(nodes, succ, owner, color)

    def game_view(self) -> GraphView:
        """The plain game graph of the surviving nodes: no sink, no escapes."""
        owner = {v: self.game.owner[v] for v in self.nodes}
        color = {v: self.game.color[v] for v in self.nodes}
        return GraphView(self.nodes, dict(self.succ), owner, color)


def build_escape_arena(game: ParityGame) -> EscapeArena:
    """Wrap a game in its escape arena; the sink gets id `game.n`."""
    nodes = tuple(range(game.n))
    return EscapeArena(game, game.n, nodes, {v: game.successors[v] for v in nodes})


@dataclass(frozen=True)
class AttractorResult:
    """Attractor membership with BFS ranks and one attracting edge per
    attracting-player member of positive rank."""

    members: frozenset[int]
    rank: dict[int, int]
    strategy: dict[int, int]


def attractor(view: GraphView, player: int, target: Iterable[int]) -> AttractorResult:
    """Nodes from which `player` can force the play into `target`.

    Rank 0 is the target itself; rank r+1 adds nodes owned by `player`
    with some successor of rank <= r and opponent nodes whose successors
    all have rank <= r.  Opponent dead ends count as attracted.  For each
    attracting-player member of positive rank the strategy picks the
    smallest-id successor of strictly smaller rank.
    """
    node_set = set(view.nodes)
    rank: dict[int, int] = {}
    for t in target:
        if t not in node_set:
            raise ValueError("target node %d is not in the view" % t)
        rank[t] = 0

    preds: dict[int, list[int]] = {v: [] for v in view.nodes}
    for v in view.nodes:
        for t in view.succ[v]:
            preds[t].append(v)
    remaining = {v: len(view.succ[v]) for v in view.nodes
                 if view.owner[v] != player and v not in rank}

    current = sorted(rank)
    level = 0
    while True:
        level += 1
        fresh: set[int] = set()
        if level == 1:
            fresh.update(v for v, k in remaining.items() if k == 0)
        for u in current:
            for v in preds[u]:
                if v in rank or v in fresh:
                    continue
                if view.owner[v] == player:
                    fresh.add(v)
                else:
                    remaining[v] -= 1
                    if remaining[v] == 0:
                        fresh.add(v)
        if not fresh:
            break
        for v in fresh:
            rank[v] = level
        current = sorted(fresh)

    strategy: dict[int, int] = {}
    for v, r in rank.items():
        if r > 0 and view.owner[v] == player:
            strategy[v] = min(t for t in view.succ[v] if rank.get(t, r) < r)
    return AttractorResult(frozenset(rank), rank, strategy)


def _sccs(order: Iterable[int], succ: Mapping[int, tuple[int, ...]],
          allowed: set[int]) -> Iterator[list[int]]:
    """Strongly connected components of the subgraph induced by `allowed`,
    explored in the given root order.  Iterative Tarjan variant."""
    preorder: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    done: set[int] = set()
    component_stack: list[int] = []
    pending = {v: iter(succ[v]) for v in order}
    counter = 0
    for source in order:
        if source in done:
            continue
        stack = [source]
        while stack:
            v = stack[-1]
            if v not in preorder:
                counter += 1
                preorder[v] = counter
            descend = False
            for t in pending[v]:
                if t in allowed and t not in preorder:
                    stack.append(t)
                    descend = True
                    break
            if descend:
                continue
            low = preorder[v]
            for t in succ[v]:
                if t in allowed and t not in done:
                    low = min(low, lowlink[t] if preorder[t] > preorder[v] else preorder[t])
            lowlink[v] = low
            stack.pop()
            if low == preorder[v]:
                comp = [v]
                while component_stack and preorder[component_stack[-1]] > preorder[v]:
                    comp.append(component_stack.pop())
                done.update(comp)
                yield comp
            else:
                component_stack.append(v)


def find_dominated_cycle_nodes(view: GraphView, parity: int) -> frozenset[int]:
    """Nodes lying on some cycle whose maximum color has the given parity.

    For each color c of that parity, from highest to lowest, the subgraph
    of nodes colored <= c is decomposed into strongly connected components;
    every component that contains a node of color c and at least one edge
    (two nodes, or a self-loop) consists entirely of such cycle nodes.
    Nodes absent from `view.color` cannot lie on a cycle and are skipped.
    """
    colored = [v for v in view.nodes if v in view.color]
    wanted = sorted({view.color[v] for v in colored if view.color[v] % 2 == parity},
                    reverse=True)
    result: set[int] = set()
    for c in wanted:
        allowed_order = [v for v in colored if view.color[v] <= c]
        allowed = set(allowed_order)
        for comp in _sccs(allowed_order, view.succ, allowed):
            if len(comp) == 1 and comp[0] not in view.succ[comp[0]]:
                continue
            if any(view.color[v] == c for v in comp):
                result.update(comp)
    return frozenset(result)


def find_one_dominated_cycle_nodes(view: GraphView) -> frozenset[int]:
    """Nodes on some cycle whose maximum color is odd."""
    return find_dominated_cycle_nodes(view, 1)


def dominated_cycle_strategy(view: GraphView) -> dict[int, int]:
    """One edge per odd-cycle node that keeps every resulting cycle odd.

    Within each marked component a witness node of the stage color is
    fixed; other members follow a shortest path towards the witness and
    the witness re-enters the component.  Any cycle the chosen edges can
    form then passes through a witness and stays below its color, so its
    maximum color is that odd stage color.
    """
    colored = [v for v in view.nodes if v in view.color]
    odd_colors = sorted({view.color[v] for v in colored if view.color[v] % 2 == 1},
                        reverse=True)
    assigned: dict[int, int] = {}
    for c in odd_colors:
        allowed_order = [v for v in colored if view.color[v] <= c]
        allowed = set(allowed_order)
        for comp in _sccs(allowed_order, view.succ, allowed):
            comp_set = set(comp)
            if len(comp) == 1 and comp[0] not in view.succ[comp[0]]:
                continue
            witnesses = sorted(v for v in comp if view.color[v] == c)
            if not witnesses:
                continue
            x = witnesses[0]
            rpred: dict[int, list[int]] = {v: [] for v in comp_set}
            for v in sorted(comp_set):
                for t in view.succ[v]:
                    if t in comp_set:
                        rpred[t].append(v)
            dist = {x: 0}
            queue = deque([x])
            while queue:
                u = queue.popleft()
                for v in rpred[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        queue.append(v)
            for v in sorted(comp_set):
                if v in assigned:
                    continue
                if v == x:
                    assigned[v] = min(t for t in view.succ[v] if t in comp_set)
                else:
                    assigned[v] = min(t for t in view.succ[v]
                                      if t in comp_set and dist[t] == dist[v] - 1)
    return assigned


@dataclass(frozen=True)
class PreprocessResult:
    """Reduced arena plus everything needed to win on the removed part."""

    arena: EscapeArena
    pre_won: frozenset[int]
    dominated: frozenset[int]
    attractor: AttractorResult
    dominated_strategy: dict[int, int]


def preprocess(arena: EscapeArena) -> PreprocessResult:
    """Strip the part of the arena player 1 wins without seeing a single
    player-0 choice.

    Nodes on odd-dominated cycles of the player-1 subgraph, together with
    their player-1 attractor in the plain game graph (escape edges do not
    help player 0 here: they only end the play, which loses the original
    game), are removed.  The remaining arena has no odd-dominated cycle
    among player-1 nodes, which the function asserts.
    """
    dominated = find_one_dominated_cycle_nodes(arena.player1_view())
    att = attractor(arena.game_view(), 1, sorted(dominated))
    pre_won = att.members
    reduced = arena.restrict(v for v in arena.nodes if v not in pre_won)
    for v in reduced.player1_nodes:
        if not reduced.succ[v]:
            raise InvariantViolation("surviving player-1 node %d lost all successors" % v)
    if find_one_dominated_cycle_nodes(reduced.player1_view()):
        raise InvariantViolation("reduced arena still has an odd player-1 cycle")
    dom_strategy = dominated_cycle_strategy(arena.player1_view()) if dominated else {}
    return PreprocessResult(reduced, pre_won, dominated, att, dom_strategy)


def reachable(succ: Mapping[int, tuple[int, ...]], starts: Iterable[int]) -> set[int]:
    """Forward closure of `starts` under the successor map."""
    seen = set(starts)
    queue = deque(sorted(seen))
    while queue:
        v = queue.popleft()
        for t in succ[v]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen
