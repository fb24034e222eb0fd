"""Rooted search tree with exact cost-to-come labels.

Every non-root vertex stores its parent edge and that edge's true cost.
Cost labels are kept exact under rewiring by re-deriving each descendant's
label from its parent's, in root-to-leaf order, so `g(child) == g(parent)
+ edge_cost` holds bit-for-bit at all times.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

from .space import State


class SearchTree:
    __slots__ = ("root", "_g", "_parent", "_children", "_edge_cost")

    def __init__(self, root: State):
        self.root = root
        self._g: dict[State, float] = {root: 0.0}
        self._parent: dict[State, State] = {}
        self._children: dict[State, set[State]] = {root: set()}
        self._edge_cost: dict[State, float] = {}

    def __contains__(self, x: State) -> bool:
        return x in self._g

    def __len__(self) -> int:
        return len(self._g)

    @property
    def vertices(self) -> Iterable[State]:
        return self._g.keys()

    def g(self, x: State) -> float:
        """Cost-to-come through the tree; infinite for states not in it."""
        return self._g.get(x, math.inf)

    def parent(self, x: State) -> State | None:
        return self._parent.get(x)

    def children(self, x: State) -> set[State]:
        return self._children.get(x, _EMPTY)

    def edges(self) -> Iterator[tuple[State, State]]:
        for child, parent in self._parent.items():
            yield parent, child

    def edge_weight(self, child: State) -> float:
        return self._edge_cost[child]

    def connect(self, parent: State, child: State, cost: float) -> list[State]:
        """Attach a brand-new vertex below `parent`."""
        if child in self._g:
            raise ValueError(f"{child} is already in the tree")
        if parent not in self._g:
            raise ValueError(f"parent {parent} is not in the tree")
        self._g[child] = self._g[parent] + cost
        self._parent[child] = parent
        self._edge_cost[child] = cost
        self._children[parent].add(child)
        self._children[child] = set()
        return [child]

    def rewire(self, parent: State, child: State, cost: float) -> list[State]:
        """Replace `child`'s parent edge and push the cost change to its subtree.

        Returns the vertices whose cost-to-come changed, child first, in
        top-down order.
        """
        if child not in self._g or parent not in self._g:
            raise ValueError("rewire endpoints must both be in the tree")
        if child == self.root:
            raise ValueError("cannot rewire the tree root")
        old = self._parent.get(child)
        if old is not None:
            self._children[old].discard(child)
        self._parent[child] = parent
        self._edge_cost[child] = cost
        self._children[parent].add(child)
        affected = []
        stack = [child]
        while stack:
            v = stack.pop()
            self._g[v] = self._g[self._parent[v]] + self._edge_cost[v]
            affected.append(v)
            stack.extend(self._children[v])
        return affected

    def remove_vertices(self, doomed: Iterable[State]) -> None:
        """Delete vertices and their incident edges.

        The set must be descendant-closed (a removed vertex's children are
        also removed), which every caller in this package guarantees.
        """
        doomed = set(doomed)
        if self.root in doomed:
            raise ValueError("cannot remove the tree root")
        for v in doomed:
            p = self._parent.pop(v, None)
            if p is not None and p not in doomed:
                self._children[p].discard(v)
            del self._g[v]
            self._edge_cost.pop(v, None)
            self._children.pop(v, None)

    def path_to(self, x: State) -> list[State]:
        """States from the root to x along tree edges."""
        if x not in self._g:
            raise ValueError(f"{x} is not in the tree")
        path = [x]
        while x != self.root:
            x = self._parent[x]
            path.append(x)
        path.reverse()
        return path


_EMPTY: frozenset = frozenset()
