"""Exact rational max-flow (Edmonds-Karp) with min-cut extraction.

Capacities are Fractions or None (unbounded); augmenting paths are shortest
first with deterministic edge order, so flows and cuts are reproducible.
Arithmetic is exact, so termination needs no epsilon.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction


class FlowNetwork:
    def __init__(self):
        self._adj: dict[object, list[int]] = {}
        self._edges: list[list] = []  # [u, v, capacity(None = unbounded), flow]

    def add_node(self, node):
        self._adj.setdefault(node, [])

    def add_edge(self, u, v, capacity):
        """Add edge u->v (capacity None = unbounded) plus its reverse arc."""
        if capacity is not None:
            capacity = Fraction(capacity)
            if capacity < 0:
                raise ValueError("negative capacity")
        self.add_node(u)
        self.add_node(v)
        self._edges.append([u, v, capacity, Fraction(0)])
        self._edges.append([v, u, Fraction(0), Fraction(0)])
        self._adj[u].append(len(self._edges) - 2)
        self._adj[v].append(len(self._edges) - 1)

    def _residual(self, eid: int):
        _, _, cap, flow = self._edges[eid]
        return None if cap is None else cap - flow

    def max_flow(self, source, sink) -> Fraction:
        self.add_node(source)
        self.add_node(sink)
        total = Fraction(0)
        while True:
            parent_edge = {source: None}
            queue = deque([source])
            while queue and sink not in parent_edge:
                u = queue.popleft()
                for eid in self._adj[u]:
                    v = self._edges[eid][1]
                    if v in parent_edge:
                        continue
                    r = self._residual(eid)
                    if r is None or r > 0:
                        parent_edge[v] = eid
                        queue.append(v)
            if sink not in parent_edge:
                return total
            bottleneck = None
            v = sink
            while v != source:
                eid = parent_edge[v]
                r = self._residual(eid)
                if r is not None and (bottleneck is None or r < bottleneck):
                    bottleneck = r
                v = self._edges[eid][0]
            if bottleneck is None:
                raise ValueError("unbounded augmenting path: flow is infinite")
            v = sink
            while v != source:
                eid = parent_edge[v]
                self._edges[eid][3] += bottleneck
                self._edges[eid ^ 1][3] -= bottleneck
                v = self._edges[eid][0]
            total += bottleneck

    def flow_on(self, u, v) -> Fraction:
        total = Fraction(0)
        for eid in self._adj.get(u, ()):
            e = self._edges[eid]
            if e[1] == v and e[3] > 0:
                total += e[3]
        return total

    def positive_flows(self):
        """All (u, v) -> flow entries with positive flow on forward edges."""
        out = {}
        for eid in range(0, len(self._edges), 2):
            u, v, _, flow = self._edges[eid]
            if flow > 0:
                out[(u, v)] = out.get((u, v), Fraction(0)) + flow
        return out.items()

    def residual_reachable(self, source) -> set:
        """Nodes reachable from source in the residual graph (a min cut)."""
        seen = {source}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for eid in self._adj[u]:
                v = self._edges[eid][1]
                if v in seen:
                    continue
                r = self._residual(eid)
                if r is None or r > 0:
                    seen.add(v)
                    queue.append(v)
        return seen
