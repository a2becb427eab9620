"""Conjugacy-class graphs and the norms they induce.

The graph on the conjugacy classes of G, relative to a set of generating
classes, joins x and y whenever x lies inside c*y for some generating class
c; it is treated as undirected.  BFS distance from the identity class gives
a norm; classes outside the identity's component take the maximum distance
within that component, which keeps the result a (semi)norm.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .groups import ClassPartition, FiniteGroup, class_product, conjugacy_classes
from .metrics import Norm, Value


@dataclass(frozen=True)
class ConjGraph:
    group: FiniteGroup
    partition: ClassPartition
    gen_classes: tuple[int, ...]
    adjacency: tuple[frozenset[int], ...]

    @property
    def n_vertices(self) -> int:
        return len(self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as sorted (x, y) pairs, x <= y, deterministic order."""
        out = []
        for x, nbrs in enumerate(self.adjacency):
            for y in sorted(nbrs):
                if x <= y:
                    out.append((x, y))
        return out


def build_graph(group: FiniteGroup, gen_classes: Sequence[int]) -> ConjGraph:
    """Edge (x, y) iff x is contained in c*y for some generating class c,
    symmetrized afterwards so the graph is undirected even when the
    generating set is not inverse-closed."""
    partition = conjugacy_classes(group)
    for c in gen_classes:
        if not 0 <= c < partition.n_classes:
            raise ValueError(f"class id {c} out of range for {group.label}")
    adj: list[set[int]] = [set() for _ in range(partition.n_classes)]
    for y in range(partition.n_classes):
        for c in gen_classes:
            for x in class_product(partition, c, y):
                adj[x].add(y)
                adj[y].add(x)
    return ConjGraph(
        group,
        partition,
        tuple(sorted(set(gen_classes))),
        tuple(frozenset(s) for s in adj),
    )


@dataclass(frozen=True)
class GraphNorm:
    graph: ConjGraph
    dist: tuple[Optional[int], ...]  # BFS distance; None = unreachable
    max_reachable: int

    def reachable(self, cid: int) -> bool:
        return self.dist[cid] is not None

    def class_value(self, cid: int) -> int:
        d = self.dist[cid]
        return self.max_reachable if d is None else d

    def value(self, element: int) -> int:
        return self.class_value(self.graph.partition.class_of[element])

    def to_norm(self, scale: Value = 1, label: Optional[str] = None) -> Norm:
        if scale <= 0:
            raise ValueError(f"scale must be positive, got {scale!r}")
        if label is None:
            names = ",".join(
                self.graph.partition.class_label(c) for c in self.graph.gen_classes
            )
            label = f"graph[{names}]"
            if scale != 1:
                label = f"{scale}*{label}"
        values = [
            scale * Fraction(self.class_value(cid))
            for cid in range(self.graph.n_vertices)
        ]
        return Norm(self.graph.group, values, label)


def graph_norm(group: FiniteGroup, gen_classes: Sequence[int]) -> GraphNorm:
    """BFS distances from the identity class in the conjugacy-class graph."""
    graph = build_graph(group, gen_classes)
    dist: list[Optional[int]] = [None] * graph.n_vertices
    dist[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in sorted(graph.adjacency[x]):
            if dist[y] is None:
                dist[y] = dist[x] + 1
                queue.append(y)
    max_reachable = max(d for d in dist if d is not None)
    return GraphNorm(graph, tuple(dist), max_reachable)


def scaled_graph_metric(group: FiniteGroup, gen_classes: Sequence[int], epsilon: Value) -> Norm:
    """The norm epsilon * (graph distance), as used to manufacture metrics
    for separation arguments."""
    return graph_norm(group, gen_classes).to_norm(scale=epsilon)


def edge_lines(graph: ConjGraph) -> list[str]:
    """Edge list as `<label> -- <label>` lines, sorted by class id pairs."""
    lab = graph.partition.class_label
    return [f"{lab(x)} -- {lab(y)}" for x, y in graph.edges()]


def to_dot(graph: ConjGraph, name: str = "conjgraph") -> str:
    """DOT text for external rendering."""
    lab = graph.partition.class_label
    lines = [f"graph {name} {{"]
    for cid in range(graph.n_vertices):
        lines.append(f'  "{lab(cid)}";')
    for x, y in graph.edges():
        lines.append(f'  "{lab(x)}" -- "{lab(y)}";')
    lines.append("}")
    return "\n".join(lines)
