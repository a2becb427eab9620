#!/usr/bin/env python3
"""Build the conjugacy-class graph of S5 generated by the transposition
class, print its edges and BFS distances, and show the unreachable-class
convention on the double-transposition graph."""

from conjlab.conjgraph import build_graph, edge_lines, graph_norm, to_dot
from conjlab.groups import conjugacy_classes, symmetric_group

s5 = symmetric_group(5)
part = conjugacy_classes(s5)
c2 = part.class_by_label("C2")

graph = build_graph(s5, [c2])
print("Graph on the 7 classes of S5, edge (x, y) iff x lies in C2 * y:")
for line in edge_lines(graph):
    print("  " + line)

gn = graph_norm(s5, [c2])
print("\nBFS distance from the identity class = the graph norm:")
for cid in range(part.n_classes):
    print(f"  ||{part.class_label(cid):5s}||_C = {gn.class_value(cid)}")

print("\nOdd classes cannot be reached from even generators; they take the")
print("largest distance inside the identity component instead:")
gn22 = graph_norm(s5, [part.class_by_label("C2,2")])
for cid in range(part.n_classes):
    reach = "reachable" if gn22.reachable(cid) else "UNREACHABLE"
    print(f"  {part.class_label(cid):5s} {reach:12s} value {gn22.class_value(cid)}")

print("\nDOT export (feed to graphviz to draw the picture):\n")
print(to_dot(graph))
