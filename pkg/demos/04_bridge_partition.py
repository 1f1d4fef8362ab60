"""
Splitting a graph at its bridges
================================

An edge whose removal disconnects the graph must be on every Hamiltonian
path.  The pieces on either side can be solved on their own and joined.
"""

from olcanneal import (Edge, Fragment, OlcGraph, bridge_decompose, reconstruct_sequence,
                       solve_graph, solve_partitioned)

# two tangled triangles joined by a single overlap
labels = ["ACGTA", "TACCA", "CAACG", "CGGAT", "ATTCG", "CGCAC"]
frags = [Fragment(i, s) for i, s in enumerate(labels)]
edges = [Edge(0, 1, 2), Edge(1, 2, 2), Edge(2, 0, 3), Edge(2, 3, 2),
         Edge(3, 4, 2), Edge(4, 5, 2), Edge(5, 3, 1)]
g = OlcGraph(tuple(frags), tuple(edges))

for part in bridge_decompose(g):
    print("part", part.vertex_ids, "leaves through", part.bridge)

# each part plus a pendant vertex for its bridge is a 16-variable problem
path, parts = solve_partitioned(g)
print("partitioned:", path.vertices, reconstruct_sequence(path, g))
print("sub-problem sizes:", [s.problem.qubo.n for s in parts])

# the whole graph would need 36 variables
whole = solve_graph(g)
print("whole graph:", whole.path.vertices if whole.valid else whole.error)
