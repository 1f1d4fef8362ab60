"""
Assembling a short sequence end to end
======================================

A random sequence is cut into 3-mers, the overlaps become a directed graph,
and the Hamiltonian path through that graph is found as the minimum of a QUBO.
"""

from olcanneal import (compile_graph, decode_positional, generate_sequence, graph_from_sequence,
                       reconstruct_sequence, simcim_solve, SimCimParams)

seq = generate_sequence(8, seed=14)
print("original :", seq)

# vertices are the k-mers, edges carry the overlap length
g = graph_from_sequence(seq, k=3)
for e in g.edges:
    print(f"  {g.vertices[e.u].label} -> {g.vertices[e.v].label}  overlap {e.overlap}")

# n vertices give n*n binary variables x[v, position]
problem = compile_graph(g)
print("variables:", problem.qubo.n, " coupling scale:", problem.scale)

# SimCIM works on the normalised Ising form
result = simcim_solve(problem.ising, SimCimParams(attempts=200, seed=1))
print("best QUBO objective:", problem.objective(result.best_config))

path = decode_positional(result.best_config, problem.vmap, g)
print("path     :", path.vertices)
print("assembled:", reconstruct_sequence(path, g))
