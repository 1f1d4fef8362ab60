"""
Two ways to write the same constraint
=====================================

The positional form uses one variable per (vertex, step) pair and works on any
graph.  The edge form uses one variable per edge and only makes sense when
the graph has no directed cycle.
"""

import itertools

import numpy as np

from olcanneal import (brute_force, edge_qubo, graph_from_sequence, positional_qubo,
                       qubo_to_ising)

g = graph_from_sequence("ATCGGA", k=3)
print("vertices:", g.labels(), " acyclic:", g.is_acyclic())

pq, pmap = positional_qubo(g)
eq, emap = edge_qubo(g)
print("positional variables:", pq.n, " edge variables:", eq.n)

# every edge-form configuration, sorted by objective
table = sorted((eq.energy(bits), bits) for bits in itertools.product((0, 1), repeat=eq.n))
for value, bits in table[:4]:
    chosen = [emap.key(i) for i, b in enumerate(bits) if b]
    print(f"  objective {value}: edges {chosen}")

# the minimum of the edge form is 2A (one source, one sink), the positional one is 0
print("positional ground:", brute_force(qubo_to_ising(pq)).ground_energy)
print("edge ground      :", brute_force(qubo_to_ising(eq)).ground_energy)

# the Ising form is the same function of the spins s = 2x - 1
m = qubo_to_ising(eq)
bits = np.array(table[0][1])
print("check:", m.offset + sum(c * (2 * bits[i] - 1) for i, c in m.h.items())
      + sum(c * (2 * bits[i] - 1) * (2 * bits[j] - 1) for (i, j), c in m.J.items()))
