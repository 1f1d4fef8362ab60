"""De novo assembly of short reads as Hamiltonian path QUBOs, solved with SimCIM."""

__version__ = "0.1.0"

from .assembly import (GraphPath, count_hamiltonian_paths, decode_edges, decode_positional,
                       hamiltonian_paths, merge_partition_paths, reconstruct_sequence,
                       validate_hamiltonian_path)
from .bench import CampaignSpec, TtsReport, estimate_theta, r99, run_campaign, tts
from .formulation import (IsingProblem, QuboProblem, VariableMap, edge_qubo,
                          estimate_physical_qubits, ising_to_qubo, normalize_ising,
                          positional_qubo, qubo_to_ising)
from .olcgraph import (Edge, Fragment, OlcGraph, bridge_decompose, build_olc_graph,
                       detect_overlap, generate_sequence, graph_from_sequence, shred_to_kmers)
from .pipeline import compile_graph, solve_graph, solve_partitioned
from .solvers import (SimCimParams, SolveResult, brute_force, energy, simcim_attempt,
                      simcim_solve)
