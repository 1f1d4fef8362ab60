"""End-to-end helpers: graph -> QUBO -> Ising -> solver -> path."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .assembly import GraphPath, decode, merge_partition_paths, validate_hamiltonian_path
from .errors import DecodeError, InvalidArgument
from .formulation import (POSITIONAL, IsingProblem, QuboProblem, VariableMap, build_qubo,
                          normalize_ising, qubo_to_ising)
from .olcgraph import Edge, Fragment, OlcGraph, bridge_decompose
from .solvers import BRUTE_FORCE_CAP, SimCimParams, SolveResult, brute_force, energy, simcim_solve

SOLVERS = ("simcim", "brute", "auto")


@dataclass
class CompiledProblem:
    qubo: QuboProblem
    vmap: VariableMap
    ising: IsingProblem  # normalised
    scale: Fraction

    def objective(self, spins) -> Fraction:
        """QUBO objective of a spin configuration of the normalised problem."""
        e = energy(self.ising, spins)
        return (e - self.ising.offset) * self.scale + self.ising.offset

    def normalized_energy(self, objective) -> Fraction:
        off = self.ising.offset
        return (Fraction(objective) - off) / self.scale + off


def compile_graph(g: OlcGraph, encoding: str = POSITIONAL, A=1) -> CompiledProblem:
    q, vmap = build_qubo(g, encoding, A)
    ising, scale = normalize_ising(qubo_to_ising(q))
    return CompiledProblem(q, vmap, ising, scale)


@dataclass
class GraphSolution:
    problem: CompiledProblem
    result: SolveResult
    path: GraphPath | None
    error: str | None = None

    @property
    def valid(self) -> bool:
        return self.path is not None


def run_solver(ising: IsingProblem, solver: str = "auto", params: SimCimParams | None = None,
               cap: int = BRUTE_FORCE_CAP, ground_energy_reference: float | None = None) -> SolveResult:
    if solver not in SOLVERS:
        raise InvalidArgument(f"unknown solver {solver!r}")
    if solver == "brute" or (solver == "auto" and ising.n <= cap):
        bf = brute_force(ising, cap=cap)
        e = float(bf.ground_energy)
        return SolveResult(bf.ground_configs[0], e, [], e)
    return simcim_solve(ising, params, ground_energy_reference)


def solve_graph(g: OlcGraph, encoding: str = POSITIONAL, A=1, solver: str = "auto",
                params: SimCimParams | None = None) -> GraphSolution:
    problem = compile_graph(g, encoding, A)
    result = run_solver(problem.ising, solver, params)
    try:
        path = decode(result.best_config, problem.vmap, g)
    except DecodeError as exc:
        return GraphSolution(problem, result, None, str(exc))
    if not validate_hamiltonian_path(g, path):
        return GraphSolution(problem, result, None, "decoded path is not Hamiltonian")
    return GraphSolution(problem, result, path)


def anchored_part(g: OlcGraph, part_ids, incoming: Edge | None, outgoing: Edge | None):
    """Subgraph of ``part_ids`` plus pendant anchor vertices for its bridges.

    The incoming bridge tail gets no in-edges and the outgoing bridge head no
    out-edges, so every Hamiltonian path of the result enters through the
    incoming bridge and leaves through the outgoing one.  Returns the graph,
    the list of original ids per new vertex and the anchor positions.
    """
    ids = list(part_ids)
    head = tail = None
    if incoming is not None:
        head = len(ids)
        ids.append(incoming.u)
    if outgoing is not None:
        tail = len(ids)
        ids.append(outgoing.v)
    local = {old: new for new, old in enumerate(ids)}
    part = set(part_ids)
    edges = [Edge(local[e.u], local[e.v], e.overlap) for e in g.edges if e.u in part and e.v in part]
    if incoming is not None:
        edges.append(Edge(head, local[incoming.v], incoming.overlap))
    if outgoing is not None:
        edges.append(Edge(local[outgoing.u], tail, outgoing.overlap))
    verts = tuple(Fragment(i, g.vertices[old].label) for i, old in enumerate(ids))
    return OlcGraph(verts, tuple(edges)), ids, (head, tail)


def solve_partitioned(g: OlcGraph, encoding: str = POSITIONAL, A=1, solver: str = "auto",
                      params: SimCimParams | None = None):
    """Solve each bridge-separated part on its own and stitch the paths.

    Returns ``(path, part_solutions)``; ``path`` is ``None`` when any part
    fails to decode.
    """
    parts = bridge_decompose(g)
    stitched = []
    solutions = []
    incoming = None
    for part in parts:
        sub, ids, (head, tail) = anchored_part(g, part.vertex_ids, incoming, part.bridge)
        sol = solve_graph(sub, encoding, A, solver, params)
        solutions.append(sol)
        if sol.path is None:
            return None, solutions
        order = [ids[v] for v in sol.path.vertices]
        if head is not None:
            order = order[1:]
        if tail is not None:
            order = order[:-1]
        stitched.append((GraphPath.through(g, order), part.bridge))
        incoming = part.bridge
    return merge_partition_paths(stitched), solutions
