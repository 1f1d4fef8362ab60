"""Turn solver output back into paths and sequences."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import CorruptionError, DecodeError, InvalidArgument, InvalidPathError, StitchError
from .formulation import EDGE, POSITIONAL, VariableMap
from .olcgraph import Edge, OlcGraph


@dataclass(frozen=True)
class GraphPath:
    vertices: tuple[int, ...]
    edges_used: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        object.__setattr__(self, "edges_used", tuple(Edge(*e) for e in self.edges_used))
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidPathError("path repeats a vertex")
        if len(self.edges_used) != max(len(self.vertices) - 1, 0):
            raise InvalidPathError("path needs exactly one edge between consecutive vertices")
        for (a, b), e in zip(zip(self.vertices, self.vertices[1:]), self.edges_used):
            if (e.u, e.v) != (a, b):
                raise InvalidPathError(f"edge {e} does not join {a} -> {b}")

    @classmethod
    def through(cls, g: OlcGraph, vertices: Sequence[int]) -> "GraphPath":
        """Build the path visiting ``vertices`` in order, using the edges of ``g``."""
        edges = []
        for a, b in zip(vertices, vertices[1:]):
            ov = g.overlap(a, b)
            if ov is None:
                raise InvalidPathError(f"no edge {a} -> {b} in graph",
                                       {"missing_edge": [int(a), int(b)]})
            edges.append(Edge(a, b, ov))
        return cls(tuple(vertices), tuple(edges))

    def __len__(self):
        return len(self.vertices)


def _as_bits(config) -> np.ndarray:
    c = np.asarray(list(config), dtype=np.int64)
    vals = set(np.unique(c).tolist())
    if vals <= {0, 1}:
        return c
    if vals <= {-1, 1}:
        return (c + 1) // 2
    raise DecodeError(f"configuration must be all 0/1 bits or all -1/+1 spins, saw {sorted(vals)}")


def decode_positional(config, vmap: VariableMap, g: OlcGraph) -> GraphPath:
    if vmap.encoding != POSITIONAL:
        raise InvalidArgument(f"expected a positional variable map, got {vmap.encoding!r}")
    n = g.n
    bits = _as_bits(config)
    if len(bits) != n * n or len(vmap) != n * n:
        raise InvalidArgument(f"positional configuration for {n} vertices needs {n * n} values")
    x = np.zeros((n, n), dtype=np.int64)
    for var, (v, j) in enumerate(vmap.reverse):
        x[v, j] = bits[var]
    row_deficit = {int(v): int(1 - s) for v, s in enumerate(x.sum(axis=1)) if s != 1}
    col_deficit = {int(j): int(1 - s) for j, s in enumerate(x.sum(axis=0)) if s != 1}
    if row_deficit or col_deficit:
        raise DecodeError(
            f"not a permutation matrix: vertex deficits {row_deficit}, step deficits {col_deficit}",
            {"row_deficit": row_deficit, "column_deficit": col_deficit})
    order = [int(np.flatnonzero(x[:, j])[0]) for j in range(n)]
    return GraphPath.through(g, order)


def decode_edges(config, vmap: VariableMap, g: OlcGraph) -> GraphPath:
    if vmap.encoding != EDGE:
        raise InvalidArgument(f"expected an edge variable map, got {vmap.encoding!r}")
    bits = _as_bits(config)
    if len(bits) != len(vmap):
        raise InvalidArgument(f"edge configuration needs {len(vmap)} values, got {len(bits)}")
    chosen = [vmap.key(i) for i in np.flatnonzero(bits)]
    succ, pred = {}, {}
    out_bad, in_bad = set(), set()
    for u, v in chosen:
        if u in succ:
            out_bad.add(u)
        if v in pred:
            in_bad.add(v)
        succ[u], pred[v] = v, u
    if out_bad or in_bad:
        raise DecodeError(
            f"degree violation: out-degree > 1 at {sorted(out_bad)}, in-degree > 1 at {sorted(in_bad)}",
            {"out_degree_violations": sorted(out_bad), "in_degree_violations": sorted(in_bad)})

    covered = set(succ) | set(pred)
    isolated = [v for v in range(g.n) if v not in covered]
    if g.n > 1 and isolated:
        raise DecodeError(f"incomplete cover: vertices {isolated} are not on the path",
                          {"uncovered": isolated})
    starts = sorted(v for v in range(g.n) if v not in pred)
    if len(starts) != 1:
        raise DecodeError(f"selection splits into {len(starts)} path components starting at {starts}",
                          {"path_starts": starts})
    order = [starts[0]]
    while order[-1] in succ and len(order) <= g.n:
        order.append(succ[order[-1]])
    if len(order) != g.n:
        raise DecodeError("selection contains a cycle or misses vertices",
                          {"path": order})
    return GraphPath.through(g, order)


def decode(config, vmap: VariableMap, g: OlcGraph) -> GraphPath:
    if vmap.encoding == POSITIONAL:
        return decode_positional(config, vmap, g)
    return decode_edges(config, vmap, g)


def encode_positional(path: GraphPath, vmap: VariableMap) -> list[int]:
    bits = [0] * len(vmap)
    for step, v in enumerate(path.vertices):
        bits[vmap.index((v, step))] = 1
    return bits


def encode_edges(path: GraphPath, vmap: VariableMap) -> list[int]:
    bits = [0] * len(vmap)
    for e in path.edges_used:
        bits[vmap.index((e.u, e.v))] = 1
    return bits


def validate_hamiltonian_path(g: OlcGraph, p: GraphPath | Sequence[int]) -> bool:
    vertices = p.vertices if isinstance(p, GraphPath) else tuple(p)
    if len(vertices) != g.n or set(vertices) != set(range(g.n)):
        return False
    return all(g.has_edge(a, b) for a, b in zip(vertices, vertices[1:]))


def hamiltonian_paths(g: OlcGraph) -> Iterator[tuple[int, ...]]:
    """Yield every Hamiltonian path of ``g`` by depth-first extension."""
    succ = {v: [] for v in range(g.n)}
    for e in g.edges:
        succ[e.u].append(e.v)
    path: list[int] = []
    used = [False] * g.n

    def extend():
        if len(path) == g.n:
            yield tuple(path)
            return
        for w in (succ[path[-1]] if path else range(g.n)):
            if not used[w]:
                used[w] = True
                path.append(w)
                yield from extend()
                path.pop()
                used[w] = False

    if g.n:
        yield from extend()


def count_hamiltonian_paths(g: OlcGraph, limit: int | None = None) -> int:
    count = 0
    for _ in hamiltonian_paths(g):
        count += 1
        if limit is not None and count >= limit:
            break
    return count


def reconstruct_sequence(p: GraphPath, g: OlcGraph) -> str:
    if not p.vertices:
        raise InvalidArgument("cannot reconstruct from an empty path")
    labels = g.labels()
    seq = labels[p.vertices[0]]
    for e in p.edges_used:
        a, b = labels[e.u], labels[e.v]
        if g.overlap(e.u, e.v) != e.overlap or a[-e.overlap:] != b[:e.overlap]:
            raise CorruptionError(f"stored overlap {e.overlap} for {e.u} -> {e.v} does not match labels")
        seq += b[e.overlap:]
    return seq


def merge_partition_paths(parts: Sequence[tuple[GraphPath, Edge | None]]) -> GraphPath:
    """Concatenate per-part paths (original vertex ids) through their bridges."""
    if not parts:
        raise InvalidArgument("nothing to merge")
    vertices: list[int] = []
    edges: list[Edge] = []
    for i, (path, bridge) in enumerate(parts):
        vertices.extend(path.vertices)
        edges.extend(path.edges_used)
        if i + 1 == len(parts):
            if bridge is not None:
                raise StitchError(f"last part has dangling bridge {tuple(bridge)}")
            break
        if bridge is None:
            raise StitchError(f"part {i} has no bridge to part {i + 1}")
        bridge = Edge(*bridge)
        nxt = parts[i + 1][0]
        if path.vertices[-1] != bridge.u or nxt.vertices[0] != bridge.v:
            raise StitchError(
                f"bridge {bridge.u} -> {bridge.v} does not join part {i} (ends at "
                f"{path.vertices[-1]}) to part {i + 1} (starts at {nxt.vertices[0]})")
        edges.append(bridge)
    return GraphPath(tuple(vertices), tuple(edges))


def assembly_report(g: OlcGraph, path: GraphPath | None, energy=None, error: str | None = None,
                    metadata: dict | None = None) -> dict:
    report = {"metadata": metadata} if metadata is not None else {}
    valid = path is not None and validate_hamiltonian_path(g, path)
    report.update({
        "path": list(path.vertices) if path is not None else None,
        "sequence": reconstruct_sequence(path, g) if valid else None,
        "valid": valid,
        "energy": None if energy is None else float(energy),
        "error": error,
    })
    return report


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
