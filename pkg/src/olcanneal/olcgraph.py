"""Reads, k-mers and directed overlap (OLC) graphs.

Sequences are plain ``str`` objects over ``ACGT``.  A graph stores one
:class:`Fragment` per distinct label and at most one :class:`Edge` per ordered
vertex pair, carrying the maximal exact suffix/prefix overlap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import networkx as nx

from .errors import DecompositionError, FastaParseError, InvalidArgument
from .seeding import make_rng

ALPHABET = "ACGT"
_ALPHABET_SET = frozenset(ALPHABET)


def validate_sequence(seq: str) -> str:
    if not seq:
        raise InvalidArgument("sequence must contain at least one base")
    bad = set(seq) - _ALPHABET_SET
    if bad:
        raise InvalidArgument(f"sequence contains non-ACGT symbols: {sorted(bad)}")
    return seq


@dataclass(frozen=True)
class Fragment:
    id: int
    label: str


class Edge(NamedTuple):
    u: int
    v: int
    overlap: int


@dataclass(frozen=True)
class InstanceSpec:
    sequence_length: int
    k: int = 3
    min_overlap: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= self.sequence_length:
            raise InvalidArgument("need 1 <= k <= sequence_length")
        if self.min_overlap is None:
            object.__setattr__(self, "min_overlap", self.k - 1)
        if not 1 <= self.min_overlap <= self.k - 1:
            raise InvalidArgument("need 1 <= min_overlap <= k - 1")


@dataclass(frozen=True)
class OlcGraph:
    """Directed overlap graph with dense vertex ids ``0..N-1``."""

    vertices: tuple[Fragment, ...]
    edges: tuple[Edge, ...]
    _succ: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple(sorted(Edge(*e) for e in self.edges))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

        for i, frag in enumerate(vertices):
            if frag.id != i:
                raise InvalidArgument(f"vertex ids must be dense; got {frag.id} at {i}")
        if len({f.label for f in vertices}) != len(vertices):
            raise InvalidArgument("vertex labels must be distinct")

        succ = {}
        for u, v, ov in edges:
            if u == v:
                raise InvalidArgument(f"self-loop on vertex {u}")
            if not (0 <= u < len(vertices) and 0 <= v < len(vertices)):
                raise InvalidArgument(f"edge ({u}, {v}) references unknown vertex")
            if (u, v) in succ:
                raise InvalidArgument(f"duplicate edge ({u}, {v})")
            a, b = vertices[u].label, vertices[v].label
            if not 0 < ov < min(len(a), len(b)) or a[-ov:] != b[:ov]:
                raise InvalidArgument(f"edge ({u}, {v}) has invalid overlap {ov}")
            succ[(u, v)] = ov
        object.__setattr__(self, "_succ", succ)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def labels(self) -> list[str]:
        return [f.label for f in self.vertices]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._succ

    def overlap(self, u: int, v: int) -> int | None:
        return self._succ.get((u, v))

    def successors(self, u: int) -> list[int]:
        return [e.v for e in self.edges if e.u == u]

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((e.u, e.v, {"overlap": e.overlap}) for e in self.edges)
        return g

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_networkx())

    def induced(self, ids: Iterable[int]) -> tuple["OlcGraph", tuple[int, ...]]:
        """Induced subgraph on ``ids`` (relabelled densely) and the id map back."""
        ids = tuple(sorted(ids))
        index = {old: new for new, old in enumerate(ids)}
        verts = tuple(Fragment(index[i], self.vertices[i].label) for i in ids)
        edges = [Edge(index[e.u], index[e.v], e.overlap)
                 for e in self.edges if e.u in index and e.v in index]
        return OlcGraph(verts, tuple(edges)), ids

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": f.id, "label": f.label} for f in self.vertices],
            "edges": [{"u": e.u, "v": e.v, "overlap": e.overlap} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OlcGraph":
        verts = sorted(data["vertices"], key=lambda d: d["id"])
        return cls(
            tuple(Fragment(int(d["id"]), validate_sequence(d["label"])) for d in verts),
            tuple(Edge(int(d["u"]), int(d["v"]), int(d["overlap"])) for d in data["edges"]),
        )


def generate_sequence(length: int, seed: int) -> str:
    """Uniformly random ``ACGT`` string of ``length`` bases (PCG64 stream)."""
    if length < 1:
        raise InvalidArgument(f"length must be >= 1, got {length}")
    draws = make_rng(seed).integers(0, 4, size=length)
    return "".join(ALPHABET[i] for i in draws)


def shred_to_kmers(seq: str, k: int) -> list[Fragment]:
    """Distinct length-``k`` windows of ``seq`` in order of first occurrence."""
    validate_sequence(seq)
    if not 1 <= k <= len(seq):
        raise InvalidArgument(f"k must satisfy 1 <= k <= {len(seq)}, got {k}")
    seen = {}
    for i in range(len(seq) - k + 1):
        seen.setdefault(seq[i:i + k], len(seen))
    return [Fragment(i, label) for label, i in seen.items()]


def detect_overlap(a: Fragment | str, b: Fragment | str, min_overlap: int) -> int | None:
    """Longest exact suffix(a) == prefix(b) overlap, or ``None`` below ``min_overlap``.

    Overlaps are strictly shorter than both labels, so containment is never an
    overlap.
    """
    a = a.label if isinstance(a, Fragment) else a
    b = b.label if isinstance(b, Fragment) else b
    for length in range(min(len(a), len(b)) - 1, max(min_overlap, 1) - 1, -1):
        if a[-length:] == b[:length]:
            return length
    return None


def build_olc_graph(fragments: list[Fragment] | list[str], min_overlap: int) -> OlcGraph:
    frags = [f if isinstance(f, Fragment) else Fragment(i, f) for i, f in enumerate(fragments)]
    verts = tuple(Fragment(i, validate_sequence(f.label)) for i, f in enumerate(frags))
    edges = []
    for a in verts:
        for b in verts:
            if a.id == b.id:
                continue
            ov = detect_overlap(a, b, min_overlap)
            if ov is not None:
                edges.append(Edge(a.id, b.id, ov))
    return OlcGraph(verts, tuple(edges))


def graph_from_sequence(seq: str, k: int = 3, min_overlap: int | None = None) -> OlcGraph:
    if min_overlap is None:
        min_overlap = k - 1
    return build_olc_graph(shred_to_kmers(seq, k), min_overlap)


@dataclass(frozen=True)
class GraphPart:
    """One piece of a bridge decomposition.

    ``graph`` is relabelled densely; ``vertex_ids[i]`` is the original id of
    its vertex ``i``.  ``bridge`` is the edge (in original ids) leading into
    the next part, or ``None`` for the last part.
    """

    graph: OlcGraph
    vertex_ids: tuple[int, ...]
    bridge: Edge | None

    def __iter__(self):
        return iter((self.graph, self.bridge))

    def to_original(self, local_id: int) -> int:
        return self.vertex_ids[local_id]

    def to_local(self, original_id: int) -> int:
        return self.vertex_ids.index(original_id)


def bridge_decompose(g: OlcGraph) -> list[GraphPart]:
    """Split ``g`` at bridges of its underlying undirected multigraph.

    Parts are the 2-edge-connected components.  They are returned in the order
    of the bridge tree, which must itself be a path; when it is not, no
    Hamiltonian path can cross the decomposition and
    :class:`DecompositionError` is raised.  Antiparallel edge pairs count as
    two undirected edges and are never bridges.
    """
    und = nx.MultiGraph()
    und.add_nodes_from(range(g.n))
    und.add_edges_from((e.u, e.v) for e in g.edges)
    if g.n == 0 or not nx.is_connected(und):
        raise InvalidArgument("bridge_decompose needs a non-empty weakly connected graph")

    bridge_pairs = {frozenset(p) for p in nx.bridges(und)}
    bridges = [e for e in g.edges if frozenset((e.u, e.v)) in bridge_pairs]
    if not bridges:
        sub, ids = g.induced(range(g.n))
        return [GraphPart(sub, ids, None)]

    rest = nx.Graph()
    rest.add_nodes_from(range(g.n))
    rest.add_edges_from((e.u, e.v) for e in g.edges if e not in bridges)
    comp_of = {}
    comps = sorted((sorted(c) for c in nx.connected_components(rest)), key=lambda c: c[0])
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci

    tree = nx.Graph()
    tree.add_nodes_from(range(len(comps)))
    for e in bridges:
        tree.add_edge(comp_of[e.u], comp_of[e.v], bridge=e)
    if any(d > 2 for _, d in tree.degree()):
        raise DecompositionError("bridge tree is not a path; the graph has no Hamiltonian path")

    leaves = [c for c, d in tree.degree() if d == 1]

    def outgoing(leaf):
        (nbr,) = tree[leaf]
        return comp_of[tree.edges[leaf, nbr]["bridge"].u] == leaf

    start = next((c for c in leaves if outgoing(c)), leaves[0])
    order, prev, cur = [start], None, start
    while True:
        nxt = [c for c in tree[cur] if c != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)

    parts = []
    for i, ci in enumerate(order):
        sub, ids = g.induced(comps[ci])
        bridge = tree.edges[ci, order[i + 1]]["bridge"] if i + 1 < len(order) else None
        parts.append(GraphPart(sub, ids, bridge))
    return parts


def read_fasta(text: str) -> list[tuple[str, str]]:
    """Parse FASTA text into ``(header, sequence)`` records.

    Sequences may wrap over several lines; blank lines are ignored.  Only
    uppercase ``ACGT`` is accepted.
    """
    records = []
    header = None
    chunks: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            if header is not None:
                if not chunks:
                    raise FastaParseError(f"record {header!r} has no sequence", lineno)
                records.append((header, "".join(chunks)))
            header, chunks = line[1:].strip(), []
            continue
        if header is None:
            raise FastaParseError("sequence data before the first '>' header", lineno)
        bad = set(line) - _ALPHABET_SET
        if bad:
            raise FastaParseError(f"invalid symbols {sorted(bad)}", lineno)
        chunks.append(line)
    if header is not None:
        if not chunks:
            raise FastaParseError(f"record {header!r} has no sequence", lineno)
        records.append((header, "".join(chunks)))
    if not records:
        raise FastaParseError("no FASTA records found")
    return records


def write_fasta(records: Iterable[tuple[str, str]], width: int = 60) -> str:
    lines = []
    for header, seq in records:
        lines.append(f">{header}")
        lines.extend(seq[i:i + width] for i in range(0, len(seq), width))
    return "\n".join(lines) + "\n"


def dumps_graph(g: OlcGraph, metadata: dict | None = None) -> str:
    data = {"metadata": metadata} if metadata is not None else {}
    data.update(g.to_dict())
    return json.dumps(data, indent=2) + "\n"


def loads_graph(text: str) -> OlcGraph:
    return OlcGraph.from_dict(json.loads(text))
