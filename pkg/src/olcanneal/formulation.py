r"""QUBO and Ising encodings of the Hamiltonian path problem.

Two encodings are provided:

``positional``
    One binary ``x[v, j]`` per (vertex, step) pair, ``N**2`` variables::

        H = A sum_v (1 - sum_j x[v,j])^2
          + A sum_j (1 - sum_v x[v,j])^2
          + A sum_{(u,v) not in E, u != v} sum_j x[u,j] x[v,j+1]

``edge``
    One binary per edge, valid for acyclic graphs only::

        H = A sum_u (1 - sum_{(u,v) in E} x[u,v])^2
          + A sum_v (1 - sum_{(u,v) in E} x[u,v])^2

All coefficients are kept as :class:`fractions.Fraction` so that the
QUBO/Ising transforms and normalisation are exact.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Hashable, Iterable, Mapping

import networkx as nx
import numpy as np

from .errors import InvalidArgument, NotAcyclicError
from .olcgraph import OlcGraph

POSITIONAL = "positional"
EDGE = "edge"
ENCODINGS = (POSITIONAL, EDGE)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # shortest repr round-trips; avoids binary expansion noise like 0.1
        return Fraction(repr(x))
    return Fraction(x)


def _clean_linear(linear: Mapping[int, Real]) -> dict[int, Fraction]:
    out = {}
    for i, c in sorted(linear.items()):
        c = as_fraction(c)
        if c:
            out[int(i)] = c
    return out


def _clean_quadratic(quadratic: Mapping[tuple[int, int], Real]) -> dict[tuple[int, int], Fraction]:
    acc: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for (i, j), c in quadratic.items():
        i, j = int(i), int(j)
        if i == j:
            raise InvalidArgument(f"diagonal quadratic key ({i}, {i}); fold it into linear")
        acc[(min(i, j), max(i, j))] += as_fraction(c)
    return {k: acc[k] for k in sorted(acc) if acc[k]}


def _check_indices(n, keys):
    for i in keys:
        if not 0 <= i < n:
            raise InvalidArgument(f"variable index {i} outside 0..{n - 1}")


@dataclass(frozen=True)
class QuboProblem:
    """``offset + sum linear[i] w_i + sum quadratic[i,j] w_i w_j`` over ``w in {0,1}^n``."""

    n: int
    linear: dict[int, Fraction]
    quadratic: dict[tuple[int, int], Fraction]
    offset: Fraction = Fraction(0)
    penalty: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "linear", _clean_linear(self.linear))
        object.__setattr__(self, "quadratic", _clean_quadratic(self.quadratic))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        if self.penalty is not None:
            object.__setattr__(self, "penalty", as_fraction(self.penalty))
        _check_indices(self.n, self.linear)
        _check_indices(self.n, itertools.chain.from_iterable(self.quadratic))

    def energy(self, bits) -> Fraction:
        w = [int(b) for b in bits]
        if len(w) != self.n:
            raise InvalidArgument(f"expected {self.n} bits, got {len(w)}")
        if any(b not in (0, 1) for b in w):
            raise InvalidArgument("QUBO configurations must be 0/1")
        e = self.offset
        e += sum((c for i, c in self.linear.items() if w[i]), Fraction(0))
        e += sum((c for (i, j), c in self.quadratic.items() if w[i] and w[j]), Fraction(0))
        return e

    def to_dense(self) -> tuple[np.ndarray, float]:
        """Upper-triangular float matrix ``Q`` (linear on the diagonal) and offset."""
        q = np.zeros((self.n, self.n))
        for i, c in self.linear.items():
            q[i, i] = float(c)
        for (i, j), c in self.quadratic.items():
            q[i, j] = float(c)
        return q, float(self.offset)


@dataclass(frozen=True)
class IsingProblem:
    """``offset + sum h[i] s_i + sum J[i,j] s_i s_j`` over ``s in {-1,+1}^n``."""

    n: int
    h: dict[int, Fraction]
    J: dict[tuple[int, int], Fraction]
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "h", _clean_linear(self.h))
        object.__setattr__(self, "J", _clean_quadratic(self.J))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        _check_indices(self.n, self.h)
        _check_indices(self.n, itertools.chain.from_iterable(self.J))

    @property
    def b(self) -> dict[int, Fraction]:
        """Bias vector as consumed by the annealer (same values as ``h``)."""
        return self.h

    def max_abs_coefficient(self) -> Fraction:
        return max(map(abs, itertools.chain(self.h.values(), self.J.values())), default=Fraction(0))

    def dense(self) -> tuple[np.ndarray, np.ndarray, float]:
        """Float arrays ``(h, J_sym, offset)`` with ``J_sym`` symmetric, zero diagonal."""
        h = np.zeros(self.n)
        jm = np.zeros((self.n, self.n))
        for i, c in self.h.items():
            h[i] = float(c)
        for (i, j), c in self.J.items():
            jm[i, j] = jm[j, i] = float(c)
        return h, jm, float(self.offset)


@dataclass(frozen=True)
class VariableMap:
    """Bijection between variable indices and their meaning.

    Positional keys are ``(vertex, step)`` and edge keys ``(u, v)``; vertices
    and steps are 0-based.
    """

    encoding: str
    reverse: tuple[tuple[int, int], ...]
    forward: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.encoding not in ENCODINGS:
            raise InvalidArgument(f"unknown encoding {self.encoding!r}")
        rev = tuple(tuple(int(x) for x in k) for k in self.reverse)
        object.__setattr__(self, "reverse", rev)
        fwd = {k: i for i, k in enumerate(rev)}
        if len(fwd) != len(rev):
            raise InvalidArgument("variable map keys must be unique")
        object.__setattr__(self, "forward", fwd)

    def __len__(self):
        return len(self.reverse)

    def index(self, key: Hashable) -> int:
        return self.forward[tuple(key)]

    def key(self, var: int) -> tuple[int, int]:
        return self.reverse[var]

    def to_dict(self) -> dict:
        return {"encoding": self.encoding,
                "entries": [{"var": i, "key": list(k)} for i, k in enumerate(self.reverse)]}

    @classmethod
    def from_dict(cls, data: dict) -> "VariableMap":
        entries = sorted(data["entries"], key=lambda e: e["var"])
        if [e["var"] for e in entries] != list(range(len(entries))):
            raise InvalidArgument("variable map entries must cover 0..n-1")
        return cls(data["encoding"], tuple(tuple(e["key"]) for e in entries))


def _check_penalty(A) -> Fraction:
    A = as_fraction(A)
    if A <= 0:
        raise InvalidArgument(f"penalty A must be positive, got {A}")
    return A


class _Accumulator:
    def __init__(self):
        self.linear = defaultdict(Fraction)
        self.quadratic = defaultdict(Fraction)
        self.offset = Fraction(0)

    def add_one_hot(self, variables: list[int], weight: Fraction):
        """Add ``weight * (1 - sum x_i)^2`` using ``x^2 = x``."""
        self.offset += weight
        for i in variables:
            self.linear[i] -= weight
        for i, j in itertools.combinations(variables, 2):
            self.quadratic[(min(i, j), max(i, j))] += 2 * weight

    def build(self, n, penalty) -> QuboProblem:
        return QuboProblem(n, dict(self.linear), dict(self.quadratic), self.offset, penalty)


def positional_qubo(g: OlcGraph, A=1) -> tuple[QuboProblem, VariableMap]:
    A = _check_penalty(A)
    n = g.n
    if n < 1:
        raise InvalidArgument("graph must have at least one vertex")
    vmap = VariableMap(POSITIONAL, tuple((v, j) for v in range(n) for j in range(n)))

    def x(v, j):
        return v * n + j

    acc = _Accumulator()
    for v in range(n):
        acc.add_one_hot([x(v, j) for j in range(n)], A)
    for j in range(n):
        acc.add_one_hot([x(v, j) for v in range(n)], A)
    for u in range(n):
        for v in range(n):
            if u == v or g.has_edge(u, v):
                continue
            for j in range(n - 1):
                a, b = x(u, j), x(v, j + 1)
                acc.quadratic[(min(a, b), max(a, b))] += A
    return acc.build(n * n, A), vmap


def find_cycle(g: OlcGraph) -> list[tuple[int, int]] | None:
    try:
        return [(u, v) for u, v in nx.find_cycle(g.to_networkx())]
    except nx.NetworkXNoCycle:
        return None


def edge_qubo(g: OlcGraph, A=1) -> tuple[QuboProblem, VariableMap]:
    A = _check_penalty(A)
    try:
        list(nx.topological_sort(g.to_networkx()))
    except nx.NetworkXUnfeasible:
        raise NotAcyclicError(find_cycle(g)) from None
    vmap = VariableMap(EDGE, tuple((e.u, e.v) for e in g.edges))
    out_vars = defaultdict(list)
    in_vars = defaultdict(list)
    for i, e in enumerate(g.edges):
        out_vars[e.u].append(i)
        in_vars[e.v].append(i)
    acc = _Accumulator()
    for v in range(g.n):
        acc.add_one_hot(out_vars[v], A)
    for v in range(g.n):
        acc.add_one_hot(in_vars[v], A)
    return acc.build(g.m, A), vmap


def build_qubo(g: OlcGraph, encoding: str = POSITIONAL, A=1) -> tuple[QuboProblem, VariableMap]:
    if encoding == POSITIONAL:
        return positional_qubo(g, A)
    if encoding == EDGE:
        return edge_qubo(g, A)
    raise InvalidArgument(f"unknown encoding {encoding!r}")


def qubo_to_ising(q: QuboProblem) -> IsingProblem:
    """Substitute ``w = (s + 1) / 2``."""
    h = defaultdict(Fraction)
    J = {}
    offset = q.offset
    for i, c in q.linear.items():
        h[i] += c / 2
        offset += c / 2
    for (i, j), c in q.quadratic.items():
        J[(i, j)] = c / 4
        h[i] += c / 4
        h[j] += c / 4
        offset += c / 4
    return IsingProblem(q.n, dict(h), J, offset)


def ising_to_qubo(m: IsingProblem, penalty=None) -> QuboProblem:
    """Substitute ``s = 2 w - 1``."""
    linear = defaultdict(Fraction)
    quadratic = {}
    offset = m.offset
    for i, c in m.h.items():
        linear[i] += 2 * c
        offset -= c
    for (i, j), c in m.J.items():
        quadratic[(i, j)] = 4 * c
        linear[i] -= 2 * c
        linear[j] -= 2 * c
        offset += c
    return QuboProblem(m.n, dict(linear), quadratic, offset, penalty)


def normalize_ising(m: IsingProblem) -> tuple[IsingProblem, Fraction]:
    """Divide ``h`` and ``J`` (not the offset) by their largest magnitude."""
    scale = m.max_abs_coefficient()
    if scale == 0:
        return m, Fraction(1)
    return (IsingProblem(m.n, {i: c / scale for i, c in m.h.items()},
                         {k: c / scale for k, c in m.J.items()}, m.offset), scale)


def estimate_physical_qubits(n: int) -> int:
    """Clique-embedding size estimate ``n * (ceil(n / 4) + 1)``.

    This closed form is a fit to published embedding sizes for 9..64 logical
    variables; it is an estimate, not an embedding.
    """
    if n < 1:
        raise InvalidArgument("need at least one logical variable")
    return n * (math.ceil(n / 4) + 1)


def spins_to_bits(spins) -> list[int]:
    return [(int(s) + 1) // 2 for s in spins]


def bits_to_spins(bits) -> list[int]:
    return [2 * int(b) - 1 for b in bits]


def _fmt(c) -> str:
    return format(float(c), ".12g")


def dumps_qubo(q: QuboProblem, metadata: dict | None = None) -> str:
    """Serialise as text.

    Layout: optional ``#`` comment lines, ``p qubo n m_linear m_quadratic``,
    ``i i c`` linear lines, ``i j c`` quadratic lines (i < j), ``c offset``.
    """
    lines = []
    if metadata is not None:
        lines.append("# metadata " + json.dumps(metadata, sort_keys=True))
    lines.append(f"p qubo {q.n} {len(q.linear)} {len(q.quadratic)}")
    lines.extend(f"{i} {i} {_fmt(c)}" for i, c in q.linear.items())
    lines.extend(f"{i} {j} {_fmt(c)}" for (i, j), c in q.quadratic.items())
    lines.append(f"c {_fmt(q.offset)}")
    return "\n".join(lines) + "\n"


def loads_qubo(text: str) -> QuboProblem:
    header = None
    linear, quadratic = {}, {}
    offset = Fraction(0)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "p":
                if parts[1] != "qubo" or len(parts) != 5:
                    raise ValueError("bad header")
                header = tuple(int(p) for p in parts[2:])
            elif parts[0] == "c":
                offset = Fraction(parts[1])
            elif header is None:
                raise ValueError("term before 'p qubo' header")
            else:
                i, j, c = int(parts[0]), int(parts[1]), Fraction(parts[2])
                if i == j:
                    linear[i] = linear.get(i, 0) + c
                else:
                    key = (min(i, j), max(i, j))
                    quadratic[key] = quadratic.get(key, 0) + c
        except (ValueError, IndexError) as exc:
            raise InvalidArgument(f"line {lineno}: cannot parse {line!r} ({exc})") from None
    if header is None:
        raise InvalidArgument("missing 'p qubo' header")
    n, n_lin, n_quad = header
    if len(linear) != n_lin or len(quadratic) != n_quad:
        raise InvalidArgument(
            f"header declares {n_lin}/{n_quad} terms, found {len(linear)}/{len(quadratic)}")
    return QuboProblem(n, linear, quadratic, offset)


def dumps_variable_map(vmap: VariableMap, metadata: dict | None = None) -> str:
    data = {"metadata": metadata} if metadata is not None else {}
    data.update(vmap.to_dict())
    return json.dumps(data, indent=2) + "\n"


def loads_variable_map(text: str) -> VariableMap:
    return VariableMap.from_dict(json.loads(text))


def enumerate_bits(n: int) -> Iterable[tuple[int, ...]]:
    return itertools.product((0, 1), repeat=n)
