"""Synthetic benchmark campaigns and time-to-solution metrics."""

from __future__ import annotations

import csv
import gzip
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

import numpy as np

from .assembly import (GraphPath, count_hamiltonian_paths, decode, encode_edges,
                       encode_positional, reconstruct_sequence, validate_hamiltonian_path)
from .errors import DecodeError, InvalidArgument
from .formulation import EDGE, ENCODINGS, POSITIONAL, estimate_physical_qubits
from .olcgraph import OlcGraph, build_olc_graph, generate_sequence, shred_to_kmers
from .pipeline import compile_graph
from .seeding import derive_seed
from .solvers import BRUTE_FORCE_CAP, HIT_TOLERANCE, SimCimParams, SolveResult, brute_force, simcim_solve

log = logging.getLogger(__name__)

TARGET_PROBABILITY = 0.99
DWAVE_ANNEAL_US = 20.0
UNSOLVED = "unsolved"

CSV_COLUMNS = ("length", "instance", "seed", "encoding", "n_vars", "ground_energy",
               "theta", "r99", "t_a_us", "tts_us", "valid_assembly")
TIMING_COLUMNS = ("t_a_us", "tts_us")
GZIP_THRESHOLD = 10 * 1024 * 1024


def estimate_theta(result: SolveResult, ground_energy: float) -> float:
    if not result.attempts:
        raise InvalidArgument("result has no attempts")
    hits = sum(1 for e in result.energies if e <= ground_energy + HIT_TOLERANCE)
    return hits / len(result.attempts)


def r99(theta: float) -> float | str:
    """Runs needed to see the ground state at least once with probability 0.99.

    ``theta == 1`` gives 1 and ``theta == 0`` gives :data:`UNSOLVED`.
    """
    if not 0 <= theta <= 1:
        raise InvalidArgument(f"theta must lie in [0, 1], got {theta}")
    if theta == 0:
        return UNSOLVED
    if theta == 1:
        return 1.0
    # 1 - 0.9 is not 0.1 in binary; go through the shortest decimal form
    # so that r99(0.9) == 2 and r99(0.99) == 1 hold exactly.
    with localcontext() as ctx:
        ctx.prec = 50
        miss = 1 - Decimal(repr(float(theta)))
        target = 1 - Decimal(repr(TARGET_PROBABILITY))
        return float(target.ln() / miss.ln())


def tts(theta: float, t_a_us: float = DWAVE_ANNEAL_US) -> float | str:
    runs = r99(theta)
    if runs == UNSOLVED:
        return UNSOLVED
    return t_a_us * runs


@dataclass
class TtsReport:
    theta: float
    r99: float | str
    tts_microseconds: float | str
    t_a_microseconds: float
    runs: int
    hits: int

    @classmethod
    def from_result(cls, result: SolveResult, ground_energy: float,
                    t_a_us: float | None = None) -> "TtsReport":
        theta = estimate_theta(result, ground_energy)
        if t_a_us is None:
            t_a_us = float(np.mean([a.wall_time for a in result.attempts])) * 1e6
        hits = sum(1 for e in result.energies if e <= ground_energy + HIT_TOLERANCE)
        return cls(theta, r99(theta), tts(theta, t_a_us), t_a_us, len(result.attempts), hits)


def summarize(values) -> dict:
    """Mean, min, max and 90th percentile of the finite entries of ``values``."""
    arr = np.array([v for v in values if isinstance(v, (int, float)) and math.isfinite(v)], float)
    if arr.size == 0:
        return {"count": 0, "mean": None, "min": None, "max": None, "p90": None}
    return {"count": int(arr.size), "mean": float(arr.mean()), "min": float(arr.min()),
            "max": float(arr.max()), "p90": float(np.percentile(arr, 90))}


@dataclass
class CampaignSpec:
    lengths: tuple[int, ...] = (5, 6, 7, 8, 9, 10)
    instances_per_length: int = 10
    k: int = 3
    min_overlap: int | None = None
    encoding: str = POSITIONAL
    penalty: float = 1
    solver: SimCimParams = field(default_factory=SimCimParams)
    master_seed: int = 0
    t_a_us: float | None = None  # None: use the measured mean attempt time
    brute_force_cap: int = BRUTE_FORCE_CAP
    max_regenerations: int = 100_000

    def __post_init__(self):
        self.lengths = tuple(int(x) for x in self.lengths)
        if self.encoding not in ENCODINGS:
            raise InvalidArgument(f"unknown encoding {self.encoding!r}")
        if self.instances_per_length < 1:
            raise InvalidArgument("instances_per_length must be >= 1")
        if self.min_overlap is None:
            self.min_overlap = self.k - 1
        if any(L < self.k for L in self.lengths):
            raise InvalidArgument("every sequence length must be >= k")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lengths"] = list(self.lengths)
        return d


@dataclass
class Instance:
    length: int
    index: int
    seed: int
    sequence: str
    graph: OlcGraph
    regenerations: int
    rejected: dict[str, int]
    hamiltonian_paths: int  # capped at 2


def _graph_signature(g: OlcGraph):
    return (tuple(g.labels()), g.edges)


def _is_simple_chain(g: OlcGraph) -> bool:
    if g.m != g.n - 1:
        return False
    indeg = [0] * g.n
    outdeg = [0] * g.n
    for e in g.edges:
        outdeg[e.u] += 1
        indeg[e.v] += 1
    return max(indeg, default=0) <= 1 and max(outdeg, default=0) <= 1


def generate_instance(spec: CampaignSpec, length: int, index: int, seen: set) -> Instance:
    """Draw sequences until one passes the filters; ``seen`` holds accepted graph signatures.

    Rejected draws: repeated k-mers, no Hamiltonian path, a bare chain with
    no extra edges, a graph identical to an earlier one, and (edge encoding)
    a cyclic graph.
    """
    rejected: dict[str, int] = {}
    for attempt in range(spec.max_regenerations):
        seed = derive_seed(spec.master_seed, "sequence", length, index, attempt)
        seq = generate_sequence(length, seed)
        frags = shred_to_kmers(seq, spec.k)
        reason = None
        g = None
        if len(frags) != length - spec.k + 1:
            reason = "repeated-kmer"
        else:
            g = build_olc_graph(frags, spec.min_overlap)
            if _is_simple_chain(g):
                reason = "trivial-chain"
            elif _graph_signature(g) in seen:
                reason = "duplicate"
            elif spec.encoding == EDGE and not g.is_acyclic():
                reason = "cyclic"
            elif count_hamiltonian_paths(g, limit=1) == 0:
                reason = "no-hamiltonian-path"
        if reason is not None:
            rejected[reason] = rejected.get(reason, 0) + 1
            continue
        seen.add(_graph_signature(g))
        if attempt:
            log.info("length %d instance %d: %d regenerations %s", length, index, attempt, rejected)
        return Instance(length, index, seed, seq, g, attempt, rejected,
                        count_hamiltonian_paths(g, limit=2))
    raise InvalidArgument(f"no acceptable instance for length {length} after "
                          f"{spec.max_regenerations} draws")


def generate_corpus(spec: CampaignSpec) -> list[Instance]:
    seen: set = set()
    return [generate_instance(spec, L, i, seen)
            for L in spec.lengths for i in range(spec.instances_per_length)]


@dataclass
class InstanceReport:
    length: int
    instance: int
    seed: int
    encoding: str
    n_vars: int
    sequence: str
    ground_energy: float | None  # QUBO objective units
    ground_energy_reference: float  # same units as ``energies``
    certification: str  # "oracle", "decode" or "uncertified"
    report: TtsReport
    valid_assembly: bool
    reconstructed: str | None
    unique_path: bool
    regenerations: int
    rejected: dict[str, int]
    physical_qubits_estimate: int
    energies: list[float]
    wall_times_us: list[float]

    def csv_row(self) -> dict:
        return {
            "length": self.length, "instance": self.instance, "seed": self.seed,
            "encoding": self.encoding, "n_vars": self.n_vars,
            "ground_energy": "" if self.ground_energy is None else repr(self.ground_energy),
            "theta": repr(self.report.theta), "r99": _num(self.report.r99),
            "t_a_us": _num(self.report.t_a_microseconds), "tts_us": _num(self.report.tts_microseconds),
            "valid_assembly": str(self.valid_assembly).lower(),
        }

    def to_dict(self) -> dict:
        d = asdict(self)
        d["report"] = asdict(self.report)
        return d


def _num(x) -> str:
    return x if isinstance(x, str) else repr(float(x))


def _witness_path(inst: Instance) -> GraphPath:
    labels = inst.graph.labels()
    order = [labels.index(inst.sequence[i:i + len(labels[0])])
             for i in range(len(inst.sequence) - len(labels[0]) + 1)]
    return GraphPath.through(inst.graph, order)


def solve_instance(spec: CampaignSpec, inst: Instance) -> InstanceReport:
    problem = compile_graph(inst.graph, spec.encoding, spec.penalty)
    ising = problem.ising
    params = SimCimParams(**{**spec.solver.to_dict(),
                             "seed": derive_seed(spec.master_seed, "solve", inst.length, inst.index)})

    if ising.n <= spec.brute_force_cap:
        ground = brute_force(ising, cap=spec.brute_force_cap).ground_energy
        certification = "oracle"
    else:
        ground = None
        certification = None

    result = simcim_solve(ising, params, None if ground is None else float(ground))
    path = None
    try:
        path = decode(result.best_config, problem.vmap, inst.graph)
        if not validate_hamiltonian_path(inst.graph, path):
            path = None
    except DecodeError:
        path = None

    if ground is None:
        # A decoded Hamiltonian path has the least possible objective for both
        # encodings, so it certifies the ground energy.
        if path is not None:
            ground = problem.normalized_energy(problem.objective(result.best_config))
            certification = "decode"
        else:
            encode = encode_positional if spec.encoding == POSITIONAL else encode_edges
            bits = encode(_witness_path(inst), problem.vmap)
            ground = problem.normalized_energy(problem.qubo.energy(bits))
            certification = "uncertified"
        for a in result.attempts:
            a.hit_ground = a.energy <= float(ground) + HIT_TOLERANCE
        result.ground_energy_reference = float(ground)

    report = TtsReport.from_result(result, float(ground), spec.t_a_us)
    objective = (Fraction(ground) - ising.offset) * problem.scale + ising.offset
    reconstructed = reconstruct_sequence(path, inst.graph) if path is not None else None
    return InstanceReport(
        length=inst.length, instance=inst.index, seed=inst.seed, encoding=spec.encoding,
        n_vars=ising.n, sequence=inst.sequence, ground_energy=float(objective),
        ground_energy_reference=float(ground),
        certification=certification, report=report, valid_assembly=path is not None,
        reconstructed=reconstructed, unique_path=inst.hamiltonian_paths == 1,
        regenerations=inst.regenerations, rejected=inst.rejected,
        physical_qubits_estimate=estimate_physical_qubits(max(ising.n, 1)),
        energies=result.energies, wall_times_us=[a.wall_time * 1e6 for a in result.attempts])


def run_campaign(spec: CampaignSpec | None = None) -> list[InstanceReport]:
    spec = spec or CampaignSpec()
    return [solve_instance(spec, inst) for inst in generate_corpus(spec)]


def campaign_csv(reports: list[InstanceReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in sorted(reports, key=lambda r: (r.length, r.instance)):
        writer.writerow(r.csv_row())
    return buf.getvalue()


def campaign_summary(reports: list[InstanceReport]) -> dict:
    by_length: dict[int, list[InstanceReport]] = {}
    for r in reports:
        by_length.setdefault(r.length, []).append(r)
    return {
        str(L): {
            "tts_us": summarize(r.report.tts_microseconds for r in rs),
            "t_a_us": summarize(r.report.t_a_microseconds for r in rs),
            "theta": summarize(r.report.theta for r in rs),
            "solved": sum(r.report.theta > 0 for r in rs),
            "instances": len(rs),
        }
        for L, rs in sorted(by_length.items())
    }


def campaign_json(reports: list[InstanceReport], metadata: dict | None = None) -> dict:
    return {
        "metadata": metadata or {},
        "summary": campaign_summary(reports),
        "instances": [r.to_dict() for r in sorted(reports, key=lambda r: (r.length, r.instance))],
    }


def write_campaign_json(path: str | Path, data: dict) -> Path:
    """Write JSON, switching to ``<path>.gz`` when the payload exceeds 10 MB."""
    path = Path(path)
    payload = (json.dumps(data, indent=1) + "\n").encode("utf-8")
    if len(payload) > GZIP_THRESHOLD:
        path = path.with_name(path.name + ".gz")
        with gzip.open(path, "wb") as fh:
            fh.write(payload)
    else:
        path.write_bytes(payload)
    return path
