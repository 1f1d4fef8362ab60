"""Ising minimisers: exhaustive enumeration and the SimCIM annealer.

SimCIM keeps a continuous amplitude ``s_i in [-1, 1]`` per spin and iterates::

    phi_i = -(sum_{j != i} J_ij s_j + h_i)        # descent direction of H
    ds_i  = p_t s_i + zeta phi_i + N(0, sigma)
    s_i  <- clip(s_i + ds_i, -1, 1)

with the pump ``p_t`` ramped linearly.  The readout is ``sign(s)`` with ties
going to ``+1``.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidArgument, PreconditionError, TooLargeError
from .formulation import IsingProblem
from .seeding import derive_seed, make_rng

BRUTE_FORCE_CAP = 24
HIT_TOLERANCE = 1e-9
_LOW_BITS = 16
_NOISE_BUDGET = 4_000_000  # floats of pre-drawn noise per SimCIM batch


def _check_spins(m: IsingProblem, spins) -> list[int]:
    s = [int(x) for x in spins]
    if len(s) != m.n:
        raise InvalidArgument(f"configuration has {len(s)} spins, problem has {m.n}")
    if any(x not in (-1, 1) for x in s):
        raise InvalidArgument("spins must be -1 or +1")
    return s


def energy(m: IsingProblem, spins) -> Fraction:
    """Exact energy ``offset + sum h_i s_i + sum J_ij s_i s_j``."""
    s = _check_spins(m, spins)
    e = m.offset
    for i, c in m.h.items():
        e += c * s[i]
    for (i, j), c in m.J.items():
        e += c * s[i] * s[j]
    return e


def energies(m: IsingProblem, spins: np.ndarray) -> np.ndarray:
    """Float energies for a ``(k, n)`` array of spin rows."""
    h, jm, offset = m.dense()
    spins = np.asarray(spins, dtype=float)
    return offset + spins @ h + 0.5 * np.einsum("ki,ki->k", spins @ jm, spins)


@dataclass(frozen=True)
class BruteForceResult:
    ground_energy: Fraction
    ground_configs: list[tuple[int, ...]]


def _integer_scaled(m: IsingProblem):
    denom = 1
    for c in list(m.h.values()) + list(m.J.values()):
        denom = math.lcm(denom, c.denominator)
    h = np.zeros(m.n)
    ju = np.zeros((m.n, m.n))
    total = 0
    for i, c in m.h.items():
        h[i] = int(c * denom)
        total += abs(int(c * denom))
    for (i, j), c in m.J.items():
        ju[i, j] = int(c * denom)
        total += abs(int(c * denom))
    if total >= 2 ** 52:
        raise InvalidArgument("coefficients too large for exact enumeration")
    return h, ju, denom


def _spin_block(start: int, stop: int, n: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return (((idx[:, None] >> shifts) & 1) * 2 - 1).astype(float)


def brute_force(m: IsingProblem, cap: int = BRUTE_FORCE_CAP) -> BruteForceResult:
    """Exact minimum and every minimiser, in lexicographic order (-1 < +1).

    Coefficients are rescaled to integers so that float64 sums are exact.
    The last ``_LOW_BITS`` spins are enumerated once; each chunk fixes the
    leading spins and only adds their field on the low block.
    """
    if m.n > cap:
        raise TooLargeError(
            f"{m.n} variables exceeds the brute-force cap of {cap}; use the SimCIM solver")
    if m.n == 0:
        return BruteForceResult(m.offset, [()])
    h, ju, denom = _integer_scaled(m)
    low = min(m.n, _LOW_BITS)
    high = m.n - low
    js = ju + ju.T
    block = _spin_block(0, 1 << low, low)
    h_lo, j_lo = h[high:], ju[high:, high:]
    e_lo = block @ h_lo + np.einsum("ki,ki->k", block @ j_lo, block)
    cross = js[:high, high:]
    best = None
    winners: list[np.ndarray] = []
    for c in range(1 << high):
        a = _spin_block(c, c + 1, high)[0] if high else np.zeros(0)
        const = a @ h[:high] + a @ ju[:high, :high] @ a
        e = e_lo + block @ (a @ cross) + const
        lo = e.min()
        if best is None or lo < best:
            best, winners = lo, []
        if lo == best:
            rows = block[e == lo]
            winners.append(np.hstack([np.broadcast_to(a, (len(rows), high)), rows]))
    configs = [tuple(int(x) for x in row) for row in np.concatenate(winners)]
    return BruteForceResult(Fraction(int(best), denom) + m.offset, configs)


@dataclass(frozen=True)
class SimCimParams:
    iterations: int = 1000
    attempts: int = 1000
    zeta: float = 1.0
    noise_sigma: float = 0.05
    pump_start: float = -1.0
    pump_end: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1 or self.attempts < 1:
            raise InvalidArgument("iterations and attempts must be >= 1")
        if not self.zeta > 0:
            raise InvalidArgument("zeta must be positive")
        if not self.noise_sigma >= 0:
            raise InvalidArgument("noise_sigma must be non-negative")

    def pump(self, t: int) -> float:
        """Pump value at step ``t`` in ``0..iterations-1``."""
        return self.pump_start + (self.pump_end - self.pump_start) * t / self.iterations

    def attempt_seed(self, index: int) -> int:
        return derive_seed(self.seed, "simcim-attempt", index)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SimCimParams":
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        unknown = set(data) - set(known) - {"metadata"}
        if unknown:
            raise InvalidArgument(f"unknown solver config keys: {sorted(unknown)}")
        return cls(**known)


@dataclass
class AttemptRecord:
    energy: float
    wall_time: float  # seconds
    hit_ground: bool | None = None


@dataclass
class SolveResult:
    best_config: tuple[int, ...]
    best_energy: float
    attempts: list[AttemptRecord] = field(default_factory=list)
    ground_energy_reference: float | None = None

    @property
    def energies(self) -> list[float]:
        return [a.energy for a in self.attempts]

    def to_dict(self) -> dict:
        return {
            "best_energy": self.best_energy,
            "best_config": list(self.best_config),
            "ground_energy_reference": self.ground_energy_reference,
            "energies": self.energies,
            "wall_times_us": [a.wall_time * 1e6 for a in self.attempts],
            "hit_ground": [a.hit_ground for a in self.attempts],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolveResult":
        attempts = [AttemptRecord(e, t / 1e6, hit) for e, t, hit in
                    zip(data["energies"], data["wall_times_us"], data["hit_ground"])]
        return cls(tuple(data["best_config"]), data["best_energy"], attempts,
                   data.get("ground_energy_reference"))


def _check_normalized(m: IsingProblem):
    if m.max_abs_coefficient() > 1 + 1e-9:
        raise PreconditionError(
            "SimCIM needs coefficients in [-1, 1]; call normalize_ising first")


def _anneal(h, jm, params: SimCimParams, seeds):
    """Run one batch of attempts in lock-step; returns (spins, seconds per attempt)."""
    n, k = len(h), len(seeds)
    start = time.perf_counter()
    noise = np.empty((params.iterations, k, n))
    for a, seed in enumerate(seeds):
        noise[:, a, :] = make_rng(seed).normal(0.0, params.noise_sigma, size=(params.iterations, n))
    s = np.zeros((k, n))
    for t in range(params.iterations):
        field_ = s @ jm + h
        s += params.pump(t) * s - params.zeta * field_ + noise[t]
        np.clip(s, -1.0, 1.0, out=s)
    elapsed = time.perf_counter() - start
    return np.where(s >= 0, 1, -1).astype(np.int64), elapsed / k


def simcim_attempt(m: IsingProblem, p: SimCimParams, attempt_seed: int):
    """One annealing run; returns ``(spins, energy, wall_time_seconds)``."""
    _check_normalized(m)
    h, jm, _ = m.dense()
    spins, wall = _anneal(h, jm, p, [attempt_seed])
    config = tuple(int(x) for x in spins[0])
    return config, float(energy(m, config)), wall


def simcim_solve(m: IsingProblem, p: SimCimParams | None = None,
                 ground_energy_reference: float | None = None) -> SolveResult:
    """Run ``p.attempts`` independent anneals.

    Attempts are batched for speed; each attempt still draws its noise from
    its own stream seeded by ``p.attempt_seed(index)``, and its wall time is
    the batch time divided evenly among the batch.
    """
    p = p or SimCimParams()
    _check_normalized(m)
    h, jm, _ = m.dense()
    batch = max(1, _NOISE_BUDGET // (p.iterations * max(m.n, 1)))
    seeds = [p.attempt_seed(i) for i in range(p.attempts)]
    spins_all, walls = [], []
    for lo in range(0, p.attempts, batch):
        chunk = seeds[lo:lo + batch]
        spins, wall = _anneal(h, jm, p, chunk)
        spins_all.append(spins)
        walls.extend([wall] * len(chunk))
    spins = np.concatenate(spins_all)
    # exact energies via integer-scaled coefficients, rounded once to float
    hi, ju, denom = _integer_scaled(m)
    sf = spins.astype(float)
    scaled = sf @ hi + np.einsum("ki,ki->k", sf @ ju, sf)
    records = []
    configs = []
    cache: dict[int, float] = {}
    for row, wall, v in zip(spins, walls, scaled):
        cfg = tuple(int(x) for x in row)
        key = int(v)
        if key not in cache:
            cache[key] = float(Fraction(key, denom) + m.offset)
        e = cache[key]
        hit = None if ground_energy_reference is None else e <= ground_energy_reference + HIT_TOLERANCE
        records.append(AttemptRecord(e, wall, hit))
        configs.append(cfg)
    best = min(range(len(records)), key=lambda i: records[i].energy)
    return SolveResult(configs[best], records[best].energy, records, ground_energy_reference)


def dumps_solve_result(result: SolveResult, metadata: dict | None = None, **extra) -> str:
    data = {"metadata": metadata} if metadata is not None else {}
    data.update(result.to_dict())
    data.update(extra)
    return json.dumps(data, indent=2) + "\n"
