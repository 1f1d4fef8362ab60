"""Command-line interface.

Every stage reads and writes files, so stages can be run and tested one at a
time; ``pipeline`` chains them into one output directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .assembly import assembly_report, decode, dumps_report
from .bench import (CSV_COLUMNS, CampaignSpec, campaign_csv, campaign_json, generate_instance,
                    run_campaign, write_campaign_json)
from .errors import DecodeError, OlcAnnealError
from .formulation import (ENCODINGS, POSITIONAL, build_qubo, dumps_qubo,
                          dumps_variable_map, estimate_physical_qubits, loads_qubo,
                          loads_variable_map, normalize_ising, qubo_to_ising)
from .olcgraph import (Fragment, build_olc_graph, dumps_graph, generate_sequence, loads_graph,
                       read_fasta, shred_to_kmers, write_fasta)
from .pipeline import run_solver, solve_partitioned
from .seeding import PRNG_ALGORITHM, derive_seed
from .solvers import (BRUTE_FORCE_CAP, SimCimParams, SolveResult, brute_force, dumps_solve_result,
                      simcim_solve)

CONFIG_ENV = "OLCANNEAL_CONFIG"
log = logging.getLogger("olcanneal")


class UsageError(Exception):
    pass


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _int_list(text):
    try:
        values = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("lengths must be positive integers")
    return values


def metadata(args, **resolved) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    config.update(resolved)
    return {
        "tool": "olcanneal",
        "version": __version__,
        "command": args.command,
        "config": config,
        "master_seed": getattr(args, "seed", None),
        "prng": PRNG_ALGORITHM,
    }


def load_solver_params(args) -> SimCimParams:
    path = args.config or os.environ.get(CONFIG_ENV)
    data = {}
    if path:
        data = json.loads(Path(path).read_text())
    for key in ("iterations", "attempts", "zeta", "noise_sigma", "pump_start", "pump_end"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    return SimCimParams.from_dict(data)


def _write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _json(data):
    return json.dumps(data, indent=2) + "\n"


def cmd_generate(args):
    records = []
    info = []
    if args.filter:
        spec = CampaignSpec(lengths=(args.length,), k=args.k, master_seed=args.seed)
        seen: set = set()
        for i in range(args.count):
            inst = generate_instance(spec, args.length, i, seen)
            records.append((f"seq{i} length={args.length} seed={inst.seed}", inst.sequence))
            info.append({"index": i, "seed": inst.seed, "regenerations": inst.regenerations,
                         "rejected": inst.rejected})
    else:
        for i in range(args.count):
            seed = derive_seed(args.seed, "generate", args.length, i)
            records.append((f"seq{i} length={args.length} seed={seed}",
                            generate_sequence(args.length, seed)))
            info.append({"index": i, "seed": seed})
    out = _write(args.out, write_fasta(records))
    _write(f"{out}.meta.json", _json({"metadata": metadata(args), "instances": info}))
    return 0


def cmd_graph(args):
    records = read_fasta(Path(args.input).read_text())
    reads = [seq for _, seq in records]
    if args.k is not None:
        labels = []
        for seq in reads:
            labels.extend(f.label for f in shred_to_kmers(seq, args.k))
    else:
        labels = reads
    unique = list(dict.fromkeys(labels))
    if len(unique) < len(labels):
        print(f"warning: dropped {len(labels) - len(unique)} duplicate fragment(s)", file=sys.stderr)
    min_overlap = args.min_overlap
    if min_overlap is None:
        min_overlap = args.k - 1 if args.k is not None else 1
    if min_overlap < 1:
        raise UsageError("--min-overlap must be >= 1 (use k >= 2 or set it explicitly)")
    g = build_olc_graph([Fragment(i, lab) for i, lab in enumerate(unique)], min_overlap)
    _write(args.out, dumps_graph(g, metadata(args, min_overlap=min_overlap)))
    return 0


def cmd_qubo(args):
    g = loads_graph(Path(args.graph).read_text())
    q, vmap = build_qubo(g, args.encoding, args.penalty)
    meta = metadata(args, physical_qubits_estimate=estimate_physical_qubits(max(q.n, 1)))
    _write(args.out, dumps_qubo(q, meta))
    _write(args.map or f"{args.out}.map.json", dumps_variable_map(vmap, meta))
    return 0


def cmd_solve(args):
    q = loads_qubo(Path(args.qubo).read_text())
    ising, scale = normalize_ising(qubo_to_ising(q))
    extra = {"solver": args.solver, "scale": float(scale), "n_vars": ising.n}
    if args.solver == "brute":
        bf = brute_force(ising, cap=args.cap)
        e = float(bf.ground_energy)
        result = SolveResult(bf.ground_configs[0], e, [], e)
        extra["ground_configs"] = [list(c) for c in bf.ground_configs]
        params = None
    else:
        params = load_solver_params(args)
        result = simcim_solve(ising, params)
    best_bits = [(s + 1) // 2 for s in result.best_config]
    extra["objective"] = float(q.energy(best_bits))
    extra["best_bits"] = best_bits
    meta = metadata(args, solver_params=None if params is None else params.to_dict())
    _write(args.out, dumps_solve_result(result, meta, **extra))
    return 0


def cmd_assemble(args):
    g = loads_graph(Path(args.graph).read_text())
    if args.partition:
        params = load_solver_params(args)
        path, _ = solve_partitioned(g, args.encoding, args.penalty, args.solver, params)
        error = None if path is not None else "a partition failed to decode"
        report = assembly_report(g, path, None, error,
                                 metadata(args, solver_params=params.to_dict()))
    else:
        if not args.map or not args.result:
            raise UsageError("--map and --result are required unless --partition is given")
        vmap = loads_variable_map(Path(args.map).read_text())
        result = json.loads(Path(args.result).read_text())
        config = result["best_config"]
        objective = result.get("objective")
        diagnostics = None
        try:
            path = decode(config, vmap, g)
            error = None
        except DecodeError as exc:
            path, error, diagnostics = None, str(exc), exc.diagnostics
        report = assembly_report(g, path, objective, error, metadata(args))
        if diagnostics is not None:
            report["diagnostics"] = {k: v for k, v in diagnostics.items()}
    _write(args.out, dumps_report(report))
    if not report["valid"]:
        print(f"error: {report['error'] or 'path is not Hamiltonian'}", file=sys.stderr)
        return 1
    return 0


def _campaign_spec(args) -> CampaignSpec:
    return CampaignSpec(lengths=tuple(args.lengths), instances_per_length=args.instances, k=args.k,
                        encoding=args.encoding, penalty=args.penalty,
                        solver=load_solver_params(args), master_seed=args.seed,
                        t_a_us=args.t_a_us, brute_force_cap=args.cap)


def cmd_bench(args):
    spec = _campaign_spec(args)
    reports = run_campaign(spec)
    meta = metadata(args, campaign=spec.to_dict(), csv_columns=list(CSV_COLUMNS))
    _write(args.csv, campaign_csv(reports))
    Path(args.json).parent.mkdir(parents=True, exist_ok=True)
    write_campaign_json(args.json, campaign_json(reports, meta))
    return 0


def cmd_pipeline(args):
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    if args.input:
        records = read_fasta(Path(args.input).read_text())
        sequence = records[0][1]
    else:
        if args.length is None:
            raise UsageError("give --input or --length")
        sequence = generate_sequence(args.length, derive_seed(args.seed, "generate", args.length, 0))
    _write(out / "sequence.fasta", write_fasta([("seq0", sequence)]))
    g = build_olc_graph(shred_to_kmers(sequence, args.k), args.k - 1)
    _write(out / "graph.json", dumps_graph(g, metadata(args)))
    q, vmap = build_qubo(g, args.encoding, args.penalty)
    _write(out / "problem.qubo", dumps_qubo(q, metadata(args)))
    _write(out / "problem.map.json", dumps_variable_map(vmap))
    ising, scale = normalize_ising(qubo_to_ising(q))
    params = load_solver_params(args)
    result = run_solver(ising, args.solver, params, cap=args.cap)
    bits = [(s + 1) // 2 for s in result.best_config]
    objective = float(q.energy(bits))
    _write(out / "result.json", dumps_solve_result(result, metadata(args, solver_params=params.to_dict()),
                                                   objective=objective, scale=float(scale)))
    try:
        path, error = decode(result.best_config, vmap, g), None
    except DecodeError as exc:
        path, error = None, str(exc)
    report = assembly_report(g, path, objective, error, metadata(args))
    report["original"] = sequence
    _write(out / "assembly.json", dumps_report(report))
    if not report["valid"]:
        print(f"error: {error}", file=sys.stderr)
        return 1
    print(report["sequence"])
    return 0


def _add_solver_flags(p, with_seed=True):
    p.add_argument("--config", help=f"solver config JSON (default: ${CONFIG_ENV} if set)")
    p.add_argument("--iterations", type=_positive_int, help="SimCIM steps per attempt (default 1000)")
    p.add_argument("--attempts", type=_positive_int, help="independent SimCIM restarts (default 1000)")
    p.add_argument("--zeta", type=_positive_float, help="coupling gain (default 1.0)")
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float,
                   help="Gaussian noise standard deviation (default 0.05)")
    p.add_argument("--pump-start", dest="pump_start", type=float, help="pump at step 0 (default -1)")
    p.add_argument("--pump-end", dest="pump_end", type=float, help="pump after the last step (default 1)")
    p.add_argument("--cap", type=_positive_int, default=BRUTE_FORCE_CAP,
                   help="largest problem the exhaustive solver accepts (default %(default)s)")
    if with_seed:
        p.add_argument("--seed", type=int, default=0, help="master seed (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="olcanneal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write random sequences as FASTA")
    p.add_argument("--length", type=_positive_int, required=True, help="bases per sequence")
    p.add_argument("--count", type=_positive_int, default=1, help="number of records (default %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default %(default)s)")
    p.add_argument("--k", type=_positive_int, default=3, help="k-mer length used by --filter (default %(default)s)")
    p.add_argument("--filter", action="store_true",
                   help="apply the benchmark filters (distinct k-mers, non-trivial, unique graphs)")
    p.add_argument("--out", default="sequences.fasta", help="output FASTA (default %(default)s)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("graph", help="build an overlap graph from FASTA reads")
    p.add_argument("--input", required=True, help="FASTA file")
    p.add_argument("--k", type=_positive_int, help="shred reads into k-mers first (default: use reads as-is)")
    p.add_argument("--min-overlap", type=int, help="minimum overlap (default k-1, or 1 without --k)")
    p.add_argument("--out", default="graph.json", help="output graph JSON (default %(default)s)")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("qubo", help="encode the Hamiltonian path problem as a QUBO")
    p.add_argument("--graph", required=True, help="graph JSON")
    p.add_argument("--encoding", choices=ENCODINGS, default=POSITIONAL, help="(default %(default)s)")
    p.add_argument("--penalty", type=_positive_float, default=1.0, help="penalty A (default %(default)s)")
    p.add_argument("--out", default="problem.qubo", help="output QUBO text (default %(default)s)")
    p.add_argument("--map", help="variable map JSON (default <out>.map.json)")
    p.set_defaults(func=cmd_qubo)

    p = sub.add_parser("solve", help="minimise a QUBO with SimCIM or exhaustive search")
    p.add_argument("--qubo", required=True, help="QUBO text file")
    p.add_argument("--solver", choices=("simcim", "brute"), default="simcim", help="(default %(default)s)")
    p.add_argument("--out", default="result.json", help="output JSON (default %(default)s)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("assemble", help="decode a solution into a path and sequence")
    p.add_argument("--graph", required=True, help="graph JSON")
    p.add_argument("--map", help="variable map JSON")
    p.add_argument("--result", help="solve result JSON")
    p.add_argument("--partition", action="store_true",
                   help="split the graph at bridges, solve each part and stitch the paths")
    p.add_argument("--encoding", choices=ENCODINGS, default=POSITIONAL,
                   help="encoding for --partition (default %(default)s)")
    p.add_argument("--penalty", type=_positive_float, default=1.0, help="penalty A for --partition")
    p.add_argument("--solver", choices=("auto", "simcim", "brute"), default="auto",
                   help="solver for --partition (default %(default)s)")
    p.add_argument("--out", default="assembly.json", help="output report (default %(default)s)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("bench", help="run a synthetic benchmark campaign")
    p.add_argument("--lengths", type=_int_list, default=[5, 6, 7, 8, 9, 10],
                   help="comma-separated sequence lengths (default 5,6,7,8,9,10)")
    p.add_argument("--instances", type=_positive_int, default=10,
                   help="instances per length (default %(default)s)")
    p.add_argument("--k", type=_positive_int, default=3, help="k-mer length (default %(default)s)")
    p.add_argument("--encoding", choices=ENCODINGS, default=POSITIONAL, help="(default %(default)s)")
    p.add_argument("--penalty", type=_positive_float, default=1.0, help="penalty A (default %(default)s)")
    p.add_argument("--t-a-us", dest="t_a_us", type=_positive_float,
                   help="fixed per-run time in microseconds, e.g. 20 (default: measured)")
    p.add_argument("--csv", default="campaign.csv", help="CSV report (default %(default)s)")
    p.add_argument("--json", default="campaign.json", help="JSON report (default %(default)s)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("pipeline", help="generate -> graph -> qubo -> solve -> assemble")
    p.add_argument("--input", help="FASTA file; the first record is assembled")
    p.add_argument("--length", type=_positive_int, help="generate a random sequence of this length")
    p.add_argument("--k", type=_positive_int, default=3, help="k-mer length (default %(default)s)")
    p.add_argument("--encoding", choices=ENCODINGS, default=POSITIONAL, help="(default %(default)s)")
    p.add_argument("--penalty", type=_positive_float, default=1.0, help="penalty A (default %(default)s)")
    p.add_argument("--solver", choices=("auto", "simcim", "brute"), default="auto",
                   help="(default %(default)s)")
    p.add_argument("--outdir", default="olcanneal-run", help="output directory (default %(default)s)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OlcAnnealError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
