"""Command-line experiment runner.

Every subcommand writes plot-ready CSV files and a ``summary.txt`` of
``key=value`` lines into ``--out``. Each file starts with comment lines
carrying the config hash and seed; wall-clock data lives only in
``metadata.json`` so repeated runs give byte-identical results.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx
import numpy as np

from . import __version__
from .ansatz import ROTATION_SCHEMES, ENTANGLERS, HeuristicAnsatzSpec, heuristic_circuit
from .errors import InputFormatError, NumericError, OracleLimitError
from .fermion import h2_hamiltonian
from .noise import NOISE_KINDS, ExtrapolationPlan, NoiseModel, circuit_to_schedule, mitigated_expectation
from .optimize import NelderMeadSettings, OptimizerConfig, SpsaSettings
from .pauli import read_hamiltonian
from .qaoa import all_cut_values, demo_graph, qaoa_grid_scan, read_graph, solve_maxcut_vqe
from .qvolume import DeviceModel, quantum_volume, volume_grid
from .selftest import run_checks
from .statevec import exact_expectation, make_rng, run
from .vqe import H2_SPSA, VqeProblem, dissociation_curve, ground_energy, run_vqe

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4

CONNECTIVITY_NAMES = {
    "all-to-all": "all_to_all",
    "planar": "planar_grid",
    "linear": "linear_chain",
    "graph": "graph",
}
HEATMAP_EPS = tuple(10.0 ** (-k / 4) for k in range(4, 25))
HEATMAP_N = (2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return int(self.options.get("seed", 0))

    def canonical(self) -> str:
        body = {k: v for k, v in self.options.items() if k not in ("out", "config")}
        return json.dumps({"subcommand": self.subcommand, "options": body}, sort_keys=True, default=str)

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


class Output:
    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.directory = Path(config.options["out"])
        self.files: list[str] = []

    def _header(self) -> str:
        return f"# config_hash={self.config.hash}\n# seed={self.config.seed}\n"

    def csv(self, name: str, header: list[str], rows) -> Path:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        return self._write(name, self._header() + buf.getvalue())

    def summary(self, values: dict) -> Path:
        lines = [f"config_hash={self.config.hash}", f"seed={self.config.seed}", f"subcommand={self.config.subcommand}"]
        lines += [f"{k}={_fmt(v)}" for k, v in values.items()]
        return self._write("summary.txt", "\n".join(lines) + "\n")

    def metadata(self, started: float, elapsed: float) -> Path:
        meta = {
            "config_hash": self.config.hash,
            "seed": self.config.seed,
            "config": json.loads(self.config.canonical()),
            "version": __version__,
            "started_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
            "elapsed_seconds": round(elapsed, 3),
            "files": self.files,
        }
        return self._write("metadata.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")

    def _write(self, name: str, text: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / name
        path.write_text(text)
        if name != "metadata.json":
            self.files.append(name)
        return path


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _scale_factors(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("need at least one scale factor")
    return values


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _optimizer_config(args, default_spsa: SpsaSettings | None = None) -> OptimizerConfig:
    spsa = default_spsa or SpsaSettings()
    overrides = {k: getattr(args, f"spsa_{k}") for k in ("a", "c") if getattr(args, f"spsa_{k}") is not None}
    if overrides:
        spsa = SpsaSettings(**{**spsa.__dict__, **overrides})
    return OptimizerConfig(max_iterations=args.max_iter, spsa=spsa, nelder_mead=NelderMeadSettings(), seed=args.seed)


def _shots(args) -> int | None:
    if args.mode == "exact":
        return None
    return args.shots


# subcommands


def cmd_h2(args, out: Output) -> int:
    h = read_hamiltonian(args.hamiltonian) if args.hamiltonian else h2_hamiltonian()
    spec = HeuristicAnsatzSpec(h.n, args.depth, args.ansatz, args.entangler)
    problem = VqeProblem(h, spec, shots=_shots(args), optimizer=args.optimizer, config=_optimizer_config(args, H2_SPSA))
    result = run_vqe(problem)
    exact = ground_energy(h)
    trace = result.trace
    out.csv(
        "trace.csv",
        ["evaluation", "iteration", "cost", "std_error", "best_so_far"],
        [(k, e.iteration, e.cost, e.std_error, b) for k, (e, b) in enumerate(zip(trace.evaluations, trace.best_so_far()))],
    )
    out.summary({
        "qubits": h.n,
        "depth": args.depth,
        "ansatz": args.ansatz,
        "entangler": args.entangler,
        "optimizer": args.optimizer,
        "mode": args.mode,
        "shots": _shots(args) or 0,
        "iterations": trace.iterations,
        "evaluations": len(trace.evaluations),
        "energy": result.exact_energy,
        "estimated_energy": result.estimate.value,
        "std_error": result.estimate.std_error,
        "exact_ground_energy": exact,
        "error": result.exact_energy - exact,
        "parameters": " ".join(repr(float(x)) for x in result.theta),
    })
    return EXIT_OK


def cmd_curve(args, out: Output) -> int:
    def make_problem(h):
        spec = HeuristicAnsatzSpec(h.n, args.depth, args.ansatz, args.entangler)
        return VqeProblem(h, spec, shots=_shots(args), optimizer=args.optimizer, config=_optimizer_config(args, H2_SPSA))

    points = dissociation_curve(args.directory, make_problem, args.pattern)
    out.csv(
        "curve.csv",
        ["distance", "energy", "exact_ground_energy", "error", "source"],
        [(p.distance, p.energy, p.exact_ground, p.energy - p.exact_ground, p.source) for p in points],
    )
    worst = max(abs(p.energy - p.exact_ground) for p in points)
    out.summary({"points": len(points), "depth": args.depth, "max_abs_error": worst})
    return EXIT_OK


def _graph(args):
    return read_graph(args.graph) if args.graph else demo_graph()


def cmd_maxcut(args, out: Output) -> int:
    g = _graph(args)
    result = solve_maxcut_vqe(
        g,
        ansatz=args.ansatz,
        depth=args.depth,
        optimizer=args.optimizer,
        config=_optimizer_config(args),
        shots=_shots(args),
        sample_shots=args.sample_shots,
        entangler=args.entangler,
    )
    cuts = all_cut_values(g)
    probs = result.state.probabilities()
    n = g.n_nodes
    out.csv(
        "histogram.csv",
        ["bitstring", "cut", "probability", "counts", "optimal"],
        [
            (format(k, f"0{n}b"), cuts[k], probs[k], result.counts.get(format(k, f"0{n}b"), 0), format(k, f"0{n}b") in result.optimal)
            for k in range(2**n)
        ],
    )
    trace = result.trace
    out.csv(
        "trace.csv",
        ["evaluation", "iteration", "cost", "std_error"],
        [(k, e.iteration, e.cost, e.std_error) for k, e in enumerate(trace.evaluations)],
    )
    out.summary({
        "nodes": n,
        "edges": len(g.edges),
        "ansatz": args.ansatz,
        "depth": args.depth,
        "iterations": trace.iterations,
        "energy": result.energy,
        "expected_cut": (g.total_weight - result.energy) / 2,
        "max_cut": result.max_cut,
        "optimal_bitstrings": " ".join(sorted(result.optimal)),
        "most_frequent": " ".join(result.solutions),
        "success_probability": result.success_probability,
    })
    return EXIT_OK


def cmd_qaoa_scan(args, out: Output) -> int:
    g = _graph(args)
    points = qaoa_grid_scan(g, args.points, args.span)
    out.csv(
        "qaoa_scan.csv",
        ["beta", "gamma", "energy", "success_probability"],
        [(p.beta, p.gamma, p.energy, p.success_probability) for p in points],
    )
    best = min(points, key=lambda p: p.energy)
    out.summary({
        "points": len(points),
        "best_beta": best.beta,
        "best_gamma": best.gamma,
        "best_energy": best.energy,
        "best_success_probability": best.success_probability,
    })
    return EXIT_OK


def cmd_mitigate(args, out: Output) -> int:
    h = read_hamiltonian(args.hamiltonian) if args.hamiltonian else h2_hamiltonian()
    spec = HeuristicAnsatzSpec(h.n, args.depth, args.ansatz, args.entangler)
    theta = make_rng([args.seed, 0x2E]).uniform(-np.pi, np.pi, spec.parameter_count)
    circuit = heuristic_circuit(spec, theta)
    schedule = circuit_to_schedule(circuit, args.gate_duration)
    noiseless = exact_expectation(run(circuit), h)
    plan = ExtrapolationPlan.from_scale_factors(args.scale_factors)
    result = mitigated_expectation(schedule, NoiseModel(args.noise_kind, args.noise_rate), h, plan)
    rows = [("raw", c, w, v, v - noiseless) for c, w, v in zip(plan.scale_factors, plan.weights, result.raw)]
    rows.append(("mitigated", 0.0, "", result.mitigated, result.mitigated - noiseless))
    rows.append(("noiseless", 0.0, "", noiseless, 0.0))
    out.csv("mitigation.csv", ["label", "scale_factor", "weight", "expectation", "error"], rows)
    unmitigated = result.unmitigated
    out.summary({
        "noise_kind": args.noise_kind,
        "noise_rate": args.noise_rate,
        "total_time": schedule.total_time,
        "lambda_t": args.noise_rate * schedule.total_time,
        "scale_factors": ",".join(_fmt(c) for c in plan.scale_factors),
        "noiseless": noiseless,
        "unmitigated": unmitigated,
        "mitigated": result.mitigated,
        "unmitigated_error": unmitigated - noiseless,
        "mitigated_error": result.mitigated - noiseless,
    })
    return EXIT_OK


def _coupling_graph(path: str) -> nx.Graph:
    g = nx.Graph()
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise InputFormatError(f"expected '<i> <j> [w]', got {line!r}", lineno, path)
        try:
            g.add_edge(int(parts[0]), int(parts[1]))
        except ValueError:
            raise InputFormatError(f"bad edge {line!r}", lineno, path) from None
    if g.number_of_nodes() == 0:
        raise InputFormatError("coupling graph has no edges", None, path)
    return nx.convert_node_labels_to_integers(g, ordering="sorted")


def cmd_qv(args, out: Output) -> int:
    connectivity = CONNECTIVITY_NAMES[args.connectivity]
    graph = None
    n = args.n
    if connectivity == "graph":
        if not args.graph:
            raise ConfigError("--graph: required with --connectivity graph")
        graph = _coupling_graph(args.graph)
        n = n or graph.number_of_nodes()
        if n != graph.number_of_nodes():
            raise ConfigError(f"--n: {n} does not match the {graph.number_of_nodes()} nodes in --graph")
    if n is None:
        raise ConfigError("--n: required unless --graph is given")
    device = DeviceModel(n, args.eps, connectivity, args.k, graph=graph, routing_trials=args.trials, seed=args.seed)
    report = quantum_volume(device)
    out.csv(
        "qv.csv",
        ["n", "eps_eff", "depth", "volume"],
        [(r.n, r.eps_eff, r.depth, r.volume) for r in report.rows],
    )
    grid = volume_grid(HEATMAP_EPS, HEATMAP_N)
    out.csv(
        "qv_heatmap.csv",
        ["eps_eff", "n_qubits", "volume", "log10_volume"],
        [(e, m, grid[i, j], math.log10(grid[i, j]) if grid[i, j] else "") for i, e in enumerate(HEATMAP_EPS) for j, m in enumerate(HEATMAP_N)],
    )
    top = report.row(n)
    out.summary({
        "connectivity": connectivity,
        "n_qubits": n,
        "eps": args.eps,
        "k": args.k,
        "depth_at_n": top.depth,
        "quantum_volume": report.volume,
        "n_star": report.n_star,
        "depth_at_n_star": report.best.depth,
    })
    return EXIT_OK


def cmd_selftest(args, out: Output) -> int:
    results = run_checks()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail} ({r.seconds:.2f}s)")
    out.csv("selftest.csv", ["check", "passed", "detail"], [(r.name, r.passed, r.detail) for r in results])
    failed = [r.name for r in results if not r.passed]
    out.summary({"checks": len(results), "failed": len(failed), "failed_checks": " ".join(failed)})
    return EXIT_OK if not failed else EXIT_NUMERIC


COMMANDS = {
    "h2": cmd_h2,
    "curve": cmd_curve,
    "maxcut": cmd_maxcut,
    "qaoa-scan": cmd_qaoa_scan,
    "mitigate": cmd_mitigate,
    "qv": cmd_qv,
    "selftest": cmd_selftest,
}


def _common(p: argparse.ArgumentParser, out_default: str) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=out_default, help="output directory")
    p.add_argument("--config", help="JSON file of option defaults (command-line flags win)")


def _variational(p: argparse.ArgumentParser, depth: int, max_iter: int, ansatz: str, entangler: str) -> None:
    p.add_argument("--depth", type=_non_negative_int, default=depth)
    p.add_argument("--ansatz", default=ansatz)
    p.add_argument("--entangler", choices=ENTANGLERS, default=entangler)
    p.add_argument("--optimizer", choices=("spsa", "nelder-mead"), default="spsa")
    p.add_argument("--max-iter", type=_non_negative_int, default=max_iter)
    p.add_argument("--mode", choices=("exact", "shots"), default="exact")
    p.add_argument("--shots", type=_positive_int, default=1024)
    p.add_argument("--spsa-a", type=float, default=None, help="SPSA step-size numerator")
    p.add_argument("--spsa-c", type=float, default=None, help="SPSA perturbation size")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqeforge", description="Variational quantum algorithm experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("h2", help="VQE for a qubit Hamiltonian (default: two-qubit H2)")
    _common(p, "out/h2")
    _variational(p, 2, 500, "YZ", "cz_linear_chain")
    p.add_argument("--hamiltonian", help="Hamiltonian file (coefficient + Pauli string per line)")

    p = sub.add_parser("curve", help="VQE over a directory of Hamiltonians, one per bond distance")
    _common(p, "out/curve")
    _variational(p, 2, 500, "YZ", "cz_linear_chain")
    p.add_argument("directory")
    p.add_argument("--pattern", default="*.ham")

    p = sub.add_parser("maxcut", help="MaxCut by VQE or QAOA")
    _common(p, "out/maxcut")
    _variational(p, 3, 100, "Y_only", "cz_linear_chain")
    p.add_argument("--graph", help="edge-list file '<i> <j> <w>' (default: 4-node demo graph)")
    p.add_argument("--sample-shots", type=_positive_int, default=1024)

    p = sub.add_parser("qaoa-scan", help="level-1 QAOA grid scan over (beta, gamma)")
    _common(p, "out/qaoa-scan")
    p.add_argument("--graph")
    p.add_argument("--points", type=_positive_int, default=21)
    p.add_argument("--span", type=float, default=math.pi)

    p = sub.add_parser("mitigate", help="zero-noise extrapolation of a noisy trial circuit")
    _common(p, "out/mitigate")
    p.add_argument("--hamiltonian", help="observable file (default: two-qubit H2)")
    p.add_argument("--depth", type=_non_negative_int, default=1)
    p.add_argument("--ansatz", default="YZ")
    p.add_argument("--entangler", choices=ENTANGLERS, default="cz_linear_chain")
    p.add_argument("--noise-kind", choices=NOISE_KINDS, default="amplitude_damping")
    p.add_argument("--noise-rate", type=float, default=0.001, help="rate per unit gate time")
    p.add_argument("--gate-duration", type=float, default=1.0)
    p.add_argument("--scale-factors", type=_scale_factors, default=(1.0, 2.0))

    p = sub.add_parser("qv", help="quantum volume table and heatmap grid")
    _common(p, "out/qv")
    p.add_argument("--connectivity", choices=tuple(CONNECTIVITY_NAMES), default="all-to-all")
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--n", type=int, default=None, help="physical qubits")
    p.add_argument("--k", type=float, default=1.0, help="connectivity scaling constant")
    p.add_argument("--graph", help="coupling graph edge list (with --connectivity graph)")
    p.add_argument("--trials", type=_positive_int, default=200, help="routing Monte-Carlo trials")

    p = sub.add_parser("selftest", help="oracle-equivalence checks")
    _common(p, "out/selftest")
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        data = json.loads(Path(args.config).read_text())
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc.msg}", exc.lineno, args.config) from None
    if not isinstance(data, dict):
        raise InputFormatError("config file must hold a JSON object", None, args.config)
    subparser = parser._subparsers._group_actions[0].choices[args.subcommand]
    known = {a.dest for a in subparser._actions}
    defaults = {}
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("help", "config"):
            raise ConfigError(f"--{key}: unknown option in config file {args.config}")
        action = next(a for a in subparser._actions if a.dest == dest)
        if action.type is not None and isinstance(value, str):
            value = action.type(value)
        if dest == "scale_factors" and isinstance(value, list):
            value = tuple(float(v) for v in value)
        defaults[dest] = value
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _validate(args) -> None:
    if getattr(args, "ansatz", None) not in (None, "qaoa", *ROTATION_SCHEMES):
        raise ConfigError(f"--ansatz: unknown {args.ansatz!r}; choose from {(*ROTATION_SCHEMES, 'qaoa')}")
    if args.subcommand != "maxcut" and getattr(args, "ansatz", None) == "qaoa":
        raise ConfigError("--ansatz: 'qaoa' is only available for maxcut")
    if getattr(args, "noise_rate", 0) < 0:
        raise ConfigError("--noise-rate: must be >= 0")
    if args.subcommand == "qv" and not 0 < args.eps < 1:
        raise ConfigError(f"--eps: must lie in (0, 1), got {args.eps}")
    if args.subcommand == "qv" and args.n is not None and args.n < 2:
        raise ConfigError(f"--n: need at least 2 qubits, got {args.n}")
    if args.subcommand == "mitigate":
        c = args.scale_factors
        if c[0] < 1 or any(b <= a for a, b in zip(c, c[1:])):
            raise ConfigError("--scale-factors: must start at >= 1 and increase strictly")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config_file(parser, argv)
        _validate(args)
        options = {k: v for k, v in vars(args).items() if k != "subcommand"}
        config = RunConfig(args.subcommand, options)
        out = Output(config)
        started = time.time()
        t0 = time.perf_counter()
        status = COMMANDS[args.subcommand](args, out)
        out.metadata(started, time.perf_counter() - t0)
    except SystemExit as exc:
        return int(exc.code or 0)
    except InputFormatError as exc:
        print(f"vqeforge: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"vqeforge: input error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except argparse.ArgumentTypeError as exc:
        print(f"vqeforge: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"vqeforge: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, OracleLimitError, ValueError) as exc:
        print(f"vqeforge: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    summary = out.directory / "summary.txt"
    print(summary.read_text(), end="")
    return status


if __name__ == "__main__":
    sys.exit(main())
