"""``qsprep`` command line.

Exit status 1 signals invalid input or arguments, 2 an I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis
from .amplitudes import AmplitudeVector, SparseAmplitudeVector, densify, read_json
from .errors import QSPrepError
from .lowering import lower, metrics
from .qasm import export_qasm
from .simulator import circuit_marginals, mae, sample_distribution, simulate, state_distance
from .synthesis import prepare

SPLIT_KEYWORDS = ("auto", "sublinear", "top-down", "bottom-up", "exact-balance")
METHOD_CHOICES = ("top-down", "bottom-up", "bidirectional", "sparse-bidirectional")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _split_arg(text: str) -> str | int:
    if text in SPLIT_KEYWORDS:
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"split must be an integer or one of {', '.join(SPLIT_KEYWORDS)}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsprep", description="Configurable state-preparation circuits.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input(p):
        p.add_argument("--input", required=True, help="JSON amplitude file (dense or sparse)")
        p.add_argument("--method", choices=METHOD_CHOICES, default=None)
        p.add_argument("--split", type=_split_arg, default="auto")
        p.add_argument("--no-normalize", action="store_true", help="reject unnormalized input")

    p = sub.add_parser("synth", help="emit a circuit and its resource report")
    add_input(p)
    p.add_argument("--emit", choices=("qasm", "json"), default="qasm")
    p.add_argument("--keep-high-level", action="store_true",
                   help="keep CSWAP/multiplexers (json) or emit CSWAP as a defined gate (qasm)")
    p.add_argument("--out", help="circuit destination; the report then goes to stdout")

    p = sub.add_parser("simulate", help="exact or sampled output distribution")
    add_input(p)
    p.add_argument("--shots", type=int, default=0, help="0 means exact probabilities")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="CSV of resources over an (n, s) grid")
    p.add_argument("--n", type=int, nargs="+", required=True, help="n values, or 'lo hi' with --range")
    p.add_argument("--range", action="store_true", help="treat --n LO HI as an inclusive range")
    p.add_argument("--s", type=int, nargs="*", default=None)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--simulate", action="store_true", help="also verify marginals (width-capped)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("analyze", help="predicted width and depth for every split")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    return parser


def _load(args) -> AmplitudeVector | SparseAmplitudeVector:
    return read_json(args.input, normalize=not args.no_normalize)


def _method(args, v) -> str:
    if args.method is None:
        return "sparse_bidirectional" if isinstance(v, SparseAmplitudeVector) else "bidirectional"
    return args.method.replace("-", "_")


def _build(args):
    v = _load(args)
    method = _method(args, v)
    if method == "top_down":
        s = v.n
    elif method == "bottom_up":
        s = 1
    else:
        s = analysis.resolve_split(v.n, args.split)
    return v, s, method, prepare(v, s, method)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_synth(args) -> None:
    _, s, method, circuit = _build(args)
    report = {"method": method, "s": s, **metrics(circuit).to_json()}
    if args.emit == "qasm":
        target = circuit if args.keep_high_level else lower(circuit)
        text = export_qasm(target, keep_high_level=args.keep_high_level)
    else:
        target = circuit if args.keep_high_level else lower(circuit)
        text = json.dumps(target.to_json(), indent=1) + "\n"
    _write(text, args.out)
    report_text = json.dumps(report, sort_keys=True) + "\n"
    if args.out:
        sys.stdout.write(report_text)
    else:
        sys.stderr.write(report_text)


def cmd_simulate(args) -> None:
    v, s, method, circuit = _build(args)
    exact = circuit_marginals(circuit)
    target = densify(v) if isinstance(v, SparseAmplitudeVector) else v
    result = {"method": method, "s": s, "width": circuit.width}
    if args.shots > 0:
        dist = sample_distribution(exact, args.shots, args.seed)
        result.update(shots=args.shots, seed=args.seed)
    else:
        dist = exact
        result.update(shots=0)
    result["marginals"] = dist.to_json()
    result["mae"] = mae(dist.probs, target.probabilities())
    if not circuit.ancillas:
        result["overlap"] = state_distance(simulate(circuit), target, circuit.outputs)["overlap"]
    _write(json.dumps(result, sort_keys=True) + "\n", args.out)


def cmd_sweep(args) -> None:
    if args.range:
        if len(args.n) != 2:
            raise QSPrepError("--range needs exactly two values")
        n_values = range(args.n[0], args.n[1] + 1)
    else:
        n_values = args.n
    rows = analysis.sweep(n_values, args.s, trials=args.trials, seed=args.seed,
                          simulate=args.simulate, workers=args.workers)
    _write(analysis.rows_to_csv(rows), args.out)


def cmd_analyze(args) -> None:
    lines = ["n,s,predicted_width,predicted_depth"]
    for p in analysis.predictions(args.n):
        lines.append(f"{p.n},{p.s},{p.predicted_width},{p.predicted_abstract_depth:g}")
    _write("\n".join(lines) + "\n", args.out)


COMMANDS = {"synth": cmd_synth, "simulate": cmd_simulate, "sweep": cmd_sweep, "analyze": cmd_analyze}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (QSPrepError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"qsprep: error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"qsprep: I/O error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
