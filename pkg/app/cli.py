"""
Command line front end

    sl3ext simple-extend --input matrix.json
    sl3ext extend --input matrix.json --bound 20
    sl3ext nu --input matrix.json --bound 25 --format csv
    sl3ext classify-ring --sweep 2..30 --format csv
    sl3ext verify --seed 7

Matrix input is either a matrix payload {"ring": ..., "rows": ...} or an
object with a "matrix" key (the layout of the golden fixtures). Results go
to stdout as JSON or CSV, logs to stderr. Exit status: 0 decided,
2 undecided, 1 input or precondition error.
"""
import argparse
import csv
import json
import logging
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel

from app.config import get_settings
from app.models.classification import SweepRequest
from app.models.enumeration import NuRequest
from app.models.extension import ExtensionRequest, ReduceRequest
from app.models.matrix import MatrixPayload
from app.models.ring import RingRequest
from app.services.engine_service import get_engine_service
from app.services.errors import InvariantViolation
from app.services.ring_core import parse_descriptor
from app.services.verification import run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2

SWEEP_COLUMNS = ("n", "sr1", "fsr15", "asr1", "pi2", "e2", "se2")


# ── Input ──


def _read_json(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _load_matrix(path: str) -> Tuple[MatrixPayload, Dict[str, Any]]:
    raw = _read_json(path)
    if isinstance(raw, dict) and "matrix" in raw:
        return MatrixPayload.model_validate(raw["matrix"]), raw
    return MatrixPayload.model_validate(raw), {}


def parse_sweep(text: str) -> Tuple[int, int]:
    """'a..b' as the inclusive range (a, b)."""
    try:
        start, stop = (int(part) for part in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Sweep range must look like 2..30, got {text!r}")
    if start < 2 or stop < start:
        raise argparse.ArgumentTypeError(f"Sweep range {text!r} is empty or starts below 2")
    return start, stop


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got {text}")
    return value


# ── Output ──


def _emit_json(data: Any, out: TextIO) -> None:
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    elif isinstance(data, list):
        data = [item.model_dump(mode="json") if isinstance(item, BaseModel) else item for item in data]
    out.write(json.dumps(data, indent=2, ensure_ascii=False))
    out.write("\n")


def _emit_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)


# ── Commands ──


def _bound(args: argparse.Namespace, extra: Dict[str, Any]) -> Optional[int]:
    return args.bound if args.bound is not None else extra.get("bound")


def cmd_simple_extend(args: argparse.Namespace, out: TextIO) -> int:
    matrix, extra = _load_matrix(args.input)
    payload = get_engine_service().simply_extend(ExtensionRequest(matrix=matrix, bound=_bound(args, extra)))
    _emit_json(payload, out)
    return EXIT_UNDECIDED if payload.status == "undecided" else EXIT_OK


def cmd_extend(args: argparse.Namespace, out: TextIO) -> int:
    matrix, extra = _load_matrix(args.input)
    payload = get_engine_service().extend(ExtensionRequest(matrix=matrix, bound=_bound(args, extra)))
    _emit_json(payload, out)
    return EXIT_UNDECIDED if payload.status == "undecided" else EXIT_OK


def cmd_reduce(args: argparse.Namespace, out: TextIO) -> int:
    matrix, _ = _load_matrix(args.input)
    modulus = json.loads(args.modulus) if args.modulus is not None else None
    _emit_json(get_engine_service().reduce(ReduceRequest(matrix=matrix, modulus=modulus)), out)
    return EXIT_OK


def cmd_nu(args: argparse.Namespace, out: TextIO) -> int:
    matrix, extra = _load_matrix(args.input)
    bound = _bound(args, extra)
    if bound is None:
        raise ValueError("nu needs --bound")
    payload = get_engine_service().nu(NuRequest(matrix=matrix, bound=bound))
    if args.format == "csv":
        det = _integer_det(payload.matrix)
        _emit_csv(("e", "f", "s", "t", "nu"), ([e, f, s, t, det + e * s + f * t] for e, f, s, t in payload.gamma), out)
    else:
        _emit_json(payload, out)
    return EXIT_OK


def _integer_det(matrix: MatrixPayload) -> int:
    (a, b), (c, d) = ([int(x) for x in row] for row in matrix.rows)
    return a * d - b * c


def cmd_classify_matrix(args: argparse.Namespace, out: TextIO) -> int:
    matrix, extra = _load_matrix(args.input)
    payload = get_engine_service().classify_matrix(ExtensionRequest(matrix=matrix, bound=_bound(args, extra)))
    _emit_json(payload, out)
    undecided = payload.outcome is not None and payload.outcome.status == "undecided"
    return EXIT_UNDECIDED if undecided else EXIT_OK


def cmd_classify_ring(args: argparse.Namespace, out: TextIO) -> int:
    service = get_engine_service()
    if args.sweep is not None:
        start, stop = args.sweep
        response = service.sweep(SweepRequest(start=start, stop=stop), workers=args.workers)
        if args.format == "csv":
            _emit_csv(
                SWEEP_COLUMNS,
                ([report.size] + [int(getattr(report, flag)) for flag in SWEEP_COLUMNS[1:]] for report in response.reports),
                out,
            )
        else:
            _emit_json(response.reports, out)
        return EXIT_OK

    if args.ring is None:
        raise ValueError("classify-ring needs --ring or --sweep")
    report = service.classify_ring(RingRequest(ring=parse_descriptor(args.ring)))
    if args.format == "csv":
        _emit_csv(SWEEP_COLUMNS, [[report.size] + [int(getattr(report, flag)) for flag in SWEEP_COLUMNS[1:]]], out)
    else:
        _emit_json(report, out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    results = run_verification(seed=args.seed)
    if args.format == "json":
        _emit_json(
            [
                {"name": r.name, "check": r.check, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
            out,
        )
    else:
        width = max(len(r.name) for r in results) if results else 4
        for r in results:
            out.write(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.seconds:>8.3f}s  {r.detail}\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_ERROR


COMMANDS = {
    "extend": cmd_extend,
    "simple-extend": cmd_simple_extend,
    "reduce": cmd_reduce,
    "nu": cmd_nu,
    "classify-matrix": cmd_classify_matrix,
    "classify-ring": cmd_classify_ring,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sl3ext", description=get_settings().api_description)
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("extend", "decide extendability"),
        ("simple-extend", "decide simple extendability"),
        ("classify-matrix", "classify one matrix"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--input", default="-", help="matrix JSON file (default: stdin)")
        sub.add_argument("--bound", type=positive_int, help="height bound for the (e, f) search")

    sub = commands.add_parser("reduce", help="reduce a matrix modulo an element")
    sub.add_argument("--input", default="-", help="matrix JSON file (default: stdin)")
    sub.add_argument("--modulus", help="element as JSON (default: the determinant)")

    sub = commands.add_parser("nu", help="enumerate certificates and nu values over Z")
    sub.add_argument("--input", default="-", help="matrix JSON file (default: stdin)")
    sub.add_argument("--bound", type=positive_int, help="height bound for e, f, s and t")
    sub.add_argument("--format", choices=("json", "csv"), default="json")

    sub = commands.add_parser("classify-ring", help="classify a finite ring or sweep Z/n")
    sub.add_argument("--ring", help="ring descriptor as JSON")
    sub.add_argument("--sweep", type=parse_sweep, help="range a..b of moduli n")
    sub.add_argument("--workers", type=positive_int, help="worker processes for sweeps")
    sub.add_argument("--format", choices=("json", "csv"), default="json")

    sub = commands.add_parser("verify", help="run the golden verification suite")
    sub.add_argument("--seed", type=int, help="override the seeds of the randomized checks")
    sub.add_argument("--format", choices=("json", "table"), default="table")

    return parser


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """Parse argv, run one command and return its exit status."""
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    try:
        return COMMANDS[args.command](args, out)
    except (ValueError, OSError) as e:
        logger.error("%s: %s", args.command, e)
        return EXIT_ERROR
    except InvariantViolation as e:
        logger.error("%s: internal check failed: %s", args.command, e)
        return EXIT_ERROR


def main() -> None:
    logging.basicConfig(
        level=get_settings().log_level.upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    sys.exit(run())


if __name__ == "__main__":
    main()
