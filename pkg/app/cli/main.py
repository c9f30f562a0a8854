"""Command-line frontend.

Exit codes: 0 success / verified, 1 definite negative, 2 usage or hypothesis error,
3 resource exhaustion (or an incomplete campaign).
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence

from app.algebra.field import GF, QQ, FieldDesc
from app.algebra.pencil import DetMethod, classify_line, det_pencil, minor_gcd
from app.core.config import settings
from app.core.errors import FullRankError, UsageError
from app.core.logging import get_logger, setup_logging
from app.gallery.examples import ExampleName, build_example, example_properties
from app.lines.predicates import line_full_rank
from app.lines.search import SearchStatus, SearchStrategy, constant_det_witness_search, witness_search
from app.schemas.campaign import CampaignMode, CampaignSpec, Theorem
from app.schemas.certificate import LineCheckResponse, SearchResponse
from app.services.campaign_service import CampaignService
from app.utils.textformat import format_matrix, format_subspace, read_matrix, read_subspace, write_text

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1


def _emit(text: str, out: Optional[str] = None) -> None:
    if out and out != "-":
        write_text(out, text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _field_arg(value: str) -> FieldDesc:
    if value.lower() in ("rat", "q", "qq"):
        return QQ
    try:
        return GF(int(value))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a prime or 'rat', got {value!r}")
    except UsageError as e:
        raise argparse.ArgumentTypeError(e.message)


def _codim_arg(value: str) -> tuple[int, int]:
    """``c`` or ``a..b`` (also ``a-b``)."""
    for sep in ("..", "-"):
        if sep in value:
            lo, hi = value.split(sep, 1)
            try:
                return int(lo), int(hi)
            except ValueError:
                break
    else:
        try:
            c = int(value)
            return c, c
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"expected a codimension or a range a..b, got {value!r}")


def _ranks_arg(value: str) -> List[int]:
    try:
        if ".." in value:
            lo, hi = value.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ranks like 0,1,2 or 0..2, got {value!r}")


# -- subcommands ---------------------------------------------------------------


def cmd_check_line(args: argparse.Namespace) -> int:
    A = read_matrix(args.A)
    N = read_matrix(args.N)
    check = line_full_rank(A, N)
    response = LineCheckResponse.from_check(check)
    if args.format == "json":
        _emit(response.model_dump_json(indent=2) + "\n", args.out)
    else:
        lines = [f"verdict: {response.verdict}"]
        if check.full_rank:
            f = A.field
            lines.extend(f"t = {f.format(t)}: rank {r}" for t, r in check.certificate.table)
            if check.certificate.analysis is not None:
                analysis = check.certificate.analysis
                lines.append(f"{analysis.classification.value}: {analysis.poly.render()}")
        else:
            lines.append(f"failing t0 = {check.failing_t}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if check.full_rank else EXIT_NEGATIVE


def cmd_witness(args: argparse.Namespace) -> int:
    V = read_subspace(args.space)
    N = read_matrix(args.N)
    strategy = SearchStrategy(args.strategy)
    search = constant_det_witness_search if args.constant_det else witness_search
    outcome = search(V, N, strategy=strategy, budget=args.budget, seed=args.seed, workers=args.workers)
    response = SearchResponse.from_outcome(outcome, strategy.value)
    if args.format == "json":
        _emit(response.model_dump_json(indent=2) + "\n", args.out)
    else:
        lines = [f"status: {outcome.status.value}", f"cases examined: {outcome.cases_examined}"]
        if outcome.certificate is not None:
            lines.append("witness:")
            lines.append(format_matrix(outcome.certificate.A).rstrip("\n"))
        _emit("\n".join(lines) + "\n", args.out)
    return {
        SearchStatus.WITNESS_FOUND: EXIT_OK,
        SearchStatus.EXHAUSTED: EXIT_NEGATIVE,
        SearchStatus.BUDGET_EXHAUSTED: 3,
    }[outcome.status]


def cmd_verify(args: argparse.Namespace) -> int:
    codim_min, codim_max = args.codim
    spec = CampaignSpec.build(
        theorem=args.theorem,
        q=args.q,
        n=args.n,
        p=args.p,
        codim_min=codim_min,
        codim_max=codim_max,
        ranks=args.ranks,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
        random_conjugates=args.random_conjugates,
        allow_out_of_hypothesis=args.allow_out_of_hypothesis,
        element_budget=args.budget,
        workers=args.workers,
    )
    service = CampaignService(args.workers)
    if args.monotonicity:
        report = service.run_monotonicity(spec, args.monotonicity)
    else:
        report = service.run(spec)
    if args.format == "json":
        _emit(report.model_dump_json(indent=2) + "\n", args.out)
    else:
        _emit(report.to_text(), args.out)
    return report.exit_code


def cmd_gen(args: argparse.Namespace) -> int:
    item = build_example(ExampleName(args.example), args.field, n=args.n, p=args.p, r=args.r)
    files = {"space.txt": format_subspace(item.space), "N.txt": format_matrix(item.N)}
    if item.A is not None:
        files["A.txt"] = format_matrix(item.A)
    properties = example_properties(item)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        for name, text in files.items():
            write_text(out_dir / name, text)
        logger.info(f"Wrote {', '.join(files)} to {out_dir}")
    if args.format == "json":
        payload: dict[str, Any] = {"example": item.name.value, "properties": properties, "files": files}
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    elif not args.out_dir:
        chunks = [f"# {name}\n{text}" for name, text in files.items()]
        _emit("\n".join(chunks))
    else:
        _emit("".join(f"{k}: {v}\n" for k, v in properties.items()))
    return EXIT_OK


def cmd_pencil_det(args: argparse.Namespace) -> int:
    A = read_matrix(args.A)
    N = read_matrix(args.N)
    if A.is_square:
        poly = det_pencil(A, N, DetMethod(args.method))
        kind = "det"
    else:
        poly = minor_gcd(A, N)
        kind = "minor-gcd"
    if args.format == "json":
        analysis = classify_line(A, N) if A.nrows >= A.ncols else None
        payload = {
            "kind": kind,
            "polynomial": poly.render(),
            "degree": None if poly.is_zero() else int(poly.degree),
            "classification": analysis.classification.value if analysis else None,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(poly.render() + "\n", args.out)
    return EXIT_OK


def cmd_info(args: argparse.Namespace) -> int:
    data = settings.model_dump()
    if args.format == "json":
        _emit(json.dumps(data, indent=2, default=str) + "\n")
    else:
        width = max(len(k) for k in data)
        _emit("".join(f"{k.ljust(width)}  {v}\n" for k, v in data.items()))
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--log-level", default=None)
    common.add_argument("--log-format", choices=["colored", "json"], default=None)

    parser = argparse.ArgumentParser(
        prog="fullrank", description="Exact full-rank line checks, witness search and verification campaigns."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-line", parents=[common], help="is every matrix of A + KN of rank p?")
    p.add_argument("A")
    p.add_argument("N")
    p.set_defaults(func=cmd_check_line)

    p = sub.add_parser("witness", parents=[common], help="search a subspace for a full-rank line")
    p.add_argument("space")
    p.add_argument("N")
    p.add_argument("--strategy", choices=[s.value for s in SearchStrategy], default="exhaustive")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--constant-det", action="store_true", help="require det(A + tN) constant and nonzero")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", parents=[common], help="run a theorem verification campaign")
    p.add_argument("--theorem", choices=[t.value for t in Theorem], required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--codim", type=_codim_arg, default=(0, 0), help="c or a..b")
    p.add_argument("--ranks", type=_ranks_arg, default=None, help="ranks of N, e.g. 0,1 or 0..2")
    p.add_argument("--mode", choices=[m.value for m in CampaignMode], default="exhaustive")
    p.add_argument("--samples", type=int, default=settings.SAMPLE_FALLBACK_COUNT)
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=settings.WORKERS)
    p.add_argument("--budget", type=int, default=None, help="element budget per search")
    p.add_argument("--random-conjugates", type=int, default=0)
    p.add_argument("--allow-out-of-hypothesis", action="store_true")
    p.add_argument("--monotonicity", type=int, default=0, metavar="CHAINS", help="run the monotonicity spot-check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", parents=[common], help="write an explicit construction")
    p.add_argument("--example", choices=[e.value for e in ExampleName], required=True)
    p.add_argument("--q", dest="field", type=_field_arg, default=GF(2), help="prime or 'rat'")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pencil-det", parents=[common], help="print det(A + tN) (minor gcd if rectangular)")
    p.add_argument("A")
    p.add_argument("N")
    p.add_argument("--method", choices=[m.value for m in DetMethod], default="auto")
    p.set_defaults(func=cmd_pencil_det)

    p = sub.add_parser("info", parents=[common], help="print the effective settings")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(log_level=args.log_level, log_format=args.log_format, log_file=settings.LOG_FILE)
    if args.command == "gen":
        if args.p is None:
            args.p = args.n if args.example in ("remark1", "remark2-f2") else max(args.n - 1, 1)
        if args.r is None:
            args.r = max(args.p - 1, 0)
    try:
        return args.func(args)
    except FullRankError as e:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(f"error: {e.message}\n")
        return e.exit_code
