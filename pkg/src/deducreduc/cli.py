"""Command-line front end: ``encode``, ``reduce``, ``verify`` and ``stats``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .encoder import FactorizationInstance, balanced_splits, encode, hamiltonian_from_equations
from .errors import (DeducReducError, Infeasible, InfeasibleWidths, InvalidProduct, ParseError,
                     TooManyVariables)
from .pbf import degree_profile
from .reduc import ReductionConfig, Stage, reduce_pipeline
from .report import ReductionReport, reference_for
from .textio import (format_equations, format_instance, format_polynomial, format_substitution,
                     parse_deductions, parse_equations, parse_instance, parse_polynomial,
                     parse_substitution, read_text, write_text)
from .verify import (DEFAULT_CAP, Status, compare_ground_states, compare_reduced,
                     decode_factors, extend_assignment)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_TOO_LARGE = 3
EXIT_INFEASIBLE = 4


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _instance(product: int, p_bits: Optional[int], q_bits: Optional[int]) -> FactorizationInstance:
    if (p_bits is None) != (q_bits is None):
        raise UsageError("give both --p-bits and --q-bits, or neither")
    if p_bits is not None:
        return encode(product, p_bits, q_bits)
    last: Optional[Exception] = None
    for a, b in balanced_splits(product):
        try:
            return encode(product, a, b)
        except InfeasibleWidths as exc:
            last = exc
    raise last if last else InvalidProduct(f"no bit split for {product}")


def _write_encoding(out: Path, instance: FactorizationInstance) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_text(out / "equations.txt", format_equations(instance.equations))
    write_text(out / "h0.txt", format_polynomial(instance.hamiltonian()))
    write_text(out / "instance.txt", format_instance(instance))


def run_encode(args) -> int:
    instance = _instance(args.product, args.p_bits, args.q_bits)
    out = Path(args.out_dir)
    _write_encoding(out, instance)
    h0 = instance.hamiltonian()
    print(f"product {instance.product} p_bits {instance.p_bits} q_bits {instance.q_bits}")
    print(f"equations {len(instance.equations)}")
    print(degree_profile(h0).format())
    ref = reference_for(instance.product, instance.p_bits, instance.q_bits)
    if ref is not None:
        report = ReductionReport.from_stages([Stage("Original", h0, None)], reference=ref)
        print(report.table(), end="")
    return EXIT_OK


def _splits(args) -> List[Tuple[int, int]]:
    if (args.p_bits is None) != (args.q_bits is None):
        raise UsageError("give both --p-bits and --q-bits, or neither")
    if args.p_bits is not None:
        return [(args.p_bits, args.q_bits)]
    return balanced_splits(args.product)


def run_reduce(args) -> int:
    user = parse_deductions(read_text(args.deductions)) if args.deductions else ()
    states = 0 if args.no_search else args.states
    config = ReductionConfig(states=states, pattern_degree=args.pattern_degree,
                             rounds=args.rounds, global_lambda=args.global_lambda,
                             judgments=not args.no_judgments, user_deductions=user)
    instance = None
    if args.product is not None:
        if args.hamiltonian or args.equations:
            raise UsageError("--product cannot be combined with --hamiltonian/--equations")
        splits = _splits(args)
        # without explicit widths, fall through to the next split when one is infeasible
        for i, (a, b) in enumerate(splits):
            try:
                instance = encode(args.product, a, b)
                result = reduce_pipeline(instance.hamiltonian(), instance.equations, config)
                break
            except (Infeasible, InfeasibleWidths):
                if i == len(splits) - 1:
                    raise
    else:
        if not args.equations:
            raise UsageError("give --product, or --equations (with an optional --hamiltonian)")
        equations = parse_equations(read_text(args.equations))
        h0 = (parse_polynomial(read_text(args.hamiltonian)) if args.hamiltonian
              else hamiltonian_from_equations(equations))
        result = reduce_pipeline(h0, equations, config)

    echo = {"states": states, "pattern_degree": args.pattern_degree,
            "rounds": args.rounds, "global_lambda": args.global_lambda,
            "judgments": not args.no_judgments, "user_deductions": len(user)}
    ref = None
    if instance is not None:
        echo = {"product": instance.product, "p_bits": instance.p_bits,
                "q_bits": instance.q_bits, **echo}
        ref = reference_for(instance.product, instance.p_bits, instance.q_bits)
    report = ReductionReport.from_stages(result.stages, echo, ref)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if instance is not None:
        _write_encoding(out, instance)
    write_text(out / "h_final.txt", format_polynomial(result.hamiltonian))
    write_text(out / "substitution.txt", format_substitution(result.substitution))
    write_text(out / "report.txt", report.keyvalue(include_timings=args.timings))
    print(report.table(), end="")
    if args.timings:
        for name, seconds in report.timings:
            print(f"time {name} {seconds:.3f}s")
    return EXIT_OK


def run_verify(args) -> int:
    before = parse_polynomial(read_text(args.before))
    after = parse_polynomial(read_text(args.after))
    substitution = parse_substitution(read_text(args.substitution)) if args.substitution else {}
    if substitution:
        verdict = compare_reduced(before, after, substitution, args.cap)
    else:
        verdict = compare_ground_states(before, after, args.cap)
    print(verdict.describe())
    if verdict.status is Status.TOO_LARGE:
        return EXIT_TOO_LARGE
    if not verdict.equivalent:
        return EXIT_VERIFY_FAILED
    if args.instance:
        instance = parse_instance(read_text(args.instance))
        seen = []
        for zero in verdict.zeros:
            full = extend_assignment(zero, substitution)
            missing = [v for v in instance.roles if v not in full]
            if missing:
                # variables absent from both polynomials are free; any value is a zero
                full.update({v: 0 for v in missing})
            pair = decode_factors(instance, full)
            if pair not in seen:
                seen.append(pair)
                print(f"factors {pair[0]} {pair[1]}")
    return EXIT_OK


def run_stats(args) -> int:
    p = parse_polynomial(read_text(args.polynomial))
    print(degree_profile(p).format())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deducreduc",
                                     description="Reduce factoring Hamiltonians without auxiliary qubits.")
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="write carry equations and H0 for a product")
    enc.add_argument("--product", type=int, required=True)
    enc.add_argument("--p-bits", type=int)
    enc.add_argument("--q-bits", type=int)
    enc.add_argument("--out-dir", default=".")
    enc.set_defaults(func=run_encode)

    red = sub.add_parser("reduce", help="run simple judgments, search and deduc-reduc")
    red.add_argument("--product", type=int)
    red.add_argument("--p-bits", type=int)
    red.add_argument("--q-bits", type=int)
    red.add_argument("--hamiltonian")
    red.add_argument("--equations")
    red.add_argument("--states", type=_positive, default=1000)
    red.add_argument("--pattern-degree", type=_positive, default=2)
    red.add_argument("--rounds", type=_positive, default=1)
    red.add_argument("--global-lambda", action="store_true")
    red.add_argument("--no-judgments", action="store_true")
    red.add_argument("--no-search", action="store_true",
                     help="skip the state search; apply only judgments and --deductions")
    red.add_argument("--deductions")
    red.add_argument("--out-dir", default=".")
    red.add_argument("--timings", action="store_true",
                     help="also write the (non-deterministic) timing section")
    red.set_defaults(func=run_reduce)

    ver = sub.add_parser("verify", help="compare the ground states of two polynomials")
    ver.add_argument("before")
    ver.add_argument("after")
    ver.add_argument("--instance")
    ver.add_argument("--substitution")
    ver.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    ver.set_defaults(func=run_verify)

    st = sub.add_parser("stats", help="print the degree profile of a polynomial file")
    st.add_argument("polynomial")
    st.set_defaults(func=run_stats)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidProduct, InfeasibleWidths, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooManyVariables as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DeducReducError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
