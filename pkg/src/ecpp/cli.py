"""Command line front end: prove, verify, classpoly, bench.

Exit codes: 0 success (prime proven / certificate valid), 2 negative
result (composite input / invalid certificate), 1 usage or runtime error.
"""

from __future__ import annotations

import argparse
import os
import re
import statistics
import sys
import random

from .certificate import CertificateError, parse, serialize, verify_chain
from .classpoly import hilbert_class_poly, save_cache
from .modarith import CompositeDetectedError, random_probable_prime
from .prover import Prover, ProverConfig, ResourceExhaustedError

_NUMBER_RE = re.compile(r"(\d+)\^(\d+)([+-]\d+)?$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_number(text: str) -> int:
    """Decimal literal or the expression form a^b+c / a^b-c."""
    text = text.strip()
    if text.isdigit():
        return int(text)
    m = _NUMBER_RE.match(text)
    if not m:
        raise UsageError(f"cannot parse number {text!r} (use decimal or a^b±c)")
    a, b, c = int(m.group(1)), int(m.group(2)), int(m.group(3) or 0)
    return a ** b + c


def _add_prover_flags(sub):
    sub.add_argument("--dmax", type=int, default=10 ** 6)
    sub.add_argument("--hmax", type=int, default=200)
    sub.add_argument("--pool-size", type=int, default=0)
    sub.add_argument("--smooth-bound", type=int, default=0)
    sub.add_argument("--delta", type=int, default=12)
    sub.add_argument("--subset-size", type=int, default=2)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--strict-2n", action="store_true")
    sub.add_argument("--threads", type=int, default=1)


def _config(args) -> ProverConfig:
    return ProverConfig(
        d_max=args.dmax, h_max=args.hmax, pool_size=args.pool_size,
        smooth_bound=args.smooth_bound, delta=args.delta,
        max_subset_size=args.subset_size, rng_seed=args.seed,
        strict_2n=args.strict_2n, threads=args.threads,
        hd_cache_dir=os.environ.get("ECPP_HD_CACHE"),
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="ecpp", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("prove", help="prove primality, emit a certificate")
    p.add_argument("n")
    p.add_argument("--out", help="certificate file (default: stdout)")
    _add_prover_flags(p)

    v = subs.add_parser("verify", help="verify a certificate file")
    v.add_argument("--in", dest="infile", required=True)

    c = subs.add_parser("classpoly", help="write an H_D cache file")
    c.add_argument("d", type=int)
    c.add_argument("--out", help="output file (default: HD_<D>.txt)")

    b = subs.add_parser("bench", help="prove random primes, print phase table")
    b.add_argument("--digits", type=int, required=True)
    b.add_argument("--count", type=int, default=5)
    _add_prover_flags(b)  # --seed drives both prime generation and proving
    return parser


def _cmd_prove(args) -> int:
    n = parse_number(args.n)
    try:
        cert = Prover(_config(args)).prove(n)
    except CompositeDetectedError as exc:
        print(f"composite: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ResourceExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = serialize(cert)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"prime: certificate with {len(cert.steps)} steps -> {args.out}",
              file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    try:
        with open(args.infile, encoding="utf-8") as fh:
            cert = parse(fh.read())
    except (OSError, CertificateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = verify_chain(cert)
    if result:
        print(f"valid: {cert.n} is prime ({len(cert.steps)} steps)",
              file=sys.stderr)
        return 0
    print(f"invalid: {result.reason}", file=sys.stderr)
    return 2


def _cmd_classpoly(args) -> int:
    if args.d < 3:
        print("error: D must be >= 3", file=sys.stderr)
        return 1
    try:
        poly = hilbert_class_poly(args.d)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    path = args.out or f"HD_{args.d}.txt"
    if args.out:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(poly.to_text())
    else:
        cache = os.environ.get("ECPP_HD_CACHE")
        if cache:
            path = save_cache(poly, cache)
        else:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(poly.to_text())
    print(f"H_{args.d}: degree {poly.degree} -> {path}", file=sys.stderr)
    return 0


def _cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    runs = []
    for i in range(args.count):
        n = random_probable_prime(args.digits, rng)
        prover = Prover(_config(args))
        prover.prove(n)
        runs.append(prover.stats)
        print(f"# {i + 1}/{args.count}: {args.digits}-digit prime, "
              f"{prover.stats.total_seconds:.2f}s, {prover.stats.nsteps} steps",
              file=sys.stderr)
    rows = [(phase, [s.seconds[phase] for s in runs])
            for phase in ("SQRT", "CORN", "EXTRACT", "PRP", "HD", "jmod")]
    rows.append(("total", [s.total_seconds for s in runs]))
    rows.append(("nsteps", [float(s.nsteps) for s in runs]))
    rows.append(("certif", [float(s.cert_bytes) for s in runs]))
    print("phase\tmin\tmax\tavg\tstd")
    for name, values in rows:
        std = statistics.pstdev(values) if len(values) > 1 else 0.0
        print(f"{name}\t{min(values):.3f}\t{max(values):.3f}"
              f"\t{statistics.fmean(values):.3f}\t{std:.3f}")
    return 0


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "prove":
            return _cmd_prove(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "classpoly":
            return _cmd_classpoly(args)
        if args.command == "bench":
            return _cmd_bench(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
