"""Command-line front end.

    signsample "x1^2 + x2^2 - 1" "x1*x2 - 1/4" --mode regular --seed 3 --list-conditions

Exit codes: 0 success, 1 bad input, 2 random choices exhausted,
3 verification disagreement.
"""

import argparse
import logging
import sys
import time

from . import document
from .errors import BadRandomness, InvalidSystem, ParseError, SignSampleError, VerificationMismatch
from .oracle import verify_sample
from .sampler import MODES, SamplerConfig, parse_sigma, run
from .signs import CLOSED, STRICT, expand_equalities, list_conditions, sign_matrix
from .slp import infer_variables, parse_system

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RANDOMNESS = 2
EXIT_MISMATCH = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="signsample", description="Sample points meeting every realizable sign condition "
                                               "of a family of rational polynomials.")
    p.add_argument("polynomials", nargs="*", help="polynomial expressions, e.g. 'x1^2 + x2^2 - 1'")
    p.add_argument("--file", "-f", help="read polynomials from a file, one per line ('#' starts a comment)")
    p.add_argument("--vars", help="comma separated variable names (default: names found, naturally sorted)")
    p.add_argument("--degrees", help="comma separated degree bounds d1,...,dm (default: total degrees)")
    p.add_argument("--mode", choices=MODES, default="regular")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=2 ** 16,
                   help="entries of the random change of variables and point are drawn from [-bound, bound]")
    p.add_argument("--sigma", help="target pattern over <, =, >, * (one character per polynomial)")
    p.add_argument("--list-conditions", action="store_true", help="print the realized sign conditions")
    p.add_argument("--verify", action="store_true", help="recheck every sign by ball arithmetic")
    p.add_argument("--out", "-o", help="write the certificate document here instead of stdout")
    p.add_argument("--verbose", "-v", action="count", default=0)
    return p


def _read_polynomials(args):
    texts = list(args.polynomials)
    if args.file:
        with open(args.file) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    texts.append(line)
    return texts


def _conditions(points, family, mode, sigma):
    kind = CLOSED if mode == "closed" else STRICT
    matrix = sign_matrix(points, family)
    conds = list_conditions(points, family, kind, matrix)
    if mode == "regular":
        # sound only under the regularity assumption of this mode
        conds = expand_equalities(conds)
    if sigma:
        conds = [c for c in conds if c.matches(sigma)]
    return conds


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    seed = args.seed

    def fail(code, message):
        print(f"signsample: error (seed {seed}): {message}", file=sys.stderr)
        return code

    try:
        texts = _read_polynomials(args)
    except OSError as exc:
        return fail(EXIT_INPUT, exc)
    if not texts:
        return fail(EXIT_INPUT, "no polynomials given")
    try:
        names = [v.strip() for v in args.vars.split(",")] if args.vars else infer_variables(texts)
        if not names:
            raise ParseError("no variables found")
        family = parse_system(texts, names)
        degrees = [int(d) for d in args.degrees.split(",")] if args.degrees else None
        sigma = parse_sigma(args.sigma, len(texts))
    except ParseError as exc:
        return fail(EXIT_INPUT, f"parse error: {exc}")
    except ValueError as exc:
        return fail(EXIT_INPUT, exc)

    cfg = SamplerConfig(mode=args.mode, seed=seed, coeff_bound=args.bound, sigma=sigma)
    start = time.perf_counter()
    try:
        points = run(family, degrees, cfg)
    except BadRandomness as exc:
        return fail(EXIT_RANDOMNESS, exc)
    except (InvalidSystem, ValueError) as exc:
        return fail(EXIT_INPUT, exc)
    except SignSampleError as exc:
        return fail(EXIT_RANDOMNESS, f"{type(exc).__name__}: {exc}")
    logging.getLogger(__name__).info("sampling took %.2f s", time.perf_counter() - start)

    conds = _conditions(points, family, args.mode, sigma)
    verification = None
    if args.verify:
        try:
            checked = verify_sample(points, family)
        except VerificationMismatch as exc:
            return fail(EXIT_MISMATCH, f"verification failed: {exc}")
        verification = {"method": "ball arithmetic", "resolutions": len(checked),
                        "points": sum(len(v[0]) for v in checked.values()), "agree": True}

    inputs = {"variables": names, "polynomials": texts}
    if degrees is not None:
        inputs["degrees"] = degrees
    if sigma:
        inputs["sigma"] = sigma
    text = document.dumps(points, conds, inputs, verification)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    elif not args.list_conditions:
        sys.stdout.write(text)
    if args.list_conditions:
        for c in conds:
            tag = "derived" if c.derived else f"witnessed by {len(c.witnesses)} point(s)"
            print(f"{c.render()}\t{tag}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
