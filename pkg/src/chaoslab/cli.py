"""Command-line surface for chaoslab.

Subcommands generate index sets, compute norms and moments, and run the
verification certificates, writing diffable CSV reports.  Exit codes:
0 success / all checks passed, 1 a certificate failed, 2 usage error,
3 resource limit or I/O failure.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .chaos import (
    blei_bound_check,
    clt_criteria,
    khintchine_check,
    moment_table,
    rud_average,
    sign_concentration_check,
)
from .combdim import (
    BlockChoice,
    density_certificates,
    dump_index_set,
    estimate_dimension,
    gen_sum_set,
    gen_triangle,
    load_index_set,
    max_density,
)
from .errors import ChaosLabError, InvalidArgumentError, ResourceLimitError
from .report import RunManifest, write_report
from .symspace import ConcaveWeight, OrliczFunction, SpaceSpec
from .walsh import chaos_sum, distribution_exact

EXIT_OK = 0
EXIT_CERT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _fmt(x):
    return f"{float(x):.12g}"


def parse_space(text):
    """Parse a space descriptor such as lp:4, linf, orlicz-power:3,
    orlicz-exp:2, lorentz-log:1, marcinkiewicz-log:0.5, explr:2:extrapolation."""
    parts = text.strip().lower().split(":")
    head, args = parts[0], parts[1:]
    try:
        if head == "lp":
            return SpaceSpec.lp(float(args[0]))
        if head == "linf":
            return SpaceSpec.linf()
        if head == "orlicz-power":
            return SpaceSpec.orlicz(OrliczFunction.power(float(args[0])))
        if head == "orlicz-exp":
            u0 = float(args[1]) if len(args) > 1 else None
            return SpaceSpec.orlicz(OrliczFunction.exponential(float(args[0]), u0))
        if head == "lorentz-log":
            return SpaceSpec.lorentz(ConcaveWeight.log_power(float(args[0])))
        if head == "marcinkiewicz-log":
            return SpaceSpec.marcinkiewicz(ConcaveWeight.log_power(float(args[0])))
        if head == "explr":
            method = args[1] if len(args) > 1 else "orlicz-bisection"
            if method == "bisection":
                method = "orlicz-bisection"
            return SpaceSpec.exp_lr(float(args[0]), method)
    except (IndexError, ValueError) as exc:
        raise InvalidArgumentError(f"bad space descriptor {text!r}: {exc}") from exc
    raise InvalidArgumentError(f"unknown space descriptor {text!r}")


def _csv_ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _csv_floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _build_parser():
    top = argparse.ArgumentParser(
        prog="chaoslab",
        description="Exact Rademacher-chaos distributions, symmetric-space norms, "
        "and inequality certificates.",
    )
    top.add_argument("--version", action="version", version=f"chaoslab {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--max-enum-bits", type=int, default=24, help="exact enumeration cap")
        p.add_argument("--tol", type=float, default=1e-10, help="root-finding tolerance")
        p.add_argument("--out", help="output file (report CSV unless noted)")
        p.add_argument("--manifest", help="write a JSON run manifest here")
        if seed:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--mc-samples", type=int, default=None)

    p = sub.add_parser("gen-set", help="generate an index set file")
    p.add_argument("--kind", choices=("sum", "triangle"), required=True)
    p.add_argument("--max", type=int, required=True, help="largest allowed entry")
    p.add_argument("--order", type=int, default=3, help="order d for triangle sets")
    common(p, seed=False)

    p = sub.add_parser("density", help="max block density or density certificates")
    p.add_argument("--set", dest="set_path", required=True)
    p.add_argument("--n", type=int, help="block size (single max-density run)")
    p.add_argument("--universe", type=int, required=True)
    p.add_argument("--strategy", default="exhaustive",
                   choices=("exhaustive", "greedy-swap", "identity-blocks"))
    p.add_argument("--alpha", type=float, help="super exponent (certificate mode)")
    p.add_argument("--beta", type=float, help="sub exponent (certificate mode)")
    p.add_argument("--n-list", type=_csv_ints, help="block sizes (certificate mode)")
    common(p, seed=False)

    p = sub.add_parser("dimension", help="least-squares combinatorial dimension")
    p.add_argument("--set", dest="set_path", required=True)
    p.add_argument("--n-list", type=_csv_ints, required=True)
    p.add_argument("--universe", type=int, default=None)
    p.add_argument("--strategy", default="identity-blocks",
                   choices=("exhaustive", "greedy-swap", "identity-blocks"))
    common(p, seed=False)

    p = sub.add_parser("norm", help="norm of the chaos sum over a set")
    p.add_argument("--set", dest="set_path", required=True)
    p.add_argument("--coeffs", type=_csv_floats, help="per-element coefficients "
                   "(canonical element order; default all 1)")
    p.add_argument("--space", required=True)
    common(p, seed=False)

    p = sub.add_parser("khintchine", help="two-sided Khintchine bound check")
    p.add_argument("--coeffs", type=_csv_floats, required=True)
    p.add_argument("--p", type=float, required=True)
    common(p, seed=False)

    p = sub.add_parser("moments", help="exact moment table with growth exponent")
    p.add_argument("--set", dest="set_path", required=True)
    p.add_argument("--coeffs", type=_csv_floats)
    p.add_argument("--p-list", type=_csv_floats, default=[1, 2, 4, 8, 16])
    p.add_argument("--beta", type=float, help="also record Blei ratios at this exponent")
    common(p, seed=False)

    p = sub.add_parser("rud", help="sign-averaged norm vs deterministic norm")
    p.add_argument("--set", dest="set_path", required=True)
    p.add_argument("--coeffs", type=_csv_floats)
    p.add_argument("--space", required=True)
    common(p)

    p = sub.add_parser("concentration", help="randomized sup-norm concentration")
    p.add_argument("--set", dest="set_path")
    p.add_argument("--order", type=int, help="generate a full triangle of this order instead")
    p.add_argument("--n", type=int, required=True, help="block size (identity blocks)")
    common(p, seed=False)

    p = sub.add_parser("clt", help="sum-set normality criteria table")
    p.add_argument("--set", dest="set_path", required=True)
    p.add_argument("--n-list", dest="N_list", type=_csv_ints, required=True)
    p.add_argument("--star-threshold", type=float, default=0.15)
    p.add_argument("--sharp-threshold", type=float, default=1e-12)
    common(p, seed=False)

    p = sub.add_parser("coincidence", help="Orlicz/Marcinkiewicz coincidence check")
    p.add_argument("--orlicz", required=True, help="power:P or exp:R[:U0]")
    p.add_argument("--weight", required=True, help="log:GAMMA")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--grid", type=int, default=64)
    common(p, seed=False)

    return top


def _parse_orlicz(text):
    parts = text.strip().lower().split(":")
    if parts[0] == "power":
        return OrliczFunction.power(float(parts[1]))
    if parts[0] == "exp":
        u0 = float(parts[2]) if len(parts) > 2 else None
        return OrliczFunction.exponential(float(parts[1]), u0)
    raise InvalidArgumentError(f"unknown Orlicz descriptor {text!r}")


def _parse_weight(text):
    parts = text.strip().lower().split(":")
    if parts[0] == "log":
        return ConcaveWeight.log_power(float(parts[1]))
    raise InvalidArgumentError(f"unknown weight descriptor {text!r}")


def _coeff_map(index_set, coeffs):
    elements = list(index_set.tuples())
    if coeffs is None:
        return {t: 1.0 for t in elements}
    if len(coeffs) != len(elements):
        raise InvalidArgumentError(
            f"{len(coeffs)} coefficients for {len(elements)} elements"
        )
    return dict(zip(elements, coeffs))


def _emit(report, args, outputs):
    """Print a summary, write the report CSV if requested."""
    for c in report.checks:
        if c.comparison == "info":
            print(f"  {c.quantity} = {_fmt(c.value)}")
        else:
            state = "ok" if c.passed else "FAIL"
            print(f"  {c.quantity} = {_fmt(c.value)} {c.comparison} {_fmt(c.bound)} [{state}]")
    print(f"verdict: {'pass' if report.verdict else 'fail'}")
    if args.out:
        write_report(report, args.out, "csv")
        outputs.append(args.out)
    return EXIT_OK if report.verdict else EXIT_CERT_FAIL


def run(argv=None) -> int:
    """Execute one subcommand; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)

    t0 = time.perf_counter()
    outputs = []
    try:
        code = _dispatch(args, outputs)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChaosLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE

    if getattr(args, "manifest", None):
        manifest = RunManifest(
            command_line="chaoslab " + " ".join(argv if argv is not None else sys.argv[1:]),
            parameters={
                k: v
                for k, v in vars(args).items()
                if k not in ("command", "manifest") and v is not None
            },
            seed=getattr(args, "seed", None),
            tolerances={"tol": args.tol, "max_enum_bits": args.max_enum_bits},
            version=__version__,
            wall_time_s=time.perf_counter() - t0,
            outputs=outputs,
        )
        try:
            write_report(None, args.manifest, "manifest", manifest=manifest)
        except OSError as exc:
            print(f"i/o error: {exc}", file=sys.stderr)
            return EXIT_RESOURCE
    return code


def _dispatch(args, outputs) -> int:
    cmd = args.command

    if cmd == "gen-set":
        if args.kind == "sum":
            A = gen_sum_set(args.max)
        else:
            A = gen_triangle(args.order, args.max)
        if not args.out:
            raise InvalidArgumentError("gen-set requires --out")
        dump_index_set(A, args.out)
        outputs.append(args.out)
        print(f"wrote {len(A)} elements of order {A.order} to {args.out}")
        return EXIT_OK

    if cmd == "density":
        A = load_index_set(args.set_path)
        if args.alpha is not None or args.beta is not None:
            if args.alpha is None or args.beta is None or not args.n_list:
                raise InvalidArgumentError(
                    "certificate mode needs --alpha, --beta and --n-list"
                )
            report = density_certificates(
                A, args.alpha, args.beta, args.n_list, args.universe, args.strategy
            )
            return _emit(report, args, outputs)
        if args.n is None:
            raise InvalidArgumentError("need --n (or --alpha/--beta/--n-list)")
        count, witness = max_density(A, args.n, args.universe, args.strategy)
        print(f"best count: {count}")
        for i, b in enumerate(witness.blocks, 1):
            print(f"  B{i} = {{{', '.join(map(str, b))}}}")
        return EXIT_OK

    if cmd == "dimension":
        A = load_index_set(args.set_path)
        universe = args.universe if args.universe is not None else A.max_index
        profile = estimate_dimension(A, args.n_list, universe, args.strategy)
        print(f"alpha_hat = {_fmt(profile.alpha_hat)}  (R^2 = {_fmt(profile.r_squared)})")
        for row in profile.rows:
            print(f"  n={row.n}: best_count={row.best_count} [{row.strategy}]")
        if args.out:
            lines = ["n,best_count"]
            lines += [f"{row.n},{row.best_count}" for row in profile.rows]
            lines += [f"# alpha_hat,{_fmt(profile.alpha_hat)}"]
            with open(args.out, "w", encoding="ascii") as fh:
                fh.write("\n".join(lines) + "\n")
            outputs.append(args.out)
        return EXIT_OK

    if cmd == "norm":
        A = load_index_set(args.set_path)
        space = parse_space(args.space)
        coeffs = _coeff_map(A, args.coeffs)
        dist = distribution_exact(chaos_sum(coeffs), args.max_enum_bits)
        from .symspace import norm as space_norm

        value = space_norm(dist, space, args.tol)
        print(f"norm[{space.describe()}] = {value:.6f}")
        return EXIT_OK

    if cmd == "khintchine":
        report = khintchine_check(args.coeffs, args.p)
        value = report.quantity("moment")
        low = report.checks[1].bound
        high = report.checks[2].bound
        print(f"||sum a_j r_j||_{args.p:g} = {value:.6f}  (bounds [{low:.6f}, {high:.6f}])")
        code = _emit(report, args, outputs)
        return code

    if cmd == "moments":
        A = load_index_set(args.set_path)
        coeffs = _coeff_map(A, args.coeffs)
        table = moment_table(chaos_sum(coeffs), args.p_list, args.max_enum_bits)
        for p, v in table.rows:
            print(f"  p={p:g}: {_fmt(v)}")
        print(f"growth exponent theta = {_fmt(table.theta)}")
        if args.beta is not None:
            report = blei_bound_check(A, coeffs, args.beta, args.p_list, args.max_enum_bits)
            return _emit(report, args, outputs)
        if args.out:
            lines = ["p,norm"] + [f"{_fmt(p)},{_fmt(v)}" for p, v in table.rows]
            lines += [f"# theta,{_fmt(table.theta)}"]
            with open(args.out, "w", encoding="ascii") as fh:
                fh.write("\n".join(lines) + "\n")
            outputs.append(args.out)
        return EXIT_OK

    if cmd == "rud":
        A = load_index_set(args.set_path)
        space = parse_space(args.space)
        coeffs = _coeff_map(A, args.coeffs)
        result = rud_average(
            A,
            coeffs,
            space,
            samples=args.mc_samples,
            seed=args.seed,
            bits_cap=args.max_enum_bits,
            tol=args.tol,
        )
        print(f"averaged norm      = {_fmt(result.average)}")
        print(f"deterministic norm = {_fmt(result.deterministic_norm)}")
        print(f"ratio              = {_fmt(result.ratio)}")
        if result.stderr is not None:
            print(f"standard error     = {_fmt(result.stderr)}")
        return EXIT_OK

    if cmd == "concentration":
        if args.set_path:
            A = load_index_set(args.set_path)
        elif args.order:
            A = gen_triangle(args.order, args.n)
        else:
            raise InvalidArgumentError("need --set or --order")
        blocks = BlockChoice.identity(A.order, args.n)
        report = sign_concentration_check(A, blocks)
        return _emit(report, args, outputs)

    if cmd == "clt":
        A = load_index_set(args.set_path)
        report = clt_criteria(A, args.N_list, args.star_threshold, args.sharp_threshold)
        lines = ["N,cardinality,star_ratio,sharp_ratio"]
        for N in args.N_list:
            card = report.quantity(f"card_N{N}")
            lines.append(
                f"{N},{int(card)},{_fmt(report.quantity(f'star_ratio_N{N}'))},"
                f"{_fmt(report.quantity(f'sharp_ratio_N{N}'))}"
            )
        if args.out:
            with open(args.out, "w", encoding="ascii") as fh:
                fh.write("\n".join(lines) + "\n")
            outputs.append(args.out)
        else:
            print("\n".join(lines))
        print(f"verdict: {'pass' if report.verdict else 'fail'}")
        return EXIT_OK if report.verdict else EXIT_CERT_FAIL

    if cmd == "coincidence":
        from .symspace import coincidence_check

        report = coincidence_check(
            _parse_orlicz(args.orlicz),
            _parse_weight(args.weight),
            args.eps,
            grid=args.grid,
            tol=args.tol,
        )
        return _emit(report, args, outputs)

    raise InvalidArgumentError(f"unknown command {cmd!r}")  # pragma: no cover


def main():  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
