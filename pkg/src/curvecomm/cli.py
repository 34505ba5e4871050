"""Command-line front end: ``curvecomm <command> [flags]``."""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from . import __version__
from .bounds import euclidean_ser_bounds
from .channel import DecoderKind
from .errors import CurveCommError
from .geometry import PairGeometry, antipodal_geometry, build_uniform_codebook, offset_spectrum, pair_geometry
from .montecarlo import antipodal_pair, estimate_pairwise_pep, estimate_ser
from .pairwise import (
    DEFAULT_QUAD_ORDER,
    NoiseParams,
    euclidean_pep,
    matched_pep_for_pair,
    matched_phantom_pep,
)
from .sweep import (
    KINDS,
    PRESETS,
    SweepConfig,
    SweepRow,
    fmt,
    iter_sweep,
    load_config,
    make_config,
    rows_to_csv,
    write_csv,
)

SEED_ENV = "CURVECOMM_SEED"


def _resolve_seed(flag: int | None, fallback: int | None = None) -> int:
    if flag is not None:
        return flag
    if fallback is not None:
        return fallback
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise CurveCommError(f"{SEED_ENV}={env!r} is not an integer") from None
    return 0


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise CurveCommError(f"cannot write {path}: {exc}") from exc


def _emit_rows(rows: list[SweepRow], out: str | None) -> None:
    if out:
        write_csv(rows, out)


def cmd_geometry(args: argparse.Namespace) -> int:
    ag = antipodal_geometry(args.k)
    build_uniform_codebook(args.k, args.m)  # validates M
    print(f"k={args.k} M={args.m}")
    print(f"v_k={fmt(ag.v_k)}")
    print(f"delta_k={fmt(ag.delta_k)}")
    print(f"gamma_k={fmt(ag.gamma_k)}")
    print(f"rho_k={fmt(ag.rho_k)}")
    lines = ["q,Delta_q,delta,cos_alpha"]
    for q in range(1, args.m):
        delta, cos_alpha = offset_spectrum(args.k, args.m, q)
        lines.append(",".join([str(q), fmt(2 * math.pi * q / args.m), fmt(delta), fmt(cos_alpha)]))
    table = "\n".join(lines) + "\n"
    sys.stdout.write(table)
    if args.out:
        _write_text(args.out, table)
    return 0


def cmd_pep(args: argparse.Namespace) -> int:
    n = NoiseParams(args.beta, args.sigma_c)
    decoder = DecoderKind(args.decoder)
    if args.i is not None or args.j is not None:
        if args.k is None or args.m is None:
            raise CurveCommError("a pair spec needs --k, --m, --i and --j")
        c = build_uniform_codebook(args.k, args.m)
        i = args.i if args.i is not None else 0
        j = args.j if args.j is not None else args.m // 2
        if decoder is DecoderKind.MATCHED:
            value = matched_pep_for_pair(c, i, j, n, args.quad_order)
        else:
            value = euclidean_pep(pair_geometry(c, i, j), n)
        k, m = args.k, args.m
    else:
        if args.delta is None:
            raise CurveCommError("give either --delta or a pair spec (--k --m --i --j)")
        if decoder is DecoderKind.MATCHED:
            if args.gamma is None:
                raise CurveCommError("matched mode needs --gamma")
            if not args.assume_phantom:
                raise CurveCommError(
                    "the matched formula holds only for phantom pairs; "
                    "pass --assume-phantom to evaluate raw (delta, gamma)"
                )
            value = matched_phantom_pep(args.delta, args.gamma, n, args.quad_order)
        else:
            value = euclidean_pep(PairGeometry(args.delta, args.cos_alpha, 0.0, False), n)
        k, m = args.k or 0, args.m or 0
    print(fmt(value))
    _emit_rows([SweepRow.analytic(k, m, n, f"pep-{decoder.value}", value)], args.out)
    return 0


def cmd_ser_bounds(args: argparse.Namespace) -> int:
    n = NoiseParams(args.beta, args.sigma_c)
    b = euclidean_ser_bounds(args.k, args.m, n, args.quad_order)
    print(f"lower={fmt(b.lower)}")
    print(f"upper={fmt(b.upper)}")
    print(f"upper_raw={fmt(b.upper_raw)}")
    print(f"matched_lower={fmt(b.matched_lower)}")
    print("q,pep_euclidean")
    for q, p in b.per_offset:
        print(f"{q},{fmt(p)}")
    rows = [
        SweepRow.analytic(args.k, args.m, n, "bound-lower", b.lower),
        SweepRow.analytic(args.k, args.m, n, "bound-upper", b.upper_raw),
        SweepRow.analytic(args.k, args.m, n, "bound-matched-lower", b.matched_lower),
    ]
    _emit_rows(rows, args.out)
    return 0


def _print_estimate(est) -> None:
    print(f"value={fmt(est.value)} ci_low={fmt(est.ci_low)} ci_high={fmt(est.ci_high)} trials={est.trials}")


def cmd_mc_pep(args: argparse.Namespace) -> int:
    n = NoiseParams(args.beta, args.sigma_c)
    c = build_uniform_codebook(args.k, args.m)
    i, j = args.i, args.j
    if j is None:
        i, j = antipodal_pair(c) if i is None else (i, (i + args.m // 2) % args.m)
    i = 0 if i is None else i
    trials = args.trials or 50_000
    est = estimate_pairwise_pep(
        c, i, j, DecoderKind(args.decoder), n, trials, _resolve_seed(args.seed), args.workers
    )
    _print_estimate(est)
    _emit_rows([SweepRow.estimate(args.k, args.m, n, f"mc-pep-{args.decoder}", est)], args.out)
    return 0


def cmd_mc_ser(args: argparse.Namespace) -> int:
    n = NoiseParams(args.beta, args.sigma_c)
    c = build_uniform_codebook(args.k, args.m)
    trials = args.trials or 20_000
    est = estimate_ser(c, DecoderKind(args.decoder), n, trials, _resolve_seed(args.seed), args.workers)
    _print_estimate(est)
    _emit_rows([SweepRow.estimate(args.k, args.m, n, f"ser-{args.decoder}", est)], args.out)
    return 0


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def build_sweep_config(args: argparse.Namespace) -> SweepConfig:
    """Preset, then config file, then flags; seed falls back to the environment."""
    base = PRESETS[args.preset] if args.preset else SweepConfig()
    fields = load_config(args.config) if args.config else {}
    base = SweepConfig(**{**base.__dict__, **fields})
    quantities = None
    if args.quantities is not None:
        quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip())
    seed = _resolve_seed(args.seed, fields.get("seed"))
    trials_pw = args.trials_pairwise if args.trials_pairwise is not None else args.trials
    trials_ser = args.trials_ser if args.trials_ser is not None else args.trials
    return make_config(
        base,
        k=args.k,
        M=args.m,
        betas=args.beta,
        sigmas=args.sigma_c,
        quantities=quantities,
        trials_pairwise=trials_pw,
        trials_ser=trials_ser,
        quad_order=args.quad_order,
        seed=seed,
        workers=args.workers,
        out=args.out,
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = build_sweep_config(args)
    rows = list(iter_sweep(cfg))
    if cfg.out:
        write_csv(rows, cfg.out)
    else:
        sys.stdout.write(rows_to_csv(rows))
    return 0


def _add_noise(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--beta", type=float, required=required, help="artificial-noise fraction in [0, 1)")
    p.add_argument("--sigma-c", type=float, required=required, help="ambient noise std")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvecomm", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geometry", help="antipodal geometry and offset spectrum")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("pep", help="analytic pairwise error probability")
    p.add_argument("--decoder", choices=[d.value for d in DecoderKind], default="euclidean")
    p.add_argument("--delta", type=float)
    p.add_argument("--cos-alpha", type=float, default=0.0)
    p.add_argument("--gamma", type=float)
    p.add_argument("--assume-phantom", action="store_true", help="accept raw (delta, gamma) as a phantom pair")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    _add_noise(p)
    p.add_argument("--quad-order", type=int, default=DEFAULT_QUAD_ORDER)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pep)

    p = sub.add_parser("ser-bounds", help="Euclidean SER bounds and matched lower bound")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_noise(p)
    p.add_argument("--quad-order", type=int, default=DEFAULT_QUAD_ORDER)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ser_bounds)

    for name, func, help_ in (
        ("mc-pep", cmd_mc_pep, "Monte Carlo pairwise error (antipodal pair by default)"),
        ("mc-ser", cmd_mc_ser, "Monte Carlo symbol-error rate"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        if name == "mc-pep":
            p.add_argument("--i", type=int)
            p.add_argument("--j", type=int)
        _add_noise(p)
        p.add_argument("--decoder", choices=[d.value for d in DecoderKind], default="matched")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", help="grid sweep to CSV")
    p.add_argument("preset_pos", nargs="?", choices=sorted(PRESETS), metavar="PRESET")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--beta", type=_float_list, help="comma-separated grid")
    p.add_argument("--sigma-c", type=_float_list, help="comma-separated grid")
    p.add_argument("--quantities", help=f"comma-separated subset of {','.join(KINDS)}")
    p.add_argument("--trials", type=int, help="trial count for both pairwise and SER")
    p.add_argument("--trials-pairwise", type=int)
    p.add_argument("--trials-ser", type=int)
    p.add_argument("--quad-order", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "preset_pos", None) and not args.preset:
        args.preset = args.preset_pos
    try:
        return args.func(args)
    except CurveCommError as exc:
        print(f"curvecomm: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
