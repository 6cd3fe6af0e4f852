"""Command-line interface.

Exit codes:
  0  success
  2  unreadable input or bad arguments
  3  a fit did not converge (MLE, AMLE root, information matrix or bootstrap)
  4  degenerate data (no failures, coincident observations)
  5  improper posterior
  6  a simulation cell was aborted
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .bayes import PRIOR_1, PriorSpec, credible_interval, gibbs_chain, hpd_interval, posterior_summary, split_half_means
from .censoring import HybridSample, HybridScheme, PairedData, apply_scheme, recensor
from .errors import (
    BootstrapFailure,
    CellAborted,
    DegenerateData,
    DomainError,
    ImproperPosterior,
    InsufficientDraws,
    NegativeDiscriminant,
    NonConvergence,
    NonpositiveSigma,
    SingularInformation,
    SizeMismatch,
    ZeroFailures,
)
from .rng import fresh_seed

EXIT_PARSE = 2
EXIT_NONCONVERGENCE = 3
EXIT_DEGENERATE = 4
EXIT_IMPROPER = 5
EXIT_CELL_ABORT = 6

EXIT_TABLE = """exit codes:
  2  parse error (message names the file and line)
  3  fit non-convergence
  4  degenerate data
  5  improper posterior
  6  simulation cell aborted"""


class InputError(Exception):
    pass


def parse_scheme(text: str) -> tuple[int, float]:
    try:
        r, t = text.split(",")
        return int(r), float(t)  # float("inf") accepted
    except ValueError:
        raise argparse.ArgumentTypeError(f"scheme must look like 'r,T', got {text!r}")


def read_lifetimes(path: str) -> tuple[list[float], tuple[int, int, float] | None]:
    """Read one value per line; ``#`` starts a comment.

    A first data line of the form ``n=69, r=45, T=2.5`` marks a pre-censored
    file whose remaining lines are the observed failure times.
    """
    values: list[float] = []
    header = None
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" in text:
                if header is not None or values:
                    raise InputError(f"{path}:{lineno}: header must precede the data")
                try:
                    fields = dict(kv.split("=") for kv in text.replace(" ", "").split(","))
                    header = (int(fields["n"]), int(fields["r"]), float(fields["T"]))
                except (KeyError, ValueError):
                    raise InputError(f"{path}:{lineno}: bad header {text!r}; expected n=.., r=.., T=..")
                continue
            try:
                v = float(text.rstrip(","))
            except ValueError:
                raise InputError(f"{path}:{lineno}: not a number: {text!r}")
            if not math.isfinite(v):
                raise InputError(f"{path}:{lineno}: non-finite value")
            values.append(v)
    if not values:
        raise InputError(f"{path}: no data")
    return values, header


def load_sample(path: str, scheme_arg, shift: float) -> HybridSample:
    values, header = read_lifetimes(path)
    values = [v + shift for v in values]
    if any(v <= 0 for v in values):
        raise InputError(f"{path}: lifetimes must be positive after shifting by {shift}")
    if header is not None:
        n, r, T = header
        scheme = HybridScheme(n, r, T)
        if len(values) > r or max(values) > T:
            raise InputError(f"{path}: observed times inconsistent with header n={n}, r={r}, T={T}")
        sample = recensor(values, scheme)
        if sample.d != len(values):
            raise InputError(f"{path}: observed times inconsistent with header n={n}, r={r}, T={T}")
        return sample
    if scheme_arg is None:
        raise InputError(f"{path}: raw lifetimes need a --scheme option")
    r, T = scheme_arg
    return apply_scheme(values, HybridScheme(len(values), r, T))


def manifest(command: str, args, **extra) -> dict:
    return {
        "command": command,
        "argv": sys.argv[1:],
        "inputs": [p for p in (getattr(args, "x", None), getattr(args, "y", None), getattr(args, "config", None)) if p],
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        **extra,
    }


def _resolve_seed(args) -> int:
    if args.seed is None:
        args.seed = fresh_seed()
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _write_json(path: str, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _load_pair(args) -> PairedData:
    return PairedData(
        load_sample(args.x, args.scheme1, args.shift),
        load_sample(args.y, args.scheme2, args.shift),
    )


def _scheme_record(data: PairedData) -> dict:
    return {
        k: {"n": s.n, "r": s.scheme.r, "T": s.scheme.T, "d": s.d, "u": s.u, "case": s.case.value}
        for k, s in (("x", data.x), ("y", data.y))
    }


def cmd_fit(args) -> int:
    from .report import estimate_all

    data = _load_pair(args)
    seed = _resolve_seed(args) if (args.nboot or args.bayes) else args.seed
    rep = estimate_all(data, gamma=args.gamma, nboot=args.nboot, seed=seed, bayes=args.bayes,
                       draws=args.m, burn_in=args.burnin, recensor_on=args.boot_recensor == "on")
    man = manifest("fit", args, schemes=_scheme_record(data), seed=seed)
    print(rep.render())
    if args.json:
        _write_json(args.json, {**rep.to_dict(), "manifest": man})
    return 0


def _prior_from(args) -> PriorSpec:
    base = {1: PRIOR_1, 2: PriorSpec(1, 2, 1, 2, 1, 2)}[args.prior]
    vals = {k: getattr(args, k) if getattr(args, k) is not None else getattr(base, k)
            for k in ("a1", "b1", "a2", "b2", "a3", "b3")}
    return PriorSpec(**vals)


def cmd_bayes(args) -> int:
    data = _load_pair(args)
    seed = _resolve_seed(args)
    prior = _prior_from(args)
    draws = gibbs_chain(data, prior, args.m, args.burnin, seed=seed, proposal_sd=args.proposal_sd,
                        theta_given_current=args.theta_given == "current")
    mean, var = posterior_summary(draws)
    try:
        ci = hpd_interval(draws, args.gamma) if args.hpd else credible_interval(draws, args.gamma)
    except InsufficientDraws as exc:
        print(f"warning: {exc}; no interval reported", file=sys.stderr)
        ci = None
    h1, h2 = split_half_means(draws)
    summary = {
        "posterior_mean": mean,
        "posterior_variance": var,
        "interval": None if ci is None else {"lower": ci.lower, "upper": ci.upper, "level": ci.level,
                                             "kind": "shortest" if args.hpd else "percentile"},
        "acceptance_rate": draws.acceptance_rate,
        "split_half_means": [h1, h2],
        "prior": vars(prior),
    }
    print(f"Bayes estimate of R   {mean:.4f}  (posterior variance {var:.6f})")
    if ci is not None:
        print(f"{100 * ci.level:.0f}% credible interval ({ci.lower:.4f}, {ci.upper:.4f})")
    print(f"acceptance rate       {draws.acceptance_rate:.3f}")
    man = manifest("bayes", args, schemes=_scheme_record(data), seed=seed, prior=vars(prior),
                   m=args.m, burn_in=args.burnin)
    if args.draws_out:
        draws.to_csv(args.draws_out)
        _write_json(args.draws_out + ".manifest.json", man)
    if args.json:
        _write_json(args.json, {**summary, "manifest": man})
    return 0


def cmd_table(args) -> int:
    import dataclasses

    from .harness import load_config, run_table

    try:
        config = load_config(args.config)
    except (OSError, KeyError, ValueError) as exc:
        raise InputError(f"{args.config}: {exc}") from exc
    changes = {}
    if args.full:
        changes["replications"] = 1000
    if args.replications is not None:
        changes["replications"] = args.replications
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if changes:
        config = dataclasses.replace(config, **changes)
    cells = range(min(args.cells, len(config.scheme_grid))) if args.cells else None
    result = run_table(config, cells=cells, workers=args.workers)
    os.makedirs(args.out_dir, exist_ok=True)
    man = manifest("table", args, master_seed=config.master_seed, replications=config.replications,
                   nboot=config.nboot)
    with open(os.path.join(args.out_dir, "results.csv"), "w", encoding="utf-8") as fh:
        fh.write(result.to_csv())
    text = result.render()
    with open(os.path.join(args.out_dir, "table.txt"), "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    summary = json.loads(result.to_json())
    summary["manifest"] = man
    _write_json(os.path.join(args.out_dir, "summary.json"), summary)
    _write_json(os.path.join(args.out_dir, "manifest.json"), man)
    print(text)
    return 0


def cmd_casestudy(args) -> int:
    from .harness import casestudy

    seed = _resolve_seed(args)
    rep = casestudy(args.scheme, seed=seed, nboot=args.nboot, draws=args.m, burn_in=args.burnin)
    print(f"Fibre strength data, scheme {args.scheme}")
    print(rep.render())
    if args.json:
        _write_json(args.json, {**rep.to_dict(), "manifest": manifest("casestudy", args, seed=seed)})
    return 0


def _add_pair_args(p):
    p.add_argument("--x", required=True, help="strength lifetimes (X), one per line")
    p.add_argument("--y", required=True, help="stress lifetimes (Y), one per line")
    p.add_argument("--scheme1", type=parse_scheme, help="X design as r,T (T may be inf)")
    p.add_argument("--scheme2", type=parse_scheme, help="Y design as r,T (T may be inf)")
    p.add_argument("--shift", type=float, default=0.0, help="added to every lifetime before fitting")
    p.add_argument("--gamma", type=float, default=0.05, help="1 - confidence level")
    p.add_argument("--seed", type=int)
    p.add_argument("--json", help="write a JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridssr",
        description="Estimate R = P(X > Y) for hybrid-censored Weibull samples.",
        epilog=EXIT_TABLE,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="MLE, AMLE and confidence intervals", epilog=EXIT_TABLE,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_pair_args(p)
    p.add_argument("--nboot", type=int, default=250, help="bootstrap resamples (0 disables)")
    p.add_argument("--boot-recensor", choices=("on", "off"), default="on")
    p.add_argument("--bayes", action="store_true", help="also run the Gibbs sampler (Prior 1)")
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--burnin", type=int, default=1_000)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("bayes", help="Gibbs sampler for R", epilog=EXIT_TABLE,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_pair_args(p)
    p.add_argument("--prior", type=int, choices=(1, 2), default=1,
                   help="1: all hyperparameters 0; 2: a_j=1, b_j=2")
    for k in ("a1", "b1", "a2", "b2", "a3", "b3"):
        p.add_argument(f"--{k}", type=float)
    p.add_argument("--m", type=int, default=10_000, help="kept draws")
    p.add_argument("--burnin", type=int, default=1_000)
    p.add_argument("--proposal-sd", type=float, default=1.0)
    p.add_argument("--theta-given", choices=("previous", "current"), default="previous",
                   help="shape value the scale draws condition on")
    p.add_argument("--hpd", action="store_true", help="report the shortest interval instead")
    p.add_argument("--draws-out", help="CSV of draws (sweep, alpha, theta1, theta2, r)")
    p.set_defaults(func=cmd_bayes)

    p = sub.add_parser("table", help="run a simulation grid from a config file", epilog=EXIT_TABLE,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("config")
    p.add_argument("--cells", type=int, help="only the first N grid cells")
    p.add_argument("--replications", type=int)
    p.add_argument("--full", action="store_true", help="1000 replications")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", default="table-output")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("casestudy", help="embedded fibre-strength example", epilog=EXIT_TABLE,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--scheme", type=int, choices=(1, 2), default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--nboot", type=int, default=250)
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--burnin", type=int, default=1_000)
    p.add_argument("--json")
    p.set_defaults(func=cmd_casestudy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SizeMismatch, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DegenerateData, ZeroFailures) as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (NonConvergence, NegativeDiscriminant, NonpositiveSigma, SingularInformation, BootstrapFailure) as exc:
        print(f"error: fit failed: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except ImproperPosterior as exc:
        print(f"error: improper posterior: {exc}", file=sys.stderr)
        return EXIT_IMPROPER
    except CellAborted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CELL_ABORT


if __name__ == "__main__":
    sys.exit(main())
