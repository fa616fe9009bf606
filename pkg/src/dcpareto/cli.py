"""Command-line front end.

Subcommands: ``fit``, ``compare``, ``test``, ``plotdata``, ``simulate``.
Exit codes: 0 success, 1 usage error, 2 data error, 3 optimizer
non-convergence (results are still written). Relative ``--out`` paths are
resolved under ``$DCPARETO_OUTPUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .composite import CompositeParams, Lognormal, Weibull
from .discrete import DiscreteComposite
from .errors import DcParetoError, DegenerateDataError, DomainError, EmptyWindowError, FormatError, RowError
from .fit import CountSample, Family, FitConfig, FitFailure, compare_models, fit_model
from .inference import lrt_report
from .ingest import CountSeries, parse_generic_csv, parse_iso_date, parse_owid_csv, parse_who_csv, window
from .report import OutFormat, ReportTable, TableKind

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NONCONVERGED = 3

OUTPUT_DIR_ENV = "DCPARETO_OUTPUT_DIR"
ECDF_DENSE_LIMIT = 1000
ECDF_LOG_POINTS = 400

_DATA_ERRORS = (
    DegenerateDataError,
    FormatError,
    RowError,
    EmptyWindowError,
    OSError,
    UnicodeDecodeError,
    ValueError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _iso(text: str) -> date:
    try:
        return parse_iso_date(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None


def _add_data_args(p: argparse.ArgumentParser):
    p.add_argument("--input", required=True, help="input CSV")
    p.add_argument("--format", choices=["who", "owid", "generic"], default="generic")
    p.add_argument("--location", help="country/location (required for who and owid)")
    p.add_argument("--start", type=_iso, help="first date included (ISO)")
    p.add_argument("--end", type=_iso, help="last date included (ISO)")
    p.add_argument("--config", help="key=value optimizer config file")
    p.add_argument("--seed", type=int, help="seed for jittered restarts")
    p.add_argument("--out", required=True, help="output path")
    p.add_argument("--out-format", choices=[f.value for f in OutFormat], default="json")


def _add_sequence_args(p: argparse.ArgumentParser, default_models: str):
    p.add_argument("--models", default=default_models, help="comma-separated model list")
    p.add_argument("--cutoffs", help="comma-separated ISO cutoff dates (cumulative windows from --start)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dcpareto", description="Discrete composite Pareto-tail count models")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit one model")
    _add_data_args(p)
    p.add_argument("--model", required=True)

    p = sub.add_parser("compare", help="AIC table over models and cutoffs")
    _add_data_args(p)
    _add_sequence_args(p, ",".join(f.value for f in Family))
    p.set_defaults(out_format="csv")

    p = sub.add_parser("test", help="likelihood-ratio tests of the tail index")
    _add_data_args(p)
    p.add_argument("--model", required=True, choices=["wdlnp", "wdwp"])
    p.add_argument("--cutoffs")
    p.add_argument("--mixture", action="store_true", help="also report the chi2_0/chi2_1 mixture p-value")
    p.add_argument(
        "--alpha-trace",
        nargs="?",
        const="",
        default=None,
        help="also write (cutoff, alpha-hat) rows; optional path",
    )
    p.set_defaults(out_format="csv")

    p = sub.add_parser("plotdata", help="ECDF overlay and zero-probability data")
    _add_data_args(p)
    _add_sequence_args(p, ",".join(f.value for f in Family))
    p.set_defaults(out_format="csv")

    p = sub.add_parser("simulate", help="draw a sample from a composite model")
    p.add_argument("--model", required=True, choices=["wdlnp", "wdwp"])
    p.add_argument("--mu", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--shape", type=float)
    p.add_argument("--scale", type=float)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--start-date", type=_iso, default=date(2000, 1, 1))
    p.add_argument("--out", required=True)
    return parser


# -- helpers ------------------------------------------------------------------


def _out_path(path: str) -> Path:
    out = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not out.is_absolute():
        out = Path(base) / out
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def _load_series(args) -> CountSeries:
    text = Path(args.input).read_bytes()
    if args.format == "generic":
        return parse_generic_csv(text, args.location or "")
    parsed = parse_who_csv(text) if args.format == "who" else parse_owid_csv(text)
    if not args.location:
        raise UsageError(f"--location is required; available: {', '.join(sorted(parsed))}")
    if args.location not in parsed:
        raise UsageError(f"unknown location {args.location!r}; available: {', '.join(sorted(parsed))}")
    return parsed[args.location]


def _config(args) -> FitConfig:
    try:
        config = FitConfig.from_file(args.config) if args.config else FitConfig()
    except (OSError, DomainError) as exc:
        raise UsageError(f"bad --config: {exc}") from None
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    return config


def _windows(args, series: CountSeries) -> list[tuple[date | None, CountSample]]:
    start = args.start or series.dates[0]
    cutoffs = getattr(args, "cutoffs", None)
    if cutoffs:
        try:
            dates = [_iso(c) for c in cutoffs.split(",") if c.strip()]
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"--cutoffs: {exc}") from None
        return [(c, window(series, start, c)) for c in dates]
    end = args.end or series.dates[-1]
    return [(end, window(series, start, end))]


def _families(text: str) -> list[Family]:
    try:
        return [Family.parse(m) for m in text.split(",") if m.strip()]
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _write(path: str, text: str) -> Path:
    out = _out_path(path)
    out.write_text(text, encoding="utf-8")
    return out


def _sibling(path: str, suffix: str) -> str:
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{suffix}{p.suffix or '.csv'}"))


# -- commands -------------------------------------------------------------------


def cmd_fit(args) -> int:
    try:
        family = Family.parse(args.model)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    series = _load_series(args)
    (_, sample), = _windows(args, series)
    result = fit_model(family, sample, _config(args))
    fmt = OutFormat(args.out_format)
    if fmt is OutFormat.JSON:
        payload = {**result.as_dict(), "n": sample.n, "location": series.location}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        names = list(result.params)
        table = ReportTable(TableKind.FIT, ["model", "n", "k", *names, "loglik", "aic", "converged"])
        table.add(model=family.value, n=sample.n, k=result.spec.k, loglik=result.loglik,
                  aic=result.aic, converged=result.converged, **result.params)
        text = table.render(fmt)
    _write(args.out, text)
    return EXIT_OK if result.converged else EXIT_NONCONVERGED


def cmd_compare(args) -> int:
    families = _families(args.models)
    series = _load_series(args)
    config = _config(args)
    cols = ["cutoff", "n"] + [f"aic_{f.value}" for f in families] + ["best"]
    table = ReportTable(TableKind.AIC_TABLE, cols)
    all_converged = True
    for cutoff, sample in _windows(args, series):
        ranked = compare_models(sample, families, config)
        row = {"cutoff": cutoff, "n": sample.n}
        for r in ranked:
            if isinstance(r, FitFailure):
                row[f"aic_{r.family.value}"] = None
                continue
            row[f"aic_{r.family.value}"] = r.aic
            all_converged &= r.converged
        ok = [r for r in ranked if not isinstance(r, FitFailure)]
        row["best"] = ok[0].family.value if ok else None
        table.add(**row)
    _write(args.out, table.render(args.out_format))
    return EXIT_OK if all_converged else EXIT_NONCONVERGED


def cmd_test(args) -> int:
    family = Family.parse(args.model)
    series = _load_series(args)
    config = _config(args)
    cols = ["cutoff", "n", "alpha_hat", "lambda_c1", "p_c1", "reject_c1", "lambda_c2", "p_c2", "reject_c2"]
    if args.mixture:
        cols += ["p_mixture_c1", "p_mixture_c2"]
    table = ReportTable(TableKind.LRT_TABLE, cols)
    trace = ReportTable(TableKind.ALPHA_TRACE, ["cutoff", "alpha_hat"])
    all_converged = True
    for cutoff, sample in _windows(args, series):
        r1, r2 = lrt_report(family, sample, config, mixture=args.mixture)
        all_converged &= r1.unconstrained.converged and r1.constrained.converged and r2.constrained.converged
        table.add(
            cutoff=cutoff, n=sample.n, alpha_hat=r1.alpha_hat,
            lambda_c1=r1.lam, p_c1=r1.p_value, reject_c1=r1.reject_at_005,
            lambda_c2=r2.lam, p_c2=r2.p_value, reject_c2=r2.reject_at_005,
            p_mixture_c1=r1.p_value_mixture, p_mixture_c2=r2.p_value_mixture,
        )
        trace.add(cutoff=cutoff, alpha_hat=r1.alpha_hat)
    _write(args.out, table.render(args.out_format))
    if args.alpha_trace is not None:
        _write(args.alpha_trace or _sibling(args.out, "alpha_trace"), trace.render(args.out_format))
    return EXIT_OK if all_converged else EXIT_NONCONVERGED


def ecdf_grid(max_count: int) -> tuple[np.ndarray, bool]:
    """Every integer up to 1000, log-spaced points above; returns (grid, thinned)."""
    if max_count <= ECDF_DENSE_LIMIT:
        return np.arange(max_count + 1), False
    dense = np.arange(ECDF_DENSE_LIMIT + 1)
    sparse = np.unique(np.round(np.geomspace(ECDF_DENSE_LIMIT + 1, max_count, ECDF_LOG_POINTS)).astype(np.int64))
    grid = np.unique(np.concatenate([dense, sparse, [max_count]]))
    return grid, True


def cmd_plotdata(args) -> int:
    families = _families(args.models)
    series = _load_series(args)
    config = _config(args)
    (_, sample), = _windows(args, series)[-1:]
    fits = [r for r in compare_models(sample, families, config) if not isinstance(r, FitFailure)]
    fits.sort(key=lambda r: families.index(r.family))

    grid, thinned = ecdf_grid(int(sample.counts.max()))
    sorted_counts = np.sort(sample.counts)
    empirical = np.searchsorted(sorted_counts, grid, side="right") / sample.n
    cols = ["y", "empirical_cdf"] + [f"cdf_{r.family.value}" for r in fits]
    overlay = ReportTable(TableKind.ECDF_OVERLAY, cols)
    if thinned:
        overlay.comments.append(f"thinned: log-spaced grid above y={ECDF_DENSE_LIMIT}")
    model_cdfs = {r.family.value: np.asarray(r.distribution().cdf(grid), dtype=float) for r in fits}
    for i, y in enumerate(grid):
        row = {"y": int(y), "empirical_cdf": float(empirical[i])}
        for name, values in model_cdfs.items():
            row[f"cdf_{name}"] = float(values[i])
        overlay.add(**row)

    zero = ReportTable(TableKind.ZERO_PROB, ["model", "prob_zero"])
    zero.add(model="empirical", prob_zero=sample.zero_count / sample.n)
    for r in fits:
        zero.add(model=r.family.value, prob_zero=float(r.distribution().prob_zero()))

    ext = {"csv": ".csv", "json": ".json", "markdown": ".md"}[args.out_format]
    out_dir = _out_path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"ecdf_overlay{ext}").write_text(overlay.render(args.out_format), encoding="utf-8")
    (out_dir / f"zero_prob{ext}").write_text(zero.render(args.out_format), encoding="utf-8")
    return EXIT_OK if all(r.converged for r in fits) else EXIT_NONCONVERGED


def cmd_simulate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    try:
        if args.model == "wdlnp":
            if args.mu is None or args.sigma is None:
                raise UsageError("wdlnp needs --mu and --sigma")
            head = Lognormal(args.mu, args.sigma)
        else:
            if args.shape is None or args.scale is None:
                raise UsageError("wdwp needs --shape and --scale")
            head = Weibull(args.shape, args.scale)
        dist = DiscreteComposite(CompositeParams(head, args.alpha, args.theta))
    except DcParetoError as exc:
        raise UsageError(f"invalid parameters: {exc}") from None
    draws = dist.sample(args.seed, args.n)
    lines = ["date,count"]
    for i, c in enumerate(draws):
        lines.append(f"{(args.start_date + timedelta(days=i)).isoformat()},{int(c)}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit,
    "compare": cmd_compare,
    "test": cmd_test,
    "plotdata": cmd_plotdata,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"dcpareto: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DATA_ERRORS as exc:
        print(f"dcpareto: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DcParetoError as exc:
        print(f"dcpareto: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
