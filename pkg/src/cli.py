"""
Command line parsing and the subcommands.

    discourse-dynamics [--config PATH] [--output DIR] [--seed N] [--quiet] <command> ...

Commands: ingest, analyze, report, afa, granger, synth {fgn,var,corpus}, validate.
Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numerical error or failed validation.
"""

import sys
import logging
import argparse
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional

from analysis.afa import estimate_hurst
from analysis.granger import bidirectional
from classify.taxonomy import CausalClass, causal_class, persistence_class
from common.app_setup import initialize_run_environment
from common.errors import AnalysisError, ConfigError, ExitStatus, NumericalError
from common.json_codec import write_json
from config.constants import (
    AFA_RESULT_FILE,
    AFA_SCALING_FILE,
    APP_NAME,
    GRANGER_RESULT_FILE,
    RNG_ALGORITHM,
    SERIES_DIR,
)
from config.run_config import RunConfig, load_run_config
from ingest.documents import parse_date
from ingest.series_io import read_value_column, write_columns_csv
from pipeline.analyze import run_analysis
from pipeline.ingest import run_ingest
from pipeline.report import run_report
from pipeline.validate import Battery, ValidateOptions, run_validation
from synth.corpus import write_synthetic_corpus
from synth.fgn import FgnSpec, gen_fgn
from synth.var import VarSpec, gen_var

logger = logging.getLogger(__name__)

FGN_FILE = "fgn.csv"
VAR_FILE = "var.csv"
SYNTH_CORPUS_FILE = "corpus.jsonl"
VALIDATION_FILE = "validation.json"

# argparse destination -> configuration setting
OVERRIDES = {
    'corpus': 'corpus.path',
    'keywords': 'corpus.keywords',
    'start_date': 'corpus.start_date',
    'end_date': 'corpus.end_date',
    'bin_width': 'series.bin_width_days',
    'window_bins': 'series.smoothing_window_bins',
    'window_years': 'series.smoothing_window_years',
    'aggregation': 'series.aggregation',
    'alpha': 'analysis.alpha',
    'analysis_bin_width': 'analysis.bin_width_days',
    'poly_order': 'afa.poly_order',
    'window_sizes': 'afa.window_sizes',
    'fit_range': 'afa.fit_range',
    'max_lag': 'granger.max_lag',
    'lag_selection': 'granger.lag_selection',
    'fixed_lag': 'granger.fixed_lag',
    'seed': 'run.seed',
    'output': 'run.output_dir',
    'workers': 'run.workers',
    'formats': 'run.report_formats',
}


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the configuration status"""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(int(ExitStatus.USAGE), f"{self.prog}: error: {message}\n")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", type=Path, default=default, help="YAML configuration file")
    parser.add_argument("--output", type=Path, default=default, help="Output directory")
    parser.add_argument("--seed", type=int, default=default, help="Seed for all randomness")
    parser.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="Only show warnings and errors")


def _corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", type=Path, help="Corpus file (.jsonl or .jsonl.lz4)")
    parser.add_argument("--keywords", type=Path, help="Keyword list CSV (canonical,surface_forms)")
    parser.add_argument("--start-date", help="First day of the corpus range (YYYY-MM-DD)")
    parser.add_argument("--end-date", help="Last day of the corpus range (YYYY-MM-DD)")
    parser.add_argument("--bin-width", type=int, help="Bin width in days (default 730)")
    parser.add_argument("--aggregation", choices=["per_doc_mean", "pooled"], help="Bin aggregation")


def _afa_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--poly-order", type=int, help="Order of the local polynomial fits (default 1)")
    parser.add_argument("--window-sizes", help="Comma separated odd window sizes")
    parser.add_argument("--fit-range", help="START,STOP window indices used in the slope fit")


def _granger_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-lag", type=int, help="Largest lag searched by BIC (default 8)")
    parser.add_argument("--fixed-lag", type=int, help="Use this lag instead of the BIC search")
    parser.add_argument("--lag-selection", choices=["bic", "fixed"], help="Lag order policy")
    parser.add_argument("--alpha", type=float, help="Significance level (default 0.005)")


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments"""
    common = ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    parser = ArgumentParser(prog=APP_NAME, description="Keyword discourse dynamics: persistence and causality")
    _global_flags(parser, suppress=False)
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    ingest = commands.add_parser("ingest", parents=[common], help="Build keyword frequency series")
    _corpus_flags(ingest)

    analyze = commands.add_parser("analyze", parents=[common], help="Classify every keyword and write reports")
    _corpus_flags(analyze)
    _afa_flags(analyze)
    _granger_flags(analyze)
    analyze.add_argument("--analysis-bin-width", type=int, help="Bin width in days of the analysed series")
    analyze.add_argument("--workers", type=int, help="Worker threads (default 4)")
    analyze.add_argument("--format", dest="formats", action="append", choices=["csv", "json"],
                         help="Report format, repeatable (default both)")

    report = commands.add_parser("report", parents=[common], help="Write plot tables per keyword")
    _corpus_flags(report)
    report.add_argument("--window-years", type=float, help="Smoothing window in years (default 5)")
    report.add_argument("--window-bins", type=int, help="Smoothing window in bins")

    afa = commands.add_parser("afa", parents=[common], help="Hurst exponent of a single series")
    afa.add_argument("series", type=Path, help="CSV with one numeric column (or a 'value' column)")
    _afa_flags(afa)

    granger = commands.add_parser("granger", parents=[common], help="Bidirectional Granger test of two series")
    granger.add_argument("x", type=Path, help="CSV series x (advertisements)")
    granger.add_argument("y", type=Path, help="CSV series y (articles)")
    _granger_flags(granger)

    synth = commands.add_parser("synth", parents=[common], help="Generate synthetic signals")
    kinds = synth.add_subparsers(dest="kind", required=True, metavar="KIND")
    fgn = kinds.add_parser("fgn", parents=[common], help="Fractional Gaussian noise")
    fgn.add_argument("--n", type=int, default=8192, help="Length, a power of two")
    fgn.add_argument("--hurst", type=float, default=0.7, help="Hurst exponent in (0, 1)")
    for name in ("var", "corpus"):
        kind = kinds.add_parser(name, parents=[common],
                                help="Coupled VAR pair" if name == "var" else "Corpus following a coupled VAR pair")
        kind.add_argument("--n", type=int, default=500, help="Length in samples (days for a corpus)")
        kind.add_argument("--axy", type=float, default=0.5, help="Coupling x -> y")
        kind.add_argument("--ayx", type=float, default=0.0, help="Coupling y -> x")
        kind.add_argument("--axx", type=float, default=0.2, help="Own lag coefficient of x")
        kind.add_argument("--ayy", type=float, default=0.2, help="Own lag coefficient of y")
        kind.add_argument("--noise-sd", type=float, default=1.0, help="Innovation standard deviation")
        kind.add_argument("--common-sd", type=float, default=0.0, help="Shared innovation standard deviation")
        kind.add_argument("--coupling-lag", type=int, default=1, help="Lag at which the coupling acts")
        kind.add_argument("--integrated", action="store_true", help="Running sums of the pair (unit-root levels)")
    corpus = kinds.choices["corpus"]
    corpus.add_argument("--keyword", default="radio", help="Keyword whose frequency follows the pair")
    corpus.add_argument("--start", default="1950-01-01", help="Date of the first day")
    corpus.add_argument("--tokens-per-doc", type=int, default=200, help="Tokens per document")
    corpus.add_argument("--base", type=float, default=0.1, help="Keyword frequency at series value 0")
    corpus.add_argument("--scale", type=float, default=0.02, help="Frequency change per unit of series value")

    validate = commands.add_parser("validate", parents=[common], help="Run the synthetic validation batteries")
    validate.add_argument("--battery", action="append", choices=[b.value for b in Battery],
                          help="Battery to run, repeatable (default all)")
    validate.add_argument("--hurst", type=float, nargs="+", help="Hurst exponents of the recovery battery")
    validate.add_argument("--n", type=int, help="fGn length (default 8192)")
    validate.add_argument("--reps", type=int, help="Realizations per Hurst exponent (default 20)")
    validate.add_argument("--pairs", type=int, help="Series pairs in the calibration battery (default 10000)")
    validate.add_argument("--trials", type=int, help="Trials in the power battery (default 1000)")
    _afa_flags(validate)
    validate.add_argument("--alpha", type=float, help="Significance level (default 0.005)")

    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Configuration file values overridden by the flags given"""
    overrides: Dict[str, Any] = {
        setting: getattr(args, dest) for dest, setting in OVERRIDES.items() if getattr(args, dest, None) is not None
    }
    if getattr(args, 'fixed_lag', None) is not None and getattr(args, 'lag_selection', None) is None:
        overrides['granger.lag_selection'] = 'fixed'
    for name in ('corpus.path', 'corpus.keywords', 'run.output_dir'):
        if name in overrides:
            overrides[name] = Path(overrides[name]).resolve()
    return load_run_config(args.config, overrides)


def cmd_ingest(config: RunConfig, args: argparse.Namespace) -> None:
    corpus, series, written = run_ingest(config)
    counts = corpus.counts()
    print(f"{len(corpus.documents)} documents ({counts['article']} articles, "
          f"{counts['advertisement']} advertisements), {len(series)} keywords")
    print(f"{len(written)} series files written to {config.output_dir / SERIES_DIR}")


def cmd_analyze(config: RunConfig, args: argparse.Namespace) -> None:
    outcome = run_analysis(config)
    summary = outcome.summary
    print(f"{summary.n_keywords} keywords analysed, {len(outcome.skipped)} skipped")
    for c in CausalClass:
        print(f"  {c.value:<11} {summary.pct[c]:6.1f}%")
    print(f"  mean H articles {summary.mean_h_art:.3f}, advertisements {summary.mean_h_ads:.3f}, "
          f"delta {summary.delta_h:.3f}")
    for path in outcome.written:
        print(f"  {path}")


def cmd_report(config: RunConfig, args: argparse.Namespace) -> None:
    written = run_report(config)
    print(f"{len(written)} plot tables written to {written[0].parent if written else config.output_dir}")


def cmd_afa(config: RunConfig, args: argparse.Namespace) -> None:
    values = read_value_column(args.series)
    result = estimate_hurst(values, config.afa)
    low, high = result.ci95()
    document = result.to_dict()
    document.update(source=str(args.series), n=len(values), poly_order=config.afa.poly_order,
                    persistence=persistence_class(result).value, ci95=[low, high])
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_json(config.output_dir / AFA_RESULT_FILE, document)
    write_columns_csv(config.output_dir / AFA_SCALING_FILE, ["log2w", "log2F"], [result.log2_w, result.log2_F])
    print(f"H = {result.hurst:.4f} ± {result.slope_stderr:.4f} (R² {result.r_squared:.4f}), "
          f"{persistence_class(result).value}")


def cmd_granger(config: RunConfig, args: argparse.Namespace) -> None:
    x = read_value_column(args.x)
    y = read_value_column(args.y)
    result = bidirectional(x, y, config.granger)
    verdict = causal_class(result.p_xy, result.p_yx, config.alpha)
    document = result.to_dict()
    document.update(x=str(args.x), y=str(args.y), alpha=config.alpha, causal_class=verdict.value)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_json(config.output_dir / GRANGER_RESULT_FILE, document)
    print(f"lag {result.lag}, n = {result.n_obs}")
    print(f"  x -> y: F = {result.f_xy:.4g}, p = {result.p_xy:.4g}")
    print(f"  y -> x: F = {result.f_yx:.4g}, p = {result.p_yx:.4g}")
    print(f"  {verdict.value} at alpha {config.alpha:g}")


def _var_spec(config: RunConfig, args: argparse.Namespace) -> VarSpec:
    return VarSpec(args.n, a_xx=args.axx, a_yy=args.ayy, a_xy=args.axy, a_yx=args.ayx,
                   noise_sd=args.noise_sd, seed=config.seed, common_sd=args.common_sd,
                   coupling_lag=args.coupling_lag, integrated=args.integrated)


def cmd_synth(config: RunConfig, args: argparse.Namespace) -> None:
    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    if args.kind == "fgn":
        spec = FgnSpec(args.n, args.hurst, config.seed)
        path = output_dir / FGN_FILE
        write_columns_csv(path, ["value"], [gen_fgn(spec)])
        metadata = spec.metadata()
    elif args.kind == "var":
        var_spec = _var_spec(config, args)
        x, y = gen_var(var_spec)
        path = output_dir / VAR_FILE
        write_columns_csv(path, ["x", "y"], [x, y])
        metadata = var_spec.metadata()
    else:
        var_spec = _var_spec(config, args)
        ads, articles = gen_var(var_spec)
        try:
            start = parse_date(args.start)
        except ValueError:
            raise ConfigError(f"Invalid start date '{args.start}' (expected YYYY-MM-DD)")
        path = output_dir / SYNTH_CORPUS_FILE
        count = write_synthetic_corpus(path, {args.keyword: (ads, articles)}, start,
                                       args.base, args.scale, args.tokens_per_doc)
        metadata = var_spec.metadata()
        metadata.update(keyword=args.keyword, start=start.isoformat(), documents=count, base=args.base,
                        scale=args.scale, tokens_per_doc=args.tokens_per_doc)
    write_json(path.with_suffix(".meta.json"), metadata)
    print(f"Wrote {path} ({RNG_ALGORITHM}, seed {config.seed})")


def validate_options(config: RunConfig, args: argparse.Namespace) -> ValidateOptions:
    options: Dict[str, Any] = {'alpha': config.alpha, 'afa': config.afa}
    if args.battery:
        options['batteries'] = tuple(Battery(b) for b in dict.fromkeys(args.battery))
    if args.hurst:
        options['hursts'] = tuple(args.hurst)
    for flag, field in (('n', 'n'), ('reps', 'reps'), ('pairs', 'calibration_pairs'), ('trials', 'power_trials')):
        if getattr(args, flag) is not None:
            options[field] = getattr(args, flag)
    return ValidateOptions(**options)


def cmd_validate(config: RunConfig, args: argparse.Namespace) -> None:
    options = validate_options(config, args)
    results = run_validation(options, config.seed)
    print(f"{'battery':<32} {'truth':<28} {'estimate':>10}  {'tolerance':<36} result")
    for r in results:
        print(f"{r.battery:<32} {r.truth:<28} {r.estimate:>10.4f}  {r.tolerance:<36} {'pass' if r.passed else 'FAIL'}")
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_json(config.output_dir / VALIDATION_FILE,
               {'seed': config.seed, 'rng': RNG_ALGORITHM, 'results': [r.to_dict() for r in results]})
    failed = [r.battery for r in results if not r.passed]
    if failed:
        raise NumericalError(f"Validation failed: {', '.join(failed)}")


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], None]] = {
    'ingest': cmd_ingest,
    'analyze': cmd_analyze,
    'report': cmd_report,
    'afa': cmd_afa,
    'granger': cmd_granger,
    'synth': cmd_synth,
    'validate': cmd_validate,
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse the arguments and run one command"""
    args = parse_arguments(argv)

    try:
        config = build_config(args)
    except AnalysisError as e:
        print(f"{APP_NAME}: {e}", file=sys.stderr)
        return int(e.exit_status)

    initialize_run_environment(APP_NAME, config.output_dir, args.quiet)

    try:
        COMMANDS[args.command](config, args)
    except AnalysisError as e:
        logger.error(f"{args.command} failed: {e}")
        return int(e.exit_status)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return int(ExitStatus.USAGE)
    return int(ExitStatus.OK)

