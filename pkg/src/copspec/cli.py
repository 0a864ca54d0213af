"""Command-line entry point.

Subcommands:
    simulate  : simulate a model and write the path as CSV
    fit       : fit a candidate class to a data file
    estimate  : smoothed copula spectral estimate of a data file
    reference : true copula spectrum of a model (analytic or Monte Carlo)
    regions   : fit, bootstrap and draw typical regions around the estimate
    pvalues   : fit, bootstrap and compute uniform-in-tau p-values
    plot      : redraw an estimate CSV as a 3x3 grid plot
    calibrate : empirical coverage and rejection rates under a known process
    acf       : autocorrelations of X and X^2

Usage::

    copspec simulate --model "garch11(omega=0.01,alpha=0.4,beta=0.5)" --n 1024 --seed 7
    copspec regions --input out/simulate_n1024_seed7.csv --class ar --p 3 --R 200
    copspec pvalues --input prices.csv --log-returns --class garch11 --R 1000
    copspec calibrate --scenario c0 --class Pc --n 256 --R 200 --reps 200 --bandwidths 0.1,0.4

Every option that also exists as a config key overrides the --config file,
which overrides COPSPEC_* environment variables.  Exit codes: 0 success,
1 usage error, 2 data error, 3 numerical failure.
"""

import json
import logging
from pathlib import Path
from typing import Annotated, Optional

from typer import _click as click
import typer
from pydantic import ValidationError

from .diagnostics import (
    coverage_indicator,
    run_parametric_bootstrap,
    self_calibration_check,
    typical_regions,
    uniform_pvalues,
)
from .errors import ConfigError, DataError, FitError, InvalidInputError, ReplicateError
from .fitting import fit_class
from .io import (
    RunConfig,
    coverage_csv,
    emit_acf_plot,
    emit_coverage_plot,
    emit_detail_plot,
    emit_grid_plot,
    emit_rejection_plot,
    emit_summary_plot,
    estimate_csv,
    ingest_csv,
    load_ensemble,
    load_run_config,
    persist_ensemble,
    pmin_csv,
    pvalues_csv,
    read_estimate_csv,
    regions_csv,
    rejection_csv,
    series_csv,
    write_atomic,
)
from .models import (
    SCENARIOS,
    ModelSpec,
    SimConfig,
    candidate_class,
    format_model_spec,
    is_linear,
    parse_model_spec,
    scenario,
    simulate,
)
from .reference import gaussian_copula_spectrum, mc_copula_spectrum
from .spectra import QuantileGrid, TimeSeries

logger = logging.getLogger(__name__)

app = typer.Typer(help="Copula spectral diagnostics for time-series models", no_args_is_help=True)

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3

# ---------------------------------------------------------------------------
# Shared options
# ---------------------------------------------------------------------------

ConfigOpt = Annotated[Optional[Path], typer.Option("--config", "-c", help="Flat key = value config file.")]
InputOpt = Annotated[Optional[Path], typer.Option("--input", "-i", help="One-column CSV of observations.")]
LogReturnsOpt = Annotated[
    Optional[bool], typer.Option("--log-returns/--levels", help="Convert prices to log returns.")
]
OutputOpt = Annotated[Optional[Path], typer.Option("--output-dir", "-o", help="Directory for all outputs.")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Master seed.")]
JobsOpt = Annotated[Optional[int], typer.Option("--n-jobs", help="Parallel workers (threads).")]
TausOpt = Annotated[Optional[str], typer.Option("--taus", help="Comma-separated quantile levels.")]
BandwidthOpt = Annotated[Optional[float], typer.Option("--bandwidth", "-b", help="Kernel bandwidth b_n.")]
ClassOpt = Annotated[Optional[str], typer.Option("--class", help="Model class: ar, arma, arch1, garch11, egarch11.")]
POpt = Annotated[Optional[int], typer.Option("--p", help="AR order.")]
QOpt = Annotated[Optional[int], typer.Option("--q", help="MA order.")]
ROpt = Annotated[Optional[int], typer.Option("--R", help="Bootstrap replicates.")]
AlphaOpt = Annotated[Optional[float], typer.Option("--alpha", help="Level of the typical regions.")]
BetaOpt = Annotated[Optional[float], typer.Option("--beta", help="Scaling quantile level of the p-values.")]
FixedYOpt = Annotated[Optional[bool], typer.Option("--fixed-ylim/--auto-ylim", help="Share y ranges across panels.")]


def _config(path: Path | None, **overrides) -> RunConfig:
    return load_run_config(path, overrides)


def _data(cfg: RunConfig) -> TimeSeries:
    if cfg.input is None:
        raise ConfigError("no input file: pass --input or set 'input' in the config file")
    return ingest_csv(cfg.input, cfg.log_returns)


def _resolve_model(text: str, allow_text: bool = True) -> ModelSpec:
    """A scenario name or, with *allow_text*, the text form of a spec.

    Malformed option text is a usage error, so it surfaces as ConfigError.
    """
    try:
        if not allow_text or text.strip().lower() in SCENARIOS:
            return scenario(text)
        return parse_model_spec(text)
    except InvalidInputError as exc:
        raise ConfigError(str(exc)) from exc


def _say(paths) -> None:
    for path in paths:
        typer.echo(f"Wrote {path}")


@app.callback()
def _setup(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging.")] = False,
) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
        force=True,
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

@app.command("simulate")
def simulate_cmd(
    model: Annotated[str, typer.Option("--model", "-m", help="Spec text, e.g. 'ar(0.5)', or a scenario name.")],
    n: Annotated[int, typer.Option("--n", help="Number of observations.")],
    seed: SeedOpt = None,
    burn_in: Annotated[Optional[int], typer.Option("--burn-in", help="Discarded warm-up steps.")] = None,
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Simulate a model and write simulate_n<n>_seed<seed>.csv."""
    cfg = _config(config, seed=seed, burn_in=burn_in, output_dir=output_dir)
    spec = _resolve_model(model)
    series = simulate(spec, SimConfig(n=n, burn_in=cfg.burn_in, seed=cfg.seed))
    _say([write_atomic(cfg.output_dir / f"simulate_n{n}_seed{cfg.seed}.csv", series_csv(series))])


@app.command("fit")
def fit_cmd(
    input: InputOpt = None,
    log_returns: LogReturnsOpt = None,
    model_class: ClassOpt = None,
    p: POpt = None,
    q: QOpt = None,
    n_jobs: JobsOpt = None,
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Fit a candidate class and write fit.json."""
    cfg = _config(config, input=input, log_returns=log_returns, model_class=model_class,
                  p=p, q=q, n_jobs=n_jobs, output_dir=output_dir)
    result = fit_class(_data(cfg), cfg.model_class, cfg.p, cfg.q, n_jobs=cfg.n_jobs)
    typer.echo(str(result))
    doc = {
        "spec": format_model_spec(result.spec),
        "objective_value": result.objective_value,
        "converged": result.converged,
        "iterations": result.iterations,
        "method": result.method,
    }
    _say([write_atomic(cfg.output_dir / "fit.json", json.dumps(doc, indent=2) + "\n")])


@app.command("estimate")
def estimate_cmd(
    input: InputOpt = None,
    log_returns: LogReturnsOpt = None,
    taus: TausOpt = None,
    bandwidth: BandwidthOpt = None,
    fixed_ylim: FixedYOpt = None,
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Smoothed copula spectral estimate: estimate.csv and estimate_grid.svg."""
    cfg = _config(config, input=input, log_returns=log_returns, taus=taus, bandwidth=bandwidth,
                  fixed_ylim=fixed_ylim, output_dir=output_dir)
    est = cfg.estimator_config().estimate(_data(cfg))
    paths = [write_atomic(cfg.output_dir / "estimate.csv", estimate_csv(est))]
    if set(QuantileGrid.plot_default().levels) <= set(cfg.taus):
        paths += emit_grid_plot(est, fixed_ylim=cfg.fixed_ylim).save(cfg.output_dir, "estimate_grid")
    _say(paths)


@app.command("reference")
def reference_cmd(
    model: Annotated[str, typer.Option("--model", "-m", help="Spec text or scenario name.")],
    taus: TausOpt = None,
    max_lag: Annotated[int, typer.Option("--max-lag", help="Lag truncation for Monte Carlo.")] = 100,
    sim_length: Annotated[int, typer.Option("--sim-length", help="Monte Carlo path length.")] = 10**6,
    seed: SeedOpt = None,
    n_jobs: JobsOpt = None,
    fixed_ylim: FixedYOpt = None,
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """True copula spectrum: reference.csv and reference_grid.svg."""
    cfg = _config(config, taus=taus, seed=seed, n_jobs=n_jobs, fixed_ylim=fixed_ylim, output_dir=output_dir)
    spec = _resolve_model(model)
    if is_linear(spec):
        ref = gaussian_copula_spectrum(spec, cfg.tau_grid, cfg.freq_grid)
    else:
        ref = mc_copula_spectrum(spec, cfg.tau_grid, cfg.freq_grid, max_lag, sim_length, cfg.seed,
                                 burn_in=cfg.burn_in, n_jobs=cfg.n_jobs)
    paths = [write_atomic(cfg.output_dir / "reference.csv", estimate_csv(ref))]
    if set(QuantileGrid.plot_default().levels) <= set(cfg.taus):
        doc = emit_grid_plot(ref, fixed_ylim=cfg.fixed_ylim, title=format_model_spec(spec))
        paths += doc.save(cfg.output_dir, "reference_grid")
    _say(paths)


@app.command("regions")
def regions_cmd(
    input: InputOpt = None,
    log_returns: LogReturnsOpt = None,
    model_class: ClassOpt = None,
    p: POpt = None,
    q: QOpt = None,
    R: ROpt = None,
    alpha: AlphaOpt = None,
    taus: TausOpt = None,
    bandwidth: BandwidthOpt = None,
    seed: SeedOpt = None,
    n_jobs: JobsOpt = None,
    ensemble: Annotated[Optional[Path], typer.Option("--ensemble", help="Reuse a saved ensemble.")] = None,
    fixed_ylim: FixedYOpt = None,
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Bootstrap typical regions around the data estimate."""
    cfg = _config(config, input=input, log_returns=log_returns, model_class=model_class, p=p, q=q, R=R,
                  alpha=alpha, taus=taus, bandwidth=bandwidth, seed=seed, n_jobs=n_jobs,
                  fixed_ylim=fixed_ylim, output_dir=output_dir)
    data = _data(cfg)
    if ensemble is not None:
        ens = load_ensemble(ensemble)
    else:
        ens = run_parametric_bootstrap(data, cfg.model_class, cfg.R, cfg.estimator_config(), cfg.seed,
                                       p=cfg.p, q=cfg.q, burn_in=cfg.burn_in, n_jobs=cfg.n_jobs)
    est = ens.config.estimate(data)
    regions = typical_regions(ens, cfg.alpha)
    covered = coverage_indicator(est, regions)
    typer.echo(f"Fitted: {ens.fitted}")
    typer.echo(f"Outside the regions: {int((~covered.re).sum())} Re and {int((~covered.im).sum())} Im points")

    paths = [
        persist_ensemble(ens, cfg.output_dir / "regions_ensemble.bin") if ensemble is None else None,
        write_atomic(cfg.output_dir / "regions.csv", regions_csv(est, regions)),
    ]
    if set(QuantileGrid.plot_default().levels) <= set(ens.config.taus):
        doc = emit_grid_plot(est, regions, fixed_ylim=cfg.fixed_ylim, title=format_model_spec(ens.fitted.spec))
        paths += doc.save(cfg.output_dir, "regions_grid")
    _say(path for path in paths if path is not None)


@app.command("pvalues")
def pvalues_cmd(
    input: InputOpt = None,
    log_returns: LogReturnsOpt = None,
    model_class: ClassOpt = None,
    p: POpt = None,
    q: QOpt = None,
    R: ROpt = None,
    beta: BetaOpt = None,
    bandwidth: BandwidthOpt = None,
    seed: SeedOpt = None,
    n_jobs: JobsOpt = None,
    detail: Annotated[str, typer.Option("--detail", help="Fourier indices j (omega = 2 pi j / d) to draw in detail.")] = "0,4",
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Uniform-in-tau p-values: pvalues.csv, pmin summary plot and per-frequency detail plots."""
    cfg = _config(config, input=input, log_returns=log_returns, model_class=model_class, p=p, q=q, R=R,
                  beta=beta, bandwidth=bandwidth, seed=seed, n_jobs=n_jobs, output_dir=output_dir)
    try:
        js = [int(j) for j in detail.split(",") if j.strip()]
    except ValueError as exc:
        raise ConfigError(f"--detail expects comma-separated integers, got {detail!r}") from exc
    data = _data(cfg)
    est_config = cfg.estimator_config(cfg.pvalue_taus)
    ens = run_parametric_bootstrap(data, cfg.model_class, cfg.R, est_config, cfg.seed,
                                   p=cfg.p, q=cfg.q, burn_in=cfg.burn_in, n_jobs=cfg.n_jobs)
    field = uniform_pvalues(ens, est_config.estimate(data), cfg.beta)
    typer.echo(f"Fitted: {ens.fitted}")
    typer.echo(f"Smallest p_min: {float(field.p_min.min()):g}")
    for note in field.warnings:
        typer.echo(f"[WARNING] {note}", err=True)

    paths = [
        write_atomic(cfg.output_dir / "pvalues.csv", pvalues_csv(field)),
        write_atomic(cfg.output_dir / "pvalues_pmin.csv", pmin_csv(field)),
        *emit_summary_plot(field, title=format_model_spec(ens.fitted.spec)).save(cfg.output_dir, "pvalues_summary"),
    ]
    for j in js:
        if not (0 <= j < len(cfg.freq_grid)):
            raise ConfigError(f"detail index {j} outside 0..{len(cfg.freq_grid) - 1}")
        omega = float(cfg.freq_grid.omegas[j])
        paths += emit_detail_plot(field, omega).save(cfg.output_dir, f"pvalues_detail_j{j}")
    _say(paths)


@app.command("plot")
def plot_cmd(
    estimate: Annotated[Path, typer.Option("--estimate", "-e", help="CSV written by estimate or reference.")],
    stem: Annotated[str, typer.Option("--stem", help="Output file stem.")] = "grid",
    fixed_ylim: FixedYOpt = None,
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Redraw an estimate CSV as a 3x3 grid plot."""
    cfg = _config(config, fixed_ylim=fixed_ylim, output_dir=output_dir)
    est = read_estimate_csv(estimate)
    _say(emit_grid_plot(est, fixed_ylim=cfg.fixed_ylim).save(cfg.output_dir, stem))


@app.command("calibrate")
def calibrate_cmd(
    scenario_name: Annotated[Optional[str], typer.Option("--scenario", help="Data-generating scenario name.")] = None,
    model: Annotated[Optional[str], typer.Option("--model", "-m", help="Data-generating spec text.")] = None,
    model_class: Annotated[Optional[str], typer.Option("--class", help="Candidate class tag or Pa/Pb/Pc.")] = None,
    p: POpt = None,
    q: QOpt = None,
    n: Annotated[int, typer.Option("--n", help="Length of each simulated data set.")] = 256,
    R: ROpt = None,
    reps: Annotated[int, typer.Option("--reps", help="Repetitions of the whole pipeline.")] = 100,
    alpha: AlphaOpt = None,
    beta: BetaOpt = None,
    bandwidths: Annotated[Optional[str], typer.Option("--bandwidths", help="Comma-separated bandwidths.")] = None,
    seed: SeedOpt = None,
    n_jobs: JobsOpt = None,
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Empirical non-coverage and P(p_min <= alpha) under a known process."""
    if (scenario_name is None) == (model is None):
        raise ConfigError("pass exactly one of --scenario and --model")
    if scenario_name is not None:
        spec = _resolve_model(scenario_name, allow_text=False)
    else:
        spec = _resolve_model(model)
    if model_class is not None and model_class.strip().lower() in ("pa", "pb", "pc"):
        candidate = candidate_class(model_class)
        model_class = candidate.model_class
        p = candidate.p if p is None else p
        q = candidate.q if q is None else q
    cfg = _config(config, model_class=model_class, p=p, q=q, R=R, alpha=alpha, beta=beta,
                  seed=seed, n_jobs=n_jobs, output_dir=output_dir)
    try:
        bws = [float(b) for b in bandwidths.split(",") if b.strip()] if bandwidths else [cfg.bandwidth]
    except ValueError as exc:
        raise ConfigError(f"--bandwidths expects comma-separated numbers, got {bandwidths!r}") from exc

    reports = self_calibration_check(
        spec, n, cfg.R, reps, cfg.alpha, cfg.seed,
        model_class=cfg.model_class, p=cfg.p, q=cfg.q, bandwidths=bws,
        omegas=cfg.freq_grid, beta=cfg.beta, burn_in=cfg.burn_in, n_jobs=cfg.n_jobs,
    )
    label = f"{format_model_spec(spec)} vs {cfg.model_class}, n={n}"
    stem = f"calibrate_n{n}"
    _say([
        write_atomic(cfg.output_dir / f"{stem}_coverage.csv", coverage_csv(reports)),
        write_atomic(cfg.output_dir / f"{stem}_rejection.csv", rejection_csv(reports)),
        *emit_coverage_plot(reports, title=label).save(cfg.output_dir, f"{stem}_coverage_plot"),
        *emit_rejection_plot(reports, title=label).save(cfg.output_dir, f"{stem}_rejection_plot"),
    ])


@app.command("acf")
def acf_cmd(
    input: InputOpt = None,
    log_returns: LogReturnsOpt = None,
    max_lag: Annotated[int, typer.Option("--max-lag", help="Largest lag shown.")] = 20,
    output_dir: OutputOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Autocorrelations of the series and of its squares."""
    cfg = _config(config, input=input, log_returns=log_returns, output_dir=output_dir)
    _say(emit_acf_plot(_data(cfg), max_lag).save(cfg.output_dir, "acf"))


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    command = typer.main.get_command(app)
    try:
        code = command.main(args=argv, prog_name="copspec", standalone_mode=False)
    except click.exceptions.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        typer.echo("Aborted.", err=True)
        return EXIT_USAGE
    except (ConfigError, ValidationError) as exc:
        typer.echo(f"[ERROR] {exc}", err=True)
        return EXIT_USAGE
    except (FitError, ReplicateError) as exc:
        typer.echo(f"[ERROR] {exc}", err=True)
        return EXIT_NUMERIC
    except (DataError, InvalidInputError) as exc:
        typer.echo(f"[ERROR] {exc}", err=True)
        return EXIT_DATA
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    raise SystemExit(main())
