"""Coverage and rejection study over sample sizes and bandwidths.

Runs self_calibration_check for every (scenario, candidate class) pair of the
study and every sample size, reusing the simulated data across bandwidths,
and writes one coverage plot and one rejection plot per (pair, n).

Usage:
    # Full study (slow: hours with R = 1000)
    uv run python tools/simulation_study.py --R 1000 --reps 1000 --n-jobs 8

    # Quick smoke run
    uv run python tools/simulation_study.py --pairs c0:Pc --sizes 256 --R 50 --reps 20

    # Custom output directory
    uv run python tools/simulation_study.py --output out/study
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import typer

# Allow running from repo root without installing the package
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from copspec.diagnostics import self_calibration_check
from copspec.io import coverage_csv, emit_coverage_plot, emit_rejection_plot, rejection_csv, write_atomic
from copspec.models import STUDY_PAIRS, candidate_class, format_model_spec, scenario

app = typer.Typer(add_completion=False)
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)

_SIZES = "256,512,1024"
_BANDWIDTHS = "0.01,0.02,0.05,0.1,0.4"


def _pairs(text: str) -> list[tuple[str, str]]:
    if not text:
        return list(STUDY_PAIRS)
    out = []
    for item in text.split(","):
        name, _, cls = item.strip().partition(":")
        out.append((name, cls))
    return out


@app.command()
def main(
    pairs: str = typer.Option("", help="scenario:class pairs, e.g. 'c0:Pc,b1:Pb' (default: all six)."),
    sizes: str = typer.Option(_SIZES, help="Comma-separated sample sizes."),
    bandwidths: str = typer.Option(_BANDWIDTHS, help="Comma-separated kernel bandwidths."),
    R: int = typer.Option(200, "--R", help="Bootstrap replicates per repetition."),
    reps: int = typer.Option(200, help="Repetitions per (pair, n)."),
    alpha: float = typer.Option(0.05, help="Nominal level."),
    seed: int = typer.Option(0, help="Master seed."),
    n_jobs: int = typer.Option(1, help="Parallel repetitions (threads)."),
    output: Path = typer.Option(Path("out/study"), help="Output directory."),
) -> None:
    """Run the study grid and write CSV + SVG per (scenario, class, n)."""
    ns = [int(s) for s in sizes.split(",")]
    bws = [float(b) for b in bandwidths.split(",")]
    for name, cls_name in _pairs(pairs):
        spec = scenario(name)
        cls = candidate_class(cls_name)
        for n in ns:
            label = f"{name}: {format_model_spec(spec)} vs {cls_name}, n={n}"
            logger.info("=== %s ===", label)
            reports = self_calibration_check(
                spec, n, R, reps, alpha, seed,
                model_class=cls.model_class, p=cls.p, q=cls.q,
                bandwidths=bws, n_jobs=n_jobs,
            )
            stem = f"{name}_{cls_name}_n{n}"
            write_atomic(output / f"{stem}_coverage.csv", coverage_csv(reports))
            write_atomic(output / f"{stem}_rejection.csv", rejection_csv(reports))
            emit_coverage_plot(reports, title=label).save(output, f"{stem}_coverage_plot")
            emit_rejection_plot(reports, title=label).save(output, f"{stem}_rejection_plot")
            for rep in reports:
                typer.echo(
                    f"{stem} b={rep.bandwidth:g}: mean non-coverage Re {rep.noncoverage_re.mean():.3f}, "
                    f"max P(p_min <= {alpha:g}) {rep.reject_rate.max():.3f}"
                )
    typer.echo(f"Done. Results under {output}")


if __name__ == "__main__":
    app()
