"""Command-line entry points for the experiment runners.

Every subcommand prints one report (JSON by default) and exits nonzero
iff some case failed.  With a fixed seed the JSON output is
byte-identical across runs.
"""

from __future__ import annotations

import csv
import io
import sys

import click

from . import experiments


def _emit(ctx, report):
    fmt = ctx.obj["format"]
    if fmt == "json":
        text = report.to_json()
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["experiment", "case", "verdict", "notes"])
        for c in report.cases:
            w.writerow([report.experiment, c.id, c.verdict, c.notes])
        text = buf.getvalue()
    out = ctx.obj["out"]
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        click.echo(f"{report.experiment}: {report.summary} -> {out}", err=True)
    else:
        click.echo(text, nl=False)
    ctx.exit(1 if report.has_failures else 0)


@click.group()
@click.option("--seed", default=42, show_default=True,
              help="PRNG seed for randomized suites.")
@click.option("--precision", default=32, show_default=True,
              help="Working p-adic precision (significant digits).")
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for cached class polynomials.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the report here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
@click.pass_context
def main(ctx, seed, precision, cache_dir, out, fmt):
    """p-adic proximity experiments for CM points on modular curves."""
    ctx.obj = {"seed": seed, "precision": precision, "cache_dir": cache_dir,
               "out": out, "format": fmt}


@main.command()
@click.option("--p", default=5, show_default=True)
@click.option("--n-max", default=2, show_default=True)
@click.pass_context
def prop12(ctx, p, n_max):
    """Deep p-adic class-polynomial roots for d = -(3x^2 + 4p^(2n+1))."""
    _emit(ctx, experiments.run_prop_approximate(
        p, n_max, precision=ctx.obj["precision"],
        cache_dir=ctx.obj["cache_dir"]))


@main.command()
@click.option("--n", "n_list", multiple=True, type=int,
              help="Odd depth parameters (default 1 and 3).")
@click.pass_context
def warmup2(ctx, n_list):
    """2-adic valuations of roots of H_{-l}, l = 3x^2 + 2^(2+n)."""
    _emit(ctx, experiments.run_warmup_2adic(
        n_list or (1, 3), cache_dir=ctx.obj["cache_dir"]))


@main.command()
@click.option("--p", default=5, show_default=True)
@click.option("--d-cap", default=500, show_default=True)
@click.option("--levels", default="1,2", show_default=True,
              help="Comma-separated correspondence levels.")
@click.pass_context
def rigidity(ctx, p, d_cap, levels):
    """Pairwise valuations of ordinary roots against 6 Psi(N)/(p-1)."""
    lv = tuple(int(s) for s in levels.split(","))
    _emit(ctx, experiments.run_rigidity_scan(
        p, d_cap, levels=lv, precision=ctx.obj["precision"],
        cache_dir=ctx.obj["cache_dir"]))


@main.command()
@click.option("--p", default=5, show_default=True)
@click.option("--n", default=1, show_default=True)
@click.option("--y", default=None, type=int,
              help="Count window (default max(10^6, f(1))).")
@click.option("--euler-cap", "L", default=10 ** 5, show_default=True)
@click.pass_context
def sieve(ctx, p, n, y, L):
    """Square-free counts and the Euler-product density for 3x^2 + 4p^(2n+1)."""
    _emit(ctx, experiments.run_sieve(p, n, y=y, L=L))


@main.command()
@click.pass_context
def selftest(ctx):
    """Reduced-size invariant checks for every module, deterministic."""
    _emit(ctx, experiments.run_selftest(
        seed=ctx.obj["seed"], precision=ctx.obj["precision"],
        cache_dir=ctx.obj["cache_dir"]))


if __name__ == "__main__":
    main()
