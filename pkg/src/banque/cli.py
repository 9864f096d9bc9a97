"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 solver failure.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from fractions import Fraction

import click

from . import __version__
from .cce import solve_cce
from .ice import solve_ice_lower, upper_value
from .nash import solve_nash
from .numeric import format_decimal, format_exact
from .payoff import build_decomposition
from .response import render_strategy_table
from .results import EquilibriumResult, SolverError, exact_json, result_to_json
from .rules import ThetaParam
from .scan import KINDS, scan, value_curve, value_curve_csv
from .sim import simulate

EXIT_USAGE = 1
EXIT_SOLVER = 2
DENSITY = 1024  # default grid points per unit length 1/2


class ThetaType(click.ParamType):
    name = "theta"

    def convert(self, value, param, ctx):
        if isinstance(value, ThetaParam):
            return value
        try:
            return ThetaParam.of(str(value))
        except (ValueError, ZeroDivisionError) as exc:
            self.fail(f"{value!r}: {exc}", param, ctx)


class RationalType(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number", param, ctx)


THETA = ThetaType()
RATIONAL = RationalType()


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise click.UsageError(f"cannot write {out}: {exc}") from exc
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _fmt(x, digits: int) -> str:
    return f"{format_exact(x)}  (~{format_decimal(x, digits)})"


def _text_report(res: EquilibriumResult, digits: int) -> str:
    lines = [f"{res.kind.upper()}  theta = {format_exact(res.theta.value)}"]
    if "notice" in res.extras:
        lines.append(f"note: {res.extras['notice']}")
    if res.players_joint is not None:
        names = ("p00 (SS)", "p01 (SD)", "p10 (DS)", "p11 (DD)")
        for n, v in zip(names, res.players_joint.as_tuple()):
            lines.append(f"  {n}: {_fmt(v, digits)}")
    if res.players_product is not None:
        lines.append(f"  p1: {_fmt(res.players_product.p1, digits)}")
        lines.append(f"  p2: {_fmt(res.players_product.p2, digits)}")
    label = "lower value" if res.kind == "ice" else "value (Players)"
    lines.append(f"  {label}: {_fmt(res.value, digits)}")
    if res.kind == "ice":
        up = res.extras.get("upper_value")
        if up is not None:
            lines.append(f"  upper value: {_fmt(up, digits)}")
            lines.append(f"  gap: {_fmt(up - res.value, digits)}")
        lines.append(f"  Banker: {res.extras['banker_label']}")
    if res.indifferent_sets:
        lines.append("  indifferent sets: " + "  ".join(f"({s})" for s in res.indifferent_sets))
    for s, r in sorted(res.banker.mixing.items()):
        lines.append(f"  P(draw at ({s})) = {_fmt(r, digits)}")
    if res.multiplicity_note:
        lines.append(f"  note: {res.multiplicity_note}")
    lines.append("  certificate: " + ", ".join(f"{k}={v}" for k, v in res.certificate.items()))
    lines.append("")
    lines.append("Banker's maximum drawing total:")
    lines.append(render_strategy_table(res.banker, res.indifferent_sets).to_text())
    return "\n".join(lines) + "\n"


def _csv_report(results: list[EquilibriumResult], digits: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["result", "field", "exact", "decimal"])
    for n, res in enumerate(results):
        rows = [("theta", res.theta.value), ("value", res.value)]
        if res.players_joint is not None:
            rows += list(zip(("p00", "p01", "p10", "p11"), res.players_joint.as_tuple()))
        if res.players_product is not None:
            rows += [("p1", res.players_product.p1), ("p2", res.players_product.p2)]
        rows += [(f"draw({s})", r) for s, r in sorted(res.banker.mixing.items())]
        for name, v in rows:
            w.writerow([n, name, format_exact(v), format_decimal(v, digits)])
    return buf.getvalue()


def _solve(kind: str, theta: ThetaParam) -> list[EquilibriumResult]:
    if kind == "cce":
        return [solve_cce(theta.value)]
    if kind == "ice":
        res = solve_ice_lower(theta.value)
        res.extras["upper_value"] = upper_value(theta.value)
        return [res]
    results = solve_nash(theta.value)
    if not results:
        raise SolverError(f"no Nash equilibrium found at theta={theta.value}")
    return results


@click.group()
@click.version_option(__version__, prog_name="banque")
@click.option("-v", "--verbose", is_flag=True, help="Log solver progress to stderr.")
def cli(verbose: bool) -> None:
    """Exact equilibria of baccara banque."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")


@cli.command()
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--theta", type=THETA, required=True, help="Stake ratio, e.g. 1/2 or 0.3.")
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="text")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--precision-digits", type=click.IntRange(1, 200), default=15)
def solve(kind, theta, fmt, out, precision_digits):
    """Solve one equilibrium concept at a single θ."""
    results = _solve(kind, theta)
    if fmt == "json":
        payload = [result_to_json(r, precision_digits) for r in results]
        text = json.dumps(payload[0] if kind != "nash" else payload, indent=2, ensure_ascii=False)
    elif fmt == "csv":
        text = _csv_report(results, precision_digits)
    else:
        text = "\n".join(_text_report(r, precision_digits) for r in results)
    _emit(text, out)


def _range(lo: Fraction, hi: Fraction) -> None:
    if not (0 < lo <= hi <= Fraction(1, 2)):
        raise click.UsageError("range must satisfy 0 < from <= to <= 1/2")


@cli.command("scan")
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--from", "lo", type=RATIONAL, required=True)
@click.option("--to", "hi", type=RATIONAL, required=True)
@click.option("--grid", type=click.IntRange(2), default=None, help="Grid steps (default: 1024 per 1/2).")
@click.option("--dense", is_flag=True, help="Use 16384 grid steps per 1/2.")
@click.option("--tol", type=RATIONAL, default=Fraction(1, 10**9))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def scan_cmd(kind, lo, hi, grid, dense, tol, out):
    """Locate breakpoints of an equilibrium over a θ range."""
    _range(lo, hi)
    if tol <= 0:
        raise click.UsageError("--tol must be positive")
    if grid is None:
        density = 16 * DENSITY if dense else DENSITY
        grid = max(2, math.ceil(density * 2 * (hi - lo)))
    res = scan(kind, lo, hi, grid=grid, tol=tol)
    _emit(res.to_csv(), out)


@cli.command()
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--from", "lo", type=RATIONAL, required=True)
@click.option("--to", "hi", type=RATIONAL, required=True)
@click.option("--samples", type=click.IntRange(2), default=50)
@click.option("--precision-digits", type=click.IntRange(1, 200), default=15)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def curve(kind, lo, hi, samples, precision_digits, out):
    """Tabulate the equilibrium value on evenly spaced θ."""
    _range(lo, hi)
    if lo == hi:
        raise click.UsageError("curve needs from < to")
    rows = value_curve(kind, lo, hi, samples - 1)
    _emit(value_curve_csv(kind, rows, precision_digits), out)


@cli.command()
@click.option("--theta", type=THETA, required=True)
@click.option("--preset", type=click.Choice(KINDS), default="cce", help="Strategies to play.")
@click.option("--rounds", type=click.IntRange(1), default=1_000_000)
@click.option("--seed", type=int, default=0)
@click.option("--cards", is_flag=True, help="Deal individual cards instead of totals.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def sim(theta, preset, rounds, seed, cards, out):
    """Monte Carlo check of an equilibrium's value."""
    res = _solve(preset, theta)[0]
    players = res.players_joint if res.players_joint is not None else res.players_product
    r = simulate(theta.value, players, res.banker, rounds, seed=seed, card_mode=cards)
    payload = r.to_json()
    payload["preset"] = preset
    payload["theta"] = format_exact(theta.value)
    payload["exact_value"] = exact_json(res.value)
    payload["z_score"] = (r.mean - float(res.value)) / r.stderr if r.stderr else None
    _emit(json.dumps(payload, indent=2), out)


@cli.command()
@click.option("--theta", type=THETA, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def decomposition(theta, out):
    """Dump the exact payoff decomposition as JSON."""
    if theta.swapped:
        click.echo(f"note: dumping theta={theta.canonical} (players exchanged)", err=True)
    _emit(json.dumps(build_decomposition(theta).to_json(), indent=1), out)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="banque", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except (SolverError, ArithmeticError, ValueError) as exc:
        click.echo(f"solver failure: {exc}", err=True)
        return EXIT_SOLVER
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
