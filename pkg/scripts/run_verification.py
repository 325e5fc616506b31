#!/usr/bin/env python3
"""Run every verification suite and write a JSON report.

Usage: run_verification.py [--quick] [--seed N] [--out report.json]
"""

import json
import sys
import time

import click

from orbitlab import harness


@click.command()
@click.option("--quick", is_flag=True, help="Reduced instance counts.")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default="report.json")
@click.option("--ledger", type=click.Path(), default=None,
              help="Save the measured calibration constants here.")
def main(quick, seed, out, ledger):
    led = harness.NormalizationLedger()
    t0 = time.time()
    reports = harness.run_all(seed=seed, quick=quick, ledger=led)
    for rep in reports:
        click.echo(rep.summary())
    with open(out, "w") as fh:
        json.dump([rep.to_json() for rep in reports], fh, indent=2)
    if ledger:
        led.save(ledger)
    bad = [r for r in reports if r.blocking and not r.passed]
    click.echo(f"total runtime {time.time() - t0:.1f}s; "
               f"{len(reports) - len(bad)}/{len(reports)} suites clean")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
