"""plotkit command line: `plotkit <kind> --in <csv|json> --out <img>`."""

from __future__ import annotations

import json
import sys

import click

from .render import FIGURE_KINDS, RenderError, render

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 4


@click.command()
@click.argument("kind", type=click.Choice(FIGURE_KINDS))
@click.option("--in", "in_path", required=True, type=click.Path(),
              help="Input result table (CSV) or report (JSON).")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Output image (.svg or .png).")
@click.option("--config", "config_path", default=None, type=click.Path(),
              help="Optional JSON with style/axis parameters.")
def main(kind, in_path, out_path, config_path):
    """Render one figure KIND deterministically from a result file."""
    config = {}
    try:
        if config_path is not None:
            with open(config_path, encoding="utf-8") as fh:
                config = json.load(fh)
        render(kind, in_path, out_path, config)
    except (RenderError, json.JSONDecodeError, ValueError) as exc:
        click.echo("config error: %s" % exc, err=True)
        sys.exit(EXIT_CONFIG)
    except OSError as exc:
        click.echo("I/O error: %s" % exc, err=True)
        sys.exit(EXIT_IO)
    click.echo(out_path)


if __name__ == "__main__":
    main()
