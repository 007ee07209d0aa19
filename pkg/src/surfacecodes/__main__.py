"""Allow running as `python -m surfacecodes`."""

from surfacecodes.cli import cli

cli()
