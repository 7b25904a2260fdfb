"""Entry point for python -m kmscurves."""
from kmscurves.cli import cli

if __name__ == "__main__":
    cli()
