"""Command-line entry point of the kontsevich-ncis package."""

from .main import cli

if __name__ == "__main__":
    cli()
