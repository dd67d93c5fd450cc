"""Bundled example complexes: lambda.vh, delta.vh, sigma.vh."""

from importlib import resources

from vhcert.complexes import SquareComplex, parse_complex

NAMES = ("lambda", "delta", "sigma")


def text(name: str) -> str:
    """Raw file contents of a bundled complex."""
    if name not in NAMES:
        raise KeyError(f"no bundled complex named {name!r}")
    return resources.files(__package__).joinpath(f"{name}.vh").read_text("utf-8")


def load(name: str) -> SquareComplex:
    return parse_complex(text(name))
