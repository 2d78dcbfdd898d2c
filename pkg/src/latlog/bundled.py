"""Bundled example lattices, shipped as text files in the package."""
from __future__ import annotations

from importlib import resources

from .algebra import Lattice, load_lattice
from .errors import UnknownSymbolError

BUNDLED = (
    "classical",
    "classical-0",
    "classical-1",
    "classical-01",
    "godel3",
    "lukasiewicz3",
    "three-01",
    "three-0a",
    "mc",
    "diamond",
)


def bundled_source(name: str) -> str:
    if name not in BUNDLED:
        raise UnknownSymbolError(
            f"no bundled lattice {name!r}; available: {', '.join(BUNDLED)}", name=name
        )
    return resources.files("latlog").joinpath(f"lattices/{name}.lat").read_text()


def bundled_lattice(name: str) -> Lattice:
    return load_lattice(bundled_source(name))
