"""Pytest configuration for affine-amenability tests."""

import pytest

from affine_amenability.algebra import AlgebraPresentation, Element
from affine_amenability.params import load_presentation


def gens(pres: AlgebraPresentation) -> list[Element]:
    """The generators of a presentation as elements."""
    return [Element.from_word((i,)) for i in range(len(pres.generators))]


@pytest.fixture
def free2():
    """K<x, y>."""
    return load_presentation("free2")


@pytest.fixture
def polyxy():
    """K[x, y] as K<x, y>/(yx - xy)."""
    return load_presentation("polyxy")


@pytest.fixture
def kx():
    return load_presentation("kx")


@pytest.fixture
def ex33():
    """K<x, y>/(x^2, xy)."""
    return load_presentation("ex33")


@pytest.fixture
def f2grp():
    return load_presentation("f2grp")


@pytest.fixture
def z2grp():
    return load_presentation("z2grp")


@pytest.fixture
def server():
    """AmenabilityMCPServer with the free algebra as default."""
    from affine_amenability.server import AmenabilityMCPServer

    return AmenabilityMCPServer(default_algebra="free2")
