import pytest

from qtilt.catalog import build_catalog
from qtilt.heart import HeartContext
from qtilt.quiverrep import Quiver, preset_quiver
from qtilt.torsion import TorsionContext

QUIVERS = {
    "A1": preset_quiver("A1"),
    "A2": preset_quiver("A2"),
    "A3": preset_quiver("A3"),
    "A3rev": Quiver(3, ((0, 1), (2, 1)), name="A3rev"),
    "A4": preset_quiver("A4"),
    "D4": preset_quiver("D4"),
}


@pytest.fixture(scope="session")
def catalogs():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = build_catalog(QUIVERS[name], 2)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def contexts(catalogs):
    cache = {}

    def get(name):
        if name not in cache:
            cat = catalogs(name)
            cache[name] = (TorsionContext(cat), HeartContext(cat))
        return cache[name]

    return get


@pytest.fixture(scope="session")
def a2_named(catalogs):
    """The A2 catalog with its three indecomposables resolved by name."""
    cat = catalogs("A2")
    by_dims = {cat.indecs[i].dims: i for i in range(len(cat))}
    return cat, {"S1": by_dims[(1, 0)], "S2": by_dims[(0, 1)], "P1": by_dims[(1, 1)]}
