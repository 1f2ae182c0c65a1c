import os

import pytest

from quasiwitt.core.utils import constants
from quasiwitt.core.utils.serialization import DocumentReader, load_json

catalog_rings = (
    "f2",
    "f2_max",
    "f3",
    "f4",
    "f2xf2_exchange",
    "z4",
    "f2t2",
    "m2f2_transpose",
    "f3xm2f2",
    "f3xf3",
)


def catalog_path(*parts: str) -> str:
    return os.path.join(constants.catalog_folder, *parts)


@pytest.fixture(scope="session")
def reader() -> DocumentReader:
    """One reader for the whole session, so spaces over the same ring file share their UnitaryRing."""
    return DocumentReader()


@pytest.fixture(scope="session")
def load_ring(reader):
    def load(name: str):
        return reader.unitary_ring(catalog_path("rings", f"{name}.json"))

    return load


@pytest.fixture(scope="session")
def load_ring_parts(reader):
    def load(name: str):
        return reader.ring_parts(load_json(catalog_path("rings", f"{name}.json")))

    return load


@pytest.fixture(scope="session")
def load_space(reader):
    def load(name: str):
        return reader.space(catalog_path("spaces", f"{name}.json"))

    return load


@pytest.fixture(scope="session")
def load_summand(reader):
    def load(name: str, space):
        return reader.summand(catalog_path("maps", f"{name}.json"), space)

    return load


@pytest.fixture(scope="session")
def load_isometry(reader):
    def load(name: str, space):
        return reader.isometry(catalog_path("maps", f"{name}.json"), space.rank, space.rank, space.ring)

    return load


@pytest.fixture(scope="session")
def catalog():
    return catalog_path
