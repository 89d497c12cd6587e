import logging

import pytest

from momkit.corpus import four_valent_graphs, load_triangulation


@pytest.fixture(autouse=True)
def _quiet_search_fallback():
    # the simplifier logs every time it falls back to bounded search
    logging.getLogger("momkit").setLevel(logging.ERROR)
    yield


@pytest.fixture(scope="session")
def fig8():
    return load_triangulation("fig8.tri")


@pytest.fixture(scope="session")
def corpus():
    return four_valent_graphs(3)
