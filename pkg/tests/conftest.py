import numpy as np
import pytest

from fracspec import TransformContext, knn_graph, path_graph, random_planar_points


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(scope="session")
def small_ctx():
    """8-node spatial k-NN graph x 5-node temporal path."""
    g1 = knn_graph(random_planar_points(8, seed=3), 3)
    return TransformContext(g1, path_graph(5))


@pytest.fixture(scope="session")
def bench_ctx():
    """Desk-scale context matching the benchmark defaults (30 x 10)."""
    g1 = knn_graph(random_planar_points(30, seed=7), 4)
    return TransformContext(g1, path_graph(10))
