import numpy as np
import pytest

from bergspace import domains as dom
from bergspace import measures as mea


@pytest.fixture(scope="session")
def disk():
    return dom.unit_disk()


@pytest.fixture(scope="session")
def ball2():
    return dom.unit_ball(2)


@pytest.fixture(scope="session")
def bidisk():
    return dom.polydisk(2)


@pytest.fixture(scope="session")
def disk_rule(disk):
    return mea.build_quadrature(disk, 32)


@pytest.fixture(scope="session")
def disk_catalog(disk):
    return mea.catalog_measures(disk)


def interior_sample(domain, count, seed=0, margin=1e-2):
    """Euclidean-uniform interior points for spot checks."""
    from bergspace.sampling import sample_euclidean_interior

    return sample_euclidean_interior(domain, count, seed, 99, margin=margin)
