"""Shared fixtures: nerve bundles of the standard categories plus naive oracles.

The oracles here are deliberately dumb (full scans, direct enumeration) so
that they stay independent of the code paths they check.
"""

from __future__ import annotations

import pytest

from degenforge import (
    SemisimplicialSet,
    cyclic_group,
    idempotent_monoid,
    j_groupoid,
    nerve,
    poset_01,
    product_category,
    simplex_category,
)


@pytest.fixture(scope="session")
def n2():
    return nerve(cyclic_group(2), 5)


@pytest.fixture(scope="session")
def n3():
    return nerve(cyclic_group(3), 5)


@pytest.fixture(scope="session")
def z2z2():
    return nerve(product_category(cyclic_group(2), cyclic_group(2)), 4)


@pytest.fixture(scope="session")
def nm():
    return nerve(idempotent_monoid(), 5)


@pytest.fixture(scope="session")
def np01():
    return nerve(poset_01(), 5)


@pytest.fixture(scope="session")
def nsq():
    return nerve(product_category(poset_01(), poset_01()), 5)


@pytest.fixture(scope="session")
def nj():
    return nerve(j_groupoid(), 5)


@pytest.fixture(scope="session")
def terminal():
    return nerve(cyclic_group(1), 5)


@pytest.fixture(scope="session")
def deltas():
    return {n: nerve(simplex_category(n), 4) for n in range(4)}


def naive_fillers(X: SemisimplicialSet, horn) -> list[int]:
    """Full scan over all candidate simplices; the reference for fillers()."""
    out = []
    for z in range(X.cells[horn.n]):
        if all(X.face_index(horn.n, z, i) == v for i, v in horn.items()):
            out.append(z)
    return out
