"""Core data model: validation, edge extraction, products, maps, serialization."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degenforge import (
    DimensionTooLow,
    ParseError,
    SemisimplicialMap,
    SemisimplicialSet,
    SimplexRef,
    Subcomplex,
    first_edge,
    identity_map,
    last_edge,
    nerve,
    poset_category,
    product,
    simplex_category,
    validate,
    validate_map,
)


def test_delta2_validates(deltas):
    assert validate(deltas[2].sset).ok


def test_delta2_with_swapped_faces_reports_violation(deltas):
    X = deltas[2].sset
    faces = [[list(X.faces_of(n, j)) for j in range(X.cells[n])] for n in range(1, X.dim + 1)]
    row = faces[1][0]
    row[0], row[2] = row[2], row[0]
    broken = SemisimplicialSet(X.cells, faces)
    report = validate(broken)
    assert not report.ok
    assert ("face_commutation", 2, 0, 0, 2) in report.violations


def test_n2_nerve_validates_at_depth(n2):
    assert validate(n2.sset).ok


def test_out_of_range_reference_is_reported():
    X = SemisimplicialSet([1, 1], [[[0, 5]]])
    report = validate(X)
    assert not report.ok
    assert ("range", 1, 0, 1) in report.violations


def test_last_edge_of_edge_is_itself(n2):
    assert last_edge(n2.sset, SimplexRef(1, 1)) == SimplexRef(1, 1)
    assert first_edge(n2.sset, SimplexRef(1, 1)) == SimplexRef(1, 1)


def test_last_edge_of_gg_chain_is_g(n2):
    gg = n2.index_of(2, (1, 1))
    assert last_edge(n2.sset, SimplexRef(2, gg)) == SimplexRef(1, 1)


def test_first_edge_of_identity_then_g_is_identity(n2):
    chain = n2.index_of(2, (0, 1))
    assert first_edge(n2.sset, SimplexRef(2, chain)) == SimplexRef(1, 0)


def test_delta3_outer_edges():
    d3 = nerve(simplex_category(3), 3)
    top = SimplexRef(3, 0)
    # arrow names pin the vertices: last edge is 2<3, first edge 0<1
    assert d3.category.arrows[d3.chain(1, last_edge(d3.sset, top).index)[0]].name == "2<3"
    assert d3.category.arrows[d3.chain(1, first_edge(d3.sset, top).index)[0]].name == "0<1"


def test_edge_extraction_rejects_vertices(n2):
    with pytest.raises(DimensionTooLow):
        last_edge(n2.sset, SimplexRef(0, 0))
    with pytest.raises(DimensionTooLow):
        first_edge(n2.sset, SimplexRef(0, 0))


def test_product_counts_and_projections(n2, nj):
    bundle = product(n2.sset, nj.sset)
    assert bundle.sset.cells[1] == 2 * 4
    assert validate(bundle.sset).ok
    assert validate_map(bundle.left).ok
    assert validate_map(bundle.right).ok


def test_product_with_terminal_is_isomorphic(n2, terminal):
    bundle = product(n2.sset, terminal.sset)
    assert bundle.sset.cells == n2.sset.cells
    for n in range(1, bundle.sset.dim + 1):
        for j in range(bundle.sset.cells[n]):
            assert bundle.sset.faces_of(n, j) == n2.sset.faces_of(n, j)


def test_product_of_points(deltas):
    d0 = deltas[0].sset
    bundle = product(d0, d0)
    assert bundle.sset.cells == d0.cells


def test_identity_map_validates(n2):
    assert validate_map(identity_map(n2.sset)).ok


def test_collapsing_self_map_fails_at_level_two(n2):
    # send the edge g to the identity edge, keep everything else fixed
    levels = [list(range(c)) for c in n2.sset.cells]
    levels[1][1] = 0
    F = SemisimplicialMap(n2.sset, n2.sset, levels)
    report = validate_map(F)
    assert not report.ok
    assert all(v[1] >= 2 for v in report.violations)


def test_subcomplex_closure():
    d2 = nerve(simplex_category(2), 2)
    X = d2.sset
    # members: vertices 0,1 and the edge 0<1 (arrow index 0)
    A = Subcomplex(X, [{0, 1}, {0}])
    assert A.validate().ok
    bad = Subcomplex(X, [{0}, {0}])
    assert not bad.validate().ok


def test_sset_json_round_trip(nj):
    X = nj.sset
    data = json.loads(json.dumps(X.to_json_dict()))
    assert SemisimplicialSet.from_json_dict(data) == X
    assert SemisimplicialSet.from_json_dict(data).content_hash() == X.content_hash()


def test_sset_json_rejects_bad_shape():
    with pytest.raises(ParseError):
        SemisimplicialSet.from_json_dict({"dim": 1, "cells": [1], "faces": []})


def test_map_json_round_trip(n2, nj):
    bundle = product(n2.sset, nj.sset)
    data = json.loads(json.dumps(bundle.right.to_json_dict()))
    again = SemisimplicialMap.from_json_dict(data, bundle.sset, nj.sset)
    assert again == bundle.right


def test_subcomplex_json_round_trip(n2):
    A = Subcomplex(n2.sset, [{0}, {0}])
    data = json.loads(json.dumps(A.to_json_dict()))
    assert Subcomplex.from_json_dict(data, n2.sset) == A


# -- randomized structure ------------------------------------------------------


@st.composite
def preorders(draw):
    size = draw(st.integers(min_value=1, max_value=3))
    rel = [[i == j for j in range(size)] for i in range(size)]
    for i in range(size):
        for j in range(size):
            if i != j:
                rel[i][j] = draw(st.booleans())
    for k in range(size):
        for i in range(size):
            for j in range(size):
                rel[i][j] = rel[i][j] or (rel[i][k] and rel[k][j])
    return poset_category([str(i) for i in range(size)], lambda x, y: rel[x][y])


@settings(max_examples=30, deadline=None)
@given(preorders(), st.integers(min_value=1, max_value=4))
def test_preorder_nerves_validate(category, depth):
    bundle = nerve(category, depth)
    assert validate(bundle.sset).ok


@settings(max_examples=20, deadline=None)
@given(preorders(), preorders(), st.integers(min_value=1, max_value=3))
def test_product_preserves_validity(c1, c2, depth):
    a = nerve(c1, depth).sset
    b = nerve(c2, depth).sset
    bundle = product(a, b)
    assert validate(bundle.sset).ok
    assert validate_map(bundle.left).ok
    assert validate_map(bundle.right).ok
