"""Synthesis engine: forced values, the two steps, full runs, verification, replay."""

import json

import pytest

from degenforge import (
    CertificateMismatch,
    ConsistencyViolation,
    DegeneracyTable,
    GoodSystem,
    IncompatibleSubcomplexStructure,
    NoIdempotentEquivalence,
    NotKan,
    SemisimplicialMap,
    SimplexRef,
    Subcomplex,
    SynthesisInput,
    TruncationExhausted,
    UnfillableHorn,
    addendum_s0,
    forced_value,
    nerve,
    product,
    replay_certificate,
    step1_extend,
    step2_correct,
    synthesize,
    synthesize_relative,
    verify_simplicial,
)
from degenforge.nerve import cyclic_group, j_groupoid


def fresh_system(X):
    return GoodSystem(DegeneracyTable(X), N=-1)


def base_input(bundle):
    return SynthesisInput(bundle.sset, s0={v: bundle.oracle_degeneracies.value(0, 0, v)
                                           for v in range(bundle.sset.cells[0])})


# -- forced values -------------------------------------------------------------


def test_forced_value_none_for_plain_simplex(n2):
    res = synthesize(SynthesisInput(n2.sset), 5)
    sys = GoodSystem(res.table, N=0)
    gg = SimplexRef(2, n2.index_of(2, (1, 1)))
    assert forced_value(sys, None, gg, 1) is None


def test_forced_value_agrees_across_representations(n2):
    X = n2.sset
    oracle = n2.oracle_degeneracies
    sys = GoodSystem(oracle, N=0)
    whole = Subcomplex(X, [set(range(c)) for c in X.cells])
    x = SimplexRef(2, n2.index_of(2, (0, 1)))  # the chain (1, g) = s_0(g)
    value = forced_value(sys, (whole, oracle), x, 1)
    assert value == SimplexRef(3, n2.index_of(3, (0, 0, 1)))


def test_forced_value_detects_corrupted_overlap(n2):
    X = n2.sset
    sys = GoodSystem(n2.oracle_degeneracies, N=0)
    whole = Subcomplex(X, [set(range(c)) for c in X.cells])
    corrupt = n2.oracle_degeneracies.copy()
    x_index = n2.index_of(2, (0, 1))
    corrupt.set_value(1, 2, x_index, n2.index_of(3, (1, 1, 1)))
    with pytest.raises(ConsistencyViolation):
        forced_value(sys, (whole, corrupt), SimplexRef(2, x_index), 1)


# -- the two steps -------------------------------------------------------------


def test_step1_base_stage_on_group_nerve(n2):
    inp = base_input(n2)
    almost = step1_extend(fresh_system(n2.sset), inp, 5)
    assert almost.status == "almost-0-good"
    # s_0(g) fills the (2,1) horn with faces g and the identity chain
    assert almost.table.value(0, 1, 1) == n2.index_of(2, (0, 1))


def test_step2_corrects_stage_zero(n2):
    inp = base_input(n2)
    good = step2_correct(step1_extend(fresh_system(n2.sset), inp, 5), inp, 5)
    assert good.status == "0-good"
    # the vertex correction table is the double identity chain
    assert good.t_table.t[0][0] == n2.index_of(2, (0, 0))
    # sigma_0(vertex) is the identity edge, sigma_0(g) the chain (1, g)
    assert good.table.value(0, 0, 0) == 0
    assert good.table.value(0, 1, 1) == n2.index_of(2, (0, 1))
    # correction horn at the edge g had the unique filler (1, 1, g)
    assert good.t_table.t[1][1] == n2.index_of(3, (0, 0, 1))


def test_step1_second_stage_value(n2):
    inp = base_input(n2)
    good0 = step2_correct(step1_extend(fresh_system(n2.sset), inp, 5), inp, 5)
    almost1 = step1_extend(good0, inp, 5)
    gg = n2.index_of(2, (1, 1))
    assert almost1.table.value(1, 2, gg) == n2.index_of(3, (1, 0, 1))


def test_step2_on_monoid_vertex(nm):
    inp = base_input(nm)
    good = step2_correct(step1_extend(fresh_system(nm.sset), inp, 5), inp, 5)
    assert good.t_table.t[0][0] == nm.index_of(2, (0, 0))


def test_step1_with_doctored_s0_hits_unfillable_horn(deltas):
    d1 = deltas[1].sset
    inp = SynthesisInput(d1, s0={0: 0, 1: 0})
    with pytest.raises(UnfillableHorn):
        step1_extend(fresh_system(d1), inp, 4)


def test_step1_truncation_guard(n2):
    sys = fresh_system(n2.sset)
    with pytest.raises(TruncationExhausted):
        step1_extend(sys, base_input(n2), 0)


def test_correction_table_forces_double_degeneracies(n2):
    # on degeneracy images the stage-1 correction candidate is the double
    # application of the uncorrected stage-1 operator
    inp = base_input(n2)
    good0 = step2_correct(step1_extend(fresh_system(n2.sset), inp, 5), inp, 5)
    almost1 = step1_extend(good0, inp, 5)
    recorded = {}
    for y in range(n2.sset.cells[1]):
        x = good0.table.value(0, 1, y)  # s_0(y), a degenerate 2-simplex
        once = almost1.table.value(1, 2, x)
        recorded[x] = almost1.table.value(1, 3, once)
    good1 = step2_correct(almost1, inp, 5)
    for x, expected in recorded.items():
        assert good1.t_table.t[2][x] == expected


# -- full synthesis ------------------------------------------------------------


@pytest.mark.parametrize("fixture", ["n2", "n3", "nm", "np01", "nsq"])
def test_synthesis_matches_identity_insertion_oracle(fixture, request):
    bundle = request.getfixturevalue(fixture)
    result = synthesize(SynthesisInput(bundle.sset), 5)
    for k, n, j, value in result.table.entries():
        assert bundle.oracle_degeneracies.value(k, n, j) == value
    # the verified range covers exactly 0 <= k <= n <= 3
    levels = sorted(result.table.domain())
    assert all(k <= n <= 3 for k, n in levels)
    assert result.verification.ok


def test_synthesis_rejects_simplices_without_idempotent_equivalence(deltas):
    for n in range(1, 4):
        with pytest.raises(NoIdempotentEquivalence) as err:
            synthesize(SynthesisInput(deltas[n].sset), 4)
        assert err.value.vertex == 0


def test_synthesis_on_monoid_auto_picks_identity(nm):
    result = synthesize(SynthesisInput(nm.sset), 4)
    assert result.s0 == {0: 0}


def test_synthesis_consistency_checks_fire_but_agree(n2, n3, nm, np01, nsq):
    for bundle in (n2, n3, nm, np01, nsq):
        result = synthesize(SynthesisInput(bundle.sset), 5)
        assert result.stats["consistency_checks"] > 0


def test_supplied_s0_is_validated(n2):
    with pytest.raises(NoIdempotentEquivalence):
        synthesize(SynthesisInput(n2.sset, s0={0: 1}), 5)  # g is not idempotent


# -- verification --------------------------------------------------------------


def test_verify_oracle_tables(nm, nj):
    for bundle in (nm, nj):
        report = verify_simplicial(bundle.sset, bundle.oracle_degeneracies, bundle.sset.dim)
        assert report.ok
        assert report.checked > 0


def test_verify_catches_swapped_degeneracies(n2):
    broken = n2.oracle_degeneracies.copy()
    s0g = broken.value(0, 1, 1)
    s1g = broken.value(1, 1, 1)
    broken.set_value(0, 1, 1, s1g)
    broken.set_value(1, 1, 1, s0g)
    report = verify_simplicial(n2.sset, broken, 5)
    assert not report.ok
    assert any(v[0] == "face_degeneracy" for v in report.violations)


# -- the automatic degree-0 candidate -------------------------------------------


def test_addendum_on_group_nerves(n2, n3):
    for bundle in (n2, n3):
        found = addendum_s0(bundle.sset, 4)
        identity_edge = bundle.oracle_degeneracies.value(0, 0, 0)
        assert found.s0 == {0: identity_edge}
        for v, w in found.witnesses.items():
            assert all(bundle.sset.face_index(2, w, i) == found.s0[v] for i in range(3))


def test_addendum_rejects_non_kan(nm):
    with pytest.raises(NotKan):
        addendum_s0(nm.sset, 3)


def test_addendum_needs_three_levels(n2):
    with pytest.raises(TruncationExhausted):
        addendum_s0(n2.sset, 2)


def test_addendum_feeds_synthesis(nj):
    found = addendum_s0(nj.sset, 4)
    result = synthesize(SynthesisInput(nj.sset, s0=found.s0,
                                       idempotency_witnesses=found.witnesses), 4)
    for k, n, j, value in result.table.entries():
        assert nj.oracle_degeneracies.value(k, n, j) == value


# -- relative synthesis ----------------------------------------------------------


def test_relative_over_terminal_equals_absolute(nm, terminal):
    X = nm.sset
    to_point = SemisimplicialMap(X, terminal.sset, [[0] * c for c in X.cells])
    relative = synthesize_relative(
        SynthesisInput(X, mode="relative", p=to_point, Y_deg=terminal.oracle_degeneracies), 4)
    absolute = synthesize(SynthesisInput(X), 4)
    assert relative.table == absolute.table


def _relative_product_input(n2, nj, depth):
    bundle = product(n2.sset, nj.sset)
    constant = [(0, 1)] + [(nj.index_of(n, (0,) * n), nj.index_of(n, (1,) * n))
                           for n in range(1, depth + 1)]
    members = []
    for n in range(depth + 1):
        level = set()
        for c in range(n2.sset.cells[n]):
            level.add(bundle.pair_index(n, c, constant[n][0]))
            level.add(bundle.pair_index(n, c, constant[n][1]))
        members.append(level)
    A = Subcomplex(bundle.sset, members)
    A_deg = DegeneracyTable(bundle.sset)
    for side in (0, 1):
        for k, n, c, v in n2.oracle_degeneracies.entries():
            if n >= depth:
                continue
            A_deg.set_value(k, n, bundle.pair_index(n, c, constant[n][side]),
                            bundle.pair_index(n + 1, v, constant[n + 1][side]))
    s0 = {}
    for side in (0, 1):
        s0[bundle.pair_index(0, 0, constant[0][side])] = bundle.pair_index(1, 0, constant[1][side])
    inp = SynthesisInput(bundle.sset, mode="relative", p=bundle.right,
                         Y_deg=nj.oracle_degeneracies, A=A, A_deg=A_deg, s0=s0)
    return bundle, inp


def test_relative_product_restricts_to_subcomplex(n2, nj):
    bundle, inp = _relative_product_input(n2, nj, 4)
    result = synthesize_relative(inp, 4)
    assert result.verification.ok
    # output is the coordinatewise identity insertion
    for k, n, j, value in result.table.entries():
        c, e = bundle.split_index(n, j)
        expected = bundle.pair_index(
            n + 1, n2.oracle_degeneracies.value(k, n, c), nj.oracle_degeneracies.value(k, n, e))
        assert value == expected


def test_relative_detects_corrupted_subcomplex_table(n2, nj):
    bundle, inp = _relative_product_input(n2, nj, 4)
    # replace s_1 at the degenerate member ((1,g), const0) with a wrong member value
    x = bundle.pair_index(2, n2.index_of(2, (0, 1)), nj.index_of(2, (0, 0)))
    wrong = bundle.pair_index(3, n2.index_of(3, (1, 1, 1)), nj.index_of(3, (0, 0, 0)))
    inp.A_deg.set_value(1, 2, x, wrong)
    with pytest.raises((ConsistencyViolation, IncompatibleSubcomplexStructure)):
        synthesize_relative(inp, 4)


# -- certificates ----------------------------------------------------------------


def test_certificate_replay_bit_for_bit(n2):
    result = synthesize(SynthesisInput(n2.sset), 5)
    records = json.loads(json.dumps(result.certificate))
    replayed = replay_certificate(SynthesisInput(n2.sset), 5, records)
    assert replayed == result.table


def test_certificate_replay_rejects_tampering(n2):
    result = synthesize(SynthesisInput(n2.sset), 5)
    records = json.loads(json.dumps(result.certificate))
    records[10]["value"] += 1
    with pytest.raises(CertificateMismatch):
        replay_certificate(SynthesisInput(n2.sset), 5, records)
    with pytest.raises(CertificateMismatch):
        replay_certificate(SynthesisInput(n2.sset), 5, result.certificate[:-1])


def test_relative_certificate_replays(n2, nj):
    _, inp = _relative_product_input(n2, nj, 4)
    result = synthesize_relative(inp, 4)
    replayed = replay_certificate(inp, 4, json.loads(json.dumps(result.certificate)))
    assert replayed == result.table


def test_certificate_records_have_the_documented_shape(n2):
    result = synthesize(SynthesisInput(n2.sset), 4)
    kinds = {record["kind"] for record in result.certificate}
    assert kinds == {"forced", "filled", "witness"}
    for record in result.certificate:
        assert set(record) <= {"stage", "simplex", "kind", "value", "horn"}
        assert record["stage"]["step"] in (1, 2)
        if record["kind"] == "filled":
            assert "horn" in record
