import itertools
import json
import random
from collections import Counter
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from d2dpda.constructions import ConstructionError, construct_general, construct_I, construct_II
from d2dpda.designs import Design, Resolution, design_from_code, grid_mcrd
from d2dpda.finite_field import GeneratorMatrix, rank_mod_p
from d2dpda.pda import STAR, derive_phi, format_symbol, phi_violations, pda_violations

from figures import TERNARY_G, PAIRS_GRID2, PAIRS_GRID3, PAIRS_TERNARY, OCCURRENCE_GRID3, OCCURRENCE_GRID4


def cells(a):
    return [["*" if e is STAR else format_symbol(e) for e in row] for row in a.entries]


def count_params(a):
    """(K, F, Z, S) counted straight from the grid."""
    F, K = a.shape
    Z = {sum(a[j, k] is STAR for j in range(F)) for k in range(K)}
    assert len(Z) == 1
    syms = {e for row in a.entries for e in row if e is not STAR}
    return K, F, Z.pop(), len(syms)


def hex_grid(n):
    """Grid MCRD whose 16 points are labelled 1-9 then a-g, as in the 4x4 golden array."""
    labels = "123456789abcdefg"[: n * n]
    g = grid_mcrd(n)
    return Resolution(Design(tuple(labels), g.design.blocks), g.classes)


def test_construction_I_n2_matches_golden():
    out = construct_I(grid_mcrd(2))
    assert cells(out.symbolic) == cells(PAIRS_GRID2)
    assert out.symbolic.col_labels == PAIRS_GRID2.col_labels


def test_construction_I_n3_matches_golden():
    out = construct_I(grid_mcrd(3))
    assert cells(out.symbolic) == cells(PAIRS_GRID3)
    assert out.params.tuple4 == (6, 9, 3, 18)


def test_construction_II_n3_matches_golden():
    out = construct_II(grid_mcrd(3))
    assert cells(out.symbolic) == cells(OCCURRENCE_GRID3)
    assert out.params.tuple4 == (9, 6, 2, 18)


def test_construction_II_n4_matches_golden():
    out = construct_II(hex_grid(4))
    assert cells(out.symbolic) == cells(OCCURRENCE_GRID4)
    assert out.params.tuple4 == (16, 8, 2, 48)


def test_general_on_ternary_code_differs_from_golden_only_in_row_3():
    out = construct_general(design_from_code(GeneratorMatrix.from_json(TERNARY_G)))
    got, printed = cells(out.symbolic), cells(PAIRS_TERNARY)
    diff = [(j, k) for j in range(9) for k in range(12) if got[j][k] != printed[j][k]]
    assert {j for j, _ in diff} == {3}
    assert [k for _, k in diff] == [4, 5, 6, 8, 9, 11]
    # every non-star cell of row 3 pairs point 3 with another point
    assert all("3" in c for c in got[3] if c != "*")
    assert pda_violations(PAIRS_TERNARY)
    assert out.params.tuple4 == (12, 9, 3, 36)


@pytest.mark.parametrize("n", range(2, 9))
def test_grid_parameters(n):
    one = construct_I(grid_mcrd(n))
    two = construct_II(grid_mcrd(n))
    assert count_params(one.array) == (2 * n, n * n, n, n * n * (n - 1))
    assert count_params(two.array) == (n * n, 2 * n, 2, n * n * (n - 1))
    assert one.params.tuple4 == count_params(one.array)
    assert two.params.tuple4 == count_params(two.array)


@pytest.mark.parametrize("n", range(2, 7))
def test_symbol_multiplicities_and_row_stars(n):
    one = construct_I(grid_mcrd(n)).array
    two = construct_II(grid_mcrd(n)).array
    # each pair symbol sits in two rows
    assert set(one.symbol_counts().values()) == {2}
    assert set(one.row_star_counts()) == {2}
    assert set(two.symbol_counts().values()) == {2}
    assert set(two.row_star_counts()) == {n}


@pytest.mark.parametrize("n", range(2, 7))
def test_explicit_and_derived_phi_satisfy_c4(n):
    for build in (construct_I, construct_II):
        out = build(grid_mcrd(n))
        a = out.array
        assert not phi_violations(a, out.dpda.phi)
        derived = derive_phi(a)
        assert None not in derived.values()
        assert not phi_violations(a, derived)


def test_construction_II_phi_is_point_column():
    out = construct_II(grid_mcrd(3))
    for (label, _), col in out.symbolic_phi.items():
        assert out.symbolic.col_labels[col] == label


def brute_mu2(res):
    sizes = {
        len(set(res.design.blocks[a]) & set(res.design.blocks[b]))
        for c1, c2 in itertools.combinations(res.classes, 2)
        for a in c1 for b in c2
    }
    return sizes.pop() if len(sizes) == 1 else None


@settings(max_examples=40, deadline=None)
@given(q=st.sampled_from([2, 3, 5]), n=st.integers(2, 5), seed=st.integers(0, 10**6))
def test_general_on_random_code_designs(q, n, seed):
    rng = random.Random(seed)
    rows = [[rng.randrange(q) for _ in range(n)] for _ in range(2)]
    if rank_mod_p(rows, q) < 2 or any(not (rows[0][i] or rows[1][i]) for i in range(n)):
        return
    res = design_from_code(GeneratorMatrix(q, rows))
    if brute_mu2(res) != 1:
        with pytest.raises(ConstructionError):
            construct_general(res)
        return
    out = construct_general(res)
    d = res.design
    assert count_params(out.array) == (d.b, d.v, q, comb(q, 2) * d.b)
    assert not pda_violations(out.array)
    assert not phi_violations(out.array, out.dpda.phi)


def test_general_rejects_non_crd():
    d = Design.from_labels("123456", ["12", "34", "56", "13", "25", "46", "14", "26", "35"])
    res = Resolution(d, ((0, 1, 2), (3, 4, 5), (6, 7, 8)))
    with pytest.raises(ConstructionError, match="mu_2"):
        construct_general(res)


def test_grid_constructions_reject_wrong_shapes():
    code = design_from_code(GeneratorMatrix.from_json(TERNARY_G))
    with pytest.raises(ConstructionError, match="2 parallel classes"):
        construct_I(code)
    with pytest.raises(ConstructionError):
        construct_II(grid_mcrd(3), n=4)
    single = Resolution(Design.from_labels("1234", ["12", "34"]), ((0, 1),))
    with pytest.raises(ConstructionError):
        construct_general(single)


def test_json_output_is_self_contained():
    out = construct_I(grid_mcrd(2))
    data = json.loads(out.dumps())
    assert data["construction"] == "I"
    assert data["params"]["R"] == "1"
    assert data["symbolic_entries"][0] == ["*", "13", "*", "12"]
    # symbol 13 sits in rows 1 and 3; only column 3 (block 13) stars both
    assert data["phi"] == {"1": 3, "2": 1, "3": 4, "4": 2}
    assert (data["rows"], data["cols"]) == (4, 4)
    assert Counter(len(r) for r in data["entries"]) == Counter({4: 4})
