import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gendermi.errors import DegenerateNormalizer, EmptyTable, NotNormalized
from gendermi.infostats import (NORMALIZERS, ContingencyTable, Normalizer, entropy, marginal_entropies,
                                mutual_information, nmi, nmi_report)

from oracles import naive_entropy, naive_mi

# golden value, confirmed independently as 1 - H(0.8, 0.2)
MI_41_14 = 1.0 - naive_entropy([0.8, 0.2])


def test_golden_value_agrees_with_double_loop():
    assert MI_41_14 == pytest.approx(0.2780719051126377, abs=1e-15)
    assert naive_mi([[4, 1], [1, 4]]) == pytest.approx(MI_41_14, abs=1e-15)


@pytest.mark.parametrize("p, h", [([0.25] * 4, 2.0), ([1, 0, 0], 0.0), ([0.5, 0.25, 0.25], 1.5)])
def test_entropy_examples(p, h):
    assert entropy(p) == pytest.approx(h, abs=1e-12)


def test_entropy_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        entropy([0.5, 0.6])
    with pytest.raises(NotNormalized):
        entropy([1.5, -0.5])


@pytest.mark.parametrize("table, mi", [([[4, 4], [1, 1]], 0.0), ([[5, 0], [0, 5]], 1.0), ([[4, 1], [1, 4]], MI_41_14)])
def test_mi_examples(table, mi):
    assert mutual_information(table) == pytest.approx(mi, abs=1e-12)


def test_nmi_examples():
    t = [[5, 0], [0, 5]]
    assert nmi(t, Normalizer.MIN_H) == pytest.approx(1.0, abs=1e-12)
    assert nmi(t, "LogM") == pytest.approx(1 / math.log2(10), abs=1e-12)
    for norm in NORMALIZERS:
        assert nmi([[4, 4], [1, 1]], norm) == 0.0


def test_report_examples():
    r = nmi_report([[5, 0], [0, 5]])
    for norm in (Normalizer.MIN_H, Normalizer.GEOM_MEAN_H, Normalizer.ARITH_MEAN_H, Normalizer.MAX_H):
        assert r.values[norm] == pytest.approx(1.0, abs=1e-12)
    assert all(v == 0.0 for v in nmi_report([[2, 4], [3, 6]]).values.values())

    r = nmi_report([[4, 1], [1, 4]])
    h = naive_entropy([0.5, 0.5])
    denominators = {
        Normalizer.MIN_H: h, Normalizer.GEOM_MEAN_H: h, Normalizer.ARITH_MEAN_H: h, Normalizer.MAX_H: h,
        Normalizer.MAX_LOG_CARD: 1.0, Normalizer.LOG_M: math.log2(10),
    }
    for norm, d in denominators.items():
        assert r.values[norm] == pytest.approx(MI_41_14 / d, abs=1e-12)
    assert r.to_dict()["mi_bits"] == r.mi


def test_single_gender_is_undefined_not_zero():
    t = ContingencyTable.from_counts([[3, 2, 5]])
    with pytest.raises(DegenerateNormalizer):
        nmi(t, Normalizer.MIN_H)
    r = nmi_report(t)
    assert set(r.undefined) == {Normalizer.MIN_H, Normalizer.GEOM_MEAN_H}
    assert r.values[Normalizer.MAX_H] == 0.0
    assert r.to_dict()["nmi"]["MinH"] == "undefined"


def test_single_cell_table():
    r = nmi_report([[7]])
    assert r.mi == 0.0
    assert r.undefined == list(NORMALIZERS)[:5]
    assert r.values[Normalizer.LOG_M] == 0.0
    with pytest.raises(DegenerateNormalizer):
        nmi([[1]], Normalizer.LOG_M)


def test_table_construction():
    t = ContingencyTable.from_counts([[1, 0, 2], [0, 0, 0]], ["Masc", "Fem"], ["a", "b", "c"])
    assert t.row_labels == ("Masc",) and t.col_labels == ("a", "c")
    assert t.stripped == {"rows": ["Fem"], "cols": ["b"]}
    assert t.total == 3
    with pytest.raises(ValueError):
        ContingencyTable(("x",), ("a", "b"), np.array([[1, 0]]))
    with pytest.raises(ValueError):
        ContingencyTable.from_counts([[-1, 2]])
    with pytest.raises(EmptyTable):
        mutual_information(ContingencyTable.from_counts(np.zeros((2, 2), dtype=int)))
    assert not t.counts.flags.writeable


tables = st.tuples(st.integers(1, 3), st.integers(1, 40)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(0, 1000))).filter(lambda a: a.sum() > 0)


@settings(max_examples=300, deadline=None)
@given(tables)
def test_properties(counts):
    t = ContingencyTable.from_counts(counts)
    mi = mutual_information(t)
    h_row, h_col = marginal_entropies(t)
    assert mi == pytest.approx(naive_mi(t.counts.tolist()), abs=1e-12)
    assert 0.0 <= mi <= min(h_row, h_col) + 1e-9
    assert mi == mutual_information(t.transpose())
    r = nmi_report(t)
    for norm, v in r.values.items():
        assert v is None or 0.0 <= v <= 1.0
    chain = [r.values[n] for n in NORMALIZERS[:4]]
    if None not in chain:
        assert chain[0] >= chain[1] >= chain[2] >= chain[3]


@settings(max_examples=200, deadline=None)
@given(tables, st.data())
def test_merging_identical_columns(counts, data):
    t = ContingencyTable.from_counts(counts)
    j = data.draw(st.integers(0, t.shape[1] - 1))
    doubled = np.concatenate([t.counts, t.counts[:, [j]]], axis=1)
    merged = t.counts.copy()
    merged[:, j] *= 2
    # adding a duplicate column and merging it back into its twin restores the table
    assert mutual_information(merged) == pytest.approx(mutual_information(doubled), abs=1e-12)
