import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfrank.errors import CountDataWarning, ParseError, StructuralError
from bfrank.ingest import (
    CountMatrix,
    bind,
    format_count_matrix,
    merge_count_matrices,
    parse_count_matrix,
    parse_sample_sheet,
)


def test_minimal_matrix():
    m = parse_count_matrix(b"gene_id,s1,s2\ng1,5,7\n")
    assert m.gene_ids == ("g1",) and m.sample_ids == ("s1", "s2")
    np.testing.assert_array_equal(m.counts, [[5, 7]])
    np.testing.assert_array_equal(m.totals, [5, 7])


def test_tab_is_detected():
    m = parse_count_matrix("gene_id\ts1\ts2\ng1\t1\t2\ng2\t3\t4\n")
    np.testing.assert_array_equal(m.totals, [4, 6])


def test_explicit_delimiter_overrides_detection():
    m = parse_count_matrix("gene_id;s1\ng1;9\n", delimiter=";")
    assert m.counts[0, 0] == 9


def test_header_only_warns():
    with pytest.warns(CountDataWarning, match="no genes"):
        m = parse_count_matrix("gene_id,s1,s2\n")
    assert m.counts.shape == (0, 2)
    np.testing.assert_array_equal(m.totals, [0, 0])


def test_negative_count_names_the_cell():
    with pytest.raises(ParseError) as err:
        parse_count_matrix("gene_id,s1,s2\ng1,4,-3\n")
    assert err.value.line == 2 and err.value.column == 3
    assert "-3" in str(err.value)


@pytest.mark.parametrize("cell", ["1.5", "abc", "", "1e3"])
def test_non_integer_count(cell):
    with pytest.raises(ParseError):
        parse_count_matrix(f"gene_id,s1,s2\ng1,4,{cell}\n")


def test_ragged_row():
    with pytest.raises(ParseError, match="expected 3 fields"):
        parse_count_matrix("gene_id,s1,s2\ng1,4\n")


def test_duplicate_gene():
    with pytest.raises(StructuralError, match="duplicate gene"):
        parse_count_matrix("gene_id,s1\ng1,1\ng1,2\n")


def test_duplicate_sample():
    with pytest.raises(StructuralError, match="duplicate sample"):
        parse_count_matrix("gene_id,s1,s1\ng1,1,2\n")


def test_overflowing_cell_rejected():
    with pytest.raises(ParseError, match="2\\^63"):
        parse_count_matrix(f"gene_id,s1\ng1,{2**63}\n")


def test_overflowing_total_rejected():
    big = 2**62
    with pytest.raises(StructuralError, match="overflow"):
        parse_count_matrix(f"gene_id,s1\ng1,{big}\ng2,{big}\n")


def test_zero_sample_warns():
    with pytest.warns(CountDataWarning, match="no reads"):
        parse_count_matrix("gene_id,s1,s2\ng1,0,3\n")


def test_missing_header():
    with pytest.raises(ParseError):
        parse_count_matrix("")


@st.composite
def matrices(draw):
    s = draw(st.integers(1, 5))
    rows = draw(st.lists(st.lists(st.integers(0, 10**12), min_size=s, max_size=s), max_size=6))
    counts = np.array(rows, dtype=np.int64).reshape(len(rows), s)
    return CountMatrix([f"gene{i}" for i in range(len(rows))], [f"s{j}" for j in range(s)], counts)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.sampled_from(["\t", ","]))
def test_round_trip(m, delimiter):
    text = format_count_matrix(m, delimiter)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CountDataWarning)
        again = parse_count_matrix(text.encode())
    assert again == m
    np.testing.assert_array_equal(again.totals, m.counts.sum(axis=0))


def test_merge_requires_identical_genes():
    a = CountMatrix(["g1", "g2"], ["s1"], [[1], [2]])
    b = CountMatrix(["g1", "g2"], ["s2"], [[3], [4]])
    merged = merge_count_matrices([a, b])
    assert merged.sample_ids == ("s1", "s2")
    c = CountMatrix(["g2", "g1"], ["s3"], [[3], [4]])
    with pytest.raises(StructuralError):
        merge_count_matrices([a, c])


class TestSampleSheet:
    def test_two_conditions(self):
        sheet = parse_sample_sheet("s1,ctrl\ns2,treat\n")
        assert sheet.assignments == {"s1": "ctrl", "s2": "treat"}
        assert sheet.conditions == ("ctrl", "treat")

    def test_header_detected(self):
        sheet = parse_sample_sheet("sample_id\tcondition_id\ns1\tb\ns2\ta\n")
        assert sheet.conditions == ("a", "b")

    def test_three_conditions(self):
        with pytest.raises(StructuralError, match="exactly two conditions required"):
            parse_sample_sheet("s1,a\ns2,b\ns3,c\n")

    def test_one_condition(self):
        with pytest.raises(StructuralError, match="exactly two conditions required"):
            parse_sample_sheet("s1,a\ns2,a\n")

    def test_conflicting_assignment(self):
        with pytest.raises(StructuralError, match="s1"):
            parse_sample_sheet("s1,a\ns2,b\ns1,b\n")

    def test_bad_row(self):
        with pytest.raises(ParseError):
            parse_sample_sheet("s1,a,extra\ns2,b\n")


class TestBind:
    matrix = CountMatrix(["g1", "g2"], ["t1", "c1", "t2", "c2"], [[1, 2, 3, 4], [5, 6, 7, 8]])

    def test_partition_and_order(self):
        sheet = parse_sample_sheet("t1,treat\nc1,ctrl\nt2,treat\nc2,ctrl\n")
        g1, g2 = bind(self.matrix, sheet)
        assert (g1.condition_id, g2.condition_id) == ("ctrl", "treat")
        assert g1.sample_ids == ("c1", "c2") and g2.sample_ids == ("t1", "t2")
        np.testing.assert_array_equal(g1.counts, [[2, 4], [6, 8]])
        assert sorted(g1.sample_ids + g2.sample_ids) == sorted(self.matrix.sample_ids)

    def test_single_replicates(self):
        m = parse_count_matrix("gene_id,s1,s2\ng1,5,7\n")
        g1, g2 = bind(m, parse_sample_sheet("s1,a\ns2,b\n"))
        assert len(g1.sample_ids) == len(g2.sample_ids) == 1

    def test_twelve_replicates_each(self):
        ids = [f"s{i}" for i in range(24)]
        m = CountMatrix(["g"], ids, [list(range(24))])
        sheet = parse_sample_sheet("".join(f"{s},{'a' if i < 12 else 'b'}\n" for i, s in enumerate(ids)))
        g1, g2 = bind(m, sheet)
        assert len(g1.sample_ids) == len(g2.sample_ids) == 12

    def test_unknown_sample_in_sheet(self):
        sheet = parse_sample_sheet("t1,treat\nc1,ctrl\nt2,treat\nc2,ctrl\nzz,ctrl\n")
        with pytest.raises(StructuralError, match="zz"):
            bind(self.matrix, sheet)

    def test_strict_vs_lenient(self):
        sheet = parse_sample_sheet("t1,treat\nc1,ctrl\n")
        with pytest.raises(StructuralError, match="missing"):
            bind(self.matrix, sheet)
        with pytest.warns(CountDataWarning, match="excluded"):
            g1, g2 = bind(self.matrix, sheet, strict=False)
        assert g1.sample_ids == ("c1",) and g2.sample_ids == ("t1",)
