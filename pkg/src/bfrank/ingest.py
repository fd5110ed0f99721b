"""Readers and writers for count matrices and sample sheets.

Count matrix: a header row ``gene_id<d>sample1<d>...`` followed by one row per
gene of non-negative integer counts. Library sizes are always the column sums.

Sample sheet: rows ``sample_id<d>condition_id``; a first row whose first field
is literally ``sample_id`` is treated as a header. Exactly two conditions.

Delimiters are detected from the first line (tab if present, else comma)
unless given explicitly.
"""

import csv
import io
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CountDataWarning, ParseError, StructuralError
from .replicates import ConditionGroup

INT64_MAX = 2**63 - 1


def _text(source):
    """Decode bytes, text, a path, or a readable file object into a str."""
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    if isinstance(source, os.PathLike):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def detect_delimiter(first_line):
    return "\t" if "\t" in first_line else ","


def _rows(text, delimiter):
    lines = text.splitlines()
    if delimiter is None:
        first = next((ln for ln in lines if ln.strip()), "")
        delimiter = detect_delimiter(first)
    out = []
    for lineno, fields in enumerate(csv.reader(lines, delimiter=delimiter), start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        out.append((lineno, [f.strip() for f in fields]))
    return out, delimiter


@dataclass(frozen=True)
class CountMatrix:
    gene_ids: tuple
    sample_ids: tuple
    counts: np.ndarray  # int64, genes x samples

    def __post_init__(self):
        object.__setattr__(self, "gene_ids", tuple(self.gene_ids))
        object.__setattr__(self, "sample_ids", tuple(self.sample_ids))
        counts = np.asarray(self.counts, dtype=np.int64).reshape(len(self.gene_ids), len(self.sample_ids))
        _check_unique(self.gene_ids, "gene")
        _check_unique(self.sample_ids, "sample")
        if np.any(counts < 0):
            raise StructuralError("counts must be non-negative")
        for j, s in enumerate(self.sample_ids):
            if sum(int(v) for v in counts[:, j]) > INT64_MAX:
                raise StructuralError(f"total reads of sample {s!r} overflow 64-bit integers")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def totals(self):
        return self.counts.sum(axis=0)

    def column(self, sample_id):
        return self.counts[:, self.sample_ids.index(sample_id)]

    def __eq__(self, other):
        if not isinstance(other, CountMatrix):
            return NotImplemented
        return (
            self.gene_ids == other.gene_ids
            and self.sample_ids == other.sample_ids
            and np.array_equal(self.counts, other.counts)
        )

    __hash__ = None


def _check_unique(ids, kind):
    seen = set()
    for x in ids:
        if x in seen:
            raise StructuralError(f"duplicate {kind} id {x!r}")
        seen.add(x)


def _parse_count(cell, lineno, col):
    try:
        value = int(cell)
    except ValueError:
        raise ParseError(f"count {cell!r} is not an integer", lineno, col) from None
    if value < 0:
        raise ParseError(f"count {cell!r} is negative", lineno, col)
    if value > INT64_MAX:
        raise ParseError(f"count {cell!r} exceeds 2^63-1", lineno, col)
    return value


def parse_count_matrix(source, delimiter=None):
    """Parse a delimited gene x sample count table into a ``CountMatrix``."""
    rows, delimiter = _rows(_text(source), delimiter)
    if not rows:
        raise ParseError("empty count matrix: header row missing")
    header_line, header = rows[0]
    sample_ids = header[1:]
    if not sample_ids:
        raise ParseError("header has no sample columns", header_line)
    if any(not s for s in sample_ids):
        raise ParseError("empty sample id in header", header_line)
    _check_unique(sample_ids, "sample")

    gene_ids, values = [], []
    width = len(header)
    for lineno, fields in rows[1:]:
        if len(fields) != width:
            raise ParseError(f"expected {width} fields, found {len(fields)}", lineno)
        gene_ids.append(fields[0])
        values.append([_parse_count(c, lineno, j + 2) for j, c in enumerate(fields[1:])])
    _check_unique(gene_ids, "gene")
    if not gene_ids:
        warnings.warn("count matrix has no genes", CountDataWarning, stacklevel=2)

    counts = np.array(values, dtype=np.int64).reshape(len(gene_ids), len(sample_ids))
    matrix = CountMatrix(gene_ids, sample_ids, counts)
    for s, total in zip(sample_ids, matrix.totals):
        if total == 0 and gene_ids:
            warnings.warn(f"sample {s!r} has no reads", CountDataWarning, stacklevel=2)
    return matrix


def read_count_matrix(path, delimiter=None):
    with open(path, "rb") as fh:
        return parse_count_matrix(fh.read(), delimiter)


def format_count_matrix(matrix, delimiter="\t", header="gene_id"):
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow([header, *matrix.sample_ids])
    for g, row in zip(matrix.gene_ids, matrix.counts):
        w.writerow([g, *(int(v) for v in row)])
    return buf.getvalue()


def merge_count_matrices(matrices):
    """Column-bind matrices that share an identical, identically ordered gene list."""
    first = matrices[0]
    for m in matrices[1:]:
        if m.gene_ids != first.gene_ids:
            raise StructuralError("count matrices do not share an identical gene id list")
    return CountMatrix(
        first.gene_ids,
        tuple(s for m in matrices for s in m.sample_ids),
        np.hstack([m.counts for m in matrices]),
    )


@dataclass(frozen=True)
class SampleSheet:
    assignments: dict  # sample_id -> condition_id, in file order

    def __post_init__(self):
        conditions = set(self.assignments.values())
        if len(conditions) != 2:
            raise StructuralError(f"exactly two conditions required, found {len(conditions)}")

    @property
    def conditions(self):
        """The two condition ids in lexicographic order."""
        return tuple(sorted(set(self.assignments.values())))


def parse_sample_sheet(source, delimiter=None):
    rows, _ = _rows(_text(source), delimiter)
    if rows and rows[0][1][0] == "sample_id":
        rows = rows[1:]
    assignments = {}
    for lineno, fields in rows:
        if len(fields) != 2 or not all(fields):
            raise ParseError("expected 'sample_id<delim>condition_id'", lineno)
        sample, condition = fields
        if assignments.get(sample, condition) != condition:
            raise StructuralError(
                f"sample {sample!r} assigned to both {assignments[sample]!r} and {condition!r}"
            )
        assignments[sample] = condition
    return SampleSheet(assignments)


def read_sample_sheet(path, delimiter=None):
    with open(path, "rb") as fh:
        return parse_sample_sheet(fh.read(), delimiter)


def format_sample_sheet(sheet, delimiter="\t"):
    lines = [f"sample_id{delimiter}condition_id"]
    lines += [f"{s}{delimiter}{c}" for s, c in sheet.assignments.items()]
    return "\n".join(lines) + "\n"


def bind(matrix, sheet, strict=True):
    """Split matrix columns into the two condition groups.

    Condition 1 is the lexicographically smaller condition id. Within a group,
    replicates keep their matrix column order.
    """
    unknown = [s for s in sheet.assignments if s not in matrix.sample_ids]
    if unknown:
        raise StructuralError(f"sample sheet references samples not in the matrix: {', '.join(unknown)}")
    unassigned = [s for s in matrix.sample_ids if s not in sheet.assignments]
    if unassigned:
        msg = f"matrix samples missing from the sample sheet: {', '.join(unassigned)}"
        if strict:
            raise StructuralError(msg)
        warnings.warn(msg + " (excluded)", CountDataWarning, stacklevel=2)

    groups = []
    for cond in sheet.conditions:
        cols = [j for j, s in enumerate(matrix.sample_ids) if sheet.assignments.get(s) == cond]
        groups.append(
            ConditionGroup(
                condition_id=cond,
                sample_ids=tuple(matrix.sample_ids[j] for j in cols),
                gene_ids=matrix.gene_ids,
                counts=matrix.counts[:, cols],
            )
        )
    return groups[0], groups[1]
