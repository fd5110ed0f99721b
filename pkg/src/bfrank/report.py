"""Ranked result tables, curve sweeps, and their delimited text formats."""

import dataclasses
import io
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CountDataWarning, DomainError, ParseError, StructuralError
from .ingest import _rows, _text
from .model import (
    FLAT_PRIOR,
    GeneResult,
    SampleCounts,
    inferred_log2_fc,
    log10_bayes_factor,
    point_estimate_q,
)

RESULT_COLUMNS = (
    "gene_id", "n1", "N1", "n2", "N2", "log10_bf", "ifc", "q1_hat", "q2_hat", "replicate_flag", "rank",
)
CURVE_COLUMNS = ("x", "log10_bf", "ifc", "n1", "N1", "n2", "N2")

# Default sweep depth: 8e6 reads per replicate times 12 replicates.
DEFAULT_SWEEP_TOTAL = 8_000_000 * 12


def format_real(x):
    """Six decimals in fixed notation, scientific below 1e-4 in magnitude."""
    x = float(x)
    if x == 0.0:
        return "0.000000"  # also folds -0.0
    if abs(x) < 1e-4:
        return f"{x:.6e}"
    return f"{x:.6f}"


@dataclass(frozen=True)
class RankedTable:
    rows: tuple

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def top(self):
        return self.rows[0] if self.rows else None


def rank_genes(results):
    """Order by log10 BF descending, ties by gene id; ranks are 1..n."""
    seen = set()
    for r in results:
        if r.gene_id in seen:
            raise StructuralError(f"duplicate gene id {r.gene_id!r}")
        seen.add(r.gene_id)
    ordered = sorted(results, key=lambda r: (-r.log10_bf, r.gene_id))
    return RankedTable(tuple(dataclasses.replace(r, rank=i) for i, r in enumerate(ordered, start=1)))


def format_results(table):
    buf = io.StringIO()
    buf.write("\t".join(RESULT_COLUMNS) + "\n")
    for r in table:
        fields = (
            r.gene_id,
            str(r.n1), str(r.N1), str(r.n2), str(r.N2),
            format_real(r.log10_bf), format_real(r.ifc),
            format_real(r.q1_hat), format_real(r.q2_hat),
            "true" if r.replicate_flag else "false",
            str(r.rank),
        )
        buf.write("\t".join(fields) + "\n")
    return buf.getvalue()


def parse_results(source):
    """Read a table written by ``format_results`` back into ``GeneResult`` rows."""
    rows, _ = _rows(_text(source), "\t")
    if not rows or tuple(rows[0][1]) != RESULT_COLUMNS:
        raise ParseError("not a bfrank results table (header mismatch)", rows[0][0] if rows else None)
    out = []
    for lineno, f in rows[1:]:
        if len(f) != len(RESULT_COLUMNS):
            raise ParseError(f"expected {len(RESULT_COLUMNS)} fields", lineno)
        try:
            out.append(GeneResult(
                gene_id=f[0],
                n1=int(f[1]), N1=int(f[2]), n2=int(f[3]), N2=int(f[4]),
                log10_bf=float(f[5]), ifc=float(f[6]), q1_hat=float(f[7]), q2_hat=float(f[8]),
                replicate_flag=f[9] == "true",
                rank=int(f[10]),
            ))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return out


# -- curves -------------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    x: float
    log10_bf: float
    ifc: float
    n1: int
    N1: int
    n2: int
    N2: int


def _points(x, c1, c2, prior):
    bf = np.atleast_1d(log10_bayes_factor(c1, c2, prior))
    fc = np.atleast_1d(inferred_log2_fc(c1, c2, prior))
    n1, N1, n2, N2 = (np.broadcast_to(v, bf.shape) for v in (c1.n, c1.N, c2.n, c2.N))
    return [
        CurvePoint(float(x[i]), float(bf[i]), float(fc[i]), int(n1[i]), int(N1[i]), int(n2[i]), int(N2[i]))
        for i in range(bf.size)
    ]


def sweep_delta_n(n1, N_total, delta_ns, prior=FLAT_PRIOR):
    """Vary n2 = n1 + dn with both samples at depth ``N_total``.

    Points with n2 outside [0, N_total] are skipped with a ``CountDataWarning``.
    """
    if not 0 <= n1 <= N_total:
        raise DomainError("need 0 <= n1 <= N_total")
    dn = np.asarray([int(d) for d in delta_ns], dtype=np.int64)
    n2 = n1 + dn
    keep = (n2 >= 0) & (n2 <= N_total)
    for d, v in zip(dn[~keep], n2[~keep]):
        warnings.warn(f"skipped dn={d}: n2={v} outside [0, {N_total}]", CountDataWarning, stacklevel=2)
    if not keep.any():
        return []
    dn, n2 = dn[keep], n2[keep]
    c1 = SampleCounts(np.full(dn.shape, n1, dtype=np.int64), N_total)
    return _points(dn, c1, SampleCounts(n2, N_total), prior)


def proportion_count(p, N):
    """round(p * N) with halves rounded up."""
    return int(np.floor(p * N + 0.5))


def sweep_delta_q(depths, pairs, prior=FLAT_PRIOR):
    """One point per (depth, (p1, p2)) with x = q1_hat - q2_hat.

    Both samples share the depth; counts are round(p * depth).
    """
    n1, n2, Ns = [], [], []
    for N in depths:
        N = int(N)
        if N < 0:
            raise DomainError("depths must be >= 0")
        for p1, p2 in pairs:
            if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
                raise DomainError("proportions must lie in [0, 1]")
            n1.append(proportion_count(p1, N))
            n2.append(proportion_count(p2, N))
            Ns.append(N)
    if not Ns:
        return []
    Ns = np.array(Ns, dtype=np.int64)
    c1 = SampleCounts(np.array(n1, dtype=np.int64), Ns)
    c2 = SampleCounts(np.array(n2, dtype=np.int64), Ns)
    dq = np.atleast_1d(point_estimate_q(c1, prior) - point_estimate_q(c2, prior))
    return _points(dq, c1, c2, prior)


def format_curve(points, notes=()):
    buf = io.StringIO()
    for note in notes:
        buf.write(f"# {note}\n")
    buf.write("\t".join(CURVE_COLUMNS) + "\n")
    for p in points:
        buf.write(
            "\t".join(
                (format_real(p.x), format_real(p.log10_bf), format_real(p.ifc),
                 str(p.n1), str(p.N1), str(p.n2), str(p.N2))
            )
            + "\n"
        )
    return buf.getvalue()
