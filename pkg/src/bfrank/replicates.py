"""Replicate pooling and pairwise replicate-consistency checks.

Replicates of a condition are pooled by summing reads per gene and summing
library totals. Whether that is justified is checked with the same two-sample
Bayes factor, applied to every unordered pair of replicates.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import StructuralError
from .model import FLAT_PRIOR, SampleCounts, log10_bayes_factor

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class ConditionGroup:
    """Replicate columns of one condition over a shared gene universe.

    ``counts`` has shape (genes, replicates).
    """

    condition_id: str
    sample_ids: tuple
    gene_ids: tuple
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2:
            raise StructuralError("counts must be a genes x samples matrix")
        if counts.shape != (len(self.gene_ids), len(self.sample_ids)):
            raise StructuralError(
                f"counts shape {counts.shape} does not match "
                f"{len(self.gene_ids)} genes x {len(self.sample_ids)} samples"
            )
        if len(self.sample_ids) < 1:
            raise StructuralError(f"condition {self.condition_id!r} has no samples")
        if np.any(counts < 0):
            raise StructuralError("counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "sample_ids", tuple(self.sample_ids))
        object.__setattr__(self, "gene_ids", tuple(self.gene_ids))

    @property
    def totals(self):
        """Per-replicate library size N, the column sums."""
        return self.counts.sum(axis=0)

    def sample(self, j):
        return SampleCounts(self.counts[:, j], int(self.totals[j]))


@dataclass(frozen=True)
class ConsistencyReport:
    gene_id: str
    condition_id: str
    pairwise_log10_bfs: tuple  # ((sample_a, sample_b), log10_bf) per unordered pair
    max_log10_bf: float | None
    flagged: bool


def pool_condition(group):
    """Sum reads per gene and library sizes across replicates."""
    n = group.counts.sum(axis=1)
    return SampleCounts(n, int(group.totals.sum()))


def check_same_genes(groups):
    first = groups[0].gene_ids
    for g in groups[1:]:
        if g.gene_ids != first:
            raise StructuralError(
                f"condition {g.condition_id!r} has a different gene universe than {groups[0].condition_id!r}"
            )


def replicate_consistency(group, prior=FLAT_PRIOR, threshold=DEFAULT_THRESHOLD):
    """Pairwise replicate Bayes factors per gene, sorted by gene id.

    A gene is flagged when any pair of replicates gives log10 BF above
    ``threshold``, i.e. when the data favour the two replicates having
    different expression.
    """
    pairs = list(combinations(range(len(group.sample_ids)), 2))
    samples = [group.sample(j) for j in range(len(group.sample_ids))]
    values = np.empty((len(group.gene_ids), len(pairs)))
    for k, (a, b) in enumerate(pairs):
        values[:, k] = log10_bayes_factor(samples[a], samples[b], prior)

    reports = []
    for i in sorted(range(len(group.gene_ids)), key=lambda i: group.gene_ids[i]):
        row = values[i]
        pairwise = tuple(
            ((group.sample_ids[a], group.sample_ids[b]), float(row[k])) for k, (a, b) in enumerate(pairs)
        )
        best = float(row.max()) if pairs else None
        reports.append(
            ConsistencyReport(
                gene_id=group.gene_ids[i],
                condition_id=group.condition_id,
                pairwise_log10_bfs=pairwise,
                max_log10_bf=best,
                flagged=best is not None and best > threshold,
            )
        )
    return reports
