"""End-to-end analysis of a bound count matrix: pool, check, score, rank."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ingest import bind
from .model import FLAT_PRIOR, SampleCounts, analyze_genes
from .replicates import DEFAULT_THRESHOLD, check_same_genes, pool_condition, replicate_consistency
from .report import rank_genes


@dataclass(frozen=True)
class Analysis:
    table: object  # RankedTable
    consistency: dict  # condition_id -> list of ConsistencyReport
    conditions: tuple

    @property
    def flagged(self):
        return sorted({r.gene_id for reps in self.consistency.values() for r in reps if r.flagged})


def _chunks(n, workers):
    bounds = np.linspace(0, n, workers + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def analyze_groups(group1, group2, prior=FLAT_PRIOR, threshold=DEFAULT_THRESHOLD, workers=1):
    """Score every gene from pooled replicate counts.

    Genes are split into contiguous blocks for the worker threads and merged
    back in order, so ``workers`` never changes the numbers.
    """
    check_same_genes([group1, group2])
    consistency = {}
    for g in (group1, group2):
        if len(g.sample_ids) >= 2:
            consistency[g.condition_id] = replicate_consistency(g, prior, threshold)
    flagged = {r.gene_id for reps in consistency.values() for r in reps if r.flagged}

    p1, p2 = pool_condition(group1), pool_condition(group2)
    genes = group1.gene_ids

    def run(block):
        a, b = block
        return analyze_genes(
            genes[a:b], SampleCounts(p1.n[a:b], p1.N), SampleCounts(p2.n[a:b], p2.N), prior
        )

    blocks = _chunks(len(genes), max(1, workers))
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    results = [r for part in parts for r in part]
    for r in results:
        r.replicate_flag = r.gene_id in flagged
    return Analysis(rank_genes(results), consistency, (group1.condition_id, group2.condition_id))


def analyze_matrix(matrix, sheet, prior=FLAT_PRIOR, threshold=DEFAULT_THRESHOLD, workers=1, strict=True):
    g1, g2 = bind(matrix, sheet, strict=strict)
    return analyze_groups(g1, g2, prior, threshold, workers)
