"""Synthetic two-condition count data with known truth, and ranking evaluation.

Random streams: ``SeedSequence(rng_seed)`` spawns two children, the first for
the truth table and the second for the counts. The counts child spawns one
grandchild per replicate column (condition 1 replicates first), each feeding
its own PCG64 generator, so every column is reproducible on its own.
"""

import io
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import CountDataWarning, ParseError, StructuralError
from .ingest import CountMatrix, SampleSheet, _rows, _text

CONDITIONS = ("cond1", "cond2")
PRECISION_KS = (10, 50, 100)


@dataclass(frozen=True)
class SimulationConfig:
    num_genes: int = 1000
    fraction_changed: float = 0.1
    effect_log2_range: tuple = (0.3, 2.0)
    depth_per_replicate: int = 8_000_000
    replicates_per_condition: int = 12
    rng_seed: int = 0
    # shape of the gamma weights behind the base expression vector
    dirichlet_alpha: float = 1.0

    def __post_init__(self):
        lo, hi = self.effect_log2_range
        if self.num_genes < 1:
            raise ValueError("num_genes must be >= 1")
        if not 0.0 <= self.fraction_changed <= 1.0:
            raise ValueError("fraction_changed must lie in [0, 1]")
        if not 0.0 <= lo <= hi:
            raise ValueError("effect_log2_range must satisfy 0 <= lo <= hi")
        if self.depth_per_replicate < 0:
            raise ValueError("depth_per_replicate must be >= 0")
        if self.replicates_per_condition < 1:
            raise ValueError("replicates_per_condition must be >= 1")
        if not self.dirichlet_alpha > 0:
            raise ValueError("dirichlet_alpha must be > 0")

    def streams(self):
        truth, counts = np.random.SeedSequence(self.rng_seed).spawn(2)
        return truth, counts


@dataclass(frozen=True)
class TruthRecord:
    gene_id: str
    q1: float
    q2: float
    changed: bool


def gene_names(num_genes):
    width = max(5, len(str(num_genes)))
    return [f"g{i:0{width}d}" for i in range(1, num_genes + 1)]


def generate_truth(cfg):
    """Expression probabilities per condition with a random changed subset.

    Condition-1 probabilities are normalised gamma weights. Changed genes get
    their weight multiplied by 2**e, |e| uniform on ``effect_log2_range`` with
    a random sign, and condition 2 is renormalised. Renormalisation scales the
    unchanged genes of condition 2 by one shared factor, so ``changed`` marks
    genes with an injected effect rather than every gene with q1 != q2.
    """
    rng = np.random.Generator(np.random.PCG64(cfg.streams()[0]))
    G = cfg.num_genes
    weights = rng.gamma(cfg.dirichlet_alpha, size=G)
    q1 = weights / weights.sum()

    k = int(round(cfg.fraction_changed * G))
    if cfg.fraction_changed > 0 and k < 1:
        warnings.warn("fraction_changed * num_genes < 1; changing one gene", CountDataWarning, stacklevel=2)
        k = 1
    if G == 1:
        if cfg.fraction_changed > 0:
            warnings.warn("a single gene always has q = 1; no change possible", CountDataWarning, stacklevel=2)
        k = 0

    changed = np.zeros(G, dtype=bool)
    q2 = q1
    if k:
        idx = rng.choice(G, size=k, replace=False)
        lo, hi = cfg.effect_log2_range
        effect = rng.uniform(lo, hi, size=k) * rng.choice(np.array([-1.0, 1.0]), size=k)
        w2 = weights.copy()
        w2[idx] *= np.exp2(effect)
        q2 = w2 / w2.sum()
        changed[idx] = True

    return [
        TruthRecord(g, float(a), float(b), bool(c))
        for g, a, b, c in zip(gene_names(G), q1, q2, changed)
    ]


def sample_counts(truth, cfg):
    """Multinomial read counts for every replicate column.

    Each column sums to exactly ``depth_per_replicate``.
    """
    R = cfg.replicates_per_condition
    probs = [np.array([t.q1 for t in truth]), np.array([t.q2 for t in truth])]
    for p in probs:
        p /= p.sum()
    children = cfg.streams()[1].spawn(2 * R)
    columns, sample_ids, assignments = [], [], {}
    for c, cond in enumerate(CONDITIONS):
        for r in range(R):
            rng = np.random.Generator(np.random.PCG64(children[c * R + r]))
            columns.append(rng.multinomial(cfg.depth_per_replicate, probs[c]))
            sid = f"{cond}_rep{r + 1:02d}"
            sample_ids.append(sid)
            assignments[sid] = cond
    counts = np.column_stack(columns).astype(np.int64)
    return CountMatrix([t.gene_id for t in truth], sample_ids, counts), SampleSheet(assignments)


def simulate(cfg):
    truth = generate_truth(cfg)
    matrix, sheet = sample_counts(truth, cfg)
    return truth, matrix, sheet


def format_truth(truth, delimiter="\t"):
    buf = io.StringIO()
    buf.write(delimiter.join(("gene_id", "q1", "q2", "changed")) + "\n")
    for t in truth:
        buf.write(delimiter.join((t.gene_id, repr(t.q1), repr(t.q2), "true" if t.changed else "false")) + "\n")
    return buf.getvalue()


def parse_truth(source, delimiter=None):
    rows, _ = _rows(_text(source), delimiter)
    if rows and rows[0][1][0] == "gene_id":
        rows = rows[1:]
    out = []
    for lineno, fields in rows:
        if len(fields) != 4 or fields[3] not in ("true", "false"):
            raise ParseError("expected 'gene_id q1 q2 true|false'", lineno)
        try:
            q1, q2 = float(fields[1]), float(fields[2])
        except ValueError:
            raise ParseError("q1/q2 are not numbers", lineno) from None
        out.append(TruthRecord(fields[0], q1, q2, fields[3] == "true"))
    return out


# -- evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class EvaluationSummary:
    n_genes: int
    n_changed: int
    auroc: float | None
    auroc_note: str | None
    precision_at_k: dict


def auroc(scores, labels):
    """Rank-sum AUROC with tied scores given their average rank."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    pos = int(labels.sum())
    neg = labels.size - pos
    if pos == 0 or neg == 0:
        return None
    ranks = rankdata(scores, method="average")
    return float((ranks[labels].sum() - pos * (pos + 1) / 2.0) / (pos * neg))


def evaluate_ranking(results, truth):
    """Score log10 BF as a detector of the ``changed`` label."""
    by_gene = {t.gene_id: t for t in truth}
    if set(by_gene) != {r.gene_id for r in results} or len(results) != len(by_gene):
        raise StructuralError("results and truth cover different genes")

    ordered = sorted(results, key=lambda r: (-r.log10_bf, r.gene_id))
    labels = np.array([by_gene[r.gene_id].changed for r in ordered])
    scores = np.array([r.log10_bf for r in ordered])
    n_changed = int(labels.sum())

    value = auroc(scores, labels)
    note = None
    if value is None:
        note = "AUROC undefined: " + ("no gene is changed" if n_changed == 0 else "every gene is changed")

    precision = {}
    for k in PRECISION_KS:
        kk = min(k, len(ordered))
        if kk:
            precision[kk] = float(labels[:kk].mean())
    return EvaluationSummary(len(ordered), n_changed, value, note, precision)
