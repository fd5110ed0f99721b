"""Closed form versus the independent oracles, runnable from the CLI."""

import math

import numpy as np

from .model import FLAT_PRIOR, PriorHyperparams, SampleCounts, inferred_log2_fc, log10_bayes_factor
from .oracle import exact_bf, quadrature_bf


def all_count_tuples(max_n):
    """Every (n1, N1, n2, N2) with 0 <= n <= N <= max_n, as four int arrays."""
    pairs = np.array([(n, N) for N in range(max_n + 1) for n in range(N + 1)], dtype=np.int64)
    i, j = np.meshgrid(np.arange(len(pairs)), np.arange(len(pairs)), indexing="ij")
    a, b = pairs[i.ravel()], pairs[j.ravel()]
    return a[:, 0], a[:, 1], b[:, 0], b[:, 1]


def random_quadrature_cases(count, seed=0, max_n=10_000, priors=(0.5, 1.0, 2.0)):
    """Mix of unrelated counts and near-null pairs (log10 BF close to zero)."""
    rng = np.random.default_rng(seed)
    cases = []
    for k in range(count):
        N1, N2 = (int(v) for v in rng.integers(0, max_n + 1, size=2))
        n1 = int(rng.integers(0, N1 + 1))
        if k % 2 and N1 > 0:
            n2 = int(rng.binomial(N2, n1 / N1))
        else:
            n2 = int(rng.integers(0, N2 + 1))
        prior = PriorHyperparams(float(rng.choice(priors)), float(rng.choice(priors)))
        cases.append((SampleCounts(n1, N1), SampleCounts(n2, N2), prior))
    return cases


def _check(name, errors, tolerance, cases=None):
    worst = float(np.max(errors)) if len(errors) else 0.0
    return {
        "name": name,
        "passed": bool(worst <= tolerance),
        "cases": int(cases if cases is not None else len(errors)),
        "max_abs_error": worst,
        "tolerance": tolerance,
    }


def check_exact(max_n):
    n1, N1, n2, N2 = all_count_tuples(max_n)
    closed = log10_bayes_factor(SampleCounts(n1, N1), SampleCounts(n2, N2))
    ref = np.array(
        [exact_bf(SampleCounts(int(a), int(b)), SampleCounts(int(c), int(d))).log10_bf
         for a, b, c, d in zip(n1, N1, n2, N2)]
    )
    return _check(f"exact_oracle_N<={max_n}", np.abs(closed - ref), 1e-10)


def check_quadrature(count, seed=0, tol=1e-8):
    errors = []
    for c1, c2, prior in random_quadrature_cases(count, seed):
        errors.append(abs(log10_bayes_factor(c1, c2, prior) - quadrature_bf(c1, c2, prior, tol=tol).log10_bf))
    return _check(f"quadrature_oracle_{count}_cases", errors, 1e-6)


def check_anchors():
    S = SampleCounts
    cases = [
        (S(0, 0), S(0, 0), 0.0),
        (S(0, 1), S(0, 1), exact_bf(S(0, 1), S(0, 1)).log10_bf),
        (S(0, 1), S(1, 1), exact_bf(S(0, 1), S(1, 1)).log10_bf),
    ]
    errors = [abs(log10_bayes_factor(a, b) - v) for a, b, v in cases]
    return _check("anchors", errors, 1e-12)


def check_symmetry(count, seed=0):
    rng = np.random.default_rng(seed)
    N1 = rng.integers(0, 10**7, size=count)
    N2 = rng.integers(0, 10**7, size=count)
    c1 = SampleCounts(rng.integers(0, N1 + 1), N1)
    c2 = SampleCounts(rng.integers(0, N2 + 1), N2)
    swap = np.abs(log10_bayes_factor(c1, c2) - log10_bayes_factor(c2, c1))
    anti = np.abs(inferred_log2_fc(c1, c2) + inferred_log2_fc(c2, c1))
    return [_check("swap_invariance", swap, 0.0), _check("ifc_antisymmetry", anti, 1e-12)]


def check_null(max_n):
    worst = -math.inf
    for N in range(1, max_n + 1):
        n = np.arange(N + 1)
        v = log10_bayes_factor(SampleCounts(n, N), SampleCounts(n, N), FLAT_PRIOR)
        worst = max(worst, float(np.max(v)))
    return {
        "name": f"null_consistency_N<={max_n}",
        "passed": worst < 0,
        "cases": (max_n + 1) * (max_n + 2) // 2 - 1,
        "max_log10_bf": worst,
    }


def run_selftest(full=False, seed=0):
    checks = [check_anchors()]
    checks.append(check_exact(30 if full else 12))
    checks.append(check_quadrature(200 if full else 30, seed))
    checks.extend(check_symmetry(1000, seed))
    checks.append(check_null(200 if full else 50))
    return {"passed": all(c["passed"] for c in checks), "full": full, "checks": checks}
