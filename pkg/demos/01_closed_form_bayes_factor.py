# Two samples, one gene: how much do the counts favour a change?
import math

import numpy as np

from bfrank import PriorHyperparams, SampleCounts, inferred_log2_fc, log10_bayes_factor
from bfrank.oracle import exact_bf, quadrature_bf

# no data means no evidence either way
print(log10_bayes_factor(SampleCounts(0, 0), SampleCounts(0, 0)))

# one read each, same outcome: mild support for "no change"
print(log10_bayes_factor(SampleCounts(0, 1), SampleCounts(0, 1)), math.log10(3 / 4))

# one read each, opposite outcomes: BF is exactly 3/2
print(log10_bayes_factor(SampleCounts(0, 1), SampleCounts(1, 1)), math.log10(1.5))

c1, c2 = SampleCounts(3, 10), SampleCounts(7, 10)
print("closed form ", log10_bayes_factor(c1, c2))
print("rationals   ", exact_bf(c1, c2).log10_bf)
print("quadrature  ", quadrature_bf(c1, c2).log10_bf)

# same proportions, ten times more reads each step
for N in (10, 100, 1000, 10_000):
    a, b = SampleCounts(3 * N // 10, N), SampleCounts(7 * N // 10, N)
    print(N, round(log10_bayes_factor(a, b), 3), round(inferred_log2_fc(a, b), 3))

# a whole vector of genes at once
n1 = np.array([0, 10, 100, 1000])
n2 = np.array([0, 20, 150, 1000])
print(log10_bayes_factor(SampleCounts(n1, 10**6), SampleCounts(n2, 10**6)))

# a non-flat prior pulls small-count estimates toward its mean
jeffreys = PriorHyperparams(0.5, 0.5)
print(log10_bayes_factor(c1, c2, jeffreys), quadrature_bf(c1, c2, jeffreys).log10_bf)
