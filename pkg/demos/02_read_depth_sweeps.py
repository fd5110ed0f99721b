# Curves of log10 BF and iFC against the read difference and against depth.
import numpy as np

from bfrank.report import DEFAULT_SWEEP_TOTAL, format_curve, sweep_delta_n, sweep_delta_q

N = DEFAULT_SWEEP_TOTAL
print("reads per sample:", N)

for n1 in (100, 10_000, 1_000_000):
    pts = sweep_delta_n(n1, N, range(-100, 101, 25))
    print(f"\nn1 = {n1}")
    for p in pts:
        print(f"  dn={p.x:+6.0f}  log10 BF={p.log10_bf:9.3f}  iFC={p.ifc:+.4f}")

# the minimum sits at dn = 0 and the fold change passes through zero there
pts = sweep_delta_n(1000, N, np.arange(-1000, 1001))
bf = np.array([p.log10_bf for p in pts])
print("\nargmin dn:", pts[int(bf.argmin())].x)

# fixed proportions, growing depth
depths = [10**4, 10**5, 10**6, 10**7]
for pair in [(0.01, 0.013), (0.001, 0.0012)]:
    print(f"\np1, p2 = {pair}")
    for p in sweep_delta_q(depths, [pair]):
        print(f"  N={p.N1:>9}  dq={p.x:+.6f}  log10 BF={p.log10_bf:9.3f}")
# the second pair dips first: at low depth the extra parameter of the
# "changed" model costs more than the small difference can repay

print()
print(format_curve(sweep_delta_q([10**5], [(0.2, 0.25)])), end="")
