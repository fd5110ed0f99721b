# Are the replicates of a condition consistent enough to pool?
import numpy as np

from bfrank.ingest import bind, parse_count_matrix, parse_sample_sheet
from bfrank.pipeline import analyze_groups
from bfrank.replicates import pool_condition, replicate_consistency

rng = np.random.default_rng(4)
q = rng.dirichlet(np.ones(30))
cols = [rng.multinomial(5000, q) for _ in range(6)]
counts = np.column_stack(cols)
counts[7, 2] *= 5  # one replicate of one gene went wrong

rows = ["gene_id\tA1\tA2\tA3\tB1\tB2\tB3"]
rows += [f"gene{i:02d}\t" + "\t".join(map(str, r)) for i, r in enumerate(counts)]
matrix = parse_count_matrix("\n".join(rows) + "\n")
sheet = parse_sample_sheet("A1\tA\nA2\tA\nA3\tA\nB1\tB\nB2\tB\nB3\tB\n")
a, b = bind(matrix, sheet)

pooled = pool_condition(a)
print("pooled library:", pooled.N, "first genes:", pooled.n[:5])

# the inflated gene also enlarges A3's library, so a few other genes in A3
# look diluted and can cross the threshold as well
for rep in replicate_consistency(a):
    if rep.flagged:
        print(rep.gene_id, [(pair, round(v, 2)) for pair, v in rep.pairwise_log10_bfs])

# flagging is advisory; the ranking itself is unchanged by it
analysis = analyze_groups(a, b)
print("flagged:", analysis.flagged)
print([(r.gene_id, round(r.log10_bf, 2), r.replicate_flag) for r in analysis.table.rows[:3]])
