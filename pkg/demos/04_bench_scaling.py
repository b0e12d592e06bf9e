"""Query-time scaling: the index should flatten out while the scan grows."""

import numpy as np

from farstar.bench import run_bench, records_to_csv

records = run_bench(
    sizes=[1_000, 10_000, 100_000, 1_000_000],
    dim=2,
    epsilons=[0.2, 0.1],
    seed=42,
    queries=50,
)
print(records_to_csv(records))

for eps in (0.2, 0.1):
    rows = [r for r in records if r.epsilon == eps]
    growth = rows[-1].mean_query_time / rows[0].mean_query_time
    print(f"eps={eps}: n grew {rows[-1].n // rows[0].n}x, "
          f"query time grew {growth:.1f}x, "
          f"final speedup over scan {rows[-1].speedup_vs_scan:.0f}x")
