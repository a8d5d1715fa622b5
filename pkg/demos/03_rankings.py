# %% [markdown]
# # Rankings and partial orders
#
# Ordinal opinions become Borda valuations: the best of m alternatives
# scores m and the worst scores 1. The consensus lives on the same scale,
# with scores in [1, m] summing to m(m+1)/2.

# %%
import json
from pathlib import Path

import lpconsensus as lc

DATA = Path(__file__).parent / "data"
rankings = lc.validate_society(json.loads((DATA / "rankings.json").read_text()))
system = lc.build_system(rankings)
for ind, row in zip(rankings.individuals, system.targets):
    order = [rankings.alternatives[j] for j in ind.data.order]
    print(f"{ind.id} (w={ind.weight:g}): {' > '.join(order)}  ->  {row.tolist()}")

# %%
for p in (1, 2, lc.INF):
    sol = lc.solve_single(system, rankings.feasible, p)
    ranked = sorted(zip(sol.x, rankings.alternatives), reverse=True)
    print(f"p={p}: " + ", ".join(f"{a} {v:.3f}" for v, a in ranked), f"(sum {sol.x.sum():.6f})")

# %% [markdown]
# ## Incomplete opinions
#
# A person who only states some pairwise preferences constrains each score
# to an interval: at least one plus the number of direct wins, at most m
# minus the number of direct losses. Any consensus score inside the interval
# costs that person nothing.

# %%
partial = lc.validate_society(json.loads((DATA / "partial.json").read_text()))
system = lc.build_system(partial)
for ind, lo, hi in zip(partial.individuals, system.lower, system.upper):
    print(ind.id, [f"[{a:g}, {b:g}]" for a, b in zip(lo, hi)])

sol = lc.solve_reweighted(system, partial.feasible, (1, lc.INF))
print("consensus:", {a: round(float(v), 4) for a, v in zip(partial.alternatives, sol.x)})
print("residual max:", lc.residual_stats(sol.x, system).max)
