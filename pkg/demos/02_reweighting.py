# %% [markdown]
# # Balancing several principles
#
# Adding the 1-norm and the inf-norm with equal weights does not treat them
# equally: the 1-norm sums n*d residuals and is usually far larger, so it
# decides the consensus almost alone. Dividing each norm by its own optimum
# eta_p puts them on a common scale.

# %%
import json
from pathlib import Path

import lpconsensus as lc

DATA = Path(__file__).parent / "data"
society = lc.validate_society(json.loads((DATA / "society_7x5.json").read_text()))
system = lc.build_system(society)
F = society.feasible
P = (1, 2, lc.INF)

# %%
plain = lc.solve_multi(system, F, lc.PrincipleSpec.uniform(P))
balanced = lc.solve_reweighted(system, F, P)

print("eta:", {lc.problem.principle_label(p): round(v, 4) for p, v in balanced.eta.items()})
print("unweighted components:", plain.objective.labelled())
print("re-weighted components:", balanced.objective.labelled())
print(f"psi unweighted {plain.psi:.4g}, re-weighted {balanced.psi:.4g}")

# %% [markdown]
# Psi is the variance of the weighted components. A small Psi means no
# single principle dominates. The components of the re-weighted solve sit
# near one, since each is a norm divided by its own best value.
#
# The residual statistics show how the balanced consensus sits between the
# pure p=1 and p=inf answers.

# %%
rows = []
for p in (1, lc.INF):
    s = lc.solve_single(system, F, p)
    rows.append((f"{{{lc.problem.principle_label(p)}}}", s, lc.residual_stats(s.x, system)))
rows.append(("{1,2,inf} unweighted", plain, lc.residual_stats(plain.x, system)))
rows.append(("{1,2,inf} reweighted", balanced, lc.residual_stats(balanced.x, system)))
table = lc.comparison_table(rows)
for rec in table.records():
    print(f"{rec['label']:<22} max {rec['max']:<9} mean {rec['mean']:<10} var {rec['variance']:<10} psi {rec['psi']}")

# %% [markdown]
# The consensus is itself a 5x5 matrix. It need not be reciprocal, because
# the feasible set only bounds each cell to the scale.

# %%
print(balanced.consensus.round(3))
