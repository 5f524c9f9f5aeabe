# # Doubles: term counts and timing
#
# The CI doubles energy has many more contractions. This script prints the
# merged term counts and checks each result against the oracle.

# In[1]:

import time

from sqeval import OrbitalBasis, check_equivalence, evaluate, parse
from sqeval.engine import Stats
from sqeval.pipeline import evaluate as run_pipeline
from sqeval.presets import PRESETS

for name in ("cid-h1", "cid-h2"):
    stats = Stats()
    start = time.perf_counter()
    result = run_pipeline(parse(PRESETS[name]), stats)
    took = time.perf_counter() - start
    print(f"{name}: {stats.raw_terms} raw terms -> {len(result)} merged in {took:.2f} s")

# The first few two-electron terms in canonical order.

# In[2]:

result = evaluate(parse(PRESETS["cid-h2"]))
for term in list(result)[:6]:
    print(term.serialize())

# And the oracle verdict.

# In[3]:

report = check_equivalence(parse(PRESETS["cid-h2"]), result, OrbitalBasis(2, 2), trials=2)
print(report.table().splitlines()[-1])
