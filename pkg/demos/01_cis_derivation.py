# # Deriving the CIS energy expression
#
# A configuration-interaction singles state is a sum of single excitations
# t_i^a a_a^+ a_i acting on the Hartree-Fock determinant. Its energy is the
# sandwich of the Hamiltonian between two such states. Here we write that
# sandwich as a string of operators and let the rewriting engine move the
# operators until only tensor contractions are left.

# In[1]:

from sqeval import evaluate, parse, render
from sqeval.engine import Stats, fixpoint
from sqeval.presets import PRESETS

# The one-electron part. The bra amplitude comes first, then the bra
# operators, the Hamiltonian and the ket.

# In[2]:

source = parse(PRESETS["cis-h1"])
print(render(source))

# `fixpoint` alone gives the raw sum. It still has duplicate terms that
# differ only in dummy labels.

# In[3]:

stats = Stats()
raw = fixpoint(source, stats)
print(len(raw), "raw terms after", stats.iterations, "sweeps and", stats.splits, "splits")
print(render(raw))

# `evaluate` adds delta contraction, canonical relabeling and merging.

# In[4]:

result = evaluate(source)
print(render(result))
print(render(result, "latex"))

# The two-electron part works the same way. Pairs of bare integrals
# combine into antisymmetrized ones, and the closed-shell trace appears
# with coefficient 1/2.

# In[5]:

two = evaluate(parse(PRESETS["cis-h2"]))
print(render(two))
