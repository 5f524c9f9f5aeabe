# # Koopmans' theorem as a tensor identity
#
# Removing an electron from occupied orbital i of the Hartree-Fock state
# costs exactly minus the orbital energy h_ii + sum_m <im||im> when the
# other orbitals are frozen. We derive the cation energy symbolically and
# verify this numerically.

# In[1]:

import numpy as np

from sqeval import OrbitalBasis, evaluate, parse, random_tensors, render
from sqeval.oracle import numeric_symbolic_value
from sqeval.presets import PRESETS

cation = evaluate(parse(PRESETS["cation-h1"])) + evaluate(parse(PRESETS["cation-h2"]))
reference = evaluate(parse("h[p,q] c(p) a(q) + 1/2 V[p,q,r,s] c(p) c(q) a(s) a(r)"))
print(render(cation))
print(render(reference))

# Put the whole cation amplitude on one occupied orbital.

# In[2]:

basis = OrbitalBasis(3, 2)
tensors = random_tensors(0, basis)
e0 = numeric_symbolic_value(reference, tensors, basis)
for i in range(basis.n_occ):
    unit = np.zeros(basis.n)
    unit[i] = 1.0
    t = tensors.with_amplitude(1, 0, unit)
    ionization = numeric_symbolic_value(cation, t, basis) - e0
    eps = t.h[i, i] + sum(t.A[i, m, i, m] for m in range(basis.n_occ))
    print(i, ionization, -eps)
