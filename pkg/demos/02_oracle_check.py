# # Checking a derivation by brute force
#
# Every symbolic result can be checked numerically. On a small Fock space
# (two occupied and two virtual spin-orbitals) we apply the operator string
# to the reference determinant bit by bit. We then compare with a direct
# einsum contraction of the derived tensors.

# In[1]:

import numpy as np

from sqeval import OrbitalBasis, check_equivalence, evaluate, parse, random_tensors
from sqeval.oracle import apply_op, numeric_input_value, numeric_symbolic_value
from sqeval.model import OpKind

basis = OrbitalBasis(n_occ=2, n_virt=2)
print(bin(basis.reference))

# Single operators act on bitstrings with the usual sign convention.

# In[2]:

print(apply_op({0b0011: 1}, OpKind.ANN, 1))
print(apply_op({0b0011: 1}, OpKind.CRE, 2))

# Random tensors are symmetrized exactly, so h is symmetric to the last bit.

# In[3]:

tensors = random_tensors(42, basis)
print(np.abs(tensors.h - tensors.h.T).max(), np.abs(tensors.V - tensors.V.transpose(2, 3, 0, 1)).max())

# The anion one-electron sandwich, both ways.

# In[4]:

source = parse("t[=>b] t[=>a] a(b) c(p) a(q) c(a) h[p,q]")
derived = evaluate(source)
print(numeric_input_value(source, tensors, basis), numeric_symbolic_value(derived, tensors, basis))

# `check_equivalence` repeats this over several seeds. Flipping the sign of
# the result makes it fail, which shows the check has teeth.

# In[5]:

print(check_equivalence(source, derived, basis).table())
flipped = parse("- t[=>b] t[=>a] h[a,b] - t[=>a] t[=>a] h[m,m]")
print(check_equivalence(source, flipped, basis, trials=2).table())
