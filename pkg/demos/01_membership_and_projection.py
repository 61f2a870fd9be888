# %% [markdown]
# # Membership, projection and distance
#
# C(n, 2r) is the cone of n x n real skew matrices of rank at most 2r.
# Membership can be decided from the spectrum or from Pfaffians of
# principal minors, and the nearest member is obtained by truncating the
# paired singular values.

# %%
from pfaffian_varieties import VarietySpec, basis, canonical_decompose, contains_pfaffian, contains_rank, distance, project, random_skew

spec = VarietySpec(6, 2)
print(spec, "dimension", spec.dimension, "codimension", spec.codimension)

# %% A random 6x6 skew matrix is full rank; its projection is a member.
m = random_skew(6, seed=0)
cf = canonical_decompose(m)
print("paired singular values:", cf.pairs)
p = project(spec, m)
print("member before/after:", contains_rank(spec, m), contains_rank(spec, p.matrix), contains_pfaffian(spec, p.matrix))
print("distance equals the dropped pair:", distance(spec, m), cf.pairs[-1])

# %% Repeated pairs make the nearest point non-unique.
tie = basis(4, 0, 1) + basis(4, 2, 3)
print("unique projection:", project(VarietySpec(4, 1), tie).unique)
