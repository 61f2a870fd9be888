# %% [markdown]
# # Tangent cones at singular points
#
# At a rank-2k point M0 a direction V is tangent iff the lower-right block D
# of V (in M0's canonical frame) has rank at most 2r - 2k.  Tangent
# directions are followed by a curve that stays on the variety with O(t^2)
# error; other directions leave it at linear rate.

# %%
from pfaffian_varieties.tangent import factorize_tangent_cone, order_fit, random_query, tangent_membership

for member in (True, False):
    q = random_query(7, 2, 1, member, seed=1)
    fit = order_fit(q)
    print(f"member={tangent_membership(q)}  log-log slope={fit.slope:.3f}")

# %% The cone splits as a smaller Pfaffian cone times a Euclidean factor.
for k in range(3):
    cross, euclid = factorize_tangent_cone(7, 2, k)
    print(f"k={k}: C({cross.n},{2 * cross.r}) x R^{euclid}")
