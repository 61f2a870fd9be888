# %% [markdown]
# # Weighting functions along a wedge
#
# At a regular point M(x) the primary weight w1 has a closed form; moving a
# distance t along a unit normal multiplies it by det(I - t A_v), which
# vanishes at the focal radius t = x_r.  On a secondary level the product
# w1 * w2 is smallest at t = 0 once the normal block has size at least 3.

# %%
import numpy as np

from pfaffian_varieties import WedgePoint, basis, weight_primary, weight_primary_numeric, weight_primary_wedge
from pfaffian_varieties.slicing import composite_weight

x = np.array([2.0, 1.0])
print("w1 closed form:", weight_primary(x, 5, 2), " finite differences:", weight_primary_numeric(x, 5, 2))

# %% Exact wedge weight against its lower bound (rank-2 normal: equality).
for t in [0.0, 0.5, 0.9]:
    w = weight_primary_wedge(WedgePoint(x, t, basis(3, 0, 1)))
    print(f"t={t:.1f}  exact={w.exact:.6f}  bound={w.lower_bound:.6f}")

# %% Composite weight along a secondary level.
t = np.linspace(-2, 2, 9)
for n, r in [(5, 1), (4, 1)]:
    vals = composite_weight(n, [1.0], t, basis(n - 2 * r, 0, 1))
    print(f"n={n} r={r}: argmin t = {t[np.argmin(vals)]:+.1f}")
