# # Exact range of a difference of distances
#
# f(x) = ||x - a|| - ||x - b|| measures how much closer a point is to b than to a.
# Over a box its range is reached at a handful of points: the corners, at most one
# stationary point per edge, and the places where the line through a and b leaves
# the box beyond a focus. We compare that exact range with the plain interval
# extension.

# %%
import numpy as np

from tdoapave import IntervalBox, TdoaConstraint, critical_points, minimal_range, natural_range

c = TdoaConstraint((-1.0, -2.0), (2.0, 3.0))
print("baseline ||a-b|| =", c.baseline)

# %% [markdown]
# On the full frame both foci are inside, so the range is the whole of [-d, d].

# %%
frame = IntervalBox.from_bounds(-15, 15, -15, 15)
print("minimal", minimal_range(frame, c))
print("natural", natural_range(frame, c))

# %% [markdown]
# A small box far away. The natural extension pays for forgetting that both
# square roots share x; the exact range is much tighter.

# %%
box = IntervalBox.from_bounds(10, 11, 10, 11)
cps = critical_points(box, c)
print("minimal", minimal_range(box, c))
print("natural", natural_range(box, c))
print(len(cps.edge_points), "stationary edge points,", len(cps.ray_points), "ray points")

# %% [markdown]
# Brute force agrees.

# %%
g = np.linspace(0, 1, 801)
x1, x2 = np.meshgrid(10 + g, 10 + g)
v = np.hypot(x1 + 1, x2 + 2) - np.hypot(x1 - 2, x2 - 3)
print("grid    [%.15g, %.15g]" % (v.min(), v.max()))
