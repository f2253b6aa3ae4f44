# # Where can the source be, given a set of pseudo-distances?
#
# Three microphones give two differences of distances, F(x) = (f12(x), f23(x)).
# Y is the union of two disks in that plane. The inverse action of F on a
# separator for Y gives a separator for X = {x : F(x) in Y}, which the paver
# turns into an inner and outer approximation.

# %%
import numpy as np

from tdoapave import IntervalBox, pave
from tdoapave.paver import paving_to_svg
from tdoapave.separators import Correspondence, DiskSet, act_inverse, disk_separator

mics = [(-1, -2), (2, 3), (4, 1)]
F = Correspondence.from_microphones(mics)
sY = disk_separator(DiskSet((2, 1), 1.0)) | disk_separator(DiskSet((-1, -2), 1.0))
frame = IntervalBox.from_bounds(-15, 15, -15, 15)

p = pave(act_inverse(F, sY, frame), frame, 0.05)
print(p.stats.as_dict())
paving_to_svg(p, "two_disks.svg")

# %% [markdown]
# Spot check against the pointwise predicate.

# %%
rng = np.random.default_rng(0)
pts = rng.uniform(-15, 15, (20000, 2))
y = np.array([F(x) for x in pts])
member = (np.hypot(y[:, 0] - 2, y[:, 1] - 1) <= 1) | (np.hypot(y[:, 0] + 1, y[:, 1] + 2) <= 1)
cls = p.classify_points(pts)
print("IN but not member:", np.sum((cls == 1) & ~member))
print("OUT but member:   ", np.sum((cls == 0) & member))
print("undecided:        ", np.sum(cls == 2))
