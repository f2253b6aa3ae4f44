# # Paving a hyperbolic band with both inclusion tests
#
# X = {x : 3 <= f(x) <= 5} over [-15,15]^2 at eps = 0.01. With the exact range the
# boundary boxes hug the two hyperbola branches. With the natural extension many
# boxes near the foci stay undecided, and the paver keeps splitting them.

# %%
import sys

from tdoapave import Interval, IntervalBox, TdoaConstraint, pave, tdoa_separator
from tdoapave.paver import paving_to_svg

c = TdoaConstraint((-1.0, -2.0), (2.0, 3.0))
frame = IntervalBox.from_bounds(-15, 15, -15, 15)
y = Interval(3.0, 5.0)
eps = float(sys.argv[1]) if len(sys.argv) > 1 else 0.01

# %%
res = {}
for method in ("kkt", "natural"):
    p = pave(tdoa_separator(c, y, method), frame, eps)
    res[method] = p
    s = p.stats
    print(f"{method:8} boxes={s.n_boxes:7d} leaves={s.n_leaves:7d} boundary={s.n_boundary:6d} time={s.wall_time:.2f}s")
    paving_to_svg(p, f"band_{method}.svg")

# %%
k, n = res["kkt"].stats, res["natural"].stats
print("ratio natural/kkt: boxes %.2f, time %.2f" % (n.n_boxes / k.n_boxes, n.wall_time / k.wall_time))
print("inner area kkt %.3f vs natural %.3f" % (res["kkt"].area("inside"), res["natural"].area("inside")))
