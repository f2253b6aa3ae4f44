# # A possibility distribution for the source position
#
# The measured pseudo-distances are described by mu(y) = exp(-||y - (2,1)||^2).
# Its alpha-cut is a disk of radius sqrt(-ln alpha). Pulling each cut back
# through F gives a nested family of sets X_alpha.

# %%
from tdoapave import IntervalBox, pave
from tdoapave.paver import layered_svg
from tdoapave.scenario import alpha_radius, default_alpha_levels
from tdoapave.separators import Correspondence, DiskSet, act_inverse, disk_separator

F = Correspondence.from_microphones([(-1, -2), (2, 3), (4, 1)])
frame = IntervalBox.from_bounds(-10, 10, -10, 10)

pavings = []
for i, alpha in enumerate(default_alpha_levels()):
    r = alpha_radius(alpha)
    p = pave(act_inverse(F, disk_separator(DiskSet((2, 1), r)), frame), frame, 0.05)
    pavings.append(p)
    print(f"i={i} alpha={alpha:.4g} radius={r:.4f} inner area={p.area('inside'):8.3f} "
          f"outer area={p.area('inside') + p.area('boundary'):8.3f}")

layered_svg(pavings, "alpha_cuts.svg")
