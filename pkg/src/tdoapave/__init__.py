"""Interval set inversion for TDoA constraints with an exact (minimal) range test."""

from .interval import BoolInterval, Interval, IntervalBox, set_minus_hull
from .tdoa import (
    CriticalPointSet,
    TdoaConstraint,
    critical_points,
    inclusion_test,
    minimal_range,
    natural_range,
    phi1,
    phi2,
    tdoa_eval,
)
from .separators import (
    Contractor,
    Correspondence,
    DiskSet,
    Separator,
    act_forward,
    act_inverse,
    backward,
    binary_contractor,
    contract_pair,
    disk_separator,
    forward,
    sep_intersection,
    sep_union,
    tdoa_separator,
)
from .paver import Membership, Paving, pave, paving_contains, read_paving

__version__ = "0.1.0"
