"""Scenario files (JSON) and the library-level experiment runners used by the CLI."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .interval import Interval, IntervalBox
from .paver import Paving, pave
from .separators import (
    Correspondence,
    DiskSet,
    act_inverse,
    disk_separator,
    tdoa_separator,
)
from .tdoa import TdoaConstraint, critical_points, minimal_range, natural_range

__all__ = [
    "ConfigError",
    "Scenario",
    "default_alpha_levels",
    "alpha_radius",
    "run_range",
    "run_pave",
    "run_compose",
    "run_localize",
    "run_compare",
]

METHODS = ("kkt", "natural")


class ConfigError(ValueError):
    """Invalid or incomplete scenario; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


def default_alpha_levels(n: int = 6) -> list[float]:
    """``exp(-2**(i-1))`` for ``i = 0 .. n-1``."""
    return [math.exp(-(2.0 ** (i - 1))) for i in range(n)]


def alpha_radius(alpha: float) -> float:
    """Radius of the alpha-cut of ``exp(-||y - center||^2)``."""
    return math.sqrt(-math.log(alpha))


def _point(v: Any, name: str) -> tuple[float, float]:
    try:
        x, y = v
        return float(x), float(y)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected a 2-D point, got {v!r}") from None


def _interval(v: Any, name: str) -> Interval:
    try:
        lo, hi = v
        return Interval(float(lo), float(hi))
    except (TypeError, ValueError) as e:
        raise ConfigError(name, f"expected [lo, hi], got {v!r} ({e})") from None


def _box(v: Any, name: str) -> IntervalBox:
    try:
        return IntervalBox(_interval(d, name) for d in v)
    except TypeError:
        raise ConfigError(name, f"expected a list of [lo, hi] pairs, got {v!r}") from None


@dataclass
class Scenario:
    frame: IntervalBox
    eps: float
    method: str = "kkt"
    microphones: list[tuple[float, float]] = field(default_factory=list)
    foci: tuple[tuple[float, float], tuple[float, float]] | None = None
    y_interval: Interval | None = None
    disks: list[DiskSet] = field(default_factory=list)
    alpha_levels: list[float] = field(default_factory=list)
    mu_center: tuple[float, float] = (2.0, 1.0)
    box: IntervalBox | None = None

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if len(self.frame) != 2:
            raise ConfigError("frame", "must be 2-D")
        if not self.frame.is_finite() or self.frame.is_empty():
            raise ConfigError("frame", "must be finite and non-empty")
        if any(d.width() <= 0.0 for d in self.frame):
            raise ConfigError("frame", "must be non-degenerate")
        if not (isinstance(self.eps, (int, float)) and self.eps > 0.0 and math.isfinite(self.eps)):
            raise ConfigError("eps", f"must be a positive number, got {self.eps!r}")
        if self.method not in METHODS:
            raise ConfigError("method", f"must be one of {METHODS}, got {self.method!r}")
        for a in self.alpha_levels:
            if not 0.0 < a <= 1.0:
                raise ConfigError("alpha_levels", f"alpha must lie in (0, 1], got {a}")
        if any(b >= a for a, b in zip(self.alpha_levels, self.alpha_levels[1:])):
            raise ConfigError("alpha_levels", "must be strictly decreasing")
        if self.box is not None and len(self.box) != 2:
            raise ConfigError("box", "must be 2-D")

    # -- (de)serialisation -------------------------------------------------

    @classmethod
    def from_dict(cls, d: dict) -> Scenario:
        known = {
            "frame", "eps", "method", "microphones", "foci", "y_interval",
            "disks", "alpha_levels", "mu_center", "box",
        }
        unknown = set(d) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        if "frame" not in d:
            raise ConfigError("frame", "missing")
        if "eps" not in d:
            raise ConfigError("eps", "missing")
        foci = d.get("foci")
        if foci is not None:
            if len(foci) != 2:
                raise ConfigError("foci", "expected two points")
            foci = (_point(foci[0], "foci"), _point(foci[1], "foci"))
        disks = []
        for k in d.get("disks", []):
            try:
                disks.append(DiskSet(_point(k["center"], "disks"), float(k["radius"])))
            except (KeyError, TypeError, ValueError) as e:
                raise ConfigError("disks", f"bad disk {k!r} ({e})") from None
        eps = d["eps"]
        if isinstance(eps, bool) or not isinstance(eps, (int, float)):
            raise ConfigError("eps", f"must be a number, got {eps!r}")
        return cls(
            frame=_box(d["frame"], "frame"),
            eps=float(eps),
            method=d.get("method", "kkt"),
            microphones=[_point(m, "microphones") for m in d.get("microphones", [])],
            foci=foci,
            y_interval=None if d.get("y_interval") is None else _interval(d["y_interval"], "y_interval"),
            disks=disks,
            alpha_levels=[float(a) for a in d.get("alpha_levels", [])],
            mu_center=_point(d.get("mu_center", (2.0, 1.0)), "mu_center"),
            box=None if d.get("box") is None else _box(d["box"], "box"),
        )

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "frame": [[i.lo, i.hi] for i in self.frame],
            "eps": self.eps,
            "method": self.method,
        }
        if self.microphones:
            d["microphones"] = [list(m) for m in self.microphones]
        if self.foci is not None:
            d["foci"] = [list(self.foci[0]), list(self.foci[1])]
        if self.y_interval is not None:
            d["y_interval"] = [self.y_interval.lo, self.y_interval.hi]
        if self.disks:
            d["disks"] = [{"center": list(k.center), "radius": k.radius} for k in self.disks]
        if self.alpha_levels:
            d["alpha_levels"] = list(self.alpha_levels)
        if self.mu_center != (2.0, 1.0):
            d["mu_center"] = list(self.mu_center)
        if self.box is not None:
            d["box"] = [[i.lo, i.hi] for i in self.box]
        return d

    @classmethod
    def load(cls, path: str | Path) -> Scenario:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError("scenario", str(e)) from None
        if not isinstance(data, dict):
            raise ConfigError("scenario", "top level must be a JSON object")
        return cls.from_dict(data)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def replace(self, **kw) -> Scenario:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d.update(kw)
        return Scenario(**d)

    # -- derived objects ---------------------------------------------------

    def constraint(self) -> TdoaConstraint:
        if self.foci is None:
            raise ConfigError("foci", "required for this command")
        return TdoaConstraint(*self.foci)

    def correspondence(self, min_mics: int = 2) -> Correspondence:
        if len(self.microphones) < min_mics:
            raise ConfigError(
                "microphones", f"need at least {min_mics}, got {len(self.microphones)}"
            )
        return Correspondence.from_microphones(self.microphones, self.method)


# -- runners ----------------------------------------------------------------


def run_range(sc: Scenario, box: IntervalBox | None = None) -> dict:
    """Exact and natural ranges of f over ``box`` (default: scenario box, else frame)."""
    c = sc.constraint()
    box = box or sc.box or sc.frame
    cps = critical_points(box, c)
    return {
        "box": box,
        "minimal": minimal_range(box, c),
        "natural": natural_range(box, c),
        "critical_points": cps,
    }


def run_pave(sc: Scenario, threads: int = 1) -> Paving:
    """Pave ``{x : f(x) in y_interval}``."""
    c = sc.constraint()
    if sc.y_interval is None:
        raise ConfigError("y_interval", "required for this command")
    return pave(tdoa_separator(c, sc.y_interval, sc.method), sc.frame, sc.eps, threads)


def run_compose(sc: Scenario, threads: int = 1) -> Paving:
    """Pave the positions whose pseudo-distance vector falls in the union of disks."""
    F = sc.correspondence(min_mics=3)
    if not sc.disks:
        raise ConfigError("disks", "at least one disk is required")
    sY = disk_separator(sc.disks[0])
    for d in sc.disks[1:]:
        sY = sY | disk_separator(d)
    return pave(act_inverse(F, sY, sc.frame), sc.frame, sc.eps, threads)


def run_localize(sc: Scenario, threads: int = 1) -> list[Paving]:
    """One paving per alpha-cut of ``exp(-||y - mu_center||^2)``."""
    F = sc.correspondence(min_mics=2)
    if not sc.alpha_levels:
        raise ConfigError("alpha_levels", "required for this command")
    out = []
    for alpha in sc.alpha_levels:
        sY = disk_separator(DiskSet(sc.mu_center, alpha_radius(alpha)))
        out.append(pave(act_inverse(F, sY, sc.frame), sc.frame, sc.eps, threads))
    return out


def run_compare(sc: Scenario, threads: int = 1) -> dict:
    """Pave with both range methods at the same eps and compare counts and timings."""
    res: dict[str, Any] = {"eps": sc.eps}
    for m in METHODS:
        t0 = time.perf_counter()
        p = run_pave(sc.replace(method=m), threads)
        wall = time.perf_counter() - t0
        st = p.stats.as_dict()
        st["wall_time"] = wall
        res[m] = st
    res["ratio_leaves"] = res["natural"]["n_leaves"] / res["kkt"]["n_leaves"]
    res["ratio_boxes"] = res["natural"]["n_boxes"] / res["kkt"]["n_boxes"]
    res["ratio_time"] = res["natural"]["wall_time"] / max(res["kkt"]["wall_time"], 1e-12)
    return res
