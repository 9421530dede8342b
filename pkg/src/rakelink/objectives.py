"""Operational objectives of a rake-link cover, and service-density profiling.

Five objectives, all minimized: fleet size, worst headway, worst deadhead
distance, spread of link lengths, spread of course lengths. Standard
deviations are population standard deviations (the link set is the whole
population, not a sample); statistics.pstdev computes them with exact
rational arithmetic, so results are deterministic and invariant under link
permutation.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from statistics import pstdev
from typing import Mapping

import numpy as np

from .feasgraph import link_metrics
from .model import Timetable, Topology, ValidationError, canon_num, canonical_json
from .pathcover import CoverSolution


class InvalidCover(ValidationError):
    pass


@dataclass(frozen=True, slots=True)
class ObjectiveVector:
    """f1 fleet size, f2 max headway (s), f3 max deadhead (km),
    f4 link-length std dev, f5 course-length std dev (km)."""

    f1: int
    f2: int
    f3: float
    f4: float
    f5: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.f1, self.f2, self.f3, self.f4, self.f5)

    def as_dict(self) -> dict:
        return {
            "f1": self.f1,
            "f2": self.f2,
            "f3": canon_num(self.f3),
            "f4": canon_num(self.f4),
            "f5": canon_num(self.f5),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ObjectiveVector":
        return cls(f1=int(d["f1"]), f2=int(d["f2"]), f3=float(d["f3"]), f4=float(d["f4"]), f5=float(d["f5"]))


OBJECTIVE_NAMES = ("f1", "f2", "f3", "f4", "f5")


def evaluate(sol: CoverSolution, tt: Timetable, topo: Topology) -> ObjectiveVector:
    """Objective vector of a cover; raises InvalidCover if the links do not
    partition the services or chain through an impossible pair."""
    n = len(tt.services)
    seen = [False] * n
    for link in sol.links:
        if not link.services:
            raise InvalidCover("empty rake-link")
        for k in link.services:
            if not 0 <= k < n or seen[k]:
                raise InvalidCover(f"service index {k} missing or covered twice")
            seen[k] = True
    if not all(seen):
        raise InvalidCover("cover does not include every service")

    max_h = 0
    max_d = 0.0
    lengths: list[int] = []
    courses: list[float] = []
    for link in sol.links:
        svcs = [tt.services[k] for k in link.services]
        lengths.append(len(svcs))
        courses.append(sum(s.run_distance_km for s in svcs))
        for a, b in zip(svcs, svcs[1:]):
            h, d = link_metrics(a, b, topo)
            if h < 0 or not math.isfinite(d):
                raise InvalidCover(f"services {a.service_id!r} -> {b.service_id!r} cannot chain")
            if h > max_h:
                max_h = h
            if d > max_d:
                max_d = d
    return ObjectiveVector(
        f1=len(sol.links),
        f2=max_h,
        f3=max_d,
        f4=pstdev(lengths) if len(lengths) > 1 else 0.0,
        f5=pstdev(courses) if len(courses) > 1 else 0.0,
    )


@dataclass(frozen=True)
class DensityProfile:
    """counts[t] = number of services live during second t, live on [dep, arr)."""

    counts: tuple[int, ...]


def density_profile(tt: Timetable) -> DensityProfile:
    """Per-second live-service counts via a +1/-1 event sweep and prefix sum."""
    delta = np.zeros(tt.day_length + 1, dtype=np.int32)
    for s in tt.services:
        delta[s.dep_time] += 1
        delta[s.arr_time] -= 1
    counts = np.cumsum(delta[: tt.day_length])
    return DensityProfile(counts=tuple(counts.tolist()))


def peak_density(dp: DensityProfile) -> int:
    """Highest simultaneous live-service count; lower-bounds every feasible
    fleet size, because time-overlapping services cannot share a rake."""
    return max(dp.counts, default=0)


def density_csv(dp: DensityProfile, rle: bool = False) -> str:
    """CSV rows second,count. With rle=True only change points are emitted
    (each row holds from that second until the next row's second)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["second", "count"])
    if rle:
        prev = None
        for t, c in enumerate(dp.counts):
            if c != prev:
                writer.writerow([t, c])
                prev = c
    else:
        for t, c in enumerate(dp.counts):
            writer.writerow([t, c])
    return out.getvalue()


def density_json(dp: DensityProfile) -> str:
    return canonical_json({"peak": peak_density(dp), "counts": list(dp.counts)})
