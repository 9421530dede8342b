"""Non-dominated sorting into Pareto fronts, per-front objective minima,
and objective-space clusters.

All objectives are minimized. Sorting uses the domination-count scheme over
numpy row comparisons, so it stays usable at full-sweep scale; the tests
cross-check it against plain pairwise peeling.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .model import canon_num

if TYPE_CHECKING:  # pragma: no cover
    from .sweep import SweepRecord

Vector = Sequence[float]


def dominates(a: Vector, b: Vector) -> bool:
    """True iff a <= b componentwise and a < b in at least one component."""
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


@dataclass(frozen=True)
class FrontAssignment:
    """fronts[k] holds the record indices of front k+1, ascending;
    front_of[i] is the 1-based front number of record i."""

    fronts: tuple[tuple[int, ...], ...]
    front_of: tuple[int, ...]


def sort_fronts(records: Sequence[Vector]) -> FrontAssignment:
    """Peel records into Pareto fronts: front 1 is the non-dominated set,
    front k+1 the non-dominated set once fronts <= k are removed."""
    n = len(records)
    if n == 0:
        return FrontAssignment(fronts=(), front_of=())
    vecs = np.asarray(records, dtype=float)
    dominated_by = np.zeros(n, dtype=np.int64)
    dominates_idx: list[np.ndarray] = []
    for i in range(n):
        le = (vecs[i] <= vecs).all(axis=1)
        lt = (vecs[i] < vecs).any(axis=1)
        dom = np.nonzero(le & lt)[0]
        dominates_idx.append(dom)
        dominated_by[dom] += 1

    front_of = [0] * n
    fronts: list[tuple[int, ...]] = []
    current = np.nonzero(dominated_by == 0)[0].tolist()
    k = 1
    while current:
        fronts.append(tuple(current))
        for i in current:
            front_of[i] = k
        nxt: list[int] = []
        for i in current:
            for j in dominates_idx[i].tolist():
                dominated_by[j] -= 1
                if dominated_by[j] == 0:
                    nxt.append(j)
        current = sorted(nxt)
        k += 1
    return FrontAssignment(fronts=tuple(fronts), front_of=tuple(front_of))


def front_minima(fa: FrontAssignment, records: Sequence[Vector]) -> tuple[tuple[int, tuple[float, ...]], ...]:
    """Componentwise minimum per front. Rows are not solutions: each cell is
    the best value any member of that front attains for that objective."""
    rows = []
    for k, members in enumerate(fa.fronts, start=1):
        width = len(records[members[0]])
        mins = tuple(min(records[i][d] for i in members) for d in range(width))
        rows.append((k, mins))
    return tuple(rows)


@dataclass(frozen=True)
class Cluster:
    """Records of one front whose objective vectors (nearly) coincide.

    With epsilon all zero, members share an identical vector. With a
    positive epsilon, membership is anchored to the representative (the
    first member by record index): every member lies within epsilon of it
    componentwise.
    """

    front: int
    cluster_id: int
    members: tuple[int, ...]
    representative: tuple[float, ...]
    epsilon: tuple[float, ...]


def find_clusters(
    fa: FrontAssignment,
    records: Sequence[Vector],
    epsilon: float | Sequence[float] = 0.0,
) -> tuple[Cluster, ...]:
    """Group each front's records by (near-)identical objective vectors.

    Identical decision bounds never matter here; coincidence in objective
    space is exactly the many-to-one structure being reported.
    """
    if not fa.fronts:
        return ()
    width = len(records[fa.fronts[0][0]])
    eps = _normalize_epsilon(epsilon, width)
    out: list[Cluster] = []
    exact = all(e == 0 for e in eps)
    for k, members in enumerate(fa.fronts, start=1):
        if exact:
            groups: dict[tuple[float, ...], list[int]] = {}
            for i in members:
                groups.setdefault(tuple(records[i]), []).append(i)
            front_clusters = list(groups.items())
        else:
            front_clusters = []
            for i in members:
                v = tuple(records[i])
                for rep, bucket in front_clusters:
                    if all(abs(x - r) <= e for x, r, e in zip(v, rep, eps)):
                        bucket.append(i)
                        break
                else:
                    front_clusters.append((v, [i]))
        for cid, (rep, bucket) in enumerate(front_clusters, start=1):
            out.append(
                Cluster(front=k, cluster_id=cid, members=tuple(bucket), representative=rep, epsilon=eps)
            )
    return tuple(out)


def _normalize_epsilon(epsilon, width: int) -> tuple[float, ...]:
    if isinstance(epsilon, (int, float)):
        eps = (float(epsilon),) * width
    else:
        eps = tuple(float(e) for e in epsilon)
        if len(eps) != width:
            raise ValueError(f"epsilon must be a scalar or length-{width} vector, got {epsilon!r}")
    if any(e < 0 for e in eps):
        raise ValueError(f"epsilon must be componentwise >= 0, got {epsilon!r}")
    return eps


# ---------------------------------------------------------------------------
# CSV exports

def fronts_csv(fa: FrontAssignment, record_ids: Sequence[int] | None = None) -> str:
    """record_ids maps local positions back to manifest rows, so output on a
    filtered subset stays traceable to the original sweep."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["record_id", "front"])
    for i, k in enumerate(fa.front_of):
        writer.writerow([record_ids[i] if record_ids is not None else i, k])
    return out.getvalue()


def front_minima_csv(fa: FrontAssignment, records: Sequence[Vector]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["front", "min_f1", "min_f2", "min_f3", "min_f4", "min_f5"])
    for k, mins in front_minima(fa, records):
        writer.writerow([k] + [canon_num(float(v)) for v in mins])
    return out.getvalue()


def clusters_csv(
    clusters: Sequence[Cluster],
    sweep_records: Sequence["SweepRecord"],
    record_ids: Sequence[int] | None = None,
) -> str:
    """One row per (cluster, member) with the member's bounds and objectives,
    so functionally equivalent decision tuples sit side by side."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["front", "cluster_id", "record_id", "w_min", "w_max", "d_max", "v_avg_max", "f1", "f2", "f3", "f4", "f5"]
    )
    for c in clusters:
        for i in c.members:
            rec = sweep_records[i]
            b = rec.bounds
            o = rec.objectives
            writer.writerow(
                [
                    c.front,
                    c.cluster_id,
                    record_ids[i] if record_ids is not None else i,
                    canon_num(b.w_min),
                    canon_num(b.w_max),
                    canon_num(b.d_max),
                    canon_num(b.v_avg_max),
                    o.f1,
                    o.f2,
                    canon_num(o.f3),
                    canon_num(o.f4),
                    canon_num(o.f5),
                ]
            )
    return out.getvalue()
