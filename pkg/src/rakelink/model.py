"""Domain model for rake-link planning: services, timetables, station
topology, decision bounds, and the canonical CSV/JSON wire formats.

All model types are immutable after construction and safe to share across
worker processes. Times are integer seconds since midnight of a single
operating day; services that would cross midnight are rejected rather than
split, which keeps the feasibility graph acyclic by construction.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

DAY_SECONDS = 86400
INF = math.inf

StationId = str

TIMETABLE_HEADER = ("service_id", "origin", "destination", "dep_time", "arr_time", "run_distance_km")
TOPOLOGY_HEADER = ("station_a", "station_b", "distance_km")


class ValidationError(ValueError):
    """Base class for rejected input data."""


class DuplicateServiceId(ValidationError):
    pass


class TimeOrderViolation(ValidationError):
    pass


class OutOfRangeTime(ValidationError):
    pass


class MissingStation(ValidationError):
    pass


class AsymmetricDistance(ValidationError):
    pass


class NegativeDistance(ValidationError):
    pass


class InadmissibleBounds(ValidationError):
    pass


@dataclass(frozen=True, slots=True)
class Service:
    """One scheduled run: origin -> destination with fixed times.

    dep_time lies in [0, 86400), arr_time in (0, 86400], dep < arr.
    run_distance_km is the revenue distance of the run itself, taken from
    input data (routes need not be shortest paths through the topology).
    """

    service_id: str
    origin: StationId
    destination: StationId
    dep_time: int
    arr_time: int
    run_distance_km: float


@dataclass(frozen=True)
class Timetable:
    """Validated day timetable, ordered by (dep_time, service_id)."""

    services: tuple[Service, ...]
    day_length: int = DAY_SECONDS

    def __len__(self) -> int:
        return len(self.services)

    def service_ids(self) -> tuple[str, ...]:
        return tuple(s.service_id for s in self.services)

    def stations(self) -> frozenset[StationId]:
        return frozenset(s.origin for s in self.services) | frozenset(s.destination for s in self.services)


@dataclass(frozen=True)
class Topology:
    """Station set plus symmetric deadhead distances in km.

    A pair without an entry has distance +inf: no deadhead move exists
    between those stations, under any bound.
    """

    stations: frozenset[StationId]
    deadhead_km: Mapping[tuple[StationId, StationId], float]

    def distance(self, a: StationId, b: StationId) -> float:
        if a == b:
            return 0.0
        return self.deadhead_km.get((a, b), INF)


@dataclass(frozen=True, slots=True)
class Bounds:
    """Decision bounds: waiting-time window [w_min, w_max] in seconds,
    maximum deadhead distance in km, maximum average deadhead speed in km/h.
    Any bound may be +inf."""

    w_min: float
    w_max: float
    d_max: float
    v_avg_max: float

    def __post_init__(self) -> None:
        for name in ("w_min", "w_max", "d_max"):
            v = getattr(self, name)
            if not _is_number(v) or not v >= 0:
                raise ValidationError(f"{name} must be a number >= 0 or inf, got {v!r}")
        if not _is_number(self.v_avg_max) or not self.v_avg_max > 0:
            raise ValidationError(f"v_avg_max must be a number > 0 or inf, got {self.v_avg_max!r}")

    @property
    def admissible(self) -> bool:
        """Usable iff the waiting window is non-degenerate (w_max > w_min)."""
        return self.w_max > self.w_min

    def as_dict(self) -> dict:
        return {
            "w_min": canon_num(self.w_min),
            "w_max": canon_num(self.w_max),
            "d_max": canon_num(self.d_max),
            "v_avg_max": canon_num(self.v_avg_max),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Bounds":
        try:
            return cls(
                w_min=num_from_wire(d["w_min"]),
                w_max=num_from_wire(d["w_max"]),
                d_max=num_from_wire(d["d_max"]),
                v_avg_max=num_from_wire(d["v_avg_max"]),
            )
        except KeyError as exc:
            raise ValidationError(f"bounds missing field {exc.args[0]!r}") from None


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and not (isinstance(v, float) and math.isnan(v))


# ---------------------------------------------------------------------------
# validation

def validate_timetable(raw_services: Iterable[Service | Mapping]) -> Timetable:
    """Check every service invariant and return the normalized timetable.

    Accepts Service instances or mapping records with the same field names.
    Ordering is normalized to (dep_time, service_id) ascending.
    """
    services: list[Service] = []
    for rec in raw_services:
        svc = rec if isinstance(rec, Service) else Service(**dict(rec))
        _check_service(svc)
        services.append(svc)
    if not services:
        raise ValidationError("timetable has no services")
    seen: set[str] = set()
    for svc in services:
        if svc.service_id in seen:
            raise DuplicateServiceId(f"duplicate service_id {svc.service_id!r}")
        seen.add(svc.service_id)
    services.sort(key=lambda s: (s.dep_time, s.service_id))
    return Timetable(services=tuple(services))


def _check_service(s: Service) -> None:
    if not isinstance(s.service_id, str) or not s.service_id:
        raise ValidationError(f"service_id must be a non-empty string, got {s.service_id!r}")
    for label, station in (("origin", s.origin), ("destination", s.destination)):
        if not isinstance(station, str) or not station:
            raise ValidationError(f"service {s.service_id!r}: {label} must be a non-empty station id")
    for label, t in (("dep_time", s.dep_time), ("arr_time", s.arr_time)):
        if isinstance(t, bool) or not isinstance(t, int):
            raise OutOfRangeTime(
                f"service {s.service_id!r}: {label} must be an integer second count, got {t!r}"
            )
    if not 0 <= s.dep_time < DAY_SECONDS:
        raise OutOfRangeTime(f"service {s.service_id!r}: dep_time {s.dep_time} outside [0, {DAY_SECONDS})")
    if not 0 < s.arr_time <= DAY_SECONDS:
        raise OutOfRangeTime(f"service {s.service_id!r}: arr_time {s.arr_time} outside (0, {DAY_SECONDS}]")
    if s.arr_time <= s.dep_time:
        raise TimeOrderViolation(
            f"service {s.service_id!r}: dep_time {s.dep_time} must precede arr_time {s.arr_time}"
        )
    if not _is_number(s.run_distance_km) or not math.isfinite(s.run_distance_km) or s.run_distance_km < 0:
        raise NegativeDistance(
            f"service {s.service_id!r}: run_distance_km must be a finite number >= 0, got {s.run_distance_km!r}"
        )


def validate_topology(
    raw: Mapping[tuple[StationId, StationId], float] | Iterable[tuple[StationId, StationId, float]],
    timetable: Timetable,
) -> Topology:
    """Build the symmetric topology and check it covers the timetable.

    The symmetric closure is applied (a single direction inherits to the
    other), the diagonal is forced to 0, and every station used by the
    timetable must appear in at least one record.
    """
    given: dict[tuple[StationId, StationId], float] = {}
    stations: set[StationId] = set()
    for a, b, km in _iter_topology_records(raw):
        for label, station in (("station_a", a), ("station_b", b)):
            if not isinstance(station, str) or not station:
                raise ValidationError(f"{label} must be a non-empty station id, got {station!r}")
        if not _is_number(km) or km < 0:
            raise NegativeDistance(f"distance for ({a}, {b}) must be a number >= 0, got {km!r}")
        km = 0.0 if a == b else float(km)
        if (a, b) in given and given[(a, b)] != km:
            raise AsymmetricDistance(f"conflicting distances for ({a}, {b}): {given[(a, b)]} vs {km}")
        given[(a, b)] = km
        stations.add(a)
        stations.add(b)
    dist: dict[tuple[StationId, StationId], float] = {}
    for (a, b), km in sorted(given.items()):
        back = given.get((b, a))
        if back is not None and back != km:
            raise AsymmetricDistance(f"distance ({a} -> {b}) = {km} but ({b} -> {a}) = {back}")
        if a != b:
            dist[(a, b)] = km
            dist[(b, a)] = km
    used = {s.origin for s in timetable.services} | {s.destination for s in timetable.services}
    missing = sorted(used - stations)
    if missing:
        raise MissingStation(f"timetable stations missing from topology: {', '.join(missing)}")
    return Topology(stations=frozenset(stations), deadhead_km=dist)


def _iter_topology_records(raw):
    if isinstance(raw, Mapping):
        for (a, b), km in raw.items():
            yield a, b, km
    else:
        for a, b, km in raw:
            yield a, b, km


# ---------------------------------------------------------------------------
# time and number parsing

def parse_time_of_day(text: str) -> int:
    """Parse integer seconds or HH:MM:SS into seconds since midnight.

    Sub-second precision is rejected: feasibility tests rely on exact
    integer comparison.
    """
    t = str(text).strip()
    if ":" in t:
        parts = t.split(":")
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise OutOfRangeTime(f"time {text!r} is not HH:MM:SS")
        h, m, s = (int(p) for p in parts)
        if m >= 60 or s >= 60:
            raise OutOfRangeTime(f"time {text!r} has minutes/seconds outside 0..59")
        return h * 3600 + m * 60 + s
    try:
        return int(t)
    except ValueError:
        raise OutOfRangeTime(
            f"time {text!r} must be an integer second count or HH:MM:SS (sub-second precision is rejected)"
        ) from None


def canon_num(x: float):
    """Canonical wire form of a non-negative quantity: 'inf', int, or float."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        if x.is_integer():
            return int(x)
    return x


def num_from_wire(v) -> float:
    if v == "inf":
        return INF
    if _is_number(v):
        return v
    raise ValidationError(f"expected a number or 'inf', got {v!r}")


def _parse_distance(text: str, context: str) -> float:
    t = text.strip()
    if t == "inf":
        return INF
    try:
        return float(t)
    except ValueError:
        raise ValidationError(f"{context}: bad distance {text!r}") from None


def canonical_json(obj) -> str:
    """Deterministic JSON text: fixed key order, no whitespace, no NaN/inf
    floats (infinite bounds are pre-encoded as the string 'inf')."""
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# CSV wire format

def parse_timetable_csv(text: str) -> Timetable:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != TIMETABLE_HEADER:
        raise ValidationError(
            f"timetable CSV header must be {','.join(TIMETABLE_HEADER)}, got {reader.fieldnames}"
        )
    records = []
    for row in reader:
        if any(row[k] is None for k in TIMETABLE_HEADER):
            raise ValidationError(f"timetable CSV row is short: {row}")
        records.append(
            Service(
                service_id=row["service_id"].strip(),
                origin=row["origin"].strip(),
                destination=row["destination"].strip(),
                dep_time=parse_time_of_day(row["dep_time"]),
                arr_time=parse_time_of_day(row["arr_time"]),
                run_distance_km=_parse_run_distance(row["run_distance_km"], row["service_id"]),
            )
        )
    return validate_timetable(records)


def _parse_run_distance(text: str, service_id: str) -> float:
    km = _parse_distance(text, f"service {service_id!r}")
    if math.isinf(km):
        raise ValidationError(f"service {service_id!r}: run_distance_km cannot be inf")
    return km


def timetable_csv(tt: Timetable) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TIMETABLE_HEADER)
    for s in tt.services:
        writer.writerow([s.service_id, s.origin, s.destination, s.dep_time, s.arr_time, _fmt_num(s.run_distance_km)])
    return out.getvalue()


def parse_topology_csv(text: str, timetable: Timetable) -> Topology:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != TOPOLOGY_HEADER:
        raise ValidationError(
            f"topology CSV header must be {','.join(TOPOLOGY_HEADER)}, got {reader.fieldnames}"
        )
    records = []
    for row in reader:
        if any(row[k] is None for k in TOPOLOGY_HEADER):
            raise ValidationError(f"topology CSV row is short: {row}")
        a = row["station_a"].strip()
        b = row["station_b"].strip()
        records.append((a, b, _parse_distance(row["distance_km"], f"pair ({a}, {b})")))
    return validate_topology(records, timetable)


def topology_csv(topo: Topology) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TOPOLOGY_HEADER)
    paired: set[StationId] = set()
    for (a, b), km in sorted(topo.deadhead_km.items()):
        if a < b:
            writer.writerow([a, b, _fmt_num(km)])
            paired.add(a)
            paired.add(b)
    # stations with no off-diagonal entry still need a row to survive parsing
    for a in sorted(topo.stations - paired):
        writer.writerow([a, a, 0])
    return out.getvalue()


def _fmt_num(x: float) -> str:
    return str(canon_num(x))


def read_timetable_csv(path) -> Timetable:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_timetable_csv(fh.read())


def read_topology_csv(path, timetable: Timetable) -> Topology:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_topology_csv(fh.read(), timetable)


# ---------------------------------------------------------------------------
# canonical JSON wire format

def timetable_json(tt: Timetable) -> str:
    doc = {
        "day_length": tt.day_length,
        "services": [
            {
                "service_id": s.service_id,
                "origin": s.origin,
                "destination": s.destination,
                "dep_time": s.dep_time,
                "arr_time": s.arr_time,
                "run_distance_km": canon_num(s.run_distance_km),
            }
            for s in tt.services
        ],
    }
    return canonical_json(doc)


def timetable_from_json(text: str) -> Timetable:
    doc = json.loads(text)
    if doc.get("day_length", DAY_SECONDS) != DAY_SECONDS:
        raise ValidationError(f"day_length is fixed at {DAY_SECONDS}, got {doc.get('day_length')!r}")
    records = [
        Service(
            service_id=r["service_id"],
            origin=r["origin"],
            destination=r["destination"],
            dep_time=r["dep_time"],
            arr_time=r["arr_time"],
            run_distance_km=float(r["run_distance_km"]),
        )
        for r in doc["services"]
    ]
    return validate_timetable(records)


def topology_json(topo: Topology) -> str:
    pairs = [[a, b, canon_num(km)] for (a, b), km in sorted(topo.deadhead_km.items()) if a < b]
    doc = {"stations": sorted(topo.stations), "deadhead_km": pairs}
    return canonical_json(doc)


def topology_from_json(text: str, timetable: Timetable) -> Topology:
    doc = json.loads(text)
    records = [(a, b, num_from_wire(km)) for a, b, km in doc["deadhead_km"]]
    records += [(a, a, 0.0) for a in doc["stations"]]
    return validate_topology(records, timetable)
