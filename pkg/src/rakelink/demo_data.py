"""Deterministic synthetic corridor instances at production scale.

The generator ships in the package, not the test tree, so benchmarks, the
demo CLI and the browser UI all share one data source. Instances are a
linear trunk with two short branches; departures follow a bimodal
morning/evening mixture so density profiles show the two rush-hour bumps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import Timetable, Topology, Service, ValidationError, validate_timetable, validate_topology


class InfeasibleConfig(ValidationError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    station_count: int = 26
    corridor_length_km: float = 50.0
    services_target: int = 887
    morning_amplitude: float = 0.42  # share of departures in the morning bump
    evening_amplitude: float = 0.40  # share in the evening bump; rest is spread
    seed: int = 0


def generate(cfg: GeneratorConfig) -> tuple[Timetable, Topology]:
    """Timetable plus matching topology; same config and seed give identical
    output, byte for byte."""
    if cfg.station_count < 6:
        raise InfeasibleConfig(f"need at least 6 stations, got {cfg.station_count}")
    if cfg.services_target < 1:
        raise InfeasibleConfig(f"services_target must be >= 1, got {cfg.services_target}")
    if cfg.corridor_length_km <= 0:
        raise InfeasibleConfig(f"corridor_length_km must be > 0, got {cfg.corridor_length_km}")
    if cfg.morning_amplitude < 0 or cfg.evening_amplitude < 0 or cfg.morning_amplitude + cfg.evening_amplitude > 1:
        raise InfeasibleConfig("bump amplitudes must be >= 0 and sum to at most 1")

    rng = random.Random(cfg.seed)

    # stations: a trunk T00..Txx plus two 2-station branches when room allows
    branched = cfg.station_count >= 10
    trunk_count = cfg.station_count - 4 if branched else cfg.station_count
    spacing = cfg.corridor_length_km / (trunk_count - 1)
    coords: dict[str, tuple[float, float, str | None]] = {}  # (trunk km, branch offset km, branch tag)
    trunk = [f"T{k:02d}" for k in range(trunk_count)]
    for k, name in enumerate(trunk):
        coords[name] = (k * spacing, 0.0, None)
    termini = [trunk[0], trunk[-1]]
    if branched:
        for tag, junction in (("A", trunk_count // 3), ("B", (2 * trunk_count) // 3)):
            jpos = junction * spacing
            for step in (1, 2):
                name = f"{tag}{step}"
                coords[name] = (jpos, 3.0 * step, tag)
            termini.append(f"{tag}2")

    def sdist(u: str, v: str) -> float:
        pu, ou, tu = coords[u]
        pv, ov, tv = coords[v]
        if tu == tv:
            return abs(pu - pv) if tu is None else abs(ou - ov)
        return ou + abs(pu - pv) + ov

    mid = trunk[trunk_count // 2]
    routes = [(trunk[0], trunk[-1])] * 5 + [(trunk[0], mid), (mid, trunk[-1])]
    if branched:
        routes += [("A2", trunk[-1]), ("B2", trunk[0])] * 2

    services = []
    for k in range(cfg.services_target):
        a, b = rng.choice(routes)
        if rng.random() < 0.5:
            a, b = b, a
        run_km = sdist(a, b)
        speed = rng.uniform(36.0, 44.0)
        duration = int(run_km / speed * 3600) + 300
        while True:
            r = rng.random()
            if r < cfg.morning_amplitude:
                t = rng.gauss(8.3 * 3600, 4500)
            elif r < cfg.morning_amplitude + cfg.evening_amplitude:
                t = rng.gauss(18.2 * 3600, 4800)
            else:
                t = rng.uniform(4.5 * 3600, 22.5 * 3600)
            dep = int(t)
            if 0 <= dep and dep + duration <= 86400:
                break
        services.append(
            Service(
                service_id=f"S{k:04d}",
                origin=a,
                destination=b,
                dep_time=dep,
                arr_time=dep + duration,
                run_distance_km=round(run_km, 3),
            )
        )

    tt = validate_timetable(services)
    stations = sorted(coords)
    records = [(u, v, round(sdist(u, v), 3)) for i, u in enumerate(stations) for v in stations[i + 1 :]]
    topo = validate_topology(records, tt)
    return tt, topo
