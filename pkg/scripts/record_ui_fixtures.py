#!/usr/bin/env python3
"""Record live API responses into frontend/test/fixtures/.

The frontend contract tests replay these files instead of talking to a
server, so regenerate them whenever the API shape changes:

    python scripts/record_ui_fixtures.py
"""

import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

from rakelink.demo_data import GeneratorConfig, generate
from rakelink.model import timetable_csv, topology_csv, validate_timetable, validate_topology, Service
from rakelink.server import create_app

FIXTURES = ROOT / "frontend" / "test" / "fixtures"

REFERENCE_SERVICES = [
    Service("1", "X1", "H", 9000, 10000, 10.0),
    Service("2", "H", "Y2", 10600, 11600, 8.0),
    Service("3", "X3", "H", 9500, 11000, 12.0),
    Service("4", "H", "Y4", 12200, 13200, 9.0),
    Service("5", "X5", "H", 11500, 12800, 11.0),
    Service("6", "H", "Y6", 14000, 15000, 7.0),
]

GRID = {
    "w_min": [0, 60, 120],
    "w_max": [900, 1800, 3600],
    "d_max": [0, "inf"],
    "v_avg_max": [40, "inf"],
}


def upload(client, tt, topo) -> str:
    resp = client.post(
        "/datasets",
        files={
            "timetable": ("timetable.csv", timetable_csv(tt), "text/csv"),
            "topology": ("topology.csv", topology_csv(topo), "text/csv"),
        },
    )
    assert resp.status_code in (200, 409), resp.text
    return resp.json()["dataset_id"]


def save(name: str, payload) -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / name).write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {name}")


def main() -> int:
    import tempfile

    with tempfile.TemporaryDirectory() as data_dir:
        client = TestClient(create_app(Path(data_dir)))

        ref_tt = validate_timetable(REFERENCE_SERVICES)
        ref_topo = validate_topology([(a, a, 0.0) for a in sorted(ref_tt.stations())], ref_tt)
        ref_id = upload(client, ref_tt, ref_topo)
        ref_bounds = {"w_min": 0, "w_max": 3600, "d_max": 0, "v_avg_max": "inf"}
        save("audit_reference.json", client.post(f"/datasets/{ref_id}/audit", json={"bounds": ref_bounds}).json())
        save("dataset_reference.json", client.get(f"/datasets/{ref_id}").json())

        demo_tt, demo_topo = generate(GeneratorConfig(services_target=120, station_count=14, seed=7))
        demo_id = upload(client, demo_tt, demo_topo)
        save("dataset_demo.json", client.get(f"/datasets/{demo_id}").json())
        save("density_demo.json", client.get(f"/datasets/{demo_id}/density").json())
        tight = {"w_min": 60, "w_max": 1200, "d_max": 5, "v_avg_max": 40}
        relaxed = {"w_min": 0, "w_max": 3600, "d_max": "inf", "v_avg_max": "inf"}
        save("audit_demo_tight.json", client.post(f"/datasets/{demo_id}/audit", json={"bounds": tight}).json())
        save("audit_demo_relaxed.json", client.post(f"/datasets/{demo_id}/audit", json={"bounds": relaxed}).json())
        save(
            "audit_error_inadmissible.json",
            client.post(
                f"/datasets/{demo_id}/audit",
                json={"bounds": {"w_min": 900, "w_max": 900, "d_max": 0, "v_avg_max": 40}},
            ).json(),
        )

        sweep_id = client.post(f"/datasets/{demo_id}/sweeps", json={"grid": GRID}).json()["sweep_id"]
        for _ in range(600):
            status = client.get(f"/sweeps/{sweep_id}").json()
            if status["status"] == "done":
                break
            time.sleep(0.05)
        assert status["status"] == "done", status
        save("sweep_status_done.json", status)
        save("sweep_records.json", client.get(f"/sweeps/{sweep_id}/records", params={"limit": 500}).json())
        save("sweep_fronts.json", client.get(f"/sweeps/{sweep_id}/fronts").json())
        save("sweep_minima_front1.json", client.get(f"/sweeps/{sweep_id}/fronts/1/minima").json())
        save("sweep_clusters.json", client.get(f"/sweeps/{sweep_id}/clusters", params={"eps": "0"}).json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
