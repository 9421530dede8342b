import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rakelink.model import (
    AsymmetricDistance,
    Bounds,
    DuplicateServiceId,
    MissingStation,
    NegativeDistance,
    OutOfRangeTime,
    Service,
    TimeOrderViolation,
    ValidationError,
    parse_time_of_day,
    parse_timetable_csv,
    parse_topology_csv,
    timetable_csv,
    timetable_from_json,
    timetable_json,
    topology_csv,
    topology_from_json,
    topology_json,
    validate_timetable,
    validate_topology,
)

from instances import make_service

INF = float("inf")


class TestValidateTimetable:
    def test_minimal_valid_input(self):
        tt = validate_timetable([make_service("A1", "X", "Y", 100, 200, 5.0)])
        assert len(tt) == 1
        assert tt.services[0].service_id == "A1"
        assert tt.day_length == 86400

    def test_accepts_mapping_records(self):
        tt = validate_timetable(
            [dict(service_id="A1", origin="X", destination="Y", dep_time=100, arr_time=200, run_distance_km=5)]
        )
        assert tt.services[0].origin == "X"

    def test_duplicate_id_rejected(self):
        recs = [make_service("A1", "X", "Y", 100, 200), make_service("A1", "Y", "X", 300, 400)]
        with pytest.raises(DuplicateServiceId, match="A1"):
            validate_timetable(recs)

    def test_degenerate_duration_rejected(self):
        with pytest.raises(TimeOrderViolation, match="B"):
            validate_timetable([make_service("B", "X", "Y", 500, 500)])

    def test_dep_after_arr_rejected(self):
        with pytest.raises(TimeOrderViolation):
            validate_timetable([make_service("B", "X", "Y", 600, 500)])

    @pytest.mark.parametrize("dep,arr", [(-1, 100), (0, 86401), (86400, 86401), (100, 0)])
    def test_out_of_range_times(self, dep, arr):
        with pytest.raises((OutOfRangeTime, TimeOrderViolation)):
            validate_timetable([make_service("C", "X", "Y", dep, arr)])

    def test_non_integer_time_rejected(self):
        with pytest.raises(OutOfRangeTime):
            validate_timetable([make_service("C", "X", "Y", 100.5, 200)])

    def test_negative_run_distance_rejected(self):
        with pytest.raises(NegativeDistance):
            validate_timetable([make_service("C", "X", "Y", 100, 200, -1.0)])

    def test_empty_timetable_rejected(self):
        with pytest.raises(ValidationError):
            validate_timetable([])

    def test_ordering_normalized(self):
        recs = [
            make_service("b", "X", "Y", 500, 600),
            make_service("a", "X", "Y", 500, 700),
            make_service("c", "X", "Y", 100, 300),
        ]
        tt = validate_timetable(recs)
        assert tt.service_ids() == ("c", "a", "b")

    def test_loop_service_allowed(self):
        tt = validate_timetable([make_service("L", "X", "X", 100, 200, 0.0)])
        assert tt.services[0].origin == tt.services[0].destination

    def test_midnight_crossing_rejected(self):
        # wrap-around would need arr < dep, which time order forbids
        with pytest.raises(TimeOrderViolation):
            validate_timetable([make_service("N", "X", "Y", 86000, 400)])


class TestValidateTopology:
    def _tt(self):
        return validate_timetable([make_service("A1", "X", "Y", 100, 200)])

    def test_symmetric_closure(self):
        topo = validate_topology({("X", "Y"): 10.0}, self._tt())
        assert topo.distance("Y", "X") == 10.0
        assert topo.distance("X", "Y") == 10.0

    def test_asymmetric_rejected(self):
        with pytest.raises(AsymmetricDistance):
            validate_topology({("X", "Y"): 10.0, ("Y", "X"): 12.0}, self._tt())

    def test_missing_station_rejected(self):
        tt = validate_timetable([make_service("A1", "X", "Z", 100, 200)])
        with pytest.raises(MissingStation, match="Z"):
            validate_topology({("X", "X"): 0.0}, tt)

    def test_diagonal_forced_zero(self):
        topo = validate_topology([("X", "X", 7.0), ("X", "Y", 4.0)], self._tt())
        assert topo.distance("X", "X") == 0.0

    def test_negative_distance_rejected(self):
        with pytest.raises(NegativeDistance):
            validate_topology({("X", "Y"): -3.0}, self._tt())

    def test_missing_pair_is_infinite(self):
        topo = validate_topology([("X", "X", 0.0), ("Y", "Y", 0.0)], self._tt())
        assert topo.distance("X", "Y") == INF

    def test_symmetry_and_diagonal_exhaustive(self):
        topo = validate_topology({("X", "Y"): 10.0, ("Y", "Z"): 2.5}, self._tt())
        for a in topo.stations:
            assert topo.distance(a, a) == 0.0
            for b in topo.stations:
                assert topo.distance(a, b) == topo.distance(b, a)


class TestTimeParsing:
    @pytest.mark.parametrize(
        "text,expect",
        [("0", 0), ("123", 123), ("00:00:00", 0), ("08:30:00", 30600), ("23:59:59", 86399), (" 42 ", 42)],
    )
    def test_accepted(self, text, expect):
        assert parse_time_of_day(text) == expect

    @pytest.mark.parametrize("text", ["1.5", "08:30", "8:61:00", "a", "1:2:3:4", "00:00:60"])
    def test_rejected(self, text):
        with pytest.raises(OutOfRangeTime):
            parse_time_of_day(text)


class TestCsvRoundTrip:
    def test_timetable_csv_round_trip(self, reference):
        tt, _, _ = reference
        text = timetable_csv(tt)
        assert parse_timetable_csv(text) == tt
        assert timetable_csv(parse_timetable_csv(text)) == text

    def test_timetable_csv_accepts_hms(self):
        text = (
            "service_id,origin,destination,dep_time,arr_time,run_distance_km\n"
            "A1,X,Y,08:30:00,09:00:00,5\n"
        )
        tt = parse_timetable_csv(text)
        assert tt.services[0].dep_time == 30600
        assert tt.services[0].arr_time == 32400

    def test_timetable_csv_bad_header(self):
        with pytest.raises(ValidationError, match="header"):
            parse_timetable_csv("a,b\n1,2\n")

    def test_topology_csv_round_trip(self):
        tt = validate_timetable([make_service("A1", "X", "Y", 100, 200)])
        topo = validate_topology({("X", "Y"): 10.0, ("Y", "Z"): 2.5}, tt)
        text = topology_csv(topo)
        again = parse_topology_csv(text, tt)
        assert again == topo
        assert topology_csv(again) == text

    def test_topology_csv_keeps_isolated_station(self):
        tt = validate_timetable([make_service("L", "X", "X", 100, 200, 0.0)])
        topo = validate_topology([("X", "X", 0.0)], tt)
        text = topology_csv(topo)
        assert parse_topology_csv(text, tt) == topo


class TestJsonRoundTrip:
    def test_timetable_json_byte_stable(self, reference):
        tt, _, _ = reference
        text = timetable_json(tt)
        assert timetable_json(timetable_from_json(text)) == text

    def test_topology_json_byte_stable(self, reference):
        tt, topo, _ = reference
        text = topology_json(topo)
        assert topology_json(topology_from_json(text, tt)) == text

    def test_foreign_day_length_rejected(self):
        with pytest.raises(ValidationError, match="day_length"):
            timetable_from_json('{"day_length": 1000, "services": []}')

    @given(
        st.lists(
            st.tuples(st.integers(0, 86398), st.integers(1, 5000), st.sampled_from("WXYZ"), st.sampled_from("WXYZ")),
            min_size=1,
            max_size=12,
        )
    )
    def test_timetable_json_round_trip_random(self, rows):
        services = [
            make_service(f"s{k}", a, b, dep, min(dep + dur, 86400), km=float(k))
            for k, (dep, dur, a, b) in enumerate(rows)
        ]
        tt = validate_timetable(services)
        text = timetable_json(tt)
        assert timetable_from_json(text) == tt
        assert timetable_json(timetable_from_json(text)) == text


class TestBounds:
    def test_admissible(self):
        assert Bounds(0, 360, 0, 10).admissible
        assert not Bounds(360, 360, 0, 10).admissible
        assert not Bounds(INF, INF, 0, 10).admissible
        assert Bounds(300, INF, 0, 10).admissible

    @pytest.mark.parametrize("kwargs", [
        dict(w_min=-1, w_max=10, d_max=0, v_avg_max=1),
        dict(w_min=0, w_max=10, d_max=-0.1, v_avg_max=1),
        dict(w_min=0, w_max=10, d_max=0, v_avg_max=0),
        dict(w_min=math.nan, w_max=10, d_max=0, v_avg_max=1),
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValidationError):
            Bounds(**kwargs)

    def test_wire_round_trip(self):
        b = Bounds(w_min=0, w_max=INF, d_max=5.5, v_avg_max=60)
        d = b.as_dict()
        assert d["w_max"] == "inf"
        assert d["d_max"] == 5.5
        assert Bounds.from_dict(d) == b

    def test_wire_rejects_garbage(self):
        with pytest.raises(ValidationError):
            Bounds.from_dict({"w_min": "soon", "w_max": 1, "d_max": 0, "v_avg_max": 1})
        with pytest.raises(ValidationError):
            Bounds.from_dict({"w_min": 0})
