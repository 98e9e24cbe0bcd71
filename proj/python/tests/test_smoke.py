import math

import pytest

import swarmetrics as sm


def test_dtw():
    assert sm.dtw_distance([1, 2, 3], [1, 2, 3]) == 0.0
    assert sm.dtw_distance([0, 0], [1, 1]) == 2.0
    assert sm.dtw_distance([0, 0], [1, 1], cost="squared") == 2.0
    with pytest.raises(ValueError):
        sm.dtw_distance([], [1])


def test_self_organization_and_scalability():
    assert sm.task_self_organization([3], [7], 10, 20) == pytest.approx(1.0)
    assert sm.spatial_self_organization([5], [8], 10, 20) == pytest.approx(2.0)
    assert sm.karp_flatt_scalability([2], [4], 10, 20) == pytest.approx(1.0)
    assert sm.karp_flatt_scalability([2], [2], 10, 20) == pytest.approx(0.0)
    lost = sm.performance_lost([10], [0.2], 4, [1], [0.1])
    assert lost[0] == pytest.approx(1.6)


def test_flexibility():
    assert sm.adaptability([1, 1], [1, 3]) == pytest.approx(2.0)
    assert sm.reactivity([2, 2, 2], [2, 2, 1], 0.0, 1000) == pytest.approx(1.0)
    assert sm.sa_robustness([2, 2], [2, 0]) == pytest.approx(2.0)


def test_queue():
    assert sm.utilization([0.001, 0.001, 0.001, 0.003]) == pytest.approx(0.5)
    assert sm.queue_length(0.9) == pytest.approx(8.1)
    assert sm.time_not_tasked([0.001, 0.001, 0.001, 0.003]) == pytest.approx(750.0)
    assert sm.availability(0.5, 3, 1) == pytest.approx(7 / 15)
    with pytest.raises(ValueError):
        sm.queue_length(1.0)
    p = [3.0, 4.0]
    r = [0.0, 0.001, 0.001, 0.003]
    assert sm.pd_robustness(p, p, r, r, total_time=20000) == pytest.approx(0.0)


def test_simulate_is_deterministic():
    a = sm.simulate(n_robots=4, seed=3, duration=2000, interval_len=200)
    b = sm.simulate(n_robots=4, seed=3, duration=2000, interval_len=200)
    assert a["csv"] == b["csv"]
    assert len(a["performance"]) == 10
    assert all(0.0 <= v <= 1.0 for v in a["interference"])
    again = sm.parse_curves(a["csv"])
    assert again["performance"] == a["performance"]
    assert again["swarm_size"] == 4


def test_cli_entry():
    code, out, _ = sm.run_cli(["availability", "--rho", "0.5", "--n", "3"])
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "n_min,p_v,tasked_availability"
    assert math.isclose(float(rows[1].split(",")[1]), 7 / 15)
    code, _, err = sm.run_cli(["availability", "--rho", "1.5", "--n", "3"])
    assert code == 2
    assert "unstable" in err
