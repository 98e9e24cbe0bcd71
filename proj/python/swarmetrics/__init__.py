"""Swarm performance metrics and a deterministic foraging simulator."""

from ._swarmetrics import (
    UnstableQueueError,
    adaptability,
    availability,
    dtw_distance,
    karp_flatt_scalability,
    parse_curves,
    pd_robustness,
    performance_lost,
    queue_length,
    reactivity,
    run_cli,
    sa_robustness,
    serial_fraction,
    simulate,
    spatial_self_organization,
    task_self_organization,
    tasked_availability,
    time_not_tasked,
    utilization,
)

__all__ = [
    "UnstableQueueError",
    "adaptability",
    "availability",
    "dtw_distance",
    "karp_flatt_scalability",
    "parse_curves",
    "pd_robustness",
    "performance_lost",
    "queue_length",
    "reactivity",
    "run_cli",
    "sa_robustness",
    "serial_fraction",
    "simulate",
    "spatial_self_organization",
    "task_self_organization",
    "tasked_availability",
    "time_not_tasked",
    "utilization",
]
