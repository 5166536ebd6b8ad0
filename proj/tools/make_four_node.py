#!/usr/bin/env python3
"""Writes the synthetic 4-node, 48-step scenario under scenarios/four_node/.

Loads and capacity factors go to CSV files so the scenario also exercises
time-series ingestion. Output is deterministic.
"""
import json
import math
import pathlib

T = 48
STEP_HOURS = 2.0
OUT = pathlib.Path(__file__).resolve().parent.parent / "scenarios" / "four_node"


def hour(t):
    return (t * STEP_HOURS) % 24.0


def day(t):
    return int(t * STEP_HOURS // 24)


def load(base, swing, t):
    # Evening peak, shallow night trough.
    return base * (1.0 + swing * math.cos(2 * math.pi * (hour(t) - 19.0) / 24.0))


def solar(t, quality):
    h = hour(t) + 1.0  # mid-step
    raw = max(0.0, math.sin(math.pi * (h - 6.0) / 12.0)) if 6.0 <= h <= 18.0 else 0.0
    cloud = (0.85, 1.0, 0.6, 0.95)[day(t) % 4]
    return round(quality * raw * cloud, 4)


def wind(t, phase, mean):
    v = mean + 0.3 * math.sin(2 * math.pi * t / 30.0 + phase) + 0.1 * math.cos(2 * math.pi * t / 7.0 + phase)
    return round(min(0.95, max(0.02, v)), 4)


def write_series(name, values):
    with open(OUT / name, "w") as f:
        f.write("timestep,value\n")
        for t, v in enumerate(values):
            f.write(f"{t},{v:.4f}\n")
    return name


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    nodes = []
    for node, base, swing in (("NORTH", 2.0, 0.2), ("SOUTH", 5.0, 0.3), ("WEST", 3.0, 0.25), ("EAST", 2.5, 0.3)):
        path = write_series(f"load_{node.lower()}.csv", [round(load(base, swing, t), 4) for t in range(T)])
        nodes.append({"id": node, "load": path})

    line_capex = 0.005
    lines = [
        {"id": "N-S", "from": "NORTH", "to": "SOUTH", "kind": "DC", "length_km": 900.0, "initial_capacity": 0.5,
         "max_capacity": 15.0, "capex": line_capex},
        {"id": "N-W", "from": "NORTH", "to": "WEST", "kind": "AC", "length_km": 400.0, "initial_capacity": 1.0,
         "max_capacity": 15.0, "capex": line_capex},
        {"id": "W-S", "from": "WEST", "to": "SOUTH", "kind": "AC", "length_km": 500.0, "initial_capacity": 1.0,
         "max_capacity": 15.0, "capex": line_capex},
        {"id": "S-E", "from": "SOUTH", "to": "EAST", "kind": "AC", "length_km": 350.0, "initial_capacity": 1.0,
         "max_capacity": 15.0, "capex": line_capex},
        {"id": "E-N", "from": "EAST", "to": "NORTH", "kind": "AC", "length_km": 700.0, "initial_capacity": 0.5,
         "max_capacity": 15.0, "capex": line_capex},
    ]

    generators = []
    for node, mean, phase in (("NORTH", 0.55, 0.0), ("WEST", 0.4, 1.3)):
        cf = write_series(f"wind_{node.lower()}.csv", [wind(t, phase, mean) for t in range(T)])
        generators.append({"id": f"wind_{node.lower()}", "node": node, "technology": "onshore", "kind": "renewable",
                           "capex": 9.0, "opex": 0.0, "capacity_factor": cf, "max_capacity": 40.0})
    for node, quality in (("SOUTH", 0.9), ("EAST", 0.75)):
        cf = write_series(f"pv_{node.lower()}.csv", [solar(t, quality) for t in range(T)])
        generators.append({"id": f"pv_{node.lower()}", "node": node, "technology": "pv", "kind": "renewable",
                           "capex": 3.0, "opex": 0.0, "capacity_factor": cf, "max_capacity": 40.0})
    for node in ("NORTH", "WEST"):
        generators.append({"id": f"ccgt_{node.lower()}", "node": node, "technology": "ccgt", "kind": "dispatchable",
                           "capex": 6.0, "opex": 0.15, "co2_rate": 0.35})

    storage = [{"id": f"battery_{n.lower()}", "node": n, "power_capex": 4.0, "duration_hours": 4.0}
               for n in ("SOUTH", "EAST")]

    scenario = {"horizon": T, "step_hours": STEP_HOURS, "voll": 3.0, "co2_cap": 200.0,
                "nodes": nodes, "lines": lines, "generators": generators, "storage": storage}
    with open(OUT / "scenario.json", "w") as f:
        json.dump(scenario, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
