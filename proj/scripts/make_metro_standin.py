#!/usr/bin/env python3
"""Synthetic metro-like network: 296 stations, 353 links.

Lines are gently curved paths across a disc, biased to pass near the centre,
with stations roughly every 420 m. A station within the snap radius of
another line's station becomes a shared transfer station. Seeds are tried
until links - stations matches the target, then line termini are trimmed or
extended to hit the station count. Lengths are straight-line metres.

Writes <prefix>.edges, <prefix>.coords and <prefix>.obs (every station once).
"""

import argparse
import math

import numpy as np

NODES = 296
EDGES = 353
LINES = 17
RADIUS = 6000.0
SPACING = 420.0
SNAP = 260.0
CORE = 1300.0


def line_points(rng):
    theta = rng.uniform(0.0, math.pi)
    offset = rng.normal(0.0, CORE)
    bend = rng.normal(0.0, 600.0)
    half = RADIUS * rng.uniform(0.75, 1.0)
    d = np.array([math.cos(theta), math.sin(theta)])
    n = np.array([-d[1], d[0]])
    pts = []
    s = -half
    while s <= half:
        u = s / half
        pts.append(d * s + n * (offset + bend * (1.0 - u * u)))
        s += SPACING * rng.uniform(0.75, 1.25)
    return pts


def assemble(lines):
    stations = []  # coordinates
    owners = []    # set of line ids per station
    routes = []
    for lid, pts in enumerate(lines):
        route = []
        for p in pts:
            best, best_d = None, SNAP
            for sid, q in enumerate(stations):
                if lid in owners[sid]:
                    continue
                dd = math.dist(p, q)
                if dd < best_d:
                    best, best_d = sid, dd
            if best is None:
                stations.append(tuple(p))
                owners.append({lid})
                best = len(stations) - 1
            else:
                owners[best].add(lid)
            route.append(best)
        routes.append(route)
    return stations, routes


def edge_set(routes):
    edges = set()
    for r in routes:
        for a, b in zip(r, r[1:]):
            if a != b:
                edges.add((min(a, b), max(a, b)))
    return edges


def used_stations(routes):
    return sorted({s for r in routes for s in r})


def build(seed):
    for attempt in range(100000):
        rng = np.random.default_rng([seed, attempt])
        lines = [line_points(rng) for _ in range(LINES)]
        stations, routes = assemble(lines)
        edges = edge_set(routes)
        if len(edges) - len(stations) == EDGES - NODES:
            break
    else:
        raise SystemExit("no network found")

    # Trim or extend termini that belong to a single line; each step moves
    # the station and link counts together.
    count = lambda: len(used_stations(routes))
    degree_one = lambda sid: sum(r.count(sid) for r in routes) == 1
    i = 0
    while count() > NODES:
        r = routes[i % LINES]
        end = -1 if i % 2 else 0
        if len(r) > 3 and degree_one(r[end]):
            r.pop(end)
        i += 1
    while count() < NODES:
        r = routes[i % LINES]
        a, b = (r[-1], r[-2]) if i % 2 else (r[0], r[1])
        pa, pb = np.array(stations[a]), np.array(stations[b])
        stations.append(tuple(pa + (pa - pb)))
        if i % 2:
            r.append(len(stations) - 1)
        else:
            r.insert(0, len(stations) - 1)
        i += 1

    keep = used_stations(routes)
    index = {s: k for k, s in enumerate(keep)}
    edges = sorted((index[a], index[b]) for a, b in edge_set(routes))
    pts = [stations[s] for s in keep]
    assert len(pts) == NODES and len(edges) == EDGES
    return pts, edges


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=1900)
    ap.add_argument("--prefix", default="data/metro296")
    args = ap.parse_args()

    pts, edges = build(args.seed)
    label = [f"s{i:03d}" for i in range(NODES)]
    with open(args.prefix + ".edges", "w") as f:
        f.write(f"# synthetic metro stand-in: {NODES} stations, {EDGES} links, lengths in metres\n")
        for i, j in edges:
            f.write(f"{label[i]} {label[j]} {max(1.0, round(math.dist(pts[i], pts[j])))}\n")
    with open(args.prefix + ".coords", "w") as f:
        for i, (x, y) in enumerate(pts):
            f.write(f"{label[i]} {x:.1f} {y:.1f}\n")
    with open(args.prefix + ".obs", "w") as f:
        for i in range(NODES):
            f.write(label[i] + "\n")


if __name__ == "__main__":
    main()
