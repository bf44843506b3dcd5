#!/usr/bin/env python3
"""Calibrate the bundled seven-bus study network and fit relay curve constants.

The published grid parameters give element impedances but no topology, and
taken literally they do not reproduce the published fault currents. This
script keeps the published infinite-grid impedance, relay pickups and time
dials, and fits every other impedance of a fixed radial topology so that:

  * no-DG, DG1 and DG1+DG2 fault currents match the published relay flows,
  * no-DG load-flow currents match the published relay load flows,
  * the UFCL resistance restoring the bus-3 fault level to within 0.5 %
    lands near the published 184 ohm (DG1) and 196 ohm (DG1+DG2),
  * with UFCL at 184 / 196 ohm the bus-3 and bus-4 currents stay close to
    the published limited values.

Relay curve constants (A, B, C) are then fitted per relay by least squares
of the inverse-time characteristic over the published (current, time)
pairs, with the published TDS and pickup held fixed.

Output: data/seven_bus_dg.json (overwritten) and a residual summary on stdout.
Requires numpy and scipy. Deterministic for a fixed seed.
"""
import json
import math
import pathlib
import sys

import numpy as np
from scipy.optimize import brentq, least_squares

ROOT = pathlib.Path(__file__).resolve().parents[2]
V_LL = 20e3
E = V_LL / math.sqrt(3)
LV = 400.0
Z_GRID = complex(0.0134, 0.292)

BUSES = ["bus1", "bus2", "bus3", "bus4", "bus5", "bus6", "bus7"]
IDX = {b: i for i, b in enumerate(BUSES)}
# id, from, to, kind
BRANCHES = [
    ("line12", "bus1", "bus2", "line"),
    ("line23", "bus2", "bus3", "line"),
    ("line34", "bus3", "bus4", "line"),
    ("tie25", "bus2", "bus5", "tie"),
    ("line57", "bus5", "bus7", "line"),
    ("tr56", "bus5", "bus6", "transformer"),
]
LOAD_BUSES = ["bus2", "bus3", "bus4", "bus5", "bus6", "bus7"]
RELAYS = {
    "relay1": "line12", "relay2": "line23", "relay3": "line34",
    "relay4": "tie25", "relay5": "line57", "relay6": "tr56",
}
DG1, DG2 = "bus7", "bus5"
PAIRS = [("bus3", "relay2", "relay1"), ("bus4", "relay3", "relay2"),
         ("bus6", "relay6", "relay4"), ("bus7", "relay5", "relay4")]

SETTINGS = {  # tds, pickup, load flow
    "relay1": (0.6, 610, 558), "relay2": (0.4, 380, 335),
    "relay3": (0.3, 260, 170), "relay4": (0.5, 70, 48),
    "relay5": (5.5, 40, 26.6), "relay6": (0.1, 28, 18.3),
}
# fault bus -> ((main current, main time), (backup current, backup time))
TABLES = {
    "t3": ([], 0.0, {"bus3": ((981.81, None), (984.72, None)),
                     "bus4": ((684.9, None), (684.9, None)),
                     "bus6": ((287.8, None), (313.95, None)),
                     "bus7": ((1091.77, None), (1091.77, None))}),
    "t4": ([DG1], 0.0, {"bus3": ((1066.52, 0.39), (938.68, 1.09)),
                        "bus4": ((727.2, 0.21), (727.2, 0.49)),
                        "bus6": ((308.72, 0.029), (260.2, 0.342)),
                        "bus7": ((1091.7, 0.4521), (1091.7, 0.083))}),
    "t5": ([DG1], 184.0, {"bus3": ((996.9, 0.46), (982.1, 1.01)),
                          "bus4": ((686.1, 0.221), (686.1, 0.562)),
                          "bus6": ((308.72, 0.029), (260.2, 0.342)),
                          "bus7": ((1091.77, 0.4521), (1091.77, 0.083))}),
    "t6": ([DG1, DG2], 0.0, {"bus3": ((1124.2, 0.29), (897.3, 1.18)),
                             "bus4": ((752.3, 0.28), (752.3, 0.473)),
                             "bus6": ((318.2, 0.024), (236.17, 0.358)),
                             "bus7": ((1376.02, 0.413), (1084.7, 0.083))}),
    "t7": ([DG1, DG2], 196.0, {"bus3": ((995.6, 0.49), (987.8, 1.02)),
                               "bus4": ((697.2, 0.235), (697.2, 0.5628)),
                               "bus6": ((318.2, 0.024), (236.17, 0.358)),
                               "bus7": ((1376.02, 0.413), (1084.7, 0.083))}),
    # induction DG1; times only (currents not calibrated against)
    "t8": (None, None, {"bus3": ((1073.3, 0.374), (912.8, 1.21)),
                        "bus4": ((730, 0.191), (730, 0.47)),
                        "bus6": ((311.63, 0.024), (251.2, 0.335)),
                        "bus7": ((1086.3, 0.444), (1086.3, 0.079))}),
    "t9": (None, None, {"bus3": ((988.1, 0.42), (980.3, 0.984)),
                        "bus4": ((676.5, 0.21), (676.5, 0.558)),
                        "bus6": ((311.63, 0.024), (251.2, 0.335)),
                        "bus7": ((1086.3, 0.444), (1086.3, 0.079))}),
}
TOL = 0.005
UPSTREAM = {"bus1", "bus2", "bus3", "bus4"}


def unpack(p):
    k = 0
    z = {}
    for bid, *_ in BRANCHES:
        z[bid] = complex(math.exp(p[k]), math.exp(p[k + 1]))
        k += 2
    zdg = complex(math.exp(p[k]), math.exp(p[k + 1]))
    k += 2
    loads = {}
    for b in LOAD_BUSES:
        loads[b] = complex(math.exp(p[k]), math.exp(p[k + 1]))
        k += 2
    return z, zdg, loads


def solve(p, dgs, r_tie, fault):
    """Phasor solve in 20 kV-referred ohms; bolted fault by node elimination."""
    z, zdg, loads = unpack(p)
    n = len(BUSES)
    y = np.zeros((n, n), complex)
    inj = np.zeros(n, complex)
    for bid, f, t, _ in BRANCHES:
        zz = z[bid] + (r_tie if bid == "tie25" else 0.0)
        a, b = IDX[f], IDX[t]
        yy = 1.0 / zz
        y[a, a] += yy
        y[b, b] += yy
        y[a, b] -= yy
        y[b, a] -= yy
    y[0, 0] += 1.0 / Z_GRID
    inj[0] += E / Z_GRID
    for d in dgs:
        y[IDX[d], IDX[d]] += 1.0 / zdg
        inj[IDX[d]] += E / zdg
    for b, zl in loads.items():
        y[IDX[b], IDX[b]] += 1.0 / zl
    v = np.zeros(n, complex)
    keep = [i for i in range(n) if fault is None or i != IDX[fault]]
    v[keep] = np.linalg.solve(y[np.ix_(keep, keep)], inj[keep])
    cur = {}
    for bid, f, t, _ in BRANCHES:
        zz = z[bid] + (r_tie if bid == "tie25" else 0.0)
        cur[bid] = (v[IDX[f]] - v[IDX[t]]) / zz
    return cur


def relay_current(p, dgs, r_tie, fault, relay):
    return abs(solve(p, dgs, r_tie, fault)[RELAYS[relay]])


def band_edge(p, dgs):
    """Smallest UFCL resistance bringing the bus-3 fault current within TOL."""
    target = relay_current(p, [], 0.0, "bus3", "relay2")
    g = lambda r: relay_current(p, dgs, r, "bus3", "relay2") / target - (1 + TOL)
    if g(0.0) <= 0:
        return 0.0
    if g(1e7) >= 0:
        return math.inf
    return brentq(g, 0.0, 1e7, xtol=1e-9)


def hinge(e, lim):
    return math.copysign(max(0.0, abs(e) - lim), e)


def residuals(p):
    r = []
    cur = solve(p, [], 0.0, None)
    for rel, (_, _, lf) in SETTINGS.items():
        e = math.log(abs(cur[RELAYS[rel]]) / lf)
        r += [0.5 * e, 20 * hinge(e, 0.035)]
    for key, w in (("t3", 3.0), ("t4", 2.0), ("t6", 2.0), ("t5", 0.5), ("t7", 0.5)):
        dgs, r_tie, rows = TABLES[key]
        for bus, ((im, _), (ib, _)) in rows.items():
            if r_tie > 0.0 and bus not in UPSTREAM:
                continue  # UFCL is transparent there; same rows as the unlimited table
            _, main, backup = next(pr for pr in PAIRS if pr[0] == bus)
            cur = solve(p, dgs, r_tie, bus)
            for rel, val in ((main, im), (backup, ib)):
                e = math.log(abs(cur[RELAYS[rel]]) / val)
                r.append(w * e)
                if r_tie == 0.0:
                    r.append(20 * hinge(e, 0.035))
    for dgs, published_r in (([DG1], 184.0), ([DG1, DG2], 196.0)):
        edge = band_edge(p, dgs)
        if not math.isfinite(edge) or edge == 0.0:
            r.append(5.0)
            continue
        le = math.log(edge / published_r)
        r.append(0.3 * le + 20 * hinge(le, 0.07))
    return np.array(r)


def initial_guess():
    p = []
    for zz in (7.7j + 1e-5, 3.8j + 1e-6, 4.9j + 1e-6, 2.5 + 1.2j, 0.1 + 0.25j, 25.5 + 9.4j):
        p += [math.log(zz.real), math.log(zz.imag)]
    p += [math.log(26.0), math.log(8.4)]
    for zz in (130 + 1e-5j, 66 + 1e-5j, 57 + 1e-5j, 290 + 600j, 550 + 1e-4j, 420 + 0.7j):
        p += [math.log(zz.real), math.log(zz.imag)]
    return np.array(p)


def fit_network():
    rng = np.random.default_rng(7)
    best = None
    for trial in range(4):
        x0 = initial_guess() + (rng.normal(0, 0.3, 26) if trial else 0.0)
        sol = least_squares(residuals, x0, max_nfev=600)
        print(f"  network fit start {trial}: cost {sol.cost:.6g}", flush=True)
        if best is None or sol.cost < best.cost:
            best = sol
    return best.x


def trip_time(tds, pickup, a, b, c, current):
    m = current / pickup
    return tds * (b + a / (m ** c - 1.0))


def fit_curves():
    points = {rel: [] for rel in SETTINGS}
    for key, (_, _, rows) in TABLES.items():
        for bus, ((im, tm), (ib, tb)) in rows.items():
            _, main, backup = next(pr for pr in PAIRS if pr[0] == bus)
            if tm is not None:
                points[main].append((im, tm))
                points[backup].append((ib, tb))
    curves = {}
    for rel, pts in points.items():
        tds, pickup, _ = SETTINGS[rel]
        cur = np.array([q[0] for q in pts])
        t = np.array([q[1] for q in pts])

        def res(q):
            a, b, c = math.exp(q[0]), q[1], math.exp(q[2])
            return np.log(trip_time(tds, pickup, a, b, c, cur) / t)

        best = None
        for c0 in (0.02, 0.1, 0.5, 1.0, 2.0):
            for b0 in (0.0, 0.05):
                m = cur.mean() / pickup
                a0 = (t.mean() / tds - b0) * (m ** c0 - 1.0)
                if a0 <= 0:
                    a0 = 1e-2
                sol = least_squares(res, [math.log(a0), b0, math.log(c0)],
                                    bounds=([-12, 0.0, math.log(0.005)], [8, 5.0, math.log(3.0)]))
                if best is None or sol.cost < best.cost - 1e-12:
                    best = sol
        a, b, c = math.exp(best.x[0]), best.x[1], math.exp(best.x[2])
        rms = math.sqrt(np.mean(res(best.x) ** 2))
        curves[rel] = (a, b, c, rms, len(pts))
    return curves


def r6(v):
    return float(f"{v:.6g}")


def write_dataset(p, curves):
    z, zdg, loads = unpack(p)
    lv_scale = (LV / V_LL) ** 2
    doc = {
        "name": "seven-bus 20 kV study grid with two DG units (calibrated)",
        "s_base_va": 10e6,
        "buses": [{"id": b, "nominal_voltage": (LV if b == "bus6" else V_LL)} for b in BUSES],
        "branches": [],
        "sources": [
            {"id": "grid", "bus": "bus1", "kind": "infinite_grid",
             "internal_impedance": {"r": Z_GRID.real, "x": Z_GRID.imag}, "emf_pu": 1.0},
            {"id": "dg1", "bus": DG1, "kind": "sync_dg",
             "internal_impedance": {"r": r6(zdg.real), "x": r6(zdg.imag)}, "emf_pu": 1.0},
            {"id": "dg2", "bus": DG2, "kind": "sync_dg",
             "internal_impedance": {"r": r6(zdg.real), "x": r6(zdg.imag)}, "emf_pu": 1.0},
        ],
        "loads": [],
        "relays": [],
        "pairs": [{"main": m, "backup": bk, "fault_bus": fb} for fb, m, bk in PAIRS],
        "ufcl": {"tie_branch": "tie25", "r_limit": 184.0, "r_normal": 0.0, "downstream_end": "bus5"},
    }
    for bid, f, t, kind in BRANCHES:
        entry = {"id": bid, "from_bus": f, "to_bus": t, "kind": kind,
                 "impedance": {"r": r6(z[bid].real), "x": r6(z[bid].imag)}}
        if kind == "transformer":
            entry["referred_side"] = "from"
        doc["branches"].append(entry)
    for b in LOAD_BUSES:
        zl = loads[b] * (lv_scale if b == "bus6" else 1.0)
        doc["loads"].append({"id": "load_" + b, "bus": b,
                             "impedance": {"r": r6(zl.real), "x": r6(zl.imag)}})
    for rel, br in RELAYS.items():
        tds, pickup, _ = SETTINGS[rel]
        a, b, c, _, _ = curves[rel]
        doc["relays"].append({"id": rel, "branch": br, "orientation": "from_to",
                              "pickup_a": pickup, "tds": tds,
                              "curve": {"family": "custom", "a": r6(a), "b": r6(b), "c": r6(c)}})
    out = ROOT / "data" / "seven_bus_dg.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(json.dumps(doc, indent=2) + "\n")
    return out


def rounded_params(p):
    """Re-pack parameters after the 6-significant-digit rounding of the file."""
    z, zdg, loads = unpack(p)
    q = []
    for bid, *_ in BRANCHES:
        q += [math.log(r6(z[bid].real)), math.log(r6(z[bid].imag))]
    q += [math.log(r6(zdg.real)), math.log(r6(zdg.imag))]
    for b in LOAD_BUSES:
        if b == "bus6":
            s = (LV / V_LL) ** 2
            q += [math.log(r6(loads[b].real * s) / s), math.log(r6(loads[b].imag * s) / s)]
        else:
            q += [math.log(r6(loads[b].real)), math.log(r6(loads[b].imag))]
    return np.array(q)


def report(p, curves):
    print("load flow (A): computed vs published")
    cur = solve(p, [], 0.0, None)
    for rel, (_, _, lf) in SETTINGS.items():
        got = abs(cur[RELAYS[rel]])
        print(f"  {rel}: {got:9.2f} vs {lf:9.2f}  ({100 * (got / lf - 1):+.2f} %)")
    for key in ("t3", "t4", "t5", "t6", "t7"):
        dgs, r_tie, rows = TABLES[key]
        print(f"{key}: dg={dgs} r_ufcl={r_tie}")
        for bus, ((im, _), (ib, _)) in rows.items():
            _, main, backup = next(pr for pr in PAIRS if pr[0] == bus)
            c = solve(p, dgs, r_tie if bus in UPSTREAM else 0.0, bus)
            for rel, val in ((main, im), (backup, ib)):
                got = abs(c[RELAYS[rel]])
                print(f"  {bus} {rel}: {got:9.2f} vs {val:9.2f}  ({100 * (got / val - 1):+.2f} %)")
    for dgs, published_r in (([DG1], 184.0), ([DG1, DG2], 196.0)):
        print(f"restoring resistance dg={dgs}: {band_edge(p, dgs):.2f} ohm (published {published_r})")
    print("relay curves (a, b, c, rms log-residual, points)")
    for rel, v in curves.items():
        print(f"  {rel}: a={v[0]:.6g} b={v[1]:.6g} c={v[2]:.6g} rms={v[3]:.4f} n={v[4]}")


def main():
    p = fit_network()
    p = rounded_params(p)
    curves = fit_curves()
    report(p, curves)
    out = write_dataset(p, curves)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
