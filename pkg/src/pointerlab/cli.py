"""Command-line front end: density maps, fidelity curves, model comparisons,
and oracle checks, written as CSV and 16-bit PGM for downstream plotting.

Exit codes: 0 success, 1 numerical-tolerance failure, 2 usage error.
All outputs are byte-deterministic for identical flags.
"""

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import continuous, estimation, trotter
from .continuous import Geometry, MeasurementConfig, QubitState
from .quadrature import QuadratureError

_MODELS = {
    "continuous": Geometry.CONTINUOUS,
    "trotter90": Geometry.ORTHOGONAL90,
    "trotter45": Geometry.DIAGONAL45,
}


@dataclass
class DensityMap:
    """Discretized outcome density on a rectangular window."""

    nz: int
    nx: int
    z_min: float
    z_max: float
    x_min: float
    x_max: float
    values: np.ndarray  # shape (nz, nx), row-major over z then x
    meta: dict

    @property
    def cell_area(self):
        return ((self.z_max - self.z_min) / self.nz
                * (self.x_max - self.x_min) / self.nx)

    def riemann_mass(self):
        return float(np.sum(self.values)) * self.cell_area


def _fmt(v):
    return format(float(v), ".17g")


def _atomic_write(path, data):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".pointerlab-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta_string(meta):
    return " ".join(f"{k}={v}" for k, v in meta.items())


def compute_density_map(model, theta_i, weakness, n, res, window=None):
    geometry = _MODELS[model]
    cfg = MeasurementConfig.from_weakness(weakness, geometry, max(n, 1))
    psi = QubitState(theta_i)
    if window is None:
        extent = 1.0 + 2.0 ** -0.5 if geometry is Geometry.DIAGONAL45 else 1.0
        W = extent * cfg.coupling + 5.0 * cfg.spread
        window = (-W, W, -W, W)
    z_min, z_max, x_min, x_max = window
    zc = z_min + (np.arange(res) + 0.5) * (z_max - z_min) / res
    xc = x_min + (np.arange(res) + 0.5) * (x_max - x_min) / res
    Z = np.repeat(zc, res)
    X = np.tile(xc, res)
    if geometry is Geometry.CONTINUOUS:
        vals = continuous.prob_density(Z, X, psi, cfg, abs_tol=1e-9)
    else:
        vals = trotter.density_at(trotter.evolve(psi, cfg), Z, X)
    meta = {"model": model, "theta_i": _fmt(theta_i),
            "weakness": _fmt(weakness), "n": n, "res": res,
            "window": f"{_fmt(z_min)}:{_fmt(z_max)}:{_fmt(x_min)}:{_fmt(x_max)}"}
    return DensityMap(nz=res, nx=res, z_min=z_min, z_max=z_max,
                      x_min=x_min, x_max=x_max,
                      values=vals.reshape(res, res), meta=meta)


def density_csv_bytes(dmap):
    zc = dmap.z_min + (np.arange(dmap.nz) + 0.5) * (
        dmap.z_max - dmap.z_min) / dmap.nz
    xc = dmap.x_min + (np.arange(dmap.nx) + 0.5) * (
        dmap.x_max - dmap.x_min) / dmap.nx
    lines = ["z,x,density"]
    for i in range(dmap.nz):
        for j in range(dmap.nx):
            lines.append(f"{_fmt(zc[i])},{_fmt(xc[j])},{_fmt(dmap.values[i, j])}")
    return ("\n".join(lines) + "\n").encode()


def density_pgm_bytes(dmap):
    peak = float(np.max(dmap.values))
    scale = 65535.0 / peak if peak > 0 else 0.0
    pix = np.round(dmap.values * scale).astype(">u2")
    # image rows run from x_max down to x_min, columns from z_min to z_max
    img = pix.T[::-1]
    meta = dict(dmap.meta)
    meta["max_density"] = _fmt(peak)
    header = (f"P5\n# pointerlab meta: {_meta_string(meta)}\n"
              f"{dmap.nz} {dmap.nx}\n65535\n")
    return header.encode() + img.tobytes()


def cmd_density(args):
    dmap = compute_density_map(args.model, args.theta_i, args.weakness,
                               args.n, args.res)
    _atomic_write(args.out + ".csv", density_csv_bytes(dmap))
    _atomic_write(args.out + ".pgm", density_pgm_bytes(dmap))
    print(f"wrote {args.out}.csv and {args.out}.pgm "
          f"(mass={dmap.riemann_mass():.6f})")
    return 0


def cmd_curve(args):
    geometry = _MODELS[args.model]
    if args.spacing == "log":
        grid = np.geomspace(args.wmin, args.wmax, args.wcount)
    else:
        grid = np.linspace(args.wmin, args.wmax, args.wcount)
    thetas = args.theta_i or [0.0]
    rows = []
    for ti in sorted(thetas):
        base = MeasurementConfig.from_weakness(
            grid[0], geometry, max(args.n, 1))
        curve = estimation.fidelity_curve(QubitState(ti), base, list(grid))
        for w, f in zip(curve.weakness, curve.f_avg):
            rows.append((ti, w, f))
    lines = ["weakness,theta_i,f_avg"]
    for ti, w, f in rows:
        lines.append(f"{_fmt(w)},{_fmt(ti)},{_fmt(f)}")
    _atomic_write(args.out, ("\n".join(lines) + "\n").encode())
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def compare_deviations(n_list, weakness, theta_i, probe_count, seed=0):
    psi = QubitState(theta_i)
    ccfg = MeasurementConfig.from_weakness(weakness)
    W = ccfg.window_halfwidth()
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-W, W, (probe_count, 2))
    ref = continuous.prob_density(pts[:, 0], pts[:, 1], psi, ccfg)
    out = []
    for n in n_list:
        tcfg = MeasurementConfig.from_weakness(
            weakness, Geometry.ORTHOGONAL90, n)
        dev = trotter.density_at(trotter.evolve(psi, tcfg),
                                 pts[:, 0], pts[:, 1]) - ref
        out.append((n, float(np.max(np.abs(dev)))))
    return out


def cmd_compare(args):
    n_list = [int(s) for s in args.n_list.split(",")]
    if any(n < 1 for n in n_list):
        raise ValueError("trotter depths must be >= 1")
    rows = compare_deviations(n_list, args.weakness, args.theta_i,
                              args.probe_count)
    lines = ["n,max_abs_deviation"]
    for n, d in rows:
        lines.append(f"{n},{_fmt(d)}")
    _atomic_write(args.out, ("\n".join(lines) + "\n").encode())
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def cmd_oracle_check(args):
    cfg = MeasurementConfig.from_weakness(args.weakness)
    W = cfg.coupling + 4.0 * cfg.spread
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    worst_pt = (0.0, 0.0)
    for _ in range(args.points):
        z, x = rng.uniform(-W, W, 2)
        theta_i = rng.uniform(0.0, 2.0 * np.pi)
        psi = QubitState(theta_i)
        closed = continuous.post_state(z, x, psi, cfg)
        oracle = continuous.momentum_oracle_state(z, x, psi, cfg)
        scale = max(abs(oracle.c0), abs(oracle.c1))
        err = max(abs(closed.c0 - oracle.c0),
                  abs(closed.c1 - oracle.c1)) / scale
        if err > worst:
            worst, worst_pt = err, (z, x)
    print(f"oracle check: {args.points} points, weakness {_fmt(args.weakness)}, "
          f"max rel error {_fmt(worst)}")
    if worst > 1e-6:
        print(f"FAIL: worst point z={_fmt(worst_pt[0])} x={_fmt(worst_pt[1])}")
        return 1
    print("PASS")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="pointerlab",
        description="Simultaneous weak-measurement simulator: density maps, "
                    "fidelity curves, Trotter comparisons, oracle checks.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("density", help="write a density map as CSV and PGM")
    d.add_argument("--model", choices=sorted(_MODELS), required=True)
    d.add_argument("--theta-i", type=float, default=0.0)
    d.add_argument("--weakness", type=float, required=True)
    d.add_argument("--n", type=int, default=6)
    d.add_argument("--res", type=int, default=256)
    d.add_argument("--out", required=True,
                   help="output path stem (.csv and .pgm are appended)")
    d.set_defaults(func=cmd_density)

    c = sub.add_parser("curve", help="write a fidelity-vs-weakness CSV")
    c.add_argument("--model", choices=sorted(_MODELS), required=True)
    c.add_argument("--theta-i", type=float, action="append")
    c.add_argument("--wmin", type=float, default=0.02)
    c.add_argument("--wmax", type=float, default=3.0)
    c.add_argument("--wcount", type=int, default=40)
    c.add_argument("--spacing", choices=["log", "linear"], default="log")
    c.add_argument("--n", type=int, default=6)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_curve)

    m = sub.add_parser("compare",
                       help="Trotter-90 vs continuous density deviations")
    m.add_argument("--n-list", default="2,4,8,16,32")
    m.add_argument("--weakness", type=float, default=0.3)
    m.add_argument("--theta-i", type=float, default=0.0)
    m.add_argument("--probe-count", type=int, default=10)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_compare)

    o = sub.add_parser("oracle-check",
                       help="closed form vs momentum-space oracle")
    o.add_argument("--points", type=int, default=20)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--weakness", type=float, default=0.3)
    o.set_defaults(func=cmd_oracle_check)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
