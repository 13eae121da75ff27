"""Command line interface and config-driven experiment runner.

    rgzeta build --family hn3 --k 5 --format json
    rgzeta zeta --family mk --b 3 --kmin 1 --kmax 6 --j 1-4 --method both
    rgzeta lambda-max --family hn5 --kmin 4 --kmax 30
    rgzeta run config.json --out results/
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import platform
import sys
import tempfile
import time
from pathlib import Path

import mpmath
import numpy as np
import scipy

from . import __version__, analysis, lambda_shoot as shoot, netgen, rg_hanoi, rg_mk, spectrum
from .errors import ConfigError, RGZetaError

log = logging.getLogger("rgzeta")

FORMATS = ("csv", "json")
METHODS = ("rg", "oracle", "both", "shoot", "power")


def parse_int_list(text) -> list:
    """'3' -> [3], '1-4' -> [1,2,3,4], '2,3,5' -> [2,3,5]; lists pass through."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def _k_range(opts) -> list:
    if opts.get("k") is not None:
        return parse_int_list(opts["k"])
    lo, hi = opts.get("kmin"), opts.get("kmax")
    if lo is None or hi is None:
        raise ConfigError("give --k or both --kmin and --kmax")
    return list(range(int(lo), int(hi) + 1))


def _b_list(opts) -> list:
    b = opts.get("b")
    if b is None:
        if opts.get("family") == "mk":
            raise ConfigError("family mk needs --b")
        return [None]
    return parse_int_list(b)


def _fmt(x):
    if isinstance(x, float):
        return "%.17g" % x
    return "" if x is None else x


# ------------------------------------------------------------------ tasks
# Each task takes an options dict and returns a list of flat row dicts.

def task_build(opts):
    rows = []
    for b in _b_list(opts):
        for k in _k_range(opts):
            g = netgen.build(opts["family"], k, b)
            rows.append({"family": g.family, "b": b, "k": k, "n": g.n, "edges": len(g.edges),
                         "hash": g.fingerprint(), "graph": g})
    return rows


def task_spectrum(opts):
    rows = []
    for b in _b_list(opts):
        for k in _k_range(opts):
            g = netgen.build(opts["family"], k, b)
            s = spectrum.eig_sym(netgen.laplacian(g), cache_dir=opts.get("cache"))
            for frac, lam in spectrum.rank_spectrum_export(s):
                rows.append({"family": g.family, "b": b, "k": k, "rank_fraction": float(frac),
                             "eigenvalue": float(lam), "method": "oracle"})
    return rows


def task_zeta(opts):
    js = parse_int_list(opts.get("j", "1-4"))
    J = max(max(js), 4)
    method = opts.get("method", "rg")
    if method not in ("rg", "oracle", "both"):
        raise ConfigError("zeta supports --method rg, oracle or both")
    fam = opts["family"]
    rows = []
    for b in _b_list(opts):
        for k in _k_range(opts):
            n = analysis.vertex_count(fam, k, b)
            rg = analysis.zeta_rg(fam, k, J, b, opts.get("precision")) if method in ("rg", "both") else None
            orc = analysis.zeta_oracle(fam, k, J, b, opts.get("cache")) if method in ("oracle", "both") else None
            for j in js:
                row = {"family": fam, "b": b, "k": k, "N": n, "j": j}
                if rg is not None:
                    row["I_rg"] = rg[j - 1]
                if orc is not None:
                    row["I_oracle"] = orc[j - 1]
                if rg is not None and orc is not None:
                    row["rel_diff"] = abs(rg[j - 1] - orc[j - 1]) / abs(orc[j - 1])
                row["method"] = method
                rows.append(row)
    return rows


def task_alpha(opts):
    fam = opts["family"]
    digits = int(opts.get("digits", 12))
    rows = []
    if fam == "mk":
        for b in _b_list(opts):
            est = rg_mk.mk_alpha_estimate(b, digits)
            rows.append({"family": fam, "b": b, "alpha": est.value, "digits": est.digits,
                         "iterations": est.iterations, "method": "rg"})
    else:
        est = rg_hanoi.hanoi_alpha_estimate(fam, digits)
        rows.append({"family": fam, "b": None, "alpha": est.value, "digits": est.digits,
                     "iterations": est.iterations, "method": "rg"})
    return rows


def task_lambda_max(opts):
    method = opts.get("method", "shoot")
    if method not in ("shoot", "power", "oracle"):
        raise ConfigError("lambda-max supports --method shoot, power or oracle")
    fam = opts["family"]
    tol = float(opts.get("tol", 1e-13))
    prec = opts.get("precision") or "f64"
    rows = []
    for b in _b_list(opts):
        for k in _k_range(opts):
            row = {"variant": fam, "b": b, "k": k, "method": method}
            if method == "shoot":
                r = shoot.shoot(fam, k, b, tol=max(tol, 1e-15), precision=prec)
                row.update(lambda_max=r.lambda_max, iterations=r.iterations, achieved_tol=r.achieved_tol)
            else:
                m = netgen.laplacian(netgen.build(fam, k, b))
                if method == "power":
                    lam, it = spectrum.power_method_numeric(m, tol=tol, seed=int(opts.get("seed", 0)))
                    row.update(lambda_max=lam, iterations=it, achieved_tol=tol)
                else:
                    s = spectrum.eig_sym(m, cache_dir=opts.get("cache"))
                    row.update(lambda_max=s.lambda_max, iterations=None, achieved_tol=None)
            rows.append(row)
    return rows


def task_exponents(opts):
    fam = opts["family"]
    js = parse_int_list(opts.get("j", "1"))
    skip = int(opts.get("burn_in", 3))
    rows = []
    for b in _b_list(opts):
        ks = _k_range(opts)
        for j in js:
            z = analysis.zeta_exponent(fam, ks, j, b, skip)
            rows.append({"family": fam, "b": b, "j": j, "kmin": ks[skip], "kmax": ks[-1],
                         "slope": z.power.slope, "intercept": z.power.intercept,
                         "residual_rms": z.power.residual_rms, "differenced_slope": z.differenced.slope,
                         "log_fit_rms": z.growth.log_rms, "power_fit_rms": z.growth.power_rms,
                         "model": z.growth.winner, "method": "rg"})
    return rows


def _families(opts):
    fams = opts.get("families") or ["hn3", "hn5", "mk:2"]
    if isinstance(fams, str):
        fams = fams.split(",")
    out = []
    for f in fams:
        if isinstance(f, (list, tuple)):
            out.append((f[0], int(f[1])))
        elif f.startswith("mk"):
            out.append(("mk", int(f.split(":")[1]) if ":" in f else int(opts.get("b", 2))))
        else:
            out.append(f)
    return out


def task_sync_report(opts):
    ks = _k_range(opts) if (opts.get("k") or opts.get("kmin")) else list(range(4, 21))
    reps, ranking = analysis.sync_report(_families(opts), ks, J=int(opts.get("J", 4)),
                                         oracle_max_n=int(opts.get("oracle_max_n", 1024)),
                                         skip=int(opts.get("burn_in", 3)))
    rows = []
    for pos, label in enumerate(ranking, 1):
        r = next(x for x in reps if x.label == label)
        f = r.eigenratio_scaling_exponent
        rows.append({"rank": pos, "family": label, "eigenratio_exponent": f.slope,
                     "fit_rms": f.residual_rms, "n_points": f.n_points, "proxy": r.proxy,
                     "proxy_warning": r.proxy_warning or "", "method": "rg+shoot"})
    return rows


TASKS = {
    "build": task_build,
    "spectrum": task_spectrum,
    "zeta": task_zeta,
    "alpha": task_alpha,
    "lambda-max": task_lambda_max,
    "exponents": task_exponents,
    "sync-report": task_sync_report,
}


# ------------------------------------------------------------------ output

def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    with os.fdopen(fd, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def render(rows, fmt: str) -> str:
    rows = [{k: v for k, v in r.items() if k != "graph"} for r in rows]
    if fmt == "json":
        return json.dumps(rows, indent=2, default=str) + "\n"
    if not rows:
        return ""
    cols = []
    for r in rows:
        cols.extend(c for c in r if c not in cols)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def versions() -> dict:
    return {"rgzeta": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "mpmath": mpmath.__version__}


def run_experiment(config: dict, out_dir: str | Path | None = None) -> dict:
    """Run every task in config["tasks"]; write outputs and manifest.json into out_dir."""
    if not isinstance(config, dict) or not isinstance(config.get("tasks", []), list):
        raise ConfigError("config must be an object with a 'tasks' list")
    defaults = {k: v for k, v in config.items() if k != "tasks"}
    fmt = defaults.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    out = Path(out_dir or defaults.get("out", "."))
    manifest = {"versions": versions(), "precision": defaults.get("precision", "f64"),
                "seed": defaults.get("seed", 0), "tasks": []}
    errors = []
    for i, t in enumerate(config.get("tasks", [])):
        if not isinstance(t, dict) or t.get("task") not in TASKS:
            raise ConfigError(f"task {i}: 'task' must be one of {sorted(TASKS)}")
        opts = {**defaults, **t}
        if t["task"] != "sync-report" and opts.get("family") not in netgen.FAMILIES:
            raise ConfigError(f"task {i}: 'family' must be one of {netgen.FAMILIES}")
        name = f"{i:02d}-{t['task']}-{opts.get('family', 'all')}"
        t0 = time.perf_counter()
        entry = {"index": i, "task": t["task"], "options": {k: v for k, v in t.items()}}
        try:
            rows = TASKS[t["task"]](opts)
            path = out / f"{name}.{fmt}"
            _atomic_write(path, render(rows, fmt))
            entry.update(output=path.name, rows=len(rows), status="ok")
        except RGZetaError as exc:
            entry.update(status="error", error=f"{type(exc).__name__}: {exc}")
            errors.append(entry["error"])
        entry["wall_seconds"] = round(time.perf_counter() - t0, 6)
        manifest["tasks"].append(entry)
    manifest["errors"] = errors
    _atomic_write(out / "manifest.json", json.dumps(manifest, indent=2, default=str) + "\n")
    return manifest


# ------------------------------------------------------------------ argparse

def _common(p: argparse.ArgumentParser):
    p.add_argument("--family", choices=netgen.FAMILIES)
    p.add_argument("--b", help="MK branching (int or list like 2-6)")
    p.add_argument("--k", help="generation (int, list or range a-b)")
    p.add_argument("--kmin", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--j", help="zeta index or range, e.g. 1-4")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--precision", choices=("f64", "extended"))
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (default: stdout)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--cache", help="directory for cached spectra")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rgzeta", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in TASKS:
        p = sub.add_parser(name)
        _common(p)
        if name == "build":
            p.add_argument("--graph-format", choices=("json", "edgelist"), default="json")
        if name == "alpha":
            p.add_argument("--digits", type=int, default=12)
        if name in ("exponents", "sync-report"):
            p.add_argument("--burn-in", dest="burn_in", type=int, default=3)
        if name == "sync-report":
            p.add_argument("--families", default="hn3,hn5,mk:2")
            p.add_argument("--oracle-max-n", dest="oracle_max_n", type=int, default=1024)
    p = sub.add_parser("run")
    p.add_argument("config")
    p.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = json.loads(Path(args.config).read_text())
            m = run_experiment(cfg, args.out)
            print(json.dumps({"tasks": len(m["tasks"]), "errors": m["errors"]}))
            return 1 if m["errors"] else 0
        opts = {k: v for k, v in vars(args).items() if v is not None}
        if args.command != "sync-report" and "family" not in opts:
            raise ConfigError("--family is required")
        rows = TASKS[args.command](opts)
        if args.command == "build" and args.out:
            for r in rows:
                g = r["graph"]
                ext = "json" if args.graph_format == "json" else "edges"
                _atomic_write(Path(args.out) / f"{g.family}-k{r['k']}{'-b%d' % r['b'] if r['b'] else ''}.{ext}",
                              g.to_json() if ext == "json" else g.to_edgelist())
        text = render(rows, args.format)
        if args.out:
            _atomic_write(Path(args.out) / f"{args.command}.{args.format}", text)
        else:
            sys.stdout.write(text)
        return 0
    except RGZetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
