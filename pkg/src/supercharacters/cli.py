"""Command-line entry point: plot, analyze, verify, boundary and sweep jobs.

Exit codes: 0 success / all checks pass, 1 a verification failed, 2 usage or
validation error, 3 internal or I/O error. Errors are reported on stderr as a
single JSON object.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import analysis
from .errors import SupercharacterError
from .evaluate import (
    ValueCloud,
    gauss_sum_quadratic,
    sq_points,
    supercharacter_image,
    weyl_divisible,
    weyl_statistic,
)
from .numtheory import factorize, is_prime, legendre_symbol
from .orbits import cyclic_subgroup, orbit
from .render import PlotConfig, auto_color_modulus, render

log = logging.getLogger("supercharacters")

CACHE_ENV = "SUPERCHARACTERS_CACHE_DIR"
THREADS_ENV = "SUPERCHARACTERS_THREADS"
COMMANDS = ("plot", "analyze", "verify", "boundary", "sweep")
SUITES = (
    "kfold", "realness", "improp", "explicit", "ellipse", "gauss",
    "multiplicative", "nesting", "collapse", "boundary", "weyl",
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- values file


def write_values_csv(cloud: ValueCloud, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("y,re,im,label\n")
        for y, (z, lab) in enumerate(zip(cloud.points.tolist(), cloud.labels.tolist())):
            fh.write(f"{y},{z.real:.17g},{z.imag:.17g},{lab}\n")


def read_values_csv(path) -> ValueCloud:
    """Rebuild a cloud from a values file; omega and r are not recorded there."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["y", "re", "im", "label"]:
            raise UsageError(f"{path}: unexpected header {header}")
        rows = [(int(y), float(re), float(im), int(lab)) for y, re, im, lab in reader]
    rows.sort()
    n = len(rows)
    if [r[0] for r in rows] != list(range(n)):
        raise UsageError(f"{path}: rows must cover y = 0..n-1")
    pts = np.array([complex(r[1], r[2]) for r in rows])
    labels = np.array([r[3] for r in rows], dtype=np.int64)
    d = int(round(pts[0].real))
    # every residue mod m occurs among 0..n-1, so the largest label is m - 1
    m = int(labels.max()) + 1
    return ValueCloud(n, 0, 0, d, m, pts, labels)


# ---------------------------------------------------------------- cache


class CloudCache:
    """Value clouds stored as exact float arrays keyed by a hash of (n, omega, r)."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    def _path(self, n, omega, r):
        key = hashlib.sha256(f"{n}:{omega % n}:{r % n}".encode()).hexdigest()[:32]
        return self.dir / f"{key}.npy"

    def get(self, n: int, omega: int, r: int, m: int) -> ValueCloud:
        path = self._path(n, omega, r)
        if path.exists():
            pts = np.load(path)
            pts.setflags(write=False)
            log.debug("cache hit %s", path)
            return ValueCloud(n, omega % n, r % n, int(round(pts[0].real)), m, pts, np.arange(n) % m)
        cloud = supercharacter_image(orbit(cyclic_subgroup(n, omega), r), m)
        tmp = path.with_suffix(".tmp.npy")
        np.save(tmp, np.asarray(cloud.points))
        os.replace(tmp, path)
        return cloud


def _cloud(job: "JobSpec", m: int) -> ValueCloud:
    cache_dir = job.cache_dir or os.environ.get(CACHE_ENV)
    if cache_dir:
        return CloudCache(cache_dir).get(job.n, job.omega, job.r, m)
    return supercharacter_image(orbit(cyclic_subgroup(job.n, job.omega), job.r), m)


# ---------------------------------------------------------------- job spec


@dataclass
class JobSpec:
    command: str
    n: Optional[int] = None
    omega: Optional[int] = None
    r: int = 1
    out: Optional[str] = None
    values_in: Optional[str] = None
    values_out: Optional[str] = None
    color_modulus: Optional[int] = None
    width: int = 1024
    height: int = 1024
    point_radius: int = 1
    overlay: bool = False
    fmt: Optional[str] = None
    suite: Optional[str] = None
    k: Optional[int] = None
    p: Optional[int] = None
    a: Optional[int] = None
    b: Optional[int] = None
    q: Optional[int] = None
    d: Optional[int] = None
    count: int = 2048
    samples: int = 50
    seed: int = 0
    tol: Optional[float] = None
    n_range: Optional[tuple] = None
    omega_range: Optional[tuple] = None
    cache_dir: Optional[str] = None
    threads: Optional[int] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        needs_nw = self.command in ("plot", "analyze") and self.values_in is None
        if self.command == "verify":
            if self.suite not in SUITES:
                raise UsageError(f"--suite must be one of {', '.join(SUITES)}")
            needs_nw = self.suite not in ("gauss", "collapse", "weyl")
        if self.command == "sweep":
            if self.suite not in SUITES or self.n_range is None:
                raise UsageError("sweep needs --suite and --n-range")
            if self.omega is None and self.omega_range is None:
                raise UsageError("sweep needs --omega or --omega-range")
        if self.command == "boundary" and self.q is None and self.n is None:
            raise UsageError("boundary needs --q")
        if needs_nw:
            if self.n is None or self.omega is None:
                raise UsageError("--n and --omega are required")
            if self.n < 2:
                raise UsageError("--n must be at least 2")
            if math.gcd(self.omega, self.n) != 1:
                raise UsageError(f"omega={self.omega} is not a unit modulo n={self.n}")
        if self.command == "plot" and not self.out:
            raise UsageError("plot needs --out")


# ---------------------------------------------------------------- commands


def _finite(obj):
    """Replace NaN/inf floats with None so the output stays strict JSON."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit(obj, out: Optional[str]) -> None:
    text = json.dumps(_finite(obj), indent=2, sort_keys=True, default=_json_default) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def cmd_plot(job: JobSpec) -> int:
    out = Path(job.out)
    fmt = job.fmt or ("svg" if out.suffix.lower() == ".svg" else "png")
    if job.values_in:
        cloud = read_values_csv(job.values_in)
        if job.color_modulus and job.color_modulus != cloud.color_modulus:
            cloud = ValueCloud(cloud.n, 0, 0, cloud.d, job.color_modulus, cloud.points,
                               np.arange(cloud.n) % job.color_modulus)
    else:
        m = job.color_modulus or auto_color_modulus(job.n, job.omega, job.r)
        cloud = _cloud(job, m)
    overlay = None
    if job.overlay and job.values_in is None:
        try:
            overlay = analysis.boundary_predict(job.n, cloud.d)
        except SupercharacterError:
            log.warning("no boundary prediction for n=%s, d=%s", job.n, cloud.d)
    config = PlotConfig(job.width, job.height, job.point_radius, boundary_overlay=overlay)
    data = render(cloud, config, fmt)
    if fmt == "png":
        out.write_bytes(data)
    else:
        out.write_text(data)
    if job.values_in is None:
        write_values_csv(cloud, job.values_out or out.with_suffix(".csv"))
    return EXIT_OK


def cmd_analyze(job: JobSpec) -> int:
    cloud = _cloud(job, 1)
    report = analysis.analyze(job.n, job.omega, job.r, cloud=cloud)
    _emit(report.to_json(), job.out)
    return EXIT_OK


def _suite_checks(job: JobSpec) -> list:
    """Run one named suite and return a list of Check objects."""
    s = job.suite
    A = analysis
    if s == "gauss":
        p = job.p
        if p is None or not is_prime(p) or p % 4 != 1:
            raise UsageError("gauss needs --p, a prime congruent to 1 mod 4")
        tol = job.tol or 1e-8
        worst = max(
            abs(gauss_sum_quadratic(m, p) - legendre_symbol(m, p) * math.sqrt(p))
            for m in range(1, p)
        )
        return [A.Check(f"g(m;{p}) = (m|p) sqrt(p) for all units m", worst <= tol, worst, tol)]
    if s == "collapse":
        if None in (job.p, job.a, job.b, job.omega):
            raise UsageError("collapse needs --p --a --b --omega")
        rep = A.prime_power_collapse(job.p, job.a, job.b, job.omega, job.tol)
        return [A.Check("prime-power collapse", rep.passed,
                        max(rep.pointwise_error, rep.image_distance), rep.tolerance, rep.to_json())]
    if s == "weyl":
        q, d = job.q, job.d or 3
        if q is None:
            raise UsageError("weyl needs --q")
        pts = sq_points(q, d)
        rng = random.Random(job.seed)
        worst = 0.0
        for _ in range(job.samples):
            v = [0] * pts.dim
            while not any(v):
                v = [rng.randint(-10, 10) for _ in range(pts.dim)]
            w = weyl_statistic(pts, v)
            target = 1.0 if weyl_divisible(pts, v) else 0.0
            worst = max(worst, abs(w - target))
        tol = job.tol or 1e-9
        return [A.Check(f"Weyl sums over S_{q} are 0 or 1 by divisibility", worst <= tol, worst, tol)]

    n, w, r = job.n, job.omega, job.r
    cloud = _cloud(job, 1)
    d = cloud.d
    if s == "kfold":
        k = A.symmetry_order(n, w, r)
        chk = A.verify_dihedral(cloud, k, job.tol or 1e-8 * d)
        chk.detail["predicted_k"] = k
        return [chk]
    if s in ("realness", "improp"):
        cls = A.realness_classification(cyclic_subgroup(n, w), r)
        chk = A.verify_realness(cloud, cls, job.tol or 1e-9 * d)
        chk.detail.update(cls.to_json())
        if s == "improp" and cls.kind == "generic":
            chk.passed = False
        return [chk]
    if s == "explicit":
        k = job.k
        if k is None:
            raise UsageError("explicit needs --k")
        ok = A.explicit_hypotheses(cyclic_subgroup(n, w), k)
        if not ok:
            return [A.Check("explicit evaluation hypotheses", False, math.nan, 0.0)]
        closed = np.array([A.explicit_eval(n, k, r, y) for y in range(n)])
        err = float(np.abs(closed - cloud.points).max())
        tol = job.tol or 1e-9
        return [A.Check("closed-form evaluation", err <= tol, err, tol)]
    if s == "ellipse":
        primes = [job.p] if job.p else [p for p, _ in factorize(n) if p % 4 == 1]
        if not primes:
            return [A.Check("ellipse: no prime divisor = 1 mod 4", False, math.nan, 0.0)]
        out = []
        for p in primes:
            rep = A.ellipse_report(cloud, p, job.tol or 1e-8)
            out.append(A.Check(f"ellipse for p={p}", rep.passed, rep.ellipse_deviation, rep.tolerance, rep.to_json()))
        return out
    if s == "multiplicative":
        return [A.verify_multiplicative(n, w, r)]
    if s == "nesting":
        rep = A.nesting_report(n, w, r, job.tol)
        return [A.Check("nesting", rep.passed,
                        max(max(rep.equal_image_distances.values()), rep.containment_distance),
                        rep.tolerance, rep.to_json())]
    if s == "boundary":
        bc = A.verify_boundary(n, w, job.tol or 1e-9)
        return [bc.containment]
    raise UsageError(f"unknown suite {s}")


def cmd_verify(job: JobSpec) -> int:
    checks = _suite_checks(job)
    passed = all(c.passed for c in checks)
    _emit({"schema": 1, "suite": job.suite, "passed": passed,
           "checks": [c.to_json() for c in checks]}, job.out)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_boundary(job: JobSpec) -> int:
    q = job.q or job.n
    d = job.d
    if d is None:
        if job.omega is None:
            raise UsageError("boundary needs --d or --omega")
        d = cyclic_subgroup(q, job.omega).order
    spec = analysis.boundary_predict(q, d)
    pts = spec.outline(job.count)
    lines = ["index,re,im"] + [f"{i},{z.real:.17g},{z.imag:.17g}" for i, z in enumerate(pts)]
    text = "\n".join(lines) + "\n"
    if job.out:
        Path(job.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_range(text: str) -> tuple:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected LO:HI") from None
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def cmd_sweep(job: JobSpec) -> int:
    lo, hi = job.n_range
    omegas = [job.omega] if job.omega is not None else range(job.omega_range[0], job.omega_range[1] + 1)
    tasks = []
    for n in range(max(lo, 2), hi + 1):
        for w in omegas:
            if math.gcd(w, n) == 1:
                tasks.append((n, w))

    def one(task):
        n, w = task
        sub = JobSpec("verify", n=n, omega=w, r=job.r, suite=job.suite, k=job.k, p=job.p, tol=job.tol,
                      cache_dir=job.cache_dir)
        try:
            checks = _suite_checks(sub)
        except SupercharacterError as exc:
            return {"n": n, "omega": w, "skipped": str(exc)}
        return {"n": n, "omega": w, "passed": all(c.passed for c in checks),
                "measured": max((c.measured for c in checks), default=0.0)}

    threads = job.threads or int(os.environ.get(THREADS_ENV, 0)) or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(one, tasks))
    ran = [r for r in results if "passed" in r]
    failures = [r for r in ran if not r["passed"]]
    _emit({"schema": 1, "suite": job.suite, "instances": len(ran),
           "skipped": len(results) - len(ran), "failures": failures,
           "passed": not failures}, job.out)
    return EXIT_OK if not failures else EXIT_FAIL


HANDLERS = {"plot": cmd_plot, "analyze": cmd_analyze, "verify": cmd_verify,
            "boundary": cmd_boundary, "sweep": cmd_sweep}


def run(job: JobSpec) -> int:
    job.validate()
    return HANDLERS[job.command](job)


# ---------------------------------------------------------------- argv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="supercharacters", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--n", type=int)
    parser.add_argument("--omega", type=int)
    parser.add_argument("--r", type=int, default=1)
    parser.add_argument("--out")
    parser.add_argument("--values", dest="values_in", help="render from an existing values CSV")
    parser.add_argument("--values-out")
    parser.add_argument("--color-modulus", type=int)
    parser.add_argument("--width", type=int, default=1024)
    parser.add_argument("--height", type=int, default=1024)
    parser.add_argument("--point-radius", type=int, default=1)
    parser.add_argument("--overlay", action="store_true", help="draw the predicted boundary")
    parser.add_argument("--format", dest="fmt", choices=("png", "svg"))
    parser.add_argument("--suite", choices=SUITES)
    parser.add_argument("--k", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--a", type=int)
    parser.add_argument("--b", type=int)
    parser.add_argument("--q", type=int)
    parser.add_argument("--d", type=int)
    parser.add_argument("--count", type=int, default=2048)
    parser.add_argument("--samples", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--n-range")
    parser.add_argument("--omega-range")
    parser.add_argument("--cache-dir")
    parser.add_argument("--threads", type=int)
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def job_from_args(ns: argparse.Namespace) -> JobSpec:
    fields = {k: v for k, v in vars(ns).items() if k != "verbose"}
    if fields.get("n_range"):
        fields["n_range"] = _parse_range(fields["n_range"])
    if fields.get("omega_range"):
        fields["omega_range"] = _parse_range(fields["omega_range"])
    return JobSpec(**fields)


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        return run(job_from_args(ns))
    except (UsageError, SupercharacterError) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_USAGE
    except OSError as exc:
        _error("IOError", str(exc))
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - last-resort report
        _error(type(exc).__name__, str(exc))
        return EXIT_INTERNAL


def _error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


if __name__ == "__main__":
    sys.exit(main())
