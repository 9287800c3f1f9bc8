"""Seeded benchmark of the system solver on random bivariate systems.

Two scenarios are supported.  ``full`` draws both polynomials with all
coefficients uniform on [0, 1] (or with real and imaginary parts uniform
on [0, 1] for the complex field).  ``squared_factor`` keeps ``p`` full and
takes ``q = (a x + b y + c)**2 r`` with random ``a, b, c`` and a full ``r``
of degree ``n - 2``, so every common root is double.

Every sample draws from its own generator seeded by
``derive_seed(seed, degree, index)``, so serial and parallel runs give
the same numbers.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .conics import RANK_TOL
from .polycore import AffinePoly, HomoPoly
from .representation import BuildOptions
from .rng import SplitMix64, derive_seed
from .twopar import accuracy_metric, solve_system

SCHEMA_VERSION = 1
SCENARIOS = ("full", "squared_factor")
FIELDS = ("real", "complex")
#: floor applied before taking logarithms for geometric means
GEO_FLOOR = 1e-20
PHASES = ("build", "assemble", "eigensolve", "polish")


@dataclass(frozen=True)
class BenchConfig:
    degrees: tuple = (3, 4, 5)
    samples: int = 500
    field: str = "real"
    seed: int = 0
    scenario: str = "full"
    rank_tol: float = RANK_TOL
    timing: bool = True

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.degrees or not set(self.degrees) <= {2, 3, 4, 5}:
            raise ValueError(f"degrees must be a nonempty subset of 2..5, got {self.degrees}")
        if self.field not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}")
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}")


def random_affine(rng, degree, field="real"):
    """Full affine polynomial; coefficients drawn in order of ``(i, j)``."""
    c = np.zeros((degree + 1, degree + 1), dtype=complex)
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            c[i, j] = rng.uniform_array(1, field)[0]
    return AffinePoly(c)


def sample_system(config, degree, index):
    """The system ``(p, q)`` of sample ``index`` in the cell ``degree``."""
    rng = SplitMix64(derive_seed(config.seed, degree, index))
    p = random_affine(rng, degree, config.field)
    if config.scenario == "full":
        return p, random_affine(rng, degree, config.field)
    a, b, c = rng.uniform_array(3, config.field)
    line = HomoPoly.from_terms(1, {(1, 0): a, (0, 1): b, (0, 0): c})
    r = random_affine(rng, degree - 2, config.field)
    q = line * line * HomoPoly(r.coeffs)
    return p, AffinePoly(q.coeffs)


def run_sample(config, degree, index):
    """Solve one sample; failures are reported, never raised."""
    p, q = sample_system(config, degree, index)
    opts = BuildOptions(seed=derive_seed(config.seed, degree, index, 1), rank_tol=config.rank_tol)
    t0 = time.perf_counter()
    try:
        rs = solve_system(p, q, opts)
        elapsed = time.perf_counter() - t0
        acc = accuracy_metric(p, q, rs)
    except Exception as exc:  # counted as a failure of this sample
        return {"ok": False, "error": type(exc).__name__, "detail": str(exc)}
    return {
        "ok": True,
        "time_ms": elapsed * 1e3,
        "phases_ms": {k: rs.timings.get(k, 0.0) * 1e3 for k in PHASES},
        "accuracy": acc.accuracy,
        "forward_error": acc.forward_error_estimate,
        "excluded": acc.excluded,
        "roots": len(rs),
        "clustered": rs.flags.count("clustered"),
        "dropped": rs.dropped,
        "rep_residual": max(rs.info.get("rep_residuals", (0.0,))),
    }


def _run_one(args):
    return run_sample(*args)


def geo_mean(values, floor=GEO_FLOOR):
    """Geometric mean of the finite values, each floored at ``floor``; ``None`` if there are none."""
    vals = [max(v, floor) for v in values if v is not None and math.isfinite(v)]
    if not vals:
        return None
    return math.exp(math.fsum(math.log(v) for v in vals) / len(vals))


def _summarize(config, degree, results):
    ok = [r for r in results if r["ok"]]
    failures = {}
    for r in results:
        if not r["ok"]:
            failures[r["error"]] = failures.get(r["error"], 0) + 1
    cell = {
        "degree": degree,
        "field": config.field,
        "scenario": config.scenario,
        "samples": len(results),
        "mean_time_ms": None,
        "geo_mean_accuracy": geo_mean([r["accuracy"] for r in ok]),
        "geo_mean_forward_error": geo_mean([r["forward_error"] for r in ok]),
        "failures": len(results) - len(ok),
        "failure_kinds": dict(sorted(failures.items())),
        "accuracy_exclusions": sum(1 for r in ok if not math.isfinite(r["accuracy"])),
        "unreliable_roots": sum(r["excluded"] for r in ok),
        "clustered_roots": sum(r["clustered"] for r in ok),
        "dropped_eigenvalues": sum(r["dropped"] for r in ok),
        "min_roots": min((r["roots"] for r in ok), default=None),
        "max_roots": max((r["roots"] for r in ok), default=None),
        "max_rep_residual": max((r["rep_residual"] for r in ok), default=None),
        "phase_mean_ms": None,
    }
    if config.timing and ok:
        cell["mean_time_ms"] = math.fsum(r["time_ms"] for r in ok) / len(ok)
        cell["phase_mean_ms"] = {k: math.fsum(r["phases_ms"][k] for r in ok) / len(ok) for k in PHASES}
    return cell


@dataclass
class BenchReport:
    config: dict
    cells: list
    version: str = __version__
    schema: int = SCHEMA_VERSION
    samples: Optional[dict] = field(default=None, repr=False)

    def to_dict(self):
        return {"schema": self.schema, "version": self.version, "config": self.config, "cells": self.cells}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(obj["config"], obj["cells"], obj["version"], obj["schema"])

    def cell(self, degree):
        for c in self.cells:
            if c["degree"] == degree:
                return c
        raise KeyError(degree)

    def table(self):
        """Human-readable summary."""
        head = f"{'deg':>3} {'time ms':>9} {'accuracy':>10} {'fwd err':>10} {'fail':>5} {'clust':>6} {'roots':>7}"
        lines = [
            f"scenario={self.config['scenario']} field={self.config['field']} "
            f"samples={self.config['samples']} seed={self.config['seed']}",
            head,
        ]
        for c in self.cells:
            t = "-" if c["mean_time_ms"] is None else f"{c['mean_time_ms']:.2f}"
            a = "-" if c["geo_mean_accuracy"] is None else f"{c['geo_mean_accuracy']:.2e}"
            f = "-" if c["geo_mean_forward_error"] is None else f"{c['geo_mean_forward_error']:.2e}"
            roots = "-" if c["min_roots"] is None else f"{c['min_roots']}-{c['max_roots']}"
            lines.append(f"{c['degree']:>3} {t:>9} {a:>10} {f:>10} {c['failures']:>5} {c['clustered_roots']:>6} {roots:>7}")
        return "\n".join(lines) + "\n"


def run_bench(config: BenchConfig, workers=1, keep_samples=False):
    """Run every cell of ``config``; ``workers > 1`` fans samples out to processes."""
    tasks = [(config, d, k) for d in config.degrees for k in range(config.samples)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_run_one(t) for t in tasks]
    cells, per = [], {}
    for d in config.degrees:
        chunk = [r for (c, dd, k), r in zip(tasks, results) if dd == d]
        per[d] = chunk
        cells.append(_summarize(config, d, chunk))
    cfg = asdict(config)
    cfg["degrees"] = list(config.degrees)
    return BenchReport(cfg, cells, samples=per if keep_samples else None)
