"""Random instance families, experiments, campaigns and report rendering."""

from __future__ import annotations

import csv
import enum
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bounds import all_bounds
from .core import (
    DEFAULT_TOLERANCES,
    AnnulusBound,
    BoundReport,
    MatrixPolynomial,
    NormKind,
    Tolerances,
    read_instance,
)
from .errors import CapExceeded, EnclosureViolation
from .linalg import eig_cap
from .pep import solve_spectrum

_UINT64_MAX = 2**64 - 1


class Family(enum.Enum):
    SCALED_RANDOM = "scaled_random"
    SYMMETRIC_RANDOM = "symmetric_random"
    FILE = "file"


@dataclass(frozen=True)
class InstanceSpec:
    """Recipe for one instance.

    scaled_random: A_i = base^(i + offset) R_i for i < m, A_m = I.
    symmetric_random: B_0 = B_1 = R, B_j = j R_j (2 <= j < m), A_i = (B_i + B_i^T)/2, A_m = I.
    ``distribution`` picks standard-normal (default) or uniform(0, 1) entries.
    """

    n: int = 5
    m: int = 9
    family: Family = Family.SCALED_RANDOM
    seed: int = 0
    scale_base: float = 10.0
    scale_offset: int = -3
    distribution: str = "normal"
    path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is not Family.FILE:
            if self.n < 1 or self.m < 1:
                raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
            cap = eig_cap()
            if self.n * self.m > cap:
                raise CapExceeded(f"m*n = {self.n * self.m} exceeds eigensolver cap {cap}")
        elif not self.path:
            raise ValueError("file family needs a path")
        if not 0 <= self.seed <= _UINT64_MAX:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.distribution not in ("normal", "uniform"):
            raise ValueError(f"distribution must be 'normal' or 'uniform', got {self.distribution!r}")

    def with_seed(self, seed: int) -> "InstanceSpec":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        d = {"family": self.family.value, "seed": self.seed}
        if self.family is Family.FILE:
            d["path"] = self.path
        else:
            d["n"] = self.n
            d["m"] = self.m
            d["distribution"] = self.distribution
            if self.family is Family.SCALED_RANDOM:
                d["scale_base"] = self.scale_base
                d["scale_offset"] = self.scale_offset
        return d


class _Draws:
    """Philox stream; normals by Box-Muller on consecutive uniform pairs."""

    def __init__(self, seed: int):
        self._gen = np.random.Generator(np.random.Philox(seed))

    def uniform(self, count: int) -> np.ndarray:
        return self._gen.random(count)

    def normal(self, count: int) -> np.ndarray:
        pairs = (count + 1) // 2
        u = self._gen.random(2 * pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u[0::2]))  # 1 - u lies in (0, 1]
        angle = 2.0 * np.pi * u[1::2]
        z = np.empty(2 * pairs)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        return z[:count]

    def matrix(self, n: int, distribution: str) -> np.ndarray:
        values = self.normal(n * n) if distribution == "normal" else self.uniform(n * n)
        return values.reshape(n, n)


def generate_instance(spec: InstanceSpec) -> MatrixPolynomial:
    if spec.family is Family.FILE:
        P = read_instance(Path(spec.path).read_text())
        cap = eig_cap()
        if P.size * P.degree > cap:
            raise CapExceeded(f"m*n = {P.size * P.degree} exceeds eigensolver cap {cap}")
        return P
    n, m = spec.n, spec.m
    draws = _Draws(spec.seed)
    coeffs = []
    if spec.family is Family.SCALED_RANDOM:
        for i in range(m):
            coeffs.append(spec.scale_base ** (i + spec.scale_offset) * draws.matrix(n, spec.distribution))
    else:
        shared = draws.matrix(n, spec.distribution)
        for j in range(m):
            b = shared if j < 2 else j * draws.matrix(n, spec.distribution)
            coeffs.append((b + b.T) / 2)
    coeffs.append(np.eye(n))
    return MatrixPolynomial(tuple(coeffs))


def describe_instance(P: MatrixPolynomial, spec: Optional[InstanceSpec] = None) -> dict:
    """The spec's fields plus the actual size and degree of P."""
    d = spec.to_dict() if spec is not None else {"family": "direct", "seed": None}
    d.update(n=P.size, m=P.degree)
    return d


# -- experiments -------------------------------------------------------------------

def _rank(values: list, descending: bool) -> dict:
    """Map catalogue index to 1-based rank for (index, value) pairs; ties go to the lower index."""
    order = sorted(values, key=lambda iv: ((-iv[1]) if descending else iv[1], iv[0]))
    return {idx: r + 1 for r, (idx, _) in enumerate(order)}


@dataclass(frozen=True)
class ExperimentReport:
    spec: Optional[InstanceSpec]
    report: BoundReport
    upper_ranks: dict
    lower_ranks: dict
    eigenvalue_count: int
    residual_flags: int
    max_residual: float
    tolerances: Tolerances = DEFAULT_TOLERANCES
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def seed(self):
        return None if self.spec is None else self.spec.seed

    def to_dict(self) -> dict:
        """JSON-ready document; wall times are left out so output is reproducible."""
        r = self.report
        rows = []
        for i, (b, verdict) in enumerate(zip(r.bounds, r.verdicts)):
            row = b.to_dict()
            row["verdict"] = verdict
            row["upper_rank"] = self.upper_ranks.get(i)
            row["lower_rank"] = self.lower_ranks.get(i)
            rows.append(row)
        return {
            "instance": r.instance,
            "norm": r.norm.value,
            "tolerances": self.tolerances.to_dict(),
            "eigenvalue_count": self.eigenvalue_count,
            "true_min_modulus": r.true_min_modulus,
            "true_max_modulus": r.true_max_modulus,
            "residual_flags": self.residual_flags,
            "max_residual": self.max_residual,
            "all_enclosed": r.all_enclosed,
            "sharpest_upper": r.sharpest_upper,
            "sharpest_lower": r.sharpest_lower,
            "bounds": rows,
        }


def enclosure_verdicts(bounds: Sequence[AnnulusBound], min_modulus: float, max_modulus: float,
                       tol: float) -> tuple:
    """True/False per applicable bound, None for inapplicable ones."""
    out = []
    for b in bounds:
        if not b.applicable:
            out.append(None)
            continue
        ok = True
        if b.lower is not None:
            ok &= b.lower - tol * (1.0 + b.lower) <= min_modulus
        if b.upper is not None:
            ok &= max_modulus <= b.upper + tol * (1.0 + b.upper)
        out.append(bool(ok))
    return tuple(out)


def run_experiment(P: MatrixPolynomial, kind: NormKind = NormKind.TWO,
                   holder_ps: Sequence[float] = (2.0,),
                   spec: Optional[InstanceSpec] = None,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> ExperimentReport:
    """Full catalogue plus ground truth, enclosure verdicts and sharpness ranks."""
    kind = NormKind.parse(kind)
    t0 = time.perf_counter()
    bounds = all_bounds(P, kind, holder_ps, tolerances)
    t1 = time.perf_counter()
    spectrum = solve_spectrum(P, tolerances)
    t2 = time.perf_counter()
    verdicts = enclosure_verdicts(bounds, spectrum.min_modulus, spectrum.max_modulus,
                                  tolerances.enclosure_tol)
    upper_ranks = _rank([(i, b.upper) for i, b in enumerate(bounds) if b.applicable and b.upper is not None],
                        descending=False)
    lower_ranks = _rank([(i, b.lower) for i, b in enumerate(bounds) if b.applicable and b.lower is not None],
                        descending=True)
    best_up = next((bounds[i].name for i, r in upper_ranks.items() if r == 1), None)
    best_lo = next((bounds[i].name for i, r in lower_ranks.items() if r == 1), None)
    instance = describe_instance(P, spec)
    report = BoundReport(
        instance=instance,
        norm=kind,
        bounds=tuple(bounds),
        true_min_modulus=spectrum.min_modulus,
        true_max_modulus=spectrum.max_modulus,
        verdicts=verdicts,
        sharpest_upper=best_up,
        sharpest_lower=best_lo,
    )
    t3 = time.perf_counter()
    return ExperimentReport(
        spec=spec,
        report=report,
        upper_ranks=upper_ranks,
        lower_ranks=lower_ranks,
        eigenvalue_count=spectrum.count,
        residual_flags=spectrum.flagged,
        max_residual=float(np.max(spectrum.residuals)),
        tolerances=tolerances,
        timings={"bounds": t1 - t0, "spectrum": t2 - t1, "assembly": t3 - t2},
    )


# -- campaigns -----------------------------------------------------------------------

@dataclass(frozen=True)
class BoundStats:
    name: str
    runs: int
    applicable: int
    upper_rank_sum: int
    upper_ranked: int
    lower_rank_sum: int
    lower_ranked: int
    sharpest_upper: int
    sharpest_lower: int

    def to_dict(self) -> dict:
        return {
            "id": self.name,
            "applicability_rate": self.applicable / self.runs,
            "mean_upper_rank": self.upper_rank_sum / self.upper_ranked if self.upper_ranked else None,
            "mean_lower_rank": self.lower_rank_sum / self.lower_ranked if self.lower_ranked else None,
            "sharpest_upper_fraction": self.sharpest_upper / self.runs,
            "sharpest_lower_fraction": self.sharpest_lower / self.runs,
        }


@dataclass(frozen=True)
class CampaignSummary:
    template: InstanceSpec
    count: int
    seed0: int
    norm: NormKind
    holder_ps: tuple
    stats: tuple
    violations: int
    residual_flags: int
    tolerances: Tolerances = DEFAULT_TOLERANCES
    reports: tuple = field(default=(), compare=False, repr=False)

    def to_dict(self) -> dict:
        template = self.template.to_dict()
        template.pop("seed", None)
        return {
            "template": template,
            "count": self.count,
            "seed0": self.seed0,
            "seeds": [self.seed0, self.seed0 + self.count - 1],
            "norm": self.norm.value,
            "holder_ps": list(self.holder_ps),
            "tolerances": self.tolerances.to_dict(),
            "enclosure_violations": self.violations,
            "residual_flags": self.residual_flags,
            "bounds": [s.to_dict() for s in self.stats],
        }


def _campaign_worker(args):
    spec, kind, holder_ps, tolerances = args
    P = generate_instance(spec)
    return run_experiment(P, kind, holder_ps, spec=spec, tolerances=tolerances)


def run_campaign(template: InstanceSpec, count: int, seed0: int = 0, *,
                 kind: NormKind = NormKind.TWO, holder_ps: Sequence[float] = (2.0,),
                 jobs: int = 1, tolerances: Tolerances = DEFAULT_TOLERANCES,
                 keep_reports: bool = False) -> CampaignSummary:
    """Run ``count`` experiments on seeds seed0, seed0+1, ... and aggregate.

    Raises EnclosureViolation (carrying the lowest offending seed) if any
    applicable bound misses a computed eigenvalue modulus.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    if seed0 < 0 or seed0 + count - 1 > _UINT64_MAX:
        raise ValueError("campaign seeds must stay within the 64-bit unsigned range")
    kind = NormKind.parse(kind)
    holder_ps = tuple(float(p) for p in holder_ps)
    tasks = [(template.with_seed(seed0 + k), kind, holder_ps, tolerances) for k in range(count)]
    if jobs > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_campaign_worker, tasks, chunksize=max(1, count // (4 * jobs))))
    else:
        results = [_campaign_worker(t) for t in tasks]
    results.sort(key=lambda r: r.seed)

    for r in results:
        if not r.report.all_enclosed:
            bad = ", ".join(r.report.violations())
            raise EnclosureViolation(f"enclosure violated at seed {r.seed}: {bad}", seed=r.seed)

    names = [b.name for b in results[0].report.bounds]
    stats = []
    for i, name in enumerate(names):
        applicable = upper_sum = upper_n = lower_sum = lower_n = best_up = best_lo = 0
        for r in results:
            b = r.report.bounds[i]
            applicable += b.applicable
            if i in r.upper_ranks:
                upper_sum += r.upper_ranks[i]
                upper_n += 1
                best_up += r.upper_ranks[i] == 1
            if i in r.lower_ranks:
                lower_sum += r.lower_ranks[i]
                lower_n += 1
                best_lo += r.lower_ranks[i] == 1
        stats.append(BoundStats(name, count, applicable, upper_sum, upper_n, lower_sum, lower_n,
                                best_up, best_lo))
    return CampaignSummary(
        template=template,
        count=count,
        seed0=seed0,
        norm=kind,
        holder_ps=holder_ps,
        stats=tuple(stats),
        violations=0,
        residual_flags=sum(r.residual_flags for r in results),
        tolerances=tolerances,
        reports=tuple(results) if keep_reports else (),
    )


# -- rendering -----------------------------------------------------------------------

FORMATS = ("table", "csv", "json")


def _fmt(x, digits=6) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return f"{x:.{digits}g}"
    return str(x)


def _csv_value(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return x


def _render_table(header: list, rows: list, preamble: list) -> str:
    cells = [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(h), *(len(r[k]) for r in cells)) if cells else len(h) for k, h in enumerate(header)]
    lines = list(preamble)
    lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for r in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _render_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_value(v) for v in row])
    return buf.getvalue()


def render(obj, fmt: str = "table") -> str:
    """Render an ExperimentReport or CampaignSummary as table, csv or json."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if fmt == "json":
        return json.dumps(obj.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"
    if isinstance(obj, ExperimentReport):
        doc = obj.to_dict()
        header = ["bound", "lower", "upper", "applicable", "enclosed", "upper_rank", "lower_rank", "comment"]
        rows = []
        for b in doc["bounds"]:
            lower = b["lower"]
            upper = b["upper"]
            comment = b["reason"] or ""
            strict = [s for s, flag in (("lower strict", b["lower_strict"] and lower is not None),
                                        ("upper strict", b["upper_strict"] and upper is not None)) if flag]
            if strict and not comment:
                comment = ", ".join(strict)
            rows.append([b["id"], lower, upper, b["applicable"], b["verdict"], b["upper_rank"],
                         b["lower_rank"], comment])
        if fmt == "csv":
            return _render_csv(header, rows)
        inst = doc["instance"]
        preamble = [
            "instance: " + ", ".join(f"{k}={v}" for k, v in inst.items()),
            f"norm: {doc['norm']}  eigenvalues: {doc['eigenvalue_count']}  residual flags: {doc['residual_flags']}",
            f"true |lambda| range: [{_fmt(doc['true_min_modulus'])}, {_fmt(doc['true_max_modulus'])}]",
            f"sharpest upper: {doc['sharpest_upper']}  sharpest lower: {doc['sharpest_lower']}",
            "",
        ]
        return _render_table(header, rows, preamble)
    if isinstance(obj, CampaignSummary):
        doc = obj.to_dict()
        header = ["bound", "applicability", "mean_upper_rank", "mean_lower_rank", "sharpest_upper",
                  "sharpest_lower"]
        rows = [[s["id"], s["applicability_rate"], s["mean_upper_rank"], s["mean_lower_rank"],
                 s["sharpest_upper_fraction"], s["sharpest_lower_fraction"]] for s in doc["bounds"]]
        if fmt == "csv":
            return _render_csv(header, rows)
        t = doc["template"]
        preamble = [
            "campaign: " + ", ".join(f"{k}={v}" for k, v in t.items()),
            f"runs: {doc['count']} (seeds {doc['seeds'][0]}..{doc['seeds'][1]})  norm: {doc['norm']}",
            f"enclosure violations: {doc['enclosure_violations']}  residual flags: {doc['residual_flags']}",
            "",
        ]
        return _render_table(header, rows, preamble)
    raise TypeError(f"cannot render {type(obj).__name__}")
