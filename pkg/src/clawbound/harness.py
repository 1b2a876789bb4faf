"""Corpus sweeps: bound comparison, labeling checks, extremal ranking and reports."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .decomposition import decompose, verify_structural_observations
from .domination import (PreconditionError, all_minimum_dominating_sets, domination_number,
                         min_independent_dominating_set)
from .graph import (ConfigError, Graph, cartesian_product, emit_graph6, enumerate_connected_graphs,
                    find_claw, is_connected, read_graph_file)
from .labeling import ProofTrace, run_pipeline

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "g6_G", "g6_H", "gammaG", "gammaH", "gammaGH", "vizing_ok", "two_thirds_ok",
    "ratio_num", "ratio_den", "st_bound_num", "st_bound_den",
    "survey_bound_num", "survey_bound_den", "violations",
]
DEFAULT_MAX_PRODUCT = 24


@dataclass(frozen=True)
class RunConfig:
    max_nG: int = 6
    max_nH: int = 4
    g6_path: str | None = None
    all_min_d: bool = False
    all_min_d_limit: int = 16
    shuffle_seed: int | None = None
    out_dir: str | None = None
    jobs: int = 1
    unsafe_caps: bool = False

    def validate(self) -> "RunConfig":
        if self.max_nG < 1 or self.max_nH < 1:
            raise ConfigError("corpus caps must be positive")
        if self.max_nG * self.max_nH > DEFAULT_MAX_PRODUCT and not self.unsafe_caps:
            raise ConfigError(
                f"products up to {self.max_nG * self.max_nH} vertices exceed the default limit "
                f"{DEFAULT_MAX_PRODUCT}; pass --unsafe-caps to acknowledge")
        if self.all_min_d_limit > 20:
            raise ConfigError("enumerating all minimum dominating sets is limited to products <= 20")
        return self

    def effective_jobs(self) -> int:
        env = os.environ.get("CLAWBOUND_JOBS")
        return max(1, int(env)) if env else max(1, self.jobs)


@dataclass
class BoundReport:
    g6_G: str
    g6_H: str
    gammaG: int
    gammaH: int
    gammaGH: int
    vizing_ok: bool
    two_thirds_ok: bool
    ratio: Fraction
    suen_tarr_value: Fraction
    survey_clawfree_value: Fraction
    violations: dict[str, int] = field(default_factory=dict)
    advisories: dict[str, int] = field(default_factory=dict)
    checks: dict[str, int] = field(default_factory=dict)  # how often each check ran
    traces_run: int = 0
    max_overcount: Fraction = Fraction(1)   # max over D of sum |D_i| / |D|
    seconds: float = 0.0

    @property
    def critical(self) -> bool:
        return bool(self.violations)

    def row(self) -> dict:
        return {
            "g6_G": self.g6_G, "g6_H": self.g6_H, "gammaG": self.gammaG, "gammaH": self.gammaH,
            "gammaGH": self.gammaGH, "vizing_ok": int(self.vizing_ok),
            "two_thirds_ok": int(self.two_thirds_ok),
            "ratio_num": self.ratio.numerator, "ratio_den": self.ratio.denominator,
            "st_bound_num": self.suen_tarr_value.numerator,
            "st_bound_den": self.suen_tarr_value.denominator,
            "survey_bound_num": self.survey_clawfree_value.numerator,
            "survey_bound_den": self.survey_clawfree_value.denominator,
            "violations": ";".join(f"{k}:{v}" for k, v in sorted(self.violations.items())),
        }

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("ratio", "suen_tarr_value", "survey_clawfree_value", "max_overcount"):
            d[key] = [d[key].numerator, d[key].denominator]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        d = dict(d)
        for key in ("ratio", "suen_tarr_value", "survey_clawfree_value", "max_overcount"):
            d[key] = Fraction(*d[key])
        return cls(**d)


def bound_values(gG: int, gH: int, gGH: int) -> dict:
    """Exact comparisons of ``gamma(G x H)`` against Vizing, two-thirds and the baselines."""
    return {
        "vizing_ok": gGH >= gG * gH,
        "two_thirds_ok": 3 * gGH >= 2 * gG * gH,
        "ratio": Fraction(gGH, gG * gH),
        "suen_tarr_value": Fraction(gG * gH, 2) + Fraction(min(gG, gH), 2),
        "survey_clawfree_value": Fraction(gG * (gH + 1), 2),
    }


def verify_pair(G: Graph, H: Graph, cfg: RunConfig = RunConfig()) -> tuple[BoundReport, list[ProofTrace]]:
    t0 = time.perf_counter()
    claw = find_claw(G)
    if claw is not None:
        raise PreconditionError(f"G is not claw-free: claw {claw}", witness=claw)
    if not is_connected(G) or not is_connected(H):
        raise PreconditionError("G and H must be connected")

    violations: Counter = Counter()
    advisories: Counter = Counter()
    checks: Counter = Counter()
    gG = domination_number(G)
    iG = min_independent_dominating_set(G)
    if gG.value != iG.value:
        violations["allan_laskar"] += 1
    for rec in verify_structural_observations(G, decompose(G, iG.witness)):
        if not rec.passed:
            violations[rec.name] += 1
    gH = domination_number(H).value
    P, _ = cartesian_product(G, H)
    dP = domination_number(P)

    bounds = bound_values(gG.value, gH, dP.value)
    if not bounds["two_thirds_ok"]:
        violations["two_thirds_bound"] += 1
    if not bounds["vizing_ok"]:
        violations["vizing_inequality"] += 1

    if cfg.all_min_d and P.n <= cfg.all_min_d_limit:
        Ds = all_minimum_dominating_sets(P, dP.value)
    else:
        Ds = [dP.mask]
    traces = []
    overcount = Fraction(1)
    for D in Ds:
        tr = run_pipeline(G, iG.witness, H, D, gamma_H=gH, seed=cfg.shuffle_seed)
        traces.append(tr)
        violations.update(f.name for f in tr.violations)
        advisories.update(f.name for f in tr.advisories)
        checks.update(tr.check_counts)
        overcount = max(overcount, Fraction(tr.sum_label_classes, tr.size_D))

    report = BoundReport(
        emit_graph6(G), emit_graph6(H), gG.value, gH, dP.value, **bounds,
        violations=dict(sorted(violations.items())), advisories=dict(sorted(advisories.items())),
        checks=dict(sorted(checks.items())), traces_run=len(traces), max_overcount=overcount, seconds=time.perf_counter() - t0,
    )
    for name in report.violations:
        log.error("critical finding %s on G=%s H=%s", name, report.g6_G, report.g6_H)
    return report, traces


@dataclass
class CorpusSummary:
    instances: int = 0
    skipped: int = 0
    violation_counts: Counter = field(default_factory=Counter)
    advisory_counts: Counter = field(default_factory=Counter)
    check_counts: Counter = field(default_factory=Counter)
    min_ratio: tuple[Fraction, str, str] | None = None
    max_overcount: tuple[Fraction, str, str] | None = None
    wall_total: float = 0.0
    wall_max: float = 0.0

    @property
    def critical(self) -> bool:
        return any(self.violation_counts.values())

    @classmethod
    def of(cls, rep: BoundReport) -> "CorpusSummary":
        key = (rep.g6_G, rep.g6_H)
        return cls(1, 0, Counter(rep.violations), Counter(rep.advisories), Counter(rep.checks),
                   (rep.ratio, *key), (rep.max_overcount, *key), rep.seconds, rep.seconds)

    def merge(self, other: "CorpusSummary") -> "CorpusSummary":
        def pick(a, b, better):
            if a is None or b is None:
                return a if b is None else b
            return better(a, b)
        # ties broken on the graph6 pair so merge order never matters
        return CorpusSummary(
            self.instances + other.instances,
            self.skipped + other.skipped,
            self.violation_counts + other.violation_counts,
            self.advisory_counts + other.advisory_counts,
            self.check_counts + other.check_counts,
            pick(self.min_ratio, other.min_ratio, min),
            pick(self.max_overcount, other.max_overcount,
                 lambda a, b: min(a, b, key=lambda t: (-t[0], t[1], t[2]))),
            self.wall_total + other.wall_total,
            max(self.wall_max, other.wall_max),
        )

    def to_dict(self) -> dict:
        ext = lambda t: None if t is None else {  # noqa: E731
            "value": [t[0].numerator, t[0].denominator], "g6_G": t[1], "g6_H": t[2]}
        return {
            "instances": self.instances, "skipped": self.skipped,
            "violation_counts": dict(sorted(self.violation_counts.items())),
            "advisory_counts": dict(sorted(self.advisory_counts.items())),
            "check_counts": dict(sorted(self.check_counts.items())),
            "min_ratio": ext(self.min_ratio), "max_overcount": ext(self.max_overcount),
            "wall_total_seconds": round(self.wall_total, 3), "wall_max_seconds": round(self.wall_max, 3),
        }


def corpus_graphs(cfg: RunConfig) -> tuple[list[Graph], list[Graph], int]:
    """Return (claw-free connected G candidates, connected H candidates, skipped count)."""
    if cfg.g6_path:
        try:
            pool = read_graph_file(cfg.g6_path)
        except OSError as exc:
            raise OSError(f"cannot read corpus file {cfg.g6_path}: {exc}") from exc
    else:
        cap = max(cfg.max_nG, cfg.max_nH)
        pool = [g for n in range(1, cap + 1) for g in enumerate_connected_graphs(n, cap=max(cap, 7))]
    Gs, Hs, skipped = [], [], 0
    for g in pool:
        if g.n == 0 or not is_connected(g):
            log.warning("skipping disconnected graph %s", emit_graph6(g))
            skipped += 1
            continue
        if g.n <= cfg.max_nH:
            Hs.append(g)
        if g.n <= cfg.max_nG:
            claw = find_claw(g)
            if claw is None:
                Gs.append(g)
            else:
                log.info("skipping %s as G: claw center %d leaves %s", emit_graph6(g), claw[0], claw[1])
                skipped += 1
    return Gs, Hs, skipped


def _verify_report(args) -> BoundReport:
    G, H, cfg = args
    return verify_pair(G, H, cfg)[0]


def run_corpus(cfg: RunConfig) -> tuple[CorpusSummary, list[BoundReport]]:
    cfg.validate()
    Gs, Hs, skipped = corpus_graphs(cfg)
    tasks = [(G, H, cfg) for G in Gs for H in Hs]
    jobs = cfg.effective_jobs()
    log.info("corpus: %d G x %d H = %d instances, %d jobs", len(Gs), len(Hs), len(tasks), jobs)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            records = list(ex.map(_verify_report, tasks, chunksize=8))
    else:
        records = [_verify_report(t) for t in tasks]
    summary = CorpusSummary(skipped=skipped)
    for rep in records:
        summary = summary.merge(CorpusSummary.of(rep))
    if cfg.out_dir:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_report(records, "csv", out / "records.csv")
        emit_report(records, "json", out / "records.json")
        (out / "summary.json").write_text(json.dumps(summary.to_dict(), indent=2) + "\n")
    return summary, records


def search_extremal(cfg: RunConfig | None = None, records: list[BoundReport] | None = None,
                    ) -> list[BoundReport]:
    """Instances ranked by ascending ratio, ties by graph6 strings."""
    if records is None:
        _, records = run_corpus(replace(cfg or RunConfig(), out_dir=None))
    ranked = sorted(records, key=lambda r: (r.ratio, r.g6_G, r.g6_H))
    if ranked and ranked[0].ratio < Fraction(2, 3):
        log.error("ratio %s below 2/3 on G=%s H=%s", ranked[0].ratio, ranked[0].g6_G, ranked[0].g6_H)
    return ranked


def emit_report(records: list[BoundReport], fmt: str, path) -> Path:
    if not records:
        raise ValueError("no records to write")
    path = Path(path)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for rep in records:
            w.writerow(rep.row())
        path.write_text(buf.getvalue())
    elif fmt == "json":
        path.write_text(json.dumps([r.to_dict() for r in records], indent=1) + "\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path


def load_report_json(path) -> list[BoundReport]:
    return [BoundReport.from_dict(d) for d in json.loads(Path(path).read_text())]
