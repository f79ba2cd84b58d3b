"""Desk-scale fixture corpus: toy problems with reference and planted-bug
solutions, generator bundles, a recorded LLM transcript, and the published
per-problem counts used as transcription checks.

``verify`` re-derives every annotation in ``data/manifest.json`` by actually
forging and judging; the annotations are executable claims.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .. import pipeline
from ..diffeval import DiffRow, VerdictHistogram, diff_problem, verdict_histogram
from ..errors import AnnotationViolated
from ..model import SuiteResult, TestOutcome, Verdict, full_pass
from ..workspace import ProblemDir, WorkspaceConfig

log = logging.getLogger(__name__)

DATA_DIR = Path(__file__).with_name("data")
PROBLEMS = ("aplusb", "palindrome", "cartele", "homework")
EXEMPLAR_PROBLEM = "aplusb"
MAX_TEST_INDEX = 17  # palindrome: N = 200000, every value erased

# Published bucket counts (B0..B4) used to build synthetic corpora.
BUCKET_COUNTS_46 = (15, 14, 11, 4, 2)
BUCKET_COUNTS_18 = (6, 3, 4, 2, 3)


def load_manifest() -> dict:
    return json.loads((DATA_DIR / "manifest.json").read_text(encoding="utf-8"))


def init_workspace(dest: Path, problems=PROBLEMS) -> WorkspaceConfig:
    """Copy the corpus into ``dest`` and return its config. Existing files are overwritten."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    for name in ("testforge.json", "prices.json"):
        shutil.copy2(DATA_DIR / name, dest / name)
    shutil.copytree(DATA_DIR / "llm-cache", dest / "llm-cache", dirs_exist_ok=True)
    for pid in problems:
        shutil.copytree(DATA_DIR / "problems" / pid, dest / "problems" / pid, dirs_exist_ok=True)
    return WorkspaceConfig.load(dest)


# ------------------------------------------------------------ published rows


def published_rows() -> list:
    """All 25 rows of the published per-problem table, in publication order."""
    with open(DATA_DIR / "published_rows.csv", newline="", encoding="utf-8") as fh:
        return [DiffRow(r["problem"], int(r["before"]), int(r["after"]), int(r["both"]),
                        int(r["only_original"]), int(r["only_ai"])) for r in csv.DictReader(fh)]


def published_corpus_rows() -> list:
    """Table rows with exact duplicates dropped (one problem is listed twice)."""
    seen, out = set(), []
    for row in published_rows():
        if row not in seen:
            seen.add(row)
            out.append(row)
    return out


# Representative (before, only_original) per bucket; the fractions sit exactly
# on the closed right edge of each bucket, or inside B0/B4.
_BUCKET_SHAPES = ((10, 0), (10, 1), (8, 2), (6, 3), (4, 3))


def synthetic_rows(counts, prefix: str) -> list:
    """Rows whose bucket distribution is exactly ``counts`` (B0..B4)."""
    rows = []
    for bucket, n in enumerate(counts):
        before, failed = _BUCKET_SHAPES[bucket]
        for k in range(n):
            scale = 1 + k % 3
            b, f = before * scale, failed * scale
            rows.append(DiffRow(f"{prefix}-b{bucket}-{k + 1:02d}", b, b - f, b - f, f, 0))
    return rows


def planted_results(row: DiffRow, neither: int = 0, suites=("original", "ai")) -> tuple:
    """Synthetic SuiteResults whose differential counts reproduce ``row``.

    Submissions passing a suite get one AC test; failing ones get one WA test.
    ``neither`` adds submissions that fail both suites.
    """
    def res(sid, label, ok):
        return SuiteResult(sid, label, (TestOutcome(1, Verdict.AC if ok else Verdict.WA, 1, 1.0),))

    pattern = [(True, True)] * row.both + [(True, False)] * row.only_original \
        + [(False, True)] * row.only_ai + [(False, False)] * neither
    orig = [res(f"s{i:04d}", suites[0], o) for i, (o, _) in enumerate(pattern, 1)]
    ai = [res(f"s{i:04d}", suites[1], a) for i, (_, a) in enumerate(pattern, 1)]
    return orig, ai


# ------------------------------------------------------------ verification


def check_profile(fixture: str, sid: str, suite: str, profile, result: SuiteResult) -> None:
    where = f"{sid} on {suite}"
    if result.compile_failed:
        raise AnnotationViolated(fixture, f"{where}: compilation failed")
    verdicts = {t.index: t.verdict.value for t in result.per_test}
    if profile == "AC":
        if not full_pass(result):
            raise AnnotationViolated(fixture, f"{where}: expected all AC, got {_summary(result)}")
        return
    if full_pass(result):
        raise AnnotationViolated(fixture, f"{where}: expected a failure, got all AC")
    first = result.first_failure()
    if "first" in profile and first.verdict.value != profile["first"]:
        raise AnnotationViolated(fixture, f"{where}: expected first failure {profile['first']}, "
                                          f"got {first.verdict.value} on test {first.index}")
    if "all" in profile and set(verdicts.values()) != {profile["all"]}:
        raise AnnotationViolated(fixture, f"{where}: expected {profile['all']} everywhere, got {_summary(result)}")
    for idx, want in profile.get("cases", {}).items():
        got = verdicts.get(int(idx))
        if got != want:
            raise AnnotationViolated(fixture, f"{where}: expected {want} on test {idx}, got {got}")


def _summary(result: SuiteResult) -> str:
    return " ".join(f"{t.index}:{t.verdict.value}" for t in result.per_test)


@dataclass
class FixtureOutcome:
    problem_id: str
    original: list
    ai: list
    row: DiffRow
    histogram: VerdictHistogram
    case_count: int


@dataclass
class VerifyReport:
    outcomes: dict = field(default_factory=dict)  # problem id -> FixtureOutcome

    @property
    def rows(self) -> list:
        return [o.row for _, o in sorted(self.outcomes.items())]

    @property
    def histogram(self) -> VerdictHistogram:
        total = VerdictHistogram()
        for o in self.outcomes.values():
            total = total + o.histogram
        return total


def verify_problem(cfg: WorkspaceConfig, problem_id: str, spec: dict, scratch: Optional[Path] = None) -> FixtureOutcome:
    pd = ProblemDir(cfg, problem_id)
    if spec.get("transcript") and not (pd.bundle_dir / "params.txt").is_file():
        pipeline.prompt_bundle(cfg, problem_id, mode="replay")
    report = pipeline.build_suite(cfg, problem_id, "ai", scratch=scratch)

    model = pipeline.judge_model(cfg, problem_id, "ai", scratch=scratch)
    if not full_pass(model):
        raise AnnotationViolated(problem_id, f"model solution fails its own forged suite: {_summary(model)}")

    subs = {s.id: s for s in pd.submissions()}
    if set(subs) != set(spec["submissions"]):
        raise AnnotationViolated(problem_id, f"manifest lists {sorted(spec['submissions'])}, "
                                             f"workspace has {sorted(subs)}")
    original = pipeline.judge_problem(cfg, problem_id, "original", scratch=scratch)
    ai = pipeline.judge_problem(cfg, problem_id, "ai", scratch=scratch)
    for res_o, res_a in zip(original, ai):
        prof = spec["submissions"][res_o.submission_id]
        check_profile(problem_id, res_o.submission_id, "original", prof["original"], res_o)
        check_profile(problem_id, res_a.submission_id, "ai", prof["ai"], res_a)

    row = diff_problem(original, ai, problem_id)
    want = DiffRow(problem_id, *spec["diff_row"])
    if row != want:
        raise AnnotationViolated(problem_id, f"expected diff row {spec['diff_row']}, got "
                                             f"{[row.before, row.after, row.both, row.only_original, row.only_ai]}")
    return FixtureOutcome(problem_id, original, ai, row, verdict_histogram(original, ai), len(report.suite))


def verify(workspace: Optional[Path] = None, problems=None, workers: Optional[int] = None) -> VerifyReport:
    """Forge and judge every fixture problem, checking all manifest annotations.

    Without ``workspace`` the corpus is copied to a temporary directory first.
    Raises AnnotationViolated on the first broken claim.
    """
    manifest = load_manifest()
    problems = list(problems or manifest["problems"])
    with tempfile.TemporaryDirectory(prefix="testforge-fixtures-") as tmp:
        if workspace is None:
            cfg = init_workspace(Path(tmp) / "ws", problems)
        else:
            cfg = WorkspaceConfig.load(workspace)
        workers = workers or max(1, min(len(problems), os.cpu_count() or 1))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pid: pool.submit(verify_problem, cfg, pid, manifest["problems"][pid]) for pid in problems}
            report = VerifyReport({pid: f.result() for pid, f in futures.items()})

    if set(problems) == set(manifest["problems"]):
        want = VerdictHistogram(**manifest["newly_failed_histogram"])
        if report.histogram != want:
            raise AnnotationViolated("corpus", f"expected newly-failed histogram {want.as_dict()}, "
                                               f"got {report.histogram.as_dict()}")
    return report
