"""Differential metrics between an original and an AI-generated suite.

Per problem: how many submissions fully pass each suite and both (DiffRow);
across problems: a distribution over failure-fraction buckets; and a histogram
of the verdict that newly failed submissions first hit on the AI suite.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from collections import Counter
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import MetricsError
from .model import SuiteResult, Verdict, full_pass

TABLE_HEADER = ("Problem", "100p Before", "100p After", "Both Sets", "Only Original", "Only AI")
CSV_HEADER = ("problem", "before", "after", "both", "only_original", "only_ai")
HISTOGRAM_VERDICTS = (Verdict.WA, Verdict.TLE, Verdict.MLE, Verdict.RE)


class SubmissionSetMismatch(MetricsError):
    pass


@dataclass(frozen=True)
class DiffRow:
    problem_id: str
    before: int
    after: int
    both: int
    only_original: int
    only_ai: int

    def __post_init__(self):
        counts = (self.before, self.after, self.both, self.only_original, self.only_ai)
        if any(c < 0 for c in counts):
            raise ValueError(f"{self.problem_id}: counts must be non-negative")
        if self.before != self.both + self.only_original or self.after != self.both + self.only_ai:
            raise ValueError(f"{self.problem_id}: inconsistent counts {counts}")

    @classmethod
    def from_counts(cls, problem_id: str, before: int, after: int, both: int) -> "DiffRow":
        return cls(problem_id, before, after, both, before - both, after - both)


class Bucket(enum.Enum):
    B0 = "0%"
    B1 = "0.1-10%"
    B2 = "10.1-25%"
    B3 = "25.1-50%"
    B4 = "50+%"

    @property
    def label(self) -> str:
        return self.value


def _by_submission(results: Iterable[SuiteResult]) -> dict:
    out = {}
    for r in results:
        if r.submission_id in out:
            raise SubmissionSetMismatch(f"submission {r.submission_id!r} appears twice")
        out[r.submission_id] = r
    return out


def _aligned(results_original, results_ai):
    orig = _by_submission(results_original)
    ai = _by_submission(results_ai)
    if orig.keys() != ai.keys():
        only_o = sorted(orig.keys() - ai.keys())
        only_a = sorted(ai.keys() - orig.keys())
        raise SubmissionSetMismatch(f"submission sets differ: original-only {only_o}, ai-only {only_a}")
    return orig, ai


def diff_problem(results_original: Iterable[SuiteResult], results_ai: Iterable[SuiteResult],
                 problem_id: str = "") -> DiffRow:
    orig, ai = _aligned(results_original, results_ai)
    passed_o = {s for s, r in orig.items() if full_pass(r)}
    passed_a = {s for s, r in ai.items() if full_pass(r)}
    return DiffRow.from_counts(problem_id, len(passed_o), len(passed_a), len(passed_o & passed_a))


_EDGES = ((Fraction(0), Bucket.B0), (Fraction(1, 10), Bucket.B1), (Fraction(1, 4), Bucket.B2),
          (Fraction(1, 2), Bucket.B3))


def bucket_of(before: int, only_original: int) -> Optional[Bucket]:
    """Bucket of the fraction only_original/before (closed on the right); None when before == 0."""
    if only_original < 0 or only_original > before:
        raise ValueError(f"only_original={only_original} must lie in [0, before={before}]")
    if before == 0:
        return None
    f = Fraction(only_original, before)
    for edge, bucket in _EDGES:
        if f <= edge:
            return bucket
    return Bucket.B4


@dataclass(frozen=True)
class BucketDistribution:
    counts: tuple  # (Bucket, count) in B0..B4 order
    undefined: tuple  # problem ids with before == 0

    def as_dict(self) -> dict:
        return dict(self.counts)

    def labelled(self) -> dict:
        return {b.label: n for b, n in self.counts}

    def __getitem__(self, bucket: Bucket) -> int:
        return self.as_dict()[bucket]


def bucket_distribution(rows: Iterable[DiffRow]) -> BucketDistribution:
    counts = Counter()
    undefined = []
    for row in rows:
        b = bucket_of(row.before, row.only_original)
        if b is None:
            undefined.append(row.problem_id)
        else:
            counts[b] += 1
    return BucketDistribution(tuple((b, counts[b]) for b in Bucket), tuple(undefined))


@dataclass(frozen=True)
class VerdictHistogram:
    WA: int = 0
    TLE: int = 0
    MLE: int = 0
    RE: int = 0

    @property
    def total(self) -> int:
        return self.WA + self.TLE + self.MLE + self.RE

    def as_dict(self) -> dict:
        return asdict(self)

    def __add__(self, other: "VerdictHistogram") -> "VerdictHistogram":
        return VerdictHistogram(*(a + b for a, b in zip(asdict(self).values(), asdict(other).values())))


def newly_failed(results_original, results_ai) -> list:
    """AI-suite results of submissions that fully pass the original but not the AI suite."""
    orig, ai = _aligned(results_original, results_ai)
    return [ai[s] for s in sorted(orig) if full_pass(orig[s]) and not full_pass(ai[s])]


def attributed_verdict(result: SuiteResult) -> Optional[Verdict]:
    """Verdict of the lowest-index failing test; None for compile failures."""
    first = result.first_failure()
    return first.verdict if first else None


def verdict_histogram(results_original, results_ai) -> VerdictHistogram:
    counts = Counter()
    for r in newly_failed(results_original, results_ai):
        v = attributed_verdict(r)
        if v is not None:
            counts[v.value] += 1
    return VerdictHistogram(**{v.value: counts[v.value] for v in HISTOGRAM_VERDICTS})


# ------------------------------------------------------------------ reports


def _row_values(row: DiffRow) -> tuple:
    return (row.problem_id, row.before, row.after, row.both, row.only_original, row.only_ai)


def render_report(rows: Iterable[DiffRow], distributions: Optional[Mapping[str, BucketDistribution]] = None,
                  histograms: Optional[Mapping[str, VerdictHistogram]] = None, format: str = "markdown_table") -> str:
    rows = sorted(rows, key=lambda r: r.problem_id)
    distributions = dict(sorted((distributions or {}).items()))
    histograms = dict(sorted((histograms or {}).items()))

    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in rows:
            w.writerow(_row_values(row))
        return buf.getvalue()

    if format == "json":
        doc = {
            "rows": [dict(zip(CSV_HEADER, _row_values(r))) for r in rows],
            "bucket_distributions": {name: {"counts": d.labelled(), "undefined": list(d.undefined)}
                                     for name, d in distributions.items()},
            "verdict_histograms": {name: h.as_dict() for name, h in histograms.items()},
        }
        return json.dumps(doc, indent=2) + "\n"

    if format != "markdown_table":
        raise ValueError(f"unknown report format {format!r}")
    lines = [" | ".join(TABLE_HEADER), " | ".join(["---"] + ["---:"] * 5)]
    lines += [" | ".join(str(v) for v in _row_values(r)) for r in rows]
    for name, d in distributions.items():
        lines += ["", f"Bucket distribution ({name})", "", "Bucket | Problems", "--- | ---:"]
        lines += [f"{label} | {n}" for label, n in d.labelled().items()]
        if d.undefined:
            lines.append(f"undefined (no 100p solutions): {', '.join(d.undefined)}")
    for name, h in histograms.items():
        lines += ["", f"Newly failed verdicts ({name})", "", "Verdict | Solutions", "--- | ---:"]
        lines += [f"{v} | {n}" for v, n in h.as_dict().items()]
    return "\n".join(lines) + "\n"
