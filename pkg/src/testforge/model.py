"""Domain types shared by every stage of the pipeline.

All types are frozen dataclasses; construct new values instead of mutating.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Optional

MAX_TIME_LIMIT_MS = 60_000
NAME_RE = re.compile(r"^test(\d{2,})\.in$")
EXPECTED_SUFFIX = ".ok"


@dataclass(frozen=True)
class Limits:
    time_limit: int = 1000  # ms
    memory_limit: int = 256  # MiB
    output_limit: int = 64 * 1024 * 1024  # bytes

    def __post_init__(self):
        if not (0 < self.time_limit <= MAX_TIME_LIMIT_MS):
            raise ValueError(f"time_limit must be in (0, {MAX_TIME_LIMIT_MS}] ms, got {self.time_limit}")
        if self.memory_limit <= 0:
            raise ValueError(f"memory_limit must be positive, got {self.memory_limit}")
        if self.output_limit < 1:
            raise ValueError(f"output_limit must be >= 1, got {self.output_limit}")

    def scaled(self, time_factor: float) -> "Limits":
        return replace(self, time_limit=min(MAX_TIME_LIMIT_MS, int(round(self.time_limit * time_factor))))

    def to_dict(self) -> dict:
        return {"time_limit": self.time_limit, "memory_limit": self.memory_limit, "output_limit": self.output_limit}

    @classmethod
    def from_dict(cls, d: dict) -> "Limits":
        return cls(**{k: int(d[k]) for k in ("time_limit", "memory_limit", "output_limit") if k in d})


@dataclass(frozen=True)
class CheckerKind:
    """Output checker. ``program`` is None for whitespace-token comparison,
    otherwise a path to a checker source or executable called as
    ``checker <input> <output> <expected>``."""

    program: Optional[str] = None

    @property
    def is_external(self) -> bool:
        return self.program is not None

    def to_dict(self) -> dict:
        if self.program is None:
            return {"kind": "token_compare"}
        return {"kind": "external", "program": self.program}

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> "CheckerKind":
        if not d or d.get("kind", "token_compare") == "token_compare":
            return cls()
        return cls(program=d["program"])


TOKEN_COMPARE = CheckerKind()


@dataclass(frozen=True)
class Problem:
    id: str
    statement_markdown: str
    limits: Limits = field(default_factory=Limits)
    checker: CheckerKind = TOKEN_COMPARE
    tags: tuple = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("problem id cannot be empty")
        if not self.statement_markdown.strip():
            raise ValueError(f"problem {self.id!r} has an empty statement")
        object.__setattr__(self, "tags", tuple(self.tags))


def case_name(index: int, total: int) -> str:
    width = max(2, len(str(total)))
    return f"test{index:0{width}d}.in"


def expected_name(input_name: str, suffix: str = EXPECTED_SUFFIX) -> str:
    return input_name[: -len(".in")] + suffix


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class

    index: int
    input_name: str
    input_bytes: bytes
    expected_bytes: Optional[bytes] = None

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"test index must be >= 1, got {self.index}")
        m = NAME_RE.match(self.input_name)
        if not m:
            raise ValueError(f"bad test name {self.input_name!r}, expected testNN.in")
        if int(m.group(1)) != self.index:
            raise ValueError(f"test name {self.input_name!r} does not match index {self.index}")

    @property
    def expected_name(self) -> str:
        return expected_name(self.input_name)


@dataclass(frozen=True)
class TestSuite:
    __test__ = False

    label: str
    cases: tuple = ()

    def __post_init__(self):
        cases = tuple(self.cases)
        object.__setattr__(self, "cases", cases)
        prev = 0
        names = set()
        for c in cases:
            if c.index <= prev:
                raise ValueError(f"suite {self.label!r}: case indices must be strictly increasing")
            if c.input_name in names:
                raise ValueError(f"suite {self.label!r}: duplicate case name {c.input_name}")
            prev = c.index
            names.add(c.input_name)

    def __len__(self) -> int:
        return len(self.cases)

    def __iter__(self):
        return iter(self.cases)

    @property
    def complete(self) -> bool:
        return all(c.expected_bytes is not None for c in self.cases)


def make_suite(label: str, inputs: Iterable[bytes], expected: Optional[Iterable[Optional[bytes]]] = None) -> TestSuite:
    """Build a normalized suite from raw input (and optional expected) byte strings."""
    inputs = list(inputs)
    outs = list(expected) if expected is not None else [None] * len(inputs)
    if len(outs) != len(inputs):
        raise ValueError("inputs and expected outputs differ in length")
    n = len(inputs)
    return TestSuite(label, [TestCase(i, case_name(i, n), data, exp)
                             for i, (data, exp) in enumerate(zip(inputs, outs), start=1)])


def normalize_names(suite: TestSuite) -> TestSuite:
    n = len(suite.cases)
    return TestSuite(suite.label, [replace(c, index=i, input_name=case_name(i, n))
                                   for i, c in enumerate(suite.cases, start=1)])


def merge_suites(a: TestSuite, b: TestSuite) -> TestSuite:
    """Concatenate ``a`` then ``b`` and renumber from 1; label becomes ``a+b``."""
    merged = list(a.cases) + list(b.cases)
    n = len(merged)
    return TestSuite(f"{a.label}+{b.label}", [replace(c, index=i, input_name=case_name(i, n))
                                               for i, c in enumerate(merged, start=1)])


class Origin(str, enum.Enum):
    CONTEST = "contest"
    UPSOLVE = "upsolve"
    FIXTURE = "fixture"


@dataclass(frozen=True)
class Submission:
    id: str
    source_text: str
    toolchain_id: str
    origin: Origin = Origin.FIXTURE

    def __post_init__(self):
        if not self.source_text.strip():
            raise ValueError(f"submission {self.id!r} has empty source")
        object.__setattr__(self, "origin", Origin(self.origin))


class Verdict(str, enum.Enum):
    AC = "AC"
    WA = "WA"
    TLE = "TLE"
    MLE = "MLE"
    RE = "RE"


class TestOutcome(NamedTuple):
    __test__ = False

    index: int
    verdict: Verdict
    cpu_ms: int
    peak_mem_mib: float


@dataclass(frozen=True)
class SuiteResult:
    submission_id: str
    suite_label: str
    per_test: tuple = ()
    compile_failed: bool = False

    def __post_init__(self):
        per_test = tuple(TestOutcome(*t) for t in self.per_test)
        object.__setattr__(self, "per_test", per_test)
        if self.compile_failed and per_test:
            raise ValueError("a compile-failed result cannot carry per-test verdicts")
        seen = [t.index for t in per_test]
        if len(set(seen)) != len(seen):
            raise ValueError(f"result for {self.submission_id!r} repeats a test index")

    @property
    def verdicts(self) -> list:
        return [t.verdict for t in self.per_test]

    def first_failure(self) -> Optional[TestOutcome]:
        failing = [t for t in self.per_test if t.verdict != Verdict.AC]
        return min(failing, key=lambda t: t.index) if failing else None


def full_pass(result: SuiteResult) -> bool:
    """A "100 point" result: compiled and accepted on every test."""
    return not result.compile_failed and all(t.verdict == Verdict.AC for t in result.per_test)
