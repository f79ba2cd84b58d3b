"""Judge one submission against one suite.

Verdict precedence for a single run: TLE > MLE > RE > (checker) WA/AC.
"""

from __future__ import annotations

import json
import logging
import tempfile
from concurrent.futures import ThreadPoolExecutor
from contextlib import ExitStack
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import CompileError, JudgeError
from .forge import Executable, ToolchainSpec, compile_component
from .model import TOKEN_COMPARE, CheckerKind, Problem, Submission, SuiteResult, TestOutcome, TestSuite, Verdict
from .sandbox import ExecSpec, RunOutcome, run_limited

log = logging.getLogger(__name__)

JITTER_MARGIN = 0.05
CHECKER_LIMITS_FACTOR = 5
SEVERITY = {Verdict.AC: 0, Verdict.WA: 1, Verdict.RE: 2, Verdict.MLE: 3, Verdict.TLE: 4}


class CheckerFailure(JudgeError):
    pass


def compare_tokens(expected: bytes, actual: bytes) -> bool:
    """Whitespace-insensitive token equality."""
    return expected.split() == actual.split()


def verdict_of(outcome: RunOutcome, expected: bytes, actual: bytes, checker: CheckerKind = TOKEN_COMPARE,
               check: Optional[Callable[[bytes, bytes], bool]] = None) -> Verdict:
    """Classify one run. ``check`` performs the comparison for external checkers."""
    if outcome.time_exceeded:
        return Verdict.TLE
    if outcome.memory_exceeded:
        return Verdict.MLE
    if outcome.exit_status.code != 0:
        return Verdict.RE
    if checker.is_external:
        if check is None:
            raise ValueError("an external checker needs a check callable")
        accepted = check(expected, actual)
    else:
        accepted = compare_tokens(expected, actual)
    return Verdict.AC if accepted else Verdict.WA


class ExternalChecker:
    """Runs ``checker <input> <output> <expected>``; exit 0 accepts, 1 or 2 rejects."""

    def __init__(self, executable: Executable, limits, scratch: Path):
        self.executable = executable
        self.limits = limits
        self.scratch = scratch

    def __call__(self, input_path: Path, output_path: Path, expected_path: Path) -> bool:
        outcome = run_limited(ExecSpec(
            self.executable.argv(str(input_path), str(output_path), str(expected_path)),
            self.scratch, self.limits))
        if outcome.exit_status.code == 0 and not outcome.flags:
            return True
        if outcome.exit_status.code in (1, 2) and not outcome.flags:
            return False
        raise CheckerFailure(f"checker crashed: {outcome.describe()}\n{outcome.stderr_excerpt}")


def resolve_checker(problem: Problem, toolchain: ToolchainSpec, scratch: Path,
                    base_dir: Optional[Path] = None, build_dir: Optional[Path] = None) -> Optional[ExternalChecker]:
    if not problem.checker.is_external:
        return None
    prog = Path(problem.checker.program)
    if not prog.is_absolute() and base_dir is not None:
        prog = base_dir / prog
    if prog.suffix == toolchain.source_suffix:
        exe = compile_component(prog.read_text(encoding="utf-8"), toolchain, build_dir)
    else:
        exe = Executable(prog)
    return ExternalChecker(exe, problem.limits.scaled(CHECKER_LIMITS_FACTOR), scratch)


def _worse(a, b):
    (va, oa), (vb, ob) = a, b
    return a if (SEVERITY[va], oa.cpu_ms) >= (SEVERITY[vb], ob.cpu_ms) else b


def judge_submission(submission: Submission, suite: TestSuite, problem: Problem, toolchain: ToolchainSpec,
                     *, workers: int = 1, fast: bool = False, jitter_margin: float = JITTER_MARGIN,
                     checker: Optional[ExternalChecker] = None, scratch: Optional[Path] = None,
                     build_dir: Optional[Path] = None) -> SuiteResult:
    """Compile once, run every test, return verdicts ordered by test index.

    ``fast`` stops at the first non-AC test (sequentially), so the result then
    covers only the tests actually run.
    """
    if not suite.complete:
        raise JudgeError(f"suite {suite.label!r} has cases without expected output")
    if problem.checker.is_external and checker is None:
        raise JudgeError(f"problem {problem.id!r} needs an external checker")
    try:
        exe = compile_component(submission.source_text, toolchain, build_dir)
    except CompileError as exc:
        log.info("%s: compilation failed", submission.id)
        log.debug("%s", exc.diagnostics)
        return SuiteResult(submission.id, suite.label, (), compile_failed=True)

    limits = problem.limits
    with ExitStack() as stack:
        if scratch is None:
            wd = Path(stack.enter_context(tempfile.TemporaryDirectory(prefix="judge-")))
        else:
            wd = Path(tempfile.mkdtemp(prefix="judge-", dir=scratch))
        inputs = wd / "inputs"
        inputs.mkdir()

        def run_case(case):
            in_path = inputs / case.input_name
            if not in_path.exists():
                in_path.write_bytes(case.input_bytes)

            def attempt():
                outcome = run_limited(ExecSpec(exe.argv(), wd, limits, stdin_source=in_path))
                actual = outcome.stdout_bytes()
                check = None
                if checker is not None:
                    exp_path = inputs / case.expected_name
                    exp_path.write_bytes(case.expected_bytes)
                    check = lambda _e, _a: checker(in_path, outcome.stdout_path, exp_path)  # noqa: E731
                return verdict_of(outcome, case.expected_bytes, actual, problem.checker, check), outcome

            best = attempt()
            verdict, outcome = best
            near_limit = outcome.cpu_ms >= (1 - jitter_margin) * limits.time_limit
            if jitter_margin > 0 and verdict != Verdict.TLE and near_limit:
                best = _worse(best, attempt())
            verdict, outcome = best
            return TestOutcome(case.index, verdict, outcome.cpu_ms, round(outcome.peak_mem_mib, 2))

        cases = list(suite.cases)
        if fast:
            per_test = []
            for case in cases:
                per_test.append(run_case(case))
                if per_test[-1].verdict != Verdict.AC:
                    break
        elif workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                per_test = list(pool.map(run_case, cases))
        else:
            per_test = [run_case(c) for c in cases]

    per_test.sort(key=lambda t: t.index)
    result = SuiteResult(submission.id, suite.label, tuple(per_test))
    log.info("%s on %s: %s", submission.id, suite.label, " ".join(t.verdict.value for t in per_test))
    return result


# -------------------------------------------------------------- JSON lines


def result_records(problem_id: str, result: SuiteResult, with_timings: bool = False) -> list:
    """One record per (submission, suite, test); compile failures get one record with test=None."""
    base = {"problem": problem_id, "submission": result.submission_id, "suite": result.suite_label}
    if result.compile_failed:
        return [{**base, "test": None, "verdict": None, "compile_failed": True}]
    records = []
    for t in result.per_test:
        rec = {**base, "test": t.index, "verdict": t.verdict.value, "compile_failed": False}
        if with_timings:
            rec["cpu_ms"] = t.cpu_ms
            rec["peak_mem_mib"] = t.peak_mem_mib
        records.append(rec)
    return records


def write_results(path: Path, items: Iterable, with_timings: bool = False) -> None:
    """``items`` yields (problem_id, SuiteResult) pairs."""
    with open(path, "w", encoding="utf-8") as fh:
        for problem_id, result in items:
            for rec in result_records(problem_id, result, with_timings):
                fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_results(path: Path) -> list:
    """Inverse of write_results: list of (problem_id, SuiteResult), in first-seen order."""
    grouped = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            key = (rec["problem"], rec["submission"], rec["suite"])
            entry = grouped.setdefault(key, {"compile_failed": False, "tests": []})
            if rec.get("compile_failed"):
                entry["compile_failed"] = True
            else:
                entry["tests"].append(TestOutcome(rec["test"], Verdict(rec["verdict"]),
                                                  rec.get("cpu_ms", 0), rec.get("peak_mem_mib", 0.0)))
    out = []
    for (problem_id, sub, suite), entry in grouped.items():
        tests = sorted(entry["tests"], key=lambda t: t.index)
        out.append((problem_id, SuiteResult(sub, suite, tuple(tests), entry["compile_failed"])))
    return out
