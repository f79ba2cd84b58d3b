"""Turn a generator bundle and a model solution into a validated test suite.

Pipeline: compile generator and validator -> generate inputs -> validate
every input -> generate again and byte-compare -> run the model solution to
produce expected outputs.
"""

from __future__ import annotations

import hashlib
import logging
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from contextlib import ExitStack
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .errors import CompileError, ForgeError
from .model import Limits, Problem, Submission, TestCase, TestSuite, case_name
from .prompts import GeneratorBundle
from .sandbox import ExecSpec, RunOutcome, run_limited
from .sandbox.runner import cache_dir

log = logging.getLogger(__name__)

INCLUDE_DIR = Path(__file__).with_name("include")
TOOL_LIMITS = Limits(time_limit=10_000, memory_limit=1024, output_limit=256 * 1024 * 1024)
COMPILE_TIMEOUT_S = 300

_PY_COMPILE = ("import py_compile, shutil, sys; py_compile.compile(sys.argv[1], doraise=True); "
               "shutil.copyfile(sys.argv[1], sys.argv[2])")


@dataclass(frozen=True)
class ToolchainSpec:
    toolchain_id: str
    compile_command: tuple
    source_suffix: str
    header_search_paths: tuple = ()
    run_command: tuple = ("{out}",)

    def __post_init__(self):
        object.__setattr__(self, "compile_command", tuple(self.compile_command))
        object.__setattr__(self, "run_command", tuple(self.run_command))
        object.__setattr__(self, "header_search_paths", tuple(str(p) for p in self.header_search_paths))
        joined = "\x00".join(self.compile_command)
        for slot in ("{src}", "{out}"):
            if joined.count(slot) != 1:
                raise ValueError(f"toolchain {self.toolchain_id!r}: compile command needs {slot} exactly once")

    def to_dict(self) -> dict:
        return {"compile": list(self.compile_command), "suffix": self.source_suffix,
                "headers": list(self.header_search_paths), "run": list(self.run_command)}

    @classmethod
    def from_dict(cls, toolchain_id: str, d: dict) -> "ToolchainSpec":
        headers = [str(INCLUDE_DIR) if h == "@testlib" else h for h in d.get("headers", [])]
        return cls(toolchain_id, tuple(d["compile"]), d["suffix"], tuple(headers), tuple(d.get("run", ("{out}",))))


CPP17 = ToolchainSpec("cpp17", ("g++", "-std=gnu++17", "-O2", "-pipe", "-o", "{out}", "{src}"),
                      ".cpp", (str(INCLUDE_DIR),))
PYTHON3 = ToolchainSpec("python3", ("python3", "-c", _PY_COMPILE, "{src}", "{out}"), ".py", (),
                        ("python3", "{out}"))
DEFAULT_TOOLCHAINS = {CPP17.toolchain_id: CPP17, PYTHON3.toolchain_id: PYTHON3}


@dataclass(frozen=True)
class Executable:
    path: Path
    run_command: tuple = ("{out}",)

    def argv(self, *args: str) -> list:
        return [part.replace("{out}", str(self.path)) for part in self.run_command] + list(args)

    def __fspath__(self) -> str:
        return str(self.path)


def _build_dir() -> Path:
    return cache_dir() / "build"


def compile_component(source: str, toolchain: ToolchainSpec, build_dir: Optional[Path] = None) -> Executable:
    """Compile ``source``; identical (source, toolchain) pairs reuse the cached binary."""
    build_dir = Path(build_dir) if build_dir else _build_dir()
    h = hashlib.sha256()
    for part in (source, *toolchain.compile_command, *toolchain.header_search_paths):
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    for hdr in toolchain.header_search_paths:
        for f in sorted(Path(hdr).glob("*.h")):
            h.update(f.read_bytes())
    out = build_dir / f"{toolchain.toolchain_id}-{h.hexdigest()[:20]}"
    exe = Executable(out, toolchain.run_command)
    if out.exists():
        return exe
    build_dir.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory(dir=build_dir) as tmp:
        src = Path(tmp) / f"main{toolchain.source_suffix}"
        src.write_text(source, encoding="utf-8")
        tmp_out = Path(tmp) / "out"
        cmd = [p.replace("{src}", str(src)).replace("{out}", str(tmp_out)) for p in toolchain.compile_command]
        if cmd[0] == "python3":
            cmd[0] = sys.executable
        env = dict(os.environ)
        if toolchain.header_search_paths:
            env["CPATH"] = os.pathsep.join([*toolchain.header_search_paths, env.get("CPATH", "")]).rstrip(os.pathsep)
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True, env=env, cwd=tmp, timeout=COMPILE_TIMEOUT_S)
        except FileNotFoundError as exc:
            raise CompileError(f"compiler not found: {cmd[0]}") from exc
        except subprocess.TimeoutExpired as exc:
            raise CompileError(f"compiler timed out after {COMPILE_TIMEOUT_S}s") from exc
        if proc.returncode != 0 or not tmp_out.exists():
            raise CompileError((proc.stderr + proc.stdout).replace(str(src), src.name))
        os.replace(tmp_out, out)
    return exe


# ------------------------------------------------------------------ failures


class GeneratorFailed(ForgeError):
    def __init__(self, row: int, outcome: RunOutcome):
        super().__init__(f"generator failed on parameter row {row}: {outcome.describe()}\n{outcome.stderr_excerpt}")
        self.row = row
        self.outcome = outcome


class ModelSolutionFailed(ForgeError):
    def __init__(self, index: int, outcome: RunOutcome):
        super().__init__(f"model solution failed on test {index}: {outcome.describe()}\n{outcome.stderr_excerpt}")
        self.index = index
        self.outcome = outcome


class ForgeFailure(ForgeError):
    """A forge_suite stage failed; ``cause`` is the underlying error."""

    def __init__(self, stage: str, message: str, index: Optional[int] = None, cause: Optional[Exception] = None):
        where = f" (case {index})" if index is not None else ""
        super().__init__(f"stage {stage}{where}: {message}")
        self.stage = stage
        self.index = index
        self.cause = cause


# -------------------------------------------------------------------- stages


def _map(fn, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _scratch(stack: ExitStack, scratch: Optional[Path]) -> Path:
    if scratch is not None:
        Path(scratch).mkdir(parents=True, exist_ok=True)
        return Path(scratch)
    return Path(stack.enter_context(tempfile.TemporaryDirectory(prefix="testforge-")))


def _run_generator(generator: Executable, param_rows: Sequence[str], limits: Limits, scratch: Path,
                   workers: int) -> list:
    def one(item):
        i, row = item
        spec = ExecSpec(generator.argv(*shlex.split(row)), scratch, limits)
        return i, run_limited(spec)

    return _map(one, list(enumerate(param_rows, start=1)), workers)


def generate_inputs(generator: Executable, param_rows: Sequence[str], limits: Limits = TOOL_LIMITS,
                    scratch: Optional[Path] = None, workers: int = 1, timings: Optional[dict] = None) -> list:
    """Run the generator once per parameter row; row i becomes test{i:02}.in."""
    if not param_rows:
        raise ValueError("param_rows cannot be empty")
    n = len(param_rows)
    with ExitStack() as stack:
        wd = _scratch(stack, scratch)
        results = _run_generator(generator, param_rows, limits, wd, workers)
        for i, outcome in results:
            if not outcome.clean:
                raise GeneratorFailed(i, outcome)
        if timings is not None:
            timings.update({i: outcome.cpu_ms for i, outcome in results})
        return [TestCase(i, case_name(i, n), outcome.stdout_bytes()) for i, outcome in results]


@dataclass(frozen=True)
class ValidationResult:
    index: int
    passed: bool
    message: str = ""


def _materialize(cases: Sequence[TestCase], where: Path) -> dict:
    where.mkdir(parents=True, exist_ok=True)
    paths = {}
    for c in cases:
        p = where / c.input_name
        p.write_bytes(c.input_bytes)
        paths[c.index] = p
    return paths


def validate_inputs(validator: Executable, cases: Sequence[TestCase], limits: Limits = TOOL_LIMITS,
                    scratch: Optional[Path] = None, workers: int = 1) -> list:
    """Feed each input to the validator; exit code 0 means valid."""
    with ExitStack() as stack:
        wd = _scratch(stack, scratch)
        paths = _materialize(cases, Path(tempfile.mkdtemp(prefix="inputs-", dir=wd)))

        def one(case):
            outcome = run_limited(ExecSpec(validator.argv(), wd, limits, stdin_source=paths[case.index]))
            if outcome.clean:
                return ValidationResult(case.index, True)
            msg = outcome.stderr_excerpt.strip() or outcome.describe()
            return ValidationResult(case.index, False, msg)

        return _map(one, list(cases), workers)


def produce_expected(model_solution: Executable, cases: Sequence[TestCase], limits: Limits,
                     relaxation: Fraction = Fraction(2), scratch: Optional[Path] = None,
                     workers: int = 1) -> list:
    """Run the model solution (time limit scaled by ``relaxation``) on every input."""
    relaxed = limits.scaled(float(relaxation))
    with ExitStack() as stack:
        wd = _scratch(stack, scratch)
        paths = _materialize(cases, Path(tempfile.mkdtemp(prefix="inputs-", dir=wd)))

        def one(case):
            return case, run_limited(ExecSpec(model_solution.argv(), wd, relaxed, stdin_source=paths[case.index]))

        results = _map(one, list(cases), workers)
        for case, outcome in results:
            if not outcome.clean:
                raise ModelSolutionFailed(case.index, outcome)
        return [replace(case, expected_bytes=outcome.stdout_bytes()) for case, outcome in results]


# ------------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class CaseReport:
    index: int
    generator_cpu_ms: int
    validator_pass: bool


@dataclass(frozen=True)
class ForgeReport:
    suite: TestSuite
    per_case: tuple
    model_solution_id: str
    determinism_checked: bool

    def to_dict(self, include_timings: bool = False) -> dict:
        cases = []
        for c in self.per_case:
            d = {"index": c.index, "validator_pass": c.validator_pass}
            if include_timings:
                d["generator_cpu_ms"] = c.generator_cpu_ms
            cases.append(d)
        return {
            "suite": self.suite.label,
            "case_count": len(self.suite),
            "model_solution_id": self.model_solution_id,
            "determinism_checked": self.determinism_checked,
            "cases": cases,
        }


def forge_suite(problem: Problem, bundle: GeneratorBundle, model_solution: Submission, toolchain: ToolchainSpec,
                *, solution_toolchain: Optional[ToolchainSpec] = None, label: str = "ai",
                relaxation: Fraction = Fraction(2), workers: int = 1, scratch: Optional[Path] = None,
                build_dir: Optional[Path] = None) -> ForgeReport:
    """Full pipeline; any stage failure raises ForgeFailure naming the stage."""
    solution_toolchain = solution_toolchain or toolchain
    with ExitStack() as stack:
        wd = _scratch(stack, scratch)
        try:
            generator = compile_component(bundle.generator_source, toolchain, build_dir)
            validator = compile_component(bundle.validator_source, toolchain, build_dir)
            model = compile_component(model_solution.source_text, solution_toolchain, build_dir)
        except CompileError as exc:
            raise ForgeFailure("compile", exc.diagnostics, cause=exc) from exc

        timings = {}
        try:
            cases = generate_inputs(generator, bundle.param_rows, scratch=wd / "gen1", workers=workers,
                                    timings=timings)
        except GeneratorFailed as exc:
            raise ForgeFailure("generate", str(exc), exc.row, exc) from exc

        verdicts = validate_inputs(validator, cases, scratch=wd / "val", workers=workers)
        for v in verdicts:
            if not v.passed:
                raise ForgeFailure("validate", v.message, v.index)

        try:
            again = generate_inputs(generator, bundle.param_rows, scratch=wd / "gen2", workers=workers)
        except GeneratorFailed as exc:
            raise ForgeFailure("determinism", str(exc), exc.row, exc) from exc
        for first, second in zip(cases, again):
            if first.input_bytes != second.input_bytes:
                raise ForgeFailure("determinism", "second generation pass produced different bytes", first.index)

        try:
            cases = produce_expected(model, cases, problem.limits, relaxation, scratch=wd / "model", workers=workers)
        except ModelSolutionFailed as exc:
            raise ForgeFailure("expected", str(exc), exc.index, exc) from exc

        per_case = tuple(CaseReport(c.index, timings.get(c.index, 0), True) for c in cases)
        log.info("forged %d cases for %s", len(cases), problem.id)
        return ForgeReport(TestSuite(label, cases), per_case, model_solution.id, True)


def clear_build_cache(build_dir: Optional[Path] = None) -> None:
    shutil.rmtree(Path(build_dir) if build_dir else _build_dir(), ignore_errors=True)
