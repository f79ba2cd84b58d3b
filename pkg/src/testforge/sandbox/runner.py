"""Run a single child process under CPU, wall, memory and output ceilings.

The heavy lifting is done by a small C launcher (``launcher.c``) that is
compiled on first use and cached. Measurement slack: CPU time is exact to the
kernel's rusage accounting, but limit enforcement while running polls /proc
every 2 ms, so kills land within ``CPU_SLACK_MS`` of the limit and peak memory
may overshoot by up to ``MEM_SLACK_MIB`` plus whatever the child touches in
one polling interval.
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import logging
import os
import shutil
import signal
import subprocess
import sys
import tempfile
import uuid
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from ..errors import SandboxError
from ..model import Limits

log = logging.getLogger(__name__)

CPU_SLACK_MS = 50
MEM_SLACK_MIB = 2
STDERR_EXCERPT_BYTES = 4096

TIME_EXCEEDED = "time_exceeded"
MEMORY_EXCEEDED = "memory_exceeded"
OUTPUT_TRUNCATED = "output_truncated"

_OOM_MARKERS = (b"std::bad_alloc", b"MemoryError", b"Cannot allocate memory", b"out of memory")


class SpawnFailure(SandboxError):
    pass


class SandboxUnavailable(SandboxError):
    pass


def cache_dir() -> Path:
    root = os.environ.get("TESTFORGE_CACHE")
    return Path(root) if root else Path.home() / ".cache" / "testforge"


@functools.lru_cache(maxsize=None)
def launcher_path() -> Path:
    """Compile (once) and return the launcher binary."""
    if not sys.platform.startswith("linux"):
        raise SandboxUnavailable(f"resource enforcement needs Linux /proc, not {sys.platform}")
    src = Path(__file__).with_name("launcher.c")
    digest = hashlib.sha256(src.read_bytes()).hexdigest()[:16]
    dest = cache_dir() / f"launcher-{digest}"
    if dest.exists():
        return dest
    cc = os.environ.get("CC") or shutil.which("cc") or shutil.which("gcc") or shutil.which("clang")
    if not cc:
        raise SandboxUnavailable("no C compiler found to build the sandbox launcher")
    dest.parent.mkdir(parents=True, exist_ok=True)
    tmp = dest.with_name(f"{dest.name}.{os.getpid()}.tmp")
    proc = subprocess.run([cc, "-O2", "-o", str(tmp), str(src)], capture_output=True, text=True)
    if proc.returncode != 0:
        raise SandboxUnavailable(f"could not build sandbox launcher:\n{proc.stderr}")
    os.replace(tmp, dest)
    return dest


@dataclass(frozen=True)
class ExecSpec:
    command: Sequence[str]
    working_dir: Path
    limits: Limits
    stdin_source: Optional[Path] = None
    wall_multiplier: Fraction = Fraction(3)
    isolate_network: bool = True
    # RLIMIT_AS backstop in MiB; None picks 4x memory limit + 512, 0 disables
    address_space_mib: Optional[int] = None

    def __post_init__(self):
        if not self.command:
            raise ValueError("command cannot be empty")
        object.__setattr__(self, "command", tuple(str(c) for c in self.command))
        object.__setattr__(self, "wall_multiplier", Fraction(self.wall_multiplier))

    @property
    def wall_limit_ms(self) -> int:
        return int(self.limits.time_limit * self.wall_multiplier)


@dataclass(frozen=True)
class ExitStatus:
    code: Optional[int] = None  # set when the process exited on its own
    cause: Optional[str] = None  # signal name when it was killed

    @property
    def exited(self) -> bool:
        return self.code is not None

    def __str__(self) -> str:
        return f"exited({self.code})" if self.exited else f"killed({self.cause})"


@dataclass(frozen=True)
class RunOutcome:
    exit_status: ExitStatus
    cpu_ms: int
    wall_ms: int
    peak_mem_mib: float
    stdout_path: Path
    stderr_excerpt: str = ""
    flags: frozenset = field(default_factory=frozenset)

    @property
    def time_exceeded(self) -> bool:
        return TIME_EXCEEDED in self.flags

    @property
    def memory_exceeded(self) -> bool:
        return MEMORY_EXCEEDED in self.flags

    @property
    def output_truncated(self) -> bool:
        return OUTPUT_TRUNCATED in self.flags

    @property
    def clean(self) -> bool:
        """Exited with status 0 and broke no limit."""
        return self.exit_status.code == 0 and not self.flags

    def stdout_bytes(self) -> bytes:
        return self.stdout_path.read_bytes()

    def describe(self) -> str:
        extra = f" [{', '.join(sorted(self.flags))}]" if self.flags else ""
        return f"{self.exit_status}{extra} cpu={self.cpu_ms}ms mem={self.peak_mem_mib:.1f}MiB"


_run_counter = itertools.count()


def _signal_name(num: int) -> str:
    try:
        return signal.Signals(num).name
    except ValueError:
        return f"signal {num}"


def _parse_report(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        key, _, value = line.partition("=")
        out[key] = value
    return out


def run_limited(spec: ExecSpec, run_id: Optional[str] = None) -> RunOutcome:
    """Execute ``spec.command`` in a fresh ``{working_dir}/{run_id}`` directory.

    Raises SpawnFailure if the command cannot be started and SandboxUnavailable
    if a requested restriction cannot be enforced on this host.
    """
    launcher = launcher_path()
    wd = Path(spec.working_dir)
    if not wd.is_dir():
        raise SpawnFailure(f"working directory {wd} does not exist")
    run_id = run_id or f"run{next(_run_counter):05d}-{uuid.uuid4().hex[:8]}"
    run_dir = wd / run_id
    run_dir.mkdir(parents=True)
    stdin_path = run_dir / "stdin"
    stdout_path = run_dir / "stdout"
    stderr_path = run_dir / "stderr"
    if spec.stdin_source is not None:
        shutil.copyfile(spec.stdin_source, stdin_path)
    else:
        stdin_path.touch()

    limits = spec.limits
    as_mib = spec.address_space_mib
    if as_mib is None:
        as_mib = limits.memory_limit * 4 + 512
    fd, report = tempfile.mkstemp(prefix="report-", dir=run_dir)
    os.close(fd)
    argv = [
        str(launcher),
        "--report", report,
        "--stdin", str(stdin_path),
        "--stdout", str(stdout_path),
        "--stderr", str(stderr_path),
        "--cwd", str(run_dir),
        "--cpu-ms", str(limits.time_limit),
        "--wall-ms", str(spec.wall_limit_ms),
        "--mem-kib", str(limits.memory_limit * 1024),
        "--as-kib", str(as_mib * 1024),
        # one byte past the limit so overflow is observable
        "--fsize", str(limits.output_limit + 1),
    ]
    if spec.isolate_network:
        argv.append("--no-net")
    argv += ["--", *spec.command]

    outer_timeout = spec.wall_limit_ms / 1000 + 5
    try:
        proc = subprocess.run(argv, capture_output=True, timeout=outer_timeout)
    except subprocess.TimeoutExpired as exc:
        raise SandboxError(f"launcher did not return within {outer_timeout:.1f}s") from exc
    if proc.returncode != 0:
        raise SandboxError(f"launcher failed ({proc.returncode}): {proc.stderr.decode(errors='replace')}")
    rep = _parse_report(Path(report).read_text())
    os.unlink(report)

    setup_error = rep.get("setup_error", "")
    if setup_error:
        stage, _, errno_text = setup_error.partition(" ")
        reason = os.strerror(int(errno_text)) if errno_text.isdigit() else errno_text
        if stage == "unshare":
            raise SandboxUnavailable(f"cannot isolate network for {spec.command[0]}: {reason}")
        raise SpawnFailure(f"cannot start {spec.command[0]} ({stage}): {reason}")

    flags = set()
    if rep["time_exceeded"] == "1" or rep["wall_exceeded"] == "1":
        flags.add(TIME_EXCEEDED)
    if rep["memory_exceeded"] == "1":
        flags.add(MEMORY_EXCEEDED)

    if rep["exited"] == "1":
        status = ExitStatus(code=int(rep["code"]))
    else:
        status = ExitStatus(cause=_signal_name(int(rep["signal"])))

    with open(stderr_path, "rb") as fh:
        err_head = fh.read(STDERR_EXCERPT_BYTES)
    # the address-space backstop turns huge allocations into allocator failures
    if status.code != 0 and not flags and any(m in err_head for m in _OOM_MARKERS):
        flags.add(MEMORY_EXCEEDED)

    size = stdout_path.stat().st_size
    if size > limits.output_limit:
        with open(stdout_path, "r+b") as fh:
            fh.truncate(limits.output_limit)
        flags.add(OUTPUT_TRUNCATED)
    elif status.cause == "SIGXFSZ":
        flags.add(OUTPUT_TRUNCATED)

    outcome = RunOutcome(
        exit_status=status,
        cpu_ms=int(rep["cpu_us"]) // 1000,
        wall_ms=int(rep["wall_us"]) // 1000,
        peak_mem_mib=int(rep["peak_kib"]) / 1024,
        stdout_path=stdout_path,
        stderr_excerpt=err_head.decode("utf-8", errors="replace"),
        flags=frozenset(flags),
    )
    log.debug("%s: %s", " ".join(spec.command), outcome.describe())
    return outcome
