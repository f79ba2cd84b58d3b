import sys
import time

import pytest

from testforge.forge import CPP17, compile_component
from testforge.model import Limits
from testforge.sandbox import ExecSpec, SpawnFailure, run_limited


@pytest.fixture
def exe(program_source):
    def build(name):
        return compile_component(program_source(name), CPP17)
    return build


def test_echo_runs_clean(tmp_path):
    out = run_limited(ExecSpec(("/bin/echo", "ok"), tmp_path, Limits()))
    assert out.clean
    assert out.stdout_bytes() == b"ok\n"
    assert str(out.exit_status) == "exited(0)"


def test_stdin_is_fed_and_run_dir_is_fresh(tmp_path):
    src = tmp_path / "in.txt"
    src.write_bytes(b"hello\n")
    a = run_limited(ExecSpec(("/bin/cat",), tmp_path, Limits(), stdin_source=src))
    b = run_limited(ExecSpec(("/bin/cat",), tmp_path, Limits(), stdin_source=src))
    assert a.stdout_bytes() == b.stdout_bytes() == b"hello\n"
    assert a.stdout_path.parent != b.stdout_path.parent


def test_busy_loop_is_killed_for_time(tmp_path, exe):
    t0 = time.monotonic()
    out = run_limited(ExecSpec(exe("busy.cpp").argv(), tmp_path, Limits(time_limit=200)))
    elapsed = time.monotonic() - t0
    assert out.time_exceeded
    assert not out.exit_status.exited
    assert out.cpu_ms >= 200
    assert elapsed < 0.6 + 0.5


def test_allocator_trips_memory_limit(tmp_path, exe):
    out = run_limited(ExecSpec(exe("alloc.cpp").argv(), tmp_path, Limits(memory_limit=64)))
    assert out.memory_exceeded
    assert out.peak_mem_mib >= 64
    assert not out.clean


def test_sleeper_is_stopped_by_wall_clock(tmp_path, exe):
    t0 = time.monotonic()
    out = run_limited(ExecSpec(exe("sleeper.cpp").argv(), tmp_path, Limits(time_limit=200)))
    assert out.time_exceeded
    assert out.cpu_ms < 100
    assert time.monotonic() - t0 < 0.6 + 0.5


def test_output_is_truncated_at_limit(tmp_path, exe):
    out = run_limited(ExecSpec(exe("spam.cpp").argv(), tmp_path, Limits(output_limit=1000)))
    assert out.output_truncated
    assert out.stdout_bytes() == b"x" * 1000


def test_nonzero_exit_and_stderr_excerpt(tmp_path, exe):
    out = run_limited(ExecSpec(exe("exit3.cpp").argv(), tmp_path, Limits()))
    assert out.exit_status.code == 3
    assert "giving up" in out.stderr_excerpt
    assert not out.flags and not out.clean


def test_network_is_isolated(tmp_path, exe):
    out = run_limited(ExecSpec(exe("connect.cpp").argv(), tmp_path, Limits(time_limit=2000)))
    assert out.exit_status.code == 1


def test_python_memory_error_counts_as_memory(tmp_path):
    code = "x = bytearray(2 << 30)"
    out = run_limited(ExecSpec((sys.executable, "-c", code), tmp_path, Limits(memory_limit=64),
                               address_space_mib=512))
    assert out.memory_exceeded


def test_missing_working_dir(tmp_path):
    with pytest.raises(SpawnFailure):
        run_limited(ExecSpec(("/bin/true",), tmp_path / "nope", Limits()))


def test_missing_program(tmp_path):
    with pytest.raises(SpawnFailure):
        run_limited(ExecSpec((str(tmp_path / "no-such-binary"),), tmp_path, Limits()))
