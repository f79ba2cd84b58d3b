from .runner import (
    CPU_SLACK_MS,
    MEM_SLACK_MIB,
    ExecSpec,
    ExitStatus,
    RunOutcome,
    SandboxUnavailable,
    SpawnFailure,
    launcher_path,
    run_limited,
)

__all__ = [
    "CPU_SLACK_MS",
    "MEM_SLACK_MIB",
    "ExecSpec",
    "ExitStatus",
    "RunOutcome",
    "SandboxUnavailable",
    "SpawnFailure",
    "launcher_path",
    "run_limited",
]
