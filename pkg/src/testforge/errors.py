"""Exception families. Each family carries the CLI exit code it maps to."""


class TestforgeError(Exception):
    exit_code = 1


class ConfigError(TestforgeError):
    exit_code = 3


class NetworkForbidden(TestforgeError):
    exit_code = 4


class LLMError(TestforgeError):
    exit_code = 5


class BundleError(TestforgeError):
    exit_code = 6


class CompileError(TestforgeError):
    exit_code = 7

    def __init__(self, diagnostics: str):
        super().__init__(f"compilation failed:\n{diagnostics}")
        self.diagnostics = diagnostics


class ForgeError(TestforgeError):
    exit_code = 8


class JudgeError(TestforgeError):
    exit_code = 9


class SandboxError(TestforgeError):
    exit_code = 9


class RemoteFailure(TestforgeError):
    exit_code = 10


class ArchiveError(TestforgeError):
    exit_code = 11


class AnnotationViolated(TestforgeError):
    exit_code = 12

    def __init__(self, fixture: str, expectation: str):
        super().__init__(f"{fixture}: {expectation}")
        self.fixture = fixture
        self.expectation = expectation


class MetricsError(TestforgeError):
    exit_code = 13


EXIT_CODES = {
    0: "success",
    1: "unexpected internal error",
    2: "command-line usage error",
    ConfigError.exit_code: "workspace configuration error",
    NetworkForbidden.exit_code: "network access forbidden (--replay)",
    LLMError.exit_code: "LLM gateway error (cache miss, provider error, timeout)",
    BundleError.exit_code: "generator bundle could not be parsed",
    CompileError.exit_code: "compilation failed",
    ForgeError.exit_code: "test forging failed at a pipeline stage",
    JudgeError.exit_code: "judging or sandbox failure",
    RemoteFailure.exit_code: "remote judge API error",
    ArchiveError.exit_code: "test archive error",
    AnnotationViolated.exit_code: "fixture annotation violated",
    MetricsError.exit_code: "inconsistent result sets for metrics",
}
