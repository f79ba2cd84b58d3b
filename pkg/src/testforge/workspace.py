"""On-disk workspace: a JSON config plus one directory per problem.

Layout::

    testforge.json                      optional, see WorkspaceConfig
    problems/<id>/problem.json          limits, checker, tags, model solution
    problems/<id>/statement.md
    problems/<id>/bounds.json           optional constraint sidecar for lint
    problems/<id>/bundle/               generator, validator, params.txt, gen.bat
    problems/<id>/solutions/            submissions.json plus source files
    problems/<id>/suites/<label>/       testNN.in / testNN.ok
    problems/<id>/suites/<label>.forge.json
    results/<label>.jsonl               judge output
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import ConfigError
from .exchange.archive import read_suite_dir
from .forge import DEFAULT_TOOLCHAINS, ToolchainSpec
from .model import CheckerKind, Limits, Origin, Problem, Submission, TestSuite
from .prompts import GeneratorBundle, load_bundle

CONFIG_FILE = "testforge.json"


@dataclass(frozen=True)
class LLMSettings:
    base_url: str = "https://api.openai.com/v1"
    model: str = "o3-mini"
    api_key_env: str = "OPENAI_API_KEY"
    cache_dir: str = "llm-cache"
    prices: str = "prices.json"
    ledger: str = "ledger.jsonl"
    prompt_version: str = "v2"
    timeout_s: float = 600.0
    extra_body: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RemoteSettings:
    base_url: Optional[str] = None
    token_env: str = "TESTFORGE_REMOTE_TOKEN"
    problem_ids: dict = field(default_factory=dict)


@dataclass(frozen=True)
class WorkspaceConfig:
    root: Path
    problems_dir: str = "problems"
    results_dir: str = "results"
    workers: int = 1
    requested_case_count: int = 25
    relaxation: Fraction = Fraction(2)
    toolchains: dict = field(default_factory=lambda: dict(DEFAULT_TOOLCHAINS))
    llm: LLMSettings = field(default_factory=LLMSettings)
    remote: RemoteSettings = field(default_factory=RemoteSettings)

    @classmethod
    def load(cls, root: Path) -> "WorkspaceConfig":
        root = Path(root).resolve()
        path = root / CONFIG_FILE
        if not path.is_file():
            return cls(root)
        try:
            d = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        try:
            toolchains = dict(DEFAULT_TOOLCHAINS)
            for tid, spec in d.get("toolchains", {}).items():
                toolchains[tid] = ToolchainSpec.from_dict(tid, spec)
            return cls(
                root,
                problems_dir=d.get("problems_dir", "problems"),
                results_dir=d.get("results_dir", "results"),
                workers=int(d.get("workers", 1)),
                requested_case_count=int(d.get("requested_case_count", 25)),
                relaxation=Fraction(str(d.get("relaxation", 2))),
                toolchains=toolchains,
                llm=LLMSettings(**d.get("llm", {})),
                remote=RemoteSettings(**d.get("remote", {})),
            )
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc

    def path(self, rel: str) -> Path:
        return self.root / rel

    def problem_dir(self, problem_id: str) -> Path:
        return self.root / self.problems_dir / problem_id

    def problem_ids(self) -> list:
        base = self.root / self.problems_dir
        if not base.is_dir():
            return []
        return sorted(p.name for p in base.iterdir() if (p / "problem.json").is_file())

    def toolchain(self, toolchain_id: str) -> ToolchainSpec:
        try:
            return self.toolchains[toolchain_id]
        except KeyError:
            raise ConfigError(f"unknown toolchain {toolchain_id!r}; known: {sorted(self.toolchains)}") from None

    def results_path(self, label: str) -> Path:
        return self.root / self.results_dir / f"{label}.jsonl"


@dataclass(frozen=True)
class ProblemDir:
    """Accessors for one ``problems/<id>/`` directory."""

    config: WorkspaceConfig
    problem_id: str

    @property
    def root(self) -> Path:
        return self.config.problem_dir(self.problem_id)

    def _meta(self) -> dict:
        path = self.root / "problem.json"
        if not path.is_file():
            raise ConfigError(f"no problem {self.problem_id!r} in {self.config.root}")
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc

    def problem(self) -> Problem:
        meta = self._meta()
        statement = (self.root / "statement.md").read_text(encoding="utf-8")
        return Problem(meta.get("id", self.problem_id), statement, Limits.from_dict(meta.get("limits", {})),
                       CheckerKind.from_dict(meta.get("checker")), tuple(meta.get("tags", ())))

    @property
    def toolchain_id(self) -> str:
        """Toolchain for generator and validator."""
        return self._meta().get("toolchain", "cpp17")

    def model_solution(self) -> tuple:
        """(Submission, toolchain id) of the official solution used for expected outputs."""
        meta = self._meta().get("model_solution")
        if not meta:
            raise ConfigError(f"problem {self.problem_id!r} declares no model_solution")
        src = self.root / meta["file"]
        return Submission("model", src.read_text(encoding="utf-8"), meta.get("toolchain", "cpp17"),
                          Origin.FIXTURE), meta.get("toolchain", "cpp17")

    def submissions(self) -> list:
        path = self.root / "solutions" / "submissions.json"
        if not path.is_file():
            return []
        out = []
        for s in json.loads(path.read_text(encoding="utf-8")):
            text = (path.parent / s["file"]).read_text(encoding="utf-8") if "file" in s else s["source_text"]
            out.append(Submission(str(s["id"]), text, s["toolchain_id"], Origin(s.get("origin", "contest"))))
        return out

    def save_submissions(self, submissions) -> Path:
        d = self.root / "solutions"
        d.mkdir(parents=True, exist_ok=True)
        entries = []
        for s in submissions:
            ext = ".py" if s.toolchain_id.startswith("python") else ".cpp"
            name = f"{s.id}{ext}"
            (d / name).write_text(s.source_text, encoding="utf-8")
            entries.append({"id": s.id, "file": name, "toolchain_id": s.toolchain_id, "origin": s.origin.value})
        path = d / "submissions.json"
        path.write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")
        return path

    def bounds(self) -> Optional[dict]:
        path = self.root / "bounds.json"
        return json.loads(path.read_text(encoding="utf-8")) if path.is_file() else None

    @property
    def bundle_dir(self) -> Path:
        return self.root / "bundle"

    def bundle(self) -> GeneratorBundle:
        return load_bundle(self.bundle_dir)

    def suite_dir(self, label: str) -> Path:
        return self.root / "suites" / label

    def suite(self, label: str) -> TestSuite:
        return read_suite_dir(self.suite_dir(label), label)

    def forge_report_path(self, label: str) -> Path:
        return self.root / "suites" / f"{label}.forge.json"

    def suite_labels(self) -> list:
        base = self.root / "suites"
        return sorted(p.name for p in base.iterdir() if p.is_dir()) if base.is_dir() else []
