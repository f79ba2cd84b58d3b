"""High-level operations over a workspace; the CLI is a thin layer on top."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .diffeval import diff_problem, verdict_histogram
from .exchange.archive import write_suite_dir
from .forge import ForgeReport, forge_suite
from .judge import judge_submission, read_results, resolve_checker, write_results
from .llm import ChatExchange, CostLedger, ForbiddenTransport, LLMClient, PriceTable, TranscriptCache
from .model import Submission
from .prompts import (GeneratorBundle, exemplar_context, lint_bundle, load_template, parse_bundle, render_prompt,
                      save_bundle)
from .workspace import ProblemDir, WorkspaceConfig

log = logging.getLogger(__name__)

RESPONSE_FILE = "response.md"


def render_for(cfg: WorkspaceConfig, problem_id: str, version: Optional[str] = None) -> str:
    pd = ProblemDir(cfg, problem_id)
    ctx = exemplar_context(pd.problem().statement_markdown, cfg.requested_case_count)
    return render_prompt(load_template(version or cfg.llm.prompt_version), ctx)


def llm_client(cfg: WorkspaceConfig, mode: str) -> LLMClient:
    prices_path = cfg.path(cfg.llm.prices)
    prices = PriceTable.load(prices_path) if prices_path.is_file() else None
    return LLMClient(
        TranscriptCache(cfg.path(cfg.llm.cache_dir)),
        base_url=cfg.llm.base_url,
        api_key_env=cfg.llm.api_key_env,
        extra_body=cfg.llm.extra_body,
        timeout=cfg.llm.timeout_s,
        transport=ForbiddenTransport() if mode == "replay" else None,
        ledger=CostLedger.load(cfg.path(cfg.llm.ledger)),
        prices=prices,
    )


@dataclass(frozen=True)
class PromptResult:
    bundle: GeneratorBundle
    exchange: ChatExchange
    findings: list


def prompt_bundle(cfg: WorkspaceConfig, problem_id: str, mode: str = "replay",
                  version: Optional[str] = None, model: Optional[str] = None) -> PromptResult:
    """Render the prompt, obtain a response, parse it and store the bundle."""
    pd = ProblemDir(cfg, problem_id)
    prompt = render_for(cfg, problem_id, version)
    client = llm_client(cfg, mode)
    before = len(client.ledger)
    exchange = client.complete(model or cfg.llm.model, prompt, mode)
    if len(client.ledger) > before:
        client.ledger.save(cfg.path(cfg.llm.ledger))
    bundle = parse_bundle(exchange.response, cfg.requested_case_count)
    save_bundle(bundle, pd.bundle_dir)
    (pd.bundle_dir / RESPONSE_FILE).write_text(exchange.response, encoding="utf-8")
    findings = lint_bundle(bundle, pd.bounds())
    for f in findings:
        log.warning("%s: %s: %s", problem_id, f.category, f.message)
    return PromptResult(bundle, exchange, findings)


def build_suite(cfg: WorkspaceConfig, problem_id: str, label: str = "ai", workers: Optional[int] = None,
                with_timings: bool = False, scratch: Optional[Path] = None) -> ForgeReport:
    """Forge a suite from the stored bundle and write it under suites/<label>/."""
    pd = ProblemDir(cfg, problem_id)
    problem = pd.problem()
    model, model_tc = pd.model_solution()
    report = forge_suite(problem, pd.bundle(), model, cfg.toolchain(pd.toolchain_id),
                         solution_toolchain=cfg.toolchain(model_tc), label=label, relaxation=cfg.relaxation,
                         workers=workers or cfg.workers, scratch=scratch)
    write_suite_dir(report.suite, pd.suite_dir(label))
    pd.forge_report_path(label).write_text(
        json.dumps(report.to_dict(include_timings=with_timings), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return report


def judge_problem(cfg: WorkspaceConfig, problem_id: str, label: str, submissions: Optional[list] = None,
                  workers: Optional[int] = None, fast: bool = False, scratch: Optional[Path] = None) -> list:
    """Judge every submission of a problem on one of its suites; returns SuiteResults."""
    pd = ProblemDir(cfg, problem_id)
    problem = pd.problem()
    suite = pd.suite(label)
    subs = pd.submissions() if submissions is None else submissions
    checker = None
    if problem.checker.is_external:
        cdir = Path(scratch or pd.root / ".checker")
        cdir.mkdir(parents=True, exist_ok=True)
        checker = resolve_checker(problem, cfg.toolchain(pd.toolchain_id), cdir, base_dir=pd.root)
    out = []
    for s in subs:
        out.append(judge_submission(s, suite, problem, cfg.toolchain(s.toolchain_id), workers=workers or cfg.workers,
                                    fast=fast, checker=checker, scratch=scratch))
    return out


def judge_model(cfg: WorkspaceConfig, problem_id: str, label: str, scratch: Optional[Path] = None):
    pd = ProblemDir(cfg, problem_id)
    model, tc = pd.model_solution()
    return judge_problem(cfg, problem_id, label, [Submission("model", model.source_text, tc, model.origin)],
                         scratch=scratch)[0]


def judge_to_file(cfg: WorkspaceConfig, problem_ids: list, label: str, out: Optional[Path] = None,
                  workers: Optional[int] = None, fast: bool = False, with_timings: bool = False) -> Path:
    items = []
    for pid in problem_ids:
        for r in judge_problem(cfg, pid, label, workers=workers, fast=fast):
            items.append((pid, r))
    path = Path(out) if out else cfg.results_path(label)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_results(path, items, with_timings=with_timings)
    return path


def group_results(path: Path) -> dict:
    """problem id -> list of SuiteResult, from a JSON-lines results file."""
    grouped = {}
    for pid, r in read_results(path):
        grouped.setdefault(pid, []).append(r)
    return grouped


def diff_results(original: Path, ai: Path) -> tuple:
    """(rows, per-problem verdict histograms) from two results files."""
    orig, new = group_results(original), group_results(ai)
    rows, hists = [], {}
    for pid in sorted(set(orig) | set(new)):
        rows.append(diff_problem(orig.get(pid, []), new.get(pid, []), pid))
        hists[pid] = verdict_histogram(orig.get(pid, []), new.get(pid, []))
    return rows, hists
