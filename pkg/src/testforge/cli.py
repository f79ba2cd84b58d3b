"""Command-line entry point: ``testforge <group> <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import tempfile
from pathlib import Path

from . import fixtures, pipeline
from .diffeval import VerdictHistogram, bucket_distribution, render_report
from .errors import EXIT_CODES, ConfigError, TestforgeError
from .exchange import ArchiveFormat, RemoteClient, RemoteEndpoint, export_archive, import_archive, write_suite_dir
from .judge import write_results
from .llm import CostLedger, PriceTable, TranscriptCache
from .prompts import lint_bundle
from .workspace import ProblemDir, WorkspaceConfig

log = logging.getLogger("testforge")

REPORT_FORMATS = {"markdown": "markdown_table", "csv": "csv", "json": "json"}


def _exit_code_help() -> str:
    return "exit codes:\n" + "\n".join(f"  {code:>3}  {text}" for code, text in sorted(EXIT_CODES.items()))


def _problems(cfg: WorkspaceConfig, ids) -> list:
    ids = list(ids) or cfg.problem_ids()
    if not ids:
        raise ConfigError(f"no problems found under {cfg.root / cfg.problems_dir}")
    return ids


def _out(text: str, path=None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------- forge


def cmd_forge_prompt(args, cfg):
    mode = "replay" if args.replay else args.mode
    for pid in _problems(cfg, args.problems):
        if args.print_only:
            _out(pipeline.render_for(cfg, pid, args.version) + "\n")
            continue
        res = pipeline.prompt_bundle(cfg, pid, mode=mode, version=args.version, model=args.model)
        print(f"{pid}: bundle with {len(res.bundle.param_rows)} parameter rows "
              f"-> {ProblemDir(cfg, pid).bundle_dir}")
        for f in res.findings:
            print(f"  {f.category}: {f.message}")
    return 0


def cmd_forge_lint(args, cfg):
    dirty = False
    for pid in _problems(cfg, args.problems):
        pd = ProblemDir(cfg, pid)
        findings = lint_bundle(pd.bundle(), pd.bounds())
        print(f"{pid}: {len(findings)} finding(s)")
        for f in findings:
            print(f"  {f.category}: {f.message}")
        dirty = dirty or bool(findings)
    return 1 if dirty and args.strict else 0


def cmd_forge_build(args, cfg):
    for pid in _problems(cfg, args.problems):
        report = pipeline.build_suite(cfg, pid, args.label, workers=args.workers, with_timings=args.with_timings)
        print(f"{pid}: {len(report.suite)} cases in suite {args.label!r}, "
              f"determinism_checked={str(report.determinism_checked).lower()}")
    return 0


# ------------------------------------------------------------------- judge


def cmd_judge_run(args, cfg):
    path = pipeline.judge_to_file(cfg, _problems(cfg, args.problems), args.suite, args.out, workers=args.workers,
                                  fast=args.fast, with_timings=args.with_timings)
    print(f"results written to {path}")
    return 0


# -------------------------------------------------------------------- diff


def cmd_diff_report(args, cfg):
    rows, hists = pipeline.diff_results(args.original, args.ai)
    total = VerdictHistogram()
    for h in hists.values():
        total = total + h
    text = render_report(rows, {"all": bucket_distribution(rows)}, {"all": total}, REPORT_FORMATS[args.format])
    _out(text, args.out)
    return 0


# ------------------------------------------------------------------- suite


def cmd_suite_export(args, cfg):
    pd = ProblemDir(cfg, args.problem)
    manifest = export_archive(pd.suite(args.label), args.format, Path(args.dest))
    for e in manifest:
        print(f"{e.sha256}  {e.size:>10}  {e.name}")
    return 0


def cmd_suite_import(args, cfg):
    pd = ProblemDir(cfg, args.problem)
    suite = import_archive(Path(args.src), args.format, label=args.label)
    write_suite_dir(suite, pd.suite_dir(args.label))
    print(f"{args.problem}: imported {len(suite)} cases into suite {args.label!r}")
    return 0


# ------------------------------------------------------------------ remote


def _remote(args, cfg) -> RemoteClient:
    if not cfg.remote.base_url:
        raise ConfigError("no remote.base_url configured in testforge.json")
    endpoint = RemoteEndpoint(cfg.remote.base_url, cfg.remote.token_env, dict(cfg.remote.problem_ids))
    return RemoteClient(endpoint, allow_network=not args.replay)


def cmd_remote_pull(args, cfg):
    client = _remote(args, cfg)
    rid = client.endpoint.remote_id(args.problem)
    problem = client.fetch_problem(rid)
    subs = client.fetch_submissions(rid, "accepted" if args.accepted_only else "all")
    pd = ProblemDir(cfg, args.problem)
    pd.root.mkdir(parents=True, exist_ok=True)
    meta_path = pd.root / "problem.json"
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.is_file() else {}
    meta.update({"id": args.problem, "limits": problem.limits.to_dict(), "checker": problem.checker.to_dict(),
                 "tags": list(problem.tags)})
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    (pd.root / "statement.md").write_text(problem.statement_markdown, encoding="utf-8")
    pd.save_submissions(subs)
    print(f"{args.problem}: pulled statement and {len(subs)} submission(s) from remote problem {rid}")
    return 0


def cmd_remote_push(args, cfg):
    client = _remote(args, cfg)
    rid = client.endpoint.remote_id(args.problem)
    pd = ProblemDir(cfg, args.problem)
    with tempfile.TemporaryDirectory(prefix="testforge-push-") as tmp:
        archive = Path(tmp) / f"{args.problem}-{args.label}.zip"
        local = export_archive(pd.suite(args.label), ArchiveFormat.FLAT_ZIP, archive)
        ack = client.upload_tests(rid, archive)
    if list(ack.manifest) != local:
        raise TestforgeError(f"remote manifest for {rid} differs from the uploaded archive")
    print(f"{args.problem}: uploaded {ack.test_count} tests to remote problem {rid}; manifest hashes match")
    return 0


def cmd_remote_rejudge(args, cfg):
    client = _remote(args, cfg)
    rid = client.endpoint.remote_id(args.problem)
    ids = args.submissions or [s.id for s in client.fetch_submissions(rid, "all")]
    job = client.request_rejudge(rid, ids)
    print(f"{args.problem}: rejudge job {job} for {len(ids)} submission(s)")
    return 0


def cmd_remote_status(args, cfg):
    print(json.dumps(_remote(args, cfg).rejudge_status(args.job), indent=2, sort_keys=True))
    return 0


# -------------------------------------------------------------------- cost


def cmd_cost_show(args, cfg):
    if args.from_cache:
        prices = PriceTable.load(cfg.path(args.prices or cfg.llm.prices))
        ledger = CostLedger()
        for ex in TranscriptCache(cfg.path(cfg.llm.cache_dir)).exchanges():
            ledger.charge(ex, prices)
    else:
        ledger = CostLedger.load(cfg.path(cfg.llm.ledger))
    for e in ledger.entries:
        print(f"{e.exchange_ref[:16]}  {e.model_id:<20} {e.cost_usd:>12}{'  (estimated tokens)' if e.estimated else ''}")
    print(f"total: {ledger.total} USD over {len(ledger)} call(s)")
    return 0


# ---------------------------------------------------------------- fixtures


def cmd_fixtures_init(args, cfg):
    dest = fixtures.init_workspace(Path(args.dest)).root
    print(f"fixture workspace initialised at {dest}")
    return 0


def cmd_fixtures_verify(args, cfg):
    report = fixtures.verify(cfg.root if args.existing else None, problems=args.problems or None,
                             workers=args.workers)
    for pid, o in sorted(report.outcomes.items()):
        r = o.row
        print(f"{pid}: ok ({o.case_count} forged cases; before={r.before} after={r.after} both={r.both} "
              f"only_original={r.only_original} only_ai={r.only_ai})")
    print("newly failed: " + " ".join(f"{k}={v}" for k, v in report.histogram.as_dict().items()))
    return 0


def cmd_fixtures_planted(args, cfg):
    """Write original/ai results files whose differential rows match the published table."""
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    orig_items, ai_items = [], []
    for row in fixtures.published_corpus_rows():
        orig, ai = fixtures.planted_results(row, neither=1)
        orig_items += [(row.problem_id, r) for r in orig]
        ai_items += [(row.problem_id, r) for r in ai]
    write_results(dest / "original.jsonl", orig_items)
    write_results(dest / "ai.jsonl", ai_items)
    print(f"wrote {dest / 'original.jsonl'} and {dest / 'ai.jsonl'}")
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="testforge", description="Forge, judge and compare contest test suites.",
                                epilog=_exit_code_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-w", "--workspace", default=".", help="workspace root (default: current directory)")
    p.add_argument("--replay", action="store_true",
                   help="answer LLM calls from recorded transcripts only and forbid all network access")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output")
    groups = p.add_subparsers(dest="group", metavar="GROUP", required=True)

    def group(name, help):
        g = groups.add_parser(name, help=help, epilog=_exit_code_help(),
                              formatter_class=argparse.RawDescriptionHelpFormatter)
        return g.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def command(sub, name, fn, help):
        c = sub.add_parser(name, help=help, description=help)
        c.set_defaults(fn=fn)
        return c

    forge = group("forge", "obtain generator bundles and forge test suites")
    c = command(forge, "prompt", cmd_forge_prompt, "render the prompt, ask the LLM, store the parsed bundle")
    c.add_argument("problems", nargs="*", help="problem ids (default: all)")
    c.add_argument("--mode", choices=("live", "record", "replay"), default="record")
    c.add_argument("--model", help="model id (default: from config)")
    c.add_argument("--version", choices=("v1", "v2"), help="prompt template version (default: from config)")
    c.add_argument("--print-only", action="store_true", help="print the rendered prompt and stop")
    c = command(forge, "lint", cmd_forge_lint, "static checks on stored bundles")
    c.add_argument("problems", nargs="*")
    c.add_argument("--strict", action="store_true", help="exit 1 when any finding is reported")
    c = command(forge, "build", cmd_forge_build, "compile, generate, validate and produce expected outputs")
    c.add_argument("problems", nargs="*")
    c.add_argument("--label", default="ai", help="suite label (default: ai)")
    c.add_argument("--workers", type=int)
    c.add_argument("--with-timings", action="store_true", help="include generator CPU times in the report")

    judge = group("judge", "run submissions against suites")
    c = command(judge, "run", cmd_judge_run, "judge every submission of the given problems on one suite")
    c.add_argument("problems", nargs="*")
    c.add_argument("--suite", required=True, help="suite label, e.g. original or ai")
    c.add_argument("--out", help="results file (default: results/<suite>.jsonl)")
    c.add_argument("--workers", type=int)
    c.add_argument("--fast", action="store_true", help="stop each submission at its first failing test")
    c.add_argument("--with-timings", action="store_true", help="record CPU time and peak memory per test")

    diff = group("diff", "differential re-evaluation reports")
    c = command(diff, "report", cmd_diff_report, "compare results on the original and the AI suite")
    c.add_argument("--original", required=True, type=Path)
    c.add_argument("--ai", required=True, type=Path)
    c.add_argument("--format", choices=sorted(REPORT_FORMATS), default="markdown")
    c.add_argument("--out")

    suite = group("suite", "import and export test archives")
    c = command(suite, "export", cmd_suite_export, "write a suite as a flat zip or a cms-style directory")
    c.add_argument("problem")
    c.add_argument("--label", required=True)
    c.add_argument("--format", choices=[f.value for f in ArchiveFormat], default=ArchiveFormat.FLAT_ZIP.value)
    c.add_argument("--dest", required=True)
    c = command(suite, "import", cmd_suite_import, "read an archive into a workspace suite")
    c.add_argument("problem")
    c.add_argument("src")
    c.add_argument("--label", required=True)
    c.add_argument("--format", choices=[f.value for f in ArchiveFormat], help="default: detect")

    remote = group("remote", "talk to a remote judge")
    c = command(remote, "pull", cmd_remote_pull, "fetch statement, limits and submissions")
    c.add_argument("problem")
    c.add_argument("--accepted-only", action="store_true")
    c = command(remote, "push", cmd_remote_push, "upload a suite as a flat zip and compare manifests")
    c.add_argument("problem")
    c.add_argument("--label", default="ai")
    c = command(remote, "rejudge", cmd_remote_rejudge, "request a rejudge of submissions")
    c.add_argument("problem")
    c.add_argument("--submissions", nargs="*", help="submission ids (default: all)")
    c = command(remote, "status", cmd_remote_status, "show a rejudge job")
    c.add_argument("job")

    cost = group("cost", "LLM spending")
    c = command(cost, "show", cmd_cost_show, "print the cost ledger and its total")
    c.add_argument("--prices", help="price table JSON for --from-cache (default: from config)")
    c.add_argument("--from-cache", action="store_true", help="price every recorded transcript instead")

    fx = group("fixtures", "the bundled fixture corpus")
    c = command(fx, "init", cmd_fixtures_init, "copy the corpus into a new workspace")
    c.add_argument("dest")
    c = command(fx, "verify", cmd_fixtures_verify, "forge and judge the corpus, checking every annotation")
    c.add_argument("problems", nargs="*")
    c.add_argument("--existing", action="store_true",
                   help="verify the workspace given by -w instead of a fresh copy of the corpus")
    c.add_argument("--workers", type=int)
    c = command(fx, "planted", cmd_fixtures_planted, "write results files reproducing the published table")
    c.add_argument("dest")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = WorkspaceConfig.load(Path(args.workspace))
        return args.fn(args, cfg)
    except TestforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
