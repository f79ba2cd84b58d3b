"""Acceptance suite: one test per criterion, each checking its own runtime bound.

The terminal summary prints one PASS/FAIL line per criterion.
"""

import json
import logging
import random
import socket
import time
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from testforge import fixtures, pipeline
from testforge.diffeval import Bucket, DiffRow, VerdictHistogram, bucket_distribution, bucket_of, diff_problem
from testforge.exchange import MockJudgeServer, export_archive, import_archive
from testforge.exchange.archive import manifest_of_zip
from testforge.forge import CPP17, compile_component, generate_inputs
from testforge.judge import write_results
from testforge.llm import (ChatExchange, CostLedger, ForbiddenTransport, LLMClient, Price, PriceTable,
                           TranscriptCache, cost_of)
from testforge.model import Limits, make_suite
from testforge.prompts import exemplar_context, load_template, render_prompt
from testforge.sandbox import ExecSpec, run_limited
from testforge.workspace import ProblemDir

PROPERTY_EXAMPLES = 100


class Stopwatch:
    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.monotonic() - self.t0


@pytest.fixture
def no_sockets(monkeypatch):
    """Fail loudly on any outbound connection from this process."""
    attempts = []

    def refuse(self, address, *a, **kw):
        attempts.append(address)
        raise OSError(f"network call attempted: {address}")

    monkeypatch.setattr(socket.socket, "connect", refuse)
    monkeypatch.setattr(socket.socket, "connect_ex", refuse)
    return attempts


# -------------------------------------------------------------------------- 1


@pytest.mark.criterion(1, "per-problem table identities")
def test_table_identities():
    with Stopwatch() as sw:
        rows = fixtures.published_rows()
        assert len(rows) == 25
        for r in rows:
            assert r.before == r.both + r.only_original, r
            assert r.after == r.both + r.only_ai, r
        by_id = {r.problem_id: r for r in rows}
        assert (by_id["walrus"].before, by_id["walrus"].after) == (109 + 5, 109 + 4) == (114, 113)
        assert (by_id["sandwich"].before, by_id["sandwich"].after) == (19 + 25, 19 + 8) == (44, 27)
    assert sw.elapsed < 1.0


# -------------------------------------------------------------------------- 2


@pytest.mark.criterion(2, "bucket distributions and boundaries")
def test_bucket_distributions():
    with Stopwatch() as sw:
        for counts, total in ((fixtures.BUCKET_COUNTS_46, 46), (fixtures.BUCKET_COUNTS_18, 18)):
            rows = fixtures.synthetic_rows(counts, "syn")
            assert len(rows) == total
            dist = bucket_distribution(rows)
            assert tuple(n for _, n in dist.counts) == counts

        # epsilon is one part in a million above each edge
        eps = Fraction(1, 10**6)
        cases = [(Fraction(0), Bucket.B0), (Fraction(1, 10), Bucket.B1), (Fraction(1, 10) + eps, Bucket.B2),
                 (Fraction(1, 4), Bucket.B2), (Fraction(1, 4) + eps, Bucket.B3), (Fraction(1, 2), Bucket.B3),
                 (Fraction(1, 2) + eps, Bucket.B4)]
        for f, want in cases:
            before = 10**6
            failed = f * before
            assert failed.denominator == 1
            assert bucket_of(before, int(failed)) == want, f
    assert sw.elapsed < 1.0


# -------------------------------------------------------------------------- 3


@pytest.mark.criterion(3, "replayed prompt and forge build on the exemplar")
def test_forge_exemplar_from_transcript(ws, run_cli, no_sockets):
    pid = fixtures.EXEMPLAR_PROBLEM
    with Stopwatch() as sw:
        code, out, err = run_cli("-w", ws.root, "--replay", "forge", "prompt", pid)
        assert code == 0, err
        code, out, err = run_cli("-w", ws.root, "--replay", "forge", "build", pid)
        assert code == 0, err
    assert sw.elapsed < 120

    pd = ProblemDir(ws, pid)
    names = sorted(p.name for p in pd.suite_dir("ai").glob("*.in"))
    assert names == [f"test{i:02d}.in" for i in range(1, 26)]
    assert sorted(p.name for p in pd.suite_dir("ai").glob("*.ok")) == [n[:-3] + ".ok" for n in names]
    report = json.loads(pd.forge_report_path("ai").read_text())
    assert report["case_count"] == 25
    assert report["determinism_checked"] is True
    assert all(c["validator_pass"] for c in report["cases"])
    assert no_sockets == []
    assert not (ws.root / "ledger.jsonl").exists()


# -------------------------------------------------------------------------- 4


@pytest.mark.criterion(4, "verdict profiles and newly-failed histogram on the fixture corpus")
def test_verdict_taxonomy(ws, run_cli):
    manifest = fixtures.load_manifest()
    with Stopwatch() as sw:
        code, _, err = run_cli("-w", ws.root, "--replay", "forge", "prompt", fixtures.EXEMPLAR_PROBLEM)
        assert code == 0, err
        code, _, err = run_cli("-w", ws.root, "--replay", "forge", "build", "--workers", "2")
        assert code == 0, err
        for label in ("original", "ai"):
            code, _, err = run_cli("-w", ws.root, "--replay", "judge", "run", "--suite", label, "--workers", "2")
            assert code == 0, err
    assert sw.elapsed < 180

    # the maximal palindrome case: N = 200000, every value erased
    max_case = ProblemDir(ws, "palindrome").suite("ai").cases[fixtures.MAX_TEST_INDEX - 1].input_bytes.split()
    assert max_case[0] == b"200000"
    assert len(max_case) == 200001 and set(max_case[1:]) == {b"-1"}

    original = pipeline.group_results(ws.results_path("original"))
    ai = pipeline.group_results(ws.results_path("ai"))
    total = VerdictHistogram()
    for pid, spec in manifest["problems"].items():
        for label, results in (("original", original[pid]), ("ai", ai[pid])):
            assert {r.submission_id for r in results} == set(spec["submissions"])
            for r in results:
                fixtures.check_profile(pid, r.submission_id, label, spec["submissions"][r.submission_id][label], r)
        assert diff_problem(original[pid], ai[pid], pid) == DiffRow(pid, *spec["diff_row"])
    _, hists = pipeline.diff_results(ws.results_path("original"), ws.results_path("ai"))
    for h in hists.values():
        total = total + h
    assert total == VerdictHistogram(**manifest["newly_failed_histogram"])
    assert total.as_dict() == {"WA": 3, "TLE": 2, "MLE": 1, "RE": 0}


# -------------------------------------------------------------------------- 5


@pytest.mark.criterion(5, "differential semantics on planted patterns")
def test_differential_semantics():
    for shaped in (DiffRow("homework", 0, 7, 0, 0, 7), DiffRow("pali2", 51, 3, 3, 48, 0)):
        for neither in (0, 5):
            orig, ai = fixtures.planted_results(shaped, neither)
            assert diff_problem(orig, ai, shaped.problem_id) == shaped
    # the real homework fixture: every one of its 7 submissions fails only the original suite
    report = fixtures.verify(problems=["homework"])
    assert report.rows == [DiffRow("homework", 0, 7, 0, 0, 7)]
    assert bucket_distribution(report.rows).undefined == ("homework",)


# -------------------------------------------------------------------------- 6


@pytest.mark.criterion(6, "sandbox kill, truncation and determinism")
def test_sandbox_guarantees(tmp_path, program_source):
    with Stopwatch() as total:
        busy = compile_component(program_source("busy.cpp"), CPP17)
        sleeper = compile_component(program_source("sleeper.cpp"), CPP17)
        spam = compile_component(program_source("spam.cpp"), CPP17)
        squares = compile_component(program_source("squares.cpp"), CPP17)

        for exe in (busy, sleeper):
            spec = ExecSpec(exe.argv(), tmp_path, Limits(time_limit=500))
            with Stopwatch() as sw:
                out = run_limited(spec)
            assert out.time_exceeded and not out.exit_status.exited
            assert sw.elapsed * 1000 <= spec.wall_limit_ms + 500

        out = run_limited(ExecSpec(spam.argv(), tmp_path, Limits(output_limit=4096)))
        assert out.output_truncated
        assert out.stdout_bytes() == b"x" * 4096

        runs = [run_limited(ExecSpec(squares.argv(), tmp_path, Limits())).stdout_bytes() for _ in range(5)]
        assert runs[0] and all(r == runs[0] for r in runs)
    assert total.elapsed < 30


# -------------------------------------------------------------------------- 7


GEN = """#include "testlib.h"
#include <iostream>
using namespace std;
int main(int argc, char* argv[]) {
    registerGen(argc, argv, 1);
    int n = atoi(argv[1]);
    cout << n << "\\n";
    for (int i = 0; i < n; i++) cout << rnd.next(-1000000000, 1000000000) << (i + 1 < n ? ' ' : '\\n');
}
"""

suites = st.lists(st.tuples(st.binary(max_size=64), st.binary(max_size=64)), min_size=1, max_size=12)
prop_settings = settings(max_examples=PROPERTY_EXAMPLES, deadline=None,
                         suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow])


@pytest.mark.criterion(7, "round-trip and determinism properties")
def test_round_trip_properties(tmp_path):
    counter = iter(range(10**9))

    @prop_settings
    @given(suites)
    def archives(pairs):
        suite = make_suite("s", [a for a, _ in pairs], [b for _, b in pairs])
        k = next(counter)
        flat = export_archive(suite, "flat_zip", tmp_path / f"a{k}.zip")
        cms = export_archive(suite, "cms_dir", tmp_path / f"c{k}")
        assert import_archive(tmp_path / f"a{k}.zip", label="s") == suite
        assert import_archive(tmp_path / f"c{k}", label="s") == suite
        assert sorted((e.name, e.sha256) for e in flat) == \
            sorted((e.name.split("/")[1], e.sha256) for e in cms)

    @prop_settings
    @given(st.text(), st.integers(1, 1000), st.sampled_from(["v1", "v2"]))
    def rendering(statement, count, version):
        tpl = load_template(version)
        assert render_prompt(tpl, exemplar_context(statement, count)) == \
            render_prompt(load_template(version), exemplar_context(statement, count))

    cache = TranscriptCache(tmp_path / "cache")
    offline = LLMClient(TranscriptCache(tmp_path / "cache"), transport=ForbiddenTransport())

    @prop_settings
    @given(st.text(min_size=1), st.text(), st.integers(0, 10**6), st.integers(0, 10**6))
    def replay(prompt, response, tin, tout):
        ex = ChatExchange("m", prompt, response, tin, tout, "2025-01-01T00:00:00+00:00")
        path = cache.put(ex)
        stored = path.read_bytes()
        got = offline.complete("m", prompt, "replay")
        assert got == ex
        assert got.response.encode("utf-8") == response.encode("utf-8")
        assert path.read_bytes() == stored

    generator = compile_component(GEN, CPP17)

    @prop_settings
    @given(st.lists(st.tuples(st.integers(1, 50), st.integers(0, 10**6)), min_size=1, max_size=3))
    def double_generation(rows):
        params = [f"{n} seed{s}" for n, s in rows]
        first = generate_inputs(generator, params, scratch=tmp_path / "g")
        second = generate_inputs(generator, params, scratch=tmp_path / "g")
        assert [c.input_bytes for c in first] == [c.input_bytes for c in second]

    with Stopwatch() as sw:
        archives()
        rendering()
        replay()
        double_generation()
    assert sw.elapsed < 60


# -------------------------------------------------------------------------- 8


def _oracle_cost(tin, tout, pin, pout) -> Decimal:
    """Exact rational cost, rounded half-to-even at the micro-dollar."""
    exact = (tin * Fraction(pin) + tout * Fraction(pout)) / 10**6
    micros = round(exact * 10**6)  # Fraction rounding is half-to-even
    return Decimal(micros).scaleb(-6)


@pytest.mark.criterion(8, "cost ledger arithmetic")
def test_cost_ledger():
    with Stopwatch() as sw:
        tables = [
            PriceTable.load(fixtures.DATA_DIR / "prices.json"),
            PriceTable({"o3-mini": Price(Decimal("0.15"), Decimal("0.60"))}),
            PriceTable({"o3-mini": Price(Decimal("2.50"), Decimal("10.00"))}),
        ]
        # hand-computed: 1000 in and 2000 out tokens under each table
        hand = [Decimal("0.009900"), Decimal("0.001350"), Decimal("0.022500")]
        for table, want in zip(tables, hand):
            ex = ChatExchange("o3-mini", "p", "r", 1000, 2000, "t")
            assert cost_of(ex, table) == want

        rng = random.Random(20250301)
        exchanges = [ChatExchange("o3-mini", f"p{i}", "r", rng.randint(0, 200_000), rng.randint(0, 200_000), "t")
                     for i in range(60)]
        for table in tables:
            price = table["o3-mini"]
            want = sum((_oracle_cost(x.input_tokens, x.output_tokens, str(price.input_price),
                                     str(price.output_price)) for x in exchanges), Decimal(0))
            ledger = CostLedger()
            for x in exchanges:
                ledger.charge(x, table)
            assert ledger.total == want
            assert ledger.total.as_tuple().exponent == -6
            for _ in range(20):
                entries = ledger.entries
                rng.shuffle(entries)
                assert CostLedger(entries).total == want
    assert sw.elapsed < 1.0


# -------------------------------------------------------------------------- 9


TOKEN = "tf-secret-8c1d2e"


@pytest.mark.criterion(9, "mock remote lifecycle without leaking the token")
def test_mock_remote_lifecycle(ws, run_cli, monkeypatch, caplog, tmp_path):
    caplog.set_level(logging.DEBUG)
    pd = ProblemDir(ws, "aplusb")
    subs = pd.submissions()
    problem = pd.problem()
    monkeypatch.setenv("TESTFORGE_REMOTE_TOKEN", TOKEN)
    streams = []

    with Stopwatch() as sw, MockJudgeServer(token=TOKEN) as server:
        server.add_problem("501", {"slug": "aplusb", "statement_markdown": problem.statement_markdown,
                                   "limits": problem.limits.to_dict(), "checker": problem.checker.to_dict()},
                           [{"id": s.id, "source_text": s.source_text, "toolchain_id": s.toolchain_id,
                             "full_pass": s.id in ("ref", "int32")} for s in subs])
        cfg = json.loads((ws.root / "testforge.json").read_text())
        cfg["remote"] = {"base_url": server.url, "problem_ids": {"aplusb": "501"}}
        (ws.root / "testforge.json").write_text(json.dumps(cfg))

        def cli(*argv):
            code, out, err = run_cli("-w", ws.root, "-vv", *argv)
            streams.extend([out, err])
            assert code == 0, err
            return out

        cli("remote", "pull", "aplusb")
        assert {s.id for s in pd.submissions()} == {s.id for s in subs}
        cli("remote", "push", "aplusb", "--label", "original")
        job = cli("remote", "rejudge", "aplusb").split("rejudge job ")[1].split()[0]
        status = json.loads(cli("remote", "status", job))
        assert sorted(status["submission_ids"]) == sorted(s.id for s in subs)

        local = export_archive(pd.suite("original"), "flat_zip", tmp_path / "local.zip")
        assert manifest_of_zip(server.tests["501"]) == local
        assert ("POST", "/problems/501/tests") in server.requests
        cli("diff", "report", "--original", _one_result(ws, tmp_path), "--ai", _one_result(ws, tmp_path),
            "--out", tmp_path / "report.md")
    assert sw.elapsed < 10

    secret = TOKEN.encode()
    streams.append(caplog.text)
    streams.extend(r.getMessage() for r in caplog.records)
    assert caplog.records, "expected debug logging to be captured"
    for text in streams:
        assert TOKEN not in text
    for path in list(ws.root.rglob("*")) + list(tmp_path.rglob("*")):
        if path.is_file():
            assert secret not in path.read_bytes(), path


def _one_result(ws, tmp_path) -> Path:
    path = tmp_path / "planted.jsonl"
    orig, _ = fixtures.planted_results(DiffRow("aplusb", 1, 1, 1, 0, 0))
    write_results(path, [("aplusb", r) for r in orig])
    return path
