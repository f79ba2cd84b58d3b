import json
from pathlib import Path

import pytest

from testforge import fixtures, pipeline
from testforge.diffeval import DiffRow, bucket_distribution
from testforge.errors import AnnotationViolated
from testforge.llm import cache_key
from testforge.model import SuiteResult, TestOutcome, Verdict
from testforge.workspace import ProblemDir


def test_table_has_every_row():
    rows = fixtures.published_rows()
    assert len(rows) == 25
    assert rows[0] == DiffRow("walrus", 114, 113, 109, 5, 4)
    assert [r.problem_id for r in rows].count("rummy") == 2
    assert len(fixtures.published_corpus_rows()) == 24


def test_synthetic_rows_hit_their_buckets():
    for counts in (fixtures.BUCKET_COUNTS_46, fixtures.BUCKET_COUNTS_18, (0, 0, 0, 0, 0), (1, 2, 3, 4, 5)):
        d = bucket_distribution(fixtures.synthetic_rows(counts, "x"))
        assert tuple(n for _, n in d.counts) == counts
        assert d.undefined == ()


def test_planted_results_shape():
    orig, ai = fixtures.planted_results(DiffRow("p", 3, 2, 1, 2, 1), neither=2)
    assert len(orig) == len(ai) == 6
    assert [r.per_test[0].verdict for r in orig] == [Verdict.AC] * 3 + [Verdict.WA] * 3
    assert [r.per_test[0].verdict for r in ai] == [Verdict.AC, Verdict.WA, Verdict.WA, Verdict.AC, Verdict.WA,
                                                   Verdict.WA]


def test_manifest_matches_corpus():
    manifest = fixtures.load_manifest()
    assert tuple(manifest["problems"]) == fixtures.PROBLEMS
    for pid, spec in manifest["problems"].items():
        base = fixtures.DATA_DIR / "problems" / pid
        subs = json.loads((base / "solutions" / "submissions.json").read_text())
        assert {s["id"] for s in subs} == set(spec["submissions"])
        for s in subs:
            assert (base / "solutions" / s["file"]).is_file()
        DiffRow(pid, *spec["diff_row"])  # identities hold
        meta = json.loads((base / "problem.json").read_text())
        assert (base / meta["model_solution"]["file"]).is_file()
        assert (base / "suites" / "original" / "test01.in").is_file()


def test_transcript_matches_rendered_prompt(ws):
    cached = list((ws.root / "llm-cache").glob("*.json"))
    assert len(cached) == 1
    prompt = pipeline.render_for(ws, fixtures.EXEMPLAR_PROBLEM)
    assert cached[0].stem == cache_key(ws.llm.model, prompt)
    assert json.loads(cached[0].read_text())["prompt"] == prompt


def test_init_workspace_subset(tmp_path):
    cfg = fixtures.init_workspace(tmp_path / "w", ["cartele"])
    assert cfg.problem_ids() == ["cartele"]
    assert ProblemDir(cfg, "cartele").problem().limits.time_limit > 0


def _res(verdicts):
    return SuiteResult("s", "ai", tuple(TestOutcome(i, Verdict(v), 1, 1.0) for i, v in enumerate(verdicts, 1)))


def test_check_profile():
    fixtures.check_profile("p", "s", "ai", "AC", _res(["AC", "AC"]))
    fixtures.check_profile("p", "s", "ai", {"first": "WA", "cases": {"3": "TLE"}}, _res(["AC", "WA", "TLE"]))
    fixtures.check_profile("p", "s", "ai", {"all": "RE"}, _res(["RE", "RE"]))
    for profile, verdicts in [("AC", ["AC", "WA"]), ({"first": "TLE"}, ["AC", "WA", "TLE"]),
                              ({"all": "WA"}, ["WA", "AC"]), ({"first": "WA"}, ["AC"]),
                              ({"cases": {"1": "WA"}}, ["AC", "WA"])]:
        with pytest.raises(AnnotationViolated):
            fixtures.check_profile("p", "s", "ai", profile, _res(verdicts))


def test_verify_one_problem():
    report = fixtures.verify(problems=["cartele"])
    assert report.rows == [DiffRow("cartele", 2, 1, 1, 1, 0)]
    assert report.histogram.WA == 1


def test_verify_catches_a_wrong_annotation(ws):
    path = ws.problem_dir("cartele") / "solutions" / "submissions.json"
    subs = json.loads(path.read_text())
    noclose = next(s for s in subs if s["id"] == "noclose")
    ref = next(s for s in subs if s["id"] == "ref")
    noclose["file"] = ref["file"]  # the "buggy" solution is now correct
    path.write_text(json.dumps(subs))
    with pytest.raises(AnnotationViolated) as exc:
        fixtures.verify(Path(ws.root), problems=["cartele"])
    assert "noclose" in str(exc.value)
