from pathlib import Path

import pytest

from testforge.errors import JudgeError
from testforge.forge import CPP17
from testforge.judge import (ExternalChecker, compare_tokens, read_results, resolve_checker, judge_submission,
                             verdict_of, write_results)
from testforge.model import CheckerKind, Limits, Origin, Problem, Submission, SuiteResult, TestOutcome, Verdict, \
    make_suite
from testforge.sandbox import ExitStatus, RunOutcome
from testforge.sandbox.runner import MEMORY_EXCEEDED, OUTPUT_TRUNCATED, TIME_EXCEEDED

SUM = """#include <cstdio>
int main() { long long a, b; scanf("%lld %lld", &a, &b); printf("%lld\\n", a + b); }
"""
OFF_BY_ONE = SUM.replace("a + b", "a + b + 1")
PROBLEM = Problem("sum", "Print A+B.", Limits(time_limit=500, memory_limit=64))
SUITE = make_suite("t", [b"1 2\n", b"3 4\n", b"10 -10\n"], [b"3\n", b"7\n", b"0\n"])

# accepts any answer with the right parity
PARITY_CHECKER = """#include <fstream>
int main(int argc, char* argv[]) {
    std::ifstream out(argv[2]), exp(argv[3]);
    long long a, b;
    if (!(out >> a)) return 2;
    exp >> b;
    return ((a - b) % 2 == 0) ? 0 : 1;
}
"""


def sub(text, sid="s"):
    return Submission(sid, text, "cpp17", Origin.CONTEST)


def outcome(code=0, flags=()):
    return RunOutcome(ExitStatus(code) if code is not None else ExitStatus(None, "SIGKILL"),
                      1, 1, 1.0, Path("/dev/null"), "", frozenset(flags))


def test_compare_tokens():
    assert compare_tokens(b"1 2\n3", b"1\n2 3\n\n")
    assert not compare_tokens(b"1 2", b"12")
    assert compare_tokens(b"", b"  \n")


@pytest.mark.parametrize("flags, code, want", [
    ((TIME_EXCEEDED, MEMORY_EXCEEDED), None, Verdict.TLE),
    ((MEMORY_EXCEEDED,), None, Verdict.MLE),
    ((MEMORY_EXCEEDED,), 1, Verdict.MLE),
    ((), 139, Verdict.RE),
    ((), None, Verdict.RE),
    ((OUTPUT_TRUNCATED,), 0, Verdict.WA),
    ((), 0, Verdict.AC),
])
def test_verdict_precedence(flags, code, want):
    assert verdict_of(outcome(code, flags), b"5", b"5" if want == Verdict.AC else b"6") == want


def test_external_checker_requires_callable():
    with pytest.raises(ValueError):
        verdict_of(outcome(), b"1", b"1", CheckerKind("checker.cpp"))


def test_reference_is_all_ac():
    res = judge_submission(sub(SUM), SUITE, PROBLEM, CPP17)
    assert [t.verdict for t in res.per_test] == [Verdict.AC] * 3
    assert [t.index for t in res.per_test] == [1, 2, 3]


def test_off_by_one_fails_everywhere():
    res = judge_submission(sub(OFF_BY_ONE), SUITE, PROBLEM, CPP17, workers=3)
    assert [t.verdict for t in res.per_test] == [Verdict.WA] * 3


def test_fast_mode_stops_at_first_failure():
    res = judge_submission(sub(OFF_BY_ONE), SUITE, PROBLEM, CPP17, fast=True)
    assert [t.index for t in res.per_test] == [1]


def test_compile_failure(program_source):
    res = judge_submission(sub(program_source("broken.cpp")), SUITE, PROBLEM, CPP17)
    assert res.compile_failed and res.per_test == ()


def test_time_and_memory_verdicts(program_source):
    tle = judge_submission(sub(program_source("busy.cpp")), SUITE, PROBLEM, CPP17, fast=True)
    mle = judge_submission(sub(program_source("alloc.cpp")), SUITE, PROBLEM, CPP17, fast=True)
    re = judge_submission(sub(program_source("exit3.cpp")), SUITE, PROBLEM, CPP17, fast=True)
    assert tle.per_test[0].verdict == Verdict.TLE
    assert mle.per_test[0].verdict == Verdict.MLE
    assert re.per_test[0].verdict == Verdict.RE


def test_incomplete_suite_rejected():
    with pytest.raises(JudgeError):
        judge_submission(sub(SUM), make_suite("t", [b"1 2\n"]), PROBLEM, CPP17)


def test_external_checker(tmp_path):
    (tmp_path / "check.cpp").write_text(PARITY_CHECKER)
    problem = Problem("sum", "Print A+B.", PROBLEM.limits, CheckerKind("check.cpp"))
    checker = resolve_checker(problem, CPP17, tmp_path, base_dir=tmp_path)
    assert isinstance(checker, ExternalChecker)
    with pytest.raises(JudgeError):
        judge_submission(sub(SUM), SUITE, problem, CPP17)
    plus_two = judge_submission(sub(SUM.replace("a + b", "a + b + 2")), SUITE, problem, CPP17, checker=checker)
    plus_one = judge_submission(sub(OFF_BY_ONE), SUITE, problem, CPP17, checker=checker)
    assert {t.verdict for t in plus_two.per_test} == {Verdict.AC}
    assert {t.verdict for t in plus_one.per_test} == {Verdict.WA}


def test_results_round_trip(tmp_path):
    items = [
        ("p1", SuiteResult("a", "original", (TestOutcome(1, Verdict.AC, 3, 1.5), TestOutcome(2, Verdict.TLE, 9, 2.0)))),
        ("p1", SuiteResult("b", "original", (), compile_failed=True)),
        ("p2", SuiteResult("a", "original", (TestOutcome(1, Verdict.RE, 0, 0.0),))),
    ]
    write_results(tmp_path / "r.jsonl", items, with_timings=True)
    assert read_results(tmp_path / "r.jsonl") == items

    write_results(tmp_path / "plain.jsonl", items)
    text = (tmp_path / "plain.jsonl").read_text()
    assert "cpu_ms" not in text
    back = read_results(tmp_path / "plain.jsonl")
    assert [[t.verdict for t in r.per_test] for _, r in back] == [[t.verdict for t in r.per_test] for _, r in items]
