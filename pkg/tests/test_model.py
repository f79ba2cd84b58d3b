import pytest

from testforge.model import (
    Limits,
    Origin,
    Submission,
    SuiteResult,
    TestCase,
    TestOutcome,
    TestSuite,
    Verdict,
    case_name,
    full_pass,
    make_suite,
    merge_suites,
    normalize_names,
)


def test_limits_defaults_and_validation():
    lim = Limits()
    assert (lim.time_limit, lim.memory_limit) == (1000, 256)
    with pytest.raises(ValueError):
        Limits(time_limit=0)
    with pytest.raises(ValueError):
        Limits(time_limit=60_001)
    with pytest.raises(ValueError):
        Limits(memory_limit=0)
    with pytest.raises(ValueError):
        Limits(output_limit=0)
    assert Limits.from_dict(lim.to_dict()) == lim
    assert lim.scaled(2).time_limit == 2000


@pytest.mark.parametrize("i,total,name", [(1, 5, "test01.in"), (25, 25, "test25.in"), (7, 120, "test007.in")])
def test_case_name_width(i, total, name):
    assert case_name(i, total) == name


def test_test_case_name_must_match_index():
    TestCase(3, "test03.in", b"")
    with pytest.raises(ValueError):
        TestCase(3, "test04.in", b"")
    with pytest.raises(ValueError):
        TestCase(1, "case1.txt", b"")
    with pytest.raises(ValueError):
        TestCase(0, "test00.in", b"")


def test_suite_rejects_unordered_or_duplicate_cases():
    a, b = TestCase(1, "test01.in", b"1"), TestCase(2, "test02.in", b"2")
    TestSuite("s", [a, b])
    with pytest.raises(ValueError):
        TestSuite("s", [b, a])
    with pytest.raises(ValueError):
        TestSuite("s", [a, TestCase(1, "test001.in", b"")])


def test_make_and_merge_suites():
    s1 = make_suite("orig", [b"a", b"b"], [b"A", b"B"])
    s2 = make_suite("ai", [b"c"], [b"C"])
    assert s1.complete and len(s1) == 2
    merged = merge_suites(s1, s2)
    assert merged.label == "orig+ai"
    assert [c.input_name for c in merged.cases] == ["test01.in", "test02.in", "test03.in"]
    assert [c.input_bytes for c in merged.cases] == [b"a", b"b", b"c"]
    assert not make_suite("x", [b"a"]).complete


def test_normalize_names_renumbers():
    s = TestSuite("s", [TestCase(2, "test02.in", b"x"), TestCase(9, "test09.in", b"y")])
    n = normalize_names(s)
    assert [(c.index, c.input_name) for c in n.cases] == [(1, "test01.in"), (2, "test02.in")]


def test_submission_requires_source():
    with pytest.raises(ValueError):
        Submission("s", "   ", "cpp17")
    assert Submission("s", "x", "cpp17", "contest").origin is Origin.CONTEST


def test_full_pass_and_first_failure():
    per = (TestOutcome(1, Verdict.AC, 1, 1.0), TestOutcome(3, Verdict.TLE, 1, 1.0), TestOutcome(2, Verdict.WA, 1, 1.0))
    r = SuiteResult("s", "ai", per)
    assert not full_pass(r)
    assert r.first_failure().index == 2
    assert full_pass(SuiteResult("s", "ai", (TestOutcome(1, Verdict.AC, 1, 1.0),)))
    assert not full_pass(SuiteResult("s", "ai", (), compile_failed=True))
