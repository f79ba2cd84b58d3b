import json

import pytest
from hypothesis import given, settings, strategies as st

from testforge import fixtures
from testforge.prompts import (CONSTRAINT_VIOLATION, DUPLICATE_PARAMS, FORBIDDEN_CONSTRUCT, BundleAmbiguous,
                               BundleIncomplete, GeneratorBundle, MissingSlot, ParamCountMismatch, PromptContext,
                               exemplar_context, format_bundle, lint_bundle, load_bundle, load_template,
                               parse_bundle, render_prompt, save_bundle)

GEN = """#include "testlib.h"
#include <iostream>
int main(int argc, char* argv[]) {
    registerGen(argc, argv, 1);
    std::cout << rnd.next(1, atoi(argv[1])) << "\\n";
}
"""
VAL = """#include "testlib.h"
int main() { registerValidation(); inf.readInt(1, 100); inf.readEoln(); inf.readEof(); }
"""


def transcript_response():
    path = next((fixtures.DATA_DIR / "llm-cache").glob("*.json"))
    return json.loads(path.read_text(encoding="utf-8"))["response"]


def bundle(rows=("5 a", "7 b"), gen=GEN):
    return GeneratorBundle(gen, VAL, tuple(rows), "gen 5 a > test01.in\n")


def test_template_slots():
    assert set(load_template("v1").slots) == {"statement", "case_count"}
    assert set(load_template("v2").slots) == {"statement", "model_generator", "model_batch", "case_count"}


def test_unknown_template_version():
    with pytest.raises(ValueError):
        load_template("v9")


def test_missing_slot_is_reported():
    with pytest.raises(MissingSlot) as exc:
        render_prompt(load_template("v2"), PromptContext("stmt"))
    assert exc.value.slot == "model_generator"


def test_render_fills_every_slot():
    text = render_prompt(load_template("v2"), exemplar_context("THE STATEMENT", 17))
    assert "THE STATEMENT" in text
    assert "17" in text
    assert "{statement}" not in text and "{case_count}" not in text


def test_case_count_must_be_positive():
    with pytest.raises(ValueError):
        PromptContext("s", requested_case_count=0)


@settings(max_examples=50, deadline=None)
@given(st.text(), st.integers(1, 500))
def test_render_is_deterministic(statement, count):
    # braces in the statement must survive untouched
    tpl = load_template("v2")
    a = render_prompt(tpl, exemplar_context(statement, count))
    b = render_prompt(tpl, exemplar_context(statement, count))
    assert a == b
    assert statement in a


def test_parse_recorded_response():
    b = parse_bundle(transcript_response())
    assert len(b.param_rows) == 25
    assert "registerGen" in b.generator_source
    assert "registerValidation" in b.validator_source
    assert b.batch_script is not None


def test_missing_validator():
    text = "### Test case generator\n```cpp\nint main(){}\n```\n\n### Test case parameters\n```text\n1\n2\n```\n"
    with pytest.raises(BundleIncomplete) as exc:
        parse_bundle(text, 2)
    assert exc.value.missing == ["validator"]


def test_param_count_mismatch():
    with pytest.raises(ParamCountMismatch) as exc:
        parse_bundle(format_bundle(bundle()), 25)
    assert (exc.value.found, exc.value.expected) == (2, 25)


def test_two_generators_are_ambiguous():
    text = format_bundle(bundle()) + "\n### Test case generator\n```cpp\nint main(){}\n```\n"
    with pytest.raises(BundleAmbiguous):
        parse_bundle(text, 2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.from_regex(r"[a-z0-9][a-z0-9 =-]{0,20}[a-z0-9]", fullmatch=True), min_size=1, max_size=30))
def test_format_parse_round_trip(rows):
    b = bundle(rows)
    assert parse_bundle(format_bundle(b), len(rows)) == b


def test_round_trip_with_backticks_in_source():
    b = bundle(gen=GEN + "// ```not a fence```\n")
    assert parse_bundle(format_bundle(b), 2) == b


def test_save_and_load(tmp_path):
    b = bundle()
    save_bundle(b, tmp_path / "bundle")
    assert load_bundle(tmp_path / "bundle") == b


def test_load_reports_missing_parts(tmp_path):
    save_bundle(bundle(), tmp_path)
    (tmp_path / "validator.cpp").unlink()
    with pytest.raises(BundleIncomplete) as exc:
        load_bundle(tmp_path)
    assert exc.value.missing == ["validator"]


def test_lint_clean():
    assert lint_bundle(bundle()) == []
    assert lint_bundle(parse_bundle(transcript_response()),
                       json.loads((fixtures.DATA_DIR / "problems/aplusb/bounds.json").read_text())) == []


def test_lint_flags_direct_opt():
    gen = GEN.replace("atoi(argv[1])", "opt<int>(\"n\")")
    found = lint_bundle(bundle(gen=gen))
    assert [f.category for f in found] == [FORBIDDEN_CONSTRUCT]


def test_lint_ignores_opt_in_comments_and_wrappers():
    gen = GEN + """
// opt("n") would be wrong here
int getopt_safe(const char* name) { return opt<int>(name); }
"""
    assert lint_bundle(bundle(gen=gen)) == []


def test_lint_duplicates():
    found = lint_bundle(bundle(("5 a", "7 b", "5 a")))
    assert [(f.category, f.row) for f in found] == [(DUPLICATE_PARAMS, 3)]


def test_lint_constraint_violation():
    found = lint_bundle(bundle(("5 a", "-n 900 b", "-n=50")), {"#1": [1, 100], "n": [1, 100]})
    assert [(f.category, f.row) for f in found] == [(CONSTRAINT_VIOLATION, 2)]
