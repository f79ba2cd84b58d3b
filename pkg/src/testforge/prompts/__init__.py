"""Prompt templates for the generator-bundle request, and parsing of the reply.

The two template bodies live in ``templates/`` as plain text with ``{slot}``
markers. A reply is expected to carry four fenced code blocks: a testlib
generator, a validator, a parameter table (one argv row per line) and an
optional batch script.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..errors import BundleError

TEMPLATE_DIR = Path(__file__).with_name("templates")
SLOT_RE = re.compile(r"\{(\w+)\}")
DEFAULT_CASE_COUNT = 25

GENERATOR, VALIDATOR, PARAMS, BATCH = "generator", "validator", "params", "batch"
REQUIRED_PARTS = (GENERATOR, VALIDATOR, PARAMS)


class MissingSlot(BundleError):
    def __init__(self, slot: str):
        super().__init__(f"prompt slot {{{slot}}} has no value in the context")
        self.slot = slot


class BundleIncomplete(BundleError):
    def __init__(self, missing: list):
        super().__init__(f"response lacks: {', '.join(missing)}")
        self.missing = list(missing)


class BundleAmbiguous(BundleError):
    pass


class ParamCountMismatch(BundleError):
    def __init__(self, found: int, expected: int):
        super().__init__(f"found {found} parameter rows, expected {expected}")
        self.found = found
        self.expected = expected


@dataclass(frozen=True)
class PromptTemplate:
    version: str
    body: str

    @property
    def slots(self) -> list:
        return list(dict.fromkeys(SLOT_RE.findall(self.body)))


def load_template(version: str) -> PromptTemplate:
    if version not in ("v1", "v2"):
        raise ValueError(f"unknown prompt version {version!r}")
    body = (TEMPLATE_DIR / f"{version}.txt").read_text(encoding="utf-8")
    # the file's final newline is storage, not prompt text
    return PromptTemplate(version, body[:-1] if body.endswith("\n") else body)


@dataclass(frozen=True)
class PromptContext:
    statement: str
    model_generator: Optional[str] = None
    model_batch: Optional[str] = None
    requested_case_count: int = DEFAULT_CASE_COUNT

    def __post_init__(self):
        if self.requested_case_count < 1:
            raise ValueError("requested_case_count must be >= 1")

    def slot_values(self) -> dict:
        return {
            "statement": self.statement,
            "model_generator": self.model_generator,
            "model_batch": self.model_batch,
            "case_count": str(self.requested_case_count),
        }


def exemplar_context(statement: str, requested_case_count: int = DEFAULT_CASE_COUNT) -> PromptContext:
    """Context carrying the repository's exemplar generator and batch file."""
    gen = (TEMPLATE_DIR / "model_generator.cpp").read_text(encoding="utf-8")
    bat = (TEMPLATE_DIR / "model_batch.bat").read_text(encoding="utf-8")
    return PromptContext(
        statement=statement,
        model_generator=f"```cpp\n{gen}```",
        model_batch=f"```bat\n{bat}```",
        requested_case_count=requested_case_count,
    )


def render_prompt(template: PromptTemplate, ctx: PromptContext) -> str:
    values = ctx.slot_values()
    for slot in template.slots:
        if values.get(slot) is None:
            raise MissingSlot(slot)

    def sub(m):
        name = m.group(1)
        return values[name] if name in values else m.group(0)

    return SLOT_RE.sub(sub, template.body)


# --------------------------------------------------------------------- bundles


@dataclass(frozen=True)
class GeneratorBundle:
    generator_source: str
    validator_source: str
    param_rows: tuple
    batch_script: Optional[str] = None

    def __post_init__(self):
        if not self.generator_source.strip():
            raise ValueError("generator source is empty")
        if not self.validator_source.strip():
            raise ValueError("validator source is empty")
        rows = tuple(r.strip() for r in self.param_rows)
        if any(not r for r in rows):
            raise ValueError("parameter rows cannot be empty")
        object.__setattr__(self, "param_rows", rows)
        for name in ("generator_source", "validator_source"):
            text = getattr(self, name)
            if not text.endswith("\n"):
                object.__setattr__(self, name, text + "\n")


@dataclass
class CodeBlock:
    info: str
    content: str
    preface: str  # prose between the previous block and this one


FENCE_RE = re.compile(r"^( {0,3})(`{3,}|~{3,})\s*([^`\s]*)[^`]*$")


def extract_blocks(text: str) -> list:
    blocks = []
    lines = text.split("\n")
    prose = []
    i = 0
    while i < len(lines):
        m = FENCE_RE.match(lines[i])
        if not m:
            prose.append(lines[i])
            i += 1
            continue
        fence = m.group(2)
        info = m.group(3).lower()
        body = []
        i += 1
        while i < len(lines):
            stripped = lines[i].strip()
            if stripped.startswith(fence[0] * len(fence)) and set(stripped) == {fence[0]}:
                break
            body.append(lines[i])
            i += 1
        i += 1  # closing fence (or EOF)
        content = "\n".join(body) + "\n" if body else ""
        blocks.append(CodeBlock(info, content, "\n".join(prose)))
        prose = []
    return blocks


def _label_from_prose(prose: str) -> Optional[str]:
    lines = [ln.strip().lower() for ln in prose.split("\n") if ln.strip()]
    if not lines:
        return None
    last = lines[-1]
    for role, words in ((BATCH, ("batch", ".bat")), (VALIDATOR, ("validator",)),
                        (PARAMS, ("parameter", "params")), (GENERATOR, ("generator",))):
        if any(w in last for w in words):
            return role
    return None


_BATCH_LINE = re.compile(r">\s*\S*test\d+\.in", re.I)


def _label_from_content(block: CodeBlock) -> Optional[str]:
    c = block.content
    if "registerValidation" in c or re.search(r"\binf\s*\.\s*read", c):
        return VALIDATOR
    if "registerGen" in c or ("testlib" in c and "argv" in c):
        return GENERATOR
    if block.info in ("bat", "batch", "cmd", "dos") or re.search(r"^\s*@echo", c, re.I | re.M) or _BATCH_LINE.search(c):
        return BATCH
    if "#include" not in c and not re.search(r"[;{}]", c) and c.strip():
        return PARAMS
    return None


def _param_rows(content: str) -> list:
    rows = []
    for line in content.split("\n"):
        s = line.strip()
        if not s or s.startswith(("#", "//")) or s.lower().startswith("rem "):
            continue
        rows.append(s)
    return rows


def parse_bundle(response: str, expected_count: int = DEFAULT_CASE_COUNT) -> GeneratorBundle:
    """Split an LLM reply into a GeneratorBundle.

    Each fenced block is classified by the label line right above it when
    there is one, otherwise by its contents. Two blocks claiming the same role
    raise BundleAmbiguous; unclassifiable blocks are ignored.
    """
    parts = {}
    for block in extract_blocks(response):
        role = _label_from_prose(block.preface) or _label_from_content(block)
        if role is None:
            continue
        if role in parts:
            raise BundleAmbiguous(f"more than one block looks like the {role}")
        parts[role] = block.content
    missing = [r for r in REQUIRED_PARTS if not (parts.get(r) or "").strip()]
    if missing:
        raise BundleIncomplete(missing)
    rows = _param_rows(parts[PARAMS])
    if len(rows) != expected_count:
        raise ParamCountMismatch(len(rows), expected_count)
    return GeneratorBundle(parts[GENERATOR], parts[VALIDATOR], tuple(rows), parts.get(BATCH))


def _fenced(info: str, content: str) -> str:
    longest = max((len(m) for m in re.findall(r"`+", content)), default=0)
    fence = "`" * max(3, longest + 1)
    if content and not content.endswith("\n"):
        content += "\n"
    return f"{fence}{info}\n{content}{fence}"


def format_bundle(bundle: GeneratorBundle) -> str:
    """Inverse of parse_bundle: labeled fenced blocks in Markdown."""
    sections = [
        "### Test case generator\n" + _fenced("cpp", bundle.generator_source),
        "### Validator\n" + _fenced("cpp", bundle.validator_source),
        "### Test case parameters\n" + _fenced("text", "\n".join(bundle.param_rows) + "\n"),
    ]
    if bundle.batch_script is not None:
        sections.append("### Batch file\n" + _fenced("bat", bundle.batch_script))
    return "\n\n".join(sections) + "\n"


GENERATOR_FILE = "generator{suffix}"
VALIDATOR_FILE = "validator{suffix}"
PARAMS_FILE = "params.txt"
BATCH_FILE = "gen.bat"


def save_bundle(bundle: GeneratorBundle, dest: Path, suffix: str = ".cpp") -> Path:
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    (dest / GENERATOR_FILE.format(suffix=suffix)).write_text(bundle.generator_source, encoding="utf-8")
    (dest / VALIDATOR_FILE.format(suffix=suffix)).write_text(bundle.validator_source, encoding="utf-8")
    (dest / PARAMS_FILE).write_text("\n".join(bundle.param_rows) + "\n", encoding="utf-8")
    if bundle.batch_script is not None:
        (dest / BATCH_FILE).write_text(bundle.batch_script, encoding="utf-8")
    return dest


def load_bundle(src: Path, suffix: str = ".cpp") -> GeneratorBundle:
    src = Path(src)
    missing = [name for name, fname in ((GENERATOR, GENERATOR_FILE.format(suffix=suffix)),
                                        (VALIDATOR, VALIDATOR_FILE.format(suffix=suffix)),
                                        (PARAMS, PARAMS_FILE)) if not (src / fname).is_file()]
    if missing:
        raise BundleIncomplete(missing)
    batch = src / BATCH_FILE
    return GeneratorBundle(
        (src / GENERATOR_FILE.format(suffix=suffix)).read_text(encoding="utf-8"),
        (src / VALIDATOR_FILE.format(suffix=suffix)).read_text(encoding="utf-8"),
        tuple(_param_rows((src / PARAMS_FILE).read_text(encoding="utf-8"))),
        batch.read_text(encoding="utf-8") if batch.is_file() else None,
    )


# ------------------------------------------------------------------------ lint

FORBIDDEN_CONSTRUCT = "ForbiddenConstruct"
DUPLICATE_PARAMS = "DuplicateParams"
CONSTRAINT_VIOLATION = "ConstraintViolation"


@dataclass(frozen=True)
class Finding:
    category: str
    message: str
    row: Optional[int] = None  # 1-based parameter row, when relevant


_COMMENT_OR_STRING = re.compile(r'//[^\n]*|/\*.*?\*/|"(?:\\.|[^"\\\n])*"|\'(?:\\.|[^\'\\\n])*\'', re.S)
_OPT_CALL = re.compile(r"(?<![\w:.>])opt\s*(?:<[^;(){}]*>)?\s*\(")
_WRAPPER_DEF = re.compile(r"\b(\w*opt\w*)\s*\([^;{}()]*\)\s*(?:const\s*)?\{", re.I)


def _blank(m):
    text = m.group(0)
    if text.startswith(("//", "/*")):
        return re.sub(r"[^\n]", " ", text)
    return text[0] + " " * (len(text) - 2) + text[-1]


def _wrapper_spans(code: str) -> list:
    spans = []
    for m in _WRAPPER_DEF.finditer(code):
        if m.group(1) == "opt":
            continue
        depth, i = 0, m.end() - 1
        while i < len(code):
            if code[i] == "{":
                depth += 1
            elif code[i] == "}":
                depth -= 1
                if depth == 0:
                    break
            i += 1
        spans.append((m.end(), i))
    return spans


def _option_values(row: str) -> dict:
    try:
        tokens = shlex.split(row)
    except ValueError:
        tokens = row.split()
    values = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        values[f"#{i + 1}"] = tok
        body = tok.lstrip("-")
        if "=" in body:
            k, _, v = body.partition("=")
            values[k] = v
        elif tok.startswith("-") and body and not _is_number(tok) and i + 1 < len(tokens):
            values[body] = tokens[i + 1]
        i += 1
    return values


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def lint_bundle(bundle: GeneratorBundle, bounds: Optional[dict] = None) -> list:
    """Static checks on a bundle; an empty list means clean.

    ``bounds`` is the optional constraint sidecar mapping an option name (or
    ``#k`` for the k-th positional argument) to ``[min, max]``.
    """
    findings = []
    code = _COMMENT_OR_STRING.sub(_blank, bundle.generator_source)
    allowed = _wrapper_spans(code)
    for m in _OPT_CALL.finditer(code):
        if any(lo <= m.start() < hi for lo, hi in allowed):
            continue
        line = code.count("\n", 0, m.start()) + 1
        findings.append(Finding(FORBIDDEN_CONSTRUCT, f"direct opt() call in generator at line {line}"))

    first_seen = {}
    for i, row in enumerate(bundle.param_rows, start=1):
        if row in first_seen:
            findings.append(Finding(DUPLICATE_PARAMS, f"row {i} repeats row {first_seen[row]}: {row!r}", i))
        else:
            first_seen[row] = i

    for i, row in enumerate(bundle.param_rows, start=1):
        values = _option_values(row)
        for name, (lo, hi) in sorted((bounds or {}).items()):
            raw = values.get(name)
            if raw is None or not _is_number(raw):
                continue
            v = float(raw)
            if v < lo or v > hi:
                findings.append(Finding(CONSTRAINT_VIOLATION, f"row {i}: {name}={raw} outside [{lo}, {hi}]", i))
    return findings
