"""Test archives: flat zip (testNN.in / testNN.ok at the root) and CMS-style
directories (input/testNN.in, output/testNN.ok). Bytes are never rewritten."""

from __future__ import annotations

import enum
import hashlib
import io
import re
import zipfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from ..errors import ArchiveError
from ..model import EXPECTED_SUFFIX, TestSuite, expected_name, make_suite

ZIP_EPOCH = (1980, 1, 1, 0, 0, 0)


class ArchiveFormat(str, enum.Enum):
    FLAT_ZIP = "flat_zip"
    CMS_DIR = "cms_dir"


class IncompleteSuite(ArchiveError):
    pass


class UnrecognizedLayout(ArchiveError):
    pass


class OrphanFile(ArchiveError):
    def __init__(self, stem: str, missing: str):
        super().__init__(f"{stem}: no matching {missing} file")
        self.stem = stem


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    size: int
    sha256: str

    def to_dict(self) -> dict:
        return {"name": self.name, "size": self.size, "sha256": self.sha256}


def _entry(name: str, data: bytes) -> ManifestEntry:
    return ManifestEntry(name, len(data), hashlib.sha256(data).hexdigest())


def _files_of(suite: TestSuite, suffix: str) -> list:
    if not suite.complete:
        missing = [c.input_name for c in suite.cases if c.expected_bytes is None]
        raise IncompleteSuite(f"suite {suite.label!r} lacks expected output for {', '.join(missing)}")
    files = []
    for c in suite.cases:
        files.append((c.input_name, c.input_bytes, "in"))
        files.append((expected_name(c.input_name, suffix), c.expected_bytes, "out"))
    return files


def export_archive(suite: TestSuite, format: Union[ArchiveFormat, str], dest: Path,
                   expected_suffix: str = EXPECTED_SUFFIX) -> list:
    """Write ``suite`` to ``dest``; returns the manifest sorted by file name."""
    format = ArchiveFormat(format)
    dest = Path(dest)
    files = _files_of(suite, expected_suffix)
    manifest = []
    if format == ArchiveFormat.FLAT_ZIP:
        dest.parent.mkdir(parents=True, exist_ok=True)
        with zipfile.ZipFile(dest, "w", compression=zipfile.ZIP_DEFLATED, compresslevel=6) as zf:
            for name, data, _ in sorted(files):
                info = zipfile.ZipInfo(name, date_time=ZIP_EPOCH)
                info.compress_type = zipfile.ZIP_DEFLATED
                info.external_attr = 0o644 << 16
                zf.writestr(info, data)
                manifest.append(_entry(name, data))
    else:
        for sub in ("input", "output"):
            (dest / sub).mkdir(parents=True, exist_ok=True)
        for name, data, kind in sorted(files):
            rel = f"{'input' if kind == 'in' else 'output'}/{name}"
            (dest / rel).write_bytes(data)
            manifest.append(_entry(rel, data))
    return sorted(manifest, key=lambda e: e.name)


def _natural_key(stem: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", stem)]


def _pair(inputs: dict, outputs: dict, label: str) -> TestSuite:
    for stem in sorted(inputs.keys() - outputs.keys(), key=_natural_key):
        raise OrphanFile(stem, "expected-output")
    for stem in sorted(outputs.keys() - inputs.keys(), key=_natural_key):
        raise OrphanFile(stem, "input")
    stems = sorted(inputs, key=_natural_key)
    return make_suite(label, [inputs[s] for s in stems], [outputs[s] for s in stems])


def _split_names(names, expected_suffix: str, where: str):
    inputs, outputs, stray = {}, {}, []
    for name in names:
        if name.endswith(".in"):
            inputs[name[:-3]] = name
        elif name.endswith(expected_suffix):
            outputs[name[: -len(expected_suffix)]] = name
        else:
            stray.append(name)
    if stray:
        raise UnrecognizedLayout(f"{where}: unexpected files {sorted(stray)[:5]} "
                                 f"(only *.in and *{expected_suffix} are accepted)")
    return inputs, outputs


def _import_zip(src: Path, label: str, expected_suffix: str) -> TestSuite:
    with zipfile.ZipFile(src) as zf:
        names = [n for n in zf.namelist() if not n.endswith("/")]
        if any("/" in n for n in names):
            raise UnrecognizedLayout(f"{src}: flat zip must hold files at its root")
        inputs, outputs = _split_names(names, expected_suffix, str(src))
        return _pair({s: zf.read(n) for s, n in inputs.items()}, {s: zf.read(n) for s, n in outputs.items()}, label)


def _import_dir(src: Path, label: str, expected_suffix: str) -> TestSuite:
    in_dir, out_dir = src / "input", src / "output"
    ins, _ = _split_names([p.name for p in in_dir.iterdir() if p.is_file()], expected_suffix, str(in_dir))
    _, outs = _split_names([p.name for p in out_dir.iterdir() if p.is_file()], expected_suffix, str(out_dir))
    return _pair({s: (in_dir / n).read_bytes() for s, n in ins.items()},
                 {s: (out_dir / n).read_bytes() for s, n in outs.items()}, label)


def detect_format(src: Path) -> ArchiveFormat:
    src = Path(src)
    if src.is_file() and zipfile.is_zipfile(src):
        return ArchiveFormat.FLAT_ZIP
    if src.is_dir() and (src / "input").is_dir() and (src / "output").is_dir():
        return ArchiveFormat.CMS_DIR
    raise UnrecognizedLayout(f"{src} is neither a flat zip nor a cms-style input/output directory")


def import_archive(src: Path, format: Optional[Union[ArchiveFormat, str]] = None, label: str = "imported",
                   expected_suffix: str = EXPECTED_SUFFIX) -> TestSuite:
    src = Path(src)
    fmt = ArchiveFormat(format) if format else detect_format(src)
    if fmt == ArchiveFormat.FLAT_ZIP:
        if not zipfile.is_zipfile(src):
            raise UnrecognizedLayout(f"{src} is not a zip archive")
        return _import_zip(src, label, expected_suffix)
    if not (src / "input").is_dir() or not (src / "output").is_dir():
        raise UnrecognizedLayout(f"{src} lacks input/ and output/ directories")
    return _import_dir(src, label, expected_suffix)


def manifest_of_zip(data: bytes) -> list:
    with zipfile.ZipFile(io.BytesIO(data)) as zf:
        return sorted((_entry(n, zf.read(n)) for n in zf.namelist() if not n.endswith("/")), key=lambda e: e.name)


# ---------------------------------------------------- workspace suite folders


def write_suite_dir(suite: TestSuite, dest: Path, expected_suffix: str = EXPECTED_SUFFIX) -> Path:
    """Flat on-disk layout used inside a workspace: ``dest/testNN.in`` + ``.ok``."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    for old in list(dest.glob("*.in")) + list(dest.glob(f"*{expected_suffix}")):
        old.unlink()
    for c in suite.cases:
        (dest / c.input_name).write_bytes(c.input_bytes)
        if c.expected_bytes is not None:
            (dest / expected_name(c.input_name, expected_suffix)).write_bytes(c.expected_bytes)
    return dest


def read_suite_dir(src: Path, label: str, expected_suffix: str = EXPECTED_SUFFIX) -> TestSuite:
    src = Path(src)
    if not src.is_dir():
        raise ArchiveError(f"suite directory {src} does not exist")
    names = [p.name for p in src.iterdir() if p.is_file() and (p.suffix == ".in" or p.name.endswith(expected_suffix))]
    inputs, outputs = _split_names(names, expected_suffix, str(src))
    return _pair({s: (src / n).read_bytes() for s, n in inputs.items()},
                 {s: (src / n).read_bytes() for s, n in outputs.items()}, label)
