"""Matrix files, per-algebra reports and batch runs.

A matrix file is a JSON object ``{"n": 2, "entries": [["1", "0"], ["0", "-1i"]]}``
whose entries use the exact scalar grammar rather than JSON numbers. Extra
keys (for example ``"meta"`` written by the generator) are ignored.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import EvolutionAlgebra, rank
from .classifier import ClassificationResult, classify, emit_closed_forms, verify_closed_forms
from .derivations import derivations, float_check
from .errors import EmptyMatrix, EvoderError, MalformedScalar, NonSquare, ParseError
from .field import GaussianRational, QuadExtScalar, format_scalar, parse_scalar

_STRING_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"')


def _line_col(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _entry_offsets(text: str) -> List[int]:
    """Character offsets of the string tokens inside the ``entries`` array, in order."""
    key = re.search(r'"entries"\s*:', text)
    if key is None:
        return []
    return [m.start() for m in _STRING_TOKEN.finditer(text, key.end())]


def parse_matrix_file(text: Union[bytes, str]) -> EvolutionAlgebra:
    """Parse a matrix file; errors name the entry and its line/column in ``text``."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"matrix file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError('matrix file must be an object with an "entries" array')
    entries = doc["entries"]
    if not isinstance(entries, list) or not entries:
        raise EmptyMatrix("entries must be a non-empty array of rows")
    n = len(entries)
    declared = doc.get("n", n)
    if not isinstance(declared, int) or isinstance(declared, bool) or declared < 1:
        raise ParseError(f'"n" must be a positive integer, got {declared!r}')
    if declared != n:
        raise NonSquare(f'"n" is {declared} but entries has {n} rows')
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise NonSquare(f"row {i} has {got} entries, expected {n}")
    offsets = _entry_offsets(text)
    rows = []
    for i, row in enumerate(entries):
        parsed = []
        for j, token in enumerate(row):
            try:
                parsed.append(parse_scalar(token))
            except MalformedScalar as exc:
                flat = i * n + j
                where = ""
                if isinstance(token, str) and flat < len(offsets):
                    line, col = _line_col(text, offsets[flat])
                    where = f" (line {line}, column {col})"
                raise MalformedScalar(f"entry [{i}][{j}]{where}: {exc}") from None
        rows.append(parsed)
    return EvolutionAlgebra(rows)


def read_matrix_file(path: Union[str, Path]) -> EvolutionAlgebra:
    return parse_matrix_file(Path(path).read_bytes())


def serialize_matrix(E: EvolutionAlgebra, meta: Optional[dict] = None) -> str:
    doc: Dict[str, object] = {"n": E.n, "entries": [[format_scalar(x) for x in row] for row in E.A]}
    if meta:
        doc["meta"] = meta
    return json.dumps(doc)


def jsonable(value):
    """Convert exact scalars, tags and tuples into JSON-native values."""
    if isinstance(value, (GaussianRational, QuadExtScalar)):
        return format_scalar(value) if isinstance(value, GaussianRational) else str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def classification_to_dict(res: ClassificationResult) -> dict:
    out = {"tag": res.tag.value, "perm": list(res.perm), "params": jsonable(res.params)}
    if res.rank is not None:
        out["rank"] = res.rank
    out["alternatives"] = [classification_to_dict(alt) for alt in res.alternatives]
    return out


@dataclass
class Report:
    """Everything computed for one algebra, in JSON-native form."""

    path: Optional[str] = None
    sha256: Optional[str] = None
    n: Optional[int] = None
    rank: Optional[int] = None
    dim: Optional[int] = None
    basis: List[List[List[str]]] = field(default_factory=list)
    classification: Optional[dict] = None
    verification: List[dict] = field(default_factory=list)
    float_check: Optional[dict] = None
    timing: Dict[str, float] = field(default_factory=dict)
    error: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def basis_matrices(self) -> List[List[List[GaussianRational]]]:
        return [[[parse_scalar(x) for x in row] for row in d] for d in self.basis]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(**data)

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def build_report(
    E: EvolutionAlgebra,
    path: Optional[str] = None,
    sha256: Optional[str] = None,
    verify: bool = True,
    with_float_check: bool = False,
) -> Report:
    rep = Report(path=path, sha256=sha256, n=E.n)
    t0 = time.perf_counter()
    rep.rank = rank(E)
    t1 = time.perf_counter()
    space = derivations(E)
    t2 = time.perf_counter()
    rep.dim = space.dim
    rep.basis = [[[format_scalar(x) for x in row] for row in d] for d in space.basis]
    rep.timing = {"rank": t1 - t0, "solve": t2 - t1}
    try:
        res = classify(E)
    except EvoderError as exc:
        rep.classification = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        res = None
    t3 = time.perf_counter()
    rep.timing["classify"] = t3 - t2
    if res is not None:
        rep.classification = classification_to_dict(res)
        if verify:
            for match in (res,) + res.alternatives:
                fam = emit_closed_forms(match, E)
                check = verify_closed_forms(E, fam, space)
                rep.verification.append({"tag": match.tag.value, **check.to_dict()})
    t4 = time.perf_counter()
    rep.timing["verify"] = t4 - t3
    if with_float_check:
        rep.float_check = float_check(E, space).to_dict()
        rep.timing["float_check"] = time.perf_counter() - t4
    return rep


def report_for_file(path: Union[str, Path], verify: bool = True, with_float_check: bool = False) -> Report:
    """Report for one file; any failure is captured in the ``error`` slot."""
    path = Path(path)
    rep = Report(path=str(path))
    try:
        raw = path.read_bytes()
        rep.sha256 = hashlib.sha256(raw).hexdigest()
        E = parse_matrix_file(raw)
        return build_report(E, str(path), rep.sha256, verify, with_float_check)
    except (EvoderError, ValueError, OSError) as exc:
        rep.error = {"type": type(exc).__name__, "message": str(exc)}
        return rep


@dataclass
class BatchResult:
    reports: List[Report]
    summary: dict

    @property
    def errors(self) -> int:
        return self.summary["errors"]

    def to_dict(self) -> dict:
        return {"reports": [r.to_dict() for r in self.reports], "summary": self.summary}

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "BatchResult":
        return cls([Report.from_dict(r) for r in data["reports"]], data["summary"])


def summarize(reports: Sequence[Report]) -> dict:
    tags: Counter = Counter()
    dims: Counter = Counter()
    errors = 0
    for rep in reports:
        if rep.error is not None:
            errors += 1
            continue
        dims[str(rep.dim)] += 1
        cls = rep.classification or {}
        tags[cls.get("tag", "unclassified")] += 1
    return {
        "files": len(reports),
        "errors": errors,
        "tags": dict(sorted(tags.items())),
        "dim_histogram": dict(sorted(dims.items(), key=lambda kv: int(kv[0]))),
    }


def _report_job(args) -> Report:
    return report_for_file(*args)


def run_batch(
    directory: Union[str, Path],
    jobs: int = 1,
    verify: bool = True,
    with_float_check: bool = False,
    pattern: str = "*.json",
    exclude: Sequence[Union[str, Path]] = (),
) -> BatchResult:
    """One report per matrix file, ordered by file name, plus an aggregate summary."""
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"{directory} is not a directory")
    skip = {Path(p).resolve() for p in exclude}
    files = sorted(p for p in directory.glob(pattern) if p.is_file() and p.resolve() not in skip)
    work = [(p, verify, with_float_check) for p in files]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_report_job, work))
    else:
        reports = [_report_job(w) for w in work]
    return BatchResult(reports, summarize(reports))
