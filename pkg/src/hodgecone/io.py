"""Scene-file parsing and JSON serialization.

Scene files are JSON (or TOML with the identical shape); rationals are
strings "p/q" so no value ever passes through floating point.  Parsing is
strict: unknown fields are rejected, and every error message carries the
path of the offending field.
"""

from __future__ import annotations

import json
import tomllib
from dataclasses import dataclass
from pathlib import Path

from .complexes import CochainComplex
from .cones import AugmentationData
from .errors import ValidationError
from .linalg import GramForm, Matrix, format_rational, parse_rational
from .models import ModelSpec
from .riemann_roch import IndexLedger, PlaneCurveData
from .singularities import CurveSingularity, PuiseuxBranch

SCENE_KINDS = ("delta", "curve", "ledger", "model")


@dataclass(frozen=True)
class Scene:
    kind: str
    payload: object  # list[CurveSingularity] | PlaneCurveData | IndexLedger | list[ModelSpec]


# -- strict object helpers -------------------------------------------------

def _require_mapping(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected an object, got {type(obj).__name__}")
    return obj


def _require_list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise ValidationError(f"{path}: expected an array, got {type(obj).__name__}")
    return obj


def _check_keys(obj: dict, allowed: set[str], required: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ValidationError(f"{path}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ValidationError(f"{path}: missing required field(s) {sorted(missing)}")


def _get_int(obj: dict, key: str, path: str) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{path}.{key}: expected an integer")
    return v


def _int_list(obj, path: str) -> list[int]:
    items = _require_list(obj, path)
    out = []
    for i, v in enumerate(items):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValidationError(f"{path}[{i}]: expected an integer")
        out.append(v)
    return out


# -- branch / singularity documents ---------------------------------------

def _parse_series(obj, path: str) -> list[tuple[int, str]]:
    items = _require_list(obj, path)
    out = []
    for i, pair in enumerate(items):
        p = _require_list(pair, f"{path}[{i}]")
        if len(p) != 2:
            raise ValidationError(f"{path}[{i}]: expected [exponent, coefficient]")
        e = p[0]
        if isinstance(e, bool) or not isinstance(e, int):
            raise ValidationError(f"{path}[{i}][0]: exponent must be an integer")
        out.append((e, p[1]))
    return out


def parse_branch(obj, path: str) -> PuiseuxBranch:
    m = _require_mapping(obj, path)
    _check_keys(m, {"x", "y"}, {"x", "y"}, path)
    try:
        return PuiseuxBranch.from_pairs(
            _parse_series(m["x"], f"{path}.x"),
            _parse_series(m["y"], f"{path}.y"),
        )
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def parse_singularity(obj, path: str) -> CurveSingularity:
    m = _require_mapping(obj, path)
    _check_keys(m, {"branches"}, {"branches"}, path)
    branches = _require_list(m["branches"], f"{path}.branches")
    parsed = tuple(
        parse_branch(b, f"{path}.branches[{i}]") for i, b in enumerate(branches)
    )
    try:
        return CurveSingularity(parsed)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _parse_singularity_list(obj, path: str) -> list[CurveSingularity]:
    items = _require_list(obj, path)
    return [parse_singularity(s, f"{path}[{i}]") for i, s in enumerate(items)]


# -- model specs -----------------------------------------------------------

_SPEC_KEYS = {
    "max_degree", "harmonic_dims", "rank_dims", "aug_dims", "seed",
    "coefficient_bound",
}


def parse_model_spec(obj, path: str) -> ModelSpec:
    m = _require_mapping(obj, path)
    _check_keys(m, _SPEC_KEYS, _SPEC_KEYS - {"coefficient_bound"}, path)
    try:
        return ModelSpec(
            max_degree=_get_int(m, "max_degree", path),
            harmonic_dims=tuple(_int_list(m["harmonic_dims"], f"{path}.harmonic_dims")),
            rank_dims=tuple(_int_list(m["rank_dims"], f"{path}.rank_dims")),
            aug_dims=tuple(_int_list(m["aug_dims"], f"{path}.aug_dims")),
            seed=_get_int(m, "seed", path),
            coefficient_bound=(
                _get_int(m, "coefficient_bound", path)
                if "coefficient_bound" in m else 8
            ),
        )
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


# -- scene loading ---------------------------------------------------------

def load_scene(path) -> Scene:
    p = Path(path)
    try:
        if p.suffix.lower() == ".toml":
            with open(p, "rb") as fh:
                doc = tomllib.load(fh)
        else:
            with open(p, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ValidationError(f"{p}: malformed document: {exc}") from exc
    except OSError as exc:
        raise ValidationError(f"{p}: cannot read: {exc}") from exc
    return parse_scene(doc, str(p))


def parse_scene(doc, path: str = "<scene>") -> Scene:
    m = _require_mapping(doc, path)
    if "kind" not in m:
        raise ValidationError(f"{path}: missing required field 'kind'")
    kind = m["kind"]
    if kind not in SCENE_KINDS:
        raise ValidationError(
            f"{path}.kind: expected one of {list(SCENE_KINDS)}, got {kind!r}"
        )
    if kind == "delta":
        _check_keys(m, {"kind", "singularities"}, {"kind", "singularities"}, path)
        return Scene("delta", _parse_singularity_list(m["singularities"], f"{path}.singularities"))
    if kind == "curve":
        _check_keys(m, {"kind", "degree", "singularities"}, {"kind", "degree", "singularities"}, path)
        data = PlaneCurveData(
            degree=_get_int(m, "degree", path),
            singularities=tuple(_parse_singularity_list(m["singularities"], f"{path}.singularities")),
        )
        return Scene("curve", data)
    if kind == "ledger":
        _check_keys(m, {"kind", "n", "todd_integral", "a0", "higher"},
                    {"kind", "n", "todd_integral", "a0", "higher"}, path)
        try:
            ledger = IndexLedger(
                n=_get_int(m, "n", path),
                todd_integral=_get_int(m, "todd_integral", path),
                a0=_get_int(m, "a0", path),
                higher=tuple(_int_list(m["higher"], f"{path}.higher")),
            )
        except ValidationError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
        return Scene("ledger", ledger)
    # kind == "model"
    _check_keys(m, {"kind", "spec", "specs"}, {"kind"}, path)
    if ("spec" in m) == ("specs" in m):
        raise ValidationError(f"{path}: provide exactly one of 'spec' or 'specs'")
    if "spec" in m:
        specs = [parse_model_spec(m["spec"], f"{path}.spec")]
    else:
        items = _require_list(m["specs"], f"{path}.specs")
        specs = [parse_model_spec(s, f"{path}.specs[{i}]") for i, s in enumerate(items)]
    return Scene("model", specs)


# -- matrix / complex serialization ---------------------------------------

def matrix_to_json_dict(m: Matrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [format_rational(x) for row in m.data for x in row],
    }


def matrix_from_json_dict(obj, path: str = "<matrix>") -> Matrix:
    m = _require_mapping(obj, path)
    _check_keys(m, {"rows", "cols", "entries"}, {"rows", "cols", "entries"}, path)
    rows = _get_int(m, "rows", path)
    cols = _get_int(m, "cols", path)
    entries = _require_list(m["entries"], f"{path}.entries")
    if len(entries) != rows * cols:
        raise ValidationError(
            f"{path}.entries: expected {rows * cols} entries, got {len(entries)}"
        )
    vals = [parse_rational(x) for x in entries]
    data = tuple(
        tuple(vals[i * cols:(i + 1) * cols]) for i in range(rows)
    )
    return Matrix(rows, cols, data)


def complex_to_json_dict(c: CochainComplex) -> dict:
    return {
        "dims": list(c.dims),
        "differentials": [matrix_to_json_dict(d) for d in c.differentials],
        "grams": [matrix_to_json_dict(g.matrix) for g in c.grams],
    }


def complex_from_json_dict(obj, path: str = "<complex>") -> CochainComplex:
    m = _require_mapping(obj, path)
    _check_keys(m, {"dims", "differentials", "grams"}, {"dims", "differentials", "grams"}, path)
    dims = tuple(_int_list(m["dims"], f"{path}.dims"))
    diffs = tuple(
        matrix_from_json_dict(d, f"{path}.differentials[{i}]")
        for i, d in enumerate(_require_list(m["differentials"], f"{path}.differentials"))
    )
    grams = tuple(
        GramForm(matrix_from_json_dict(g, f"{path}.grams[{i}]"))
        for i, g in enumerate(_require_list(m["grams"], f"{path}.grams"))
    )
    return CochainComplex(dims, diffs, grams)


def augmentation_to_json_dict(aug: AugmentationData) -> dict:
    return {
        "a_dims": list(aug.a_dims),
        "a_grams": [matrix_to_json_dict(g.matrix) for g in aug.a_grams],
        "gammas": [matrix_to_json_dict(g) for g in aug.gammas],
    }


def augmentation_from_json_dict(obj, path: str = "<augmentation>") -> AugmentationData:
    m = _require_mapping(obj, path)
    _check_keys(m, {"a_dims", "a_grams", "gammas"}, {"a_dims", "a_grams", "gammas"}, path)
    a_dims = tuple(_int_list(m["a_dims"], f"{path}.a_dims"))
    a_grams = tuple(
        GramForm(matrix_from_json_dict(g, f"{path}.a_grams[{i}]"))
        for i, g in enumerate(_require_list(m["a_grams"], f"{path}.a_grams"))
    )
    gammas = tuple(
        matrix_from_json_dict(g, f"{path}.gammas[{i}]")
        for i, g in enumerate(_require_list(m["gammas"], f"{path}.gammas"))
    )
    return AugmentationData(a_dims, a_grams, gammas)


def json_dumps(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, no whitespace drift."""
    return json.dumps(obj, separators=(", ", ": "), ensure_ascii=False)
