"""File formats and canonical JSON serialization.

Problem files:

    {
      "version": 1,                     optional, must be 1 when present
      "N": 2,
      "moments": [S_0, S_1, ..., S_2d],
      "parameter": {...},               optional, see below
      "tolerances": {"adm_abs": 1e-8}   optional overrides
    }

Each moment is an N x N nested list whose entries are either plain numbers
or [re, im] pairs; for N = 1 a bare number is also accepted in place of the
1 x 1 list.  Parameters are either

    {"constant_unimodular_theta": 0.0}

or

    {"kind": "isometric" | "contraction", "matrix": [[...]]}.

Measure files hold {"atoms": [{"t": float, "W": [[...]]}]}.

Serialization is canonical: floats at 17 significant digits (round-trip
exact), complex entries as [re, im] pairs, no whitespace, insertion-ordered
keys.  Identical inputs therefore serialize byte-identically.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ProblemFileError
from .hankel import ConditionReport, MomentSequence
from .measures import (AtomicMatrixMeasure, ContourRecovery, PerronResult,
                       VerificationReport)
from .extensions import ExtensionParameter
from .scalar import ScalarEvenResult
from .shift import AdmissibilityReport
from .tolerances import Tolerances


# ---------------------------------------------------------------- canonical

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    if x == 0.0:
        x = 0.0              # normalize -0.0
    return format(float(x), ".17g")


def _canonical(obj, out: list) -> None:
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _canonical(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _canonical(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot canonically serialize {type(obj)!r}")


def dumps_canonical(obj) -> str:
    out: list = []
    _canonical(obj, out)
    return "".join(out)


def complex_to_pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[complex_to_pair(m[i, j]) for j in range(m.shape[1])]
            for i in range(m.shape[0])]


def real_matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=float)
    return [[float(m[i, j]) for j in range(m.shape[1])]
            for i in range(m.shape[0])]


def real_vector_to_json(v) -> list:
    return [float(x) for x in np.asarray(v, dtype=float).reshape(-1)]


def _opt_float(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


# ------------------------------------------------------------------ parsing

def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise ProblemFileError(message)


def _entry_to_complex(entry, where: str) -> complex:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(float(entry), 0.0)
    if (isinstance(entry, list) and len(entry) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in entry)):
        return complex(float(entry[0]), float(entry[1]))
    raise ProblemFileError(f"{where}: entries must be numbers or [re, im] "
                           f"pairs, got {entry!r}")


def _moment_to_matrix(m, dim: int, where: str) -> np.ndarray:
    if dim == 1 and isinstance(m, (int, float)) and not isinstance(m, bool):
        return np.array([[complex(float(m), 0.0)]])
    _expect(isinstance(m, list) and len(m) == dim,
            f"{where}: expected an {dim} x {dim} matrix")
    rows = []
    for i, row in enumerate(m):
        _expect(isinstance(row, list) and len(row) == dim,
                f"{where}, row {i}: expected {dim} entries")
        rows.append([_entry_to_complex(e, f"{where}[{i}][{j}]")
                     for j, e in enumerate(row)])
    return np.array(rows, dtype=complex)


def parse_parameter(spec, defect_hint: int | None = None) -> ExtensionParameter:
    _expect(isinstance(spec, dict), "parameter must be an object")
    if "constant_unimodular_theta" in spec:
        extra = set(spec) - {"constant_unimodular_theta"}
        _expect(not extra, f"unexpected parameter keys: {sorted(extra)}")
        theta = spec["constant_unimodular_theta"]
        _expect(isinstance(theta, (int, float)) and not isinstance(theta, bool),
                "constant_unimodular_theta must be a number")
        return ExtensionParameter.unimodular(float(theta),
                                             defect=defect_hint or 1)
    _expect(set(spec) == {"kind", "matrix"},
            'parameter needs keys {"kind", "matrix"} or '
            '{"constant_unimodular_theta"}')
    kind = spec["kind"]
    _expect(kind in ("isometric", "contraction"),
            f'parameter kind must be "isometric" or "contraction", '
            f'got {kind!r}')
    mat = spec["matrix"]
    _expect(isinstance(mat, list) and len(mat) >= 0, "matrix must be a list")
    q = len(mat)
    matrix = (_moment_to_matrix(mat, q, "parameter matrix") if q
              else np.zeros((0, 0), dtype=complex))
    if kind == "isometric":
        return ExtensionParameter.isometric(matrix)
    return ExtensionParameter.contraction(matrix)


def parse_problem(text: str):
    """text -> (MomentSequence, parameter spec dict | None, Tolerances).

    The parameter spec is validated but returned raw, because a
    constant_unimodular_theta spec can only be sized once the defect of the
    problem is known; resolve it with parse_parameter(spec, defect_hint=q).
    Raises ProblemFileError for anything malformed, naming the failing field.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"not valid JSON: {exc}") from exc
    _expect(isinstance(data, dict), "problem file must be a JSON object")
    allowed = {"version", "N", "moments", "parameter", "tolerances"}
    extra = set(data) - allowed
    _expect(not extra, f"unexpected keys: {sorted(extra)}")
    if "version" in data:
        _expect(data["version"] == 1,
                f"unsupported version {data['version']!r}, expected 1")
    _expect("N" in data and "moments" in data,
            'problem file needs "N" and "moments"')
    dim = data["N"]
    _expect(isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1,
            f'"N" must be a positive integer, got {dim!r}')
    moments = data["moments"]
    _expect(isinstance(moments, list) and len(moments) >= 1,
            '"moments" must be a nonempty list')
    mats = [_moment_to_matrix(m, dim, f"moments[{n}]")
            for n, m in enumerate(moments)]
    try:
        seq = MomentSequence.from_arrays(mats)
    except ValueError as exc:
        raise ProblemFileError(str(exc)) from exc

    parameter_spec = None
    if "parameter" in data and data["parameter"] is not None:
        parameter_spec = data["parameter"]
        parse_parameter(parameter_spec)          # validate the shape early

    overrides = data.get("tolerances") or {}
    _expect(isinstance(overrides, dict), '"tolerances" must be an object')
    for k, v in overrides.items():
        _expect(isinstance(v, (int, float)) and not isinstance(v, bool),
                f"tolerance {k!r} must be a number")
    try:
        tol = Tolerances.from_overrides(
            {k: float(v) for k, v in overrides.items()})
    except ValueError as exc:
        raise ProblemFileError(str(exc)) from exc
    return seq, parameter_spec, tol


def parse_scalar_sequence(text: str) -> np.ndarray:
    """A bare JSON list of numbers, or {"moments": [...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"not valid JSON: {exc}") from exc
    if isinstance(data, dict):
        _expect("moments" in data, 'scalar problem needs a "moments" list')
        data = data["moments"]
    _expect(isinstance(data, list) and len(data) >= 1,
            "scalar moments must form a nonempty list")
    for i, v in enumerate(data):
        _expect(isinstance(v, (int, float)) and not isinstance(v, bool),
                f"moments[{i}] must be a real number, got {v!r}")
    return np.array([float(v) for v in data])


def measure_to_json(measure: AtomicMatrixMeasure) -> dict:
    return {"atoms": [{"t": float(measure.locations[j]),
                       "W": matrix_to_json(measure.weights[j])}
                      for j in range(measure.n_atoms)]}


def measure_from_json(data) -> AtomicMatrixMeasure:
    _expect(isinstance(data, dict) and "atoms" in data,
            'measure file needs an "atoms" list')
    atoms = data["atoms"]
    _expect(isinstance(atoms, list), '"atoms" must be a list')
    locs, weights = [], []
    dim = None
    for i, atom in enumerate(atoms):
        _expect(isinstance(atom, dict) and "t" in atom and "W" in atom,
                f'atoms[{i}] needs "t" and "W"')
        t = atom["t"]
        _expect(isinstance(t, (int, float)) and not isinstance(t, bool),
                f'atoms[{i}]["t"] must be a number')
        w = atom["W"]
        _expect(isinstance(w, list) and len(w) >= 1,
                f'atoms[{i}]["W"] must be a matrix')
        if dim is None:
            dim = len(w)
        locs.append(float(t))
        weights.append(_moment_to_matrix(w, dim, f'atoms[{i}]["W"]'))
    if dim is None:
        dim = 1
    try:
        return AtomicMatrixMeasure.from_atoms(
            np.array(locs), np.array(weights).reshape(-1, dim, dim),
            block_dim=dim)
    except ValueError as exc:
        raise ProblemFileError(str(exc)) from exc


def parse_measure(text: str) -> AtomicMatrixMeasure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"not valid JSON: {exc}") from exc
    return measure_from_json(data)


# -------------------------------------------------------------- serializers

def condition_to_json(report: ConditionReport) -> dict:
    return {
        "N": report.block_dim,
        "d": report.order,
        "leading_positive": report.leading_positive,
        "trailing_psd": report.trailing_psd,
        "solvable": report.solvable,
        "min_eig_leading": float(report.min_eig_leading),
        "min_eig_trailing": float(report.min_eig_trailing),
    }


def admissibility_to_json(report: AdmissibilityReport) -> dict:
    return {
        "admissible": report.admissible,
        "margin": _opt_float(report.margin),
        "parameter_norm": _opt_float(report.parameter_norm),
        "forbidden_gap": _opt_float(report.forbidden_gap),
        "coincides_with_forbidden": report.coincides_with_forbidden,
        "borderline": report.borderline,
    }


def verification_to_json(report: VerificationReport | None) -> dict | None:
    if report is None:
        return None
    return {
        "deviations": [float(x) for x in report.deviations],
        "max_deviation": float(report.max_deviation),
        "scale": float(report.scale),
        "rel_tol": float(report.rel_tol),
        "passed": report.passed,
    }


def recovery_to_json(rec: ContourRecovery | None) -> dict | None:
    if rec is None:
        return None
    return {
        "radius": float(rec.radius),
        "n_points": rec.n_points,
        "doubling_gap": float(rec.doubling_gap),
        "moments": [matrix_to_json(m) for m in rec.moments],
    }


def perron_to_json(res: PerronResult) -> dict:
    return {
        "edges": real_vector_to_json(res.edges),
        "eps_used": float(res.eps_used),
        "increments": [matrix_to_json(w) for w in res.increments],
        "history": [[float(e), float(c)] for e, c in res.history],
    }


def scalar_result_to_json(res: ScalarEvenResult) -> dict:
    return {
        "verdict": res.verdict,
        "rank_index": res.rank_index,
        "certificate": res.certificate,
        "null_coeffs": (None if res.null_coeffs is None
                        else real_vector_to_json(res.null_coeffs)),
        "atoms": (None if res.roots is None else
                  [{"t": float(t), "w": float(w)}
                   for t, w in zip(res.roots, res.atom_weights)]),
        "max_deviation": _opt_float(res.max_deviation),
        "augmented_moment": _opt_float(res.augmented_moment),
    }
