"""Wire format and strict document parsing.

Shared conventions (see FORMAT.md for byte-level examples):

* complex number  -> two-element array ``[re, im]``
* matrix          -> row-major nested arrays of complex pairs
* channel document-> ``{"format_version": "1", "channel": {...}, "options": {...}}``

Parsing is strict: unknown fields are rejected at every level, required
fields must be present, matrices must be rectangular with finite
entries.  This surfaces malformed input early and keeps machine output
reproducible byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMatrixShapeError,
    DocumentSyntaxError,
    MissingFieldError,
    NonFiniteEntryError,
    UnknownFieldError,
)
from .forms import BasisLabel
from .linalg import BlochVector, DensityMatrix, bloch_to_density
from .zoo import ChannelKind, ChannelSpec

FORMAT_VERSION = "1"

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 100


@dataclass(frozen=True)
class DocumentOptions:
    """Optional per-document analysis settings."""

    basis: BasisLabel | None = None
    tol: float | None = None
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES


@dataclass(frozen=True, eq=False)
class ChannelDocument:
    format_version: str
    channel: ChannelSpec
    options: DocumentOptions


# ---------------------------------------------------------------------------
# encoding


def complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_to_wire(m: np.ndarray) -> list:
    return [[complex_to_pair(complex(entry)) for entry in row] for row in np.asarray(m)]


def dumps(obj: dict) -> str:
    """Canonical single-line JSON used for all machine output."""
    return json.dumps(obj, separators=(",", ":"), allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# strict decoding helpers


def _load_json(text: str | bytes, what: str) -> object:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"{what}: input is not valid UTF-8") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(
            f"{what}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _as_object(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise BadMatrixShapeError(f"{path}: expected an object, got {type(obj).__name__}")
    return dict(obj)


def _pop_required(d: dict, field: str, path: str):
    if field not in d:
        raise MissingFieldError(f"{path}: missing required field {field!r}")
    return d.pop(field)


def _reject_leftovers(d: dict, path: str) -> None:
    if d:
        raise UnknownFieldError(f"{path}: unknown field {next(iter(d))!r}")


def _as_finite_number(obj, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise BadMatrixShapeError(f"{path}: expected a number")
    v = float(obj)
    if not math.isfinite(v):
        raise NonFiniteEntryError(f"{path}: non-finite value")
    return v


def _as_int(obj, path: str, minimum: int | None = None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise BadMatrixShapeError(f"{path}: expected an integer")
    if minimum is not None and obj < minimum:
        raise BadMatrixShapeError(f"{path}: must be at least {minimum}")
    return obj


def parse_complex(obj, path: str) -> complex:
    """A complex entry is exactly a two-number array [re, im]."""
    if not isinstance(obj, list) or len(obj) != 2:
        raise BadMatrixShapeError(f"{path}: complex entries must be [re, im] pairs")
    return complex(_as_finite_number(obj[0], path), _as_finite_number(obj[1], path))


def parse_matrix(obj, path: str, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise BadMatrixShapeError(f"{path}: expected a non-empty array of rows")
    width = None
    out = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise BadMatrixShapeError(f"{path}[{i}]: expected a non-empty row array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise BadMatrixShapeError(f"{path}[{i}]: ragged row ({len(row)} vs {width})")
        out.append([parse_complex(entry, f"{path}[{i}][{j}]") for j, entry in enumerate(row)])
    m = np.array(out, dtype=complex)
    if rows is not None and m.shape[0] != rows:
        raise BadMatrixShapeError(f"{path}: expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise BadMatrixShapeError(f"{path}: expected {cols} columns, got {m.shape[1]}")
    return m


def _parse_real_triple(obj, path: str) -> tuple[float, float, float]:
    if not isinstance(obj, list) or len(obj) != 3:
        raise BadMatrixShapeError(f"{path}: expected three real components")
    x, y, z = (_as_finite_number(v, f"{path}[{i}]") for i, v in enumerate(obj))
    return (x, y, z)


# ---------------------------------------------------------------------------
# channel documents


def _parse_channel(obj, path: str, tol: float) -> ChannelSpec:
    d = _as_object(obj, path)
    kind_raw = _pop_required(d, "kind", path)
    try:
        kind = ChannelKind(kind_raw)
    except ValueError:
        raise UnknownFieldError(f"{path}.kind: unknown channel kind {kind_raw!r}") from None

    if kind is ChannelKind.UNITARY:
        axis = _parse_real_triple(_pop_required(d, "axis", path), f"{path}.axis")
        angle = _as_finite_number(_pop_required(d, "angle", path), f"{path}.angle")
        _reject_leftovers(d, path)
        return ChannelSpec.unitary(axis, angle)
    if kind is ChannelKind.PIN:
        p0 = _parse_real_triple(_pop_required(d, "p0", path), f"{path}.p0")
        _reject_leftovers(d, path)
        return ChannelSpec.pin(BlochVector(*p0))
    if kind is ChannelKind.TRANSPOSE:
        _reject_leftovers(d, path)
        return ChannelSpec.transpose()
    if kind is ChannelKind.EQUATORIAL_PROJECTION:
        _reject_leftovers(d, path)
        return ChannelSpec.equatorial_projection()
    if kind in (ChannelKind.BIT_FLIP, ChannelKind.PHASE_FLIP):
        p = _as_finite_number(_pop_required(d, "p", path), f"{path}.p")
        _reject_leftovers(d, path)
        make = ChannelSpec.bit_flip if kind is ChannelKind.BIT_FLIP else ChannelSpec.phase_flip
        return make(p)
    if kind is ChannelKind.RAW_A:
        m = parse_matrix(_pop_required(d, "matrix", path), f"{path}.matrix")
        _reject_leftovers(d, path)
        side = m.shape[0]
        n = math.isqrt(side)
        if m.shape[0] != m.shape[1] or n * n != side:
            raise BadMatrixShapeError(
                f"{path}.matrix: an A-form must be n^2 x n^2, got {m.shape[0]}x{m.shape[1]}"
            )
        return ChannelSpec.raw_a(m, tol=tol)
    # RAW_KRAUS
    ops_obj = _pop_required(d, "operators", path)
    _reject_leftovers(d, path)
    if not isinstance(ops_obj, list) or not ops_obj:
        raise BadMatrixShapeError(f"{path}.operators: expected a non-empty array of matrices")
    ops = []
    for i, op in enumerate(ops_obj):
        m = parse_matrix(op, f"{path}.operators[{i}]")
        if m.shape[0] != m.shape[1]:
            raise BadMatrixShapeError(f"{path}.operators[{i}]: operators must be square")
        ops.append(m)
    return ChannelSpec.raw_kraus(ops, tol=tol)


def _parse_options(obj, path: str) -> DocumentOptions:
    d = _as_object(obj, path)
    basis = None
    if "basis" in d:
        raw = d.pop("basis")
        try:
            basis = BasisLabel(raw)
        except ValueError:
            raise UnknownFieldError(f"{path}.basis: unknown basis {raw!r}") from None
    tol = None
    if "tol" in d:
        tol = _as_finite_number(d.pop("tol"), f"{path}.tol")
        if tol <= 0:
            raise BadMatrixShapeError(f"{path}.tol: must be positive")
    seed = DEFAULT_SEED
    if "seed" in d:
        seed = _as_int(d.pop("seed"), f"{path}.seed", minimum=0)
    samples = DEFAULT_SAMPLES
    if "samples" in d:
        samples = _as_int(d.pop("samples"), f"{path}.samples", minimum=1)
    _reject_leftovers(d, path)
    return DocumentOptions(basis=basis, tol=tol, seed=seed, samples=samples)


def parse_channel_document(
    text: str | bytes,
    *,
    tol_override: float | None = None,
    default_tol: float = 1e-9,
) -> ChannelDocument:
    """Parse and validate a channel document (strict).

    Raw matrix/operator payloads are validated against the map
    constraints at the effective tolerance: ``tol_override`` when given
    (the CLI flag), else the document's own ``options.tol``, else
    ``default_tol``.
    """
    d = _as_object(_load_json(text, "document"), "document")
    version = _pop_required(d, "format_version", "document")
    if version != FORMAT_VERSION:
        raise UnknownFieldError(
            f"document.format_version: unrecognized version {version!r} (expected {FORMAT_VERSION!r})"
        )
    options = DocumentOptions()
    if "options" in d:
        options = _parse_options(d.pop("options"), "document.options")
    if tol_override is not None:
        tol = tol_override
    elif options.tol is not None:
        tol = options.tol
    else:
        tol = default_tol
    channel = _parse_channel(_pop_required(d, "channel", "document"), "document.channel", tol)
    _reject_leftovers(d, "document")
    return ChannelDocument(format_version=version, channel=channel, options=options)


def channel_document_wire(spec: ChannelSpec) -> dict:
    """Serialize a channel back into document form (inverse of parsing)."""
    payload: dict = {"kind": spec.kind.value}
    if spec.kind is ChannelKind.UNITARY:
        payload["axis"] = [float(v) for v in spec.axis]
        payload["angle"] = float(spec.angle)
    elif spec.kind is ChannelKind.PIN:
        payload["p0"] = [spec.p0.p1, spec.p0.p2, spec.p0.p3]
    elif spec.kind in (ChannelKind.BIT_FLIP, ChannelKind.PHASE_FLIP):
        payload["p"] = float(spec.p)
    elif spec.kind is ChannelKind.RAW_A:
        payload["matrix"] = matrix_to_wire(spec.matrix)
    elif spec.kind is ChannelKind.RAW_KRAUS:
        payload["operators"] = [matrix_to_wire(op) for op in spec.operators]
    return {"format_version": FORMAT_VERSION, "channel": payload}


# ---------------------------------------------------------------------------
# state documents


def parse_state_document(text: str | bytes, tol: float) -> DensityMatrix:
    """Parse ``{"bloch": [x,y,z]}`` or ``{"density": <matrix>}`` (strict)."""
    d = _as_object(_load_json(text, "state"), "state")
    has_bloch = "bloch" in d
    has_density = "density" in d
    if has_bloch == has_density:
        raise MissingFieldError("state: provide exactly one of 'bloch' or 'density'")
    if has_bloch:
        triple = _parse_real_triple(d.pop("bloch"), "state.bloch")
        _reject_leftovers(d, "state")
        return bloch_to_density(BlochVector(*triple), tol)
    m = parse_matrix(d.pop("density"), "state.density")
    _reject_leftovers(d, "state")
    return DensityMatrix(m, tol=tol)


def density_wire(rho_matrix: np.ndarray, bloch: BlochVector | None) -> dict:
    out: dict = {"density": matrix_to_wire(rho_matrix)}
    out["bloch"] = [bloch.p1, bloch.p2, bloch.p3] if bloch is not None else None
    return out


# ---------------------------------------------------------------------------
# representation documents (convert targets that are not themselves channels)


def representation_wire(representation: str, dim: int, **payload) -> dict:
    out: dict = {"format_version": FORMAT_VERSION, "representation": representation, "dim": dim}
    out.update(payload)
    return out


_REPRESENTATIONS = ("b_form", "coefficient", "canonical")
_CHANNEL_PARAM_FIELDS = {
    "unitary": ("axis", "angle"),
    "pin": ("p0",),
    "transpose": (),
    "equatorial_projection": (),
    "bit_flip": ("p",),
    "phase_flip": ("p",),
    "raw_a": (),
    "raw_kraus": (),
}


def parse_representation_document(text: str | bytes) -> dict:
    """Re-parse a representation document emitted by ``convert`` (strict)."""
    d = _as_object(_load_json(text, "representation"), "representation")
    version = _pop_required(d, "format_version", "representation")
    if version != FORMAT_VERSION:
        raise UnknownFieldError(f"representation.format_version: unrecognized version {version!r}")
    rep = _pop_required(d, "representation", "representation")
    if rep not in _REPRESENTATIONS:
        raise UnknownFieldError(f"representation.representation: unknown target {rep!r}")
    dim = _as_int(_pop_required(d, "dim", "representation"), "representation.dim", minimum=2)
    out: dict = {"representation": rep, "dim": dim}
    if rep in ("b_form", "coefficient"):
        out["matrix"] = parse_matrix(
            _pop_required(d, "matrix", "representation"), "representation.matrix", dim * dim, dim * dim
        )
        if rep == "coefficient":
            out["basis"] = _parse_basis_label(_pop_required(d, "basis", "representation"), "representation.basis")
    else:  # canonical
        out["basis"] = _parse_basis_label(_pop_required(d, "basis", "representation"), "representation.basis")
        eigs = _pop_required(d, "eigenvalues", "representation")
        if not isinstance(eigs, list) or not eigs:
            raise BadMatrixShapeError("representation.eigenvalues: expected a non-empty array")
        out["eigenvalues"] = [
            _as_finite_number(v, f"representation.eigenvalues[{i}]") for i, v in enumerate(eigs)
        ]
        ops = _pop_required(d, "operators", "representation")
        if not isinstance(ops, list) or len(ops) != len(out["eigenvalues"]):
            raise BadMatrixShapeError(
                "representation.operators: must list one operator per eigenvalue"
            )
        out["operators"] = [
            parse_matrix(op, f"representation.operators[{i}]", dim, dim)
            for i, op in enumerate(ops)
        ]
    _reject_leftovers(d, "representation")
    return out


def _parse_basis_label(raw, path: str) -> BasisLabel:
    try:
        return BasisLabel(raw)
    except ValueError:
        raise UnknownFieldError(f"{path}: unknown basis {raw!r}") from None


def _parse_real_list(obj, path: str) -> list[float]:
    if not isinstance(obj, list) or not obj:
        raise BadMatrixShapeError(f"{path}: expected a non-empty array of numbers")
    return [_as_finite_number(v, f"{path}[{i}]") for i, v in enumerate(obj)]


def _parse_channel_summary(obj, path: str) -> dict:
    """Validate the channel block a report echoes (kind, dim, parameters)."""
    d = _as_object(obj, path)
    kind = _pop_required(d, "kind", path)
    if kind not in _CHANNEL_PARAM_FIELDS:
        raise UnknownFieldError(f"{path}.kind: unknown channel kind {kind!r}")
    out = {"kind": kind, "dim": _as_int(_pop_required(d, "dim", path), f"{path}.dim", minimum=2)}
    for field in _CHANNEL_PARAM_FIELDS[kind]:
        value = _pop_required(d, field, path)
        if field in ("axis", "p0"):
            out[field] = list(_parse_real_triple(value, f"{path}.{field}"))
        else:
            out[field] = _as_finite_number(value, f"{path}.{field}")
    _reject_leftovers(d, path)
    return out


def parse_report_document(text: str | bytes) -> dict:
    """Re-parse machine output of ``analyze`` (strict)."""
    top = _as_object(_load_json(text, "report"), "report")
    version = _pop_required(top, "format_version", "report")
    if version != FORMAT_VERSION:
        raise UnknownFieldError(f"report.format_version: unrecognized version {version!r}")
    d = _as_object(_pop_required(top, "report", "report"), "report")
    _reject_leftovers(top, "report")
    out: dict = {"channel": _parse_channel_summary(_pop_required(d, "channel", "report"), "report.channel")}
    dim = out["channel"]["dim"]

    opts = _as_object(_pop_required(d, "options", "report"), "report.options")
    out["options"] = {
        "basis": _parse_basis_label(_pop_required(opts, "basis", "report.options"), "report.options.basis"),
        "tol": _as_finite_number(_pop_required(opts, "tol", "report.options"), "report.options.tol"),
        "seed": _as_int(_pop_required(opts, "seed", "report.options"), "report.options.seed", minimum=0),
        "samples": _as_int(_pop_required(opts, "samples", "report.options"), "report.options.samples", minimum=1),
    }
    _reject_leftovers(opts, "report.options")

    a_form = _as_object(_pop_required(d, "a_form", "report"), "report.a_form")
    out["a_form"] = {
        "hermiticity_residual": _as_finite_number(
            _pop_required(a_form, "hermiticity_residual", "report.a_form"), "report.a_form.hermiticity_residual"
        ),
        "trace_residual": _as_finite_number(
            _pop_required(a_form, "trace_residual", "report.a_form"), "report.a_form.trace_residual"
        ),
        "valid": _pop_required(a_form, "valid", "report.a_form"),
    }
    if not isinstance(out["a_form"]["valid"], bool):
        raise BadMatrixShapeError("report.a_form.valid: expected a boolean")
    _reject_leftovers(a_form, "report.a_form")

    b_form = _as_object(_pop_required(d, "b_form", "report"), "report.b_form")
    out["b_form"] = {
        "hermiticity_residual": _as_finite_number(
            _pop_required(b_form, "hermiticity_residual", "report.b_form"), "report.b_form.hermiticity_residual"
        ),
        "trace": _as_finite_number(_pop_required(b_form, "trace", "report.b_form"), "report.b_form.trace"),
    }
    _reject_leftovers(b_form, "report.b_form")

    out["coefficient_spectrum"] = _parse_real_list(
        _pop_required(d, "coefficient_spectrum", "report"), "report.coefficient_spectrum"
    )
    out["b_spectrum"] = _parse_real_list(_pop_required(d, "b_spectrum", "report"), "report.b_spectrum")
    out["spectral_match"] = _as_finite_number(
        _pop_required(d, "spectral_match", "report"), "report.spectral_match"
    )

    verdict = _as_object(_pop_required(d, "verdict", "report"), "report.verdict")
    cls = _pop_required(verdict, "classification", "report.verdict")
    if cls not in ("completely_positive", "not_completely_positive"):
        raise UnknownFieldError(f"report.verdict.classification: unknown value {cls!r}")
    out["verdict"] = {
        "classification": cls,
        "min_eigenvalue": _as_finite_number(
            _pop_required(verdict, "min_eigenvalue", "report.verdict"), "report.verdict.min_eigenvalue"
        ),
        "tol": _as_finite_number(_pop_required(verdict, "tol", "report.verdict"), "report.verdict.tol"),
    }
    _reject_leftovers(verdict, "report.verdict")

    canonical = _as_object(_pop_required(d, "canonical", "report"), "report.canonical")
    eigs = _parse_real_list(_pop_required(canonical, "eigenvalues", "report.canonical"), "report.canonical.eigenvalues")
    ops_obj = _pop_required(canonical, "operators", "report.canonical")
    if not isinstance(ops_obj, list) or len(ops_obj) != len(eigs):
        raise BadMatrixShapeError("report.canonical.operators: must list one operator per eigenvalue")
    out["canonical"] = {
        "basis": _parse_basis_label(_pop_required(canonical, "basis", "report.canonical"), "report.canonical.basis"),
        "eigenvalues": eigs,
        "operators": [
            parse_matrix(op, f"report.canonical.operators[{i}]", dim, dim) for i, op in enumerate(ops_obj)
        ],
    }
    _reject_leftovers(canonical, "report.canonical")

    kraus_obj = _pop_required(d, "kraus", "report")
    if kraus_obj is None:
        out["kraus"] = None
    else:
        kraus = _as_object(kraus_obj, "report.kraus")
        ops_obj = _pop_required(kraus, "operators", "report.kraus")
        if not isinstance(ops_obj, list) or not ops_obj:
            raise BadMatrixShapeError("report.kraus.operators: expected a non-empty array")
        out["kraus"] = {
            "operators": [
                parse_matrix(op, f"report.kraus.operators[{i}]", dim, dim) for i, op in enumerate(ops_obj)
            ]
        }
        _reject_leftovers(kraus, "report.kraus")

    reason = _pop_required(d, "kraus_absent_reason", "report")
    if reason is not None and not isinstance(reason, str):
        raise BadMatrixShapeError("report.kraus_absent_reason: expected a string or null")
    if (out["kraus"] is None) == (reason is None):
        raise MissingFieldError("report: exactly one of kraus and kraus_absent_reason must be set")
    out["kraus_absent_reason"] = reason
    _reject_leftovers(d, "report")
    return out


def parse_output_document(text: str | bytes) -> dict:
    """Re-parse machine output of ``apply`` (strict)."""
    top = _as_object(_load_json(text, "output"), "output")
    version = _pop_required(top, "format_version", "output")
    if version != FORMAT_VERSION:
        raise UnknownFieldError(f"output.format_version: unrecognized version {version!r}")
    d = _as_object(_pop_required(top, "output", "output"), "output")
    _reject_leftovers(top, "output")
    out: dict = {"density": parse_matrix(_pop_required(d, "density", "output"), "output.density")}
    bloch = _pop_required(d, "bloch", "output")
    out["bloch"] = None if bloch is None else list(_parse_real_triple(bloch, "output.bloch"))
    positive = _pop_required(d, "positive", "output")
    if not isinstance(positive, bool):
        raise BadMatrixShapeError("output.positive: expected a boolean")
    out["positive"] = positive
    out["min_eigenvalue"] = _as_finite_number(
        _pop_required(d, "min_eigenvalue", "output"), "output.min_eigenvalue"
    )
    _reject_leftovers(d, "output")
    return out


def parse_zoo_document(text: str | bytes) -> list[dict]:
    """Re-parse machine output of ``zoo`` (strict)."""
    top = _as_object(_load_json(text, "zoo"), "zoo")
    version = _pop_required(top, "format_version", "zoo")
    if version != FORMAT_VERSION:
        raise UnknownFieldError(f"zoo.format_version: unrecognized version {version!r}")
    channels = _pop_required(top, "channels", "zoo")
    _reject_leftovers(top, "zoo")
    if not isinstance(channels, list) or not channels:
        raise BadMatrixShapeError("zoo.channels: expected a non-empty array")
    out = []
    for i, entry in enumerate(channels):
        d = _as_object(entry, f"zoo.channels[{i}]")
        kind = _pop_required(d, "kind", f"zoo.channels[{i}]")
        if kind not in _CHANNEL_PARAM_FIELDS:
            raise UnknownFieldError(f"zoo.channels[{i}].kind: unknown channel kind {kind!r}")
        summary = _pop_required(d, "summary", f"zoo.channels[{i}]")
        if not isinstance(summary, str):
            raise BadMatrixShapeError(f"zoo.channels[{i}].summary: expected a string")
        _reject_leftovers(d, f"zoo.channels[{i}]")
        out.append({"kind": kind, "summary": summary})
    return out
