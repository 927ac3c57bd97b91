"""Command-line front end.

Subcommands:

* ``analyze``  runs the full pipeline on a channel document.
* ``apply``    applies a channel to a state and prints the output.
* ``convert``  emits another representation of the channel.
* ``zoo``      lists the built-in named channels.

Exit codes (total: every path maps to exactly one):

* 0: success (for ``analyze``: the map is completely positive)
* 1: the document describes a structurally invalid map
* 2: usage error, parse error, or invalid input data
* 3: ``analyze`` on a map that is not completely positive, or a Kraus
     conversion requested for such a map

Tolerance resolution: ``--tol`` flag, else the document's
``options.tol``, else the ``CHANFORMS_TOL`` environment variable, else
1e-9.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .analysis import AnalysisReport, analyze
from .errors import (
    ChanformsError,
    DocumentError,
    InvalidMapError,
    NotCompletelyPositiveError,
)
from .forms import (
    BasisLabel,
    CanonicalDecomposition,
    KrausSet,
    OperatorBasis,
    apply_a,
    canonical_decompose,
    coefficient_matrix,
    extract_kraus,
    realign_a_to_b,
    standard_basis,
)
from .linalg import DEFAULT_TOL, SIGMA_1, SIGMA_2, SIGMA_3
from .serialize import (
    ChannelDocument,
    channel_document_wire,
    dumps,
    matrix_to_wire,
    parse_channel_document,
    parse_state_document,
    representation_wire,
)
from .zoo import CHANNEL_CATALOG, ChannelSpec, channel_a

TOL_ENV_VAR = "CHANFORMS_TOL"
CONVERT_TARGETS = ("a_form", "b_form", "coefficient", "kraus", "canonical")


# ---------------------------------------------------------------------------
# human-mode rendering


def _fmt_real(x: float, tol: float) -> str:
    return "0" if abs(x) < tol else f"{x:.6g}"


def _fmt_complex(z: complex, tol: float) -> str:
    re, im = z.real, z.imag
    if abs(im) < tol:
        return _fmt_real(re, tol)
    if abs(re) < tol:
        return f"{_fmt_real(im, tol)}i"
    sign = "+" if im >= 0 else "-"
    return f"{_fmt_real(re, tol)}{sign}{_fmt_real(abs(im), tol)}i"


def _render_matrix(m: np.ndarray, tol: float, indent: str = "  ") -> str:
    cells = [[_fmt_complex(complex(v), tol) for v in row] for row in m]
    widths = [max(len(cells[i][j]) for i in range(len(cells))) for j in range(len(cells[0]))]
    return "\n".join(
        indent + "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells
    )


def _render_spectrum(values, tol: float) -> str:
    return "[" + ", ".join(_fmt_real(float(v), tol) for v in values) + "]"


# ---------------------------------------------------------------------------
# machine-mode wire builders


def _float_list(values) -> list[float]:
    return [float(v) for v in values]


def _canonical_wire(decomp: CanonicalDecomposition) -> dict:
    return {
        "basis": decomp.basis.label.value,
        "eigenvalues": _float_list(decomp.eigenvalues),
        "operators": [matrix_to_wire(op) for op in decomp.canonical_ops],
    }


def _kraus_wire(kraus: KrausSet) -> dict:
    return {"operators": [matrix_to_wire(op) for op in kraus.operators]}


def report_wire(report: AnalysisReport, seed: int, samples: int) -> dict:
    """Stable machine layout of an analysis report."""
    return {
        "format_version": "1",
        "report": {
            "channel": report.channel,
            "options": {
                "basis": report.basis.value,
                "tol": report.tol,
                "seed": seed,
                "samples": samples,
            },
            "a_form": {
                "hermiticity_residual": report.a_hermiticity_residual,
                "trace_residual": report.a_trace_residual,
                "valid": report.a_form_valid,
            },
            "b_form": {
                "hermiticity_residual": report.b_hermiticity_residual,
                "trace": report.b_trace,
            },
            "coefficient_spectrum": _float_list(report.coefficient_spectrum),
            "b_spectrum": _float_list(report.b_spectrum),
            "spectral_match": report.spectral_match,
            "verdict": {
                "classification": report.verdict.classification.value,
                "min_eigenvalue": report.verdict.min_eigenvalue,
                "tol": report.verdict.tol,
            },
            "canonical": _canonical_wire(report.canonical),
            "kraus": _kraus_wire(report.kraus) if report.kraus is not None else None,
            "kraus_absent_reason": report.kraus_absent_reason,
        },
    }


# ---------------------------------------------------------------------------
# option resolution and IO


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _read_state_arg(arg: str) -> str:
    # Inline JSON object or a file path.
    return arg if arg.lstrip().startswith("{") else _read_text(arg)


def _env_default_tol() -> float:
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise DocumentError(f"{TOL_ENV_VAR}: not a number: {raw!r}") from None
    if not tol > 0:
        raise DocumentError(f"{TOL_ENV_VAR}: tolerance must be positive")
    return tol


def _positive_tol(raw: str) -> float:
    value = float(raw)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _nonnegative_seed(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return value


def _resolve_tol(flag: float | None, doc: ChannelDocument) -> float:
    if flag is not None:
        return flag
    if doc.options.tol is not None:
        return doc.options.tol
    return _env_default_tol()


def _resolve_basis(flag: str | None, doc: ChannelDocument, dim: int) -> OperatorBasis:
    label = None
    if flag is not None:
        label = BasisLabel(flag)
    elif doc.options.basis is not None:
        label = doc.options.basis
    if label is None:
        label = BasisLabel.PAULI_OVER_SQRT2 if dim == 2 else BasisLabel.MATRIX_UNITS
    return standard_basis(dim, label)


def _load_document(args: argparse.Namespace) -> ChannelDocument:
    try:
        text = _read_text(args.document)
    except OSError as exc:
        raise DocumentError(f"cannot read document: {exc}") from exc
    return parse_channel_document(
        text, tol_override=args.tol, default_tol=_env_default_tol()
    )


# ---------------------------------------------------------------------------
# subcommands


def _cmd_analyze(args: argparse.Namespace) -> int:
    doc = _load_document(args)
    tol = _resolve_tol(args.tol, doc)
    basis = _resolve_basis(args.basis, doc, doc.channel.dim)
    seed = args.seed if args.seed is not None else doc.options.seed
    report = analyze(doc.channel, basis, tol)

    if args.output == "machine":
        sys.stdout.write(dumps(report_wire(report, seed, doc.options.samples)))
    else:
        _print_human_report(report, tol)
    return 0 if report.verdict.is_cp else 3


def _print_human_report(report: AnalysisReport, tol: float) -> None:
    ch = report.channel
    params = ", ".join(f"{k}={v}" for k, v in ch.items() if k not in ("kind", "dim"))
    line = f"channel: {ch['kind']} (dim {ch['dim']})"
    if params:
        line += f"  [{params}]"
    print(line)
    print(f"basis: {report.basis.value}   tol: {report.tol:g}")
    print(
        f"A-form valid: {'yes' if report.a_form_valid else 'NO'}"
        f"  (hermiticity residual {_fmt_real(report.a_hermiticity_residual, tol)},"
        f" trace residual {_fmt_real(report.a_trace_residual, tol)})"
    )
    print(
        f"B-form: trace {_fmt_real(report.b_trace, tol)},"
        f" hermiticity residual {_fmt_real(report.b_hermiticity_residual, tol)}"
    )
    print(f"coefficient spectrum: {_render_spectrum(report.coefficient_spectrum, tol)}")
    print(f"B spectrum:           {_render_spectrum(report.b_spectrum, tol)}")
    print(f"spectral match (max deviation): {_fmt_real(report.spectral_match, tol)}")
    if report.verdict.is_cp:
        print(
            "verdict: completely positive"
            f" (min eigenvalue {_fmt_real(report.verdict.min_eigenvalue, tol)})"
        )
    else:
        print(
            "verdict: NOT completely positive"
            f" (min eigenvalue {_fmt_real(report.verdict.min_eigenvalue, tol)})"
        )
    print("canonical decomposition:")
    for lam, op in zip(report.canonical.eigenvalues, report.canonical.canonical_ops):
        print(f"  eigenvalue {_fmt_real(float(lam), tol)}:")
        print(_render_matrix(op, tol, indent="    "))
    if report.kraus is not None:
        print(f"kraus operators ({len(report.kraus)}):")
        for op in report.kraus.operators:
            print(_render_matrix(op, tol, indent="    "))
    else:
        print(f"kraus operators: absent ({report.kraus_absent_reason})")


def _bloch_of(matrix: np.ndarray) -> list[float] | None:
    if matrix.shape != (2, 2):
        return None
    return [float(np.trace(matrix @ s).real) for s in (SIGMA_1, SIGMA_2, SIGMA_3)]


def _cmd_apply(args: argparse.Namespace) -> int:
    doc = _load_document(args)
    tol = _resolve_tol(args.tol, doc)
    try:
        state_text = _read_state_arg(args.state)
    except OSError as exc:
        raise DocumentError(f"cannot read state: {exc}") from exc
    rho = parse_state_document(state_text, tol)
    a = channel_a(doc.channel, tol)
    out = apply_a(a, rho, tol)
    bloch = _bloch_of(out.matrix)

    if args.output == "machine":
        wire = {
            "format_version": "1",
            "output": {
                "density": matrix_to_wire(out.matrix),
                "bloch": bloch,
                "positive": out.positive,
                "min_eigenvalue": out.min_eigenvalue,
            },
        }
        sys.stdout.write(dumps(wire))
    else:
        print("output state:")
        print(_render_matrix(out.matrix, tol))
        if bloch is not None:
            print(f"bloch: ({', '.join(_fmt_real(v, tol) for v in bloch)})")
        if out.positive:
            print(f"positive: yes (min eigenvalue {_fmt_real(out.min_eigenvalue, tol)})")
        else:
            print(
                "positive: NO, output is not a physical state"
                f" (min eigenvalue {_fmt_real(out.min_eigenvalue, tol)})"
            )
    return 0


def _cmd_convert(args: argparse.Namespace) -> int:
    doc = _load_document(args)
    tol = _resolve_tol(args.tol, doc)
    a = channel_a(doc.channel, tol)
    n = a.dim
    basis = _resolve_basis(args.basis, doc, n)
    machine = args.output == "machine"

    if args.to == "a_form":
        wire = channel_document_wire(ChannelSpec.raw_a(a.matrix, tol=tol))
        if machine:
            sys.stdout.write(dumps(wire))
        else:
            print(f"A-form (dim {n}):")
            print(_render_matrix(a.matrix, tol))
    elif args.to == "b_form":
        b = realign_a_to_b(a, tol)
        if machine:
            sys.stdout.write(dumps(representation_wire("b_form", n, matrix=matrix_to_wire(b.matrix))))
        else:
            print(f"B-form (dim {n}):")
            print(_render_matrix(b.matrix, tol))
    elif args.to == "coefficient":
        cm = coefficient_matrix(a, basis, tol)
        if machine:
            sys.stdout.write(
                dumps(
                    representation_wire(
                        "coefficient", n, basis=basis.label.value, matrix=matrix_to_wire(cm.matrix)
                    )
                )
            )
        else:
            print(f"coefficient matrix (dim {n}, basis {basis.label.value}):")
            print(_render_matrix(cm.matrix, tol))
    elif args.to == "canonical":
        decomp = canonical_decompose(a, basis, tol)
        if machine:
            sys.stdout.write(
                dumps(
                    representation_wire(
                        "canonical",
                        n,
                        basis=basis.label.value,
                        eigenvalues=_float_list(decomp.eigenvalues),
                        operators=[matrix_to_wire(op) for op in decomp.canonical_ops],
                    )
                )
            )
        else:
            print(f"canonical decomposition (dim {n}, basis {basis.label.value}):")
            for lam, op in zip(decomp.eigenvalues, decomp.canonical_ops):
                print(f"  eigenvalue {_fmt_real(float(lam), tol)}:")
                print(_render_matrix(op, tol, indent="    "))
    else:  # kraus
        decomp = canonical_decompose(a, basis, tol)
        kraus = extract_kraus(decomp, tol)  # NotCompletelyPositiveError -> exit 3
        wire = channel_document_wire(ChannelSpec.raw_kraus(kraus.operators, tol=tol * (n * n + 1)))
        if machine:
            sys.stdout.write(dumps(wire))
        else:
            print(f"kraus operators ({len(kraus)}):")
            for op in kraus.operators:
                print(_render_matrix(op, tol, indent="    "))
    return 0


def _cmd_zoo(args: argparse.Namespace) -> int:
    if args.output == "machine":
        wire = {
            "format_version": "1",
            "channels": [
                {"kind": kind.value, "summary": summary}
                for kind, summary in CHANNEL_CATALOG.items()
            ],
        }
        sys.stdout.write(dumps(wire))
    else:
        print("named channels:")
        for kind, summary in CHANNEL_CATALOG.items():
            print(f"  {kind.value}: {summary}")
    return 0


# ---------------------------------------------------------------------------
# parser and entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chanforms",
        description="Analyze quantum dynamical maps via their A and B forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_basis: bool = True) -> None:
        p.add_argument("document", help="channel document path, or '-' for stdin")
        if with_basis:
            p.add_argument("--basis", choices=[b.value for b in BasisLabel], default=None)
        p.add_argument("--tol", type=_positive_tol, default=None, help="validity/classification tolerance")
        p.add_argument("--seed", type=_nonnegative_seed, default=None)
        p.add_argument("--output", choices=["human", "machine"], default="human")

    p_analyze = sub.add_parser("analyze", help="full validity and positivity report")
    add_common(p_analyze)
    p_analyze.set_defaults(func=_cmd_analyze)

    p_apply = sub.add_parser("apply", help="apply the channel to a state")
    add_common(p_apply, with_basis=False)
    p_apply.add_argument(
        "--state", required=True, help="state document: inline JSON or a file path"
    )
    p_apply.set_defaults(func=_cmd_apply)

    p_convert = sub.add_parser("convert", help="emit another representation")
    add_common(p_convert)
    p_convert.add_argument("--to", choices=CONVERT_TARGETS, required=True)
    p_convert.set_defaults(func=_cmd_convert)

    p_zoo = sub.add_parser("zoo", help="list built-in named channels")
    p_zoo.add_argument("--output", choices=["human", "machine"], default="human")
    p_zoo.set_defaults(func=_cmd_zoo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help (0) and usage errors (2)
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2

    try:
        return args.func(args)
    except InvalidMapError as exc:
        print(f"invalid map: {exc}", file=sys.stderr)
        return 1
    except NotCompletelyPositiveError as exc:
        print(f"not completely positive: {exc}", file=sys.stderr)
        return 3
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ChanformsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # total exit-code contract: never crash
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
