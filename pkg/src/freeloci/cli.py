"""Command-line interface. Every command can print a JSON CommandResult.

Exit codes: 0 ok, 2 parse error, 3 precondition failed, 4 needs a field
extension, 5 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import jsonschema

from . import schemas
from .cpoly import SizeCapError, det_generic
from .factorization import factor, is_atom, locus_equal
from .linalg import DimensionError, SingularMatrixError, Subspace
from .matalg import (
    NeedsExtensionError,
    algebra_span,
    block_triangularize,
    is_jointly_nilpotent,
    pencil_similar,
)
from .ncpoly import NCPoly, ParseError
from .pencil import MatrixTuple, MonicPencil
from .perturbation import DegenerateError, PerturbationData, complementary_invariant_report
from .realization import NotRegularError, Realization, higman_linearize, is_minimal, minimize
from . import spectra

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_EXTENSION, EXIT_INTERNAL = 0, 2, 3, 4, 5


class InputError(Exception):
    """Malformed input (exit 2)."""


def _read_text(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:]) as fh:
            return fh.read().strip()
    return arg


def _poly(arg: str, g: int | None = None) -> NCPoly:
    try:
        return NCPoly.parse(_read_text(arg), g)
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse polynomial: {exc}") from exc


def _json_file(path: str, kind: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
        jsonschema.validate(data, schemas.INPUTS[kind])
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as exc:
        raise InputError(f"{path}: {exc.__class__.__name__}: {getattr(exc, 'message', exc)}") from exc
    return data


def _build(fn, data):
    try:
        return fn(data)
    except (DimensionError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from exc


# commands return (payload, human-readable text)


def cmd_factor(args):
    f = _poly(args.poly)
    F = factor(f, args.seed)
    lines = [f"unit: {F.to_json()['unit']}"] + [f"  ({p})" for p in F.factors]
    return F.to_json(), "\n".join(lines)


def cmd_locus_eq(args):
    f1, f2 = _poly(args.poly1), _poly(args.poly2)
    res = locus_equal(f1, f2, args.seed)
    return res.to_json(), "Equal" if res.equal else "NotEqual"


def cmd_atom(args):
    a = is_atom(_poly(args.poly))
    return {"atom": a}, "atom" if a else "not an atom"


def cmd_linearize(args):
    L, size = higman_linearize(_poly(args.poly))
    return {"pencil": L.to_json(), "size": size}, json.dumps(L.to_json())


def cmd_minimize(args):
    R = _build(Realization.from_json, _json_file(args.file, "realization"))
    M = minimize(R)
    return {"realization": M.to_json(), "report": is_minimal(M).to_json(), "input_report": is_minimal(R).to_json()}, f"size {R.d} -> {M.d}"


def _pencil(path):
    return _build(MonicPencil.from_json, _json_file(path, "pencil"))


def cmd_pencil_irreducible(args):
    L = _pencil(args.file)
    dim = len(algebra_span(L.coeffs))
    irr = dim == L.d * L.d
    return {"irreducible": irr, "span_dim": dim}, f"{'irreducible' if irr else 'reducible'} (span dim {dim} of {L.d * L.d})"


def cmd_pencil_decompose(args):
    L = _pencil(args.file)
    dec = block_triangularize(L, args.seed)
    if not dec.complete:
        raise NeedsExtensionError("decomposition needs a field extension", partial=dec.to_json())
    return dec.to_json(), f"block sizes {dec.block_sizes}"


def cmd_pencil_similar(args):
    L1, L2 = _pencil(args.file1), _pencil(args.file2)
    P = pencil_similar(L1, L2)
    return {"similar": P is not None, "P": None if P is None else P.to_json()}, "similar" if P is not None else "none"


def cmd_nilpotent(args):
    data = _json_file(args.file, "tuple")
    A = _build(MatrixTuple.from_json, data)
    r = is_jointly_nilpotent(list(A))
    return {"jointly_nilpotent": r}, str(r).lower()


def cmd_det_generic(args):
    L = _pencil(args.file)
    D = det_generic(L, args.n, args.cap)
    return {"n": args.n, "degree": D.degree(), "polynomial": D.to_json()}, f"degree {D.degree()}: {D}"


def cmd_perturb_complement(args):
    data = _json_file(args.file, "perturbation")
    P = _build(PerturbationData.from_json, data)
    S = _build(lambda v: Subspace(P.d, v), data["S"])
    rep = complementary_invariant_report(P, S, args.seed)
    return rep.to_json(), "complement: " + json.dumps(rep.complement.to_json())


def _hpencil(path, hermitian=True):
    data = _json_file(path, "hpencil")
    cls = spectra.HPencil if hermitian else spectra.NumericPencil
    return _build(cls.from_json, data)


def cmd_spectra(args):
    if args.action == "classify":
        L = _hpencil(args.file, hermitian=False)
        if not args.point:
            raise InputError("classify needs --point")
        X = _build(lambda d: [spectra._parse_matrix(m) for m in d], _json_file(args.point, "point"))
        pc = _build(lambda X: spectra.classify_point(L, X), X)
        return pc.to_json(), f"kernel_dim {pc.kernel_dim}, alg_multiplicity {pc.alg_multiplicity}, smooth {pc.smooth}"
    L = _hpencil(args.file)
    if args.action == "sample":
        bs = spectra.boundary_sample(L, args.n, args.count, args.seed)
        return bs.to_json(), f"{len(bs.points)} boundary points, {bs.misses} misses"
    rep = spectra.smooth_density_experiment(L, args.n, args.count, args.seed)
    return rep, f"kernel_dim=1 fraction: {rep['fraction']}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freeloci", description="Noncommutative polynomial factorization and free loci.")
    p.add_argument("--version", action="version", version=f"freeloci schema {schemas.SCHEMA_VERSION}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="print a JSON CommandResult")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positional, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for a in positional:
            sp.add_argument(a)
        sp.set_defaults(func=fn)
        return sp

    add("factor", cmd_factor, "poly", help="factor a polynomial into atoms")
    add("locus-eq", cmd_locus_eq, "poly1", "poly2", help="compare free loci")
    add("atom", cmd_atom, "poly", help="test whether a polynomial is an atom")
    add("linearize", cmd_linearize, "poly", help="Higman linearization")
    add("minimize", cmd_minimize, "file", help="minimize a realization (JSON)")
    add("pencil-irreducible", cmd_pencil_irreducible, "file")
    add("pencil-decompose", cmd_pencil_decompose, "file")
    add("pencil-similar", cmd_pencil_similar, "file1", "file2")
    add("nilpotent", cmd_nilpotent, "file")
    dg = add("det-generic", cmd_det_generic, "file", help="determinant at generic matrices")
    dg.add_argument("--n", type=int, required=True)
    dg.add_argument("--cap", type=int, default=12)
    add("perturb-complement", cmd_perturb_complement, "file")
    sp = add("spectra", cmd_spectra, "action", "file")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--point", help="JSON file with the evaluation tuple (classify)")
    sc = sub.add_parser("schemas", help="print the JSON schemas")
    sc.set_defaults(func=None, json=True, seed=0)
    return p


def _emit(args, status, payload, text, elapsed):
    if args.json:
        result = {
            "status": status,
            "payload": payload,
            "seed": args.seed,
            "timing": {"seconds": round(elapsed, 6)},
            "schema_version": schemas.SCHEMA_VERSION,
        }
        print(json.dumps(result, sort_keys=True))
    else:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    if args.command == "schemas":
        print(json.dumps(schemas.all_schemas(), sort_keys=True, indent=2))
        return EXIT_OK
    if args.command == "spectra" and args.action not in ("sample", "classify", "density"):
        print("spectra action must be sample, classify or density", file=sys.stderr)
        return EXIT_PARSE
    t0 = time.perf_counter()
    try:
        payload, text = args.func(args)
        key = "spectra" if args.command == "spectra" else args.command
        jsonschema.validate(payload, schemas.PAYLOADS[key])
        _emit(args, "ok", payload, text, time.perf_counter() - t0)
        return EXIT_OK
    except InputError as exc:
        code, status, msg, partial = EXIT_PARSE, "error", f"parse error: {exc}", None
    except NeedsExtensionError as exc:
        partial = exc.partial.to_json() if hasattr(exc.partial, "to_json") else exc.partial
        code, status, msg = EXIT_EXTENSION, "needs-extension", f"needs field extension: {exc}"
    except (NotRegularError, DegenerateError, SizeCapError, DimensionError, SingularMatrixError, ValueError) as exc:
        code, status, msg, partial = EXIT_PRECONDITION, "error", f"precondition failed: {exc}", None
    except Exception as exc:  # pragma: no cover - safety net
        code, status, msg, partial = EXIT_INTERNAL, "error", f"internal error: {exc!r}", None
    payload = {"error": msg}
    if partial is not None:
        payload["partial"] = partial
    if args.json:
        _emit(args, status, payload, msg, time.perf_counter() - t0)
    else:
        print(msg, file=sys.stderr)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
