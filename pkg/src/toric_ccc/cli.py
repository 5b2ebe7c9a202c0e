"""Command line interface.

    ccc fan validate FAN
    ccc mo BUNDLE [--convention eq1|costalk]
    ccc euler integrate|convolve|ft|mu|ss FUNCTION ...
    ccc theta cech|sections|morse|microlocal|table INPUT ...
    ccc certify bundle|nef|convex|morelli-image INPUT ...
    ccc fixture NAME
    ccc --replay WITNESS

Exit status: 0 success (or verdict true), 1 certified false, 2 input error.
Reports are JSON with sorted keys; given the same arguments and seed the
output is byte-identical (``--timing`` adds wall-clock data and opts out).
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from fractions import Fraction

from . import io
from . import linalg as la
from .certify import (
    Witness,
    convexity_check,
    is_nef,
    is_vector_bundle,
    morelli_image_check,
    recheck_witness,
)
from .euler import (
    CF,
    EulerError,
    cf_convolve,
    cf_fourier_sato,
    cf_integrate,
    cf_microlocalize,
    cf_singular_support,
    ss_subset_lambda,
)
from .geometry import GeometryError
from .theta import (
    ThetaComplex,
    ThetaError,
    cech_complex,
    cohomology_table,
    compactly_supported_sections,
    costalk_euler_function,
    line_bundle_complex,
    microlocal_complex,
    morse_report,
    mu_sheaf,
)
from .toric import (
    CartierData,
    CartierError,
    ConditionCError,
    Fan,
    FanError,
    KlyachkoBundle,
    cartier_to_klyachko,
    morelli_eq1,
)

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class UsageError(io.InputError):
    category = "usage"


def threads() -> int:
    """Parallelism cap from CCC_THREADS (default 1)."""
    raw = os.environ.get("CCC_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"CCC_THREADS must be a positive integer, got {raw!r}", "/env/CCC_THREADS")
    return n


# -- conversion helpers ----------------------------------------------------------


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return la.fmt(obj)
    if isinstance(obj, float):
        return "+inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def parse_vector(text: str, pointer: str) -> tuple:
    try:
        return tuple(la.frac(p.strip()) for p in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read vector {text!r}", pointer) from exc


def parse_face(text: str | None) -> tuple:
    if not text:
        return ()
    try:
        return tuple(sorted(int(p) for p in text.split(",")))
    except ValueError as exc:
        raise UsageError(f"cannot read cone {text!r}", "/args/cone") from exc


def _integral(v: tuple, pointer: str) -> tuple:
    if any(x.denominator != 1 for x in v):
        raise UsageError("lattice point expected", pointer)
    return tuple(int(x) for x in v)


def as_theta(obj) -> ThetaComplex:
    if isinstance(obj, ThetaComplex):
        return obj
    if isinstance(obj, KlyachkoBundle):
        return cech_complex(obj)
    if isinstance(obj, CartierData):
        return line_bundle_complex(obj)
    raise UsageError("expected a theta, klyachko or cartier document")


def as_bundle(obj) -> KlyachkoBundle:
    if isinstance(obj, KlyachkoBundle):
        return obj
    if isinstance(obj, CartierData):
        return cartier_to_klyachko(obj)
    raise UsageError("expected a klyachko or cartier document")


def as_function(obj) -> CF:
    if isinstance(obj, CF):
        return obj
    raise UsageError("expected a function document")


def as_fan(obj) -> Fan:
    if isinstance(obj, Fan):
        return obj
    if hasattr(obj, "fan"):
        return obj.fan
    raise UsageError("expected a fan document")


def _check_face(fan: Fan, face: tuple) -> tuple:
    if not fan.is_face(face):
        raise UsageError(f"cone {list(face)} is not in the fan", "/args/cone")
    return face


def _check_dim(v: tuple, n: int, pointer: str) -> tuple:
    if len(v) != n:
        raise UsageError(f"expected {n} coordinates, got {len(v)}", pointer)
    return v


# -- witnesses ------------------------------------------------------------------


def replay_document(F: ThetaComplex, w: Witness) -> dict | None:
    doc = {"kind": "replay", "schema_version": io.SCHEMA_VERSION, "check": w.kind, "input": io.encode_theta(F)}
    if w.kind == "point":
        x, sigma = w.data
        doc.update(x=jsonable(list(x)), cone=list(sigma))
    elif w.kind == "restriction":
        x, sigma, ups = w.data
        doc.update(x=jsonable(list(x)), cone=list(sigma), target_cone=list(ups))
    elif w.kind == "direction":
        xi, _ = w.data
        doc.update(xi=jsonable(list(xi)))
    else:
        return None
    return doc


def witness_block(w: Witness, F: ThetaComplex | None = None) -> dict:
    block = {"kind": w.kind, "condition": w.condition, "data": jsonable(w.data), "detail": jsonable(w.detail)}
    if F is not None:
        doc = replay_document(F, w)
        if doc is not None:
            block["replay"] = doc
    return block


def witness_from_replay(doc: dict) -> tuple[ThetaComplex, Witness]:
    F = as_theta(io.decode(doc["input"]))
    n = F.fan.dim

    def need(key):
        if key not in doc:
            raise io.SchemaViolation(f"replay of {doc['check']!r} needs {key!r}", f"/{key}")
        return doc[key]

    check = doc["check"]
    if check == "point":
        x = _check_dim(tuple(la.frac(v) for v in need("x")), n, "/x")
        w = Witness("point", (x, _check_face(F.fan, tuple(sorted(need("cone"))))), "replay")
    elif check == "restriction":
        x = _check_dim(tuple(la.frac(v) for v in need("x")), n, "/x")
        sigma = _check_face(F.fan, tuple(sorted(need("cone"))))
        ups = _check_face(F.fan, tuple(sorted(need("target_cone"))))
        w = Witness("restriction", (x, sigma, ups), "replay")
    else:
        xi = _check_dim(tuple(la.frac(v) for v in need("xi")), n, "/xi")
        w = Witness("direction", (xi, None), "replay")
    return F, w


# -- commands --------------------------------------------------------------------


def _load(args, i: int = 0):
    return io.parse_input(args.inputs[i])


def cmd_fan_validate(args):
    fan = as_fan(_load(args))
    rep = fan.validate()
    verdict = rep.smooth and rep.complete
    return {"verdict": verdict, "simplicial": rep.simplicial, "smooth": rep.smooth, "complete": rep.complete,
            "fan": io.encode_fan(fan)}, verdict


def _emit_function(args, f: CF) -> dict:
    if args.cells:
        io.dump_cells(f, args.cells)
    return {"function": io.encode_function(f, canonical=True)}


def cmd_mo(args):
    b = as_bundle(_load(args))
    if args.convention == "eq1":
        f = morelli_eq1(b)
    else:
        f = costalk_euler_function(cech_complex(b))
    out = _emit_function(args, f)
    out["convention"] = args.convention
    return out, True


def cmd_euler(args):
    f = as_function(_load(args))
    act = args.action
    if act == "integrate":
        return {"integral": cf_integrate(f)}, True
    if act == "convolve":
        if len(args.inputs) < 2:
            raise UsageError("convolve needs two function documents")
        g = as_function(_load(args, 1))
        return _emit_function(args, cf_convolve(f, g)), True
    if act == "ft":
        return _emit_function(args, cf_fourier_sato(f)), True
    if act == "mu":
        if args.x is None:
            raise UsageError("mu needs --x")
        x = _check_dim(parse_vector(args.x, "/args/x"), f.ambient_dim, "/args/x")
        return _emit_function(args, cf_microlocalize(f, x)), True
    # ss
    core = cf_singular_support(f)
    entries = []
    for base, covs in core.entries:
        eq, gt = io._cell_rows(base)
        entries.append({
            "base": {"eq": eq, "gt": gt, "dimension": base.dim},
            "covectors": [dict(zip(("eq", "gt"), io._cell_rows(c)), dimension=c.dim, value=v) for c, v in covs],
        })
    out = {"singular_support": entries}
    if args.fan:
        fan = as_fan(io.parse_input(args.fan))
        lam = ss_subset_lambda(f, fan, core)
        out["in_lambda"] = lam.verdict
        if lam.witness:
            base, cov, reason = lam.witness
            out["witnesses"] = [{"base": jsonable(base.sample_point()), "covector": jsonable(cov.sample_point()),
                                 "condition": reason}]
        return out, lam.verdict
    return out, True


def _table_rows(table: dict, n: int) -> list:
    rows = []
    for x in sorted(table):
        betti = {k: 0 for k in range(n + 1)}
        betti.update(table[x])
        rows.append({"x": list(x), "betti": {str(k): v for k, v in sorted(betti.items())}})
    return rows


def cmd_theta(args):
    obj = _load(args)
    F = as_theta(obj)
    n = F.fan.dim
    act = args.action
    if act == "cech":
        return {"complex": io.encode_theta(F), "counts": jsonable(F.count_by_degree())}, True
    if act == "sections":
        vc = compactly_supported_sections(F)
        return {"betti": jsonable(dict(sorted(vc.betti().items()))), "euler": vc.euler()}, True
    if act == "morse":
        if args.xi is None:
            raise UsageError("morse needs --xi")
        xi = _check_dim(parse_vector(args.xi, "/args/xi"), n, "/args/xi")
        rep = morse_report(F, xi)
        levels = [{"threshold": jsonable(lv.threshold), "betti": jsonable(dict(sorted(lv.betti.items()))),
                   "h0": lv.h0, "h0_image": lv.h0_image} for lv in rep.levels]
        return {"xi": jsonable(rep.xi), "jumps": jsonable(rep.jumps), "levels": levels}, True
    if act == "microlocal":
        if args.x is None:
            raise UsageError("microlocal needs --x")
        x = _integral(_check_dim(parse_vector(args.x, "/args/x"), n, "/args/x"), "/args/x")
        if args.cone is not None:
            face = _check_face(F.fan, parse_face(args.cone))
            betti = microlocal_complex(F, x, face).betti()
            return {"x": list(x), "cone": list(face), "betti": jsonable(dict(sorted(betti.items())))}, True
        sheaf = mu_sheaf(F, x)
        if args.cells:
            io.dump_cells(sheaf, args.cells)
        return {"sheaf": io.dump_cells(sheaf)}, True
    # table
    face = _check_face(F.fan, parse_face(args.cone))
    table = cohomology_table(F, face)
    return {"cone": list(face), "table": _table_rows(table, n)}, True


def cmd_certify(args):
    act = args.action
    if act == "morelli-image":
        f = as_function(_load(args))
        if not args.fan:
            raise UsageError("morelli-image needs --fan")
        fan = as_fan(io.parse_input(args.fan))
        rep = morelli_image_check(f, fan)
        return {"verdict": rep.verdict, "info": jsonable(rep.info),
                "witnesses": [witness_block(w) for w in rep.witnesses]}, rep.verdict
    F = as_theta(_load(args))
    if act == "bundle":
        rep = is_vector_bundle(F)
    elif act == "nef":
        rep = is_vector_bundle(F)
        if rep.verdict:
            rep = is_nef(F)
    else:
        dirs = "auto"
        if args.xi:
            dirs = [_check_dim(parse_vector(s, "/args/xi"), F.fan.dim, "/args/xi") for s in args.xi]
        rep = convexity_check(F, dirs)
    return {"verdict": rep.verdict, "info": jsonable(rep.info),
            "witnesses": [witness_block(w, F) for w in rep.witnesses]}, rep.verdict


def cmd_fixture(args):
    from . import fixtures as fx

    name = args.name
    rng = random.Random(args.seed)
    bundles = fx.bundle_fixtures()
    if name in bundles:
        return io.encode(bundles[name])
    if name == "fixed-point":
        return io.encode(fx.fixed_point_complex())
    if name == "shifted-sum":
        return io.encode(fx.shifted_sum())
    if name == "ml":
        return io.encode(fx.ml_complex())
    if name.startswith("fujino:"):
        n, m = (int(v) for v in name.split(":", 1)[1].split(","))
        return io.encode(fx.fujino_bundle(n, m))
    if name.startswith("random:"):
        _, fan_name, rank = name.split(":")
        return io.encode(fx.random_bundle(fx.fan(fan_name), int(rank), rng))
    if name in fx.FANS:
        return io.encode(fx.fan(name))
    raise UsageError(f"unknown fixture {name!r}", "/args/name")


def cmd_replay(path: str):
    doc = io.parse_input(path)
    if not isinstance(doc, dict) or doc.get("kind") != "replay":
        raise io.SchemaViolation("expected a replay document", "/kind")
    F, w = witness_from_replay(doc)
    reproduced = recheck_witness(F, w)
    return {"check": w.kind, "reproduced": reproduced, "data": jsonable(w.data)}, not reproduced


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")

    p = argparse.ArgumentParser(prog="ccc", description="Constructible functions, Theta-complexes and toric bundles.")
    p.add_argument("--replay", metavar="WITNESS", help="re-run one failing sub-check from a replay document")
    p.add_argument("--output", "-o", dest="top_output", help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="group")

    fan = sub.add_parser("fan", help="fan checks").add_subparsers(dest="action", required=True)
    fv = fan.add_parser("validate", parents=[common])
    fv.add_argument("inputs", nargs=1)

    mo = sub.add_parser("mo", parents=[common], help="constructible function of a bundle")
    mo.add_argument("inputs", nargs=1)
    mo.add_argument("--convention", choices=["eq1", "costalk"], default="eq1")
    mo.add_argument("--cells", help="also write a cell dump")

    eu = sub.add_parser("euler", help="Euler calculus").add_subparsers(dest="action", required=True)
    for act in ("integrate", "convolve", "ft", "mu", "ss"):
        q = eu.add_parser(act, parents=[common])
        q.add_argument("inputs", nargs="+" if act == "convolve" else 1)
        q.add_argument("--x", help="base point, comma separated rationals")
        q.add_argument("--fan", help="fan document for the Lambda test")
        q.add_argument("--cells", help="also write a cell dump")

    th = sub.add_parser("theta", help="Theta-complexes").add_subparsers(dest="action", required=True)
    for act in ("cech", "sections", "morse", "microlocal", "table"):
        q = th.add_parser(act, parents=[common])
        q.add_argument("inputs", nargs=1)
        q.add_argument("--x", help="lattice point, comma separated")
        q.add_argument("--xi", help="covector, comma separated rationals")
        q.add_argument("--cone", help="cone as comma separated ray indices")
        q.add_argument("--cells", help="also write a cell dump")

    ce = sub.add_parser("certify", help="decision procedures").add_subparsers(dest="action", required=True)
    for act in ("bundle", "nef", "convex", "morelli-image"):
        q = ce.add_parser(act, parents=[common])
        q.add_argument("inputs", nargs=1)
        if act == "convex":
            q.add_argument("--xi", action="append", help="direction override (repeatable)")
        if act == "morelli-image":
            q.add_argument("--fan", help="fan document")

    fx = sub.add_parser("fixture", parents=[common], help="print a named fixture document")
    fx.add_argument("name")
    return p


def _write(doc: dict, path: str | None) -> None:
    if path:
        io.write_json(doc, path)
    else:
        sys.stdout.write(io.dumps(doc))


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        threads()
        if args.replay:
            command = "replay"
            result, ok = cmd_replay(args.replay)
            output, timing, seed = args.top_output, False, None
        elif args.group is None:
            parser.print_usage(sys.stderr)
            return EXIT_INPUT
        elif args.group == "fixture":
            _write(cmd_fixture(args), args.output)
            return EXIT_OK
        else:
            handler = {"fan": cmd_fan_validate, "mo": cmd_mo, "euler": cmd_euler,
                       "theta": cmd_theta, "certify": cmd_certify}[args.group]
            command = " ".join(filter(None, [args.group, getattr(args, "action", None)]))
            result, ok = handler(args)
            output, timing, seed = args.output, args.timing, args.seed
    except io.InputError as exc:
        sys.stderr.write(io.dumps(exc.as_dict()))
        return EXIT_INPUT
    except (FanError, CartierError, ConditionCError, ThetaError, EulerError, GeometryError) as exc:
        sys.stderr.write(io.dumps({"error": type(exc).__name__, "pointer": "", "message": str(exc)}))
        return EXIT_INPUT
    report = {"schema_version": io.SCHEMA_VERSION, "command": command, "status": "pass" if ok else "false"}
    if command != "replay":
        report["inputs"] = list(args.inputs)
        report["seed"] = seed
    else:
        report["inputs"] = [args.replay]
    report.update(result)
    if timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    try:
        _write(report, output)
    except OSError as exc:
        sys.stderr.write(io.dumps({"error": "output", "pointer": "", "message": str(exc)}))
        return EXIT_INPUT
    return EXIT_OK if ok else EXIT_FALSE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
