"""Command-line interface.

Exit codes: 0 success, 1 mathematical negative (with a witness in the report),
2 usage or parse error, 3 undetermined verdict.  Reports go to standard output,
diagnostics to standard error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import exactfield as ef
from . import report as rp
from .artrans import ARError, almost_split_sequence, almost_split_sequence_starting, ar_quiver, dtr, trd, verify_ass
from .dsl import Document, DSLError, parse_file
from .extensions import ext_space
from .infrep import InfRepError, ass_in_rep_plus, dtr_inf
from .quiver import QuiverError
from .repcore import UNDETERMINED, PrimeTooSmall, Rep, RepError, UndeterminedError, decompose, hom_basis
from .subcat import (
    SubcatError,
    TorsionError,
    left_stable_approx,
    make_subcat,
    make_torsion_pair,
    right_stable_approx,
    subcat_ass,
    torsion_canonical_seq,
    torsion_transfer_ass,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_UNDETERMINED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Undetermined(Exception):
    """A verdict the search could not settle; carries the partial report."""

    def __init__(self, witness: str, payload: Optional[dict] = None):
        super().__init__(witness)
        self.witness, self.payload = witness, payload or {}


class Negative(Exception):
    """A mathematical negative answer; carries the partial report."""

    def __init__(self, witness: str, payload: Optional[dict] = None):
        super().__init__(witness)
        self.witness, self.payload = witness, payload or {}


def _prime(text: str) -> int:
    try:
        return ef.check_prime(int(text))
    except (ValueError, ef.FieldError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=_prime, default=ef.DEFAULT_PRIME,
                        help="prime for fprep blocks without one and for arquiver (default: %(default)s)")
    common.add_argument("--seed", type=_nonneg, default=0, help="seed for randomized steps (default: %(default)s)")
    common.add_argument("--budget", type=_nonneg, default=200,
                        help="idempotent candidates per decomposition level (default: %(default)s)")
    common.add_argument("--format", choices=("json", "text", "dot"), default="json",
                        help="report format; dot only for arquiver (default: %(default)s)")

    ap = argparse.ArgumentParser(prog="almostsplit", description="Auslander-Reiten computations on .arq files.")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file", help=".arq input file")
        return p

    cmd("check", "parse and validate a file")
    cmd("decompose", "Krull-Schmidt decomposition").add_argument("--rep", required=True)
    p = cmd("hom", "basis of Hom(A, B)")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p = cmd("ext", "basis of Ext^1(Z, X)")
    p.add_argument("--z", required=True)
    p.add_argument("--x", required=True)
    cmd("dtr", "AR translate DTr").add_argument("--rep", required=True)
    cmd("trd", "inverse AR translate TrD").add_argument("--rep", required=True)
    p = cmd("ass", "almost split sequence ending at a rep")
    p.add_argument("--rep", required=True)
    p.add_argument("--verify-against", default=None,
                   help="'all' (every indecomposable) or a comma-separated list of rep names")
    p = cmd("arquiver", "AR quiver of a representation-finite quiver")
    p.add_argument("--quiver", required=True)
    p.add_argument("--dot", default=None, help="write DOT to this path")
    p.add_argument("--plot", default=None, help="render the AR quiver with matplotlib to this image path")
    p = cmd("approx", "minimal stable approximation by a subcategory")
    p.add_argument("--rep", required=True)
    p.add_argument("--subcat", required=True)
    p.add_argument("--side", choices=("right", "left"), default="right")
    p = cmd("subcat-ass", "almost split sequence inside a subcategory")
    p.add_argument("--rep", required=True)
    p.add_argument("--subcat", required=True)
    p = cmd("torsion", "canonical sequence or transfer of an almost split sequence")
    p.add_argument("--pair", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rep", help="rep whose canonical sequence is computed")
    g.add_argument("--transfer", metavar="NAME",
                   help="transfer the ambient sequence ending at NAME (side torsion) or starting at NAME (side free)")
    p.add_argument("--side", choices=("torsion", "free"), default="torsion")
    p = cmd("inf-dtr", "DTr of a finitely presented rep of a ray quiver")
    p.add_argument("--fprep", required=True)
    p.add_argument("--depth", type=int, default=None)
    p = cmd("inf-ass", "almost split sequence in rep+ of a ray quiver")
    p.add_argument("--fprep", required=True)
    p.add_argument("--depth", type=int, default=None)
    return ap


# ---------------------------------------------------------------------------


def _rep(doc: Document, name: str) -> Rep:
    if name not in doc.reps:
        raise UsageError(f"no rep named {name}")
    return doc.reps[name]


def _test_set(doc: Document, z: Rep, choice: Optional[str], args) -> list[Rep]:
    if choice is None:
        return []
    if choice == "all":
        try:
            return ar_quiver(z.quiver, z.p, args.seed).indecomposables()
        except ARError:
            names = list(doc.reps_over(z.quiver.name))
    else:
        names = [n.strip() for n in choice.split(",") if n.strip()]
    out = []
    for n in names:
        r = _rep(doc, n)
        if r.quiver != z.quiver or r.p != z.p:
            raise UsageError(f"rep {n} lives over a different quiver or prime")
        if not r.is_zero():
            out.extend(p.rep for p in decompose(r, args.seed, args.budget).parts)
    return out


def run_check(doc, args):
    return {"document": {k: sorted(getattr(doc, k)) for k in
                         ("quivers", "rayquivers", "reps", "subcats", "torsions", "fpreps")}}


def run_decompose(doc, args):
    d = decompose(_rep(doc, args.rep), args.seed, args.budget)
    out = {"decomposition": rp.decomposition_json(d)}
    if any(p.verdict == UNDETERMINED for p in d.parts):
        out["status"] = "undetermined"
    return out


def run_hom(doc, args):
    a, b = _rep(doc, args.src), _rep(doc, args.dst)
    basis = hom_basis(a, b)
    return {"dim": len(basis), "basis": [rp.morphism_json(f) for f in basis]}


def run_ext(doc, args):
    sp = ext_space(_rep(doc, args.z), _rep(doc, args.x))
    return {"space_dim": sp.dim, "basis": [rp.class_json(c) for c in sp.basis()]}


def _translate(fn, doc, args):
    try:
        return {"rep": rp.rep_json(fn(_rep(doc, args.rep)))}
    except ARError as e:
        raise Negative(str(e)) from None


def run_ass(doc, args):
    z = _rep(doc, args.rep)
    try:
        a = almost_split_sequence(z, args.seed)
    except ARError as e:
        raise Negative(str(e)) from None
    tests = _test_set(doc, z, args.verify_against, args)
    cert = verify_ass(a.sequence, tests)
    out = {"sequence": rp.ses_json(a.sequence), "class": rp.class_json(a.delta, a.sequence),
           "socle_dim": a.socle_dim,
           "certificate": rp.certificate_json(cert)}
    if not cert.valid:
        raise Negative("certificate failed: " + "; ".join(cert.failures), out)
    return out


def run_arquiver(doc, args):
    if args.quiver not in doc.quivers:
        raise UsageError(f"no quiver named {args.quiver}")
    try:
        g = ar_quiver(doc.quivers[args.quiver], args.prime, args.seed)
    except ARError as e:
        raise Negative(str(e)) from None
    dot = g.to_dot()
    out = {"arquiver": rp.ar_quiver_json(g), "prime": args.prime}
    if args.dot:
        if args.dot == "-":
            sys.stdout.write(dot)
        else:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(dot)
            out["dot"] = args.dot
    if args.plot:
        from .plotting import plot_ar_quiver
        out["plot"] = plot_ar_quiver(g, args.plot)
    if args.format == "dot":
        out["_dot_text"] = dot
    return out


def _subcat(doc, name, seed):
    if name not in doc.subcats:
        raise UsageError(f"no subcat named {name}")
    decl = doc.subcats[name]
    return make_subcat([doc.reps[g] for g in decl.gens], name, seed)


def _closure_guard(c, out):
    out["closure"] = rp.closure_json(c.closure)
    if c.closure.verdict == "not_closed":
        raise Negative(f"{c.name} is not extension-closed: {c.closure.witness}", out)
    if c.closure.sampled:
        out["warnings"] = ["extension closure checked on a basis plus random samples only"]


def run_approx(doc, args):
    c = _subcat(doc, args.subcat, args.seed)
    out: dict = {}
    _closure_guard(c, out)
    x = _rep(doc, args.rep)
    a = right_stable_approx(x, c) if args.side == "right" else left_stable_approx(x, c)
    out["approximation"] = rp.approximation_json(a)
    return out


def run_subcat_ass(doc, args):
    c = _subcat(doc, args.subcat, args.seed)
    out: dict = {}
    _closure_guard(c, out)
    res = subcat_ass(_rep(doc, args.rep), c, args.seed)
    out["outcome"] = res.kind
    if res.approximation is not None:
        out["approximation"] = rp.approximation_json(res.approximation)
    if res.kind == "ext_projective":
        raise Negative(f"Ext-projective in {c.name}: {res.witness}", out)
    out["sequence"] = rp.ses_json(res.sequence)
    out["class"] = rp.class_json(res.eta, res.sequence)
    out["certificate"] = rp.certificate_json(res.certificate)
    if not res.certificate.valid:
        raise Negative("certificate failed", out)
    return out


def run_torsion(doc, args):
    if args.pair not in doc.torsions:
        raise UsageError(f"no torsion pair named {args.pair}")
    decl = doc.torsions[args.pair]
    t = make_torsion_pair([doc.reps[n] for n in decl.torsion], [doc.reps[n] for n in decl.free],
                          args.pair, args.seed)
    if args.rep is not None:
        return {"sequence": rp.ses_json(torsion_canonical_seq(_rep(doc, args.rep), t, args.seed))}
    m = _rep(doc, args.transfer)
    try:
        ass = (almost_split_sequence(m, args.seed) if args.side == "torsion"
               else almost_split_sequence_starting(m, args.seed))
    except ARError as e:
        raise Negative(str(e)) from None
    res = torsion_transfer_ass(ass.sequence, t, args.side, args.seed)
    out = {"sequence": rp.ses_json(res.sequence), "certificate": rp.certificate_json(res.certificate)}
    if not res.certificate.valid:
        raise Negative("certificate failed", out)
    return out


def _fprep(doc, name):
    if name not in doc.fpreps:
        raise UsageError(f"no fprep named {name}")
    return doc.fpreps[name]


def run_inf_dtr(doc, args):
    return {"verdict": rp.dtr_verdict_json(dtr_inf(_fprep(doc, args.fprep), args.depth))}


def run_inf_ass(doc, args):
    res = ass_in_rep_plus(_fprep(doc, args.fprep), args.depth, args.seed)
    out = {"outcome": res.kind, "verdict": rp.dtr_verdict_json(res.verdict)}
    if res.kind == "no_ass":
        raise Negative(res.witness, out)
    out["sequence"] = rp.ses_json(res.sequence)
    out["certificate"] = rp.certificate_json(res.certificate)
    if not res.boundary_clear:
        raise Undetermined("sequence reaches the truncation boundary; increase --depth", out)
    if not res.test_set_complete:
        out["warnings"] = ["window interior is not representation-finite; factorization tests are partial"]
    return out


COMMANDS = {
    "check": run_check, "decompose": run_decompose, "hom": run_hom, "ext": run_ext,
    "dtr": lambda d, a: _translate(dtr, d, a), "trd": lambda d, a: _translate(trd, d, a),
    "ass": run_ass, "arquiver": run_arquiver, "approx": run_approx, "subcat-ass": run_subcat_ass,
    "torsion": run_torsion, "inf-dtr": run_inf_dtr, "inf-ass": run_inf_ass,
}


def _emit(report: dict, args, dot_text: Optional[str]) -> None:
    if args.format == "dot" and dot_text is not None:
        sys.stdout.write(dot_text)
    elif args.format == "text":
        sys.stdout.write(rp.render_text(report) + "\n")
    else:
        sys.stdout.write(rp.dumps(report))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.format == "dot" and args.command != "arquiver":
        print("error: --format dot is only available for arquiver", file=sys.stderr)
        return EXIT_USAGE
    base = {"command": args.command, "seed": args.seed}
    try:
        doc = parse_file(args.file, args.prime)
        payload = COMMANDS[args.command](doc, args)
    except Negative as e:
        print(f"{args.command}: {e.witness}", file=sys.stderr)
        report = {**base, **e.payload, "status": "negative", "witness": e.witness}
        _emit(report, args, None)
        return EXIT_NEGATIVE
    except (Undetermined, UndeterminedError) as e:
        witness = getattr(e, "witness", str(e))
        print(f"{args.command}: undetermined: {witness}", file=sys.stderr)
        report = {**base, **getattr(e, "payload", {}), "status": "undetermined", "witness": witness}
        _emit(report, args, None)
        return EXIT_UNDETERMINED
    except DSLError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TorsionError, InfRepError, SubcatError) as e:
        print(f"{args.command}: {e}", file=sys.stderr)
        report = {**base, "status": "negative", "witness": str(e)}
        _emit(report, args, None)
        return EXIT_NEGATIVE
    except (UsageError, PrimeTooSmall, QuiverError, RepError, ef.FieldError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    for w in payload.get("warnings", []):
        print(f"{args.command}: warning: {w}", file=sys.stderr)
    dot_text = payload.pop("_dot_text", None)
    report = {"status": "ok", **base, **payload}
    _emit(report, args, dot_text)
    return EXIT_UNDETERMINED if report["status"] == "undetermined" else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
