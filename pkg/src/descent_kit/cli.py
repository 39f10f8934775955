"""Command dispatch, deterministic JSON reporting, exit codes.

Usage: descent-kit <command> [--input FILE] [--oracle] [--seed N]
                   [--trust-irreducible] [--json|--pretty]

The input document (stdin when no --input is given) declares one tower and
any number of task blocks; the command selects which task kind to run, in
document order.  validate, describe and fixed-ring run against the bare
tower when the document carries no matching block.

Reports are canonical JSON: keys sorted, one object per line in --json
mode, all numbers rendered as exact strings, elements rendered as
canonical expression strings that re-parse to equal elements.  Exit codes:
0 positive verdict / all checks pass, 1 negative verdict / a check fails,
2 malformed input, 3 internal invariant violation (including --oracle
disagreement).  The --seed flag feeds any randomized operation; the
built-in commands are all deterministic, so it is accepted and unused.
"""

import argparse
import json
import sys

from . import descent, dsl, hg
from .errors import (
    AutomorphismGroupFailure,
    DescentKitError,
    InputError,
    InternalInconsistency,
    NotAForm,
    PIndependenceFailure,
    SeparabilityFailure,
    UnknownAutomorphism,
)
from .groebner import PresentedAlgebraL
from .hopf import GhaContext, format_gha_index
from .tower import IDENTITY_AUTO

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

_IMPLICIT_TASKS = ("validate", "describe", "fixed-ring")


# ------------------------------------------------------------- serialization

def _vec_str(vec):
    return [str(x) for x in vec]


def _report_from_descent(task, report):
    """JSON dict for a DescentReport whose payloads are vectors."""
    out = {"task": task, "verdict": report.verdict,
           "diagnostics": list(report.diagnostics)}
    if report.k_form is not None:
        out["k_form"] = [_vec_str(v) for v in report.k_form]
    if report.witness is not None:
        w = report.witness
        out["witness"] = {"element": _vec_str(w["element"]),
                          "generator": w["generator"],
                          "image": _vec_str(w["image"])}
    return out


def _emit(reports, pretty):
    lines = []
    for rep in reports:
        if pretty:
            lines.append(json.dumps(rep, sort_keys=True, indent=2))
        else:
            lines.append(json.dumps(rep, sort_keys=True,
                                    separators=(",", ":")))
    sys.stdout.write("\n".join(lines) + "\n")


# ------------------------------------------------------------------ payloads

def _element_vectors(spec, vectors, ambient):
    out = []
    for vec in vectors:
        if len(vec) != ambient:
            raise InputError("basis vector has %d entries, ambient is %d"
                             % (len(vec), ambient))
        out.append([dsl.eval_element(spec, a) for a in vec])
    return out


def _trunc_vectors(spec, vectors, ambient):
    out = []
    for vec in vectors:
        if len(vec) != ambient:
            raise InputError("basis vector has %d entries, ambient is %d"
                             % (len(vec), ambient))
        out.append([dsl.eval_trunc(spec, a) for a in vec])
    return out


def _trunc_matrix_columns(spec, rows, dim, name):
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise InputError("matrix for %s must be %d x %d" % (name, dim, dim))
    entries = [[dsl.eval_trunc(spec, a) for a in row] for row in rows]
    return [[entries[r][c] for r in range(dim)] for c in range(dim)]


def _parse_gha_string(ctx, text, line, col):
    """Inverse of format_gha_index: 'D_c*D_1^(2)' -> a GHA basis index."""
    where = "%d:%d: " % (line, col)
    s = text.strip()
    kvec = [0] * len(ctx.spec.insep)
    g = IDENTITY_AUTO
    if s != "1":
        for factor in s.split("*"):
            factor = factor.strip()
            if not factor.startswith("D_"):
                raise InputError(where + "GHA factor %r does not look like"
                                 " D_<g> or D_<i>^(<k>)" % factor)
            body = factor[2:]
            if "^" in body:
                head, _, exp = body.partition("^")
                if not (exp.startswith("(") and exp.endswith(")")
                        and exp[1:-1].isdigit() and head.isdigit()):
                    raise InputError(where + "GHA factor %r is malformed"
                                     % factor)
                i = int(head)
                if not 1 <= i <= len(kvec):
                    raise InputError(where + "no inseparable generator"
                                     " number %d" % i)
                if kvec[i - 1]:
                    raise InputError(where + "duplicate GHA factor for"
                                     " generator %d" % i)
                kvec[i - 1] = int(exp[1:-1])
            else:
                if body.isdigit():
                    raise InputError(where + "GHA factor %r needs an"
                                     " exponent ^(k)" % factor)
                if g != IDENTITY_AUTO:
                    raise InputError(where + "two group factors in one"
                                     " GHA index")
                if body not in ctx.group:
                    raise InputError(where + "unknown automorphism %r"
                                     % body)
                g = body
    index = (g, tuple(kvec))
    if index not in ctx.basis_index:
        raise InputError(where + "GHA index %s is out of range"
                         % format_gha_index(index))
    return index


# --------------------------------------------------------------------- tasks

def _run_validate(decl, trust):
    checks = []

    def passed(name, detail):
        checks.append({"name": name, "pass": True, "detail": detail})

    def failed(name, detail):
        checks.append({"name": name, "pass": False, "detail": detail})

    order = ("input-shape", "separable-minpoly", "automorphism-group",
             "p-independence")
    try:
        spec = dsl.build_spec(decl, trust_irreducible=trust)
    except SeparabilityFailure as e:
        stage, detail = "separable-minpoly", str(e)
    except (AutomorphismGroupFailure, UnknownAutomorphism) as e:
        stage, detail = "automorphism-group", str(e)
    except PIndependenceFailure as e:
        stage, detail = "p-independence", str(e)
    except DescentKitError as e:
        stage, detail = "input-shape", str(e)
    else:
        passed("input-shape",
               "p=%d, base (%s), %d inseparable generator(s)"
               % (spec.p, ", ".join(spec.ring.variables), len(spec.insep)))
        if spec.sep_name is None:
            passed("separable-minpoly", "no separable part (degree 1)")
        elif trust:
            passed("separable-minpoly",
                   "degree %d; irreducibility trusted, separability checked"
                   % spec.d0)
        else:
            passed("separable-minpoly",
                   "irreducible and separable of degree %d" % spec.d0)
        passed("automorphism-group",
               "closed group of order %d with inverses"
               % len(spec.auto_names()))
        passed("p-independence",
               "defining constants are p-independent; degree %d, exponent %d"
               % (spec.degree, spec.exponent))
        return {"task": "validate", "checks": checks}, EXIT_OK
    for name in order:
        if name == stage:
            break
        passed(name, "ok")
    failed(stage, detail)
    return {"task": "validate", "checks": checks}, EXIT_NEGATIVE


def _run_describe(spec):
    inseps = []
    for (nm, n, a), order in zip(spec.insep, spec.insep_orders):
        inseps.append({"name": nm, "n": str(n), "order": str(order),
                       "value": str(a)})
    report = {
        "task": "describe",
        "p": str(spec.p),
        "degree": str(spec.degree),
        "exponent": str(spec.exponent),
        "truncation": str(spec.p ** spec.exponent),
        "base_variables": list(spec.ring.variables),
        "separable_generator": spec.sep_name,
        "separable_degree": str(spec.d0),
        "automorphisms": list(spec.auto_names()),
        "inseparable_generators": inseps,
        "basis": [str(spec.monomial(u)) for u in spec.basis],
    }
    return report, EXIT_OK


def _named_generators(spec, names):
    gens = dict(hg.canonical_generators(spec))
    if names is None:
        return [phi for _, phi in hg.canonical_generators(spec)]
    out = []
    for nm in names:
        if nm not in gens:
            raise InputError("unknown generator %r; canonical generators:"
                             " %s" % (nm, ", ".join(sorted(gens))))
        out.append(gens[nm])
    return out


def _run_fixed_ring(spec, payload):
    phis = _named_generators(spec, payload.get("gens"))
    field = hg.fixed_subfield(spec, phis)
    ring = hg.fixed_subring(spec, phis)
    verdict = "base_field" if len(field) == 1 else "larger_than_base"
    report = {
        "task": "fixed-ring",
        "verdict": verdict,
        "field_basis": _vec_str(field),
        "ring_basis": _vec_str(ring),
        "diagnostics": [
            "fixed subfield of L has K-dimension %d" % len(field),
            "fixed subring of the truncated ring has K-dimension %d"
            % len(ring),
        ],
    }
    return report, EXIT_OK if verdict == "base_field" else EXIT_NEGATIVE


def _run_apply(spec, payload):
    mp = payload["map"]
    tgt = payload["target"]
    if mp[0] == "name":
        gens = dict(hg.canonical_generators(spec))
        phi = gens.get(mp[1])
        if phi is None:
            raise InputError("unknown map %r; canonical generators: %s"
                             % (mp[1], ", ".join(nm for nm, _ in
                                                 hg.canonical_generators(spec))))
        map_label = mp[1]
        if tgt[0] == "scalar":
            result = str(phi.apply(dsl.eval_trunc(spec, tgt[1])))
        else:
            result = [str(phi.apply(dsl.eval_trunc(spec, a)))
                      for a in tgt[1]]
    else:
        ctx = GhaContext(spec)
        index = _parse_gha_string(ctx, mp[1], mp[2], mp[3])
        map_label = format_gha_index(index)
        if tgt[0] == "scalar":
            result = str(ctx.act_on_element(index,
                                            dsl.eval_element(spec, tgt[1])))
        else:
            result = [str(ctx.act_on_element(index,
                                             dsl.eval_element(spec, a)))
                      for a in tgt[1]]
    return {"task": "apply", "map": map_label, "result": result}, EXIT_OK


def _run_check_subspace(spec, payload, oracle):
    ambient = payload["ambient"]
    basis = _element_vectors(spec, payload["basis"], ambient)
    W = descent.SubspaceL(spec, ambient, basis)
    report = descent.check_subspace(ambient, W)
    if oracle and descent.oracle_subspace(ambient, W) != report.defined:
        raise InternalInconsistency(
            "check-subspace verdict disagrees with the brute-force oracle")
    out = _report_from_descent("check-subspace", report)
    return out, EXIT_OK if report.defined else EXIT_NEGATIVE


def _run_deform_check(spec, payload, oracle):
    ambient = payload["ambient"]
    basis = _trunc_vectors(spec, payload["basis"], ambient)
    Wt = descent.FreeTruncModule(spec, ambient, basis)
    report = descent.deformation_descent(ambient, Wt)
    if oracle:
        fiber = descent.SubspaceL(spec, ambient, Wt.fiber())
        if descent.oracle_subspace(ambient, fiber) != report.defined:
            raise InternalInconsistency(
                "deform-check verdict disagrees with the brute-force oracle")
    out = _report_from_descent("deform-check", report)
    return out, EXIT_OK if report.defined else EXIT_NEGATIVE


def _run_kform(spec, payload):
    dim = payload["dim"]
    assignment = {}
    for nm, rows in payload["rho"]:
        if nm in assignment:
            raise InputError("duplicate matrix for %s" % nm)
        assignment[nm] = _trunc_matrix_columns(spec, rows, dim, nm)
    rho = descent.SigmaLinearAction(spec, dim, assignment)
    try:
        report = descent.kform_from_action(rho)
    except NotAForm as e:
        out = {"task": "kform", "verdict": "no_k_form",
               "diagnostics": [str(e)] + list(e.diagnostics)}
        return out, EXIT_NEGATIVE
    out = _report_from_descent("kform", report)
    return out, EXIT_OK


def _run_check_ideal(spec, payload):
    names = payload["vars"]
    scratch = PresentedAlgebraL(spec, names, [])
    gens = [dsl.eval_poly(scratch, a) for a in payload["gens"]]
    alg = PresentedAlgebraL(spec, names, gens)
    report = descent.check_ideal(alg)
    out = {"task": "check-ideal", "verdict": report.verdict,
           "diagnostics": list(report.diagnostics)}
    if report.k_form is not None:
        out["k_form"] = [str(f) for f in report.k_form]
    if report.witness is not None:
        w = report.witness
        out["witness"] = {"element": str(w["element"]),
                          "generator": w["generator"],
                          "image": str(w["image"])}
    return out, EXIT_OK if report.defined else EXIT_NEGATIVE


def _run_check_morphism(spec, payload):
    if "matrix" in payload:
        rows = payload["matrix"]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise InputError("morphism matrix must be rectangular")
        entries = [[dsl.eval_element(spec, a) for a in row] for row in rows]
        cols = [[entries[r][c] for r in range(len(rows))]
                for c in range(len(rows[0]))]
        report = descent.check_morphism(spec, cols)
        out = {"task": "check-morphism", "verdict": report.verdict,
               "diagnostics": list(report.diagnostics)}
        if report.k_form is not None:
            out["k_form"] = [[str(entries[r][c])
                              for c in range(len(rows[0]))]
                             for r in range(len(rows))]
    else:
        names = payload["vars"]
        images = payload["images"]
        if len(images) != len(names):
            raise InputError("%d variables but %d images"
                             % (len(names), len(images)))
        scratch = PresentedAlgebraL(spec, names, [])
        f = {nm: dsl.eval_poly(scratch, a)
             for nm, a in zip(names, images)}
        report = descent.check_morphism(spec, f)
        out = {"task": "check-morphism", "verdict": report.verdict,
               "diagnostics": list(report.diagnostics)}
        if report.k_form is not None:
            out["k_form"] = {nm: str(poly)
                             for nm, poly in report.k_form.items()}
    if report.witness is not None:
        w = report.witness
        out["witness"] = {"element": str(w["element"]),
                          "generator": w["generator"],
                          "image": str(w["image"])}
    return out, EXIT_OK if report.defined else EXIT_NEGATIVE


def _run_task(task, decl, spec, args):
    kind = task.kind
    if kind == "validate":
        return _run_validate(decl, args.trust_irreducible)
    if kind == "describe":
        return _run_describe(spec)
    if kind == "fixed-ring":
        return _run_fixed_ring(spec, task.payload)
    if kind == "apply":
        return _run_apply(spec, task.payload)
    if kind == "check-subspace":
        return _run_check_subspace(spec, task.payload, args.oracle)
    if kind == "deform-check":
        return _run_deform_check(spec, task.payload, args.oracle)
    if kind == "kform":
        return _run_kform(spec, task.payload)
    if kind == "check-ideal":
        return _run_check_ideal(spec, task.payload)
    if kind == "check-morphism":
        return _run_check_morphism(spec, task.payload)
    raise InputError("unknown command: %s" % kind)


# ---------------------------------------------------------------------- main

def _build_argparser():
    ap = argparse.ArgumentParser(
        prog="descent-kit",
        description="Exact Galois descent over finite normal modular"
                    " extensions in characteristic p.")
    ap.add_argument("command", choices=sorted(dsl.TASK_KINDS),
                    help="task kind to run from the input document")
    ap.add_argument("--input", metavar="FILE",
                    help="input document (default: stdin)")
    ap.add_argument("--oracle", action="store_true",
                    help="run the brute-force oracle alongside the engine;"
                         " exit 3 on disagreement")
    ap.add_argument("--seed", type=int, default=0, metavar="N",
                    help="seed for randomized operations (all built-in"
                         " commands are deterministic)")
    ap.add_argument("--trust-irreducible", action="store_true",
                    help="skip the irreducibility proof of the separable"
                         " minimal polynomial")
    fmt = ap.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=True,
                     help="compact canonical JSON, one report per line"
                          " (default)")
    fmt.add_argument("--pretty", action="store_true",
                     help="indented JSON")
    return ap


def run(argv) -> int:
    args = _build_argparser().parse_args(argv)
    if args.input is None:
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            print("error: %s" % e, file=sys.stderr)
            return EXIT_INPUT
    try:
        doc = dsl.parse_input(text)
        tasks = [t for t in doc.tasks if t.kind == args.command]
        if not tasks:
            if args.command in _IMPLICIT_TASKS:
                tasks = [dsl.TaskDecl(args.command, {}, 0, 0)]
            else:
                raise InputError("no %s task in the input document"
                                 % args.command)
        spec = None
        if args.command != "validate":
            spec = dsl.build_spec(doc.decl,
                                  trust_irreducible=args.trust_irreducible)
        reports = []
        code = EXIT_OK
        for task in tasks:
            rep, c = _run_task(task, doc.decl, spec, args)
            reports.append(rep)
            code = max(code, c)
    except InternalInconsistency as e:
        print("internal error: %s" % e, file=sys.stderr)
        return EXIT_INTERNAL
    except DescentKitError as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    _emit(reports, args.pretty)
    return code


def main():
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
