"""Command-line interface: ``qproj <command> [--preset NAME | --cartan FILE] ...``.

Exit status is 0 on success, 1 when a requested verification fails, and 2 on
usage errors (bad arguments, unparsable input, limits exceeded).
"""

import argparse
import json
import sys

from . import cartan, config
from .algebra.element import AlgebraElement, Flavor, render
from .category_o import (build_H, check_gamma_on_module, decompose, dump_module, kernel_K,
                         load_module, verify_direct_sum)
from .errors import IdentityViolation, QProjError
from .expr import parse_expression
from .hopf import antipode, coproduct, phi
from .pairing import dual_basis, gram, pair
from .projector import build_gamma, verify_C_identities, verify_gamma
from .scalars import ONE

SCHEMA_VERSION = 1


def _word_text(word, letter):
    return " ".join(f"{letter}{i + 1}" for i in word) or "1"


def _weight(text, datum):
    try:
        beta = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight {text!r}") from None
    if len(beta) != datum.rank:
        raise QProjError(f"weight needs {datum.rank} comma-separated entries")
    return beta


def _terms_json(x):
    return [{"f_word": [i + 1 for i in w.f], "torus": list(w.torus), "e_word": [i + 1 for i in w.e],
             "coeff": str(c)} for w, c in x.sorted_terms()]


def _tensor_json(t):
    return [{"left": _terms_json(AlgebraElement(t.datum, t.flavors[0], {a: ONE}))[0],
             "right": _terms_json(AlgebraElement(t.datum, t.flavors[1], {b: ONE}))[0],
             "coeff": str(c)} for (a, b), c in t.sorted_terms()]


# --- commands ---------------------------------------------------------------------------


def cmd_cartan(args, datum):
    info = datum.to_json()
    info["rank"] = datum.rank
    info["exponent_denominator"] = datum.exponent_denominator
    text = "\n".join([
        f"name: {datum.name}",
        "cartan_matrix: " + "; ".join(" ".join(str(x) for x in row) for row in datum.cartan_matrix),
        "symmetrizers: " + " ".join(str(d) for d in datum.symmetrizers),
        "coroot_form: " + "; ".join(" ".join(str(x) for x in row) for row in datum.coroot_form),
        "valid",
    ])
    return info, text, True


def cmd_nf(args, datum):
    x = parse_expression(args.expr, datum, args.flavor)
    return {"flavor": x.flavor.value, "terms": _terms_json(x), "text": render(x)}, render(x), True


def cmd_pair(args, datum):
    x = parse_expression(args.x, datum, "U")
    y = parse_expression(args.y, datum, "U")
    v = pair(x, y)
    return {"value": str(v)}, str(v), True


def cmd_gram(args, datum):
    beta = _weight(args.weight, datum)
    g = gram(datum, beta)
    rows = [[str(x) for x in row] for row in g.matrix]
    text = "\n".join("[ " + ", ".join(r) + " ]" for r in rows) if rows else "[ ]"
    data = {"weight": list(beta), "basis": [[i + 1 for i in w] for w in g.plus_basis],
            "matrix": rows, "determinant": str(g.determinant)}
    return data, text, True


def cmd_dual_basis(args, datum):
    beta = _weight(args.weight, datum)
    xs, ys = dual_basis(datum, beta)
    lines, data = [], []
    for x, y in zip(xs, ys):
        lines.append(f"{_word_text(x, 'e')} -> {render(y)}")
        data.append({"x": [i + 1 for i in x], "y": _terms_json(y)})
    return data, "\n".join(lines), True


def cmd_gamma(args, datum):
    g = build_gamma(datum, args.cutoff)
    x = g.element
    data = {"cutoff": args.cutoff, "terms": [{"f_word": t["f_word"], "torus": t["torus"],
                                              "edd_word": t["e_word"], "coeff": t["coeff"]}
                                             for t in _terms_json(x)]}
    text = render(x, divided_f=True)
    ok = True
    if args.verify:
        rep = verify_gamma(datum, args.cutoff, raise_on_failure=False)
        data["verification"] = rep.to_json()
        text += "\n" + str(rep)
        ok = rep.passed
    return data, text, ok


def cmd_verify(args, datum):
    if args.what == "gamma":
        rep = verify_gamma(datum, args.cutoff, raise_on_failure=False)
    elif args.what == "C":
        rep = verify_C_identities(datum, args.cutoff, raise_on_failure=False)
    else:
        lam = tuple(int(x) for x in args.weight.split(",")) if args.weight else (1,) * datum.rank
        module = build_H(datum, lam, args.cutoff)
        check_gamma_on_module(module)
        module.check_relations()
        rep = verify_direct_sum(module, raise_on_failure=False)
        text = f"H({', '.join(map(str, lam))}) cutoff {args.cutoff}: {'PASS' if rep.passed else 'FAIL'}"
        return rep.to_json(), text, rep.passed
    return rep.to_json(), str(rep), rep.passed


def cmd_module(args, datum):
    if args.action == "build":
        if args.weight is None:
            raise QProjError("module build needs --weight")
        lam = tuple(int(x) for x in args.weight.split(","))
        module = build_H(datum, lam, args.cutoff)
        if args.output:
            dump_module(module, args.output)
        dims = [{"weight": list(mu), "dim": module.dims[mu]} for mu in module.weights]
        text = "\n".join(f"{list(mu)}: {module.dims[mu]}" for mu in module.weights)
        data = module.to_json() if not args.output else {"written": args.output, "weights": dims}
        return data, text, True
    if args.input is None:
        raise QProjError(f"module {args.action} needs --input")
    module = load_module(args.input)
    if args.action == "decompose":
        parts = decompose(module)
        text = "\n".join(f"H({', '.join(map(str, lam))}) x {m}" for lam, m in parts) or "0"
        return [{"weight": list(lam), "multiplicity": m} for lam, m in parts], text, True
    kern = kernel_K(module)
    text = "\n".join(f"{list(mu)}: {len(v)}" for mu, v in sorted(kern.items()))
    return [{"weight": list(mu), "dim": len(v)} for mu, v in sorted(kern.items())], text, True


def cmd_coproduct(args, datum):
    flavor = {"delta": "U", "r": "B", "l": "Bbar", "b": "U"}[args.variant]
    x = parse_expression(args.expr, datum, flavor)
    t = coproduct(args.variant, x)
    return {"variant": args.variant, "terms": _tensor_json(t)}, str(t), True


def cmd_antipode(args, datum):
    x = parse_expression(args.expr, datum, args.flavor)
    y = phi(x) if args.map == "phi" else antipode(x, args.map)
    return {"map": args.map, "terms": _terms_json(y)}, render(y), True


COMMANDS = {
    "cartan": cmd_cartan,
    "nf": cmd_nf,
    "pair": cmd_pair,
    "gram": cmd_gram,
    "dual-basis": cmd_dual_basis,
    "gamma": cmd_gamma,
    "verify": cmd_verify,
    "module": cmd_module,
    "coproduct": cmd_coproduct,
    "antipode": cmd_antipode,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(cartan.PRESETS), help="built-in Cartan datum")
    src.add_argument("--cartan", metavar="FILE", help="Cartan datum JSON file")
    common.add_argument("--json", action="store_true", help="emit versioned JSON")
    common.add_argument("--height-limit", type=int, metavar="L",
                        help=f"maximum height (default ${config.ENV_VAR} or {config.DEFAULT_HEIGHT_LIMIT})")

    parser = argparse.ArgumentParser(prog="qproj", description="Exact computations in q-boson algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("cartan", parents=[common], help="validate and show a Cartan datum")

    p = sub.add_parser("nf", parents=[common], help="normal form of an expression")
    p.add_argument("expr")
    p.add_argument("--flavor", choices=[f.value for f in Flavor])

    p = sub.add_parser("pair", parents=[common], help="pairing <x, y> of U>= and U<= elements")
    p.add_argument("x")
    p.add_argument("y")

    for name, helptext in (("gram", "Gram matrix at a weight"), ("dual-basis", "dual basis at a weight")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--weight", required=True, help="comma-separated root coordinates, e.g. 1,1")

    p = sub.add_parser("gamma", parents=[common], help="truncated extremal projector")
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="check identities up to a cutoff")
    p.add_argument("what", choices=["gamma", "C", "module"])
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--weight", help="highest weight for 'module' (pairings with h_i)")

    p = sub.add_parser("module", parents=[common], help="build or analyse truncated modules")
    p.add_argument("action", choices=["build", "decompose", "kernel"])
    p.add_argument("--weight", help="highest weight, comma-separated pairings with h_i")
    p.add_argument("--cutoff", type=int, default=4)
    p.add_argument("--input", help="module JSON file")
    p.add_argument("--output", help="write the built module here")

    p = sub.add_parser("coproduct", parents=[common], help="apply a coproduct")
    p.add_argument("expr")
    p.add_argument("--variant", choices=["delta", "r", "l", "b"], default="delta")

    p = sub.add_parser("antipode", parents=[common], help="apply S, S^-1 or phi")
    p.add_argument("expr")
    p.add_argument("--map", choices=["S", "S_inv", "phi"], default="S")
    p.add_argument("--flavor", choices=[f.value for f in Flavor])
    return parser


def load_datum(args):
    if args.cartan:
        return cartan.load(args.cartan)
    if args.preset:
        return cartan.preset(args.preset)
    if args.command == "module" and getattr(args, "input", None):
        return None
    raise QProjError("choose a Cartan datum with --preset NAME or --cartan FILE")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    limit = args.height_limit if args.height_limit is not None else config.height_limit()
    try:
        with config.limit_heights(limit):
            datum = load_datum(args)
            data, text, ok = COMMANDS[args.command](args, datum)
    except IdentityViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QProjError, OSError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        payload = {"schema_version": SCHEMA_VERSION,
                   "datum": datum.to_json() if datum is not None else None,
                   "result": data}
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
