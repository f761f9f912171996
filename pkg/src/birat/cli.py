"""Command-line front end: ``birat involution|factorize|verify|validate``.

Exit codes: 0 success, 1 parse or usage error, 2 validation failure,
3 computation failure.  Results go to stdout, diagnostics to stderr.
"""

import argparse
import json
import sys

from . import io
from .errors import (BiratError, IndeterminacyPoint, NotZeroDimensional, ParseError,
                     ValidationError, WrongCentreDegree)
from .involutions import DEFAULT_SEED, bertini_involution, geiser_involution
from .maps import (BirationalMap, is_surface_selfmap, map_evaluate,
                   same_projective_point)
from .sampling import Sampler
from .sarkisov import factorize
from .schemes import ClosedPoint, ZeroDimScheme, decompose_zero_dim, surface_validate


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error [usage]: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for every random choice")
    common.add_argument("--format", choices=("text", "json"), default="text", dest="output_format")
    common.add_argument("--retries", type=int, default=8, help="retry budget for randomized steps")

    p = _Parser(prog="birat", description="Geiser and Bertini involutions on del Pezzo surfaces of degree 3 and 4.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("validate", parents=[common], help="check a surface file")
    q.add_argument("surface")

    q = sub.add_parser("involution", parents=[common], help="build a Geiser or Bertini involution")
    q.add_argument("surface")
    q.add_argument("kind", choices=("geiser", "bertini"))
    centre = q.add_mutually_exclusive_group(required=True)
    centre.add_argument("--point", help="rational centre, e.g. 1,-1,-1,1")
    centre.add_argument("--ideal", help="forms cutting the centre with the surface, e.g. 'x, z, s'")
    q.add_argument("--save-map", help="write the involution as a map file")

    q = sub.add_parser("factorize", parents=[common], help="factorize a selfmap of a cubic surface")
    q.add_argument("surface")
    q.add_argument("map")
    q.add_argument("--check-maximal-centre", action="store_true",
                   help="verify each centre's multiplicity before untwisting")

    q = sub.add_parser("verify", parents=[common], help="sample-check a map")
    q.add_argument("surface")
    q.add_argument("mode", choices=("selfmap", "involution", "equal"))
    q.add_argument("map")
    q.add_argument("other", nargs="?", help="second map file for mode 'equal'")
    q.add_argument("--samples", type=int, default=20)
    return p


def resolve_centre(X, kind, point=None, ideal=None, seed=DEFAULT_SEED):
    """The closed point named by explicit coordinates or by extra forms."""
    want = X.d - 2 if kind == "geiser" else X.d - 1
    if point is not None:
        coords = io.parse_point(point, X.ring.n)
        if not X.contains_point(coords):
            raise ValidationError(f"point {point} is not on the surface", "centre")
        P = ClosedPoint.rational(X.ring, coords)
    else:
        gens = io.parse_forms_list(ideal, X.ring)
        if not all(g.is_homogeneous() for g in gens):
            raise ValidationError("centre forms must be homogeneous", "centre")
        try:
            comps = decompose_zero_dim(ZeroDimScheme(list(X.forms) + gens, seed=seed))
        except NotZeroDimensional:
            raise ValidationError("the centre forms do not cut out finitely many points", "centre") from None
        good = [c for c in comps if c.degree == want]
        if not good:
            found = ", ".join(str(c.degree) for c in comps) or "none"
            raise WrongCentreDegree(f"no component of degree {want} (found degrees {found})", "centre")
        P = good[0]
    if P.degree != want:
        raise WrongCentreDegree(f"{kind} centre must have degree {want}, got {P.degree}", "centre")
    return P


def cmd_validate(args):
    X = io.parse_surface_file(args.surface, validate=False)
    rep = surface_validate(X)
    out = {"degree": rep["degree"], "passed": rep["passed"], "failed": rep["failed"],
           "detail": rep["detail"], "checks": {name: ok for name, ok in rep["checks"]}}
    if args.output_format == "json":
        _emit_json(out)
    else:
        print(f"surface of degree {X.d} in P^{X.d}")
        for name, ok in rep["checks"]:
            print(f"  {name}: {'ok' if ok else 'FAILED'}")
        print("valid: " + ("true" if rep["passed"] else f"false ({rep['detail']})"))
    return 0 if rep["passed"] else 2


def cmd_involution(args):
    X = io.parse_surface_file(args.surface)
    P = resolve_centre(X, args.kind, args.point, args.ideal, args.seed)
    build = geiser_involution if args.kind == "geiser" else bertini_involution
    res = build(X, P, seed=args.seed, retries=args.retries)
    selfmap = is_surface_selfmap(X, res.map, seed=args.seed)
    if args.save_map:
        io.write_map_file(args.save_map, X, res.map)
    if args.output_format == "json":
        _emit_json({
            "kind": res.kind,
            "centre": io.closed_point_json(P),
            "degree": res.map.declared_degree,
            "forms": [io.form_json(f) for f in res.forms],
            "theta": io.matrix_json(res.theta),
            "selfmap": selfmap,
        })
    else:
        print(f"{res.kind} involution, degree {res.map.declared_degree}")
        print(f"centre: {io.point_text(P)}")
        print("forms:")
        print(io.map_text(res.forms))
        print("theta:")
        print(io.matrix_text(res.theta))
        print(f"selfmap: {'true' if selfmap else 'false'}")
    return 0 if selfmap else 3


def cmd_factorize(args):
    X = io.parse_surface_file(args.surface)
    if X.d != 3:
        raise ValidationError("factorization needs a cubic surface", "surface")
    fmap = io.parse_map_file(args.map, X)
    if not is_surface_selfmap(X, fmap, seed=args.seed):
        raise ValidationError("the map does not send the surface to itself", "map")
    res = factorize(X, fmap, seed=args.seed, check_maximal_centre=args.check_maximal_centre, verify=False)
    ok, witnesses = _sample_check(X, lambda pt: _agree(fmap, res.reconstruction(), pt), args.seed + 11, 20)
    links = [{"kind": l.kind, "centre": io.closed_point_json(l.centre),
              "degree_before": l.degree_before, "degree_after": l.degree_after,
              "multiplicity": l.multiplicity} for l in res.links]
    if args.output_format == "json":
        _emit_json({"links": links, "terminal_automorphism": io.matrix_json(res.terminal_automorphism),
                    "round_trip": ok, "witnesses": witnesses})
    else:
        print(f"{len(res.links)} link(s)")
        for i, l in enumerate(res.links, 1):
            print(f"  {i}. {l.kind} at {io.point_text(l.centre)}: degree {l.degree_before} -> {l.degree_after}")
        print("terminal automorphism (x -> x*M):")
        print(io.matrix_text(res.terminal_automorphism))
        print(f"round trip: {'true' if ok else 'false'} ({len(witnesses)} samples)")
    return 0 if ok else 3


def cmd_verify(args):
    X = io.parse_surface_file(args.surface)
    f = io.parse_map_file(args.map, X)
    if args.mode == "equal":
        if args.other is None:
            raise ParseError("mode 'equal' needs a second map file")
        g = io.parse_map_file(args.other, X)
        check = lambda pt: _agree(f, g, pt)
    elif args.mode == "involution":
        twice = BirationalMap(X, f.stages + f.stages)
        check = lambda pt: _agree(twice, BirationalMap.identity(X), pt)
    else:
        check = lambda pt: X.contains_point(map_evaluate(f, pt))
    ok, witnesses = _sample_check(X, check, args.seed, args.samples)
    if args.output_format == "json":
        _emit_json({"mode": args.mode, "verdict": ok, "witnesses": witnesses})
    else:
        print(f"{args.mode}: {'true' if ok else 'false'}")
        for w in witnesses:
            field = w["field"] if w["field"] == "Q" else w["field"]["minpoly"] + " = 0"
            print(f"  ({' : '.join(w['coordinates'])}) over {field}")
    return 0


def _agree(f, g, pt):
    return same_projective_point(map_evaluate(f, pt), map_evaluate(g, pt))


def _sample_check(X, check, seed, count):
    """Run check at seeded samples, skipping indeterminate ones.

    Returns (verdict, witnesses); on failure the last witness is the
    counterexample."""
    sampler = Sampler(X, seed)
    witnesses = []
    for _ in range(50 * count):
        K, pt = next(sampler)
        try:
            good = check(pt)
        except IndeterminacyPoint:
            continue
        witnesses.append(io.point_json(K, pt))
        if not good:
            return False, witnesses
        if len(witnesses) >= count:
            break
    return bool(witnesses), witnesses


def _emit_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


COMMANDS = {"validate": cmd_validate, "involution": cmd_involution,
            "factorize": cmd_factorize, "verify": cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BiratError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
