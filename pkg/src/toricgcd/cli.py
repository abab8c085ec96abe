"""Command-line front end.

Exit codes: 0 success (JSON on stdout), 1 validation error (JSON error
object on stderr), 2 usage error.

Divisor arguments (``--L``, ``--F``, ``--divisor``) accept a JSON object,
a path to a JSON file, or a ``+``-separated sum of terms ``[coef*]name``
where name is ``anticanonical``, ``canonical``, ``exceptional``,
``prime:<i>`` (ray i of the working fan) or ``pullback:<i>`` (pullback of
ray i of the base fan).  With ``--blowup-center`` the working fan is the
blown-up fan; ray indices are 0-based.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from fractions import Fraction

from .arith_heights import max_excess_slope, parse_places, sweep_inequality
from .blowup import exceptional_divisor, pullback, star_subdivision
from .errors import ToricError
from .gcd_bound import AnticanonicalDecomposition, bound_coefficients, bound_report, prime_decomposition
from .lattice_fan import fan_from_json, is_smooth, standard_fan
from .rational import format_rational, parse_rational
from .toric_divisor import (
    ToricDivisor,
    anticanonical_divisor,
    canonical_divisor,
    polytope_of_divisor,
    prime_divisor,
    volume_of_divisor,
)
from .volume_beta import beta, pseudoeffective_threshold
from .worked_examples import EXAMPLES, run_example


def _load_json(text):
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    return json.loads(text)


def load_fan(text):
    if os.path.exists(text) or text.lstrip().startswith("{"):
        return fan_from_json(_load_json(text))
    return standard_fan(text)


def _indices(text):
    return tuple(int(t) for t in text.split(",") if t.strip())


def _working(args):
    base = load_fan(args.fan)
    center = getattr(args, "blowup_center", None)
    bmap = star_subdivision(base, _indices(center)) if center else None
    return base, bmap


def parse_divisor(text, base, bmap):
    fan = bmap.source_fan if bmap else base
    stripped = text.strip()
    if stripped.startswith("{") or os.path.exists(stripped):
        return ToricDivisor.from_dict(fan, _load_json(stripped))
    total = ToricDivisor(fan, (0,) * fan.n_rays)
    for term in stripped.split("+"):
        term = term.strip()
        coef = Fraction(1)
        if "*" in term:
            c, term = term.split("*", 1)
            coef = parse_rational(c)
        name, _, idx = term.partition(":")
        name = name.strip().lower()
        if name == "anticanonical":
            d = anticanonical_divisor(fan)
        elif name == "canonical":
            d = canonical_divisor(fan)
        elif name == "prime":
            d = prime_divisor(fan, int(idx))
        elif name in ("exceptional", "pullback") and bmap is None:
            raise ValueError(f"{name!r} needs --blowup-center")
        elif name == "exceptional":
            d = exceptional_divisor(bmap)
        elif name == "pullback":
            d = pullback(bmap, prime_divisor(base, int(idx)))
        else:
            raise ValueError(f"unknown divisor term {term!r}")
        total = total + coef * d
    return total


def _svg(polytope, path):
    verts = polytope.vertices()
    if polytope.dim != 2:
        raise ValueError("SVG output is only available for 2-d polytopes")
    pts = [(float(x), float(y)) for x, y in verts]
    if pts:
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    xs = [p[0] for p in pts] or [0.0]
    ys = [p[1] for p in pts] or [0.0]
    pad = 0.5
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad
    poly = " ".join(f"{x},{-y}" for x, y in pts)
    with open(path, "w") as fh:
        fh.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {-(y0 + h)} {w} {h}">\n'
            f'  <polygon points="{poly}" fill="#9cc3e6" stroke="black" stroke-width="0.02"/>\n'
            "</svg>\n"
        )


def cmd_fan_validate(args):
    fan = load_fan(args.fan)
    return {"valid": True, "smooth": is_smooth(fan), "fan": fan.to_dict()}


def cmd_polytope(args):
    base, bmap = _working(args)
    d = parse_divisor(args.divisor, base, bmap)
    p = polytope_of_divisor(d)
    if args.scale != 1:
        p = p.scale(args.scale)
    if args.svg:
        _svg(p, args.svg)
    return {
        "divisor": d.to_dict(),
        "halfspaces": [{"normal": list(h.normal), "offset": format_rational(h.offset)} for h in p.halfspaces],
        "vertices": [[format_rational(c) for c in v] for v in p.vertices()],
        "volume": format_rational(p.volume()),
        "volume_divisor": format_rational(volume_of_divisor(d) * args.scale ** d.fan.dim),
        "lattice_points": len(p.lattice_points()),
    }


def cmd_blowup(args):
    fan = load_fan(args.fan)
    return star_subdivision(fan, _indices(args.center)).to_dict()


def cmd_beta(args):
    base, bmap = _working(args)
    return beta(parse_divisor(args.L, base, bmap), parse_divisor(args.F, base, bmap)).to_dict()


def cmd_gamma_eff(args):
    base, bmap = _working(args)
    g = pseudoeffective_threshold(parse_divisor(args.L, base, bmap), parse_divisor(args.F, base, bmap))
    return {"gamma_eff": format_rational(g)}


def _decomposition(text, fan):
    if text in (None, "primes"):
        return prime_decomposition(fan)
    return AnticanonicalDecomposition.from_dict(fan, _load_json(text))


def cmd_gcd_bound(args):
    base, bmap = _working(args)
    if bmap is None:
        raise ValueError("gcd-bound needs --blowup-center")
    rep = bound_report(bmap, _decomposition(args.decomposition, base), parse_rational(args.epsilon),
                       beta_lower_bound=args.beta_lower_bound)
    return rep.to_dict()


def cmd_gcd_check(args):
    fan = standard_fan("P1xP1")
    bmap = star_subdivision(fan, (1, 2))
    rep = bound_report(bmap, prime_decomposition(fan), parse_rational(args.epsilon))
    if args.delta is not None:
        delta = parse_rational(args.delta)
        ch, cw = bound_coefficients(delta, rep.epsilon, rep.r)
        rep = replace(rep, delta=delta, coeff_height=ch, coeff_weil=cw)
    places = parse_places(args.places)
    sweep = sweep_inequality(rep, places, args.grid, seed=args.seed, n_random=args.random)
    if args.csv:
        sweep.write_csv(args.csv)
    out = sweep.to_dict()
    if args.slope:
        sides = tuple(int(s) for s in args.slope.split(","))
        slope, maxima = max_excess_slope(rep, places, sides, seed=args.seed)
        out["slope_float"] = slope
        out["slope_sides"] = list(sides)
        out["slope_maxima_float"] = maxima
    return out


def cmd_examples(args):
    kwargs = {}
    if args.name == "p1xp1-point":
        kwargs = {"a": parse_rational(args.a), "b": parse_rational(args.b)}
    elif args.name == "p2-point" and args.a_values:
        kwargs = {"a_values": tuple(parse_rational(a) for a in args.a_values.split(","))}
    return run_example(args.name, **kwargs)


def build_parser():
    parser = argparse.ArgumentParser(prog="toricgcd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fan_arg(p):
        p.add_argument("--fan", required=True, help="fan JSON file/string or a standard name (p2, p1xp1, F2)")

    p = sub.add_parser("fan-validate")
    fan_arg(p)
    p.set_defaults(func=cmd_fan_validate)

    p = sub.add_parser("polytope")
    fan_arg(p)
    p.add_argument("--blowup-center")
    p.add_argument("--divisor", default="anticanonical")
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("blowup")
    fan_arg(p)
    p.add_argument("--center", required=True, help="comma-separated ray indices, e.g. 1,2")
    p.set_defaults(func=cmd_blowup)

    for name, func in (("beta", cmd_beta), ("gamma-eff", cmd_gamma_eff)):
        p = sub.add_parser(name)
        fan_arg(p)
        p.add_argument("--blowup-center")
        p.add_argument("--L", required=True)
        p.add_argument("--F", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("gcd-bound")
    fan_arg(p)
    p.add_argument("--blowup-center", required=True)
    p.add_argument("--decomposition", default="primes")
    p.add_argument("--epsilon", default="1/100")
    p.add_argument("--beta-lower-bound", type=parse_rational)
    p.set_defaults(func=cmd_gcd_bound)

    p = sub.add_parser("gcd-check")
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--epsilon", default="1/100")
    p.add_argument("--places", default="inf")
    p.add_argument("--delta", help="override delta (default: computed for Bl_pt(P1 x P1))")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=0, help="extra seeded rational samples")
    p.add_argument("--csv", help="write per-sample rows here")
    p.add_argument("--slope", help="comma-separated grid sides for the max-excess slope, e.g. 50,100,200")
    p.set_defaults(func=cmd_gcd_check)

    p = sub.add_parser("examples")
    p.add_argument("name", help="one of: " + ", ".join(sorted(EXAMPLES)))
    p.add_argument("--a", default="1")
    p.add_argument("--b", default="1")
    p.add_argument("--a-values", help="comma-separated values of a for p2-point")
    p.set_defaults(func=cmd_examples)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except ToricError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return 1
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        err = {"code": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    sys.stdout.write(json.dumps(out, sort_keys=True) + "\n")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
