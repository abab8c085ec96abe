"""End-to-end reproductions of the classical worked examples.

Each function returns ``{"example", "computed", "expected", "match"}`` with
every intermediate quantity as a rational string, so the output can be
diffed against golden files.
"""

from fractions import Fraction

from .blowup import exceptional_divisor, pullback, star_subdivision
from .errors import UnknownExample
from .gcd_bound import bound_coefficients, bound_report, prime_decomposition
from .lattice_fan import standard_fan
from .rational import format_rational as fmt
from .toric_divisor import anticanonical_divisor, polytope_of_divisor, prime_divisor, volume_of_divisor
from .volume_beta import beta

__all__ = ["p2_point", "p1xp1_point", "p1xp1_gcd", "run_example", "EXAMPLES"]


def _pieces(pw):
    return pw.to_list()


def _piece(lo, hi, *coeffs):
    return {"interval": [fmt(lo), fmt(hi)], "coeffs": [fmt(c) for c in coeffs]}


def p2_point(a_values=(1, 2, 3)):
    """Blow-up of P2 at the fixed point of cone(v1, v3); beta(O(a), E) = 2a/3."""
    fan = standard_fan("P2")
    bmap = star_subdivision(fan, (0, 2))
    E = exceptional_divisor(bmap)
    pulled = [pullback(bmap, prime_divisor(fan, i)).coeffs for i in range(3)]
    computed = {
        "new_ray": list(bmap.new_ray),
        "pullbacks": [[fmt(c) for c in p] for p in pulled],
        "cases": [],
    }
    expected = {
        "new_ray": [0, -1],
        # index 0 is E, index i is D_i'
        "pullbacks": [["1", "1", "0", "0"], ["0", "0", "1", "0"], ["1", "0", "0", "1"]],
        "cases": [],
    }
    for a in a_values:
        a = Fraction(a)
        L = pullback(bmap, a * prime_divisor(fan, 1))
        res = beta(L, E)
        computed["cases"].append({
            "a": fmt(a),
            "area_P_L": fmt(polytope_of_divisor(a * prime_divisor(fan, 1)).volume()),
            "gamma_eff": fmt(res.gamma_eff),
            "pieces": _pieces(res.volume_function),
            "beta": fmt(res.beta),
        })
        expected["cases"].append({
            "a": fmt(a),
            "area_P_L": fmt(a * a / 2),
            "gamma_eff": fmt(a),
            "pieces": [_piece(0, a, a * a / 2, 0, Fraction(-1, 2))],
            "beta": fmt(2 * a / 3),
        })
    return {"example": "p2-point", "computed": computed, "expected": expected,
            "match": computed == expected}


def _three_case(a, b):
    """Normalized volume f(t) for a*pi^*D3 + b*pi^*D4 along E, as pieces."""
    ab = a * b
    pieces = [_piece(0, a, 1, 0, -1 / (2 * ab))]
    if b > a:
        pieces.append(_piece(a, b, (ab + a * a / 2) / ab, -a / ab))
    s = a + b
    pieces.append(_piece(b, s, s * s / (2 * ab), -s / ab, 1 / (2 * ab)))
    return pieces


def p1xp1_point(a=1, b=1):
    """Blow-up of P1 x P1 at the fixed point of cone(v2, v3); beta = (a + b)/2."""
    a, b = Fraction(a), Fraction(b)
    if a > b:
        a, b = b, a
    fan = standard_fan("P1xP1")
    bmap = star_subdivision(fan, (1, 2))
    L = pullback(bmap, a * prime_divisor(fan, 2) + b * prime_divisor(fan, 3))
    res = beta(L, exceptional_divisor(bmap))
    computed = {
        "a": fmt(a), "b": fmt(b),
        "pullback": [fmt(c) for c in L.coeffs],
        "area_P_L": fmt(res.volume_L),
        "gamma_eff": fmt(res.gamma_eff),
        "normalized_pieces": _pieces(res.volume_function.scaled(1 / res.volume_L)),
        "beta": fmt(res.beta),
    }
    expected = {
        "a": fmt(a), "b": fmt(b),
        "pullback": [fmt(a), "0", "0", fmt(a), fmt(b)],
        "area_P_L": fmt(a * b),
        "gamma_eff": fmt(a + b),
        "normalized_pieces": _three_case(a, b),
        "beta": fmt((a + b) / 2),
    }
    return {"example": "p1xp1-point", "computed": computed, "expected": expected,
            "match": computed == expected}


def p1xp1_gcd(epsilon=Fraction(1, 100)):
    """The anticanonical computation on Bl_pt(P1 x P1) and the resulting gcd bound."""
    fan = standard_fan("P1xP1")
    bmap = star_subdivision(fan, (1, 2))
    anti = anticanonical_divisor(bmap.source_fan)
    p = polytope_of_divisor(anti)
    report = bound_report(bmap, prime_decomposition(fan), epsilon, beta_lower_bound=Fraction(7, 8))
    betas = []
    for i in range(4):
        res = beta(anti, pullback(bmap, prime_divisor(fan, i)))
        betas.append({"i": i, "gamma_eff": fmt(res.gamma_eff), "pieces": _pieces(res.volume_function),
                      "beta": fmt(res.beta)})
    ch0, _ = bound_coefficients(report.delta, 0, report.r)
    computed = {
        "halfspaces": [{"normal": list(h.normal), "offset": fmt(h.offset)} for h in p.halfspaces],
        "area_P_antiK": fmt(p.volume()),
        "vol_antiK": fmt(volume_of_divisor(anti)),
        "betas": betas,
        "beta_lower_bound_7_8": report.beta_lower_bound_ok,
        "gamma": fmt(report.gamma),
        "delta": fmt(report.delta),
        "coeff_height_eps0": fmt(ch0),
        "report": report.to_dict(),
    }
    pieces = [_piece(0, 1, Fraction(7, 2), -2), _piece(1, 2, 4, -3, Fraction(1, 2))]
    expected = {
        "halfspaces": [{"normal": n, "offset": "-1"} for n in ([1, 1], [-1, 0], [0, 1], [1, 0], [0, -1])],
        "area_P_antiK": "7/2",
        "vol_antiK": "7",
        "betas": [{"i": i, "gamma_eff": "2", "pieces": pieces, "beta": "19/21"} for i in range(4)],
        "beta_lower_bound_7_8": True,
        "gamma": "21/19",
        "delta": "2/19",
        "coeff_height_eps0": "2/21",
    }
    match = all(computed[k] == v for k, v in expected.items())
    return {"example": "p1xp1-gcd", "computed": computed, "expected": expected, "match": match}


EXAMPLES = {"p2-point": p2_point, "p1xp1-point": p1xp1_point, "p1xp1-gcd": p1xp1_gcd}


def run_example(name, **kwargs):
    try:
        fn = EXAMPLES[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}", known=sorted(EXAMPLES)) from None
    return fn(**kwargs)
