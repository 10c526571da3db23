"""
Numerical walls in the (beta, alpha^2) half-plane.

The wall of v against w is the locus where nu_hat(v) = nu_hat(w). After
clearing denominators it is

    (t2(v) - A v0/6) t1(w) - (t2(w) - A w0/6) t1(v) = 0,    A = alpha^2,

with t_i the beta-twisted components. The beta^3 terms cancel, the
coefficient of A is the constant (w0 v1 - v0 w1)/6 and the coefficient of
beta^2 is three times that constant. So the wall is a graph A = f(beta)
unless that constant vanishes, in which case it is at most one vertical
line.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Tuple

import sympy as sp

from llamatilt.chern import ChernVector, PolarizedGeometry, TiltParameter
from llamatilt.tilt import slope_nu_hat
from llamatilt.utils import DomainError, Rational, as_rational

# Set up module-level logger
logger = logging.getLogger(__name__)

A, BETA = sp.symbols("A beta")


def _to_sympy(value: Fraction) -> sp.Rational:
    return sp.Rational(value.numerator, value.denominator)


def _to_fraction(value: sp.Rational) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _twisted_symbolic(v: ChernVector) -> Tuple[sp.Expr, sp.Expr, sp.Expr]:
    v0, v1, v2 = (_to_sympy(x) for x in (v.v0, v.v1, v.v2))
    return v0, v1 - BETA * v0, v2 - BETA * v1 + BETA ** 2 * v0 / 2


def _normalize(poly: sp.Poly) -> sp.Poly:
    """Scale to integer coefficients with content 1 and positive lex-leading coefficient."""
    terms = [(monom, _to_fraction(coeff)) for monom, coeff in poly.terms()]
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for _, c in terms), 1)
    integers = [(monom, int(c * lcm)) for monom, c in terms]
    content = reduce(math.gcd, (abs(c) for _, c in integers), 0)
    leading = max(integers, key=lambda term: term[0])[1]
    sign = 1 if leading > 0 else -1
    return sp.Poly.from_dict(
        {monom: sign * c // content for monom, c in integers},
        A, BETA,
        domain=sp.ZZ
    )


@dataclass(frozen=True)
class WallEquation:
    """
    Normalized wall polynomial in (A, beta) with integer coefficients.

    ``poly`` has content 1 and a positive leading coefficient in lex order
    with A > beta.
    """

    v: ChernVector
    w: ChernVector
    poly: sp.Poly

    @property
    def a_coefficient(self) -> Fraction:
        """Coefficient of A (constant in beta)."""
        return _to_fraction(self.poly.coeff_monomial(A))

    @property
    def vertical(self) -> bool:
        return self.a_coefficient == 0

    def constant_part(self) -> sp.Poly:
        """The wall polynomial at A = 0, as a polynomial in beta."""
        return sp.Poly(self.poly.as_expr().subs(A, 0), BETA, domain=sp.QQ)

    def terms(self) -> List[Tuple[Tuple[int, int], Fraction]]:
        """Terms ((deg_A, deg_beta), coefficient), highest first."""
        return [(monom, _to_fraction(coeff)) for monom, coeff in self.poly.terms()]

    def evaluate(self, alpha_sq: Rational, beta: Rational) -> Fraction:
        value = self.poly.eval({A: _to_sympy(as_rational(alpha_sq)), BETA: _to_sympy(as_rational(beta))})
        return _to_fraction(value)

    def __str__(self) -> str:
        return sp.sstr(self.poly.as_expr())


def wall_equation(v: ChernVector, w: ChernVector, geom: Optional[PolarizedGeometry] = None) -> WallEquation:
    """
    Build the normalized wall of v against w.

    The wall does not depend on D: both slopes are D-free.

    Raises:
        DomainError: If (v0, v1, v2) and (w0, w1, w2) are proportional, in
            which case the two slopes agree everywhere.
    """
    v0, t1_v, t2_v = _twisted_symbolic(v)
    w0, t1_w, t2_w = _twisted_symbolic(w)
    expr = sp.expand((t2_v - A * v0 / 6) * t1_w - (t2_w - A * w0 / 6) * t1_v)
    poly = sp.Poly(expr, A, BETA, domain=sp.QQ)
    if poly.is_zero:
        raise DomainError(
            f"{v} and {w} have proportional (ch_0, ch_1, ch_2); their slopes never differ",
            field="w",
            hypothesis="v and w not proportional"
        )
    normalized = _normalize(poly)
    logger.debug(f"Wall of {v} against {w}: {sp.sstr(normalized.as_expr())} = 0")
    return WallEquation(v, w, normalized)


@dataclass(frozen=True)
class WallPoint:
    """
    A point of the wall.

    On a vertical wall ``alpha_sq`` is None: every alpha^2 > 0 lies on it.
    """

    beta: Fraction
    alpha_sq: Optional[Fraction]

    @property
    def vertical(self) -> bool:
        return self.alpha_sq is None


def sample_betas(beta_min: Fraction, beta_max: Fraction, count: int) -> List[Fraction]:
    """count evenly spaced values from beta_min to beta_max; the midpoint when count = 1."""
    if count == 1:
        return [(beta_min + beta_max) / 2]
    step = (beta_max - beta_min) / (count - 1)
    return [beta_min + k * step for k in range(count)]


def _slopes_agree(eq: WallEquation, alpha_sq: Fraction, beta: Fraction) -> bool:
    p = TiltParameter(alpha_sq, beta)
    return slope_nu_hat(eq.v, p) == slope_nu_hat(eq.w, p)


def _vertical_points(eq: WallEquation, beta_min: Fraction, beta_max: Fraction) -> List[WallPoint]:
    """The beta-line of a vertical wall, when it lies in [beta_min, beta_max]."""
    constant = eq.constant_part()
    # a nonzero constant means the slopes never agree
    if constant.degree() < 1:
        return []
    c1, c0 = (_to_fraction(c) for c in constant.all_coeffs())
    root = -c0 / c1
    if not beta_min <= root <= beta_max:
        return []
    return [WallPoint(root, None)]


def wall_sample(
    eq: WallEquation,
    beta_min: Rational,
    beta_max: Rational,
    count: int
) -> List[WallPoint]:
    """
    Sample exact points of a wall over a beta range.

    For a graph wall, alpha^2 is solved from the linear equation at each of
    ``count`` evenly spaced beta values; points with alpha^2 <= 0, or where
    either slope is infinite, are omitted. A vertical wall yields its beta
    line when it lies inside the range.

    Raises:
        DomainError: If count < 1 or beta_min > beta_max.
    """
    beta_min, beta_max = as_rational(beta_min), as_rational(beta_max)
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}", field="count")
    if beta_min > beta_max:
        raise DomainError(f"Empty beta range [{beta_min}, {beta_max}]", field="beta_min")
    if eq.vertical:
        return _vertical_points(eq, beta_min, beta_max)

    a1 = eq.a_coefficient
    constant = eq.constant_part()
    points = []
    for beta in sample_betas(beta_min, beta_max, int(count)):
        alpha_sq = -_to_fraction(constant.eval(_to_sympy(beta))) / a1
        if alpha_sq <= 0:
            continue
        if not _slopes_agree(eq, alpha_sq, beta):
            logger.debug(f"Dropping ({beta}, {alpha_sq}): a slope is infinite there")
            continue
        points.append(WallPoint(beta, alpha_sq))
    return points
