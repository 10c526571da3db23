"""
Slope functions, central charge and discriminants for tilt stability.

All quantities are evaluated at a TiltParameter (alpha^2, beta), where
omega = alpha H and B = beta H. Odd powers of alpha never appear: the tilt
slope is handled through its rescaled form

    nu_hat = alpha * nu = (t2 - (alpha^2/6) t0) / t1,

which orders objects exactly like nu because alpha > 0. Likewise the
imaginary part of the central charge is stored without its factor alpha.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Tuple, Union

from llamatilt.chern import ChernVector, PolarizedGeometry, TiltParameter, subtract_points, twist_by_B
from llamatilt.utils import DomainError, Rational, as_rational

# Set up module-level logger
logger = logging.getLogger(__name__)


@total_ordering
@dataclass(frozen=True, eq=False)
class SlopeValue:
    """
    A rational slope, or +infinity when ``value`` is None.

    Every finite value is smaller than infinity; finite values compare as
    rationals. Plain ints and Fractions compare as finite slopes.
    """

    value: Optional[Fraction] = None

    @classmethod
    def finite(cls, value: Rational) -> "SlopeValue":
        return cls(as_rational(value))

    @classmethod
    def infinite(cls) -> "SlopeValue":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @staticmethod
    def _coerce(other: object) -> Optional["SlopeValue"]:
        if isinstance(other, SlopeValue):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SlopeValue(Fraction(other))
        return None

    def __eq__(self, other: object) -> bool:
        other_slope = self._coerce(other)
        if other_slope is None:
            return NotImplemented
        return self.value == other_slope.value

    def __lt__(self, other: object) -> bool:
        other_slope = self._coerce(other)
        if other_slope is None:
            return NotImplemented
        if self.is_infinite:
            return False
        if other_slope.is_infinite:
            return True
        return self.value < other_slope.value

    def __hash__(self) -> int:
        # finite slopes hash like the rationals they equal
        if self.is_infinite:
            return hash(("SlopeValue", None))
        return hash(self.value)

    def __str__(self) -> str:
        return "+inf" if self.is_infinite else str(self.value)

    @classmethod
    def parse(cls, text: str) -> "SlopeValue":
        if text.strip() in ("+inf", "inf"):
            return cls.infinite()
        return cls(as_rational(text))


@dataclass(frozen=True)
class CentralChargeValue:
    """
    Z = re + i * alpha * im_coef.

    re = -D t3 + (alpha^2 D / 2) t1 and im_coef = D t2 - (alpha^2 D / 6) t0.
    Since alpha > 0, Im Z has the sign of im_coef.
    """

    re: Fraction
    im_coef: Fraction

    def __add__(self, other: "CentralChargeValue") -> "CentralChargeValue":
        return CentralChargeValue(self.re + other.re, self.im_coef + other.im_coef)

    def __neg__(self) -> "CentralChargeValue":
        return CentralChargeValue(-self.re, -self.im_coef)


class BmtForm(str, Enum):
    """Which ch_3 inequality to evaluate."""

    STRONG = "strong"
    WEAK = "weak"


@dataclass(frozen=True)
class BmtResult:
    """
    Verdict of a ch_3 inequality.

    ``margin`` is right-hand side minus left-hand side. Tilt-stability of the
    input is never verified; it is listed under ``assumed``.
    """

    form: BmtForm
    satisfied: bool
    margin: Fraction
    nu_hat_zero: bool
    checked: Tuple[str, ...] = ()
    assumed: Tuple[str, ...] = ("input is tilt-stable",)


@dataclass(frozen=True)
class PositivityResult:
    delta_bar_ok: bool
    value: Fraction


class Ordering(str, Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


def _require_nonzero(v: ChernVector) -> None:
    if v.is_zero():
        raise DomainError("Slope functions are undefined on the zero vector", field="v")


def twisted(v: ChernVector, p: TiltParameter) -> ChernVector:
    """Twisted character (t0, t1, t2, t3) at the parameter's beta."""
    return twist_by_B(v, p.beta)


def slope_mu(v: ChernVector, p: TiltParameter, geom: PolarizedGeometry) -> SlopeValue:
    """mu = omega^2 tch_1 / tch_0 = alpha^2 D t1 / t0, infinite for torsion classes."""
    _require_nonzero(v)
    t = twisted(v, p)
    if t.v0 == 0:
        return SlopeValue.infinite()
    return SlopeValue(p.alpha_sq * geom.degree_D * t.v1 / t.v0)


def tilt_slope_numerator(v: ChernVector, p: TiltParameter) -> Fraction:
    """t2 - (alpha^2/6) t0, the numerator of nu_hat (and of Im Z up to D)."""
    t = twisted(v, p)
    return t.v2 - p.alpha_sq / 6 * t.v0


def slope_nu_hat(
    v: ChernVector,
    p: TiltParameter,
    geom: Optional[PolarizedGeometry] = None
) -> SlopeValue:
    """Rescaled tilt slope nu_hat = alpha * nu; infinite when t1 = 0.

    Does not depend on v3, nor on D.
    """
    _require_nonzero(v)
    t = twisted(v, p)
    if t.v1 == 0:
        return SlopeValue.infinite()
    return SlopeValue(tilt_slope_numerator(v, p) / t.v1)


def central_charge(v: ChernVector, p: TiltParameter, geom: PolarizedGeometry) -> CentralChargeValue:
    """Z(v) = (-tch_3 + (omega^2/2) tch_1) + i (omega tch_2 - (omega^3/6) tch_0)."""
    t = twisted(v, p)
    D = geom.degree_D
    return CentralChargeValue(
        re=-D * t.v3 + p.alpha_sq * D / 2 * t.v1,
        im_coef=D * tilt_slope_numerator(v, p),
    )


def phase_one_indicator(v: ChernVector, p: TiltParameter, geom: PolarizedGeometry) -> bool:
    """True iff Z(v) lies on the negative real axis.

    Objects with Im Z < 0 are outside the heart; the answer there is False.
    """
    _require_nonzero(v)
    z = central_charge(v, p, geom)
    return z.im_coef == 0 and z.re < 0


def discriminant_delta(v: ChernVector, p: TiltParameter, geom: PolarizedGeometry) -> Fraction:
    """The alpha-free coefficient D (t1^2 - 2 t0 t2) of omega.Delta.

    omega.Delta = alpha * D (v1^2 - 2 v0 v2); the twisted and untwisted forms agree.
    """
    t = twisted(v, p)
    return geom.degree_D * (t.v1 * t.v1 - 2 * t.v0 * t.v2)


def _delta_bar_closed_form(v: ChernVector, p: TiltParameter, geom: PolarizedGeometry) -> Fraction:
    D = geom.degree_D
    return p.alpha_sq ** 2 * D * D * (v.v1 * v.v1 - 2 * v.v0 * v.v2)


def discriminant_delta_bar_definitional(
    v: ChernVector,
    p: TiltParameter,
    geom: PolarizedGeometry
) -> Fraction:
    """(omega^2 tch_1)^2 - 2 (omega^3 tch_0)(omega tch_2) on twisted components."""
    t = twisted(v, p)
    D = geom.degree_D
    omega2_t1 = p.alpha_sq * D * t.v1
    # omega^3 tch_0 * omega tch_2 = alpha^4 D^2 t0 t2
    omega3_t0_omega_t2 = p.alpha_sq ** 2 * D * D * t.v0 * t.v2
    return omega2_t1 * omega2_t1 - 2 * omega3_t0_omega_t2


def discriminant_delta_bar(v: ChernVector, p: TiltParameter, geom: PolarizedGeometry) -> Fraction:
    """Delta_bar = alpha^4 D^2 (v1^2 - 2 v0 v2), independent of beta."""
    definitional = discriminant_delta_bar_definitional(v, p, geom)
    closed = _delta_bar_closed_form(v, p, geom)
    if definitional != closed:
        raise ArithmeticError(f"Delta_bar mismatch for {v}: {definitional} != {closed}")
    return closed


def omega_delta_volume(v: ChernVector, p: TiltParameter, geom: PolarizedGeometry) -> Fraction:
    """(omega.Delta) * omega^3 = alpha^4 D^2 (v1^2 - 2 v0 v2)."""
    return discriminant_delta(v, p, geom) * p.alpha_sq ** 2 * geom.degree_D


def bmt_check(
    v: ChernVector,
    p: TiltParameter,
    geom: PolarizedGeometry,
    form: Union[BmtForm, str] = BmtForm.STRONG
) -> BmtResult:
    """
    Evaluate t3 <= (alpha^2/18) t1 (strong) or t3 < (alpha^2/2) t1 (weak).

    The inequality is evaluated for any input. Whether nu_hat(v) = 0 holds is
    checked and reported, tilt-stability is only assumed.
    """
    form = BmtForm(form)
    t = twisted(v, p)
    if form is BmtForm.STRONG:
        margin = p.alpha_sq / 18 * t.v1 - t.v3
        satisfied = margin >= 0
    else:
        margin = p.alpha_sq / 2 * t.v1 - t.v3
        satisfied = margin > 0
    nu_zero = not v.is_zero() and slope_nu_hat(v, p, geom) == 0
    checked = ("nu_hat = 0",) if nu_zero else ()
    assumed: Tuple[str, ...] = ("input is tilt-stable",)
    if not nu_zero:
        assumed += ("nu_hat = 0 (does not hold numerically)",)
    return BmtResult(form, satisfied, margin, nu_zero, checked, assumed)


def positivity_check(v: ChernVector, p: TiltParameter, geom: PolarizedGeometry) -> PositivityResult:
    """Delta_bar >= 0, necessary for tilt-semistability."""
    value = discriminant_delta_bar(v, p, geom)
    return PositivityResult(value >= 0, value)


def compute_c(p: TiltParameter, geom: PolarizedGeometry) -> Fraction:
    """
    Minimal positive omega^2 tch_1 over integral classes: alpha^2 D / q.

    q is the lowest-terms denominator of beta; assumes v0, v1 range over Z.
    """
    return p.alpha_sq * geom.degree_D / p.beta.denominator


def large_m_compare(
    vA: ChernVector,
    vC: ChernVector,
    beta: Rational,
    geom: PolarizedGeometry
) -> Ordering:
    """
    Eventual order of nu_{m omega, B}(A) and nu_{m omega, B}(C) as m grows.

    nu_hat at alpha^2 = A is t2/t1 - A t0 / (6 t1), so the comparison is
    lexicographic in (-t0/t1, t2/t1).

    Raises:
        DomainError: If t1 of either input vanishes.
    """
    p = TiltParameter(Fraction(1), as_rational(beta))
    tA, tC = twisted(vA, p), twisted(vC, p)
    if tA.v1 == 0 or tC.v1 == 0:
        raise DomainError(
            "large_m_compare needs omega^2 tch_1 != 0 for both inputs",
            field="v",
            hypothesis="tch_1(A), tch_1(C) != 0"
        )
    key_a = (-tA.v0 / tA.v1, tA.v2 / tA.v1)
    key_c = (-tC.v0 / tC.v1, tC.v2 / tC.v1)
    if key_a < key_c:
        return Ordering.LESS
    if key_a > key_c:
        return Ordering.GREATER
    return Ordering.EQUAL


def destabilizer_slope_bound(delta_t1: Rational, p: TiltParameter, geom: PolarizedGeometry) -> Fraction:
    """
    Upper bound -delta/2 on nu_hat of positive-rank sheaf subobjects.

    In nu units the bound is -omega^2 delta / (2 omega^3) = -delta / (2 alpha);
    multiplying by alpha gives -delta/2. It holds for every w with w0 >= 1,
    0 < t1(w) <= -delta and Delta_bar(w) >= 0.

    Raises:
        DomainError: If delta_t1 >= 0.
    """
    delta_t1 = as_rational(delta_t1)
    if delta_t1 >= 0:
        raise DomainError(
            f"Slope bound needs tch_1(E) < 0, got {delta_t1}",
            field="delta_t1",
            hypothesis="omega^2 tch_1(E) < 0"
        )
    return -delta_t1 / 2


@dataclass(frozen=True)
class Codim3Modification:
    """Effect of passing to the kernel of E -> Q with Q zero-dimensional."""

    kernel: ChernVector
    nu_hat_unchanged: bool
    margin_before: Fraction
    margin_after: Fraction
    inherits_inequality: bool


def codim3_modification_check(
    v: ChernVector,
    length: Rational,
    p: TiltParameter,
    geom: PolarizedGeometry
) -> Codim3Modification:
    """
    Compare v with the kernel of a surjection onto a length-``length`` sheaf.

    nu_hat ignores ch_3, so it is unchanged; the strong margin grows by
    length/D, so the kernel satisfies the strong inequality whenever v does.
    """
    kernel = subtract_points(v, length, geom)
    before = bmt_check(v, p, geom, BmtForm.STRONG)
    after = bmt_check(kernel, p, geom, BmtForm.STRONG)
    return Codim3Modification(
        kernel=kernel,
        nu_hat_unchanged=slope_nu_hat(kernel, p, geom) == slope_nu_hat(v, p, geom),
        margin_before=before.margin,
        margin_after=after.margin,
        inherits_inequality=(not before.satisfied) or after.satisfied,
    )
