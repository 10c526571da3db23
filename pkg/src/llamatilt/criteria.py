"""
Stability criteria as checkable predicates.

This module turns the numerical content of the line-bundle thresholds, the
twice-minimal-ch_1 criteria, the twisted ideal sheaf analysis and the
unstable rank-three family on P^3 into functions returning structured
reports. Verdicts are conditional on the hypotheses each report lists.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from llamatilt.chern import (
    P3,
    ChernVector,
    CurveData,
    PolarizedGeometry,
    TiltParameter,
    dual,
    from_chern_classes,
    ideal_sheaf_of_points,
    shift,
    twist_by_line_bundle,
    twisted_ideal_sheaf,
)
from llamatilt.tilt import (
    BmtForm,
    CentralChargeValue,
    bmt_check,
    central_charge,
    compute_c,
    discriminant_delta_bar,
    phase_one_indicator,
    positivity_check,
    slope_mu,
    slope_nu_hat,
    twisted,
)
from llamatilt.utils import DomainError, Rational, as_rational

# Set up module-level logger
logger = logging.getLogger(__name__)

STABLE = "stable"
UNKNOWN = "unknown"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LineBundleThresholds:
    """
    Values of m^2 (omega replaced by m omega) attached to O(k)[1], k < 0.

    Attributes:
        m_sq_nu_zero: nu(O(k)[1]) = 0 exactly at this m^2.
        m_sq_stability: O(k)[1] is tilt-stable at nu = 0 once m^2 reaches this.
        m_sq_weak_conj: The weak ch_3 inequality holds iff m^2 exceeds this.
    """

    k: Fraction
    m_sq_nu_zero: Fraction
    m_sq_stability: Fraction
    m_sq_weak_conj: Fraction

    def stable_at(self, m_sq: Rational) -> bool:
        return as_rational(m_sq) >= self.m_sq_stability


def line_bundle_thresholds(
    k: Rational,
    p: TiltParameter,
    geom: PolarizedGeometry
) -> LineBundleThresholds:
    """
    Thresholds for E = O(kH) with d = c_1(E).omega^2 < 0 and B = 0.

    With omega = alpha H: 3 c_1^2.omega / omega^3 = 3k^2/alpha^2,
    3 d^2 / (omega^3)^2 = 3k^2/alpha^2 and c_1^3 / (3d) = k^2/(3 alpha^2).

    Raises:
        DomainError: If k >= 0 or beta != 0.
    """
    k = as_rational(k)
    if k >= 0:
        raise DomainError(
            f"Line bundle thresholds need k < 0, got {k}",
            field="k",
            hypothesis="d = c_1(E) omega^2 < 0"
        )
    if p.beta != 0:
        raise DomainError(
            f"Line bundle thresholds need beta = 0, got {p.beta}",
            field="beta",
            hypothesis="B = 0"
        )
    D = geom.degree_D
    d = k * p.alpha_sq * D                      # c_1(E).omega^2
    omega3_sq = p.alpha_sq ** 3 * D * D        # (omega^3)^2
    c1_sq_omega_over_omega3 = k * k * D / (p.alpha_sq * D)
    c1_cubed = k ** 3 * D
    return LineBundleThresholds(
        k=k,
        m_sq_nu_zero=3 * c1_sq_omega_over_omega3,
        m_sq_stability=3 * d * d / omega3_sq,
        m_sq_weak_conj=c1_cubed / (3 * d),
    )


def line_bundle_stable_at(
    k: Rational,
    m_sq: Rational,
    p: TiltParameter,
    geom: PolarizedGeometry
) -> bool:
    """Sufficient condition for O(k)[1] to be tilt-stable at a nu = 0 parameter."""
    return line_bundle_thresholds(k, p, geom).stable_at(m_sq)


@dataclass(frozen=True)
class TwoCReport:
    """
    Outcome of the two sufficient criteria for objects with omega^2 tch_1 = 2c.

    ``criterion1`` is None when no maximal slope is known.
    """

    criterion1: Optional[bool]
    criterion2: bool
    preconditions_ok: bool
    c: Fraction
    omega2_tch1: Fraction
    nu_hat_zero: bool
    torsion_free_rank: bool
    twice_minimal: bool
    mu_max: Optional[Fraction] = None
    mu_max_sq: Optional[Fraction] = None


def two_c_stability_check(
    v: ChernVector,
    p: TiltParameter,
    geom: PolarizedGeometry,
    mu_max_sq: Optional[Rational] = None,
    mu_max: Optional[Rational] = None
) -> TwoCReport:
    """
    Evaluate both twice-minimal criteria.

    criterion1: mu_max < omega^3/sqrt(3), decided as 3 mu_max^2 < alpha^6 D^2
    (or mu_max <= 0). For rank one classes mu_max defaults to mu(v).
    criterion2: alpha^2 > 3/q^2 where q is the denominator of beta.
    Precondition failures are reported, not raised.
    """
    D = geom.degree_D
    t = twisted(v, p)
    c = compute_c(p, geom)
    omega2_tch1 = p.alpha_sq * D * t.v1
    nu_zero = not v.is_zero() and slope_nu_hat(v, p, geom) == 0
    rank_ok = v.v0 >= 1
    twice_minimal = omega2_tch1 == 2 * c
    preconditions_ok = nu_zero and rank_ok and twice_minimal
    if not preconditions_ok:
        logger.debug(
            f"Two-c preconditions fail for {v}: nu_zero={nu_zero}, "
            f"rank_ok={rank_ok}, twice_minimal={twice_minimal}"
        )

    if mu_max is None and mu_max_sq is None and v.v0 == 1:
        mu_max = slope_mu(v, p, geom).value
    volume_sq = p.alpha_sq ** 3 * D * D
    criterion1: Optional[bool] = None
    if mu_max is not None:
        mu_max = as_rational(mu_max)
        criterion1 = mu_max <= 0 or 3 * mu_max * mu_max < volume_sq
    elif mu_max_sq is not None:
        mu_max_sq = as_rational(mu_max_sq)
        criterion1 = 3 * mu_max_sq < volume_sq

    q = p.beta.denominator
    criterion2 = p.alpha_sq > Fraction(3, q * q)
    return TwoCReport(
        criterion1=criterion1,
        criterion2=criterion2,
        preconditions_ok=preconditions_ok,
        c=c,
        omega2_tch1=omega2_tch1,
        nu_hat_zero=nu_zero,
        torsion_free_rank=rank_ok,
        twice_minimal=twice_minimal,
        mu_max=mu_max,
        mu_max_sq=None if mu_max_sq is None else as_rational(mu_max_sq),
    )


@dataclass(frozen=True)
class IdealTwistReport:
    """
    Analysis of E = L^2 (x) I_C with L = O(H) and B = 0.

    Genus fields are filled only for curves on a hypersurface in P^4.
    """

    m_sq: Fraction
    nu_zero_feasible: bool
    stable_flag: bool
    stability: str
    bmt_flag: Optional[bool]
    chern_E: ChernVector
    nu_hat_verified: Optional[bool] = None
    bmt_margin: Optional[Fraction] = None
    genus_bound: Optional[Fraction] = None
    genus_route_flag: Optional[bool] = None
    castelnuovo_bound: Optional[Fraction] = None
    castelnuovo_applicable: bool = False
    castelnuovo_ok: Optional[bool] = None


def ideal_sheaf_twist_report(
    curve: CurveData,
    geom: PolarizedGeometry,
    hypersurface_in_P4: bool = False
) -> IdealTwistReport:
    """
    Build the report for L^2 (x) I_C.

    m^2 = 12 - 6d/D is the unique nu = 0 value (feasible iff d < 2D),
    stability follows from d < 3D/2, the strong ch_3 inequality reduces to
    -ch_3(O_C) <= 4d/3, and on a hypersurface to g <= dD/2 - 7d/6 + 1.

    Raises:
        DomainError: For a non-positive degree or a genus inconsistent with ch3_OC.
    """
    d, D = curve.degree_d, geom.degree_D
    if d <= 0:
        raise DomainError(f"Curve degree must be positive, got {d}", field="d")
    if hypersurface_in_P4:
        curve.check_hypersurface(geom)

    m_sq = 12 - 6 * d / D
    feasible = d < 2 * D
    stable_flag = feasible and d < Fraction(3, 2) * D
    if not feasible:
        stability = INFEASIBLE
    elif stable_flag:
        stability = STABLE
    else:
        stability = UNKNOWN

    chern_E = twisted_ideal_sheaf(curve, geom, 2)
    bmt_flag = -curve.ch3_OC <= Fraction(4, 3) * d

    nu_hat_verified = None
    bmt_margin = None
    if feasible:
        p = TiltParameter(m_sq, 0)
        nu_hat_verified = slope_nu_hat(chern_E, p, geom) == 0
        bmt_margin = bmt_check(chern_E, p, geom, BmtForm.STRONG).margin

    genus_bound = None
    genus_route_flag = None
    castelnuovo_bound = None
    castelnuovo_ok = None
    castelnuovo_applicable = d <= D
    if hypersurface_in_P4 and curve.genus is not None:
        castelnuovo_bound = (d - 1) * (d - 2) / 2
        castelnuovo_ok = curve.genus <= castelnuovo_bound
        genus_bound = d * D / 2 - Fraction(7, 6) * d + 1
        genus_route_flag = curve.genus <= genus_bound
        if genus_route_flag != bmt_flag:
            raise ArithmeticError(
                f"Genus route ({genus_route_flag}) and ch_3 route ({bmt_flag}) disagree"
            )

    return IdealTwistReport(
        m_sq=m_sq,
        nu_zero_feasible=feasible,
        stable_flag=stable_flag,
        stability=stability,
        bmt_flag=bmt_flag,
        chern_E=chern_E,
        nu_hat_verified=nu_hat_verified,
        bmt_margin=bmt_margin,
        genus_bound=genus_bound,
        genus_route_flag=genus_route_flag,
        castelnuovo_bound=castelnuovo_bound,
        castelnuovo_applicable=castelnuovo_applicable,
        castelnuovo_ok=castelnuovo_ok,
    )


def miro_roig_feasible(c2: int, c3: int) -> bool:
    """c2 >= 3, c3 even and -c2^2 + c2 <= c3 <= 0."""
    return c2 >= 3 and c3 % 2 == 0 and -c2 * c2 + c2 <= c3 <= 0


@dataclass(frozen=True)
class FamilyBounds:
    """
    Closed-form c3 bounds for the rank-three family at (n, m).

    ``displayed_upper`` is -(2n^3 + 2nm^2/3) and ``derived_upper`` is
    -2n^3 + 2nm^2/3; both are strict upper bounds on c3.
    """

    n: int
    m: int
    c2: int
    lower: int
    displayed_lower: Fraction
    displayed_upper: Fraction
    derived_upper: Fraction


@dataclass(frozen=True)
class FamilyMember:
    n: int
    m: int
    c2: int
    c3: int
    chern_F: ChernVector
    nu_zero_verified: bool
    bmt_violated: bool
    bmt_margin: Fraction
    within_displayed_bound: bool


@dataclass(frozen=True)
class FamilyReport:
    bounds: FamilyBounds
    members: Tuple[FamilyMember, ...]
    displayed_c3: Tuple[int, ...]
    derived_c3: Tuple[int, ...]
    discrepancy: bool


def _check_family_parameters(n: int, m: int) -> None:
    for name, value in (("n", n), ("m", m)):
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise DomainError(f"{name} must be a positive integer, got {value!r}", field=name)
    if (n - m) % 2 != 0:
        raise DomainError(
            f"n and m must have the same parity, got n={n}, m={m}",
            field="m",
            hypothesis="n and m of the same parity"
        )
    if 3 * n * n - m * m < 6:
        raise DomainError(
            f"3n^2 - m^2 = {3 * n * n - m * m} < 6",
            field="n",
            hypothesis="3n^2 - m^2 >= 6"
        )


def family_bounds(n: int, m: int) -> FamilyBounds:
    """Bounds on c3 for c1 = 0, c2 = (3n^2 - m^2)/2."""
    _check_family_parameters(n, m)
    c2 = (3 * n * n - m * m) // 2
    return FamilyBounds(
        n=n,
        m=m,
        c2=c2,
        lower=-c2 * c2 + c2,
        displayed_lower=-Fraction(9 * n ** 4 - 6 * n * n * m * m + m ** 4 - 6 * n * n + 2 * m * m, 4),
        displayed_upper=-(2 * n ** 3 + Fraction(2 * n * m * m, 3)),
        derived_upper=-2 * n ** 3 + Fraction(2 * n * m * m, 3),
    )


def family_character(n: int, c2: int, c3: int) -> ChernVector:
    """ch(E(-n)[1]) for E of rank 3 with c1 = 0."""
    return shift(twist_by_line_bundle(from_chern_classes(3, 0, c2, c3), -n), 1)


def p3_unstable_family(n: int, m: int) -> List[FamilyMember]:
    """
    Members F = E(-n)[1] of the tilt-unstable family on P^3.

    Every even c3 in the feasibility box is tested by direct evaluation of
    ch_3(F) > (m^2/18) omega^2 ch_1(F) at alpha^2 = m^2, beta = 0, D = 1.
    Members are sorted by c3.

    Raises:
        DomainError: If (n, m) violates the family's hypotheses.
    """
    bounds = family_bounds(n, m)
    p = TiltParameter(m * m, 0)
    members = []
    for c3 in range(bounds.lower, 1, 2):
        if not miro_roig_feasible(bounds.c2, c3):
            continue
        chern_F = family_character(n, bounds.c2, c3)
        bmt = bmt_check(chern_F, p, P3, BmtForm.STRONG)
        if bmt.satisfied:
            continue
        members.append(FamilyMember(
            n=n,
            m=m,
            c2=bounds.c2,
            c3=c3,
            chern_F=chern_F,
            nu_zero_verified=slope_nu_hat(chern_F, p, P3) == 0,
            bmt_violated=True,
            bmt_margin=bmt.margin,
            within_displayed_bound=c3 < bounds.displayed_upper,
        ))
    logger.debug(f"Family (n={n}, m={m}): {len(members)} members with c2={bounds.c2}")
    return members


def p3_family_report(n: int, m: int) -> FamilyReport:
    """Family members together with both closed-form bounds and the discrepancy flag."""
    bounds = family_bounds(n, m)
    members = tuple(p3_unstable_family(n, m))
    box = [c3 for c3 in range(bounds.lower, 1, 2) if miro_roig_feasible(bounds.c2, c3)]
    displayed = tuple(c3 for c3 in box if c3 < bounds.displayed_upper)
    derived = tuple(c3 for c3 in box if c3 < bounds.derived_upper)
    direct = tuple(member.c3 for member in members)
    discrepancy = displayed != direct
    if discrepancy:
        logger.warning(
            f"Displayed c3 bound {bounds.displayed_upper} selects {len(displayed)} values, "
            f"direct evaluation selects {len(direct)} (n={n}, m={m})"
        )
    return FamilyReport(bounds, members, displayed, derived, discrepancy)


@dataclass(frozen=True)
class PhaseOneReport:
    """
    I_Z (x) O(ell H) at alpha^2 = 3 ell^2, and its derived dual shifted by 2.
    """

    ell: Fraction
    length: Fraction
    alpha_sq: Fraction
    chern: ChernVector
    dual_chern: ChernVector
    delta_bar_zero: bool
    nu_hat_zero: bool
    positivity_ok: bool
    dual_charge: CentralChargeValue
    phase_one: bool


def points_ideal_phase_one_report(
    ell: Rational,
    length: Rational,
    geom: PolarizedGeometry
) -> PhaseOneReport:
    """
    Numerical maximal-phase check for twisted ideal sheaves of points.

    nu(I_Z (x) L) = 0 is equivalent to 3 omega c_1(L)^2 = omega^3, i.e.
    alpha^2 = 3 ell^2 at B = 0.

    Raises:
        DomainError: If ell = 0.
    """
    ell = as_rational(ell)
    if ell == 0:
        raise DomainError("ell must be nonzero", field="ell", hypothesis="omega^2 c_1(L) != 0")
    p = TiltParameter(3 * ell * ell, 0)
    chern = twist_by_line_bundle(ideal_sheaf_of_points(length, geom), ell)
    dual_chern = shift(dual(chern), 2)
    return PhaseOneReport(
        ell=ell,
        length=as_rational(length),
        alpha_sq=p.alpha_sq,
        chern=chern,
        dual_chern=dual_chern,
        delta_bar_zero=discriminant_delta_bar(chern, p, geom) == 0,
        nu_hat_zero=slope_nu_hat(chern, p, geom) == 0,
        positivity_ok=positivity_check(chern, p, geom).delta_bar_ok,
        dual_charge=central_charge(dual_chern, p, geom),
        phase_one=phase_one_indicator(dual_chern, p, geom),
    )
