"""
Reduced Chern characters on a Picard-rank-one threefold.

A class is stored as four rationals (v0, v1, v2, v3) with ch_i = v_i H^i,
so that the intersection number H^(3-i).ch_i equals v_i * D where D = H^3.
Every object here is an immutable value and every function is pure.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator, Optional, Tuple

from llamatilt.utils import DomainError, Rational, as_rational, parse_rational_list

# Set up module-level logger
logger = logging.getLogger(__name__)

# Largest rank for which class <-> character conversion is offered.
MAX_CONVERSION_RANK = 3

DEFAULT_LATTICE_DENOMS = (1, 1, 2, 6)


@dataclass(frozen=True)
class PolarizedGeometry:
    """
    Numerical data of a polarized threefold with Pic = ZH.

    Args:
        degree_D: Top self-intersection H^3 of the ample generator.
        lattice_denoms: Denominators (q0, q1, q2, q3) such that integral
            objects have v_i in (1/q_i)Z. Defaults to (1, 1, 2, 6), the P^3 lattice.
    """

    degree_D: Fraction = Fraction(1)
    lattice_denoms: Tuple[int, int, int, int] = DEFAULT_LATTICE_DENOMS

    def __post_init__(self) -> None:
        degree = as_rational(self.degree_D)
        if degree <= 0:
            raise DomainError(f"degree_D must be positive, got {degree}", field="D")
        denoms = tuple(int(q) for q in self.lattice_denoms)
        if len(denoms) != 4 or any(q < 1 for q in denoms):
            raise DomainError(
                f"lattice_denoms must be four integers >= 1, got {self.lattice_denoms}",
                field="lattice"
            )
        object.__setattr__(self, "degree_D", degree)
        object.__setattr__(self, "lattice_denoms", denoms)


P3 = PolarizedGeometry()


@dataclass(frozen=True)
class TiltParameter:
    """
    The pair (alpha^2, beta) encoding omega = alpha H and B = beta H.

    alpha itself is never formed: it may be irrational (alpha^2 = 6 is a
    typical value), and every comparison in the package only needs alpha^2.
    """

    alpha_sq: Fraction
    beta: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        alpha_sq = as_rational(self.alpha_sq)
        if alpha_sq <= 0:
            raise DomainError(f"alpha_sq must be positive, got {alpha_sq}", field="alpha_sq")
        object.__setattr__(self, "alpha_sq", alpha_sq)
        object.__setattr__(self, "beta", as_rational(self.beta))

    def with_alpha_sq(self, alpha_sq: Rational) -> "TiltParameter":
        """Return the parameter with alpha^2 replaced."""
        return TiltParameter(as_rational(alpha_sq), self.beta)


@dataclass(frozen=True)
class ChernVector:
    """
    A reduced rational Chern character (v0, v1, v2, v3).

    The zero vector is allowed as an explicit zero object, for instance as a
    difference of two characters; slope functions reject it.
    """

    v0: Fraction
    v1: Fraction
    v2: Fraction
    v3: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("v0", "v1", "v2", "v3"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def parse(cls, text: str, field_name: str = "v") -> "ChernVector":
        """Parse "v0,v1,v2,v3" (exact rationals) into a ChernVector."""
        return cls(*parse_rational_list(text, length=4, field=field_name))

    @property
    def components(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.v0, self.v1, self.v2, self.v3)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.components)

    def __getitem__(self, index: int) -> Fraction:
        return self.components[index]

    def is_zero(self) -> bool:
        return not any(self.components)

    def __add__(self, other: "ChernVector") -> "ChernVector":
        if not isinstance(other, ChernVector):
            return NotImplemented
        return ChernVector(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "ChernVector") -> "ChernVector":
        if not isinstance(other, ChernVector):
            return NotImplemented
        return ChernVector(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> "ChernVector":
        return ChernVector(*(-a for a in self))

    def __mul__(self, scalar: Rational) -> "ChernVector":
        if isinstance(scalar, ChernVector):
            return NotImplemented
        factor = as_rational(scalar)
        return ChernVector(*(factor * a for a in self))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return ",".join(str(a) for a in self)


@dataclass(frozen=True)
class CurveData:
    """
    Numerical data of a curve C on the threefold.

    Args:
        degree_d: d = H.[C], positive.
        ch3_OC: The number ch_3(O_C).
        genus: Arithmetic genus, when known.
    """

    degree_d: Fraction
    ch3_OC: Fraction
    genus: Optional[int] = None

    def __post_init__(self) -> None:
        degree = as_rational(self.degree_d)
        if degree <= 0:
            raise DomainError(f"Curve degree must be positive, got {degree}", field="d")
        object.__setattr__(self, "degree_d", degree)
        object.__setattr__(self, "ch3_OC", as_rational(self.ch3_OC))
        if self.genus is not None:
            if isinstance(self.genus, bool) or int(self.genus) != self.genus or self.genus < 0:
                raise DomainError(f"genus must be a nonnegative integer, got {self.genus}", field="genus")
            object.__setattr__(self, "genus", int(self.genus))

    @classmethod
    def on_hypersurface(
        cls,
        degree_d: Rational,
        genus: int,
        geom: PolarizedGeometry
    ) -> "CurveData":
        """Build the data of a genus-g curve on a degree-D hypersurface in P^4."""
        return cls(as_rational(degree_d), genus_to_ch3(degree_d, geom.degree_D, genus), genus)

    def check_hypersurface(self, geom: PolarizedGeometry) -> None:
        """Verify the Riemann-Roch relation between genus and ch_3(O_C).

        Raises:
            DomainError: If the genus is known and ch3_OC disagrees with it.
        """
        if self.genus is None:
            return
        expected = genus_to_ch3(self.degree_d, geom.degree_D, self.genus)
        if self.ch3_OC != expected:
            raise DomainError(
                f"ch3_OC={self.ch3_OC} is inconsistent with genus {self.genus} "
                f"on a degree {geom.degree_D} hypersurface (expected {expected})",
                field="ch3_oc",
                hypothesis="Riemann-Roch on a hypersurface in P4"
            )


def from_chern_classes(
    rank: int,
    c1: Rational,
    c2: Rational,
    c3: Rational,
    geom: Optional[PolarizedGeometry] = None
) -> ChernVector:
    """
    Convert Chern classes of a rank <= 3 object to its reduced character.

    Uses v2 = (c1^2 - 2c2)/2 and v3 = (c1^3 - 3c1c2 + 3c3)/6.

    Raises:
        DomainError: If the rank is not an integer between 0 and 3.
    """
    if isinstance(rank, bool) or int(rank) != rank or not 0 <= rank <= MAX_CONVERSION_RANK:
        raise DomainError(
            f"Class conversion is limited to integral rank 0..{MAX_CONVERSION_RANK}, got {rank}",
            field="rank"
        )
    c1, c2, c3 = as_rational(c1), as_rational(c2), as_rational(c3)
    return ChernVector(
        Fraction(int(rank)),
        c1,
        (c1 * c1 - 2 * c2) / 2,
        (c1 ** 3 - 3 * c1 * c2 + 3 * c3) / 6,
    )


def to_chern_classes(v: ChernVector) -> Tuple[int, Fraction, Fraction, Fraction]:
    """Invert from_chern_classes on characters of rank 0..3."""
    if v.v0.denominator != 1 or not 0 <= v.v0 <= MAX_CONVERSION_RANK:
        raise DomainError(
            f"Class conversion is limited to integral rank 0..{MAX_CONVERSION_RANK}, got {v.v0}",
            field="v"
        )
    c1 = v.v1
    c2 = c1 * c1 / 2 - v.v2
    c3 = 2 * v.v3 - c1 ** 3 / 3 + c1 * c2
    return int(v.v0), c1, c2, c3


def twist_by_line_bundle(v: ChernVector, k: Rational) -> ChernVector:
    """Multiply by e^(kH): v'_i = sum_{j<=i} v_j k^(i-j)/(i-j)!."""
    k = as_rational(k)
    return ChernVector(*(
        sum((v[j] * k ** (i - j) / factorial(i - j) for j in range(i + 1)), Fraction(0))
        for i in range(4)
    ))


def twist_by_B(v: ChernVector, beta: Rational) -> ChernVector:
    """Twisted character e^(-B) ch with B = beta H, i.e. (t0, t1, t2, t3)."""
    return twist_by_line_bundle(v, -as_rational(beta))


def dual(v: ChernVector) -> ChernVector:
    """Numerical derived dual: (v0, -v1, v2, -v3)."""
    return ChernVector(v.v0, -v.v1, v.v2, -v.v3)


def shift(v: ChernVector, k: int) -> ChernVector:
    """Shift by [k], which multiplies the character by (-1)^k."""
    return v if k % 2 == 0 else -v


def line_bundle(k: Rational) -> ChernVector:
    """ch(O(kH)) = (1, k, k^2/2, k^3/6)."""
    return twist_by_line_bundle(ChernVector(1, 0, 0, 0), k)


def genus_to_ch3(d: Rational, D: Rational, g: int) -> Fraction:
    """ch_3(O_C) = 1 - g - (d/2)(5 - D) for a curve on a degree-D hypersurface in P^4."""
    d, D = as_rational(d), as_rational(D)
    return 1 - Fraction(g) - d / 2 * (5 - D)


def structure_sheaf_of_curve(curve: CurveData, geom: PolarizedGeometry) -> ChernVector:
    """ch(O_C) = (0, 0, d/D, ch3/D)."""
    D = geom.degree_D
    return ChernVector(0, 0, curve.degree_d / D, curve.ch3_OC / D)


def ideal_sheaf_of_curve(curve: CurveData, geom: PolarizedGeometry) -> ChernVector:
    """ch(I_C) = ch(O_X) - ch(O_C) = (1, 0, -d/D, -ch3/D)."""
    if curve.degree_d <= 0:
        raise DomainError("Ideal sheaf needs a curve of positive degree", field="d")
    return ChernVector(1, 0, 0, 0) - structure_sheaf_of_curve(curve, geom)


def twisted_ideal_sheaf(curve: CurveData, geom: PolarizedGeometry, k: Rational = 2) -> ChernVector:
    """ch(L^k (x) I_C) with L = O(H)."""
    return twist_by_line_bundle(ideal_sheaf_of_curve(curve, geom), k)


def ideal_sheaf_of_points(length: Rational, geom: PolarizedGeometry) -> ChernVector:
    """ch(I_Z) of a zero-dimensional subscheme of the given length."""
    length = as_rational(length)
    if length < 0:
        raise DomainError(f"Length must be nonnegative, got {length}", field="length")
    return ChernVector(1, 0, 0, -length / geom.degree_D)


def subtract_points(v: ChernVector, length: Rational, geom: PolarizedGeometry) -> ChernVector:
    """Character of the kernel of a surjection onto a zero-dimensional sheaf.

    Only v3 changes; it drops by length/D.
    """
    length = as_rational(length)
    if length < 0:
        raise DomainError(f"Length must be nonnegative, got {length}", field="length")
    return ChernVector(v.v0, v.v1, v.v2, v.v3 - length / geom.degree_D)
