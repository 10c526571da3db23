"""
Enumeration of numerical destabilizer candidates.

A candidate sub-object character w = (w0, w1, w2, 0) is kept when it passes
the necessary conditions for sitting in a short exact sequence
0 -> M -> E -> N -> 0 in the tilted heart with nu(M) >= nu(E):

    0 <= t1(w) <= t1(v), Delta_bar(w) >= 0, Delta_bar(v - w) >= 0

together with the sign condition on pieces with t1 = 0. Nothing here claims
that an actual sub-object exists; candidates are numerical only.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from llamatilt.chern import ChernVector, PolarizedGeometry, TiltParameter
from llamatilt.tilt import (
    SlopeValue,
    compute_c,
    discriminant_delta_bar,
    slope_nu_hat,
    twisted,
)
from llamatilt.utils import DomainError, as_rational, default_workers

# Set up module-level logger
logger = logging.getLogger(__name__)

CASE_LABELS = ("2c,0", "c,c", "0,2c")
UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class SearchBounds:
    """
    Box for the enumeration: |w0| <= rank_bound and |w2| <= ch2_bound.

    w1 needs no bound of its own, since 0 <= t1(w) <= t1(v) confines it.
    """

    rank_bound: int
    ch2_bound: Fraction

    def __post_init__(self) -> None:
        if isinstance(self.rank_bound, bool) or int(self.rank_bound) != self.rank_bound:
            raise DomainError(f"rank_bound must be an integer, got {self.rank_bound!r}", field="rank_bound")
        if self.rank_bound < 0:
            raise DomainError(f"rank_bound must be nonnegative, got {self.rank_bound}", field="rank_bound")
        ch2_bound = as_rational(self.ch2_bound)
        if ch2_bound < 0:
            raise DomainError(f"ch2_bound must be nonnegative, got {ch2_bound}", field="ch2_bound")
        object.__setattr__(self, "rank_bound", int(self.rank_bound))
        object.__setattr__(self, "ch2_bound", ch2_bound)


@dataclass(frozen=True)
class DestabilizerCandidate:
    w: ChernVector
    nu_hat_w: SlopeValue
    strict: bool
    quotient_delta_bar: Fraction
    sub_delta_bar: Fraction

    @property
    def sort_key(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.w.v0, self.w.v1, self.w.v2)


@dataclass(frozen=True)
class SearchResult:
    """
    Output of destabilizer_search.

    ``candidates`` have finite nu_hat; ``infinite_slope`` holds those with
    t1(w) = 0. Both are sorted by (w0, w1, w2).
    """

    v: ChernVector
    nu_hat_v: SlopeValue
    candidates: Tuple[DestabilizerCandidate, ...]
    infinite_slope: Tuple[DestabilizerCandidate, ...] = ()

    @property
    def strict(self) -> Tuple[DestabilizerCandidate, ...]:
        return tuple(c for c in self.candidates if c.strict)

    @property
    def equal(self) -> Tuple[DestabilizerCandidate, ...]:
        return tuple(c for c in self.candidates if not c.strict)

    def all_candidates(self) -> Tuple[DestabilizerCandidate, ...]:
        return tuple(sorted(self.candidates + self.infinite_slope, key=lambda c: c.sort_key))


def lattice_points(lower: Fraction, upper: Fraction, denominator: int) -> Iterator[Fraction]:
    """Yield the points of (1/denominator)Z in [lower, upper], ascending."""
    for k in range(math.ceil(lower * denominator), math.floor(upper * denominator) + 1):
        yield Fraction(k, denominator)


def in_first_tilt(t: ChernVector) -> bool:
    """Sign condition for a nonzero piece with t1 = 0: t0 <= 0 and t2 >= 0."""
    return t.v0 <= 0 and t.v2 >= 0


def _search_slice(
    v: ChernVector,
    p: TiltParameter,
    geom: PolarizedGeometry,
    bounds: SearchBounds,
    w0: Fraction,
    check_quotient: bool
) -> List[DestabilizerCandidate]:
    """All candidates with a fixed rank w0."""
    _, q1, q2, _ = geom.lattice_denoms
    t_v = twisted(v, p)
    nu_v = slope_nu_hat(v, p, geom)
    found = []
    # 0 <= w1 - beta*w0 <= t1(v)
    for w1 in lattice_points(p.beta * w0, p.beta * w0 + t_v.v1, q1):
        for w2 in lattice_points(-bounds.ch2_bound, bounds.ch2_bound, q2):
            if (w0, w1, w2) == (0, 0, 0) or (w0, w1, w2) == (v.v0, v.v1, v.v2):
                continue
            w = ChernVector(w0, w1, w2, 0)
            t_w = twisted(w, p)
            if t_w.v1 == 0 and not in_first_tilt(t_w):
                continue
            sub_delta_bar = discriminant_delta_bar(w, p, geom)
            if sub_delta_bar < 0:
                continue
            quotient = v - w
            quotient_delta_bar = discriminant_delta_bar(quotient, p, geom)
            if check_quotient:
                if quotient_delta_bar < 0:
                    continue
                t_q = twisted(quotient, p)
                if t_q.v1 == 0 and not in_first_tilt(t_q):
                    continue
            nu_w = slope_nu_hat(w, p, geom)
            if nu_w < nu_v:
                continue
            found.append(DestabilizerCandidate(
                w=w,
                nu_hat_w=nu_w,
                strict=nu_w > nu_v,
                quotient_delta_bar=quotient_delta_bar,
                sub_delta_bar=sub_delta_bar,
            ))
    return found


def _run_slice(task: Tuple) -> List[DestabilizerCandidate]:
    return _search_slice(*task)


def destabilizer_search(
    v: ChernVector,
    p: TiltParameter,
    geom: PolarizedGeometry,
    bounds: SearchBounds,
    check_quotient: bool = True,
    prune: bool = False,
    workers: Optional[int] = None
) -> SearchResult:
    """
    Enumerate numerical destabilizer candidates of v inside a finite box.

    Args:
        v: Character of the object to test.
        p: Tilt parameter.
        geom: Geometry; its lattice denominators define the enumeration grid.
        bounds: Enumeration box.
        check_quotient: Also require Delta_bar(v - w) >= 0 and the quotient
            sign condition.
        prune: Skip slices w0 >= 1 when nu_hat(v) >= t1(v)/2; every such w
            with Delta_bar(w) >= 0 has nu_hat(w) < t1(v)/2.
        workers: Number of worker processes, defaulting to LLAMATILT_WORKERS.

    Returns:
        SearchResult with candidates sorted by (w0, w1, w2).

    Raises:
        DomainError: If nu_hat(v) is infinite.
    """
    nu_v = slope_nu_hat(v, p, geom)
    if nu_v.is_infinite:
        raise DomainError(
            f"Destabilizer search needs a finite tilt slope, {v} has t1 = 0",
            field="v",
            hypothesis="omega^2 tch_1(E) != 0"
        )
    t1_v = twisted(v, p).v1
    if t1_v < 0:
        logger.debug(f"t1(v) = {t1_v} < 0 leaves no room for 0 <= t1(w) <= t1(v)")
        return SearchResult(v, nu_v, ())

    q0 = geom.lattice_denoms[0]
    ranks = list(lattice_points(Fraction(-bounds.rank_bound), Fraction(bounds.rank_bound), q0))
    if prune and nu_v >= t1_v / 2:
        skipped = [w0 for w0 in ranks if w0 >= 1]
        ranks = [w0 for w0 in ranks if w0 < 1]
        logger.debug(f"Pruned {len(skipped)} rank slices by the slope bound {t1_v / 2}")

    tasks = [(v, p, geom, bounds, w0, check_quotient) for w0 in ranks]
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers > 1 and len(tasks) > 1:
        logger.debug(f"Searching {len(tasks)} rank slices on {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as executor:
            slices = list(executor.map(_run_slice, tasks))
    else:
        slices = [_run_slice(task) for task in tasks]

    found = sorted((c for part in slices for c in part), key=lambda c: c.sort_key)
    finite = tuple(c for c in found if not c.nu_hat_w.is_infinite)
    infinite = tuple(c for c in found if c.nu_hat_w.is_infinite)
    logger.debug(
        f"Search for {v}: {len(finite)} finite candidates "
        f"({sum(c.strict for c in finite)} strict), {len(infinite)} with t1 = 0"
    )
    return SearchResult(v, nu_v, finite, infinite)


@dataclass(frozen=True)
class CaseSplit:
    """
    Candidates of an object with omega^2 tch_1 = 2c, split by
    (omega^2 tch_1(M), omega^2 tch_1(N)).

    In case (2c,0) the quotient has infinite slope, in case (0,2c) the sub.
    """

    c: Fraction
    buckets: Dict[str, Tuple[DestabilizerCandidate, ...]]
    infinite_side: Dict[str, Optional[str]] = field(default_factory=lambda: {
        "2c,0": "quotient",
        "c,c": None,
        "0,2c": "sub",
    })


def case_split_2c(
    v: ChernVector,
    p: TiltParameter,
    geom: PolarizedGeometry,
    bounds: SearchBounds,
    check_quotient: bool = True
) -> CaseSplit:
    """
    Classify destabilizer candidates into the three cases of the 2c argument.

    Raises:
        DomainError: If omega^2 tch_1(v) != 2c.
    """
    c = compute_c(p, geom)
    scale = p.alpha_sq * geom.degree_D
    omega2_t1 = scale * twisted(v, p).v1
    if omega2_t1 != 2 * c:
        raise DomainError(
            f"omega^2 tch_1 = {omega2_t1} differs from 2c = {2 * c}",
            field="v",
            hypothesis="omega^2 tch_1(E) = 2c"
        )
    result = destabilizer_search(v, p, geom, bounds, check_quotient=check_quotient)
    by_value = {2 * c: "2c,0", c: "c,c", Fraction(0): "0,2c"}
    buckets: Dict[str, List[DestabilizerCandidate]] = {label: [] for label in CASE_LABELS + (UNCLASSIFIED,)}
    for candidate in result.all_candidates():
        label = by_value.get(scale * twisted(candidate.w, p).v1, UNCLASSIFIED)
        buckets[label].append(candidate)
    if buckets[UNCLASSIFIED]:
        logger.debug(f"{len(buckets[UNCLASSIFIED])} candidates fall outside {{0, c, 2c}}")
    return CaseSplit(c, {label: tuple(items) for label, items in buckets.items()})
