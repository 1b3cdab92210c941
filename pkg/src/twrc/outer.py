"""Capacity-region outer bounds for the half-duplex two-way relay channel.

Per-ray and weighted-sum cut-set LPs over the six network states, closed-form
bounds certified by fixed dual points, the one-way relaying bound, and the
direct-link thresholds below which the symmetric-rate bound collapses to the
relay-only value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .core import (
    ChannelGains,
    LinkCaps,
    TimeShares,
    ValidationError,
    cap,
    link_capacities,
)
from .lp import LinearProgram, SolverError, solve_lp

ACTIVE_STATE_TOL = 1e-7
_DUAL_SLACK_TOL = 1e-9


@dataclass(frozen=True)
class OuterPoint:
    """A point of the outer-bound boundary on the ray Ra = k * Rb.

    ``active_states`` lists the states whose time share exceeds the reporting
    threshold; a vertex solution uses at most four of the six states.
    """

    k: float
    ra: float
    rb: float
    shares: TimeShares
    active_states: frozenset[int]

    def __post_init__(self) -> None:
        if len(self.active_states) > 4:
            raise SolverError(
                f"outer-bound vertex reports {len(self.active_states)} active "
                f"states; a basic solution cannot use more than four"
            )


class WeightedBound(NamedTuple):
    value: float
    ra: float
    rb: float
    shares: TimeShares


@dataclass(frozen=True)
class DualPoint:
    """A feasible point (y1..y5) of the dual of the per-ray cut-set program."""

    y1: float
    y2: float
    y3: float
    y4: float
    y5: float


@dataclass(frozen=True)
class Thresholds:
    """Direct-link SNR thresholds for the symmetric-rate capacity statement.

    ``gamma30`` is set for equal relay links, ``gamma31``/``gamma32`` for
    unequal ones; ``operative`` is the binding value.
    """

    gamma30: float | None = None
    gamma31: float | None = None
    gamma32: float | None = None

    @property
    def operative(self) -> float:
        if self.gamma30 is not None:
            return self.gamma30
        assert self.gamma31 is not None and self.gamma32 is not None
        return min(self.gamma31, self.gamma32)


def _cut_rows(caps: LinkCaps) -> np.ndarray:
    """Per-state capacity coefficients of the four cut constraints.

    Rows bound, in order: the a-side broadcast cut and a-side delivery cut
    (both on Ra), then the b-side broadcast and delivery cuts (on Rb).
    Columns are the six state shares.
    """
    return np.array([
        [caps.c13, 0.0, caps.c1, 0.0, caps.c3, 0.0],
        [caps.c3, 0.0, 0.0, caps.c2, caps.c23_coh, 0.0],
        [0.0, caps.c23, caps.c2, 0.0, 0.0, caps.c3],
        [0.0, caps.c3, 0.0, caps.c1, 0.0, caps.c13_coh],
    ])


def ratio_bound_lp(k: float, gains: ChannelGains) -> LinearProgram:
    """The per-ray program: maximize Rb over (Rb, lam1..lam6) with Ra = k*Rb inlined.

    Rows are the four cut constraints followed by the time-share budget.
    """
    if not (math.isfinite(k) and k >= 0.0):
        raise ValidationError(f"ray ratio k must be finite and >= 0, got {k!r}")
    cuts = _cut_rows(link_capacities(gains))
    rate_coef = np.array([k, k, 1.0, 1.0])
    A = np.zeros((5, 7))
    A[:4, 0] = rate_coef
    A[:4, 1:] = -cuts
    A[4, 1:] = 1.0
    return LinearProgram(
        objective=np.array([1.0, 0, 0, 0, 0, 0, 0]),
        matrix=A,
        relations=("<=",) * 5,
        rhs=np.array([0.0, 0.0, 0.0, 0.0, 1.0]),
    )


def weighted_bound_lp(wa: float, wb: float, gains: ChannelGains) -> LinearProgram:
    """The weighted-sum program: maximize wa*Ra + wb*Rb over (Ra, Rb, lam1..lam6)."""
    for name, w in (("wa", wa), ("wb", wb)):
        if not (math.isfinite(w) and w >= 0.0):
            raise ValidationError(f"{name} must be finite and >= 0, got {w!r}")
    if wa == 0.0 and wb == 0.0:
        raise ValidationError("at least one of the weights must be positive")
    cuts = _cut_rows(link_capacities(gains))
    A = np.zeros((5, 8))
    A[0, 0] = A[1, 0] = 1.0
    A[2, 1] = A[3, 1] = 1.0
    A[:4, 2:] = -cuts
    A[4, 2:] = 1.0
    obj = np.zeros(8)
    obj[0], obj[1] = wa, wb
    return LinearProgram(
        objective=obj,
        matrix=A,
        relations=("<=",) * 5,
        rhs=np.array([0.0, 0.0, 0.0, 0.0, 1.0]),
    )


def _ra_axis_lp(gains: ChannelGains) -> LinearProgram:
    """Maximize Ra with Rb = 0 (the k -> infinity end of the sweep)."""
    cuts = _cut_rows(link_capacities(gains))
    A = np.zeros((3, 7))
    A[0, 0] = A[1, 0] = 1.0
    A[0, 1:] = -cuts[0]
    A[1, 1:] = -cuts[1]
    A[2, 1:] = 1.0
    return LinearProgram(
        objective=np.array([1.0, 0, 0, 0, 0, 0, 0]),
        matrix=A,
        relations=("<=",) * 3,
        rhs=np.array([0.0, 0.0, 1.0]),
    )


def outer_ratio_bound(k: float, gains: ChannelGains,
                      formulation: str = "ratio") -> OuterPoint:
    """Largest Rb compatible with the cut-set constraints on the ray Ra = k*Rb.

    ``k=math.inf`` selects the dedicated Ra-axis mode (Rb = 0, maximize Ra).
    ``formulation`` picks the LP layout: "ratio" folds Ra = k*Rb into the cut
    rows; "weighted" keeps (Ra, Rb) as separate variables and adds the ray as
    an equality row.  Both describe the same region.
    """
    if formulation not in ("ratio", "weighted"):
        raise ValidationError(f"unknown formulation {formulation!r}")
    if isinstance(k, float) and math.isinf(k) and k > 0:
        sol = solve_lp(_ra_axis_lp(gains))
        _require_optimal(sol)
        shares = TimeShares.from_sequence(sol.x[1:7])
        return OuterPoint(math.inf, float(sol.x[0]), 0.0, shares,
                          shares.active_states(ACTIVE_STATE_TOL))
    if formulation == "weighted":
        lp = weighted_bound_lp(1.0, 1.0, gains)
        ray = np.zeros(8)
        ray[0], ray[1] = 1.0, -k
        lp = LinearProgram(
            objective=np.array([0.0, 1, 0, 0, 0, 0, 0, 0]),
            matrix=np.vstack([lp.matrix, ray]),
            relations=lp.relations + ("=",),
            rhs=np.append(lp.rhs, 0.0),
        )
        sol = solve_lp(lp)
        _require_optimal(sol)
        rb = float(sol.x[1])
        shares = TimeShares.from_sequence(sol.x[2:8])
    else:
        sol = solve_lp(ratio_bound_lp(k, gains))
        _require_optimal(sol)
        rb = float(sol.x[0])
        shares = TimeShares.from_sequence(sol.x[1:7])
    return OuterPoint(float(k), k * rb, rb, shares,
                      shares.active_states(ACTIVE_STATE_TOL))


def outer_weighted_bound(wa: float, wb: float, gains: ChannelGains) -> WeightedBound:
    """Largest wa*Ra + wb*Rb compatible with the cut-set constraints."""
    sol = solve_lp(weighted_bound_lp(wa, wb, gains))
    _require_optimal(sol)
    return WeightedBound(
        value=float(sol.value),
        ra=float(sol.x[0]),
        rb=float(sol.x[1]),
        shares=TimeShares.from_sequence(sol.x[2:8]),
    )


def _require_optimal(sol) -> None:
    if not sol.is_optimal:
        raise SolverError(f"cut-set LP unexpectedly {sol.status}")


def _rb_bound_terms(k: float, caps: LinkCaps) -> tuple[float, float, float, float]:
    """Candidate closed-form ceilings for Rb on the ray Ra = k*Rb, k >= 1.

    Each term is the value of one dual constraint row at the fixed dual point
    used by ``rb_dual_point``; their maximum upper-bounds the per-ray LP.
    """
    s = caps.c1 + caps.c2
    if s <= 0.0:
        return (0.0, 0.0, 0.0, 0.0)
    t1 = (3.0 * k - 1.0) / (2.0 * k * k) * caps.c1 * caps.c2 / s
    t2 = (2.0 * k - 1.0) / (2.0 * k * k) * (caps.c2 * caps.c13 + caps.c1 * caps.c3) / s
    t3 = (2.0 * k - 1.0) / (2.0 * k * k) * (caps.c2 * caps.c3 + caps.c1 * caps.c23_coh) / s
    t4 = 1.0 / (2.0 * k) * (caps.c1 * caps.c3 + caps.c2 * caps.c13_coh) / s
    return (t1, t2, t3, t4)


def analytic_rb_bound(k: float, gains: ChannelGains) -> float:
    """Closed-form upper bound on Rb for Ra = k*Rb, valid for any k > 0.

    For k >= 1 it is the maximum of the four dual-certified terms; for k < 1
    the same construction is applied to the mirrored problem (terminals
    relabeled, ratio 1/k) and mapped back through Rb = Ra / k.
    """
    if not (math.isfinite(k) and k > 0.0):
        raise ValidationError(f"ray ratio k must be finite and > 0, got {k!r}")
    caps = link_capacities(gains)
    if k >= 1.0:
        t1, t2, t3, t4 = _rb_bound_terms(k, caps)
        if k == 1.0:
            assert t2 <= t4 + 1e-12, "k=1 dominance of the delivery-cut term failed"
        return max(t1, t2, t3, t4)
    mirrored = max(_rb_bound_terms(1.0 / k, caps.swapped()))
    return mirrored / k


def rb_dual_point(k: float, gains: ChannelGains) -> DualPoint:
    """The fixed dual-feasible point behind ``analytic_rb_bound`` for k >= 1."""
    if not (math.isfinite(k) and k >= 1.0):
        raise ValidationError(f"the dual point is defined for k >= 1, got {k!r}")
    caps = link_capacities(gains)
    s = caps.c1 + caps.c2
    if s <= 0.0:
        # degenerate channel: any normalized multipliers certify Rb = 0
        return DualPoint(0.5 / k, 0.5 / k, 0.5, 0.5, 0.0)
    y1 = (2.0 * k - 1.0) / (2.0 * k * k) * caps.c2 / s
    y2 = (2.0 * k - 1.0) / (2.0 * k * k) * caps.c1 / s
    y3 = 1.0 / (2.0 * k) * caps.c1 / s
    y4 = 1.0 / (2.0 * k) * caps.c2 / s
    y5 = max(_dual_row_values(caps, y1, y2, y3, y4))
    return DualPoint(y1, y2, y3, y4, y5)


def _dual_row_values(caps: LinkCaps, y1: float, y2: float, y3: float, y4: float):
    """Right-hand sides of the six state rows of the dual program."""
    return (
        y1 * caps.c13 + y2 * caps.c3,
        y3 * caps.c23 + y4 * caps.c3,
        y1 * caps.c1 + y3 * caps.c2,
        y2 * caps.c2 + y4 * caps.c1,
        y1 * caps.c3 + y2 * caps.c23_coh,
        y3 * caps.c3 + y4 * caps.c13_coh,
    )


def dual_point_feasible(k: float, gains: ChannelGains) -> tuple[bool, float]:
    """Check the closed-form dual point against all seven dual constraints.

    Returns (feasible, min_slack): the six state rows must not exceed y5 and
    the normalization row k*(y1+y2) + y3 + y4 >= 1 must hold.
    """
    p = rb_dual_point(k, gains)
    caps = link_capacities(gains)
    rows = _dual_row_values(caps, p.y1, p.y2, p.y3, p.y4)
    slacks = [p.y5 - r for r in rows]
    slacks.append(k * (p.y1 + p.y2) + p.y3 + p.y4 - 1.0)
    min_slack = min(slacks)
    return (min_slack >= -_DUAL_SLACK_TOL, min_slack)


def _two_phase_value(c_src: float, c_dst: float, c_direct: float) -> float:
    """Rate of a source phase balanced against a delivery phase.

    Both phases also carry the direct link at capacity ``c_direct``; the
    optimum splits time so the two cut values meet.
    """
    den = c_src + c_dst - 2.0 * c_direct
    if den <= 0.0:
        return 0.0
    return (c_src * c_dst - c_direct * c_direct) / den


def one_way_bound(gains: ChannelGains) -> float:
    """Upper bound on Rb for one-way relaying b -> a (the Ra = 0 end of the region).

    Balances the b-side broadcast cut C(gamma2 + gamma3) against the b-side
    delivery cut C((sqrt(gamma1) + sqrt(gamma3))^2); with no direct link it
    reduces to the two-hop value C(g1)C(g2) / (C(g1) + C(g2)).
    """
    caps = link_capacities(gains)
    return _two_phase_value(caps.c23, caps.c13_coh, caps.c3)


def one_way_bound_ab(gains: ChannelGains) -> float:
    """Mirror of ``one_way_bound``: upper bound on Ra for one-way relaying a -> b."""
    caps = link_capacities(gains)
    return _two_phase_value(caps.c13, caps.c23_coh, caps.c3)


def analytic_weighted_bound(k: float, gains: ChannelGains) -> float:
    """Closed-form upper bound on k*Ra + Rb, valid for any k >= 0.

    The four terms evaluate the dual constraint rows at a fixed dual point
    built from the two one-way balances; their maximum dominates the weighted
    LP for every weight k.
    """
    if not (math.isfinite(k) and k >= 0.0):
        raise ValidationError(f"weight k must be finite and >= 0, got {k!r}")
    caps = link_capacities(gains)
    den_a = caps.c13 + caps.c23_coh - 2.0 * caps.c3
    den_b = caps.c23 + caps.c13_coh - 2.0 * caps.c3
    if den_a <= 0.0 or den_b <= 0.0:
        return 0.0
    t1 = k * (caps.c13 * caps.c23_coh - caps.c3 ** 2) / den_a
    t2 = (caps.c23 * caps.c13_coh - caps.c3 ** 2) / den_b
    t3 = (k * caps.c1 * (caps.c23_coh - caps.c3) / den_a
          + caps.c2 * (caps.c13_coh - caps.c3) / den_b)
    t4 = (k * caps.c2 * (caps.c13 - caps.c3) / den_a
          + caps.c1 * (caps.c23 - caps.c3) / den_b)
    return max(t1, t2, t3, t4)


def capacity_thresholds(gains: ChannelGains, rel_tol: float = 1e-9) -> Thresholds:
    """Largest direct-link SNRs for which the symmetric-rate bound is relay-limited.

    For gamma1 = gamma2 = g the threshold gamma30 solves
    C(x) + C((sqrt(g) + sqrt(x))^2) = 2 C(g); otherwise gamma31 and gamma32
    solve the two mixed equations with target 2 C(g1) C(g2).  All three
    left-hand sides increase strictly with x, so bisection finds the unique
    roots.
    """
    g1, g2 = gains.gamma1, gains.gamma2
    if g1 <= 0.0 or g2 <= 0.0:
        raise ValidationError("thresholds require positive relay-link SNRs")
    if g1 == g2:
        c = cap(g1)
        root = math.sqrt(g1)

        def f(x: float) -> float:
            return cap(x) + cap((root + math.sqrt(x)) ** 2)

        return Thresholds(gamma30=_solve_increasing(f, 2.0 * c, g2, rel_tol))

    c1, c2 = cap(g1), cap(g2)
    target = 2.0 * c1 * c2
    r1, r2 = math.sqrt(g1), math.sqrt(g2)

    def f1(x: float) -> float:
        return c2 * cap(x) + c1 * cap((r2 + math.sqrt(x)) ** 2)

    def f2(x: float) -> float:
        return c1 * cap(x) + c2 * cap((r1 + math.sqrt(x)) ** 2)

    return Thresholds(
        gamma31=_solve_increasing(f1, target, g2, rel_tol),
        gamma32=_solve_increasing(f2, target, g2, rel_tol),
    )


def _solve_increasing(f: Callable[[float], float], target: float,
                      hi: float, rel_tol: float) -> float:
    """Root of f(x) = target for increasing f, by bracket expansion + bisection."""
    if f(0.0) >= target:
        return 0.0
    hi = max(hi, 1.0)
    for _ in range(200):
        if f(hi) >= target:
            break
        hi *= 2.0
    else:
        raise SolverError("could not bracket the threshold root")
    lo = 0.0
    while hi - lo > rel_tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
