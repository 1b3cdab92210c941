"""Achievable rate regions of the relaying protocols, one per-ray LP each.

Covers the two-phase multiple-access/broadcast protocol (MABC), the four-phase
hybrid protocol (HBC) and its three-phase time-division restriction (TDBC),
the six-state decode-and-forward protocol with per-state power splits, the
six-state protocol that also sends fresh data on the direct link, and the
three-phase lattice-forwarding CoMABC protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ChannelGains,
    TimeShares,
    ValidationError,
    cap,
    link_capacities,
)
from .lp import LinearProgram, SolverError, solve_lp

# per-protocol information flows: (source, destination, state) -> rate
FlowVars = dict[tuple[str, str, int], float]


@dataclass(frozen=True)
class PowerSplit:
    """Fractions of transmit power spent on the relay-bound message in the
    two broadcast states (the remainder rides on the direct link)."""

    alpha1: float
    alpha2: float

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)) or not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v!r}")


@dataclass(frozen=True)
class BoundaryPoint:
    """A protocol boundary point on the ray Ra = k * Rb."""

    ra: float
    rb: float
    shares: TimeShares
    flows: FlowVars | None = None
    power_split: PowerSplit | None = None


def _solve_ray(matrix: np.ndarray, relations, rhs, k: float) -> np.ndarray:
    """Tie the two rate variables to the ray and maximize the free one.

    Columns 0 and 1 of ``matrix`` are Ra and Rb.  For finite k the tie is
    Ra = k*Rb and Rb is maximized; k = inf pins Rb = 0 and maximizes Ra.
    """
    n = matrix.shape[1]
    ray = np.zeros(n)
    obj = np.zeros(n)
    if isinstance(k, float) and math.isinf(k) and k > 0:
        ray[1] = 1.0
        obj[0] = 1.0
    else:
        if not (math.isfinite(k) and k >= 0.0):
            raise ValidationError(f"ray ratio k must be finite and >= 0, got {k!r}")
        ray[0], ray[1] = 1.0, -k
        obj[1] = 1.0
    lp = LinearProgram(
        objective=obj,
        matrix=np.vstack([matrix, ray]),
        relations=tuple(relations) + ("=",),
        rhs=np.append(np.asarray(rhs, dtype=float), 0.0),
    )
    sol = solve_lp(lp)
    if not sol.is_optimal:
        raise SolverError(f"protocol LP unexpectedly {sol.status}")
    return sol.x


def mabc_boundary(k: float, gains: ChannelGains) -> BoundaryPoint:
    """Two-phase protocol: simultaneous uplinks (state 3), relay broadcast (state 4)."""
    caps = link_capacities(gains)
    # columns: Ra, Rb, lam3, lam4
    A = np.array([
        [1.0, 0.0, -caps.c1, 0.0],
        [1.0, 0.0, 0.0, -caps.c2],
        [0.0, 1.0, -caps.c2, 0.0],
        [0.0, 1.0, 0.0, -caps.c1],
        [1.0, 1.0, -caps.c12, 0.0],
        [0.0, 0.0, 1.0, 1.0],
    ])
    rhs = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
    x = _solve_ray(A, ("<=",) * 6, rhs, k)
    shares = TimeShares.from_sequence([0.0, 0.0, x[2], x[3], 0.0, 0.0])
    return BoundaryPoint(float(x[0]), float(x[1]), shares)


def hbc_boundary(k: float, gains: ChannelGains, tdbc_only: bool = False) -> BoundaryPoint:
    """Four-phase protocol over states 1-4; ``tdbc_only`` drops the joint
    uplink state 3 (the three-phase time-division restriction)."""
    caps = link_capacities(gains)
    # columns: Ra, Rb, lam1, lam2, lam3, lam4
    A = np.array([
        [1.0, 0.0, -caps.c1, 0.0, -caps.c1, 0.0],
        [1.0, 0.0, -caps.c3, 0.0, 0.0, -caps.c2],
        [0.0, 1.0, 0.0, -caps.c2, -caps.c2, 0.0],
        [0.0, 1.0, 0.0, -caps.c3, 0.0, -caps.c1],
        [1.0, 1.0, -caps.c1, -caps.c2, -caps.c12, 0.0],
        [0.0, 0.0, 1.0, 1.0, 1.0, 1.0],
    ])
    rel = ["<="] * 5 + ["="]
    rhs = [0.0] * 5 + [1.0]
    if tdbc_only:
        A = np.vstack([A, [0.0, 0.0, 0.0, 0.0, 1.0, 0.0]])
        rel.append("=")
        rhs.append(0.0)
    x = _solve_ray(A, rel, rhs, k)
    shares = TimeShares.from_sequence([x[2], x[3], x[4], x[5], 0.0, 0.0])
    return BoundaryPoint(float(x[0]), float(x[1]), shares)


def six_state_boundary(k: float, gains: ChannelGains) -> BoundaryPoint:
    """Six-state protocol with side information: states 5 and 6 forward relayed
    data coherently with fresh direct-link transmissions.

    The direct-link flows are fixed at their region-maximizing values
    (state-5: Z_ab = lam5*C(g3) with the pair summing to lam5*C(g2+g3), and
    the mirror in state 6), which folds the flow variables into the shares.
    """
    caps = link_capacities(gains)
    # columns: Ra, Rb, lam1..lam6
    A = np.array([
        [1.0, 0.0, -caps.c1, 0.0, -caps.c1, 0.0, -caps.c3, 0.0],
        [1.0, 0.0, -caps.c3, 0.0, 0.0, -caps.c2, -caps.c23, 0.0],
        [0.0, 1.0, 0.0, -caps.c2, -caps.c2, 0.0, 0.0, -caps.c3],
        [0.0, 1.0, 0.0, -caps.c3, 0.0, -caps.c1, 0.0, -caps.c13],
        [1.0, 1.0, -caps.c1, -caps.c2, -caps.c12, 0.0, -caps.c3, -caps.c3],
        [0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
    ])
    rel = ("<=",) * 5 + ("=",)
    rhs = [0.0] * 5 + [1.0]
    x = _solve_ray(A, rel, rhs, k)
    shares = TimeShares.from_sequence(x[2:8])
    return BoundaryPoint(float(x[0]), float(x[1]), shares)


def comabc_boundary(k: float, gains: ChannelGains) -> BoundaryPoint:
    """Three-phase lattice-forwarding protocol over states 3, 4 and 6.

    The relay decodes a lattice combination, so the uplink rates are capped by
    the clipped single-user expressions R*_ar, R*_br rather than the MAC region.
    """
    caps = link_capacities(gains)
    r_ar = _lattice_uplink_rate(gains.gamma1, gains.gamma2)
    r_br = _lattice_uplink_rate(gains.gamma2, gains.gamma1)
    # columns: Ra, Rb, lam3, lam4, lam6
    A = np.array([
        [1.0, 0.0, -r_ar, 0.0, 0.0],
        [1.0, 0.0, 0.0, -caps.c2, 0.0],
        [0.0, 1.0, -r_br, 0.0, -caps.c3],
        [0.0, 1.0, 0.0, -caps.c1, -caps.c13],
        [0.0, 0.0, 1.0, 1.0, 1.0],
    ])
    rhs = [0.0, 0.0, 0.0, 0.0, 1.0]
    x = _solve_ray(A, ("<=",) * 5, rhs, k)
    shares = TimeShares.from_sequence([0.0, 0.0, x[2], x[3], 0.0, x[4]])
    return BoundaryPoint(float(x[0]), float(x[1]), shares)


def _lattice_uplink_rate(g_own: float, g_other: float) -> float:
    """Clipped uplink rate [log2(g_own / (g_own + g_other) + g_own)]^+ ."""
    total = g_own + g_other
    if total <= 0.0:
        return 0.0
    arg = g_own / total + g_own
    if arg <= 1.0:
        return 0.0
    return math.log2(arg)


# flow variables of the six-state DF protocol, in LP column order
_DF_FLOWS: tuple[tuple[str, str, int], ...] = (
    ("a", "r", 1), ("a", "b", 1),
    ("b", "r", 2), ("b", "a", 2),
    ("a", "r", 3), ("b", "r", 3),
    ("r", "a", 4), ("r", "b", 4),
    ("r", "b", 5), ("a", "b", 5),
    ("r", "a", 6), ("b", "a", 6),
)


def _df_matrix(gains: ChannelGains, alpha1: float, alpha2: float):
    """Constraint system of the six-state DF protocol at a fixed power split.

    Columns: Ra, Rb, lam1..lam6, then the twelve flow variables in
    ``_DF_FLOWS`` order.  Rows: the two rate compositions, per-state flow
    caps, the two relay conservation equalities, and the time budget.
    """
    caps = link_capacities(gains)
    g1, g2, g3 = gains.gamma1, gains.gamma2, gains.gamma3
    bc1_relay = cap(alpha1 * g1)
    bc1_direct = cap((1.0 - alpha1) * g3 / (1.0 + alpha1 * g3))
    bc2_relay = cap(alpha2 * g2)
    bc2_direct = cap((1.0 - alpha2) * g3 / (1.0 + alpha2 * g3))

    col = {name: 8 + i for i, name in enumerate(_DF_FLOWS)}
    n = 8 + len(_DF_FLOWS)
    rows, rel, rhs = [], [], []

    def add(vals: dict, relation: str, b: float = 0.0) -> None:
        r = np.zeros(n)
        for j, v in vals.items():
            r[j] = v
        rows.append(r)
        rel.append(relation)
        rhs.append(b)

    zar1, zab1 = col[("a", "r", 1)], col[("a", "b", 1)]
    zbr2, zba2 = col[("b", "r", 2)], col[("b", "a", 2)]
    zar3, zbr3 = col[("a", "r", 3)], col[("b", "r", 3)]
    zra4, zrb4 = col[("r", "a", 4)], col[("r", "b", 4)]
    zrb5, zab5 = col[("r", "b", 5)], col[("a", "b", 5)]
    zra6, zba6 = col[("r", "a", 6)], col[("b", "a", 6)]

    add({0: 1.0, zar1: -1.0, zab1: -1.0, zab5: -1.0, zar3: -1.0}, "=")
    add({1: 1.0, zbr2: -1.0, zba2: -1.0, zba6: -1.0, zbr3: -1.0}, "=")
    add({zar1: 1.0, 2: -bc1_relay}, "<=")
    add({zab1: 1.0, 2: -bc1_direct}, "<=")
    add({zbr2: 1.0, 3: -bc2_relay}, "<=")
    add({zba2: 1.0, 3: -bc2_direct}, "<=")
    add({zar3: 1.0, 4: -caps.c1}, "<=")
    add({zbr3: 1.0, 4: -caps.c2}, "<=")
    add({zar3: 1.0, zbr3: 1.0, 4: -caps.c12}, "<=")
    add({zra4: 1.0, 5: -caps.c1}, "<=")
    add({zrb4: 1.0, 5: -caps.c2}, "<=")
    add({zrb5: 1.0, 6: -caps.c2}, "<=")
    add({zab5: 1.0, 6: -caps.c3}, "<=")
    add({zrb5: 1.0, zab5: 1.0, 6: -caps.c23}, "<=")
    add({zra6: 1.0, 7: -caps.c1}, "<=")
    add({zba6: 1.0, 7: -caps.c3}, "<=")
    add({zra6: 1.0, zba6: 1.0, 7: -caps.c13}, "<=")
    add({zar1: 1.0, zar3: 1.0, zrb5: -1.0, zrb4: -1.0}, "=")
    add({zbr2: 1.0, zbr3: 1.0, zra6: -1.0, zra4: -1.0}, "=")
    add({j: 1.0 for j in range(2, 8)}, "=", 1.0)

    return np.array(rows), tuple(rel), rhs


def _df_point(k: float, gains: ChannelGains, alpha1: float, alpha2: float) -> BoundaryPoint:
    A, rel, rhs = _df_matrix(gains, alpha1, alpha2)
    x = _solve_ray(A, rel, rhs, k)
    flows = {name: float(x[8 + i]) for i, name in enumerate(_DF_FLOWS)}
    return BoundaryPoint(float(x[0]), float(x[1]),
                         TimeShares.from_sequence(x[2:8]),
                         flows=flows,
                         power_split=PowerSplit(alpha1, alpha2))


def six_state_df_boundary(k: float, gains: ChannelGains, alpha_grid: int = 33,
                          refine: bool = True) -> BoundaryPoint:
    """Six-state decode-and-forward protocol without side information.

    All six states carry flow variables; the two broadcast states split power
    between the relay-bound and direct-link messages.  The power splits are
    optimized over an ``alpha_grid`` x ``alpha_grid`` grid with one local
    refinement pass (a 9x9 sub-grid one base spacing wide around the best
    point).  Returns the best grid point.
    """
    if alpha_grid < 2:
        raise ValidationError(f"alpha_grid must be >= 2, got {alpha_grid}")
    if gains.gamma3 == 0.0:
        # the direct link carries nothing: every split gives the same LP
        return _df_point(k, gains, 1.0, 1.0)

    axis = np.linspace(0.0, 1.0, alpha_grid)
    best: BoundaryPoint | None = None
    best_obj = -1.0
    for a1 in axis:
        for a2 in axis:
            p = _df_point(k, gains, float(a1), float(a2))
            obj = p.ra if (isinstance(k, float) and math.isinf(k)) else p.rb
            if obj > best_obj:
                best, best_obj = p, obj
    assert best is not None

    if refine:
        radius = 1.0 / (alpha_grid - 1)
        b1, b2 = best.power_split.alpha1, best.power_split.alpha2
        sub1 = np.linspace(max(0.0, b1 - radius), min(1.0, b1 + radius), 9)
        sub2 = np.linspace(max(0.0, b2 - radius), min(1.0, b2 + radius), 9)
        for a1 in sub1:
            for a2 in sub2:
                p = _df_point(k, gains, float(a1), float(a2))
                obj = p.ra if (isinstance(k, float) and math.isinf(k)) else p.rb
                if obj > best_obj:
                    best, best_obj = p, obj
    return best
