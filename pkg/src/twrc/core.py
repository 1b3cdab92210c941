"""Scalar SNR/capacity arithmetic and validated channel configurations.

Rates are in bits per channel use; SNRs are linear (dimensionless) everywhere
inside the library. Decibels appear only at I/O boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ValidationError(ValueError):
    """An input violates the channel model's assumptions."""


def cap(gamma: float) -> float:
    """Capacity log2(1 + gamma) of a complex Gaussian channel with linear SNR gamma."""
    if not _finite(gamma) or gamma < 0.0:
        raise ValidationError(f"SNR must be finite and non-negative, got {gamma!r}")
    return math.log2(1.0 + gamma)


def db_to_linear(snr_db: float) -> float:
    """Convert an SNR from decibels to linear scale: 10^(snr_db / 10)."""
    if not _finite(snr_db):
        raise ValidationError(f"dB value must be finite, got {snr_db!r}")
    return 10.0 ** (snr_db / 10.0)


def linear_to_db(snr: float) -> float:
    """Convert a positive linear SNR to decibels."""
    if not _finite(snr) or snr <= 0.0:
        raise ValidationError(f"linear SNR must be finite and positive, got {snr!r}")
    return 10.0 * math.log10(snr)


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


@dataclass(frozen=True)
class ChannelGains:
    """Linear SNRs of the three links: gamma1 for a-r, gamma2 for b-r, gamma3 for a-b.

    Valid configurations have the direct link weaker than both relay links
    (gamma3 <= gamma1 and gamma3 <= gamma2) and the terminals ordered so that
    gamma1 <= gamma2.  ``swapped`` records that ``validate_gains`` exchanged
    the roles of a and b to restore the ordering, so results can be mirrored
    back to the caller's orientation.
    """

    gamma1: float
    gamma2: float
    gamma3: float
    swapped: bool = False

    def __post_init__(self) -> None:
        for name in ("gamma1", "gamma2", "gamma3"):
            v = getattr(self, name)
            if not _finite(v) or v < 0.0:
                raise ValidationError(f"{name} must be finite and non-negative, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.gamma1 > self.gamma2:
            raise ValidationError(
                f"gamma1 > gamma2 ({self.gamma1} > {self.gamma2}); relabel the "
                f"terminals (auto_swap) so the weaker relay link is gamma1"
            )
        if self.gamma3 > self.gamma1:
            raise ValidationError(
                f"gamma3 > gamma1 ({self.gamma3} > {self.gamma1}); the direct "
                f"link must be weaker than both relay links"
            )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.gamma1, self.gamma2, self.gamma3)


def validate_gains(g1: float, g2: float, g3: float, auto_swap: bool = False) -> ChannelGains:
    """Build a validated ChannelGains, optionally relabeling a/b to order the relay links.

    With ``auto_swap`` set and g1 > g2, the roles of the two terminals are
    exchanged and the swap is recorded on the result.  A direct link stronger
    than either relay link is rejected in any case.
    """
    for name, v in (("gamma1", g1), ("gamma2", g2), ("gamma3", g3)):
        if not _finite(v) or v < 0.0:
            raise ValidationError(f"{name} must be finite and non-negative, got {v!r}")
    swapped = False
    if auto_swap and g1 > g2:
        g1, g2 = g2, g1
        swapped = True
    return ChannelGains(g1, g2, g3, swapped=swapped)


@dataclass(frozen=True)
class LinkCaps:
    """Capacities of the link combinations that appear in the bound and protocol LPs.

    c1, c2, c3 are the single-link capacities of the a-r, b-r and a-b links;
    c12, c13, c23 are capacities of SNR sums (simultaneous receptions); the
    *_coh entries are the coherent two-transmitter capacities toward one node,
    C((sqrt(g_relay) + sqrt(g_direct))^2).
    """

    c1: float
    c2: float
    c3: float
    c12: float
    c13: float
    c23: float
    c13_coh: float
    c23_coh: float

    def swapped(self) -> "LinkCaps":
        """Relabel the two terminals (gamma1 <-> gamma2)."""
        return LinkCaps(
            c1=self.c2,
            c2=self.c1,
            c3=self.c3,
            c12=self.c12,
            c13=self.c23,
            c23=self.c13,
            c13_coh=self.c23_coh,
            c23_coh=self.c13_coh,
        )


def link_capacities(gains: ChannelGains) -> LinkCaps:
    """Precompute every capacity expression used by the bounds and protocols."""
    g1, g2, g3 = gains.gamma1, gains.gamma2, gains.gamma3
    return LinkCaps(
        c1=cap(g1),
        c2=cap(g2),
        c3=cap(g3),
        c12=cap(g1 + g2),
        c13=cap(g1 + g3),
        c23=cap(g2 + g3),
        c13_coh=cap((math.sqrt(g1) + math.sqrt(g3)) ** 2),
        c23_coh=cap((math.sqrt(g2) + math.sqrt(g3)) ** 2),
    )


_SHARE_TOL = 1e-9


@dataclass(frozen=True)
class TimeShares:
    """Fractions of channel uses spent in each of the six half-duplex network states."""

    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    lambda5: float
    lambda6: float

    def __post_init__(self) -> None:
        total = 0.0
        for i, v in enumerate(self.as_tuple(), start=1):
            if not _finite(v) or v < -_SHARE_TOL or v > 1.0 + _SHARE_TOL:
                raise ValidationError(f"lambda{i} must lie in [0, 1], got {v!r}")
            # clamp LP round-off so downstream consumers see clean fractions
            object.__setattr__(self, f"lambda{i}", min(max(float(v), 0.0), 1.0))
            total += max(float(v), 0.0)
        if total > 1.0 + _SHARE_TOL:
            raise ValidationError(f"time shares sum to {total}, above 1")

    @classmethod
    def from_sequence(cls, values) -> "TimeShares":
        vals = tuple(float(v) for v in values)
        if len(vals) != 6:
            raise ValidationError(f"expected 6 time shares, got {len(vals)}")
        return cls(*vals)

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3,
                self.lambda4, self.lambda5, self.lambda6)

    def active_states(self, threshold: float = 1e-7) -> frozenset[int]:
        """State numbers whose share exceeds ``threshold``."""
        return frozenset(i for i, v in enumerate(self.as_tuple(), start=1) if v > threshold)


ZERO_SHARES = TimeShares(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
