import math

import numpy as np
import pytest

from twrc import (
    cap,
    comabc_boundary,
    hbc_boundary,
    link_capacities,
    mabc_boundary,
    outer_ratio_bound,
    six_state_boundary,
    six_state_df_boundary,
    validate_gains,
)
from conftest import random_gains

# closed form C(1)C(2)/(2C(1) + C(2)) for unit gains at k = 1
MABC_UNIT_SYMMETRIC = 0.4421141086977403
# closed form R*/(1 + R*) with R* = log2(1.5) for unit gains at k = 1
COMABC_UNIT_SYMMETRIC = 0.3690702464285426


def mabc_grid_oracle(k, gains, step=0.002):
    """Brute-force sweep of the two-phase time split."""
    caps = link_capacities(gains)
    best = 0.0
    for lam3 in np.arange(0.0, 1.0 + step / 2, step):
        lam4 = 1.0 - lam3
        limits = [lam3 * caps.c2, lam4 * caps.c1, lam3 * caps.c12 / (1.0 + k)]
        if k > 0:
            limits += [lam3 * caps.c1 / k, lam4 * caps.c2 / k]
        best = max(best, min(limits))
    return best


def hbc_grid_oracle(k, gains, step=0.02):
    """Vectorized sweep over the four-phase simplex."""
    caps = link_capacities(gains)
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    l1, l2, l3 = np.meshgrid(ticks, ticks, ticks, indexing="ij")
    keep = l1 + l2 + l3 <= 1.0 + 1e-12
    l1, l2, l3 = l1[keep], l2[keep], l3[keep]
    l4 = 1.0 - l1 - l2 - l3
    limits = [
        (l2 + l3) * caps.c2,
        l2 * caps.c3 + l4 * caps.c1,
        (l1 * caps.c1 + l2 * caps.c2 + l3 * caps.c12) / (1.0 + k),
    ]
    if k > 0:
        limits += [
            (l1 + l3) * caps.c1 / k,
            (l1 * caps.c3 + l4 * caps.c2) / k,
        ]
    return float(np.min(limits, axis=0).max())


class TestMabc:
    def test_unit_gains_symmetric(self):
        g = validate_gains(1.0, 1.0, 0.5)  # gamma3 unused by the protocol
        p = mabc_boundary(1.0, g)
        assert p.rb == pytest.approx(MABC_UNIT_SYMMETRIC, abs=1e-9)
        assert p.ra == pytest.approx(p.rb)
        assert p.rb >= mabc_grid_oracle(1.0, g) - 1e-9

    def test_two_hop_at_k_zero(self):
        g = validate_gains(1.0, 3.0, 0.0)
        assert mabc_boundary(0.0, g).rb == pytest.approx(2.0 / 3.0, abs=1e-9)

    def test_zero_gains(self):
        p = mabc_boundary(1.0, validate_gains(0.0, 0.0, 0.0))
        assert (p.ra, p.rb) == (0.0, 0.0)

    def test_only_states_3_and_4(self, case_a):
        p = mabc_boundary(1.0, case_a)
        assert p.shares.active_states() <= {3, 4}

    def test_grid_oracle_case_a(self, case_a):
        p = mabc_boundary(1.0, case_a)
        oracle = mabc_grid_oracle(1.0, case_a)
        assert p.rb >= oracle - 1e-9
        assert p.rb <= oracle + 0.01  # grid underestimates by at most L * step


class TestHbc:
    def test_contains_mabc(self, case_a):
        rng = np.random.default_rng(2)
        for g in random_gains(rng, 15) + [case_a]:
            for k in (0.25, 1.0, 4.0):
                assert hbc_boundary(k, g).rb >= mabc_boundary(k, g).rb - 1e-9

    def test_reduces_to_mabc_without_direct_link(self):
        g = validate_gains(1.0, 1.0, 0.0)
        assert hbc_boundary(1.0, g).rb == pytest.approx(MABC_UNIT_SYMMETRIC, abs=1e-9)

    def test_tdbc_restriction_is_smaller(self, case_a):
        rng = np.random.default_rng(8)
        for g in random_gains(rng, 15) + [case_a]:
            for k in (0.5, 1.0, 2.0):
                full = hbc_boundary(k, g).rb
                tdbc = hbc_boundary(k, g, tdbc_only=True).rb
                assert tdbc <= full + 1e-9

    def test_tdbc_uses_no_state_3(self, case_a):
        p = hbc_boundary(1.0, case_a, tdbc_only=True)
        assert p.shares.lambda3 == 0.0

    def test_grid_oracle_case_a(self, case_a):
        p = hbc_boundary(1.0, case_a)
        oracle = hbc_grid_oracle(1.0, case_a)
        assert p.rb >= oracle - 1e-9
        assert p.rb <= oracle + 0.25  # coarse grid, Lipschitz slack


class TestSixStateDf:
    def test_unit_gains_no_direct_link(self):
        g = validate_gains(1.0, 1.0, 0.0)
        p = six_state_df_boundary(1.0, g, alpha_grid=5)
        assert p.rb == pytest.approx(MABC_UNIT_SYMMETRIC, abs=1e-9)

    def test_zero_gains(self):
        p = six_state_df_boundary(1.0, validate_gains(0.0, 0.0, 0.0), alpha_grid=3)
        assert (p.ra, p.rb) == (0.0, 0.0)

    def test_flow_conservation_at_optimum(self, case_a):
        p = six_state_df_boundary(1.0, case_a, alpha_grid=5, refine=False)
        z = p.flows
        up_a = z[("a", "r", 1)] + z[("a", "r", 3)]
        down_b = z[("r", "b", 5)] + z[("r", "b", 4)]
        up_b = z[("b", "r", 2)] + z[("b", "r", 3)]
        down_a = z[("r", "a", 6)] + z[("r", "a", 4)]
        assert up_a == pytest.approx(down_b, abs=1e-9)
        assert up_b == pytest.approx(down_a, abs=1e-9)

    def test_rate_composition(self, case_a):
        p = six_state_df_boundary(1.0, case_a, alpha_grid=3, refine=False)
        z = p.flows
        ra = z[("a", "r", 1)] + z[("a", "b", 1)] + z[("a", "b", 5)] + z[("a", "r", 3)]
        rb = z[("b", "r", 2)] + z[("b", "a", 2)] + z[("b", "a", 6)] + z[("b", "r", 3)]
        assert ra == pytest.approx(p.ra, abs=1e-9)
        assert rb == pytest.approx(p.rb, abs=1e-9)

    def test_grid_includes_full_power_corner(self, case_a):
        best = six_state_df_boundary(1.0, case_a, alpha_grid=3, refine=False)
        from twrc.achievable import _df_point
        corner = _df_point(1.0, case_a, 1.0, 1.0)
        assert best.rb >= corner.rb - 1e-12

    def test_refinement_never_hurts(self, case_a):
        coarse = six_state_df_boundary(1.0, case_a, alpha_grid=5, refine=False)
        refined = six_state_df_boundary(1.0, case_a, alpha_grid=5, refine=True)
        assert refined.rb >= coarse.rb - 1e-12


class TestSixState:
    def test_contains_hbc(self, case_a):
        rng = np.random.default_rng(14)
        for g in random_gains(rng, 15) + [case_a]:
            for k in (0.25, 1.0, 4.0):
                assert six_state_boundary(k, g).rb >= hbc_boundary(k, g).rb - 1e-9

    def test_between_hbc_and_outer(self, case_a):
        v = six_state_boundary(1.0, case_a).rb
        assert hbc_boundary(1.0, case_a).rb - 1e-9 <= v
        assert v <= outer_ratio_bound(1.0, case_a).rb + 1e-6

    def test_zero_gains(self):
        p = six_state_boundary(1.0, validate_gains(0.0, 0.0, 0.0))
        assert (p.ra, p.rb) == (0.0, 0.0)


class TestComabc:
    def test_unit_gains_symmetric(self):
        g = validate_gains(1.0, 1.0, 0.0)
        p = comabc_boundary(1.0, g)
        assert p.rb == pytest.approx(COMABC_UNIT_SYMMETRIC, abs=1e-9)

    def test_clipped_uplink_rate_blocks_a(self):
        # gamma1/(gamma1+gamma2) + gamma1 < 1 clips R*_ar to zero
        g = validate_gains(0.2, 2.0, 0.1)
        p = comabc_boundary(1.0, g)
        assert p.ra == pytest.approx(0.0, abs=1e-12)

    def test_worse_than_six_state_at_low_snr(self):
        g = validate_gains(1.0, 10 ** 0.5, 10 ** -0.7)
        assert comabc_boundary(1.0, g).rb < six_state_boundary(1.0, g).rb

    def test_uses_states_3_4_6(self, case_c):
        p = comabc_boundary(1.0, case_c)
        assert p.shares.active_states() <= {3, 4, 6}


class TestCrossProtocolProperties:
    def test_safety_under_outer_bound(self):
        rng = np.random.default_rng(77)
        for g in random_gains(rng, 20):
            for k in (0.5, 1.0, 2.0):
                outer_rb = outer_ratio_bound(k, g).rb
                assert mabc_boundary(k, g).rb <= outer_rb + 1e-6
                assert hbc_boundary(k, g).rb <= outer_rb + 1e-6
                assert six_state_boundary(k, g).rb <= outer_rb + 1e-6
                assert comabc_boundary(k, g).rb <= outer_rb + 1e-6

    def test_symmetry_for_equal_relay_links(self):
        g = validate_gains(20.0, 20.0, 3.0)
        for k in (0.25, 0.5, 2.0, 4.0):
            for fn in (mabc_boundary, hbc_boundary, six_state_boundary):
                p, q = fn(k, g), fn(1.0 / k, g)
                assert q.rb == pytest.approx(p.ra, abs=1e-8)
            pdf = six_state_df_boundary(k, g, alpha_grid=3, refine=False)
            qdf = six_state_df_boundary(1.0 / k, g, alpha_grid=3, refine=False)
            assert qdf.rb == pytest.approx(pdf.ra, abs=1e-8)

    def test_monotone_in_gains(self):
        g = validate_gains(5.0, 10.0, 1.0)
        bigger = validate_gains(5.0, 15.0, 1.0)
        for fn in (mabc_boundary, hbc_boundary, six_state_boundary):
            assert fn(1.0, bigger).rb >= fn(1.0, g).rb - 1e-9

    def test_ra_axis_mode(self, case_a):
        for fn in (mabc_boundary, hbc_boundary, six_state_boundary, comabc_boundary):
            p = fn(math.inf, case_a)
            assert p.rb == 0.0
            assert p.ra > 0.0
