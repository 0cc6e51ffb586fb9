import math
from fractions import Fraction

import mpmath
import pytest

from frobcensus.asymptotics import (
    ChebotarevProfile,
    Regime,
    balance,
    chebotarev_error,
    disc_bounds,
    exponent_table,
    li,
    log_li,
    optimal_theta,
    printed_theta,
    unconditional_exponents,
    unconditional_point,
    unconditional_profile,
)
from frobcensus.errors import InvalidInputError
from frobcensus.gsp import group_order


class TestLi:
    @pytest.mark.parametrize("X", [2.5, 10, 1e3, 1e6, 1e9])
    def test_against_mpmath(self, X):
        ref = float(mpmath.li(X) - mpmath.li(2))
        assert li(X) == pytest.approx(ref, rel=1e-9)

    def test_values(self):
        assert li(2) == 0.0
        assert li(1e6) == pytest.approx(78626.504, abs=1e-3)
        # the offset integral from 0 adds li(2) ~ 1.045
        assert li(1e6) + float(mpmath.li(2)) == pytest.approx(78627.5, abs=0.1)

    def test_monotone_and_asymptotic(self):
        xs = [2, 3, 10, 100, 1e4, 1e6]
        vals = [li(x) for x in xs]
        assert vals == sorted(vals)
        assert 1.0 < li(1e6) / (1e6 / math.log(1e6)) < 1.1

    def test_log_li(self):
        assert log_li(math.log(1e6)) == pytest.approx(math.log(li(1e6)))
        big = 1e5
        assert log_li(big) == pytest.approx(float(mpmath.log(mpmath.li(mpmath.exp(big)))), rel=1e-9)
        with pytest.raises(InvalidInputError):
            li(1.5)


class TestChebotarev:
    def test_disc_bounds(self):
        assert disc_bounds(ChebotarevProfile(7)) == (0.0, 7 * math.log(7))
        assert disc_bounds(ChebotarevProfile(1, (3, 5))) == (0.5 * math.log(15), 0.0)

    def test_a15_profile(self):
        n = group_order(2, 3, "gsp") * group_order(2, 5, "gsp")
        lo, hi = disc_bounds(ChebotarevProfile(n, (3, 5)))
        assert 0 < lo <= hi < math.inf

    def test_bad_profile(self):
        with pytest.raises(InvalidInputError):
            ChebotarevProfile(0)
        with pytest.raises(InvalidInputError):
            ChebotarevProfile(4, (4,))

    def test_trivial_extension(self):
        X = 1e6
        est = chebotarev_error(Regime.GRH, ChebotarevProfile(1), X)
        assert est.value == pytest.approx(math.sqrt(X) * math.log(X))

    def test_grh_scaling(self):
        prof = ChebotarevProfile(48, (2, 3), C_size=3)
        for X in (1e4, 1e8, 1e12):
            r = chebotarev_error(Regime.GRH, prof, X).value
            r2 = chebotarev_error(Regime.GRH, prof, X * X).value
            ratio = r2 / r / math.sqrt(X)
            assert 1.5 < ratio < 2.5
        huge = chebotarev_error(Regime.GRH, prof, log_x=1e4)
        assert huge.value == math.inf and huge.log_value > 0

    def test_other_regimes(self):
        prof = ChebotarevProfile(48, (2, 3), C_size=4, G_tilde=12)
        a = chebotarev_error(Regime.GRH, prof, 1e6).log_value
        b = chebotarev_error(Regime.GRH_AHC, prof, 1e6).log_value
        c = chebotarev_error(Regime.GRH_AHC_PCC, prof, 1e6).log_value
        assert c < b
        assert math.isfinite(a)
        with pytest.raises(InvalidInputError):
            chebotarev_error(Regime.GRH_AHC_PCC, ChebotarevProfile(48), 1e6)
        with pytest.raises(InvalidInputError):
            chebotarev_error(Regime.GRH, prof, 1.0)

    def test_unconditional_gate(self):
        prof = ChebotarevProfile(48, (2, 3), C_size=4)
        # #G (log|d_L|)^2 = 48 * 270^2 ~ 3.5e6
        threshold = 48 * disc_bounds(prof)[1] ** 2
        assert chebotarev_error(Regime.UNCONDITIONAL, prof, log_x=1.01 * threshold).gate
        assert not chebotarev_error(Regime.UNCONDITIONAL, prof, log_x=0.99 * threshold).gate
        assert not chebotarev_error(Regime.UNCONDITIONAL, prof, 1e6).gate


class TestTheta:
    def test_g2_values(self):
        assert optimal_theta(Regime.GRH, 2).theta == Fraction(1, 46)
        assert optimal_theta(Regime.GRH, 2).final_exponent == Fraction(45, 46)
        assert optimal_theta(Regime.GRH_AHC, 2).theta == Fraction(1, 30)
        pcc = optimal_theta(Regime.GRH_AHC_PCC, 2)
        assert pcc.theta == Fraction(1, 22)
        assert pcc.printed["g2"] == Fraction(1, 23) and not pcc.matches_printed
        js = pcc.to_json()
        assert js["status"] == "discrepancy" and "1/23" in json_text(js) and js["theta"] == "1/22"

    def test_printed_pcc_from_smaller_group(self):
        assert optimal_theta(Regime.GRH_AHC_PCC, 2, G_exponent=20).theta == Fraction(1, 23)

    @pytest.mark.parametrize("g", range(1, 7))
    def test_closed_forms(self, g):
        assert optimal_theta(Regime.GRH, g).theta == Fraction(1, 8 * g * g + 4 * g + 6)
        assert optimal_theta(Regime.GRH_AHC, g).theta == Fraction(1, 4 * g * g + 4 * g + 6)
        assert optimal_theta(Regime.GRH_AHC_PCC, g).theta == Fraction(1, 2 * g * g + 4 * g + 6)
        for r in (Regime.GRH, Regime.GRH_AHC, Regime.GRH_AHC_PCC):
            t = optimal_theta(r, g).theta
            assert isinstance(t, Fraction) and 0 < t < Fraction(1, 2)
            assert t == printed_theta(r, g)["general"]

    def test_balance_identity(self):
        for E in range(0, 40):
            t = balance(Fraction(E), 2)
            assert 1 - t == Fraction(1, 2) + t * (E + 6)

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            optimal_theta(Regime.UNCONDITIONAL, 2)
        with pytest.raises(InvalidInputError):
            optimal_theta(Regime.GRH, 0)


def json_text(obj):
    import json

    return json.dumps(obj)


class TestUnconditional:
    def test_g2_exponents(self):
        ex = unconditional_exponents(2)
        assert ex["gate_exponent"] == 66
        assert ex["z_log_power"] == Fraction(1, 66) and ex["z_loglog_power"] == Fraction(1, 33)
        assert ex["log_exponent"] == Fraction(67, 66)
        assert ex["loglog_exponent"] == Fraction(34, 33)

    def test_printed_values_flagged(self):
        prof, _ = unconditional_profile(2)
        assert not prof.matches_printed
        assert any("23/22" in n for n in prof.notes)
        assert prof.to_json()["status"] == "discrepancy"

    @pytest.mark.parametrize("log_x", [1e6, 1e8, 1e12, 10**3 * math.log(10)])
    def test_gate(self, log_x):
        pt = unconditional_point(2, log_x)
        assert pt.gate_ok and pt.z > 1

    def test_too_small(self):
        with pytest.raises(InvalidInputError):
            unconditional_point(2, 2.0)

    def test_table(self):
        rows = exponent_table(2)
        assert [r["regime"] for r in rows] == ["GRH", "GRH_AHC", "GRH_AHC_PCC", "UNCONDITIONAL"]
        assert rows[0]["theta"] == "1/46" and rows[0]["status"] == "match"
