"""Saddle data, potential, asymptotic model, representation and torsion."""

import random

import pytest
from mpmath import mp, mpc, mpf

from fig8jones.cjones import u_ceiling
from fig8jones.errors import ArgError, DomainError
from fig8jones.geometry import (
    LONGITUDE_WORD,
    asymptotic_model,
    cs_invariant,
    fourth_quadrant_sqrt,
    phi_of_u,
    potential,
    potential_d1,
    potential_d2,
    rep_data,
    s_of_u,
    saddle_point,
    t_of_u,
    torsion_lambda,
    torsion_mu,
    torus_S_k,
    torus_T_k,
)
from fig8jones.precision import BigComplex, rel_distance

IM_LI2_SIXTH_ROOT = "1.01494160640965362502120255427452028594168931"

PREC = 256


def _grid(n, lo="0.01", frac_hi="0.995"):
    with mp.workprec(PREC):
        a = mpf(lo)
        b = u_ceiling(PREC) * mpf(frac_hi)
        return [a + (b - a) * k / (n - 1) for k in range(n)]


# -- phi ------------------------------------------------------------------


# log((3+sqrt(5))/2) truncated (not rounded), so it stays below the exact
# ceiling at any working precision
U_MAX_TRUNC = "0.962423650119206894995517826848736846270"


def test_phi_endpoints():
    with mp.workprec(PREC):
        lo = phi_of_u(0, PREC).to_mpc()
        assert abs(lo + mpc(0, mp.pi / 3)) < mpf(10) ** -70
        # phi ~ -sqrt(c - 3)-ish near the branch point: half the digits of
        # the 40-digit offset survive
        hi = phi_of_u(U_MAX_TRUNC, PREC).to_mpc()
        assert abs(hi) < mpf(10) ** -18


def test_phi_is_purely_imaginary_and_solves_cosh_equation():
    for u in _grid(9):
        v = phi_of_u(u, PREC)
        assert abs(v.re) < mpf(10) ** -70
        with mp.workprec(PREC):
            resid = 2 * mp.cosh(v.to_mpc()) - (2 * mp.cosh(u) - 1)
            assert abs(resid) < mpf(10) ** -70
            assert -mp.pi / 3 <= v.im <= 0


def test_phi_rejects_u_outside_closed_interval():
    with pytest.raises(DomainError):
        phi_of_u("-0.01", PREC)
    with pytest.raises(DomainError):
        phi_of_u("0.97", PREC)


# -- saddle point ---------------------------------------------------------


def test_saddle_at_u_zero_is_five_sixths():
    sd = saddle_point(0, PREC)
    with mp.workprec(PREC):
        assert abs(sd.w0.to_mpc() - mpf(5) / 6) < mpf(10) ** -70


def test_saddle_at_ceiling():
    with mp.workprec(PREC):
        um = mpf(U_MAX_TRUNC)
        sd = saddle_point(um, PREC)
        xi = mpc(um, 2 * mp.pi)
        assert abs(sd.w0.to_mpc() - 2j * mp.pi / xi) < mpf(10) ** -18


def test_gradient_vanishes_at_saddle():
    for u in ("0.1", "0.4", "0.7", "0.9"):
        sd = saddle_point(u, PREC)
        g = potential_d1(sd.w0, u, PREC)
        with mp.workprec(PREC):
            assert abs(g.to_mpc()) < mpf(10) ** -70


def test_second_derivative_data_matches_potential():
    for u in ("0.3", "0.85"):
        sd = saddle_point(u, PREC)
        d2 = potential_d2(sd.w0, u, PREC)
        assert rel_distance(sd.phi_dd_at_w0, d2) < mpf(10) ** -70


# -- the potential --------------------------------------------------------


def test_potential_special_values_at_u_zero():
    with mp.workprec(PREC):
        mid = potential(BigComplex.make("0.5", PREC), 0).to_mpc()
        assert abs(mid) < mpf(10) ** -70
        peak = potential(BigComplex.make(mpf(5) / 6, PREC), 0).to_mpc()
        assert abs(peak - mpf(IM_LI2_SIXTH_ROOT) / mp.pi) < mpf(10) ** -40
        assert abs(peak.imag) < mpf(10) ** -70


def test_potential_rejects_points_off_the_strip():
    for w, u in ((0, "0.5"), (1, 0), (mpc(2, 0), "0.3"), (mpc("0.5", "-4"), "0.9")):
        with pytest.raises(DomainError):
            potential(BigComplex.make(w, PREC), u)


def test_derivatives_match_finite_differences():
    """Centered differences at 20 seeded random strip points.

    Step 1e-12 at 300 bits: truncation ~ h^2, roundoff ~ 1e-78, so any
    disagreement beyond 1e-20 is a formula error, not noise.
    """
    rnd = random.Random(88)
    prec = 300
    with mp.workprec(prec):
        h = mpf(10) ** -12
        worst1 = worst2 = mpf(0)
        for _ in range(20):
            u = mpf(str(0.05 + 0.85 * rnd.random()))
            x = 0.05 + 0.9 * rnd.random()
            y = -1.5 + 3 * rnd.random()
            w = mpc(str(x), str(y))
            # keep the sample clear of the strip edges
            coord = u * w.imag + 2 * mp.pi * w.real
            if not (mpf("0.3") < coord < 2 * mp.pi - mpf("0.3")):
                w = mpc(str(x), 0)
            f = lambda z: potential(BigComplex.make(z, prec), u).to_mpc()
            d1 = potential_d1(BigComplex.make(w, prec), u).to_mpc()
            d2 = potential_d2(BigComplex.make(w, prec), u).to_mpc()
            fd1 = (f(w + h) - f(w - h)) / (2 * h)
            fd2 = (f(w + h) - 2 * f(w) + f(w - h)) / (h * h)
            worst1 = max(worst1, abs(d1 - fd1))
            worst2 = max(worst2, abs(d2 - fd2))
        assert worst1 < mpf(10) ** -20
        assert worst2 < mpf(10) ** -15


def test_curvature_at_real_saddle():
    with mp.workprec(PREC):
        d2 = potential_d2(BigComplex.make(mpf(5) / 6, PREC), 0).to_mpc()
        assert abs(d2 + 2 * mp.pi * mp.sqrt(3)) < mpf(10) ** -70


# -- S, T, and the growth identity ---------------------------------------


def test_s_at_zero_is_i_times_volume():
    with mp.workprec(PREC):
        v = s_of_u(0, PREC).to_mpc()
        vol = 2 * mpf(IM_LI2_SIXTH_ROOT)
        assert abs(v - mpc(0, vol)) < mpf(10) ** -40


def test_t_at_zero():
    with mp.workprec(PREC):
        v = t_of_u(0, PREC).to_mpc()
        assert abs(v + 2j / mp.sqrt(3)) < mpf(10) ** -70


def test_s_equals_xi_phi_at_saddle_plus_winding():
    """S(u) = xi Phi(w0) + 2 pi i u ties the closed form to the potential."""
    from fig8jones.geometry import _potential_raw

    for u in _grid(8):
        with mp.workprec(PREC + 10):
            sd = saddle_point(u, PREC)
            xi = mpc(u, 2 * mp.pi)
            lhs = s_of_u(u, PREC).to_mpc()
            rhs = xi * _potential_raw(sd.w0.to_mpc(), u) + 2j * mp.pi * u
            assert abs(lhs - rhs) < mpf(10) ** -70


def test_growth_exponent_grid():
    """Re(xi Phi(w0)) = 0 and Im strictly decreasing with negative closed-form
    derivative 2 arg(1 - e^{-u-phi}) + Im phi, across the whole u range."""
    from fig8jones.geometry import _phi_raw, _potential_raw

    prev = None
    for u in _grid(25):
        with mp.workprec(PREC + 10):
            sd = saddle_point(u, PREC)
            xi = mpc(u, 2 * mp.pi)
            val = xi * _potential_raw(sd.w0.to_mpc(), u)
            assert abs(val.real) < mpf(10) ** -40
            assert val.imag > 0
            if prev is not None:
                assert val.imag < prev
            prev = val.imag
            deriv = 2 * mp.arg(1 - mp.exp(-u - _phi_raw(u))) + _phi_raw(u).imag
            assert deriv < 0


def test_growth_derivative_formula_against_finite_difference():
    from fig8jones.geometry import _phi_raw, _potential_raw

    def im_growth(u):
        sd = saddle_point(u, 256)
        with mp.workprec(266):
            return (mpc(u, 2 * mp.pi) * _potential_raw(sd.w0.to_mpc(), mpf(u))).imag

    with mp.workprec(266):
        for u in (mpf("0.2"), mpf("0.6")):
            h = mpf(10) ** -20
            fd = (im_growth(u + h) - im_growth(u - h)) / (2 * h)
            expr = 2 * mp.arg(1 - mp.exp(-u - _phi_raw(u))) + _phi_raw(u).imag
            assert abs(fd - expr) < mpf(10) ** -35


def test_asymptotic_model_bundles_consistent_pieces():
    m = asymptotic_model("0.5", PREC)
    assert rel_distance(m.S_u, s_of_u("0.5", PREC)) == 0
    assert rel_distance(m.T_u, t_of_u("0.5", PREC)) == 0
    sd = saddle_point("0.5", PREC)
    with mp.workprec(PREC):
        sq = m.sqrt_neg_phidd.to_mpc()
        assert sq.real >= 0 and sq.imag <= 0
        assert abs(sq * sq + sd.phi_dd_at_w0.to_mpc()) < mpf(10) ** -70


# -- fourth-quadrant square root ------------------------------------------


def test_fourth_quadrant_sqrt_branch():
    with mp.workprec(128):
        assert fourth_quadrant_sqrt(BigComplex.make(4, 128)).to_mpc() == 2
        v = fourth_quadrant_sqrt(BigComplex.make(-4, 128)).to_mpc()
        assert abs(v + 2j) < mpf(10) ** -35
        w = fourth_quadrant_sqrt(BigComplex.make(mpc(0, -1), 128)).to_mpc()
        assert w.real > 0 and w.imag < 0
        assert abs(w * w - mpc(0, -1)) < mpf(10) ** -35
    for bad in (mpc(0, 1), mpc(2, 3), mpc(-1, "0.001")):
        with pytest.raises(ArgError):
            fourth_quadrant_sqrt(BigComplex.make(bad, 128))


# -- representation and torsion -------------------------------------------


def _mat(rows):
    return [[e.to_mpc() for e in row] for row in rows]


def _mul(A, B):
    return [
        [A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]],
        [A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]],
    ]


def _inv(A):
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    return [[A[1][1] / det, -A[0][1] / det], [-A[1][0] / det, A[0][0] / det]]


def _word(word, X, Y):
    M = [[mpc(1), mpc(0)], [mpc(0), mpc(1)]]
    table = {"x": X, "y": Y, "X": _inv(X), "Y": _inv(Y)}
    for ch in word:
        M = _mul(M, table[ch])
    return M


def test_representation_satisfies_knot_group_relation():
    """wx = yw for w = x y^-1 x^-1 y, the defining relation of the group."""
    rd = rep_data("0.4", "plus", PREC)
    with mp.workprec(PREC + 10):
        X, Y = _mat(rd.rho_x), _mat(rd.rho_y)
        for M in (X, Y):
            assert abs(M[0][0] * M[1][1] - M[0][1] * M[1][0] - 1) < mpf(10) ** -70
        lhs = _word("xYXyx", X, Y)
        rhs = _word("yxYXy", X, Y)
        resid = max(abs(lhs[i][j] - rhs[i][j]) for i in range(2) for j in range(2))
        assert resid < mpf(10) ** -70


def test_longitude_eigenvalue_matches_word_trace():
    rd = rep_data("0.4", "plus", PREC)
    with mp.workprec(PREC + 10):
        X, Y = _mat(rd.rho_x), _mat(rd.rho_y)
        M = _word(LONGITUDE_WORD, X, Y)
        ell = rd.ell.to_mpc()
        assert abs(M[0][0] + M[1][1] - ell - 1 / ell) < mpf(10) ** -70
        assert abs(abs(ell) - 1) < mpf(10) ** -70
        assert 0 < rd.cone_angle < 2 * mp.pi


def test_longitude_trace_identity():
    # 17 + 4 Tr rho(longitude) = (2 e^u + 2 e^-u - 1)^2
    rd = rep_data("0.4", "plus", PREC)
    with mp.workprec(PREC + 10):
        ell = rd.ell.to_mpc()
        c = 2 * mp.cosh(mpf("0.4"))
        assert abs(17 + 4 * (ell + 1 / ell) - (2 * c - 1) ** 2) < mpf(10) ** -70


def test_branch_choices_are_the_two_quadratic_roots():
    with mp.workprec(PREC + 10):
        u = mpf("0.37")
        dp = rep_data(u, "plus", PREC).d.to_mpc()
        dm = rep_data(u, "minus", PREC).d.to_mpc()
        c = 2 * mp.cosh(u)
        assert abs(dp + dm - (c - 3)) < mpf(10) ** -70
        assert abs(dp * dm - (3 - c)) < mpf(10) ** -70
        lp = rep_data(u, "plus", PREC).ell.to_mpc()
        lm = rep_data(u, "minus", PREC).ell.to_mpc()
        assert abs(lp * lm - 1) < mpf(10) ** -70
    with pytest.raises(ArgError):
        rep_data("0.4", "both", PREC)
    with pytest.raises(DomainError):
        rep_data(0, "plus", PREC)


def test_torsion_closed_forms():
    with mp.workprec(PREC):
        lam = torsion_lambda("0.5", PREC).to_mpc()
        expected = 1 / (2 * mp.exp(mpf("0.5")) + 2 * mp.exp(mpf("-0.5")) - 1)
        assert abs(lam - expected) < mpf(10) ** -70
        mu2 = torsion_mu("0.5", PREC).to_mpc() ** 2
        t2 = t_of_u("0.5", PREC).to_mpc() ** 2
        assert abs(mu2 - t2) < mpf(10) ** -70


def test_cs_invariant_limit_and_continuity():
    with mp.workprec(PREC):
        vol = 2 * mpf(IM_LI2_SIXTH_ROOT)
        near = cs_invariant("1e-7", PREC).to_mpc()
        assert abs(near - mpc(0, vol)) < mpf(10) ** -5
        assert abs(rep_data("1e-7", "plus", PREC).cone_angle - 2 * mp.pi) < mpf(10) ** -5
        a = cs_invariant("0.50", PREC).to_mpc()
        b = cs_invariant("0.5001", PREC).to_mpc()
        assert abs(a - b) < mpf("0.01")


def test_cs_invariant_formula():
    with mp.workprec(PREC + 10):
        u = mpf("0.5")
        S = s_of_u(u, PREC).to_mpc()
        v = rep_data(u, "plus", PREC).v.to_mpc()
        got = cs_invariant(u, PREC).to_mpc()
        assert abs(got - (S - 1j * mp.pi * u - u * v / 4)) < mpf(10) ** -70


# -- torus-knot analogues -------------------------------------------------


def test_torus_torsion_pattern_for_trefoil():
    with mp.workprec(128):
        vals = [torus_T_k(2, 3, k, 128) for k in range(1, 6)]
        assert abs(vals[0] - 2) < mpf(10) ** -35
        assert vals[1] == 0 and vals[2] == 0 and vals[3] == 0
        assert abs(vals[4] - 2) < mpf(10) ** -35


def test_torus_growth_closed_form():
    with mp.workprec(192):
        v = torus_S_k(2, 3, 1, BigComplex.make(0, 192)).to_mpc()
        assert abs(v - 25 * mp.pi ** 2 / 6) < mpf(10) ** -50
        # at u = 0 every S_k is real for any (a, b)
        for k in (1, 2, 7):
            w = torus_S_k(3, 5, k, BigComplex.make(0, 192)).to_mpc()
            assert abs(w.imag) < mpf(10) ** -50


def test_torus_argument_validation():
    for a, b, k in ((2, 4, 1), (2, 3, 0), (2, 3, 6), (1, 3, 1)):
        with pytest.raises(ArgError):
            torus_T_k(a, b, k, 128)
    with mp.workprec(128):
        assert abs(torus_T_k(2, 5, 3, 128) - torus_T_k(5, 2, 3, 128)) < mpf(10) ** -35
