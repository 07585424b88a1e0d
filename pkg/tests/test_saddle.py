"""Contour reconstruction, steepest descent, and the Laplace approximation.

The reconstruction oracle (exact sum vs residue integral) and the half-sum
decay law make this the slowest test file; everything here runs in minutes,
not seconds, by design.
"""

import pytest
from mpmath import mp, mpc, mpf

from fig8jones.cjones import KnotParam, eval_at_xi
from fig8jones.errors import ArgError, DomainError
from fig8jones.geometry import potential, saddle_point, _potential_raw
from fig8jones.precision import BigComplex, rel_distance
from fig8jones.saddle import (
    ContourPath,
    N_MAX_CONTOUR,
    _side_integrals,
    _tan_term,
    contour_c,
    integrate_exp_nphi,
    phi_only_param,
    reconstruct_jn_via_contour,
    saddle_approx,
    steepest_path,
)

J2_AT_U_HALF = "5.318078130171907922771041157846101130729"

PREC = 192


# -- contour construction -------------------------------------------------


def test_contour_vertices():
    p = KnotParam.make(10, "0.5", PREC)
    with mp.workprec(PREC):
        s = mpf("0.5") / (2 * mp.pi)
        minus = contour_c("0.01", p, "minus")
        assert minus.kind == "polygonal"
        got = [v.to_mpc() for v in minus.vertices]
        want = [mpc("0.01"), mpc(s, -1), mpc(1 + s, -1), mpc("0.99")]
        assert max(abs(a - b) for a, b in zip(got, want)) < mpf(10) ** -50
        plus = contour_c("0.01", p, "plus")
        got = [v.to_mpc() for v in plus.vertices]
        want = [mpc("0.99"), mpc(1 - s - mpf("0.01"), 1), mpc(-s + mpf("0.01"), 1),
                mpc("0.01")]
        assert max(abs(a - b) for a, b in zip(got, want)) < mpf(10) ** -50


def test_contour_degenerates_to_rectangle_at_u_zero():
    p = KnotParam.make(4, 0, PREC)
    with mp.workprec(PREC):
        minus = [v.to_mpc() for v in contour_c("0.05", p, "minus").vertices]
        assert minus[1] == mpc(0, -1) and minus[2] == mpc(1, -1)
        plus = [v.to_mpc() for v in contour_c("0.05", p, "plus").vertices]
        assert plus[1].imag == 1 and plus[2].imag == 1


def test_contour_eps_validation():
    p = KnotParam.make(10, "0.5", PREC)
    for eps in ("0.025", "0.3", "0", "-0.01"):
        with pytest.raises(ArgError):
            contour_c(eps, p, "minus")
    with pytest.raises(ArgError):
        contour_c("0.01", p, "lower")


def test_closed_contour_encloses_exactly_the_tan_poles():
    """Winding number of C_- followed by C_+ around each pole (2k+1)/(2N)
    is 1, and 0 around points just outside."""
    p = KnotParam.make(6, "0.5", 128)
    with mp.workprec(128):
        ring = [v.to_mpc() for v in contour_c("0.02", p, "minus").vertices] \
            + [v.to_mpc() for v in contour_c("0.02", p, "plus").vertices][1:]

    def winding(pole):
        total = 0.0
        import cmath
        pts = []
        for a, b in zip(ring[:-1], ring[1:]):
            for t in range(60):
                z = a + (b - a) * t / 60
                pts.append(complex(z.real, z.imag))
        pts.append(pts[0])
        for a, b in zip(pts[:-1], pts[1:]):
            total += cmath.phase((b - pole) / (a - pole))
        return total / (2 * cmath.pi)

    for k in range(6):
        w = winding((2 * k + 1) / 12.0)
        assert abs(w - 1) < 1e-6
    for outside in (-0.5, 1.5, 0.5 + 2j, 0.5 - 2j):
        assert abs(winding(outside)) < 1e-6


def test_tan_residue():
    # residue of tan(N pi w) at w = (2k+1)/(2N) is -1/(N pi): check by a
    # small circle quadrature and by the limit delta * tan
    N = 5
    with mp.workprec(128):
        pole = mpf(3) / (2 * N)
        rad = mpf(1) / (8 * N)

        def f(theta):
            z = pole + rad * mp.exp(mpc(0, theta))
            return _tan_term(N, z) * mpc(0, 1) * rad * mp.exp(mpc(0, theta))

        ring = mp.quad(f, [0, 2 * mp.pi]) / (2j * mp.pi)
        assert abs(ring + 1 / (N * mp.pi)) < mpf(10) ** -20
        # delta large enough that the rounding of 3/10 (~2^-130) stays
        # negligible after the 1/delta amplification
        delta = mpf(10) ** -15
        assert abs(delta * _tan_term(N, pole + delta) + 1 / (N * mp.pi)) < mpf(10) ** -20


# -- the reconstruction oracle --------------------------------------------


def test_reconstruction_matches_exact_sum():
    p = KnotParam.make(5, "0.5", 256)
    got = reconstruct_jn_via_contour(p)
    want = eval_at_xi(p)
    assert rel_distance(got, want) < mpf(10) ** -6


def test_reconstruction_color_one_is_one():
    p = KnotParam.make(1, "0.3", 256)
    assert rel_distance(reconstruct_jn_via_contour(p), 1) < mpf(10) ** -6


def test_reconstruction_frozen_color_two():
    p = KnotParam.make(2, "0.5", 256)
    got = reconstruct_jn_via_contour(p)
    assert rel_distance(got, J2_AT_U_HALF) < mpf(10) ** -8


def test_reconstruction_near_ceiling():
    p = KnotParam.make(3, "0.9", 256)
    got = reconstruct_jn_via_contour(p)
    want = eval_at_xi(p)
    assert rel_distance(got, want) < mpf(10) ** -6


def test_reconstruction_routes_agree():
    """The shallow rectangle and the documented parallelogram sides are
    homotopic; their disagreement is pure quadrature noise."""
    p = KnotParam.make(3, "0.5", 256)
    a = reconstruct_jn_via_contour(p, route="shallow")
    b = reconstruct_jn_via_contour(p, route="sides")
    assert rel_distance(a, b) < mpf(10) ** -8


def test_reconstruction_validation():
    with pytest.raises(ArgError):
        reconstruct_jn_via_contour(KnotParam.make(N_MAX_CONTOUR + 1, "0.5", 128))
    with pytest.raises(ArgError):
        reconstruct_jn_via_contour(KnotParam.make(3, "0.5", 128), route="sideways")
    with pytest.raises(ArgError):
        reconstruct_jn_via_contour(KnotParam.make(3, "0.5", 128), eps="0.25")
    with pytest.raises(DomainError):
        reconstruct_jn_via_contour(KnotParam.make(3, 0, 128))


# -- steepest descent -----------------------------------------------------


@pytest.mark.parametrize("u", ["0.1", "0.5", "0.9"])
def test_steepest_path_has_constant_phase(u):
    path = steepest_path(u, 200, 192)
    assert path.kind == "steepest"
    sd = saddle_point(u, 192)
    with mp.workprec(192):
        uu = mpf(u)
        im0 = _potential_raw(sd.w0.to_mpc(), uu).imag
        worst = mpf(0)
        joins = 0
        for v in path.vertices:
            w = v.to_mpc()
            coord = uu * w.imag + 2 * mp.pi * w.real
            assert 0 < coord < 2 * mp.pi
            if w.imag == 0 and abs(w - sd.w0.to_mpc()) > mpf("0.01"):
                joins += 1  # straight-join endpoints live on the real axis
                continue
            worst = max(worst, abs(_potential_raw(w, uu).imag - im0))
        assert joins <= 2
        assert worst < mpf(10) ** -8


def test_steepest_path_peaks_at_saddle():
    path = steepest_path("0.5", 200, 192)
    sd = saddle_point("0.5", 192)
    with mp.workprec(192):
        w0 = sd.w0.to_mpc()
        re0 = _potential_raw(w0, mpf("0.5")).real
        for v in path.vertices:
            w = v.to_mpc()
            if abs(w - w0) < mpf(10) ** -25:
                continue
            assert _potential_raw(w, mpf("0.5")).real < re0


def test_steepest_path_approaches_real_saddle_as_u_vanishes():
    path = steepest_path("0.01", 60, 192)
    with mp.workprec(192):
        gap = min(abs(v.to_mpc() - mpf(5) / 6) for v in path.vertices)
        assert gap < mpf("0.01")
        assert abs(saddle_point("0.01", 192).w0.to_mpc() - mpf(5) / 6) < mpf("0.01")


def test_steepest_path_validation():
    with pytest.raises(ArgError):
        steepest_path("0.5", 4, 192)
    with pytest.raises(DomainError):
        steepest_path("0.97", 60, 192)
    with pytest.raises(DomainError):
        steepest_path(0, 60, 192)


# -- exp(N Phi) integrals -------------------------------------------------


def test_integral_with_zero_weight_measures_the_endpoints():
    # N = 0 turns the integrand into the constant 1, so any admissible
    # path gives 0.99 - 0.01 exactly
    p = phi_only_param(0, "0.5", 192)
    path = steepest_path("0.5", 60, 192)
    v = integrate_exp_nphi(p, path)
    assert rel_distance(v, "0.98") < mpf(10) ** -18


def test_integral_is_path_independent():
    u = "0.5"
    N = 20
    p = phi_only_param(N, u, 256)
    with mp.workprec(256):
        w0 = saddle_point(u, 256).w0
        steep = steepest_path(u, 120, 256)
        tri = ContourPath((BigComplex.make("0.01", 256), w0,
                           BigComplex.make("0.99", 256)), "polygonal")
        rect = ContourPath(tuple(
            BigComplex.make(z, 256)
            for z in (mpc("0.01"), mpc("0.01", "0.1"), mpc("0.99", "0.1"),
                      mpc("0.99"))), "polygonal")
    vals = [integrate_exp_nphi(p, path, quad_tol="1e-12")
            for path in (steep, tri, rect)]
    assert rel_distance(vals[0], vals[1]) < mpf(10) ** -8
    assert rel_distance(vals[0], vals[2]) < mpf(10) ** -8


def test_integral_rejects_paths_leaving_the_strip():
    p = phi_only_param(3, "0.5", 192)
    bad = ContourPath((BigComplex.make("0.01", 192),
                       BigComplex.make(mpc("0.5", "-7"), 192),
                       BigComplex.make("0.99", 192)), "polygonal")
    with pytest.raises(DomainError):
        integrate_exp_nphi(p, bad)


def test_integral_approaches_laplace_formula():
    """integral / saddle_approx -> 1 with an O(1/N) gap that about halves
    with each doubling of N."""
    u = "0.5"
    gaps = []
    for N in (50, 100, 200, 400):
        p = phi_only_param(N, u, 192)
        path = steepest_path(u, 120, 192)
        val = integrate_exp_nphi(p, path, quad_tol="1e-14")
        approx = saddle_approx(KnotParam.make(N, u, 192))
        with mp.workprec(192):
            gaps.append(abs(val.to_mpc() / approx.to_mpc() - 1))
    assert gaps[1] < mpf("0.05")
    for a, b in zip(gaps[:-1], gaps[1:]):
        assert b < a * mpf("0.7")


# -- the Laplace term itself ----------------------------------------------


def test_laplace_term_closed_form_at_u_zero():
    N = 7
    sa = saddle_approx(KnotParam.make(N, 0, 256))
    with mp.workprec(256):
        phi0 = potential(BigComplex.make(mpf(5) / 6, 256), 0).to_mpc()
        closed = mp.exp(N * phi0) / (mp.sqrt(N) * mp.root(3, 4))
        assert abs(sa.to_mpc() - closed) / abs(closed) < mpf(10) ** -70


def test_laplace_term_growth_identity():
    # log|sa(2N)| - log|sa(N)| = N Re Phi(w0) - (log 2)/2, exactly, since
    # the N-dependence is e^{N Phi} / sqrt(N)
    u = "0.5"
    N = 50
    with mp.workprec(256):
        a = saddle_approx(KnotParam.make(N, u, 256)).to_mpc()
        b = saddle_approx(KnotParam.make(2 * N, u, 256)).to_mpc()
        re0 = _potential_raw(saddle_point(u, 256).w0.to_mpc(), mpf(u)).real
        lhs = mp.log(abs(b)) - mp.log(abs(a))
        assert abs(lhs - (N * re0 - mp.log(2) / 2)) < mpf(10) ** -60


def test_laplace_term_validation():
    with pytest.raises(DomainError):
        saddle_approx(KnotParam.make(5, "0.97", 128))


# -- decay of the two contour halves --------------------------------------


def test_half_integrals_converge_to_smooth_integral():
    """Each half G_+- of the residue integral approaches -i times the
    smooth exp(N Phi) integral (both halves get -i because the upper side
    is traversed right to left), with scaled deviation
    |G - (-i) I| N / max(1, e^{N Re Phi(w0)}) bounded and shrinking.
    """
    u = "0.5"
    devs_p, devs_m = [], []
    for N in (8, 12, 16, 20, 24):
        p = KnotParam.make(N, u, 256)
        Gp, Gm, _pref, prec = _side_integrals(p, quad_tol="1e-8")
        with mp.workprec(prec + 16):
            path = steepest_path(u, 120, prec)
            I = integrate_exp_nphi(phi_only_param(N, u, prec), path,
                                   quad_tol="1e-10").to_mpc()
            uu = mpf(u)
            w0 = saddle_point(uu, prec).w0.to_mpc()
            scale = max(mpf(1), mp.exp(N * _potential_raw(w0, uu).real))
            devs_p.append(abs(Gp + 1j * I) * N / scale)
            devs_m.append(abs(Gm + 1j * I) * N / scale)
    for seq in (devs_p, devs_m):
        assert max(seq) < mpf("0.5")
        assert seq[-1] < seq[0]
