"""Contour machinery in the w-plane.

Three layers, each checkable against the one below:

* The residue identity.  Summing the colored Jones terms with residues of
  tan(N pi w) turns the finite sum into (prefactor) times the integral of
  tan(N pi w) g_n(w) over a closed parallelogram around (0, 1), split into a
  lower path C_-(eps) and an upper path C_+(eps).  reconstruct_jn_via_contour
  evaluates that and must reproduce the exact sum; this is the strongest
  end-to-end check in the package since the two sides share nothing but
  arithmetic.

* Saddle-point geometry.  For large N the integral is governed by
  exp(N Phi(w)) near the critical point w0 of the potential; steepest_path
  traces the descent curve through w0 along which Im Phi is constant, and
  integrate_exp_nphi integrates exp(N Phi) along any admissible path in the
  strip (all such paths agree, which is itself a test).

* The leading term.  saddle_approx evaluates the one-term Laplace formula
  sqrt(2 pi) exp(N Phi(w0)) / (sqrt(N) sqrt(-Phi''(w0))) with the branch of
  the square root in the fourth quadrant, and should approach the integral
  as N grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .cjones import KnotParam, u_ceiling
from .errors import ArgError, DomainError, PathFailure
from .geometry import (
    fourth_quadrant_sqrt,
    saddle_point,
    _check_strip,
    _potential_raw,
    _potential_d1_raw,
)
from .precision import BigComplex, default_prec_bits
from .qdilog import _GnEvaluator, ratio_closed_form
from .quadrature import adaptive_polyline, gl_nodes

GUARD_BITS = 10
N_MAX_CONTOUR = 24


def _gl_seg(f, a: mpc, b: mpc, n: int) -> mpc:
    jac = (b - a) / 2
    mid = (a + b) / 2
    total = mpc(0)
    for x, wt in gl_nodes(n, mp.prec):
        total += wt * f(mid + jac * x)
    return total * jac


def _embedded_seg(f, a, b, tol, depth) -> mpc:
    # GL-24 against GL-12 on the same span; split only on disagreement,
    # so an accepted panel costs 36 evaluations instead of 72
    v24 = _gl_seg(f, a, b, 24)
    v12 = _gl_seg(f, a, b, 12)
    if abs(v24 - v12) <= tol:
        return v24
    if depth >= 24:
        from .errors import QuadratureFailure
        raise QuadratureFailure(f"segment [{a}, {b}] did not converge")
    m = (a + b) / 2
    return (_embedded_seg(f, a, m, tol / 2, depth + 1)
            + _embedded_seg(f, m, b, tol / 2, depth + 1))


def _embedded_polyline(f, verts, abs_tol) -> mpc:
    # tolerance shared proportionally to segment length
    lens = [abs(b - a) for a, b in zip(verts[:-1], verts[1:])]
    total_len = sum(lens)
    total = mpc(0)
    for a, b, ln in zip(verts[:-1], verts[1:], lens):
        total += _embedded_seg(f, a, b, mpf(abs_tol) * ln / total_len, 0)
    return total


def _subdivided(verts, max_step) -> list:
    """Insert vertices so no segment exceeds max_step; seeds the quadrature
    at the integrand's oscillation scale instead of discovering it by
    failed bisections."""
    out = [verts[0]]
    for a, b in zip(verts[:-1], verts[1:]):
        n = max(1, int(mp.ceil(abs(b - a) / max_step)))
        for j in range(1, n + 1):
            out.append(a + (b - a) * j / n)
    return out

_KINDS = ("polygonal", "steepest")


@dataclass(frozen=True)
class ContourPath:
    """Polygonal chain in the w-plane; kind records how it was built."""

    vertices: tuple
    kind: str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ArgError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if len(self.vertices) < 2:
            raise ArgError("a path needs at least two vertices")


def contour_c(eps, p: KnotParam, side: str) -> ContourPath:
    """The lower (minus) or upper (plus) half of the residue contour.

    C_-(eps) runs eps -> u/2pi - i -> 1 + u/2pi - i -> 1-eps; C_+(eps) runs
    1-eps -> 1 - u/2pi - eps + i -> -u/2pi + eps + i -> eps.  Traversing
    minus then plus walks the parallelogram counterclockwise, enclosing the
    poles (2k+1)/(2N) of tan(N pi w) for k = 0..N-1 and nothing else.
    """
    if side not in ("plus", "minus"):
        raise ArgError(f"side must be 'plus' or 'minus', got {side!r}")
    prec = p.prec_bits
    with mp.workprec(prec + GUARD_BITS):
        e = mpf(eps) if not isinstance(eps, str) else mpf(eps)
        if not (0 < e < mpf(1) / (4 * p.N)):
            raise ArgError(f"eps = {e} outside (0, 1/(4N)) for N = {p.N}")
        s = mpf(p.u) / (2 * mp.pi)
        if side == "minus":
            verts = (mpc(e, 0), mpc(s, -1), mpc(1 + s, -1), mpc(1 - e, 0))
        else:
            verts = (mpc(1 - e, 0), mpc(1 - s - e, 1), mpc(-s + e, 1), mpc(e, 0))
    with mp.workprec(prec):
        bigs = tuple(BigComplex(+v.real, +v.imag, prec) for v in verts)
    return ContourPath(bigs, "polygonal")


def _tan_term(N: int, w: mpc) -> mpc:
    # tan z = -i (E - 1)/(E + 1) with E = e^{2iz}; one exp instead of two
    E = mp.exp(mpc(0, 2) * N * mp.pi * w)
    return -mpc(0, 1) * (E - 1) / (E + 1)


def reconstruct_jn_via_contour(p: KnotParam, eps=None, quad_tol="1e-9",
                               route: str = "shallow",
                               prec_bits: int | None = None) -> BigComplex:
    """J_N at q = exp(xi/N) rebuilt from the residue contour integral.

    route="sides" integrates tan(N pi w) g_n(w) along the documented
    parallelogram sides.  route="shallow" (default) instead follows the
    homotopic rectangle hugging the real axis at depth 1/(2N): the two are
    equal by Cauchy's theorem (the deformation region contains no poles of
    the integrand), but near the axis |g_n| stays of order exp(N max Re Phi)
    instead of the exponentially larger values the deep corners reach, so
    the quadrature is dramatically better conditioned at large N.

    The result must match the exact sum; any drift is a defect in one of
    the layers underneath.
    """
    G_plus, G_minus, pref, prec = _side_integrals(p, eps, quad_tol, route, prec_bits)
    with mp.workprec(prec + GUARD_BITS):
        val = pref * (G_plus + G_minus)
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def _side_integrals(p: KnotParam, eps=None, quad_tol="1e-9",
                    route: str = "shallow", prec_bits: int | None = None):
    """The two halves of the residue-sum integral, before the prefactor.

    Returns (G_plus, G_minus, prefactor, prec_bits) with the G's as raw mpc.
    Split out so the halves can be compared individually against the smooth
    exp(N Phi) integral they each converge to.
    """
    if route not in ("shallow", "sides"):
        raise ArgError(f"route must be 'shallow' or 'sides', got {route!r}")
    if p.N > N_MAX_CONTOUR:
        raise ArgError(f"N = {p.N} exceeds the contour ceiling {N_MAX_CONTOUR}")
    prec = prec_bits or p.prec_bits
    with mp.workprec(prec + GUARD_BITS):
        u = mpf(p.u)
        if not (0 < u < u_ceiling(prec)):
            raise DomainError(f"u = {u} outside (0, u_max) for the contour route")
        N = p.N
        eps_v = mpf(1) / (8 * N) if eps is None else mpf(eps)
        if not (0 < eps_v < mpf(1) / (4 * N)):
            raise ArgError(f"eps = {eps_v} outside (0, 1/(4N))")
        tol = mpf(quad_tol)

        engine = _GnEvaluator(p, prec)
        sd = saddle_point(u, prec)
        w0 = sd.w0.to_mpc()
        phidd = sd.phi_dd_at_w0.to_mpc()
        # magnitude scale of the final integral, for absolute budgets
        log_scale = float(N * _potential_raw(w0, u).real) \
            + 0.5 * math.log(2 * math.pi / (N * float(abs(phidd))))
        log_budget = float(mp.log(tol)) + log_scale

        if route == "shallow":
            d = mpf(1) / (2 * N)
            vm = [mpc(eps_v, 0), mpc(eps_v, -d), mpc(1 - eps_v, -d), mpc(1 - eps_v, 0)]
            vp = [mpc(1 - eps_v, 0), mpc(1 - eps_v, d), mpc(eps_v, d), mpc(eps_v, 0)]
        else:
            s = u / (2 * mp.pi)
            vm = [mpc(eps_v, 0), mpc(s, -1), mpc(1 + s, -1), mpc(1 - eps_v, 0)]
            vp = [mpc(1 - eps_v, 0), mpc(1 - s - eps_v, 1), mpc(-s + eps_v, 1),
                  mpc(eps_v, 0)]
        # tan(N pi w) oscillates with period 1/N in Re w; a GL-24/12 pair
        # resolves about one radian of phase per node, so seed segments
        # near that scale rather than finding it by bisection
        max_step = mpf(7) / (2 * mp.pi * N)
        vm = _subdivided(vm, max_step)
        vp = _subdivided(vp, max_step)

        # |tan| <= coth(pi/2) on the shallow rectangle and <= coth(pi/8)
        # near the documented corners; 3 covers both with slack
        log_tan_cap = math.log(3.0)

        def f(w):
            est = engine.log_mag_estimate(w)
            lt = log_budget - math.log(16.0) - log_tan_cap - est
            tau = mp.exp(mpf(min(lt, -3.0)))
            return _tan_term(N, w) * engine.g(w, tau)

        side_tol = mpf(mp.exp(mpf(log_budget))) / 2
        G_minus = _embedded_polyline(f, vm, side_tol)
        G_plus = _embedded_polyline(f, vp, side_tol)

        pref = ratio_closed_form(u, N, prec).to_mpc() \
            * mpc(0, 1) * mp.exp(u / 2) * N / 2
        return G_plus, G_minus, pref, prec


def phi_only_param(N: int, u, prec_bits: int | None = None) -> KnotParam:
    """KnotParam carrier for exp(N Phi) integrals, N = 0 allowed.

    The colored Jones evaluators require N >= 1; the potential integrals
    are defined for any nonnegative N, so this constructor skips that gate
    while keeping the u and xi bookkeeping identical.
    """
    if N < 0:
        raise ArgError(f"N must be nonnegative, got {N}")
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + GUARD_BITS):
        uu = mpf(u)
        if uu < 0:
            raise ArgError(f"u must be nonnegative, got {uu}")
        xi = mpc(uu, 2 * mp.pi)
    with mp.workprec(prec):
        return KnotParam(N, +uu, BigComplex(+xi.real, +xi.imag, prec), prec)


_DESCENT_DROP = 40
_JOIN_ENDPOINT = mpf("0.01")


def steepest_path(u, n_points: int, prec_bits: int | None = None) -> ContourPath:
    """Descent path through the critical point w0, from 0.01 to 0.99.

    From w0 the two directions along which Phi''(w0) (dw)^2 is real negative
    are followed by unit-speed descent dw/ds = -conj(Phi'(w))/|Phi'(w)|,
    which keeps Im Phi constant while Re Phi decreases at rate |Phi'|.
    Both constant-phase curves of this potential run into the edge of the
    band, so each branch is traced until it nears the edge (or Re Phi has
    dropped 40, whichever first) and its end is joined to the real-axis
    endpoint by a straight segment.  Re Phi stays below Re Phi(w0) along
    the curve, so the integrand of exp(N Phi) keeps its peak at w0; the
    joins sit where it is exponentially small.  If tracing fails the
    piecewise-linear path 0.01 -> w0 -> 0.99 is used instead, with the
    maximum-at-w0 property checked on samples.
    """
    if n_points < 5:
        raise ArgError(f"n_points must be at least 5, got {n_points}")
    prec = prec_bits or default_prec_bits()
    work = max(prec, 128)
    with mp.workprec(work + GUARD_BITS):
        uu = mpf(u) if not isinstance(u, str) else mpf(u)
        if not (0 < uu < u_ceiling(work)):
            raise DomainError(f"u = {uu} outside (0, u_max)")
        sd = saddle_point(uu, work)
        w0 = sd.w0.to_mpc()
        phidd = sd.phi_dd_at_w0.to_mpc()
        ph0 = _potential_raw(w0, uu)
        re0, im0 = ph0.real, ph0.imag
        theta = (mp.pi - mp.arg(phidd)) / 2

        try:
            right = _trace_branch(w0, uu, theta, re0, im0)
            left = _trace_branch(w0, uu, theta + mp.pi, re0, im0)
            per_branch = max((n_points - 3) // 2, 2)
            verts = ([mpc(_JOIN_ENDPOINT, 0)]
                     + _decimate(left, per_branch)[::-1]
                     + [w0]
                     + _decimate(right, per_branch)
                     + [mpc(1 - _JOIN_ENDPOINT, 0)])
            kind = "steepest"
        except PathFailure:
            verts = [mpc(_JOIN_ENDPOINT, 0), w0, mpc(1 - _JOIN_ENDPOINT, 0)]
            for t in range(1, 40):
                wl = verts[0] + (w0 - verts[0]) * t / 40
                wr = w0 + (verts[2] - w0) * t / 40
                if _potential_raw(wl, uu).real > re0 or \
                        _potential_raw(wr, uu).real > re0:
                    raise PathFailure(
                        "fallback path violates the maximum property at w0"
                    )
            kind = "polygonal"
    with mp.workprec(prec):
        bigs = tuple(BigComplex(+v.real, +v.imag, prec) for v in verts)
    return ContourPath(bigs, kind)


def _trace_branch(w0: mpc, u: mpf, theta, re0, im0) -> list:
    """Unit-speed descent from w0 in direction theta.

    Stops when Re Phi has dropped by _DESCENT_DROP or when the next step
    would come within 0.25 of the band edge; both curves of this potential
    end on the edge, so the margin stop is the usual one.  After each RK4
    step a Newton correction transverse to the flow restores Im Phi to its
    saddle value, keeping the constant-phase property at roundoff scale
    instead of the integrator's O(ds^4).
    """
    h0 = mpf("1e-6")
    w = w0 + h0 * mp.exp(mpc(0, 1) * theta)
    pts = []
    two_pi = 2 * mp.pi
    # half the saddle's own clearance, so tracing starts legal even when
    # w0 sits close to the band edge (u near the top of its range)
    coord0 = u * w0.imag + two_pi * w0.real
    margin = min(mpf("0.25"), coord0 / 2, (two_pi - coord0) / 2)
    step_cap = mpf("0.02")

    def vel(ww):
        g = _potential_d1_raw(ww, u)
        a = abs(g)
        if a == 0:
            raise PathFailure(f"vanishing gradient off-saddle at {ww}")
        return -mp.conj(g) / a

    for _ in range(60000):
        val = _potential_raw(w, u)
        if val.real <= re0 - _DESCENT_DROP:
            return pts
        pts.append(w)
        coord = u * w.imag + two_pi * w.real
        # remaining room to the stopping line, in w units; the coordinate
        # moves 2 pi times faster than |dw|, so steps shrink near the edge
        room = min(coord - margin, two_pi - margin - coord) / two_pi
        if room < margin / (4 * two_pi):
            if len(pts) < 2:
                raise PathFailure(f"descent met the band edge at once: {w}")
            return pts
        g1 = _potential_d1_raw(w, u)
        speed = abs(g1)
        ds = min(step_cap, room / 2)
        if speed > 0:
            ds = min(ds, mpf("0.5") / speed)
        k1 = vel(w)
        k2 = vel(w + ds * k1 / 2)
        k3 = vel(w + ds * k2 / 2)
        k4 = vel(w + ds * k3)
        wn = w + ds * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        gn = _potential_d1_raw(wn, u)
        if abs(gn) > 0:
            drift = _potential_raw(wn, u).imag - im0
            wn = wn - mpc(0, 1) * drift * mp.conj(gn) / abs(gn) ** 2
        w = wn
    raise PathFailure("descent did not terminate")


def _decimate(pts: list, keep: int) -> list:
    if len(pts) <= keep:
        return pts
    idx = [round(i * (len(pts) - 1) / (keep - 1)) for i in range(keep)]
    return [pts[i] for i in sorted(set(idx))]


def integrate_exp_nphi(p: KnotParam, path: ContourPath, quad_tol="1e-20",
                       prec_bits: int | None = None) -> BigComplex:
    """Integral of exp(N Phi(w)) along the given path.

    The value depends only on the endpoints as long as the path stays in
    the strip, so any two admissible paths must agree; tolerances are
    absolute relative to the saddle magnitude exp(N Re Phi(w0)).
    """
    prec = prec_bits or p.prec_bits
    with mp.workprec(prec + GUARD_BITS):
        u = mpf(p.u)
        verts = [v.to_mpc() if isinstance(v, BigComplex) else mpc(v)
                 for v in path.vertices]
        for v in verts:
            _check_strip(v, u)
        N = p.N
        if N > 0:
            sd = saddle_point(u, prec)
            scale = mp.exp(N * _potential_raw(sd.w0.to_mpc(), u).real)
        else:
            scale = mpf(1)
        tol = mpf(quad_tol) * max(scale, mpf(1))

        def f(w):
            return mp.exp(N * _potential_raw(w, u))

        val = adaptive_polyline(f, verts, tol)
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def saddle_approx(p: KnotParam) -> BigComplex:
    """One-term Laplace approximation at the critical point.

    sqrt(2 pi) exp(N Phi(w0)) / (sqrt(N) sqrt(-Phi''(w0))), the root taken
    in the fourth quadrant.  At u = 0 this collapses to
    exp(N Phi(5/6)) / (sqrt(N) 3^{1/4}) since -Phi'' = 2 pi sqrt(3) there.
    """
    if p.N < 1:
        raise ArgError(f"N must be positive, got {p.N}")
    prec = p.prec_bits
    with mp.workprec(prec + GUARD_BITS):
        u = mpf(p.u)
        if not (0 <= u < u_ceiling(prec)):
            raise DomainError(f"u = {u} outside [0, u_max)")
        sd = saddle_point(u, prec)
        w0 = sd.w0.to_mpc()
        phidd = sd.phi_dd_at_w0.to_mpc()
        root = fourth_quadrant_sqrt(
            BigComplex.make(-phidd, prec + GUARD_BITS)).to_mpc()
        val = mp.sqrt(2 * mp.pi) * mp.exp(p.N * _potential_raw(w0, u)) \
            / (mp.sqrt(p.N) * root)
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)
