"""Faddeev's quantum dilogarithm by contour quadrature.

The function is defined for |Re z| < pi + Re(gamma) by

    S_gamma(z) = exp( (1/4) Int_{C_R} e^{zt} / (sinh(pi t) sinh(gamma t)) dt/t )

with gamma = (2 pi - i u)/(2N) and C_R the real line with the origin avoided
by an upper semicircle of radius R, 0 < R < min(pi/|gamma|, 1).

Quadrature layout.  Folding the left tail onto the right one turns the two
rays into a single integral over [R, oo),

    Int_R^oo 2 sinh(z s) / (s sinh(pi s) sinh(gamma s)) ds,

whose integrand decays like exp(-(pi + Re(gamma) - |Re z|) s); the cutoff T
making the remainder smaller than 10^-D is T = (D ln 10 + 10)/decay.  On the
semicircle t = R e^{i theta} the measure dt/t collapses to i d(theta), so no
endpoint or pole behavior survives anywhere.  Both pieces are handled by
adaptive Gauss-Legendre panels with absolute tolerances; an absolute error
eps on the exponent is a relative error eps on S_gamma itself, which is the
natural accuracy currency here.

The module also provides the correction term

    I_gamma(z) = (1/4) Int_{C_R} e^{zt} / (t sinh(pi t)) psi(gamma t) dt,
    psi(w) = 1/sinh(w) - 1/w,

giving the exact splitting S_gamma(z) = exp((1/(2 i gamma)) Li2(-e^{iz}) +
I_gamma(z)), the ratio g_n(w) of two S_gamma values that drives the contour
representation of the colored Jones sum, and the closed form for the
boundary ratio S_gamma(-pi - iu + gamma)/S_gamma(pi - iu - gamma).

_GnEvaluator is the batch engine behind the contour reconstruction: one
instance caches the kernel 1/(s sinh(pi s) sinh(gamma s)) and the factors
e^{-2ius} on a shared panel tree, so evaluating g_n at hundreds of contour
points costs about one complex exponential per (point, node) pair.  The two
arguments z+ = pi - iu + i xi w and z- = -2iu - z+ are served by the same
exponential since e^{z- s} = e^{-2ius} / e^{z+ s}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .cjones import KnotParam
from .dilog import _li2_raw
from .errors import ArgError, DomainError, QuadratureFailure
from .precision import BigComplex, default_prec_bits
from .quadrature import adaptive_segment, gl_nodes

GUARD_BITS = 10
_TAIL_CAP = mpf(10) ** 7
_LN10 = math.log(10)


def _psi(w: mpc) -> mpc:
    """1/sinh(w) - 1/w, stable near the removable singularity at 0.

    For |w| <= 1/2 the odd series sum_k c_{2k} w^{2k-1} with
    c_{2k} = (2 - 2^{2k}) B_{2k} / (2k)! is used; the ratio test gives
    |term ratio| <= (|w|/pi)^2 < 0.026 there, so a handful of terms suffice.
    """
    w = mpc(w)
    if abs(w) > 0.5:
        return 1 / mp.sinh(w) - 1 / w
    total = mpc(0)
    wsq = w * w
    wpow = w
    k = 1
    eps = mpf(2) ** (-mp.prec - 4)
    while True:
        coeff = (2 - mpf(2) ** (2 * k)) * mp.bernoulli(2 * k) / mp.factorial(2 * k)
        term = coeff * wpow
        total += term
        if abs(term) < eps * (1 + abs(total)):
            return total
        wpow *= wsq
        k += 1


@dataclass(frozen=True)
class QDilogParams:
    """Quadrature configuration for one (u, N) pair.

    tail_cutoff records the worst-case truncation point, the one for
    arguments with |Re z| = pi where the decay rate degrades to Re(gamma);
    each evaluation recomputes its own cutoff from its actual argument.
    """

    gamma: BigComplex
    R: mpf
    tail_cutoff: mpf
    quad_tol: mpf
    prec_bits: int

    def __post_init__(self):
        if self.gamma.re <= 0:
            raise ArgError("Re(gamma) must be positive")
        gabs = abs(self.gamma)
        if not (0 < self.R < min(mp.pi / gabs, mpf(1))):
            raise ArgError(f"R = {self.R} outside (0, min(pi/|gamma|, 1))")
        if self.tail_cutoff <= self.R:
            raise ArgError("tail_cutoff must exceed R")
        if self.quad_tol <= 0:
            raise ArgError("quad_tol must be positive")

    @staticmethod
    def make(u, N: int, quad_tol="1e-20", prec_bits: int | None = None) -> "QDilogParams":
        if N < 1:
            raise ArgError(f"N must be a positive integer, got {N}")
        prec = prec_bits or default_prec_bits()
        with mp.workprec(prec + GUARD_BITS):
            uu = mpf(u) if not isinstance(u, str) else mpf(u)
            if uu < 0:
                raise ArgError(f"u must be nonnegative, got {uu}")
            gamma = (2 * mp.pi - mpc(0, 1) * uu) / (2 * N)
            R = min(mp.pi / abs(gamma), mpf(1)) / 2
            tol = mpf(quad_tol)
            digits = max(-mp.log(tol, 10), mpf(5))
            cutoff = (digits * mp.log(10) + 10) / gamma.real
        with mp.workprec(prec):
            return QDilogParams(
                BigComplex(+gamma.real, +gamma.imag, prec), +R, +cutoff, +tol, prec
            )


def _geom_vertices(R: mpf, T: mpf) -> list:
    """Panel seams R, 1.7R, 1.7^2 R, ..., T for the folded tail integral."""
    verts = [R]
    s = R
    while s < T:
        s = s * mpf("1.7")
        verts.append(min(s, T))
    if len(verts) == 1:
        verts.append(T)
    return verts


def _tail_cutoff_for(z_re_abs: mpf, gamma_re: mpf, tol: mpf) -> mpf:
    margin = mp.pi + gamma_re - z_re_abs
    digits = max(-mp.log(tol, 10), mpf(5))
    return (digits * mp.log(10) + 10) / margin


def _log_s_gamma_raw(z: mpc, gamma: mpc, R: mpf, tol: mpf) -> mpc:
    """The exponent (1/4) Int_{C_R} ... at the current working precision."""
    T = _tail_cutoff_for(abs(z.real), gamma.real, tol)

    def tail(s):
        return 2 * mp.sinh(z * s) / (s * mp.sinh(mp.pi * s) * mp.sinh(gamma * s))

    def semi(theta):
        t = R * mp.exp(mpc(0, 1) * theta)
        return -mpc(0, 1) * mp.exp(z * t) / (mp.sinh(mp.pi * t) * mp.sinh(gamma * t))

    verts = _geom_vertices(R, T)
    per_seg = tol / (2 * (len(verts) - 1))
    total = mpc(0)
    for a, b in zip(verts, verts[1:]):
        total += adaptive_segment(tail, a, b, per_seg)
    total += adaptive_segment(semi, mpf(0), +mp.pi, tol / 4)
    return total / 4


def s_gamma(z, p: QDilogParams) -> BigComplex:
    """Faddeev's quantum dilogarithm on |Re z| < pi + Re(gamma)."""
    prec = p.prec_bits
    with mp.workprec(prec + GUARD_BITS):
        zc = z.to_mpc() if isinstance(z, BigComplex) else mpc(z)
        gamma = p.gamma.to_mpc()
        if abs(zc.real) >= mp.pi + gamma.real:
            raise DomainError(
                f"z = {zc} outside the strip |Re z| < pi + Re(gamma) = {mp.pi + gamma.real}"
            )
        val = mp.exp(_log_s_gamma_raw(zc, gamma, p.R, p.quad_tol))
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def i_gamma(z, p: QDilogParams) -> BigComplex:
    """Correction term I_gamma(z) on |Re z| <= pi.

    The psi factor removes the 1/(gamma t) part of the kernel, which also
    removes gamma from the decay rate: the tail falls off like
    exp(-(pi - |Re z|) s) only, so arguments hugging |Re z| = pi push the
    cutoff beyond any practical bound and fail rather than stall.
    """
    prec = p.prec_bits
    with mp.workprec(prec + GUARD_BITS):
        zc = z.to_mpc() if isinstance(z, BigComplex) else mpc(z)
        gamma = p.gamma.to_mpc()
        if abs(zc.real) > mp.pi:
            raise DomainError(f"z = {zc} outside the strip |Re z| <= pi")
        margin = mp.pi - abs(zc.real)
        digits = max(-mp.log(p.quad_tol, 10), mpf(5))
        if margin <= 0 or (digits * mp.log(10) + 10) / margin > _TAIL_CAP:
            raise QuadratureFailure(
                f"tail cutoff for Re z = {zc.real} exceeds the practical cap"
            )
        T = (digits * mp.log(10) + 10) / margin

        def tail(s):
            return 2 * mp.sinh(zc * s) * _psi(gamma * s) / (s * mp.sinh(mp.pi * s))

        def semi(theta):
            t = p.R * mp.exp(mpc(0, 1) * theta)
            return -mpc(0, 1) * mp.exp(zc * t) * _psi(gamma * t) / mp.sinh(mp.pi * t)

        verts = _geom_vertices(p.R, T)
        per_seg = p.quad_tol / (2 * (len(verts) - 1))
        total = mpc(0)
        for a, b in zip(verts, verts[1:]):
            total += adaptive_segment(tail, a, b, per_seg)
        total += adaptive_segment(semi, mpf(0), +mp.pi, p.quad_tol / 4)
        val = total / 4
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def ratio_closed_form(u, N: int, prec_bits: int | None = None) -> BigComplex:
    """S_gamma(-pi - iu + gamma) / S_gamma(pi - iu - gamma) in closed form.

    Equals (e^{pi u / gamma} - 1)/(e^u - 1) for u > 0 and N for u = 0 (the
    u -> 0 limit, since pi u / gamma -> 0 like u while e^u - 1 does too).
    """
    if N < 1:
        raise ArgError(f"N must be a positive integer, got {N}")
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + GUARD_BITS):
        uu = mpf(u) if not isinstance(u, str) else mpf(u)
        if uu < 0:
            raise ArgError(f"u must be nonnegative, got {uu}")
        if uu == 0:
            val = mpc(N)
        else:
            gamma = (2 * mp.pi - mpc(0, 1) * uu) / (2 * N)
            val = (mp.exp(mp.pi * uu / gamma) - 1) / (mp.exp(uu) - 1)
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def _check_gn_strip(w: mpc, u: mpf, N: int):
    # analyticity region of the ratio: -pi/N < Im(xi w) < 2 pi + pi/N,
    # half a gamma-strip wider than the potential's 0 < Im(xi w) < 2 pi
    coord = u * w.imag + 2 * mp.pi * w.real
    if not (-mp.pi / N < coord < 2 * mp.pi + mp.pi / N):
        raise DomainError(
            f"w = {w}: Im(xi w) = {coord} outside (-pi/{N}, 2 pi + pi/{N})"
        )


def g_n(w, p: KnotParam, via: str = "ratio", quad_tol="1e-20",
        prec_bits: int | None = None) -> BigComplex:
    """exp(-N u w) S_gamma(pi - iu + i xi w) / S_gamma(-pi - iu - i xi w).

    via="ratio" evaluates exactly that; via="potential" uses the identity
    g_n = exp(N Phi(w) + I_gamma(z+) - I_gamma(z-)), which additionally
    requires w in the potential's strip.  The two paths agreeing is a strong
    cross-check since they share no quadrature kernel.
    """
    if via not in ("ratio", "potential"):
        raise ArgError(f"via must be 'ratio' or 'potential', got {via!r}")
    prec = prec_bits or p.prec_bits
    qd = QDilogParams.make(p.u, p.N, quad_tol, prec)
    with mp.workprec(prec + GUARD_BITS):
        wc = w.to_mpc() if isinstance(w, BigComplex) else mpc(w)
        uu = mpf(p.u)
        xi = p.xi.to_mpc()
        _check_gn_strip(wc, uu, p.N)
        zp = mp.pi - mpc(0, 1) * uu + mpc(0, 1) * xi * wc
        zm = -2j * uu - zp
        if via == "ratio":
            gamma = qd.gamma.to_mpc()
            log_g = (-p.N * uu * wc
                     + _log_s_gamma_raw(zp, gamma, qd.R, qd.quad_tol)
                     - _log_s_gamma_raw(zm, gamma, qd.R, qd.quad_tol))
            val = mp.exp(log_g)
        else:
            from .geometry import _check_strip, _potential_raw
            _check_strip(wc, uu)
            ip = i_gamma(zp, qd).to_mpc()
            im = i_gamma(zm, qd).to_mpc()
            val = mp.exp(p.N * _potential_raw(wc, uu) + ip - im)
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


class _GnEvaluator:
    """Shared-kernel batch evaluator of log g_n along a contour.

    All s_gamma quadratures for one (N, u) ride a single panel tree over the
    folded tail [R, T_max] and the semicircle; the z-independent kernel
    values and the factors e^{-2ius} are cached per panel, so each contour
    point pays one exp per visited node.  Per-point absolute tolerances let
    callers spend precision only where the surrounding integral needs it:
    the accuracy demanded of a point scales with its own magnitude, which a
    cheap dilogarithm estimate of N Re Phi(w) supplies.

    Not part of the module contract; the contour reconstruction is its only
    caller.
    """

    MAX_DEPTH = 26

    def __init__(self, p: KnotParam, prec_bits: int | None = None):
        self.p = p
        self.prec = prec_bits or p.prec_bits
        with mp.workprec(self.prec + GUARD_BITS):
            self.u = mpf(p.u)
            self.xi = p.xi.to_mpc()
            self.gamma = (2 * mp.pi - mpc(0, 1) * self.u) / (2 * p.N)
            self.R = min(mp.pi / abs(self.gamma), mpf(1)) / 8
            digits = self.prec * mpf(2) / 6 + 12
            self.T_max = (digits * mp.log(10) + 10) / self.gamma.real
            self.verts = _geom_vertices(self.R, self.T_max)
            self.tau_floor = mpf(2) ** (-(self.prec + 4))
        self._tail_cache = {}
        self._semi_cache = {}
        self._semi_fixed = None
        self._semi_single = None
        with mp.workprec(self.prec + GUARD_BITS):
            self._semi_deep_tau = mpf("1e-38")
            self._semi_loose_tau = mpf("1e-11")

    # -- panel caches ----------------------------------------------------

    def _tail_panel(self, a: mpf, b: mpf):
        """Cached kernel data on [a, b]: GL-24 and GL-12 node sets plus float
        logs of the node magnitudes for cheap a-priori bounds."""
        key = (a, b)
        hit = self._tail_cache.get(key)
        if hit is not None:
            return hit
        # always built at full precision; evaluation may run lower
        with mp.workprec(self.prec + GUARD_BITS):
            jac = (b - a) / 2
            mid = (a + b) / 2
            sets = []
            for n in (24, 12):
                S, A, B = [], [], []
                for x, wt in gl_nodes(n, self.prec + GUARD_BITS):
                    s = mid + jac * x
                    k = wt * jac / (s * mp.sinh(mp.pi * s) * mp.sinh(self.gamma * s))
                    F = mp.exp(mpc(0, -2) * self.u * s)
                    S.append(s)
                    A.append(k * (1 + F) / F)
                    B.append(k * (1 + F))
                sets.append((S, A, B))
            sfl = [float(s) for s in sets[0][0]]
            lkfl = []
            for s, ca in zip(sets[0][0], sets[0][1]):
                m = abs(ca)
                lkfl.append(float(mp.log(m)) if m > 0 else -math.inf)
        entry = (sets[0], sets[1], sfl, lkfl)
        self._tail_cache[key] = entry
        return entry

    def _semi_fixed_panels(self):
        """Three GL-24 panels covering the semicircle angle; their analytic
        accuracy (nearest kernel singularity two units away in the Bernstein
        sense) is around 1e-40 relative, enough for every budget the walk
        hands out above the deep-corner regime."""
        if self._semi_fixed is not None:
            return self._semi_fixed
        with mp.workprec(self.prec + GUARD_BITS):
            seams = [mpf(0), +mp.pi / 3, 2 * mp.pi / 3, +mp.pi]
            panels = []
            for a, b in zip(seams, seams[1:]):
                panels.append(self._semi_panel(a, b))
        self._semi_fixed = panels
        return panels

    def _semi_panel(self, a: mpf, b: mpf):
        key = (a, b)
        hit = self._semi_cache.get(key)
        if hit is not None:
            return hit
        with mp.workprec(self.prec + GUARD_BITS):
            jac = (b - a) / 2
            mid = (a + b) / 2
            T, K, G = [], [], []
            for x, wt in gl_nodes(24, self.prec + GUARD_BITS):
                t = self.R * mp.exp(mpc(0, 1) * (mid + jac * x))
                kap = -mpc(0, 1) * wt * jac \
                    / (mp.sinh(mp.pi * t) * mp.sinh(self.gamma * t))
                T.append(t)
                K.append(kap)
                G.append(mp.exp(mpc(0, -2) * self.u * t))
        entry = (T, K, G)
        self._semi_cache[key] = entry
        return entry

    # -- difference quadrature ------------------------------------------

    @staticmethod
    def _node_sum(z: mpc, S, A, B) -> mpc:
        total = mpc(0)
        for s, ca, cb in zip(S, A, B):
            E = mp.exp(z * s)
            total += ca * E - cb / E
        return total

    def _tail_bound(self, x_float: float, entry) -> float:
        # log of sum |A_i| e^{x s_i} (+ alias for the 1/E terms): tight
        # a-priori bound on the panel sum, float-only
        sfl, lkfl = entry[2], entry[3]
        m = -math.inf
        for s, lk in zip(sfl, lkfl):
            v = lk + x_float * s
            if v > m:
                m = v
        if m == -math.inf:
            return m
        acc = 0.0
        for s, lk in zip(sfl, lkfl):
            acc += math.exp(lk + x_float * s - m)
        return m + math.log(2 * acc)

    def _tail_quad(self, z, x_float, a, b, tol, ltol, depth) -> mpc:
        entry = self._tail_panel(a, b)
        if self._tail_bound(x_float, entry) <= ltol - 2.1:
            # whole panel magnitude under an eighth of the tolerance
            return mpc(0)
        v24 = self._node_sum(z, *entry[0])
        v12 = self._node_sum(z, *entry[1])
        if abs(v24 - v12) <= tol:
            return v24
        if depth >= self.MAX_DEPTH:
            raise QuadratureFailure(f"tail panel [{a}, {b}] did not converge")
        m = (a + b) / 2
        return (self._tail_quad(z, x_float, a, m, tol / 2, ltol - 0.7, depth + 1)
                + self._tail_quad(z, x_float, m, b, tol / 2, ltol - 0.7, depth + 1))

    @staticmethod
    def _semi_sum_entry(z: mpc, entry) -> mpc:
        T, K, G = entry
        total = mpc(0)
        for t, kap, g in zip(T, K, G):
            E = mp.exp(z * t)
            total += kap * (E - g / E)
        return total

    def _semi_eval(self, z: mpc, tau) -> mpc:
        if tau > self._semi_loose_tau:
            # one GL-24 panel over the whole angle still carries ~1e-12
            # relative accuracy; cheapest rung for loose budgets
            if self._semi_single is None:
                with mp.workprec(self.prec + GUARD_BITS):
                    self._semi_single = self._semi_panel(mpf(0), +mp.pi)
            return self._semi_sum_entry(z, self._semi_single)
        if tau > self._semi_deep_tau:
            total = mpc(0)
            for entry in self._semi_fixed_panels():
                total += self._semi_sum_entry(z, entry)
            return total
        return self._semi_quad(z, mpf(0), +mp.pi, tau, 0)

    def _semi_quad(self, z, a, b, tol, depth) -> mpc:
        whole = self._semi_sum_entry(z, self._semi_panel(a, b))
        m = (a + b) / 2
        left = self._semi_sum_entry(z, self._semi_panel(a, m))
        right = self._semi_sum_entry(z, self._semi_panel(m, b))
        if abs(whole - (left + right)) <= tol:
            return left + right
        if depth >= self.MAX_DEPTH:
            raise QuadratureFailure("semicircle panel did not converge")
        return (self._semi_quad(z, a, m, tol / 2, depth + 1)
                + self._semi_quad(z, m, b, tol / 2, depth + 1))

    # -- public-ish surface ---------------------------------------------

    def log_mag_estimate(self, w: mpc) -> float:
        """Cheap estimate of log |g_n(w)|: N Re Phi(w) at low precision,
        with the strip coordinate clamped just inside (0, 2 pi)."""
        with mp.workprec(53):
            u = mpf(self.u)
            xi = mpc(self.xi)
            wc = mpc(w)
            coord = u * wc.imag + 2 * mp.pi * wc.real
            lo, hi = mpf("1e-3"), 2 * mp.pi - mpf("1e-3")
            if coord < lo:
                wc += (lo - coord) / (2 * mp.pi)
            elif coord > hi:
                wc -= (coord - hi) / (2 * mp.pi)
            val = (_li2_raw(mp.exp(u - xi * wc)) - _li2_raw(mp.exp(u + xi * wc))) / xi \
                - u * wc
            return float(self.p.N * val.real) + 3.0


    def log_g(self, w: mpc, tau_log) -> mpc:
        """log g_n(w) with absolute error below tau_log on the exponent.

        Work happens at a precision sized to tau_log rather than the full
        instance precision: a point whose error budget is loose gets cheap
        arithmetic, which is where most contour points land.
        """
        with mp.workprec(self.prec + GUARD_BITS):
            wc = mpc(w)
            _check_gn_strip(wc, self.u, self.p.N)
            zp = mp.pi - mpc(0, 1) * self.u + mpc(0, 1) * self.xi * wc
            x = abs(zp.real)
            if x >= mp.pi + self.gamma.real:
                raise DomainError(f"argument {zp} left the quadrature strip")
            tau = max(mpf(tau_log), self.tau_floor)
            tau = min(tau, mpf("0.05"))
            T = min(_tail_cutoff_for(x, self.gamma.real, tau), self.T_max)
            ltau = float(mp.log(tau))
        x_float = float(x)
        work = min(self.prec, max(64, int(-ltau * 1.45) + 48)) + GUARD_BITS
        with mp.workprec(work):
            # truncate the global seam list at this argument's own cutoff
            verts = [v for v in self.verts if v < T]
            if len(verts) < len(self.verts):
                verts = verts + [self.verts[len(verts)]]
            nseg = len(verts) - 1
            seg_tol = tau / (2 * nseg)
            seg_ltol = ltau - math.log(2 * nseg)
            tails = mpc(0)
            for a, b in zip(verts, verts[1:]):
                tails += self._tail_quad(zp, x_float, a, b, seg_tol, seg_ltol, 0)
            semi = self._semi_eval(zp, tau / 4)
            return -self.p.N * self.u * wc + (tails + semi) / 4

    def g(self, w: mpc, tau_log) -> mpc:
        tau = max(mpf(tau_log), self.tau_floor)
        work = min(self.prec, max(64, int(float(-mp.log(tau)) * 1.45) + 48)) \
            + GUARD_BITS
        with mp.workprec(work):
            return mp.exp(self.log_g(w, tau_log))
