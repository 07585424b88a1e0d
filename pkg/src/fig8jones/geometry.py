"""Closed-form geometric quantities of the deformed figure-eight complement.

Everything here is driven by the combination c(u) = e^u + e^{-u} and the
square root

    r(u) = sqrt((c + 1)(c - 3)),   taken as a positive multiple of i

for 0 <= u < u_ceiling() (there c < 3, so the radicand is negative and the
root is purely imaginary).  From it:

  phi_of_u      the purely imaginary angle with cosh(phi) = cosh(u) - 1/2,
                branch -pi/3 <= Im phi <= 0
  saddle_point  w0 = (phi + 2 pi i) / xi, the critical point of the potential
  potential     Phi(w) = (1/xi)(Li2(e^{u - xi w}) - Li2(e^{u + xi w})) - u w
                and its first two derivatives
  s_of_u        S(u) = Li2(e^{u-phi}) - Li2(e^{u+phi}) - u phi, the
                Chern-Simons-type action entering the asymptotic expansion
  t_of_u        T(u) = 2 / r(u), the torsion-type prefactor
  rep_data      the parabolic-free SL(2, C) representation of the knot group
                with meridian eigenvalue e^{u/2}, its longitude eigenvalue,
                log-holonomy v and cone angle
  torsion_*     twisted Reidemeister torsions for the longitude and meridian
  cs_invariant  S(u) - pi i u - u v / 4
  torus_S_k / torus_T_k   the analogous closed forms for (a, b) torus knots

Branch conventions are pinned in one place: _r_root returns the
positive-imaginary root, and fourth_quadrant_sqrt picks the root of
-Phi''(w0) used by the saddle-point prefactor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .cjones import KnotParam, u_ceiling
from .dilog import _li2_raw
from .errors import ArgError, DomainError
from .precision import BigComplex, Number, default_prec_bits


def _as_u(u, prec: int) -> mpf:
    with mp.workprec(prec):
        return +(mpf(u) if not isinstance(u, str) else mpf(u))


def _check_u_closed(u: mpf):
    # closed interval [0, u_ceiling]; tolerate the upper endpoint itself
    if u < 0 or u > u_ceiling(mp.prec):
        raise DomainError(f"u = {u} outside [0, log((3+sqrt(5))/2)]")


def _check_u_open(u: mpf):
    if not (0 < u < u_ceiling(mp.prec)):
        raise DomainError(f"u = {u} outside (0, log((3+sqrt(5))/2))")


def _c_of_u(u: mpf) -> mpf:
    eu = mp.exp(u)
    return eu + 1 / eu


def _r_root(c) -> mpc:
    """sqrt((c+1)(c-3)) as a positive multiple of i (c may be mpf or mpc).

    For real c < 3 this is i * sqrt((c+1)(3-c)); the complex branch keeps
    Im >= 0 so the convention survives small perturbations off the real axis.
    """
    c = mpc(c)
    rad = (c + 1) * (c - 3)
    root = mp.sqrt(rad)
    if root.imag < 0 or (root.imag == 0 and root.real < 0):
        root = -root
    return root


def _phi_raw(u: mpf) -> mpc:
    # displayed log form: phi = log((c - 1 - r)/2); the argument has unit
    # modulus, so the principal log already lands in -pi/3 <= Im <= 0
    c = _c_of_u(u)
    val = mp.log((c - 1 - _r_root(c)) / 2)
    if not (-mp.pi / 3 - mpf("1e-10") <= val.imag <= mpf("1e-10")):
        raise DomainError(f"phi branch escaped [-pi/3, 0]: {val}")
    return val


def phi_of_u(u, prec_bits: int | None = None) -> BigComplex:
    """The purely imaginary solution of cosh(phi) = cosh(u) - 1/2 with
    -pi/3 <= Im phi <= 0.  Endpoints: phi(0) = -i pi/3, phi(u_ceiling) = 0."""
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = _as_u(u, mp.prec)
        _check_u_closed(uu)
        val = _phi_raw(uu)
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


@dataclass(frozen=True)
class SaddleData:
    """phi, its 2 pi i shift, the saddle w0 = phi_tilde / xi, and Phi''(w0)."""

    u: mpf
    phi_u: BigComplex
    phi_tilde: BigComplex
    w0: BigComplex
    phi_dd_at_w0: BigComplex


def saddle_point(u, prec_bits: int | None = None) -> SaddleData:
    """Critical-point data of the potential for a given deformation u."""
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = _as_u(u, mp.prec)
        _check_u_closed(uu)
        phi = _phi_raw(uu)
        phit = phi + 2j * mp.pi
        xi = mpc(uu, 2 * mp.pi)
        w0 = phit / xi
        ddd = xi * _r_root(_c_of_u(uu))

        def bc(z):
            with mp.workprec(prec):
                return BigComplex(+z.real, +z.imag, prec)

        return SaddleData(+uu, bc(phi), bc(phit), bc(w0), bc(ddd))


# -- the potential and its derivatives -----------------------------------


def _strip_coordinate(w: mpc, u: mpf) -> mpf:
    # Im(xi w) = u Im w + 2 pi Re w; the potential is analytic for values
    # strictly between 0 and 2 pi
    return u * w.imag + 2 * mp.pi * w.real


def _check_strip(w: mpc, u: mpf):
    s = _strip_coordinate(w, u)
    if not (0 < s < 2 * mp.pi):
        raise DomainError(
            f"w = {w} outside the analyticity strip: Im(xi w) = {s} not in (0, 2 pi)"
        )


def _potential_raw(w: mpc, u: mpf) -> mpc:
    xi = mpc(u, 2 * mp.pi)
    return (_li2_raw(mp.exp(u - xi * w)) - _li2_raw(mp.exp(u + xi * w))) / xi - u * w


def _potential_d1_raw(w: mpc, u: mpf) -> mpc:
    xi = mpc(u, 2 * mp.pi)
    return mp.log(1 - mp.exp(u - xi * w)) + mp.log(1 - mp.exp(u + xi * w)) - u


def _potential_d2_raw(w: mpc, u: mpf) -> mpc:
    xi = mpc(u, 2 * mp.pi)
    a = mp.exp(u - xi * w)
    b = mp.exp(u + xi * w)
    return xi * (a / (1 - a) - b / (1 - b))


def _potential_op(raw):
    def op(w: Number, u, prec_bits: int | None = None) -> BigComplex:
        prec = prec_bits or (w.prec_bits if isinstance(w, BigComplex) else None) or default_prec_bits()
        with mp.workprec(prec + 10):
            wc = w.to_mpc() if isinstance(w, BigComplex) else mpc(w)
            uu = _as_u(u, mp.prec)
            if uu < 0:
                raise DomainError(f"u = {uu} must be nonnegative")
            _check_strip(wc, uu)
            val = raw(wc, uu)
        with mp.workprec(prec):
            return BigComplex(+val.real, +val.imag, prec)

    return op


def potential(w: Number, u, prec_bits: int | None = None) -> BigComplex:
    """Phi(w) = (1/xi)(Li2(e^{u - xi w}) - Li2(e^{u + xi w})) - u w on the
    strip 0 < Im(xi w) < 2 pi."""
    return _potential_op(_potential_raw)(w, u, prec_bits)


def potential_d1(w: Number, u, prec_bits: int | None = None) -> BigComplex:
    """Phi'(w) = log(1 - e^{u - xi w}) + log(1 - e^{u + xi w}) - u."""
    return _potential_op(_potential_d1_raw)(w, u, prec_bits)


def potential_d2(w: Number, u, prec_bits: int | None = None) -> BigComplex:
    """Phi''(w) = xi (e^{u - xi w}/(1 - e^{u - xi w}) - e^{u + xi w}/(1 - e^{u + xi w}))."""
    return _potential_op(_potential_d2_raw)(w, u, prec_bits)


# -- the asymptotic model -------------------------------------------------


def s_of_u(u, prec_bits: int | None = None) -> BigComplex:
    """S(u) = Li2(e^{u - phi}) - Li2(e^{u + phi}) - u phi."""
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = _as_u(u, mp.prec)
        _check_u_closed(uu)
        phi = _phi_raw(uu)
        val = _li2_raw(mp.exp(uu - phi)) - _li2_raw(mp.exp(uu + phi)) - uu * phi
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def t_of_u(u, prec_bits: int | None = None) -> BigComplex:
    """T(u) = 2 / sqrt((e^u + e^{-u} + 1)(e^u + e^{-u} - 3)), positive-imaginary root."""
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = _as_u(u, mp.prec)
        _check_u_closed(uu)
        val = 2 / _r_root(_c_of_u(uu))
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def fourth_quadrant_sqrt(z: Number) -> BigComplex:
    """The square root lying in the closed fourth quadrant (Re >= 0, Im <= 0).

    Exists exactly when arg z is in (-pi, 0] or z is a negative real, whose
    roots sit on the imaginary axis and the lower one counts as boundary.
    Raises ArgError otherwise, which would signal a branch-convention slip
    upstream.
    """
    z = BigComplex.make(z) if not isinstance(z, BigComplex) else z
    with mp.workprec(z.prec_bits + 10):
        zc = z.to_mpc()
        root = mp.sqrt(zc)
        if root.imag > 0:
            if root.real == 0:
                root = -root
            else:
                raise ArgError(f"{zc} has no fourth-quadrant square root")
    with mp.workprec(z.prec_bits):
        return BigComplex(+root.real, +root.imag, z.prec_bits)


@dataclass(frozen=True)
class AsymptoticModel:
    """The triple (S(u), T(u), fourth-quadrant root of -Phi''(w0)) forming the
    right-hand side of the asymptotic expansion."""

    u: mpf
    S_u: BigComplex
    T_u: BigComplex
    sqrt_neg_phidd: BigComplex


def asymptotic_model(u, prec_bits: int | None = None) -> AsymptoticModel:
    prec = prec_bits or default_prec_bits()
    sd = saddle_point(u, prec)
    return AsymptoticModel(
        sd.u,
        s_of_u(u, prec),
        t_of_u(u, prec),
        fourth_quadrant_sqrt(-sd.phi_dd_at_w0),
    )


# -- the knot-group representation ---------------------------------------

Mat2 = tuple[tuple[mpc, mpc], tuple[mpc, mpc]]


def _mat_mul(A: Mat2, B: Mat2) -> Mat2:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def _mat_inv(A: Mat2) -> Mat2:
    # valid for det = 1, which holds for all matrices built here
    return ((A[1][1], -A[0][1]), (-A[1][0], A[0][0]))


def _word_matrix(word: str, x: Mat2, y: Mat2) -> Mat2:
    """Evaluate a word like "xY xyXXyxYX" (capital = inverse) left to right."""
    lookup = {"x": x, "y": y, "X": _mat_inv(x), "Y": _mat_inv(y)}
    out: Mat2 = ((mpc(1), mpc(0)), (mpc(0), mpc(1)))
    for ch in word:
        out = _mat_mul(out, lookup[ch])
    return out


# longitude of the figure-eight knot in the two-bridge presentation,
# written with capital letters for inverses
LONGITUDE_WORD = "xYxyXXyxYX"


def _ell_raw(m: mpc) -> mpc:
    # longitude eigenvalue; the r-root convention selects the branch with
    # Im(ell) > 0 for 0 < u < u_ceiling, i.e. cone angle in (0, 2 pi)
    mi = 1 / m
    return (m * m - m - 2 - mi + mi * mi) / 2 + ((m - mi) / 2) * _r_root(m + mi)


def _d_ell_dm_raw(m: mpc) -> mpc:
    # derivative of the closed form above; r' = (c - 1)(1 - m^-2)/r
    mi = 1 / m
    c = m + mi
    r = _r_root(c)
    dc = 1 - mi * mi
    dr = (c - 1) * dc / r
    return (2 * m - 1 + mi * mi - 2 * mi ** 3) / 2 + (1 + mi * mi) / 2 * r + ((m - mi) / 2) * dr


@dataclass(frozen=True)
class RepData:
    """A non-abelian SL(2, C) representation of the knot group and the
    peripheral data derived from it."""

    m: BigComplex
    d: BigComplex
    rho_x: tuple
    rho_y: tuple
    ell: BigComplex
    v: BigComplex
    cone_angle: mpf


def rep_data(u, sign: str = "plus", prec_bits: int | None = None) -> RepData:
    """The representation with meridian eigenvalue m^{1/2} = e^{u/2}.

    sign picks the branch of the quadratic parameter
    d = (m + 1/m - 3 +- r)/2; "plus" (with the positive-imaginary r) is the
    geometric branch, whose longitude eigenvalue matches _ell_raw and whose
    cone angle lies in (0, 2 pi).
    """
    if sign not in ("plus", "minus"):
        raise ArgError(f"sign must be 'plus' or 'minus', got {sign!r}")
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = _as_u(u, mp.prec)
        _check_u_open(uu)
        m = mp.exp(uu)
        sqm = mp.exp(uu / 2)
        c = _c_of_u(uu)
        r = _r_root(c)
        d = (c - 3 + r) / 2 if sign == "plus" else (c - 3 - r) / 2
        rho_x = ((mpc(sqm), mpc(1)), (mpc(0), mpc(1 / sqm)))
        rho_y = ((mpc(sqm), mpc(0)), (-d, mpc(1 / sqm)))
        if sign == "plus":
            ell = _ell_raw(mpc(m))
        else:
            ell = 1 / _ell_raw(mpc(m))
        v = 2 * mp.log(ell)
        cone = v.imag

        def bc(z):
            z = mpc(z)
            with mp.workprec(prec):
                return BigComplex(+z.real, +z.imag, prec)

        with mp.workprec(prec):
            return RepData(
                bc(m),
                bc(d),
                tuple(tuple(bc(e) for e in row) for row in rho_x),
                tuple(tuple(bc(e) for e in row) for row in rho_y),
                bc(ell),
                bc(v),
                +cone,
            )


def torsion_lambda(u, prec_bits: int | None = None) -> BigComplex:
    """Torsion associated with the longitude: 1/(2m + 2/m - 1), which equals
    1/sqrt(17 + 4 Tr rho(longitude)) up to the square-root sign."""
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = _as_u(u, mp.prec)
        _check_u_open(uu)
        val = mpc(1 / (2 * _c_of_u(uu) - 1))
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def torsion_mu(u, prec_bits: int | None = None) -> BigComplex:
    """Torsion associated with the meridian: (dv/du) * torsion_lambda.

    dv/du comes from differentiating the closed-form longitude eigenvalue,
    dv/du = 2 m ell'(m) / ell(m).  The overall torsion sign is a convention;
    this function commits to the formula above, and equality with t_of_u is
    asserted only after squaring.
    """
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = _as_u(u, mp.prec)
        _check_u_open(uu)
        m = mpc(mp.exp(uu))
        dv_du = 2 * m * _d_ell_dm_raw(m) / _ell_raw(m)
        val = dv_du / (2 * _c_of_u(uu) - 1)
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def cs_invariant(u, prec_bits: int | None = None) -> BigComplex:
    """S(u) - pi i u - u v / 4 with v on the geometric branch."""
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        uu = _as_u(u, mp.prec)
        _check_u_open(uu)
        S = s_of_u(uu, mp.prec).to_mpc()
        v = rep_data(uu, "plus", mp.prec).v.to_mpc()
        val = S - mpc(0, mp.pi) * uu - uu * v / 4
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


# -- torus-knot analogues -------------------------------------------------


def _check_torus_args(a: int, b: int, k: int):
    if a < 2 or b < 2:
        raise ArgError(f"torus parameters must satisfy a, b >= 2, got ({a}, {b})")
    if math.gcd(a, b) != 1:
        raise ArgError(f"torus parameters must be coprime, got ({a}, {b})")
    if not (1 <= k <= a * b - 1):
        raise ArgError(f"k must lie in [1, ab - 1], got k = {k}")


def torus_S_k(a: int, b: int, k: int, u: Number, prec_bits: int | None = None) -> BigComplex:
    """-(2 k pi i - a b (2 pi i + u))^2 / (4 a b) for the (a, b) torus knot."""
    _check_torus_args(a, b, k)
    prec = prec_bits or (u.prec_bits if isinstance(u, BigComplex) else None) or default_prec_bits()
    with mp.workprec(prec + 10):
        uc = u.to_mpc() if isinstance(u, BigComplex) else mpc(u)
        z = 2 * k * mpc(0, mp.pi) - a * b * (mpc(0, 2 * mp.pi) + uc)
        val = -z * z / (4 * a * b)
    with mp.workprec(prec):
        return BigComplex(+val.real, +val.imag, prec)


def torus_T_k(a: int, b: int, k: int, prec_bits: int | None = None) -> mpf:
    """16 sin^2(k pi / a) sin^2(k pi / b) / (a b); vanishes iff a or b divides k."""
    _check_torus_args(a, b, k)
    prec = prec_bits or default_prec_bits()
    with mp.workprec(prec + 10):
        if k % a == 0 or k % b == 0:
            val = mpf(0)
        else:
            sa = mp.sin(k * mp.pi / a)
            sb = mp.sin(k * mp.pi / b)
            val = 16 * sa * sa * sb * sb / (a * b)
    with mp.workprec(prec):
        return +val
