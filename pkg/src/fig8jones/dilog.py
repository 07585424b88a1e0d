"""Principal-branch complex dilogarithm.

li2 evaluates Li2(z) = -integral from 0 to z of log(1-x)/x dx with the branch
cut on (1, inf).  Arguments exactly on the open cut are rejected: this
library's callers always have off-cut arguments, and silently picking a side
would hide a bug.

Region strategy, each with geometric convergence:

  |z| <= 1/2          power series sum z^k / k^2
  |z| >= 2            inversion identity (li2_inverted)
  |1 - z| <= 1/2      reflection z -> 1-z, series at 1-z
  remaining annulus   series in L = -log(1-z) with Bernoulli-number
                      coefficients (converges for |L| < 2pi)

The annulus includes the sixth roots of unity exp(+-i pi/3), where no
Moebius-type rearrangement (z -> 1-z, 1/z, z/(z-1), ...) lowers the modulus:
those two points are fixed by the whole transformation orbit.  The L-series
covers that neighborhood with ratio about (|L|/2pi)^2 < 0.29 per term, since
|L| stays below 3.4 everywhere in the annulus once the reflection disk is
removed.
"""

from __future__ import annotations

from mpmath import bernoulli, mp, mpc, mpf

from .errors import DomainError
from .precision import BigComplex, Number

# extra working bits so region hand-offs do not erode the requested precision
GUARD_BITS = 16


def _on_cut(z: mpc) -> bool:
    return z.imag == 0 and z.real > 1


def _series(z: mpc) -> mpc:
    # sum z^k / k^2; caller guarantees |z| <= 1/2 + eps so ~prec terms suffice
    tol = mpf(2) ** (-mp.prec - 4)
    total = mpc(0)
    zk = mpc(1)
    k = 0
    while True:
        k += 1
        zk *= z
        term = zk / (k * k)
        total += term
        if abs(term) < tol * (1 + abs(total)):
            return total


def _log_series(z: mpc) -> mpc:
    # Li2(z) = sum_{n>=0} B_n L^{n+1} / (n+1)!  with L = -log(1-z),
    # from d/dt Li2(1 - e^-t) = t/(e^t - 1).  Odd Bernoulli numbers
    # vanish past B_1, so the loop steps through even orders.
    L = -mp.log(1 - z)
    tol = mpf(2) ** (-mp.prec - 4)
    L2 = L * L
    total = L - L2 / 4  # n = 0 and n = 1 terms
    term = L  # B_n L^{n+1} / (n+1)! for n = 0
    n = 0
    while True:
        n += 2
        term *= L2 / (n * (n + 1))
        contrib = bernoulli(n) * term
        total += contrib
        if abs(contrib) < tol * (1 + abs(total)):
            return total


def _li2_raw(z: mpc) -> mpc:
    """Li2 at the current mp context precision; z must be off the cut."""
    if z == 0:
        return mpc(0)
    if z == 1:
        return mpc(mp.pi**2 / 6)
    a = abs(z)
    if a <= mpf("0.5"):
        return _series(z)
    if a >= 2:
        # inversion onto |1/z| <= 1/2; -pi < Im log(-z) < pi
        lg = mp.log(-z)
        return -(mp.pi**2) / 6 - lg * lg / 2 - _series(1 / z)
    w = 1 - z
    if abs(w) <= mpf("0.5"):
        # reflection; w is small so log(z) log(w) is benign
        return mp.pi**2 / 6 - mp.log(z) * mp.log(w) - _series(w)
    return _log_series(z)


def li2(z: Number) -> BigComplex:
    """Principal-branch dilogarithm, analytic on C minus (1, inf).

    Raises DomainError for arguments exactly on the open cut; callers that
    mean a boundary value must perturb to the intended side themselves.
    """
    z = BigComplex.make(z) if not isinstance(z, BigComplex) else z
    with mp.workprec(z.prec_bits + GUARD_BITS):
        zc = z.to_mpc()
        if _on_cut(zc):
            raise DomainError(
                f"li2 argument {zc} lies on the branch cut (1, inf); choose a side"
            )
        r = _li2_raw(zc)
    with mp.workprec(z.prec_bits):
        return BigComplex(+r.real, +r.imag, z.prec_bits)


def _li2_inverted_raw(z: mpc) -> mpc:
    lg = mp.log(-z)
    return -(mp.pi**2) / 6 - lg * lg / 2 - _li2_raw(1 / z)


def li2_inverted(z: Number) -> BigComplex:
    """Dilogarithm via the inversion identity
    Li2(z) = -pi^2/6 - (1/2) log(-z)^2 - Li2(1/z),
    with -pi < Im log(-z) < pi.  Equals li2(z) wherever both are defined.

    The identity needs -z off the cut of log and 1/z off the cut of Li2, so
    arguments on [0, inf) are rejected.
    """
    z = BigComplex.make(z) if not isinstance(z, BigComplex) else z
    with mp.workprec(z.prec_bits + GUARD_BITS):
        zc = z.to_mpc()
        if zc.imag == 0 and zc.real >= 0:
            raise DomainError(f"li2_inverted argument {zc} lies on [0, inf)")
        r = _li2_inverted_raw(zc)
    with mp.workprec(z.prec_bits):
        return BigComplex(+r.real, +r.imag, z.prec_bits)
