"""Exact colored Jones polynomial of the figure-eight knot.

The N-colored invariant, normalized to 1 on the unknot, is the finite sum

    J_N(q) = sum_{k=0}^{N-1} q^{-kN} prod_{l=1}^{k} (1 - q^{N-l}) (1 - q^{N+l}).

Everything downstream evaluates it at q = exp(xi/N) with xi = u + 2 pi i,
where u is the deformation parameter of the flat connection; u = 0 gives the
root of unity exp(2 pi i / N), i.e. the Kashaev invariant, whose summands are
products of |1 - q^{N +- l}|^2 factors and hence real.

The sum is evaluated with running products, O(N) multiplications total, and
wrapped in the adaptive precision contract so callers get a value that has
stabilized to the module tolerance rather than one carrying unknown roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .errors import ArgError
from .precision import (
    BigComplex,
    Number,
    adaptive_eval,
    default_prec_bits,
    request_for_color,
)

# upper end of the deformation interval: log((3 + sqrt 5) / 2) = 0.9624...
def u_ceiling(prec_bits: int | None = None) -> mpf:
    """Largest u for which the asymptotic machinery applies (exclusive)."""
    with mp.workprec(prec_bits or default_prec_bits()):
        return +mp.log((3 + mp.sqrt(5)) / 2)


@dataclass(frozen=True)
class KnotParam:
    """Evaluation point of the colored Jones function.

    u is kept as an exact mpf (a float input is used bit-for-bit; a string is
    parsed at prec_bits), and xi = u + 2 pi i is materialized at prec_bits.
    Exact evaluation permits any real u; the asymptotic model additionally
    needs 0 <= u < u_ceiling().
    """

    N: int
    u: mpf
    xi: BigComplex
    prec_bits: int

    @staticmethod
    def make(N: int, u, prec_bits: int | None = None) -> "KnotParam":
        if N < 1:
            raise ArgError(f"color N must be a positive integer, got {N}")
        prec = prec_bits or default_prec_bits()
        with mp.workprec(prec):
            uu = mpf(u) if not isinstance(u, str) else mpf(u)
            xi = mpc(uu, 2 * mp.pi)
            return KnotParam(N, +uu, BigComplex(+xi.real, +xi.imag, prec), prec)


def _colored_jones_raw(N: int, q: mpc) -> mpc:
    """Habiro-Le sum with running products at the current precision."""
    one = mpc(1)
    total = one  # k = 0 term, empty product
    if N == 1:
        return total
    qN = q**N
    inv_qN = 1 / qN
    prod = one
    shift = one  # q^{-kN}
    a = qN / q  # q^{N-k} for the current k
    b = qN * q  # q^{N+k}
    for _ in range(1, N):
        prod *= (1 - a) * (1 - b)
        shift *= inv_qN
        total += shift * prod
        a /= q
        b *= q
    return total


def colored_jones_fig8(N: int, q: Number) -> BigComplex:
    """J_N of the figure-eight knot at an arbitrary nonzero q."""
    if N < 1:
        raise ArgError(f"color N must be a positive integer, got {N}")
    q = BigComplex.make(q) if not isinstance(q, BigComplex) else q
    with mp.workprec(q.prec_bits):
        qc = q.to_mpc()
        if qc == 0:
            raise ArgError("q must be nonzero")
        r = _colored_jones_raw(N, qc)
        return BigComplex(+r.real, +r.imag, q.prec_bits)


DEFAULT_EVAL_TOL = "1e-30"


def eval_at_xi(p: KnotParam, tol: str = DEFAULT_EVAL_TOL) -> BigComplex:
    """J_N at q = exp(xi / N), stabilized by precision doubling.

    Each retry rebuilds xi from the stored exact u at the trial precision, so
    escalation genuinely refines the result instead of re-rounding a fixed
    128-bit xi.
    """

    def attempt(prec: int) -> mpc:
        with mp.workprec(prec):
            q = mp.exp(mpc(p.u, 2 * mp.pi) / p.N)
            return _colored_jones_raw(p.N, q)

    req = request_for_color(p.N, tol, initial_prec_bits=p.prec_bits)
    return adaptive_eval(attempt, req)


def kashaev(N: int) -> BigComplex:
    """J_N at the root of unity exp(2 pi i / N).

    The summands are then products of |1 - q^{N +- l}|^2 factors, so the
    imaginary part of the result is pure roundoff.
    """
    return eval_at_xi(KnotParam.make(N, 0))
