"""Arbitrary-precision complex values with explicit precision metadata.

BigComplex is the carrier type for every analytic quantity in this library.
It wraps a pair of mpmath reals together with the working precision (in bits)
they were produced at.  Arithmetic between two BigComplex values is performed
at the minimum of the two precisions and the result records that precision,
so a value can never silently claim more accuracy than its least accurate
ingredient.

adaptive_eval implements the evaluation contract used throughout: run a
precision-parametrized computation at p and 2p bits, accept once the two
agree to the requested relative tolerance, and return the higher-precision
result.  Stabilization replaces a priori error analysis everywhere in this
package.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Union

from mpmath import mp, mpc, mpf

from .errors import ArgError, PrecisionExhausted

MIN_PREC_BITS = 64

Number = Union["BigComplex", mpc, mpf, complex, float, int, str]


def default_prec_bits() -> int:
    """Library-wide default working precision.

    Reads FIG8_PREC_BITS from the environment so campaigns can be re-run at a
    different precision without touching code; falls back to 128 bits.
    """
    raw = os.environ.get("FIG8_PREC_BITS")
    if raw is None:
        return 128
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ArgError(f"FIG8_PREC_BITS must be an integer, got {raw!r}") from exc
    if bits < MIN_PREC_BITS:
        raise ArgError(f"FIG8_PREC_BITS must be >= {MIN_PREC_BITS}, got {bits}")
    return bits


def _round_to(x, prec_bits: int) -> mpf:
    # unary plus re-rounds an mpf to the active context precision
    with mp.workprec(prec_bits):
        return +mpf(x)


@dataclass(frozen=True)
class BigComplex:
    """A complex number annotated with the precision it was computed at.

    Instances are immutable; arithmetic returns new values carrying
    prec_bits = min of the operand precisions.
    """

    re: mpf
    im: mpf
    prec_bits: int

    def __post_init__(self):
        if self.prec_bits < MIN_PREC_BITS:
            raise ArgError(
                f"prec_bits must be >= {MIN_PREC_BITS}, got {self.prec_bits}"
            )

    # -- construction -----------------------------------------------------

    @staticmethod
    def make(value: Number, prec_bits: int | None = None) -> "BigComplex":
        """Coerce a plain number (or decimal string) to BigComplex.

        Strings are parsed at the target precision, so "0.8" means the
        correctly rounded 0.8 at prec_bits, not the nearest double.
        """
        if isinstance(value, BigComplex):
            if prec_bits is None or prec_bits == value.prec_bits:
                return value
            with mp.workprec(prec_bits):
                return BigComplex(+value.re, +value.im, prec_bits)
        p = default_prec_bits() if prec_bits is None else prec_bits
        with mp.workprec(p):
            z = mpc(mpf(value)) if isinstance(value, str) else mpc(value)
            return BigComplex(+z.real, +z.imag, p)

    def to_mpc(self) -> mpc:
        return mpc(self.re, self.im)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: Number) -> "BigComplex":
        if isinstance(other, BigComplex):
            return other
        return BigComplex.make(other, self.prec_bits)

    def _binary(self, other: Number, op) -> "BigComplex":
        other = self._coerce(other)
        prec = min(self.prec_bits, other.prec_bits)
        with mp.workprec(prec):
            r = op(self.to_mpc(), other.to_mpc())
            return BigComplex(+r.real, +r.imag, prec)

    def __add__(self, other: Number) -> "BigComplex":
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other: Number) -> "BigComplex":
        return self._coerce(other)._binary(self, lambda a, b: a + b)

    def __sub__(self, other: Number) -> "BigComplex":
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other: Number) -> "BigComplex":
        return self._coerce(other)._binary(self, lambda a, b: a - b)

    def __mul__(self, other: Number) -> "BigComplex":
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other: Number) -> "BigComplex":
        return self._coerce(other)._binary(self, lambda a, b: a * b)

    def __truediv__(self, other: Number) -> "BigComplex":
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other: Number) -> "BigComplex":
        return self._coerce(other)._binary(self, lambda a, b: a / b)

    def __neg__(self) -> "BigComplex":
        # negate under own precision: mpmath rounds unary minus at the
        # ambient context, which may be narrower than this value
        with mp.workprec(self.prec_bits):
            return BigComplex(-self.re, -self.im, self.prec_bits)

    def conjugate(self) -> "BigComplex":
        with mp.workprec(self.prec_bits):
            return BigComplex(self.re, -self.im, self.prec_bits)

    def __abs__(self) -> mpf:
        with mp.workprec(self.prec_bits):
            return abs(self.to_mpc())

    def __repr__(self) -> str:
        with mp.workprec(self.prec_bits):
            return f"BigComplex({mp.nstr(self.re, 20)}, {mp.nstr(self.im, 20)}, prec_bits={self.prec_bits})"


def rel_distance(a: Number, b: Number) -> mpf:
    """Comparison metric used by the test suite: |a - b| / max(1, |b|)."""
    a = BigComplex.make(a) if not isinstance(a, BigComplex) else a
    b = BigComplex.make(b, a.prec_bits) if not isinstance(b, BigComplex) else b
    prec = min(a.prec_bits, b.prec_bits)
    with mp.workprec(prec + 10):
        num = abs(a.to_mpc() - b.to_mpc())
        den = max(mpf(1), abs(b.to_mpc()))
        return num / den


@dataclass(frozen=True)
class EvalRequest:
    """Parameters for adaptive_eval.

    max_prec_bits for an N-dependent computation defaults to
    max(2 * initial, 1 + ceil(8 N)); the doubling escalation makes the exact
    ceiling noncritical, it only has to be comfortably above the point where
    the computation stabilizes.
    """

    target_rel_tol: mpf
    initial_prec_bits: int = 128
    max_prec_bits: int = 2048

    def __post_init__(self):
        if not self.target_rel_tol > 0:
            raise ArgError("target_rel_tol must be positive")
        if self.initial_prec_bits < MIN_PREC_BITS:
            raise ArgError(f"initial_prec_bits must be >= {MIN_PREC_BITS}")
        if self.initial_prec_bits > self.max_prec_bits:
            raise ArgError("initial_prec_bits must not exceed max_prec_bits")


def request_for_color(N: int, tol="1e-30", initial_prec_bits: int | None = None) -> EvalRequest:
    """Default escalation schedule for a computation whose size grows with N."""
    initial = default_prec_bits() if initial_prec_bits is None else initial_prec_bits
    ceiling = max(2 * initial, 1 + 8 * N)
    with mp.workprec(max(initial, 64)):
        return EvalRequest(mpf(tol), initial, ceiling)


def adaptive_eval(f: Callable[[int], Number], req: EvalRequest) -> BigComplex:
    """Evaluate f at doubling precisions until two consecutive runs agree.

    f must be a deterministic function of its precision argument.  Accepts at
    the first pair (p, 2p) with |f(p) - f(2p)| <= tol * |f(2p)| and returns
    f(2p).  The final doubling is clamped to max_prec_bits; if the ceiling is
    reached without stabilization, PrecisionExhausted is raised with the last
    value attached.
    """
    p = req.initial_prec_bits
    lo = BigComplex.make(f(p), p)
    while p < req.max_prec_bits:
        p_hi = min(2 * p, req.max_prec_bits)
        hi = BigComplex.make(f(p_hi), p_hi)
        with mp.workprec(p_hi + 10):
            diff = abs(lo.to_mpc() - hi.to_mpc())
            bound = req.target_rel_tol * abs(hi.to_mpc())
            if diff <= bound:
                return hi
        p, lo = p_hi, hi
    raise PrecisionExhausted(
        f"no stabilization to rel tol {req.target_rel_tol} within {req.max_prec_bits} bits",
        last_value=lo,
        last_prec_bits=p,
    )
