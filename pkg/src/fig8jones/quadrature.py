"""Gauss-Legendre panel quadrature at arbitrary precision.

mpmath's own quad() re-derives nodes inside each call and offers no way to
share an integrand's expensive kernel across many evaluations, so this module
keeps its own node cache and exposes two layers:

  gl_nodes(n)          nodes/weights on [-1, 1] at the current precision,
                       cached per (n, prec)
  fixed_quad           single panel along a straight complex segment
  adaptive_segment     bisecting panels on one segment to an absolute
                       tolerance (error estimate: parent vs two children)
  adaptive_polyline    the same along a chain of vertices with a shared
                       global error budget

Absolute tolerances are deliberate: the integrands here are exponentially
peaked, and a relative-per-panel rule would waste almost all of its work
resolving panels whose total contribution is far below the final answer's
noise floor.  Callers set abs_tol from the scale of the result they expect.
"""

from __future__ import annotations

from typing import Callable

from mpmath import mp, mpc, mpf

from .errors import QuadratureFailure

_node_cache: dict = {}


def gl_nodes(n: int, prec_bits: int | None = None):
    """Gauss-Legendre nodes and weights on [-1, 1].

    Newton iteration on the Legendre polynomial P_n from Chebyshev starting
    guesses; converges to full precision in a handful of steps.  Results are
    cached by (n, precision).
    """
    prec = prec_bits if prec_bits is not None else mp.prec
    key = (n, prec)
    cached = _node_cache.get(key)
    if cached is not None:
        return cached
    with mp.workprec(prec + 16):
        nodes = []
        for i in range(1, n // 2 + 1):
            # Chebyshev-like initial guess for the i-th positive-side root
            x = mp.cos(mp.pi * (i - mpf(1) / 4) / (n + mpf(1) / 2))
            for _ in range(60):
                # evaluate P_n and P_n' by the three-term recurrence
                p0, p1 = mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpf(2) ** (-prec - 8):
                    break
            p0, p1 = mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append((x, w))
        pairs = []
        for x, w in nodes:
            pairs.append((-x, w))
        if n % 2 == 1:
            # x = 0 root; weight from the same formula
            x = mpf(0)
            p0, p1 = mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            pairs.append((x, 2 / (dp * dp)))
        for x, w in reversed(nodes):
            pairs.append((x, w))
    with mp.workprec(prec):
        pairs = [(+x, +w) for x, w in pairs]
    _node_cache[key] = pairs
    return pairs


def fixed_quad(f: Callable, a, b, n: int = 24) -> mpc:
    """Single Gauss-Legendre panel of f along the straight segment a -> b."""
    a, b = mpc(a), mpc(b)
    half = (b - a) / 2
    mid = (a + b) / 2
    total = mpc(0)
    for x, w in gl_nodes(n):
        total += w * f(mid + half * x)
    return total * half


def adaptive_segment(
    f: Callable,
    a,
    b,
    abs_tol,
    n: int = 24,
    max_depth: int = 28,
    _coarse=None,
) -> mpc:
    """Integrate f over the segment a -> b to absolute tolerance abs_tol.

    The error estimate for a panel is |whole - (left + right)|; panels are
    bisected depth-first, each child inheriting half the parent's budget, so
    the worst-case total error is abs_tol.
    """
    whole = fixed_quad(f, a, b, n) if _coarse is None else _coarse
    mid = (mpc(a) + mpc(b)) / 2
    left = fixed_quad(f, a, mid, n)
    right = fixed_quad(f, mid, b, n)
    refined = left + right
    if abs(whole - refined) <= abs_tol:
        return refined
    if max_depth <= 0:
        raise QuadratureFailure(
            f"segment [{a}, {b}] did not converge to {abs_tol} before depth limit"
        )
    half_tol = abs_tol / 2
    return adaptive_segment(
        f, a, mid, half_tol, n, max_depth - 1, _coarse=left
    ) + adaptive_segment(f, mid, b, half_tol, n, max_depth - 1, _coarse=right)


def adaptive_polyline(f: Callable, vertices, abs_tol, n: int = 24, max_depth: int = 28) -> mpc:
    """Integrate f along the polygonal chain through vertices."""
    if len(vertices) < 2:
        raise QuadratureFailure("polyline needs at least two vertices")
    segs = len(vertices) - 1
    per_seg = mpf(abs_tol) / segs
    total = mpc(0)
    for a, b in zip(vertices[:-1], vertices[1:]):
        total += adaptive_segment(f, a, b, per_seg, n, max_depth)
    return total
