"""Numerical engine: adaptive semi-axis quadrature and Matsubara summation.

The finite-interval rule is an adaptive, vectorised Gauss-Legendre pair
(10 and 21 nodes); the difference of the two is the local error estimate.
Integrands must accept a 1-D float array and return an array of the same
shape (complex allowed).

Semi-infinite tails come in two flavours:

* decaying integrands: geometric blocks [W, 2W], [2W, 4W], ... until the
  blocks are negligible;
* oscillatory integrands exp(i s w) a(w) with a(w) not decaying (these only
  converge in the Abel sense): half-period blocks whose partial sums are
  extrapolated with Wynn's epsilon algorithm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "MatsubaraResult",
    "integrate_interval",
    "integrate_semiaxis",
    "matsubara_sum",
    "wynn_epsilon",
]

_X10, _W10 = np.polynomial.legendre.leggauss(10)
_X21, _W21 = np.polynomial.legendre.leggauss(21)
_NODES = np.concatenate([_X21, _X10])
_N21 = len(_X21)
_EVALS_PER_INTERVAL = len(_NODES)
_ROUNDOFF = 100 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_evals: int = 4_000_000
    breakpoints: tuple = ()
    # e^{i s w}: s is the phase rate, a length in natural units (2 n R for the pair kernels)
    oscillation_scale: Optional[float] = None
    max_blocks: int = 20_000
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("abs_tol and rel_tol must be > 0")
        if not self.max_evals > 0:
            raise DomainError("max_evals must be > 0")
        if self.oscillation_scale is not None and not self.oscillation_scale > 0:
            raise DomainError("oscillation_scale must be > 0")
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))

    def tolerance(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


class QuadResult(NamedTuple):
    value: complex
    error: float
    evals: int


class MatsubaraResult(NamedTuple):
    value: complex
    n_terms: int
    tail_bound: float


def _rule(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    if not np.all(np.isfinite(y)):
        raise ConvergenceError("integrand returned a non-finite value",
                               interval=(float(a[0]), float(b[-1])))
    v21 = half * (y[:, :_N21] @ _W21)
    v10 = half * (y[:, _N21:] @ _W10)
    return v21, np.abs(v21 - v10), np.abs(half) * (np.abs(y[:, :_N21]) @ _W21)


def integrate_interval(f: Callable, a: float, b: float, spec: QuadratureSpec = QuadratureSpec(),
                       points: Sequence[float] = (), abs_tol: Optional[float] = None) -> QuadResult:
    """Adaptive integral of ``f`` over [a, b], splitting first at ``points``."""
    if not b > a:
        if b == a:
            return QuadResult(0j, 0.0, 0)
        raise DomainError("integration limits must satisfy a < b")
    atol = spec.abs_tol if abs_tol is None else abs_tol
    edges = np.unique(np.concatenate([[a], [p for p in points if a < p < b], [b]]))
    lo, hi = edges[:-1].astype(float), edges[1:].astype(float)
    val, err, mag = _rule(f, lo, hi)
    evals = _EVALS_PER_INTERVAL * len(lo)
    while True:
        total = val.sum()
        err_tot = float(err.sum())
        # the integrand values carry ~eps |f| noise, so cancellation below
        # ~eps * int |f| cannot be resolved by any rule: that is the floor
        floor = _ROUNDOFF * float(mag.sum())
        tol = max(atol, spec.rel_tol * abs(total), floor)
        if err_tot <= tol:
            return QuadResult(complex(total), float(max(err_tot, min(floor, tol))), evals)
        if evals >= spec.max_evals:
            raise ConvergenceError("adaptive quadrature exceeded its evaluation budget",
                                   evals=evals, error=err_tot, tolerance=tol, interval=(a, b))
        width = hi - lo
        splittable = width > 64 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        share = tol / (2 * len(err))
        cand = np.flatnonzero((err > share) & splittable)
        if cand.size == 0:
            raise ConvergenceError("adaptive quadrature cannot refine further",
                                   evals=evals, error=err_tot, tolerance=tol, interval=(a, b))
        if cand.size > 2048:
            cand = cand[np.argsort(err[cand])[-2048:]]
        mid = 0.5 * (lo[cand] + hi[cand])
        new_lo = np.concatenate([lo[cand], mid])
        new_hi = np.concatenate([mid, hi[cand]])
        nv, ne, nm = _rule(f, new_lo, new_hi)
        evals += _EVALS_PER_INTERVAL * len(new_lo)
        keep = np.ones(len(lo), dtype=bool)
        keep[cand] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        mag = np.concatenate([mag[keep], nm])


def wynn_epsilon(seq) -> complex:
    """Wynn epsilon extrapolation of a sequence of partial sums."""
    s = [complex(v) for v in seq]
    n = len(s)
    if n < 3:
        return s[-1]
    if n % 2 == 0:
        s = s[1:]
        n -= 1
    prev = [0j] * (n + 1)
    cur = list(s)
    best = cur[-1]
    for k in range(1, n):
        nxt = []
        for j in range(len(cur) - 1):
            diff = cur[j + 1] - cur[j]
            if diff == 0:
                return cur[j + 1] if k % 2 == 1 else best
            nxt.append(prev[j + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        if k % 2 == 0:
            best = cur[-1]
    return best


def _oscillatory_tail(f, start, spec, tol):
    half = math.pi / spec.oscillation_scale
    partial = [0j]
    blk_err = 0.0
    evals = 0
    estimates = []
    small_run = 0
    for k in range(spec.max_blocks):
        a = start + k * half
        r = integrate_interval(f, a, a + half, spec, abs_tol=0.01 * tol)
        evals += r.evals
        blk_err += r.error
        partial.append(partial[-1] + r.value)
        small_run = small_run + 1 if abs(r.value) <= 1e-3 * tol else 0
        if small_run >= 3:
            return partial[-1], blk_err, evals
        if len(partial) >= 6:
            est = wynn_epsilon(partial[-min(len(partial), 25):])
            estimates.append(est)
            if len(estimates) >= 3:
                d1 = abs(estimates[-1] - estimates[-2])
                d2 = abs(estimates[-2] - estimates[-3])
                if max(d1, d2) <= 0.1 * tol:
                    return estimates[-1], max(blk_err, d1, d2), evals
    raise ConvergenceError("oscillatory tail did not converge", blocks=spec.max_blocks, evals=evals)


def _decaying_tail(f, start, spec, tol):
    total = 0j
    err = 0.0
    evals = 0
    a = start
    quiet = 0
    for _ in range(160):
        b = 2.0 * a
        r = integrate_interval(f, a, b, spec, abs_tol=0.01 * tol)
        evals += r.evals
        total += r.value
        err += r.error
        quiet = quiet + 1 if abs(r.value) <= 1e-3 * max(tol, spec.rel_tol * abs(total)) else 0
        if quiet >= 2:
            return total, err, evals
        a = b
        if not math.isfinite(a):
            break
    raise ConvergenceError("non-decaying tail detected", reached=a, evals=evals)


def integrate_semiaxis(f: Callable, spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Integral of ``f`` over (0, inf).

    The finite part [0, W] is split at the declared breakpoints (and into
    one-period pieces when ``oscillation_scale`` is set); the remainder is
    handled by the tail strategy matching the integrand class.
    """
    bps = sorted(b for b in spec.breakpoints if b > 0 and math.isfinite(b))
    top = bps[-1] if bps else 1.0
    pieces = [0.0] + bps
    if spec.oscillation_scale is not None:
        period = 2 * math.pi / spec.oscillation_scale
        end = max(4.0 * top, 8.0 * period)
        grid = np.arange(period, end, period)
        pieces = sorted(set(pieces) | set(grid.tolist()))
    else:
        end = 2.0 * top
    pieces = [p for p in pieces if p < end] + [end]
    finite = integrate_interval(f, pieces[0], end, spec, points=pieces[1:-1])
    tol = spec.tolerance(finite.value)
    if spec.oscillation_scale is not None:
        tail, terr, tev = _oscillatory_tail(f, end, spec, tol)
    else:
        tail, terr, tev = _decaying_tail(f, end, spec, tol)
    return QuadResult(complex(finite.value + tail), finite.error + terr, finite.evals + tev)


def matsubara_sum(g: Callable, T: float, spec: QuadratureSpec = QuadratureSpec()) -> MatsubaraResult:
    """Sum_{n>=0} (1 - delta_{n0}/2) g(2 pi n T).

    Stops at the first N where both |t_N| and the geometric tail bound
    |t_N| rho/(1 - rho), rho = |t_N/t_{N-1}| (required non-increasing), are
    below max(abs_tol, rel_tol |S_N|).  ``g`` must be vectorised.
    """
    if not T > 0:
        raise DomainError("Matsubara summation needs T > 0")
    step = 2.0 * math.pi * T
    total = 0j
    prev_abs = None
    prev_ratio = math.inf
    n0 = 0
    chunk = 64
    while n0 < spec.max_terms:
        n = np.arange(n0, min(n0 + chunk, spec.max_terms))
        t = np.asarray(g(step * n), dtype=complex)
        if t.shape != n.shape:
            t = np.broadcast_to(t, n.shape).astype(complex)
        if n0 == 0:
            t = t.copy()
            t[0] *= 0.5
        if not np.all(np.isfinite(t)):
            raise ConvergenceError("Matsubara term is not finite", index=int(n0))
        partial = total + np.cumsum(t)
        mags = np.abs(t)
        for i in range(len(n)):
            m = mags[i]
            idx = int(n[i])
            if prev_abs is None:
                prev_abs = m
                continue
            if m == 0 and prev_abs == 0:
                tail = 0.0
                ratio = 0.0
            elif prev_abs == 0:
                tail, ratio = math.inf, math.inf
            else:
                ratio = m / prev_abs
                tail = m * ratio / (1 - ratio) if ratio < 1 and ratio <= prev_ratio else math.inf
            tol = spec.tolerance(partial[i])
            if idx >= 2 and m <= tol and tail <= tol:
                return MatsubaraResult(complex(partial[i]), idx + 1, float(tail))
            prev_abs, prev_ratio = m, ratio
        total = partial[-1]
        n0 += len(n)
        chunk = min(2 * chunk, 1 << 16)
    raise ConvergenceError("Matsubara sum did not converge (terms do not decay)",
                           n_terms=spec.max_terms, last_term=float(prev_abs or 0.0))
