"""Photon Green tensor of a homogeneous medium and its scalar radial factors."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import DomainError

__all__ = [
    "RadialKernelValue",
    "green_tensor_retarded",
    "green_tensor_advanced",
    "radial_kernels",
    "nonres_kernel",
    "res_kernel",
    "imag_axis_kernel",
    "phased_kernel",
]

_SERIES_RADIUS = 0.5
_SERIES_TERMS = 40


def _phased_series_coefficients(nterms):
    # x^4 f(x) e^{2ix} = (3 - 6i x - 5x^2 + 2i x^3 + x^4) e^{2ix}; exact rationals so the
    # low orders cancel exactly (c_1 = c_3 = 0, c_2 = 1)
    poly = [(Fraction(3), Fraction(0)), (Fraction(0), Fraction(-6)), (Fraction(-5), Fraction(0)),
            (Fraction(0), Fraction(2)), (Fraction(1), Fraction(0))]
    i_pow = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    coeffs = []
    for k in range(nterms):
        re = im = Fraction(0)
        for j, (pr, pi) in enumerate(poly):
            m = k - j
            if m < 0:
                continue
            ir, ii = i_pow[m % 4]
            c = Fraction(2**m, factorial(m))
            er, ei = c * ir, c * ii
            re += pr * er - pi * ei
            im += pr * ei + pi * er
        coeffs.append(complex(float(re), float(im)))
    return np.array(coeffs)


_PHASED_COEFFS = _phased_series_coefficients(_SERIES_TERMS)


@dataclass(frozen=True)
class RadialKernelValue:
    f_nonres: complex
    g_res: complex
    x: complex


def nonres_kernel(x):
    """1 + 2i/x - 5/x^2 - 6i/x^3 + 3/x^4 (orientation-averaged D_r . D_r / 2)."""
    x = np.asarray(x, dtype=complex)
    if np.any(x == 0):
        raise DomainError("kernel argument x = n*omega*R must be nonzero")
    inv = 1.0 / x
    return 1 + inv * (2j + inv * (-5 + inv * (-6j + 3 * inv)))


def res_kernel(x):
    """1 + 1/x^2 + 3/x^4, the bracket of the real-photon term."""
    x = np.asarray(x, dtype=complex)
    if np.any(x == 0):
        raise DomainError("kernel argument x = n*omega*R must be nonzero")
    inv2 = 1.0 / (x * x)
    return 1 + inv2 + 3 * inv2 * inv2


def imag_axis_kernel(y):
    """nonres_kernel(i*y): 1 + 2/y + 5/y^2 + 6/y^3 + 3/y^4."""
    y = np.asarray(y, dtype=complex)
    if np.any(y == 0):
        raise DomainError("kernel argument must be nonzero")
    inv = 1.0 / y
    return 1 + inv * (2 + inv * (5 + inv * (6 + 3 * inv)))


def green_tensor_retarded(n_omega, omega, r_vec):
    """3x3 retarded photon propagator at frequency ``omega`` and separation ``r_vec``.

    D = omega^2 exp(i n omega R)/R [delta A(x) + rhat rhat B(x)], x = n omega R,
    A = 1 + i/x - 1/x^2, B = 3/x^2 - 3i/x - 1.
    """
    r_vec = np.asarray(r_vec, dtype=float).reshape(3)
    R = float(np.linalg.norm(r_vec))
    if R == 0:
        raise DomainError("Green tensor undefined at coincident points (R = 0)")
    x = complex(n_omega) * omega * R
    if x == 0:
        raise DomainError("Green tensor needs n*omega*R != 0")
    rhat = r_vec / R
    A = 1 + 1j / x - 1 / x**2
    B = 3 / x**2 - 3j / x - 1
    pref = omega**2 * np.exp(1j * x) / R
    return pref * (A * np.eye(3) + B * np.outer(rhat, rhat))


def green_tensor_advanced(n_omega, omega, r_vec):
    return np.conj(green_tensor_retarded(n_omega, omega, r_vec))


def radial_kernels(n_omega, omega, R) -> RadialKernelValue:
    if R <= 0:
        raise DomainError("separation must be > 0")
    x = complex(n_omega) * omega * R
    return RadialKernelValue(complex(nonres_kernel(x)), complex(res_kernel(x)), x)


def phased_kernel(x):
    """x^4 * nonres_kernel(x) * exp(2ix), finite at x = 0 (value 3).

    Near the origin the closed form loses all digits to cancellation, so a
    power series with exact coefficients is used for |x| < 0.5.
    """
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < _SERIES_RADIUS
    xs = x[small]
    acc = np.zeros_like(xs)
    for c in _PHASED_COEFFS[::-1]:
        acc = acc * xs + c
    out[small] = acc
    xl = x[~small]
    out[~small] = (3 + xl * (-6j + xl * (-5 + xl * (2j + xl)))) * np.exp(2j * xl)
    return out[()] if out.ndim == 0 else out
