"""Gaussian integrals over thermal P-functions.

All integrals here are against the normalized complex Gaussian

    P(beta) = exp(-|beta - c|**2 / a) / (pi * a),

whose mean of ``|beta - c|**2`` is ``a``.  ``a = 0`` is the point mass at
``c`` and every routine accepts it.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not settle within the allowed order."""


def thermal_average(a, c, b, u=0.0, v=0.0):
    """``E_P[exp(-b|beta|^2 + u beta + v conj(beta))]`` in closed form.

    Parameters
    ----------
    a : float
        Spread of the Gaussian, ``E|beta - c|^2``.
    c : complex
        Centre.
    b, u, v : complex or array
        Quadratic and linear coefficients of the exponent.  Requires
        ``Re(1/a + b) > 0`` for the integral to exist; arrays broadcast.

    Returns
    -------
    complex or ndarray
    """
    c = np.asarray(c, dtype=complex)
    b = np.asarray(b, dtype=complex)
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    d = 1.0 + a * b
    expo = (u * c + v * np.conj(c) + a * u * v - b * np.abs(c) ** 2) / d
    out = np.exp(expo) / d
    return out[()] if out.ndim == 0 else out


@lru_cache(maxsize=64)
def _hermgauss(order: int):
    x, w = np.polynomial.hermite.hermgauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def thermal_nodes(a: float, c: complex, b: float, order: int):
    """Product Gauss-Hermite rule for ``E_P[exp(-b|beta|^2) g(beta)]``.

    The ``exp(-b|beta|^2)`` factor is folded into the Gaussian weight, so the
    rule is exact whenever ``g`` is a polynomial in ``beta`` and
    ``conj(beta)`` of degree below ``2*order`` in each quadrature.

    Returns
    -------
    nodes : ndarray of complex, shape (order**2,)
    weights : ndarray of complex, shape (order**2,)
        ``sum(weights * g(nodes))`` approximates the expectation.
    """
    d = 1.0 + a * b
    centre = c / d
    scale = math.sqrt(a / d)
    x, w = _hermgauss(order)
    nodes = (centre + scale * (x[:, None] + 1j * x[None, :])).ravel()
    weights = (w[:, None] * w[None, :]).ravel() / math.pi
    weights = weights * np.exp(-b * abs(c) ** 2 / d) / d
    return nodes, weights


def adaptive(evaluate, start: int = 16, tol: float = 1e-10, max_order: int = 1024):
    """Double the quadrature order until two successive results agree.

    ``evaluate(order)`` returns a scalar or array; agreement is measured as the
    largest absolute elementwise change.

    Returns
    -------
    result, order
    """
    order = start
    prev = evaluate(order)
    while order < max_order:
        order *= 2
        cur = evaluate(order)
        change = float(np.max(np.abs(np.asarray(cur) - np.asarray(prev))))
        if change < tol:
            return cur, order
        prev = cur
    raise QuadratureError(
        f"quadrature not converged at order {order}: last change {change:.3e} > {tol:.1e}"
    )


def polar_integrate(f, r_max: float, n_theta: int = 256, epsabs: float = 1e-14,
                    points=None) -> float:
    """Integrate a real ``f(beta)`` over the disc ``|beta| <= r_max``.

    Trapezoid rule in angle (spectrally accurate for smooth periodic
    integrands), adaptive ``scipy.integrate.quad`` in radius.  ``f`` must
    accept complex arrays.
    """
    from scipy.integrate import quad

    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    phase = np.exp(1j * theta)

    def ring(r):
        return r * float(np.mean(f(r * phase))) * 2.0 * math.pi

    val, _ = quad(ring, 0.0, r_max, epsabs=epsabs, epsrel=1e-13, limit=500,
                  points=points)
    return val
