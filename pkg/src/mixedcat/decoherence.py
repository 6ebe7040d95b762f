"""Amplitude-damping evolution of pure and mixed cats, in closed form.

Time enters only through the scaled time ``gamma_t`` and ``kappa =
exp(-gamma_t)``.  Under zero-temperature damping a coherent dyadic maps to

    |a><b|  ->  exp(-(1-kappa) ((|a|^2+|b|^2)/2 - a conj(b))) |sqrt(kappa) a><sqrt(kappa) b|

so the mixed cat stays a pair of thermal lobes with ``alpha' = sqrt(kappa)
alpha`` and ``V' = kappa (V-1) + 1``, while the coherence term picks up the
factor ``exp(-2(1-kappa)|beta|^2)`` in the *initial* amplitude ``beta``
(``exp(-2(1-kappa)|beta'|^2/kappa)`` in the damped one).  The trace of the
bracket ``rho_th + rho_th - sigma`` is conserved, so the normalization does
not depend on time.

Functions taking ``gamma_t`` accept scalars or arrays and are evaluated
elementwise, so a curve is bitwise independent of how its grid is split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.optimize import bisect

from .gaussian import thermal_average
from .states import (
    MqsParams,
    PhasePoint,
    as_complex,
    mixed_norm,
    pure_scs_norm,
)

QUANTITIES = ("W0_pure", "W0_mixed", "C_of_t", "single_decay", "W_surface_slice")


class NoCrossoverError(ValueError):
    """The negativity difference does not change sign in the bracket."""


def _kappa_pair(gamma_t):
    """``kappa`` and ``1 - kappa`` without cancellation at small ``gamma_t``."""
    gt = np.asarray(gamma_t, dtype=float)
    if np.any(~np.isfinite(gt)) or np.any(gt < 0):
        raise ValueError("scaled time gamma_t must be finite and nonnegative")
    return np.exp(-gt), -np.expm1(-gt)


_LOG_TINY = math.log(np.finfo(float).tiny)


def _exp(x):
    """``exp`` with subnormal results flushed to exactly 0."""
    x = np.asarray(x, dtype=float)
    return np.where(x < _LOG_TINY, 0.0, np.exp(np.maximum(x, _LOG_TINY)))


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class EvolvedParams:
    """Lobe parameters of the damped state.

    ``norm_t`` is the trace of ``rho_th(V', a') + rho_th(V', -a') - sigma_C``,
    i.e. ``1/N``; it is constant in time.
    """

    kappa: float
    alpha_prime: float
    v_prime: float
    norm_t: float


def evolve(p: MqsParams, gamma_t: float) -> EvolvedParams:
    kappa, _ = _kappa_pair(gamma_t)
    kappa = float(kappa)
    return EvolvedParams(
        kappa=kappa,
        alpha_prime=math.sqrt(kappa) * p.alpha,
        v_prime=kappa * (p.V - 1.0) + 1.0,
        norm_t=1.0 / mixed_norm(p),
    )


def damp_dyadic(a, b, kappa: float):
    """Damp the coherent dyadic ``|a><b|``.

    Returns
    -------
    coefficient : complex
    a_out, b_out : PhasePoint
        ``sqrt(kappa) a`` and ``sqrt(kappa) b``.
    """
    if not 0.0 < kappa <= 1.0:
        raise ValueError(f"kappa must lie in (0, 1], got {kappa}")
    a, b = complex(as_complex(a)), complex(as_complex(b))
    expo = -(1.0 - kappa) * ((abs(a) ** 2 + abs(b) ** 2) / 2.0 - a * b.conjugate())
    r = math.sqrt(kappa)
    return complex(np.exp(expo)), PhasePoint.from_complex(r * a), PhasePoint.from_complex(r * b)


def coherent_overlap(x: complex, y: complex) -> complex:
    """``<x|y>`` for coherent states."""
    return complex(np.exp(-abs(x) ** 2 / 2 - abs(y) ** 2 / 2 + x.conjugate() * y))


def wigner_origin(p: MqsParams, gamma_t):
    """Wigner function at the origin, ``(2/pi) <(-1)^n>``, at scaled time ``gamma_t``.

    Closed form

        W(0) = (4/pi) N [exp(-2 a^2 k / A) / A - exp(-2 a^2 (1-k) / B) / B]

    with ``A = k(V-1) + 1`` (the damped lobe variance) and
    ``B = V - k(V-1)``.  Exponentials that underflow become exactly 0; they
    enter only additively.
    """
    kappa, one_minus = _kappa_pair(gamma_t)
    a2, V = p.alpha**2, p.V
    A = kappa * (V - 1.0) + 1.0
    B = V - kappa * (V - 1.0)
    lobes = _exp(-2.0 * a2 * kappa / A) / A
    fringe = _exp(-2.0 * a2 * one_minus / B) / B
    return _scalar(4.0 / math.pi * mixed_norm(p) * (lobes - fringe))


def wigner_origin_legacy(p: MqsParams, gamma_t):
    """Older closed form for ``W(0)`` with denominators ``A = k(V-1)+1``,
    ``B = V+3-k(V-1)`` and a time-dependent ``C = 3k(V-1)+V+3``.

    It meets the ``k = 1`` and ``k -> 0`` limits but its fringe decays as
    ``exp(-a^2 (1-k)/2)`` for the pure cat instead of ``exp(-2 a^2 (1-k))``
    and disagrees with the Fock-space oracle at every intermediate time.
    Kept only so published-style curves can be regenerated side by side; all
    library results use :func:`wigner_origin`.
    """
    kappa, one_minus = _kappa_pair(gamma_t)
    a2, V = p.alpha**2, p.V
    A = kappa * (V - 1.0) + 1.0
    B = -kappa * (V - 1.0) + (V + 3.0)
    C = 3.0 * kappa * (V - 1.0) + (3.0 + V)
    num = _exp(-2.0 * a2 * kappa / A) / A - 4.0 * _exp(-2.0 * a2 * one_minus / B) / B
    den = 2.0 - 8.0 * _exp(-2.0 * a2 * (1.0 + 3.0 * kappa) / C) / C
    return _scalar(4.0 * num / (math.pi * den))


WIGNER_ORIGIN_FORMS = {"derived": wigner_origin, "legacy": wigner_origin_legacy}


def pure_cat_wigner_origin(alpha: float, gamma_t: float) -> float:
    """``W(0)`` of the damped odd cat, built dyadic by dyadic.

    Independent of :func:`wigner_origin`: each of the four dyadics of
    ``|Psi><Psi|`` is damped with :func:`damp_dyadic` and its parity taken as
    ``Tr[(-1)^n |x><y|] = <y|-x>``.
    """
    kappa = float(np.exp(-gamma_t))
    n2 = pure_scs_norm(alpha) ** 2
    total = 0.0j
    for s1, s2 in product((1, -1), repeat=2):
        coef, x, y = damp_dyadic(s1 * alpha, s2 * alpha, kappa)
        total += s1 * s2 * coef * coherent_overlap(complex(y), -complex(x))
    return 2.0 / math.pi * n2 * total.real


def wigner(p: MqsParams, gamma_t: float, eta):
    """Wigner function ``W(eta)`` of the damped state.

    Two Gaussian lobes ``2/(pi V') exp(-2|eta -+ alpha'|^2 / V')`` plus the
    interference fringe

        -(4/(pi B)) exp(-(2V|eta|^2 + 2 a^2 (1-k)) / B) cos(4 sqrt(k) a Im(eta) / B)

    all scaled by ``N``.  ``eta`` may be a :class:`PhasePoint` or complex array.
    """
    kappa, one_minus = _kappa_pair(gamma_t)
    kappa, one_minus = float(kappa), float(one_minus)
    eta = as_complex(eta)
    V = p.V
    ap = math.sqrt(kappa) * p.alpha
    vp = kappa * (V - 1.0) + 1.0
    B = V - kappa * (V - 1.0)
    r2 = np.abs(eta) ** 2
    lobes = 2.0 / (math.pi * vp) * (
        _exp(-2.0 * np.abs(eta - ap) ** 2 / vp) + _exp(-2.0 * np.abs(eta + ap) ** 2 / vp)
    )
    fringe = (
        4.0 / (math.pi * B)
        * _exp(-(2.0 * V * r2 + 2.0 * p.alpha**2 * one_minus) / B)
        * np.cos(4.0 * ap * np.imag(eta) / B)
    )
    return _scalar(mixed_norm(p) * (lobes - fringe))


def wigner_fringe_by_averaging(p: MqsParams, gamma_t: float, eta):
    """The fringe term of :func:`wigner` computed as a P-function average.

    ``-(4/pi) N exp(-2|eta|^2) Re E_P[exp(-2(1-k)|b|^2 + 2 sqrt(k)(conj(eta) b - eta conj(b)))]``
    """
    kappa, one_minus = _kappa_pair(gamma_t)
    eta = as_complex(eta)
    rk = math.sqrt(float(kappa))
    avg = thermal_average(p.spread, p.alpha, 2.0 * float(one_minus),
                          2.0 * rk * np.conj(eta), -2.0 * rk * eta)
    return _scalar(-4.0 / math.pi * mixed_norm(p) * np.exp(-2.0 * np.abs(eta) ** 2) * np.real(avg))


@dataclass(frozen=True)
class ScanResult:
    min_value: float
    argmin: PhasePoint
    step: float


def wigner_min_scan(p: MqsParams, gamma_t: float, step: float = 0.05,
                    transverse: float = 4.0) -> ScanResult:
    """Grid minimum of ``W`` over ``[-2a, 2a] x [-transverse, transverse]``.

    The lobe axis is the real axis.  The grid is symmetric and always
    contains the origin.
    """
    if not 0 < step <= 0.05:
        raise ValueError("scan step must lie in (0, 0.05]")
    nx = int(math.ceil(2.0 * p.alpha / step))
    ny = int(math.ceil(transverse / step))
    x = step * np.arange(-nx, nx + 1)
    y = step * np.arange(-ny, ny + 1)
    grid = x[:, None] + 1j * y[None, :]
    w = wigner(p, gamma_t, grid)
    i, j = np.unravel_index(np.argmin(w), w.shape)
    return ScanResult(float(w[i, j]), PhasePoint(float(x[i]), float(y[j])), step)


def _d_factor(p: MqsParams, x):
    s = p.V - 1.0
    den = 1.0 + s * x
    return _exp(-2.0 * p.alpha**2 * x / den) / den


def decay_mixture(p: MqsParams, gamma_t):
    """Mixture ``C(t)`` of fringe decays ``exp(-2|beta|^2 gamma_t)`` weighted
    by the pure-cat decomposition weight.

    ``C = [D(gt) - D(gt + 1)] / (1 - exp(-2a^2/V)/V)`` with
    ``D(x) = exp(-2 a^2 x / (1 + (V-1) x)) / (1 + (V-1) x)``.  At ``V = 1``
    this is exactly ``exp(-2 a^2 gamma_t)``.
    """
    _kappa_pair(gamma_t)
    gt = np.asarray(gamma_t, dtype=float)
    a2, V = p.alpha**2, p.V
    den = -np.expm1(-2.0 * a2 / V) if V == 1.0 else 1.0 - math.exp(-2.0 * a2 / V) / V
    return _scalar((_d_factor(p, gt) - _d_factor(p, gt + 1.0)) / den)


def single_decay(alpha: float, gamma_t):
    """Fringe decay ``exp(-2 a^2 gamma_t)`` of a single pure cat."""
    _kappa_pair(gamma_t)
    return _scalar(_exp(-2.0 * alpha**2 * np.asarray(gamma_t, dtype=float)))


def evolved_mean_photon(p: MqsParams, gamma_t):
    """``<a^dag a>`` at ``gamma_t``; damping scales it by ``kappa``."""
    from .states import mean_photon_mixed, mean_photon_pure

    kappa, _ = _kappa_pair(gamma_t)
    n0 = mean_photon_pure(p.alpha) if p.is_pure else mean_photon_mixed(p)
    return _scalar(kappa * n0)


def evolved_purity(p: MqsParams, gamma_t: float) -> float:
    """``Tr(rho(t)^2)`` as a sum of nested Gaussian averages.

    With ``rho(t) = N E_P[sum_{s1,s2} s1 s2 c_{s1 s2}(b) |s1 g><s2 g|]``,
    ``g = sqrt(k) b`` and ``c = exp(-2(1-k)|b|^2)`` off the diagonal, each of
    the 16 sign patterns of ``Tr(rho^2)`` is a Gaussian in two amplitudes:
    the inner average over the second amplitude leaves a Gaussian in the first.
    """
    kappa, one_minus = (float(x) for x in _kappa_pair(gamma_t))
    a, c = p.spread, p.alpha
    total = 0.0
    for s1, s2, s3, s4 in product((1, -1), repeat=4):
        b_inner = kappa + (2.0 * one_minus if s3 != s4 else 0.0)
        d_inner = 1.0 + a * b_inner
        sig = s1 * s2 * s3 * s4
        # inner average: u = s2 s3 k conj(b), v = s1 s4 k b
        b_outer = kappa + (2.0 * one_minus if s1 != s2 else 0.0) - a * kappa**2 * sig / d_inner
        u_outer = kappa * c * s1 * s4 / d_inner
        v_outer = kappa * c * s2 * s3 / d_inner
        outer = thermal_average(a, c, b_outer, u_outer, v_outer)
        inner_const = math.exp(-b_inner * c * c / d_inner) / d_inner
        total += sig * float(np.real(outer)) * inner_const
    n = mixed_norm(p)
    return n * n * total


def evolved_linear_entropy(p: MqsParams, gamma_t: float) -> float:
    return 1.0 - evolved_purity(p, gamma_t)


def crossover_time(p_pure: MqsParams, p_mixed: MqsParams, bracket=(1e-4, 1e-2),
                   tol: float = 1e-7, form: str = "derived") -> float:
    """Scaled time where the two ``W(0)`` curves cross, by bisection.

    Raises
    ------
    NoCrossoverError
        If ``W0_pure - W0_mixed`` has the same sign (or vanishes) at both ends.
    """
    w0 = WIGNER_ORIGIN_FORMS[form]
    lo, hi = map(float, bracket)
    if not 0 <= lo < hi:
        raise ValueError(f"invalid bracket {bracket}")

    def diff(t):
        return w0(p_pure, t) - w0(p_mixed, t)

    f_lo, f_hi = diff(lo), diff(hi)
    if not f_lo * f_hi < 0:
        raise NoCrossoverError(
            f"no crossover in [{lo:g}, {hi:g}]: differences {f_lo:.3e}, {f_hi:.3e}"
        )
    return bisect(diff, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)


def time_grid(tmin: float, tmax: float, count: int, spacing: str = "log") -> np.ndarray:
    """Strictly increasing grid of scaled times."""
    if count < 2:
        raise ValueError("time grid needs at least 2 points")
    if not (0 <= tmin < tmax and math.isfinite(tmax)):
        raise ValueError(f"need 0 <= tmin < tmax, got {tmin}, {tmax}")
    if spacing == "lin":
        return np.linspace(tmin, tmax, count)
    if spacing == "log":
        if tmin <= 0:
            raise ValueError("log spacing needs tmin > 0")
        return np.geomspace(tmin, tmax, count)
    raise ValueError(f"unknown spacing {spacing!r}")


@dataclass(frozen=True, eq=False)
class Curve:
    """Samples ``(gamma_t, value)`` of one quantity for one parameter set."""

    quantity: str
    params: MqsParams
    gamma_t: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        t = np.asarray(self.gamma_t, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError("gamma_t and values must be 1-D of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("gamma_t must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve values must be finite")
        object.__setattr__(self, "gamma_t", t)
        object.__setattr__(self, "values", v)


def w0_curve(p: MqsParams, grid, form: str = "derived") -> Curve:
    quantity = "W0_pure" if p.is_pure else "W0_mixed"
    values = WIGNER_ORIGIN_FORMS[form](p, grid)
    return Curve(quantity, p, grid, values, {"form": form})


def decay_mixture_curve(p: MqsParams, grid) -> Curve:
    return Curve("C_of_t", p, grid, decay_mixture(p, grid))


def single_decay_curve(p: MqsParams, grid) -> Curve:
    return Curve("single_decay", MqsParams(p.alpha), grid, single_decay(p.alpha, grid))


def first_time_above(p: MqsParams, level: float, bracket=(0.0, 10.0), tol: float = 1e-12) -> float:
    """First ``gamma_t`` where ``W0`` rises to ``level``.

    Bisection needs ``W0 < level`` at the lower end and ``W0 > level`` at the
    upper end; it returns a crossing, which is the first one only when ``W0``
    crosses ``level`` once in the bracket.
    """
    lo, hi = bracket
    f = lambda t: wigner_origin(p, t) - level  # noqa: E731
    if not f(lo) < 0 < f(hi):
        raise NoCrossoverError(f"W0 does not cross {level} in {bracket}")
    return bisect(f, lo, hi, xtol=tol, maxiter=400)
