"""Static properties of pure and thermally mixed cat states.

A mixed cat is built from two thermal-coherent lobes centred at ``+alpha``
and ``-alpha`` plus the coherence term that makes it a superposition rather
than a classical mixture.  Each lobe is a coherent state smeared by Gaussian
noise of variance ``V``; ``V = 1`` recovers the odd cat
``|alpha> - |-alpha>``.

Every quantity here is closed form: moments of the state reduce to Gaussian
integrals over the Glauber P-function of the lobes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DegenerateStateError(ValueError):
    """A P-function density was requested at ``V = 1``, where it is a point mass."""


@dataclass(frozen=True)
class MqsParams:
    """Amplitude ``alpha`` and noise variance ``V`` of a (mixed) cat state."""

    alpha: float
    V: float = 1.0

    def __post_init__(self):
        alpha, V = float(self.alpha), float(self.V)
        if not (math.isfinite(alpha) and math.isfinite(V)):
            raise ValueError(f"parameters must be finite, got alpha={alpha}, V={V}")
        if alpha <= 0:
            raise ValueError(f"alpha must be positive (|a> - |-a> vanishes at a=0), got {alpha}")
        if V < 1:
            raise ValueError(f"noise variance V must be >= 1, got {V}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "V", V)

    @property
    def is_pure(self) -> bool:
        return self.V == 1.0

    @property
    def spread(self) -> float:
        """Mean of ``|beta - alpha|**2`` under the lobe P-function, ``(V - 1)/2``."""
        return (self.V - 1.0) / 2.0

    @classmethod
    def parse(cls, text: str) -> "MqsParams":
        """Parse ``"alpha"`` or ``"alpha:V"``."""
        parts = text.split(":")
        if len(parts) > 2:
            raise ValueError(f"expected 'alpha' or 'alpha:V', got {text!r}")
        return cls(*(float(x) for x in parts))


@dataclass(frozen=True)
class PhasePoint:
    """Complex phase-space coordinate ``re + i*im``."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("phase-space coordinates must be finite")

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def from_complex(cls, z: complex) -> "PhasePoint":
        z = complex(z)
        return cls(z.real, z.imag)


def as_complex(beta):
    """Coerce a :class:`PhasePoint`, scalar, or array to complex (array) form."""
    if isinstance(beta, PhasePoint):
        return complex(beta)
    out = np.asarray(beta, dtype=complex)
    return out[()] if out.ndim == 0 else out


def _require_mixed(p: MqsParams) -> None:
    if p.is_pure:
        raise DegenerateStateError(
            "P-function at V=1 is a delta at alpha; use the pure coherent-state path"
        )


def pure_scs_norm(alpha: float) -> float:
    """Normalization ``N_a`` of ``N_a (|a> - |-a>)``.

    Raises
    ------
    ValueError
        If ``alpha <= 0``; the superposition is the zero vector at ``alpha = 0``.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"cat state undefined for alpha={alpha}")
    return 1.0 / math.sqrt(-2.0 * math.expm1(-2.0 * alpha * alpha))


def thermal_p_weight(p: MqsParams, beta):
    """P-function of the thermal-coherent lobe centred at ``+alpha``.

    Gaussian over the complex plane with peak ``2/(pi (V-1))`` at ``beta = alpha``.
    Accepts a :class:`PhasePoint` or (arrays of) complex numbers.
    """
    _require_mixed(p)
    beta = as_complex(beta)
    s = p.V - 1.0
    return 2.0 / (math.pi * s) * np.exp(-2.0 * np.abs(beta - p.alpha) ** 2 / s)


def mixed_norm(p: MqsParams) -> float:
    """Prefactor ``N`` making ``N (rho_th(+a) + rho_th(-a) - sigma)`` unit trace."""
    if p.is_pure:
        return pure_scs_norm(p.alpha) ** 2
    return 1.0 / (2.0 - 2.0 * math.exp(-2.0 * p.alpha**2 / p.V) / p.V)


def purity(p: MqsParams) -> float:
    """``Tr(rho**2)`` of the mixed cat."""
    a2, V = p.alpha**2, p.V
    n = mixed_norm(p)
    lobes = (1.0 + math.exp(-4.0 * a2 / V)) / V
    cross = 4.0 * math.exp(-4.0 * a2 * V / (1.0 + V * V)) / (1.0 + V * V)
    return 4.0 * n * n * (lobes - cross)


def linear_entropy(p: MqsParams) -> float:
    """Linear entropy ``1 - Tr(rho**2)``; zero for the pure cat."""
    return 1.0 - purity(p)


def mean_photon_pure(alpha: float) -> float:
    """``<a^dag a>`` of the odd cat, ``alpha**2 coth(alpha**2)``."""
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"cat state undefined for alpha={alpha}")
    x = alpha * alpha
    return x / math.tanh(x)


def mean_photon_mixed(p: MqsParams) -> float:
    """``<a^dag a>`` of the mixed cat.

    Two copies of the lobe moment ``alpha**2 + (V-1)/2`` plus the coherence
    correction ``E_P[|beta|^2 exp(-2|beta|^2)]``, which is exponentially small
    once ``alpha**2 >> V``.
    """
    a2, V = p.alpha**2, p.V
    lobe = a2 + p.spread
    coherence = math.exp(-2.0 * a2 / V) / V * (a2 / V**2 + p.spread / V)
    return 2.0 * mixed_norm(p) * (lobe + coherence)


def decomposition_weight(p: MqsParams, beta):
    """Weight of the pure cat ``|Psi_beta>`` when the mixed cat is written as
    a classical mixture of pure cats.

    Normalized over the complex plane and vanishing at ``beta = 0``.
    """
    _require_mixed(p)
    beta = as_complex(beta)
    return (
        thermal_p_weight(p, beta)
        * -np.expm1(-2.0 * np.abs(beta) ** 2)
        * 2.0
        * mixed_norm(p)
    )

