"""Closed forms against the Fock-space oracle at small amplitudes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import decoherence as dc
from . import fock
from .states import MqsParams, linear_entropy, mean_photon_mixed, mean_photon_pure

ORACLE_POINTS = ((1.5, 1.0), (2.0, 3.0), (2.5, 5.0))
ORACLE_TIMES = (0.0, 0.05, 0.1, 0.3, 0.7)
TOL = 1e-8


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    tol: float = TOL

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tol


def oracle_checks(points=ORACLE_POINTS, times=ORACLE_TIMES):
    """Yield one :class:`Check` per (state, time, observable)."""
    for alpha, V in points:
        p = MqsParams(alpha, V)
        dim = fock.sized_dim(p)
        rho0 = fock.mixed_mqs_fock(p, dim)
        tag = f"alpha={alpha:g} V={V:g}"
        n0 = mean_photon_pure(alpha) if p.is_pure else mean_photon_mixed(p)
        yield Check(f"{tag} entropy t=0", abs(linear_entropy(p) - fock.fock_linear_entropy(rho0)))
        yield Check(f"{tag} photons t=0", abs(n0 - fock.fock_mean_photon(rho0)))
        for gt in times:
            damped = fock.amplitude_damping_channel(rho0, math.exp(-gt))
            assembled = fock.evolved_mqs_fock(p, gt, dim)
            at = f"{tag} gt={gt:g}"
            yield Check(f"{at} W(0)",
                        abs(dc.wigner_origin(p, gt) - fock.parity_wigner_origin(damped)))
            yield Check(f"{at} entropy",
                        abs(dc.evolved_linear_entropy(p, gt) - fock.fock_linear_entropy(damped)))
            yield Check(f"{at} photons",
                        abs(dc.evolved_mean_photon(p, gt) - fock.fock_mean_photon(damped)))
            yield Check(f"{at} matrix routes",
                        float(np.max(np.abs(assembled.elements - damped.elements))))


def channel_checks():
    p = MqsParams(2.0, 3.0)
    rho = fock.mixed_mqs_fock(p, cross_check=False)
    n0 = fock.fock_mean_photon(rho)
    for kappa in (0.9, 0.5, 0.1):
        out = fock.amplitude_damping_channel(rho, kappa)
        yield Check(f"photon decay kappa={kappa:g}", abs(fock.fock_mean_photon(out) - kappa * n0), 1e-10)
    twice = fock.amplitude_damping_channel(fock.amplitude_damping_channel(rho, 0.8), 0.6)
    once = fock.amplitude_damping_channel(rho, 0.48)
    yield Check("semigroup 0.8*0.6", float(np.max(np.abs(twice.elements - once.elements))), 1e-10)


def dyadic_checks():
    for alpha in (0.5, 1.0, 3.0, 10.0, 30.0):
        for gt in (0.0, 1e-4, 1e-3, 0.05, 0.7):
            p = MqsParams(alpha)
            yield Check(f"pure cat dyadics alpha={alpha:g} gt={gt:g}",
                        abs(dc.pure_cat_wigner_origin(alpha, gt) - dc.wigner_origin(p, gt)), 1e-12)


def run_all():
    checks = []
    checks.extend(dyadic_checks())
    checks.extend(channel_checks())
    checks.extend(oracle_checks())
    return checks
