"""Truncated number-basis oracle.

Builds the states explicitly as density matrices, damps them with the exact
Kraus map of zero-temperature amplitude damping, and measures parity,
purity and photon number by matrix traces.  Nothing here calls the closed
forms in :mod:`mixedcat.decoherence`; the two are compared in the tests.

Truncation is exact entrywise: every retained element ``rho[m, n]`` with
``m, n < dim`` is the element of the untruncated operator.  What is lost is
the population above ``dim``, reported as ``trace_deficit``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln
from scipy.stats import binom, poisson

from .gaussian import adaptive, thermal_nodes
from .states import (
    MqsParams,
    decomposition_weight,
    mixed_norm,
    pure_scs_norm,
    thermal_p_weight,
)


class TruncationError(ValueError):
    """The Fock cutoff loses more population than the declared tolerance."""


class RouteMismatchError(RuntimeError):
    """Two independent constructions of the same state disagree."""


@dataclass(frozen=True, eq=False)
class FockVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state vector has norm {norm!r}, expected 1")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> "FockDensityMatrix":
        return FockDensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    """Immutable truncated density matrix.

    The constructor checks the invariants: Hermitian to ``1e-12``, unit trace
    to ``1e-12`` and eigenvalues no lower than ``-1e-10``.  Use
    :meth:`from_unnormalized` to renormalize a truncated operator and record
    the population it lost.
    """

    elements: np.ndarray
    trace_deficit: float = 0.0

    def __post_init__(self):
        rho = np.array(self.elements, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density matrix must be square")
        herm = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
        if herm > 1e-12:
            raise ValueError(f"density matrix not Hermitian (deviation {herm:.2e})")
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace {tr!r} differs from 1")
        lowest = np.linalg.eigvalsh(rho)[0]
        if lowest < -1e-10:
            raise ValueError(f"density matrix not positive (eigenvalue {lowest:.2e})")
        rho.setflags(write=False)
        object.__setattr__(self, "elements", rho)

    @classmethod
    def from_unnormalized(cls, rho, tol: float = 1e-12) -> "FockDensityMatrix":
        rho = np.asarray(rho, dtype=complex)
        rho = 0.5 * (rho + rho.conj().T)
        deficit = 1.0 - np.trace(rho).real
        if deficit < -tol:
            raise ValueError(f"trace exceeds 1 by {-deficit:.3e}")
        if deficit > tol:
            raise TruncationError(
                f"dim={rho.shape[0]} loses population {deficit:.3e} > {tol:.1e}"
            )
        return cls(rho / np.trace(rho).real, trace_deficit=max(deficit, 0.0))

    @property
    def dim(self) -> int:
        return self.elements.shape[0]


def _monomials(beta, dim: int) -> np.ndarray:
    """``beta**n / sqrt(n!)`` for ``n < dim``, one row per entry of ``beta``."""
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    out = np.empty((beta.size, dim), dtype=complex)
    out[:, 0] = 1.0
    for n in range(1, dim):
        out[:, n] = out[:, n - 1] * beta / math.sqrt(n)
    return out


def default_dim(p: MqsParams) -> int:
    """Starting cutoff ``ceil(mu + 12 sqrt(mu) + 25)``, ``mu = alpha^2 + (V-1)/2``."""
    mu = p.alpha**2 + p.spread
    return int(math.ceil(mu + 12.0 * math.sqrt(mu) + 25.0))


def coherent_fock(alpha: complex, dim: int, tol: float = 1e-14) -> FockVector:
    """Coherent state ``exp(-|a|^2/2) a^n / sqrt(n!)``, amplitudes built in log space.

    Raises
    ------
    TruncationError
        If the Poisson tail above ``dim`` exceeds ``tol``.
    """
    alpha = complex(alpha)
    r2 = abs(alpha) ** 2
    tail = float(poisson.sf(dim - 1, r2)) if r2 > 0 else 0.0
    if tail > tol:
        raise TruncationError(f"dim={dim} leaves tail mass {tail:.3e} for |alpha|^2={r2:g}")
    amp = np.zeros(dim, dtype=complex)
    if r2 == 0:
        amp[0] = 1.0
        return FockVector(amp)
    n = np.arange(dim)
    logmag = -r2 / 2.0 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    amp = np.exp(logmag) * np.exp(1j * np.angle(alpha) * n)
    return FockVector(amp / np.linalg.norm(amp))


def cat_fock(alpha: float, dim: int) -> FockVector:
    """Normalized odd cat ``N_a (|a> - |-a>)``."""
    n = np.arange(dim)
    r2 = alpha * alpha
    logmag = -r2 / 2.0 + n * math.log(alpha) - 0.5 * gammaln(n + 1)
    amp = np.where(n % 2 == 1, 2.0 * np.exp(logmag), 0.0) * pure_scs_norm(alpha)
    tail = 1.0 - float(np.sum(amp**2))
    if tail > 1e-12:
        raise TruncationError(f"dim={dim} leaves tail mass {tail:.3e} for the cat")
    return FockVector(amp / np.linalg.norm(amp))


def displacement_matrix(alpha: complex, dim: int, cols: int | None = None,
                        tol: float = 1e-12) -> np.ndarray:
    """Elements ``<m|D(alpha)|n>`` for ``m < dim``, ``n < cols``.

    Uses the associated-Laguerre closed form with log-space prefactors;
    elements are exact (not those of a truncated exponential).

    Raises
    ------
    TruncationError
        If ``D(alpha)|0>`` has more than ``tol`` of its norm above ``dim``.
    """
    cols = dim if cols is None else cols
    alpha = complex(alpha)
    r2 = abs(alpha) ** 2
    if r2 == 0:
        return np.eye(dim, cols, dtype=complex)
    leak = float(poisson.sf(dim - 1, r2))
    if leak > tol:
        raise TruncationError(f"D({alpha}) leaks {leak:.3e} of the vacuum column above dim={dim}")
    m = np.arange(dim)[:, None]
    n = np.arange(cols)[None, :]
    lo, hi = np.minimum(m, n), np.maximum(m, n)
    k = hi - lo
    lag = eval_genlaguerre(lo, k, r2)
    logpref = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + k * math.log(abs(alpha)) - r2 / 2.0
    theta = np.angle(alpha)
    # m >= n: alpha^(m-n); m < n: (-conj(alpha))^(n-m)
    phase = np.where(m >= n, np.exp(1j * theta * k), np.exp(1j * (math.pi - theta) * k))
    return np.exp(logpref) * lag * phase


def thermal_coherent_fock(p: MqsParams, dim: int, center: complex | None = None,
                          tol: float = 1e-12) -> FockDensityMatrix:
    """Thermal-coherent lobe ``D(c) rho_thermal D(c)^dag`` with thermal mean ``(V-1)/2``.

    ``center`` defaults to ``+alpha``; pass ``-p.alpha`` (or any amplitude,
    including 0) for other lobes.
    """
    c = p.alpha if center is None else complex(center)
    nbar = p.spread
    if nbar == 0:
        return FockDensityMatrix.from_unnormalized(
            coherent_fock(c, dim, tol=tol).projector().elements, tol
        )
    q = nbar / (1.0 + nbar)
    ncols = int(math.ceil(math.log(1e-18) / math.log(q))) + 1
    weights = q ** np.arange(ncols) / (1.0 + nbar)
    d = displacement_matrix(c, dim, ncols, tol=max(tol, 1e-14))
    return FockDensityMatrix.from_unnormalized((d * weights) @ d.conj().T, tol)


def sized_dim(p: MqsParams, tol: float = 1e-12) -> int:
    """Smallest cutoff on the 5%-growth ladder from :func:`default_dim` whose
    thermal lobe loses at most ``tol``."""
    dim = default_dim(p)
    while True:
        try:
            thermal_coherent_fock(p, dim, tol=tol)
            return dim
        except TruncationError:
            dim = int(math.ceil(dim * 1.05))


def _p_integral(a: float, c: complex, b: float, dim: int, left_sign: int, right_sign: int,
                order: int) -> np.ndarray:
    """``E_P[exp(-b|beta|^2) phi(l beta) phi(r beta)^dag]`` with ``phi_n(x) = x^n/sqrt(n!)``.

    The coherent-state factor ``exp(-|beta|^2)`` of ``|l beta><r beta|`` is
    part of ``b``; the remaining integrand is polynomial, so ``order >= dim``
    is exact.
    """
    nodes, weights = thermal_nodes(a, c, b, order)
    left = _monomials(left_sign * nodes, dim)
    right = _monomials(right_sign * nodes, dim)
    return (left * weights[:, None]).T @ right.conj()


def _quadrature(evaluate, dim: int, quad_order: int | None):
    if quad_order is not None:
        return evaluate(quad_order)
    result, _ = adaptive(evaluate, start=dim, tol=1e-10)
    return result


def mixed_mqs_fock(p: MqsParams, dim: int | None = None, quad_order: int | None = None,
                   tol: float = 1e-12, cross_check: bool = True) -> FockDensityMatrix:
    """Mixed cat ``N (rho_th(+a) + rho_th(-a) - sigma)``.

    The lobes come from displaced thermal states; ``sigma = E_P|b><-b| + h.c.``
    is integrated by Gauss-Hermite quadrature (order doubled until stable
    unless ``quad_order`` is given).  With ``cross_check`` the matrix is rebuilt
    as the decomposition-weighted mixture of pure cats ``|Psi_b>`` and the two
    must agree entrywise to ``1e-8``.
    """
    dim = sized_dim(p, tol) if dim is None else dim
    if p.is_pure:
        return cat_fock(p.alpha, dim).projector()
    a, alpha, n = p.spread, p.alpha, mixed_norm(p)
    lobes = (thermal_coherent_fock(p, dim, tol=tol).elements
             + thermal_coherent_fock(p, dim, center=-alpha, tol=tol).elements)
    cross = _quadrature(lambda k: _p_integral(a, alpha, 1.0, dim, 1, -1, k), dim, quad_order)
    rho = n * (lobes - cross - cross.conj().T)
    if cross_check:
        alt = _quadrature(lambda k: _cat_mixture(p, dim, k), dim, quad_order)
        dev = float(np.max(np.abs(alt - rho)))
        if dev > 1e-8:
            raise RouteMismatchError(f"lobe/coherence and pure-cat mixture routes differ by {dev:.3e}")
    return FockDensityMatrix.from_unnormalized(rho, tol)


def _cat_mixture(p: MqsParams, dim: int, order: int) -> np.ndarray:
    """``integral d^2b w(b) |Psi_b><Psi_b|`` with ``w`` the decomposition weight."""
    nodes, weights = thermal_nodes(p.spread, p.alpha, 1.0, order)
    # nodes/weights integrate against P_th(b) exp(-|b|^2); convert to w(b) and
    # to normalized cats, whose coherent factors carry the exp(-|b|^2)
    ratio = decomposition_weight(p, nodes) / thermal_p_weight(p, nodes)
    norms = np.array([pure_scs_norm(abs(b)) for b in nodes]) ** 2
    psi = _monomials(nodes, dim) - _monomials(-nodes, dim)
    return (psi * (weights * ratio * norms)[:, None]).T @ psi.conj()


def evolved_mqs_fock(p: MqsParams, gamma_t: float, dim: int | None = None,
                     quad_order: int | None = None, tol: float = 1e-12) -> FockDensityMatrix:
    """Damped mixed cat assembled from its lobe parameters at ``gamma_t``.

    Lobes ``rho_th(V', +-a')`` and the coherence term with the extra factor
    ``exp(-2(1-k)|b'|^2/k)`` on the damped amplitude ``b'``, each integrated by
    quadrature.  This is the closed-form evolution written out in the number
    basis; compare with :func:`amplitude_damping_channel`.
    """
    kappa = math.exp(-gamma_t)
    one_minus = -math.expm1(-gamma_t)
    dim = sized_dim(p, tol) if dim is None else dim
    ap = math.sqrt(kappa) * p.alpha
    a = kappa * p.spread
    fringe_b = 2.0 * one_minus / kappa
    n = mixed_norm(p)

    def evaluate(order):
        plus = _p_integral(a, ap, 1.0, dim, 1, 1, order)
        minus = _p_integral(a, -ap, 1.0, dim, 1, 1, order)
        cross = _p_integral(a, ap, 1.0 + fringe_b, dim, 1, -1, order)
        return n * (plus + minus - cross - cross.conj().T)

    if p.is_pure:
        rho = evaluate(1)
    else:
        rho = _quadrature(evaluate, dim, quad_order)
    return FockDensityMatrix.from_unnormalized(rho, tol)


def kraus_rank(dim: int, kappa: float, deficit: float = 1e-14) -> int:
    """Number of Kraus operators needed so that every ``|n>``, ``n < dim``,
    loses at most ``deficit`` of its completeness."""
    if kappa == 1.0:
        return 1
    ks = np.arange(dim)
    tails = binom.sf(ks, dim - 1, 1.0 - kappa)
    below = np.nonzero(tails < deficit)[0]
    return int(below[0]) + 1 if below.size else dim


def _channel_elements(src: np.ndarray, kappa: float) -> np.ndarray:
    """Apply the damping map to any square array (not only states)."""
    dim = src.shape[0]
    out = np.zeros_like(src, dtype=complex)
    m = np.arange(dim)
    log_k, log_1k = math.log(kappa), math.log1p(-kappa)
    for k in range(kraus_rank(dim, kappa)):
        size = dim - k
        mm = m[:size]
        # coefficient of |m><m+k| in K_k
        logw = 0.5 * (gammaln(mm + k + 1) - gammaln(mm + 1) - gammaln(k + 1)
                      + mm * log_k + k * log_1k)
        w = np.exp(logw)
        out[:size, :size] += w[:, None] * w[None, :] * src[k:, k:]
    return out


def amplitude_damping_channel(rho: FockDensityMatrix, kappa: float) -> FockDensityMatrix:
    """Exact zero-temperature damping ``rho -> sum_k K_k rho K_k^dag``.

    ``K_k = sum_n sqrt(C(n, k)) kappa^((n-k)/2) (1-kappa)^(k/2) |n-k><n|``.
    Damping never raises the photon number, so the truncated map is exact on
    the retained block.
    """
    if not 0.0 < kappa <= 1.0:
        raise ValueError(f"kappa must lie in (0, 1], got {kappa}")
    if kappa == 1.0:
        return FockDensityMatrix(rho.elements.copy(), rho.trace_deficit)
    out = _channel_elements(rho.elements, kappa)
    return FockDensityMatrix.from_unnormalized(out, tol=max(1e-12, rho.trace_deficit + 1e-12))


def lindblad_rk4(rho: FockDensityMatrix, gamma_t: float, steps: int = 2000) -> FockDensityMatrix:
    """Integrate ``d rho/dt = a rho a^dag - (a^dag a rho + rho a^dag a)/2``
    (unit decay rate) with fixed-step RK4.  Secondary cross-check only."""
    dim = rho.dim
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    num = np.arange(dim, dtype=float)
    half = 0.5 * (num[:, None] + num[None, :])

    def rhs(r):
        return a @ r @ a.T - half * r

    r = np.array(rho.elements)
    h = gamma_t / steps
    for _ in range(steps):
        k1 = rhs(r)
        k2 = rhs(r + 0.5 * h * k1)
        k3 = rhs(r + 0.5 * h * k2)
        k4 = rhs(r + h * k3)
        r = r + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return FockDensityMatrix.from_unnormalized(r, tol=1e-10)


def parity_wigner_origin(rho: FockDensityMatrix) -> float:
    """``W(0) = (2/pi) sum_n (-1)^n rho_nn``."""
    diag = np.diag(rho.elements).real
    sign = np.where(np.arange(rho.dim) % 2 == 0, 1.0, -1.0)
    return 2.0 / math.pi * float(sign @ diag)


def fock_wigner(rho: FockDensityMatrix, eta: complex, margin: int | None = None) -> float:
    """``W(eta) = (2/pi) Tr[(-1)^n D(-eta) rho D(-eta)^dag]``.

    The displaced state is represented on ``dim + margin`` levels so that the
    shift does not push population out of the basis.
    """
    eta = complex(eta)
    if margin is None:
        margin = int(math.ceil(abs(eta) ** 2 + 12 * abs(eta) + 20))
    d = displacement_matrix(-eta, rho.dim + margin, rho.dim, tol=1.0)
    shifted = np.einsum("ij,jk,ik->i", d, rho.elements, d.conj(), optimize=True).real
    sign = np.where(np.arange(shifted.size) % 2 == 0, 1.0, -1.0)
    return 2.0 / math.pi * float(sign @ shifted)


def fock_linear_entropy(rho: FockDensityMatrix) -> float:
    """``1 - Tr(rho^2)``."""
    return 1.0 - float(np.sum(np.abs(rho.elements) ** 2))


def fock_mean_photon(rho: FockDensityMatrix) -> float:
    """``Tr(a^dag a rho)``."""
    return float(np.arange(rho.dim) @ np.diag(rho.elements).real)


def dump_matrix(rho: FockDensityMatrix, stream) -> None:
    """Write ``rho`` as text: a ``#`` header, then one row per line with
    ``re im`` pairs in scientific notation (17 significant digits)."""
    stream.write(f"# fock-density dim={rho.dim} trace_deficit={rho.trace_deficit:.16e}\n")
    for row in rho.elements:
        stream.write(" ".join(f"{z.real:.16e} {z.imag:.16e}" for z in row))
        stream.write("\n")


def load_matrix(stream) -> FockDensityMatrix:
    header = stream.readline()
    if not header.startswith("# fock-density"):
        raise ValueError("not a fock-density dump")
    fields = dict(kv.split("=") for kv in header.split()[2:])
    rows = [np.array(line.split(), dtype=float) for line in stream if line.strip()]
    flat = np.array(rows)
    rho = flat[:, 0::2] + 1j * flat[:, 1::2]
    if rho.shape != (int(fields["dim"]),) * 2:
        raise ValueError("dimension in header does not match the data")
    return FockDensityMatrix(rho, trace_deficit=float(fields["trace_deficit"]))
