"""Momentum-space kernels for the pairing-chain protocol.

A transverse-field chain with anomalous pairing ``kappa`` and field ``h``
is prepared in its ground state, then evolved with the hopping chain whose
particle losses are postselected on the no-loss record.  Conditioning adds
the anti-Hermitian part ``-i*gamma/2 * N`` to the evolution generator, so
each momentum pair ``(k, -k)`` evolves independently in the span of
``{|0>, c_k^dag c_{-k}^dag |0>}`` and the whole state stays Gaussian.

Everything here is a closed-form function of a single momentum; assembly
into real-space correlation matrices lives in :mod:`noclick.gaussian`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModeError, QuadratureError
from .grids import NK_DEFAULT, bz_mean, momentum_grid, quadrature_residual

_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class PairingQuench:
    """Parameters of one quench realization.

    ``kappa`` and ``h`` fix the pre-quench ground state, ``gamma`` is the
    loss rate of the post-quench monitored evolution.  The post-quench
    Hamiltonian itself carries no free parameters (pure hopping at zero
    field).
    """

    kappa: float
    h: float
    gamma: float = 0.0


def generator(p: PairingQuench, k):
    """Evolution generator of the (k, -k) pair, as a stack of 2x2 blocks.

    Basis (|0>, c_k^dag c_{-k}^dag |0>) up to the constant trace shift;
    shape (..., 2, 2) for array ``k``.
    """
    k = np.asarray(k, dtype=float)
    lam = 2.0 * np.cos(k) - 2.0 * p.h + 0.5j * p.gamma
    theta = 2.0 * p.kappa * np.sin(k)
    out = np.zeros(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = lam
    out[..., 0, 1] = -1j * theta
    out[..., 1, 0] = 1j * theta
    out[..., 1, 1] = -lam
    return out


def _gap(p: PairingQuench, k):
    return np.sqrt((p.h - np.cos(k)) ** 2 + (p.kappa * np.sin(k)) ** 2)


def ground_coeffs(p: PairingQuench, k):
    """Pre-quench ground-state pair amplitudes (u0, v0) at momentum k.

    The state of the (k, -k) sector is ``u0 |0> + v0 c_k^dag c_-k^dag |0>``
    with |u0|^2 + |v0|^2 = 1, so under loss monitoring the occupied
    component v decays.  Raises :class:`DegenerateModeError` where the
    pre-quench spectrum is gapless (|h| <= 1 with kappa = 0, or the isolated
    points h = +-1, k = 0 or pi), since the ground state is not unique there.
    """
    k = np.asarray(k, dtype=float)
    delta = _gap(p, k)
    if np.any(delta < _DEGENERACY_TOL):
        raise DegenerateModeError(
            "gapless pre-quench mode at k = %r (kappa=%g, h=%g)"
            % (k[delta < _DEGENERACY_TOL], p.kappa, p.h)
        )
    # sign conventions: sgn(0) = +1 for both factors, so kappa < 0 flips
    # the phase of u0 and the assembled pair correlator stays equal to the
    # closed-form symbol, which is odd in kappa.
    sgn_k = np.where(k >= 0.0, 1.0, -1.0)
    sgn_kappa = 1.0 if p.kappa >= 0.0 else -1.0
    u0 = 1j * sgn_k * sgn_kappa * np.sqrt((p.h - np.cos(k) + delta) / (2.0 * delta))
    v0 = np.sqrt((np.cos(k) - p.h + delta) / (2.0 * delta))
    return u0, v0 + 0j


def evolved_coeffs(p: PairingQuench, k, t: float):
    """Pair amplitudes after no-loss evolution for time t, traceless gauge.

    The pair basis is decoupled under the post-quench generator, so the
    amplitudes just pick up complex exponentials.  The gauge drops a global
    scale (the sector no-loss probability), so the vacuum amplitude grows
    as exp(gamma*t/2) here; normalization happens in the symbol.
    """
    k = np.asarray(k, dtype=float)
    u0, v0 = ground_coeffs(p, k)
    phase = 2.0 * t * np.cos(k)
    u_t = np.exp(-1j * phase + 0.5 * p.gamma * t) * u0
    v_t = np.exp(1j * phase - 0.5 * p.gamma * t) * v0
    return u_t, v_t


def symbol_from_coeffs(u, v):
    """Normalized 2x2 correlation symbol from pair amplitudes.

    Entries are G = [[n, g], [g*, -n]] with n = (|u|^2 - |v|^2)/N and
    g = -2 u* v / N, N = |u|^2 + |v|^2.  Shape (..., 2, 2).
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    norm = np.abs(u) ** 2 + np.abs(v) ** 2
    n = (np.abs(u) ** 2 - np.abs(v) ** 2) / norm
    g = -2.0 * np.conj(u) * v / norm
    out = np.zeros(u.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = n
    out[..., 0, 1] = g
    out[..., 1, 0] = np.conj(g)
    out[..., 1, 1] = -n
    return out


def symbol(p: PairingQuench, k, t: float):
    """Closed-form correlation symbol G(k, t), shape (..., 2, 2).

    Algebraically identical to assembling :func:`evolved_coeffs` with
    :func:`symbol_from_coeffs`, but free of the exponentially growing
    intermediates, so it is the route used for correlation matrices.
    """
    k = np.asarray(k, dtype=float)
    delta = _gap(p, k)
    if np.any(delta < _DEGENERACY_TOL):
        raise DegenerateModeError(
            "gapless pre-quench mode at k = %r (kappa=%g, h=%g)"
            % (k[delta < _DEGENERACY_TOL], p.kappa, p.h)
        )
    ch = np.cosh(p.gamma * t)
    sh = np.sinh(p.gamma * t)
    den = ch * delta - sh * (np.cos(k) - p.h)
    n = (sh * delta - ch * (np.cos(k) - p.h)) / den
    g = 1j * p.kappa * np.exp(4j * t * np.cos(k)) * np.sin(k) / den
    out = np.zeros(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = n
    out[..., 0, 1] = g
    out[..., 1, 0] = np.conj(g)
    out[..., 1, 1] = -n
    return out


def pair_correlation_weight(p: PairingQuench, k, t: float):
    """|g(k,t)|^2, the weight of the anomalous (symmetry-breaking) correlator."""
    g = symbol(p, k, t)[..., 0, 1]
    return np.abs(g) ** 2


def cooper_density(p: PairingQuench, k, t: float):
    """Symmetry-breaking weight summed over the field-reflected partner.

    Returns |g(k,t; h)|^2 + |g(k,t; -h)|^2.  The two field signs share the
    post-quench spectrum, and the slow modes near k = 0 and k = pi trade
    places under h -> -h, so this combination is the right comparator for
    relaxation ordering.
    """
    mirrored = PairingQuench(kappa=p.kappa, h=-p.h, gamma=p.gamma)
    return pair_correlation_weight(p, k, t) + pair_correlation_weight(mirrored, k, t)


def ground_pair_coefficient(kappa: float, h: float, gamma: float = 0.0) -> float:
    """Brillouin-zone average of the squared ground-state pair correlator.

    Equals (1/2pi) * int dk |g(k, 0)|^2 in closed form.  The ``gamma``
    argument is accepted for signature stability but the pre-quench state
    does not depend on it; any value is ignored.

    Piecewise in |h|:  |kappa| / (1 + |kappa|) for |h| <= 1, and
    kappa^2/(1 - kappa^2) * (|h|/sqrt(h^2 + kappa^2 - 1) - 1) outside.
    Both branches agree at |h| = 1; the outer branch has a removable
    point at |kappa| = 1 that is resolved by quadrature.
    """
    del gamma
    ak = abs(kappa)
    ah = abs(h)
    if ak < _DEGENERACY_TOL:
        return 0.0
    if ah <= 1.0:
        return ak / (1.0 + ak)
    if abs(1.0 - ak * ak) < 1e-8:
        # 0/0 form of the closed branch; fall back to the defining integral
        k = momentum_grid()
        p = PairingQuench(kappa=kappa, h=h)
        return float(bz_mean(pair_correlation_weight(p, k, 0.0)))
    return kappa * kappa / (1.0 - kappa * kappa) * (
        ah / np.sqrt(h * h + kappa * kappa - 1.0) - 1.0
    )


def initial_asymmetry_prediction(p: PairingQuench, ell: int, n: int = 2) -> float:
    """Large-subsystem prediction for the t = 0 asymmetry of ``ell`` sites.

    0.5*log(ell) + 0.5*log(pi * s * n**(1/(n-1)) / 4) with s the ground
    pair coefficient.  Valid for s > 0 (kappa != 0).
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if n < 2:
        raise ValueError("need a Renyi index n >= 2")
    s = ground_pair_coefficient(p.kappa, p.h)
    if s <= 0.0:
        raise ValueError("prediction undefined at kappa = 0 (symmetric state)")
    return 0.5 * np.log(ell) + 0.5 * np.log(np.pi * s * n ** (1.0 / (n - 1.0)) / 4.0)


def _entropy_integrand(n_diag, order: int):
    x = np.abs(n_diag)
    lo = (1.0 - x) / 2.0
    hi = (1.0 + x) / 2.0
    if order == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = -hi * np.log(hi) - lo * np.log(lo)
        # 0*log(0) limits
        return np.where(x >= 1.0 - 1e-15, 0.0, np.nan_to_num(terms, nan=0.0))
    return np.log(hi**order + lo**order) / (1.0 - order)


def late_entropy_density(
    p: PairingQuench,
    t: float,
    n: int = 2,
    nk: int = NK_DEFAULT,
    residual_tol: float = 1e-8,
) -> float:
    """Renyi-n entropy per site of a large subsystem at time t.

    Quadrature over the symbol's diagonal; in the long-time limit the
    occupations empty out and the density decays as exp(-gamma*t) (the
    slow modes at k = 0, pi keep order-one weight in windows of width
    ~exp(-gamma*t), which sets the overall rate).  Fails with
    :class:`QuadratureError` if halving the grid moves the result by more
    than ``residual_tol``.
    """
    if n < 1:
        raise ValueError("Renyi index must be >= 1")

    def density(m):
        k = momentum_grid(m)
        n_diag = symbol(p, k, t)[..., 0, 0].real
        return float(bz_mean(_entropy_integrand(n_diag, n)))

    full = density(nk)
    resid = quadrature_residual(full, density(nk // 2))
    if resid > residual_tol:
        raise QuadratureError(
            "entropy density quadrature residual %.3e exceeds %.3e at nk=%d"
            % (resid, residual_tol, nk)
        )
    return full


def ground_energy_density(p: PairingQuench, nk: int = NK_DEFAULT) -> float:
    """Pre-quench ground energy per site (thermodynamic limit).

    Uses the site convention with +2h * n_j field term (zero energy for
    the empty chain at h = 0), matching :mod:`noclick.ed`.
    """
    k = momentum_grid(nk)
    lam = 2.0 * np.cos(k) - 2.0 * p.h
    theta = 2.0 * p.kappa * np.sin(k)
    return p.h + float(bz_mean(-np.sqrt(lam**2 + theta**2))) / 2.0


def finite_ground_energy(p: PairingQuench, length: int) -> float:
    """Pre-quench ground energy of a closed chain of ``length`` sites.

    h*length plus the sum over positive antiperiodic momenta of the lower
    generator eigenvalue; exact for even ``length``, same site convention
    as :mod:`noclick.ed`.
    """
    from .grids import antiperiodic_momenta

    k = antiperiodic_momenta(length)
    pos = k[k > 0]
    lam = 2.0 * np.cos(pos) - 2.0 * p.h
    theta = 2.0 * p.kappa * np.sin(pos)
    return p.h * length + float(np.sum(-np.sqrt(lam**2 + theta**2)))


@dataclass(frozen=True)
class RelaxationOrder:
    """Outcome of the slow-mode comparison between two quenches.

    ``verdict`` is "first" if the first argument is predicted to relax
    faster (smaller slow-mode weight), "second" for the reverse, "mixed"
    when the reference times disagree, "equal" when neither side wins
    beyond the tolerance.  ``references`` maps each comparison time to
    the pair of window averages; ``weight_first`` and ``weight_second``
    repeat the latest reference.
    """

    verdict: str
    weight_first: float
    weight_second: float
    window: float
    references: dict


# gamma*t of the two default comparison points, and a grid fine enough
# to resolve the surviving window structure of width ~exp(-7)
_LATE_PHASES = (5.0, 7.0)
_LATE_NK = 1 << 18


def relaxation_order(
    p1: PairingQuench,
    p2: PairingQuench,
    t: float | None = None,
    window: float = 0.1 * np.pi,
    nk: int | None = None,
    rtol: float = 1e-6,
) -> RelaxationOrder:
    """Predict which of two quenches restores the symmetry faster.

    Compares the Cooper density averaged over the slow-mode window of
    half-width ``window`` around k = 0.  :func:`cooper_density` folds
    the reflected-field partner into that window, so it carries all of
    the long-lived weight; the weight sitting near k = pi itself
    empties at the fast uniform rate under loss and must not vote.
    The smaller average predicts the faster restoration, i.e. the
    lower curve after any crossing.

    With ``t=None`` and a positive matched loss rate the weights are
    read off at the two reference times gamma*t = 5 and 7, late enough
    for the long-lived window weight to dominate; if the two orderings
    disagree the verdict is "mixed".  Without loss the correlator
    magnitude is stationary and a single comparison at t = 0 is made.
    An explicit ``t`` forces one comparison at that time; for small
    gamma*t the ordering can differ from the late-time one because
    short-lived weight still dominates the window.
    """
    if not (0.0 < window <= np.pi / 2):
        raise ValueError("window must lie in (0, pi/2]")
    if p1.gamma != p2.gamma:
        raise ValueError("relaxation ordering needs matched loss rates")
    if t is None:
        late = p1.gamma > 0
        times = [phase / p1.gamma for phase in _LATE_PHASES] if late else [0.0]
    else:
        late = False
        times = [float(t)]
    if nk is None:
        nk = _LATE_NK if late else NK_DEFAULT
    k = momentum_grid(nk)
    kw = k[np.abs(k) <= window]
    references = {}
    votes = []
    for ref in times:
        w1 = float(np.mean(cooper_density(p1, kw, ref)))
        w2 = float(np.mean(cooper_density(p2, kw, ref)))
        references["t=%g" % ref] = (w1, w2)
        scale = max(w1, w2, 1e-300)
        if abs(w1 - w2) <= rtol * scale:
            votes.append("equal")
        else:
            votes.append("first" if w1 < w2 else "second")
    effective = [v for v in votes if v != "equal"]
    if not effective:
        verdict = "equal"
    elif all(v == effective[0] for v in effective):
        verdict = effective[0]
    else:
        verdict = "mixed"
    return RelaxationOrder(
        verdict=verdict,
        weight_first=w1,
        weight_second=w2,
        window=window,
        references=references,
    )
