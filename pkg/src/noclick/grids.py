"""Momentum grids and quadrature helpers shared by every k-integral.

All Brillouin-zone integrals in this package run on the same uniform,
half-step-shifted grid, so that k = 0 and k = ±π (where mode kernels can
become singular) are never sampled exactly.  The shifted uniform rule is
the periodic trapezoidal rule, which is spectrally accurate for smooth
symbols.
"""

from __future__ import annotations

import numpy as np

#: default number of quadrature nodes for thermodynamic-limit k-integrals
NK_DEFAULT = 4096


def momentum_grid(nk: int = NK_DEFAULT) -> np.ndarray:
    """Uniform midpoint grid on (-pi, pi), avoiding 0 and ±pi exactly.

    Nodes sit at -pi + (m + 1/2) * 2*pi/nk, m = 0..nk-1, each with equal
    weight 2*pi/nk.  The grid with nk/2 nodes is not a subset of this one;
    residual estimates therefore compare independent grids.
    """
    if nk < 2:
        raise ValueError(f"need at least 2 quadrature nodes, got {nk}")
    step = 2.0 * np.pi / nk
    return -np.pi + (np.arange(nk) + 0.5) * step


def bz_mean(values: np.ndarray, axis: int = 0) -> np.ndarray | complex | float:
    """Mean over equally weighted momentum nodes, i.e. (1/2pi) * integral dk.

    numpy's pairwise summation makes the reduction deterministic for a
    fixed node ordering, which the byte-stable output contract relies on.
    """
    return np.mean(values, axis=axis)


def antiperiodic_momenta(n_modes: int) -> np.ndarray:
    """Momenta k = ±(2n-1)·pi/n_modes, n = 1..n_modes/2, sorted ascending.

    These are the allowed momenta of a chain of ``n_modes`` fermionic
    sites (or cells) with antiperiodic boundary conditions.  ``n_modes``
    must be even so that momenta come in ±k pairs with no self-paired
    k = 0 or k = pi mode.
    """
    if n_modes % 2 != 0 or n_modes < 2:
        raise ValueError(f"antiperiodic momentum set needs even size >= 2, got {n_modes}")
    n = np.arange(1, n_modes // 2 + 1)
    pos = (2 * n - 1) * np.pi / n_modes
    return np.sort(np.concatenate([-pos, pos]))


def quadrature_residual(values_full: float, values_half: float) -> float:
    """Absolute difference between a full-grid and half-grid estimate."""
    return abs(values_full - values_half)
