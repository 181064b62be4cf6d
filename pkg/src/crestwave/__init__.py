"""crestwave: pseudospectral simulator and diagnostics for 2D gravity
water waves in conformal (Riemann-mapping) variables.

The state of the free surface is carried by the pair of holomorphic
boundary traces (zt_bar, inv_za) = (conjugate surface velocity,
reciprocal conformal derivative) together with the periodic part of the
surface position. The package provides the closed evolution of that
pair, families of energy diagnostics, a two-solution stability
functional, half-plane (interior) field reconstruction, and mollified
initial-data convergence studies, all on a uniform periodic spectral
grid.
"""
from .spectral_core import (
    Field,
    SpectralMultiplier,
    derivative,
    evaluate_at,
    grid,
    hilbert,
    krasny_filter,
    norm_hhalf,
    norm_l2,
    norm_linf,
    norms,
    poisson_smooth,
    project,
    wavenumbers,
)

__version__ = "0.1.0"
