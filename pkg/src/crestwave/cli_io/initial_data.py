"""Initial-state generators.

Four families: the flat rest state, a single right-moving linear
eigenmode, random holomorphic-sector data with power-law coefficient
decay, and the near-crest family whose reciprocal conformal derivative
comes within 1 - rho of vanishing at the origin. A fifth kind loads a
checkpoint file. All outputs satisfy the state invariants exactly.
"""
from __future__ import annotations

import numpy as np

from ..spectral_core import Field, grid
from ..state_model import WaterWaveState
from .checkpoint import read_checkpoint

__all__ = ["BadSpec", "generate_initial", "rest_state", "linear_mode",
           "random_analytic", "near_crest"]


class BadSpec(ValueError):
    pass


def rest_state(n: int) -> WaterWaveState:
    return WaterWaveState(Field.zeros(n), Field.constant(n, 1.0),
                          Field.zeros(n), 0.0)


def linear_mode(n: int, k: int, amplitude: float) -> WaterWaveState:
    """Right-moving eigenmode of the linearized system.

    zt_bar = a exp(-ik alpha); the reciprocal derivative follows from
    the acceleration closure at linear order and the position trace
    from integrating the slope.
    """
    if k < 1 or k >= n // 2:
        raise BadSpec(f"mode k={k} outside [1, n/2) for n={n}")
    if amplitude < 0:
        raise BadSpec("amplitude must be nonnegative")
    al = grid(n)
    e = np.exp(-1j * k * al)
    zt_bar = Field(amplitude * e)
    inv_za = Field(1.0 - np.sqrt(k) * amplitude * e)
    z = Field((1j * amplitude / np.sqrt(k)) * e)
    return WaterWaveState(zt_bar, inv_za, z, 0.0)


def random_analytic(n: int, seed: int, modes: int, decay: float,
                    amplitude: float = 0.05) -> WaterWaveState:
    """Random holomorphic-sector data with |c_k| ~ amplitude k^-decay."""
    if modes < 1 or modes >= n // 2:
        raise BadSpec(f"modes={modes} outside [1, n/2) for n={n}")
    if decay <= 0.5:
        raise BadSpec("decay must exceed 0.5")
    rng = np.random.default_rng(seed)
    c = np.zeros(n, dtype=complex)
    d = np.zeros(n, dtype=complex)
    zc = np.zeros(n, dtype=complex)
    for k in range(1, modes + 1):
        g = rng.standard_normal(4)
        c[-k % n] = amplitude * (g[0] + 1j * g[1]) / k ** decay
        d[-k % n] = 0.6 * amplitude * (g[2] + 1j * g[3]) / k ** decay
        zc[-k % n] = c[-k % n] / (1j * np.sqrt(k))
    return WaterWaveState(Field.from_coeffs(c), Field.from_coeffs(d) + 1.0,
                          Field.from_coeffs(zc), 0.0)


def near_crest(n: int, rho: float) -> WaterWaveState:
    """Surface at rest whose conformal derivative nearly degenerates.

    inv_za = 1 - rho exp(-i alpha): min |inv_za| = 1 - rho at alpha = 0.
    The position trace integrates the geometric series of the slope,
    truncated at the representable band.
    """
    if not 0.0 < rho < 1.0:
        raise BadSpec(f"rho={rho} outside (0, 1)")
    al = grid(n)
    inv_za = Field(1.0 - rho * np.exp(-1j * al))
    zc = np.zeros(n, dtype=complex)
    for m in range(1, n // 2):
        zc[-m % n] = 1j * rho ** m / m
    return WaterWaveState(Field.zeros(n), inv_za, Field.from_coeffs(zc), 0.0)


def generate_initial(spec: dict, n: int, seed_override: int | None = None) -> WaterWaveState:
    """Dispatch on spec["kind"]; raises BadSpec on anything malformed."""
    kind = spec.get("kind")
    try:
        if kind == "rest":
            return rest_state(n)
        if kind == "linear_mode":
            return linear_mode(n, int(spec["k"]), float(spec["amplitude"]))
        if kind == "random_analytic":
            seed = seed_override if seed_override is not None else int(spec.get("seed", 0))
            return random_analytic(n, seed, int(spec.get("modes", 8)),
                                   float(spec.get("decay", 2.0)),
                                   float(spec.get("amplitude", 0.05)))
        if kind == "near_crest":
            return near_crest(n, float(spec["rho"]))
        if kind == "checkpoint":
            return read_checkpoint(str(spec["path"]))
    except BadSpec:
        raise
    except (KeyError, TypeError, ValueError, OSError) as exc:
        raise BadSpec(f"malformed initial spec {spec!r}: {exc}") from exc
    raise BadSpec(f"unknown initial kind {kind!r}")
