"""Shared helpers for the suite: random field factories and the two
registries behind the end-to-end gate summary."""
from __future__ import annotations

import numpy as np

from crestwave.spectral_core import Field

# One "[PASS]/[FAIL]" line per gate; printed by the conftest summary hook.
GATE_LINES: list[str] = []

# (label, min over grid and snapshots of A1 - 1) for every trajectory
# the suite runs through the solver.
TAYLOR_RUNS: list[tuple[str, float]] = []


def gate(num: int, label: str, ok: bool, detail: str) -> None:
    GATE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {num:02d} {label}: {detail}")
    assert ok, f"{label}: {detail}"


def record_taylor(label: str, traj) -> float:
    from crestwave.energy_diag import taylor_check
    worst = min(taylor_check(s) for s in traj.states)
    TAYLOR_RUNS.append((label, worst))
    return worst


def rand_sector(n: int, band: int, sector: str, rng) -> Field:
    """Band-limited random field supported on a single wavenumber sector,
    amplitudes ~ k^{-1/2} so the H^{1/2} content is spread evenly."""
    c = np.zeros(n, dtype=complex)
    ks = np.arange(1, band + 1)
    amp = (rng.standard_normal(band) + 1j * rng.standard_normal(band)) / np.sqrt(ks)
    if sector == "holo":
        c[-ks % n] = amp
    elif sector == "antiholo":
        c[ks] = amp
    else:
        raise ValueError("sector must be 'holo' or 'antiholo'")
    return Field.from_coeffs(c)


def rand_mixed(n: int, band: int, rng, mean: complex = 0.0) -> Field:
    f = rand_sector(n, band, "holo", rng) + rand_sector(n, band, "antiholo", rng)
    if mean:
        f = f + Field.constant(n, mean)
    return f
