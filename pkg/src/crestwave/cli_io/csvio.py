"""Deterministic CSV writers.

Floats are rendered with repr-faithful %.17g so identical runs produce
byte-identical files; column orders are fixed tuples, never dict order.
"""
from __future__ import annotations

import csv

__all__ = ["write_rows", "ENERGY_COLUMNS", "STABILITY_COLUMNS",
           "FIELDS_COLUMNS", "STUDY_COLUMNS", "DISPERSION_COLUMNS"]

ENERGY_COLUMNS = ("t", "frak_e", "curly_E", "Ea", "Eb", "E2", "E3",
                  "taylor_min", "chord_arc", "defect_zt", "defect_za")

STABILITY_COLUMNS = ("t", "F0", "F1", "F2", "F3", "F",
                     "hhalf_zt", "hhalf_za", "hhalf_ztt",
                     "l2_lalpha", "l2_dzt", "l2_A1", "l2_balpha",
                     "rhs0", "ratio")

FIELDS_COLUMNS = ("x", "y", "psi_re", "psi_im", "u_re", "u_im",
                  "pressure", "residual")

STUDY_COLUMNS = ("eps_coarse", "eps_fine",
                 "hhalf_zt", "hhalf_za", "hhalf_ztt",
                 "l2_lalpha", "l2_dzt", "l2_A1", "l2_balpha", "sup_F")

DISPERSION_COLUMNS = ("k", "omega_measured", "omega_exact", "rel_error")


def _fmt(v) -> str:
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def write_rows(path: str, columns: tuple, rows) -> None:
    """rows: iterable of dicts keyed by the column names."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])
