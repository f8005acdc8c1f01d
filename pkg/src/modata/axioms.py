"""Modularity axiom checks with machine-readable diagnostics.

``validate`` runs, in order:

  a. s_unitary          S S* = 1
  b. s_symmetric        S = S^t
  c. t_unimodular       |T_i| = 1
  d. charge_conjugation S^2 is a permutation C, C^2 = 1, C(0) = 0
  e. st_cubed           (S T)^3 = C, entrywise and with no global-phase slack
  f. verlinde / vacuum  N^k_{i,j} integral >= 0 and N^0_{i,j} = delta_{j, ibar}
  g. dims_row           d_i >= 1 and S_{0,i} real > 0
  h. conjugate_symmetry w_ibar = w_i and d_ibar = d_i

All checks run even after a failure so one report carries the complete
violation profile; each check records its maximum deviation in
``report.measurements`` whether it passed or not.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

import numpy as np

from .modular_data import ModularData
from .numerics import DEFAULT_POLICY, TolerancePolicy

__all__ = ["Diagnostic", "AxiomReport", "validate", "detect_convention"]


@dataclass(frozen=True)
class Diagnostic:
    check_id: str
    severity: str  # "error" | "warning"
    indices: tuple[tuple[int, ...], ...]
    measured: float
    message: str

    def __post_init__(self):
        if self.severity not in ("error", "warning"):
            raise ValueError(f"bad severity {self.severity!r}")
        if self.measured < 0:
            raise ValueError("measured deviation must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "severity": self.severity,
            "indices": [list(t) for t in self.indices],
            "measured": self.measured,
            "message": self.message,
        }


@dataclass(frozen=True)
class AxiomReport:
    verdict: str  # "pass" | "fail"
    diagnostics: tuple[Diagnostic, ...]
    convention_note: str | None = None
    measurements: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def max_deviation(self) -> float:
        return max(self.measurements.values(), default=0.0)

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "diagnostics": [d.to_json_dict() for d in self.diagnostics],
            "convention_note": self.convention_note,
            "measurements": self.measurements,
        }

    def dump(self, target: str | Path | IO[str]) -> None:
        text = json.dumps(self.to_json_dict(), indent=2) + "\n"
        if hasattr(target, "write"):
            target.write(text)
        else:
            Path(target).write_text(text, encoding="utf-8")


def make_report(diagnostics: list[Diagnostic], convention_note: str | None = None,
                measurements: dict[str, float] | None = None) -> AxiomReport:
    verdict = "fail" if any(d.severity == "error" for d in diagnostics) else "pass"
    return AxiomReport(
        verdict=verdict,
        diagnostics=tuple(diagnostics),
        convention_note=convention_note,
        measurements=dict(measurements or {}),
    )


def _extract_conjugation(md: ModularData, pol: TolerancePolicy):
    """Best-effort permutation from S^2; (perm or None, max deviation)."""
    C = md.S @ md.S
    n = md.rank
    perm = np.array([int(np.argmax(np.abs(C[i]))) for i in range(n)])
    unit = np.zeros_like(C)
    unit[np.arange(n), perm] = 1.0
    dev = float(np.max(np.abs(C - unit)))
    ok = dev <= pol.eq_tol and perm[0] == 0 and np.array_equal(perm[perm], np.arange(n))
    return (perm if ok else None), dev, perm


def validate(md: ModularData, pol: TolerancePolicy = DEFAULT_POLICY) -> AxiomReport:
    """Run the full axiom battery on md; never raises on bad math."""
    S, T, n = md.S, md.T, md.rank
    diags: list[Diagnostic] = []
    meas: dict[str, float] = {}

    def fail(check_id, indices, dev, message):
        diags.append(Diagnostic(check_id, "error", tuple(indices), float(dev), message))

    # a. unitarity
    dev_u = np.abs(S @ S.conj().T - np.eye(n))
    meas["s_unitary"] = float(np.max(dev_u))
    if meas["s_unitary"] > pol.eq_tol:
        i, j = np.unravel_index(int(np.argmax(dev_u)), dev_u.shape)
        fail("s_unitary", [(int(i), int(j))], meas["s_unitary"],
             f"S S* deviates from identity by {meas['s_unitary']:.3e}")

    # b. symmetry
    dev_s = np.abs(S - S.T)
    meas["s_symmetric"] = float(np.max(dev_s))
    if meas["s_symmetric"] > pol.eq_tol:
        i, j = np.unravel_index(int(np.argmax(dev_s)), dev_s.shape)
        fail("s_symmetric", [(int(i), int(j))], meas["s_symmetric"],
             f"S is not symmetric: entry ({i},{j})")

    # c. T unimodular
    dev_t = np.abs(np.abs(T) - 1.0)
    meas["t_unimodular"] = float(np.max(dev_t))
    if meas["t_unimodular"] > pol.eq_tol:
        i = int(np.argmax(dev_t))
        fail("t_unimodular", [(i,)], meas["t_unimodular"],
             f"|T_{i}| = {abs(T[i]):.12g} is not 1")

    # d. S^2 is a conjugation
    conj, dev_c, raw_perm = _extract_conjugation(md, pol)
    meas["charge_conjugation"] = dev_c
    if conj is None:
        fail("charge_conjugation", [tuple(int(x) for x in raw_perm)], dev_c,
             "S^2 is not a vacuum-fixing involutive permutation")

    # e. (S T)^3 = C, compared against S^2 itself so it stays meaningful
    #    even when (d) failed
    ST = S * T[None, :]
    M = ST @ ST @ ST
    dev_e = np.abs(M - S @ S)
    meas["st_cubed"] = float(np.max(dev_e))
    if meas["st_cubed"] > pol.eq_tol:
        i, j = np.unravel_index(int(np.argmax(dev_e)), dev_e.shape)
        fail("st_cubed", [(int(i), int(j))], meas["st_cubed"],
             f"(S T)^3 differs from S^2 by {meas['st_cubed']:.3e} at ({i},{j})")

    # f. Verlinde integrality + vacuum fusion row
    if np.min(np.abs(S[0, :])) > pol.eq_tol:
        raw = np.einsum("ir,jr,kr->ijk", S, S, np.conj(S) / S[0, :][None, :])
        rounded = np.rint(raw.real).astype(int)
        dev_v = np.abs(raw - rounded)
        neg = rounded < 0
        meas["verlinde_integrality"] = float(np.max(dev_v))
        if meas["verlinde_integrality"] > pol.int_tol or np.any(neg):
            bad = np.argwhere((dev_v > pol.int_tol) | neg)
            fail("verlinde_integrality",
                 [tuple(int(x) for x in t) for t in bad[:8]],
                 meas["verlinde_integrality"],
                 f"{len(bad)} fusion entries fail integrality/nonnegativity")
        if conj is not None:
            expected = np.zeros((n, n), dtype=int)
            expected[np.arange(n), conj] = 1
            dev_n0 = np.abs(raw[:, :, 0] - expected)
            meas["vacuum_fusion"] = float(np.max(dev_n0))
            if meas["vacuum_fusion"] > pol.int_tol:
                bad = np.argwhere(dev_n0 > pol.int_tol)
                fail("vacuum_fusion", [tuple(int(x) for x in t) for t in bad[:8]],
                     meas["vacuum_fusion"],
                     "N^0_{i,j} != delta_{j, ibar}")
    else:
        meas["verlinde_integrality"] = float("inf")
        fail("verlinde_integrality", [], 1.0, "vanishing S_{0,r}: Verlinde sum undefined")

    # g. first row positive, dims >= 1
    row0 = S[0, :]
    dev_imag = float(np.max(np.abs(row0.imag)))
    shortfall = float(np.max(np.maximum(0.0, -row0.real)))
    meas["dims_row"] = max(dev_imag, shortfall)
    if dev_imag > pol.eq_tol or np.any(row0.real <= 0):
        bad = [(int(i),) for i in np.argwhere(
            (np.abs(row0.imag) > pol.eq_tol) | (row0.real <= 0)).ravel()]
        fail("dims_row", bad, max(meas["dims_row"], pol.eq_tol),
             "S_{0,i} must be real and > 0")
    else:
        d = (row0 / row0[0]).real
        short = 1.0 - float(np.min(d))
        meas["dims_row"] = max(meas["dims_row"], max(0.0, short))
        if np.any(d < 1.0 - pol.int_tol):
            bad = [(int(i),) for i in np.argwhere(d < 1.0 - pol.int_tol).ravel()]
            fail("dims_row", bad, meas["dims_row"], "quantum dimension below 1")

    # h. conjugate symmetry of twists and dims
    if conj is not None:
        w = T / T[0]
        dev_w = float(np.max(np.abs(w[conj] - w)))
        d_row = np.abs(S[0, :])
        dev_d = float(np.max(np.abs(d_row[conj] - d_row)))
        meas["conjugate_symmetry"] = max(dev_w, dev_d)
        if meas["conjugate_symmetry"] > pol.eq_tol:
            bad = [(int(i),) for i in range(n)
                   if abs(w[conj[i]] - w[i]) > pol.eq_tol
                   or abs(d_row[conj[i]] - d_row[i]) > pol.eq_tol]
            fail("conjugate_symmetry", bad, meas["conjugate_symmetry"],
                 "twists/dims differ between conjugate sectors")

    note = detect_convention(md, pol) if meas["st_cubed"] > pol.eq_tol else None
    return make_report(diags, convention_note=note, measurements=meas)


def detect_convention(md: ModularData, pol: TolerancePolicy = DEFAULT_POLICY) -> str | None:
    """Hint when data satisfies (S T)^3 = 1 instead of (S T)^3 = S^2.

    The two presentations differ by complex-conjugating S.  The data is
    never mutated; the caller decides what to do with the note.
    """
    S, T = md.S, md.T
    ST = S * T[None, :]
    M = ST @ ST @ ST
    if np.max(np.abs(M - S @ S)) <= pol.eq_tol:
        return None
    if np.max(np.abs(M - np.eye(md.rank))) <= pol.eq_tol:
        return (
            "data satisfies (S T)^3 = 1, the conjugate presentation; "
            "conjugate S entrywise to obtain the (S T)^3 = C convention"
        )
    return None
