"""Modular data {rank, labels, S, T} and everything derived from it.

Conventions fixed here and used everywhere else:
  * index 0 is the vacuum; files whose vacuum sits elsewhere are rejected
    by validation, never silently permuted;
  * S is stored as the full complex matrix, T as its diagonal only;
  * quantum dimensions d_i = S_{0,i}/S_{0,0}, twists w_i = T_i/T_0,
    charge conjugation C = S^2, total dimension 1/S_{0,0};
  * the fusion tensor is stored as N[i, j, k] = N^k_{i,j}, the multiplicity
    of sector k in i x j.

File format (JSON, UTF-8)::

    { "rank": int, "labels": [str, ...]  (optional),
      "S": [[complex, ...], ...], "T": [complex, ...] }

where ``complex`` is either ``[re, im]`` or the exact-phase form
``{"abs": number, "arg_turns": "p/q"}`` meaning abs * e^{2 pi i p/q}.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, IO

import numpy as np

from .numerics import DEFAULT_POLICY, TolerancePolicy, phase_from_turns, turns_fraction

__all__ = [
    "InvalidModularData",
    "ModularData",
    "DerivedData",
    "dims",
    "twists",
    "charge_conjugation",
    "verlinde_fusion",
    "derive",
    "parse_complex",
    "complex_to_json",
    "load_modular_data",
    "save_modular_data",
]


class InvalidModularData(ValueError):
    """Raised when data cannot form (or be derived from) a ModularData."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ModularData:
    """The S and T matrices of a candidate modular category.

    Construction enforces structural well-formedness only (shapes, finite
    entries); the mathematical axioms live in :mod:`modata.axioms` so that
    bad candidates can be diagnosed instead of rejected opaquely.
    """

    rank: int
    labels: tuple[str, ...]
    S: np.ndarray  # (rank, rank) complex
    T: np.ndarray  # (rank,) complex, the diagonal

    def __post_init__(self):
        S = np.ascontiguousarray(np.asarray(self.S, dtype=complex))
        T = np.ascontiguousarray(np.asarray(self.T, dtype=complex))
        if self.rank < 1:
            raise InvalidModularData(f"rank must be >= 1, got {self.rank}")
        if S.shape != (self.rank, self.rank):
            raise InvalidModularData(f"S must be {self.rank}x{self.rank}, got {S.shape}")
        if T.shape != (self.rank,):
            raise InvalidModularData(f"T must have length {self.rank}, got {T.shape}")
        if not (np.all(np.isfinite(S.view(float))) and np.all(np.isfinite(T.view(float)))):
            raise InvalidModularData("S and T entries must be finite")
        labels = tuple(str(x) for x in self.labels)
        if len(labels) != self.rank:
            raise InvalidModularData(f"need {self.rank} labels, got {len(labels)}")
        object.__setattr__(self, "S", _readonly(S))
        object.__setattr__(self, "T", _readonly(T))
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_matrices(cls, S, T, labels=None) -> "ModularData":
        T = np.asarray(T, dtype=complex)
        rank = len(T)
        if labels is None:
            labels = tuple(str(i) for i in range(rank))
        return cls(rank=rank, labels=tuple(labels), S=np.asarray(S, dtype=complex), T=T)

    def approx_eq(self, other: "ModularData", pol: TolerancePolicy = DEFAULT_POLICY) -> bool:
        """Entrywise equality of S and T within eq_tol (labels ignored)."""
        if self.rank != other.rank:
            return False
        return bool(
            np.max(np.abs(self.S - other.S)) <= pol.eq_tol
            and np.max(np.abs(self.T - other.T)) <= pol.eq_tol
        )

    def to_json_dict(self, exact_t: bool = False) -> dict:
        d: dict[str, Any] = {
            "rank": self.rank,
            "labels": list(self.labels),
            "S": [[complex_to_json(z) for z in row] for row in self.S],
            "T": [complex_to_json(z, exact=exact_t) for z in self.T],
        }
        return d


@dataclass(frozen=True)
class DerivedData:
    """Quantities read off S and T: dims, twists, conjugation, fusion, |sigma|."""

    dims: np.ndarray       # (rank,) float, d_0 = 1
    twists: np.ndarray     # (rank,) complex, w_0 = 1 exactly
    conj: np.ndarray       # (rank,) int, involution fixing 0
    fusion: np.ndarray     # (rank, rank, rank) int, N[i, j, k] = N^k_{i,j}
    total_dim: float       # 1/S_{0,0}

    def __post_init__(self):
        for name in ("dims", "twists", "conj", "fusion"):
            object.__setattr__(self, name, _readonly(np.asarray(getattr(self, name))))

    @property
    def rank(self) -> int:
        return len(self.dims)


# ---------------------------------------------------------------------------
# derivation operations
# ---------------------------------------------------------------------------

def dims(md: ModularData, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Quantum dimensions d_i = S_{0,i}/S_{0,0}; must come out real."""
    s00 = md.S[0, 0]
    if abs(s00) <= pol.eq_tol:
        raise InvalidModularData("invalid dimension row: S_{0,0} vanishes")
    d = md.S[0, :] / s00
    bad = np.abs(d.imag) > pol.eq_tol
    if np.any(bad):
        idx = int(np.argmax(np.abs(d.imag)))
        raise InvalidModularData(
            f"invalid dimension row: S_0,{idx}/S_0,0 = {d[idx]} is not real"
        )
    return d.real.copy()


def twists(md: ModularData) -> np.ndarray:
    """Twists w_i = T_i/T_0, with w_0 = 1 exactly after normalization."""
    w = md.T / md.T[0]
    w[0] = 1.0
    return w


def charge_conjugation(md: ModularData, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """The permutation C = S^2 pairing each sector with its dual.

    Each row of S^2 must be a 0/1 unit row within eq_tol; C must be an
    involution fixing the vacuum.
    """
    C = md.S @ md.S
    n = md.rank
    perm = np.full(n, -1, dtype=int)
    for i in range(n):
        row = C[i]
        j = int(np.argmax(np.abs(row)))
        unit = np.zeros(n, dtype=complex)
        unit[j] = 1.0
        if np.max(np.abs(row - unit)) > pol.eq_tol:
            raise InvalidModularData(
                f"not modular: S^2 is not a conjugation (row {i} deviates by "
                f"{np.max(np.abs(row - unit)):.3e})"
            )
        perm[i] = j
    if perm[0] != 0 or not np.array_equal(perm[perm], np.arange(n)):
        raise InvalidModularData("not modular: S^2 is not an involution fixing 0")
    return perm


def verlinde_fusion(md: ModularData, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Fusion tensor N^k_{i,j} = sum_r S_{i,r} S_{j,r} conj(S_{k,r}) / S_{0,r}.

    Every entry must round to a nonnegative integer within int_tol.
    """
    S = md.S
    if np.any(np.abs(S[0, :]) <= pol.eq_tol):
        raise InvalidModularData("Verlinde integrality violation: vanishing S_{0,r}")
    raw = np.einsum("ir,jr,kr->ijk", S, S, np.conj(S) / S[0, :][None, :])
    rounded = np.rint(raw.real).astype(int)
    dev = np.abs(raw - rounded)
    if np.max(dev) > pol.int_tol or np.any(rounded < 0):
        bad = np.argwhere((dev > pol.int_tol) | (rounded < 0))
        triples = [tuple(int(x) for x in t) for t in bad[:5]]
        raise InvalidModularData(
            f"Verlinde integrality violation at (i,j,k) in {triples} "
            f"(max deviation {np.max(dev):.3e})"
        )
    return rounded


def derive(md: ModularData, pol: TolerancePolicy = DEFAULT_POLICY) -> DerivedData:
    """Bundle dims, twists, conjugation, fusion and the total dimension."""
    d = dims(md, pol)
    w = twists(md)
    conj = charge_conjugation(md, pol)
    fusion = verlinde_fusion(md, pol)
    s00 = md.S[0, 0]
    if abs(s00.imag) > pol.eq_tol or s00.real <= 0:
        raise InvalidModularData(f"S_0,0 = {s00} is not real positive")
    return DerivedData(dims=d, twists=w, conj=conj, fusion=fusion, total_dim=1.0 / s00.real)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def parse_complex(obj) -> complex:
    """Parse one complex value: [re, im] or {"abs": a, "arg_turns": "p/q"}."""
    if isinstance(obj, (int, float)):
        # tolerated on input for hand-written files; never emitted
        return complex(float(obj), 0.0)
    if isinstance(obj, list):
        if len(obj) != 2 or not all(isinstance(x, (int, float)) for x in obj):
            raise InvalidModularData(f"complex value must be [re, im], got {obj!r}")
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, dict):
        try:
            mag = float(obj["abs"])
            turns_str = obj["arg_turns"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidModularData(f"bad exact-phase form {obj!r}") from exc
        parts = str(turns_str).split("/")
        if len(parts) != 2:
            raise InvalidModularData(f'arg_turns must be "p/q", got {turns_str!r}')
        try:
            p, q = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise InvalidModularData(f'arg_turns must be "p/q", got {turns_str!r}') from exc
        if q <= 0:
            raise InvalidModularData(f"arg_turns denominator must be > 0, got {q}")
        return mag * phase_from_turns(Fraction(p, q))
    raise InvalidModularData(f"cannot parse complex value {obj!r}")


def complex_to_json(z: complex, exact: bool = False, max_denominator: int = 240):
    """Serialize a complex value; exact=True tries the arg_turns form."""
    z = complex(z)
    if exact:
        frac = turns_fraction(z / abs(z), max_denominator) if abs(z) > 0 else None
        if frac is not None:
            return {"abs": abs(z), "arg_turns": f"{frac.numerator}/{frac.denominator}"}
    return [z.real, z.imag]


def _md_from_dict(doc: dict) -> ModularData:
    if not isinstance(doc, dict):
        raise InvalidModularData("top-level JSON value must be an object")
    try:
        rank = int(doc["rank"])
        S_rows = doc["S"]
        T_row = doc["T"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidModularData(f"missing or malformed field: {exc}") from exc
    if not isinstance(S_rows, list) or not isinstance(T_row, list):
        raise InvalidModularData('"S" must be a matrix and "T" a list')
    S = np.array([[parse_complex(z) for z in row] for row in S_rows], dtype=complex)
    T = np.array([parse_complex(z) for z in T_row], dtype=complex)
    labels = doc.get("labels")
    if labels is None:
        labels = [str(i) for i in range(rank)]
    if S.ndim != 2:
        raise InvalidModularData("S rows have inconsistent lengths")
    return ModularData(rank=rank, labels=tuple(labels), S=S, T=T)


def load_modular_data(source: str | Path | IO[str]) -> ModularData:
    """Read a modular-data file; raises InvalidModularData on any defect."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidModularData(f"malformed JSON: {exc}") from exc
    return _md_from_dict(doc)


def save_modular_data(md: ModularData, target: str | Path | IO[str], exact_t: bool = False) -> None:
    text = json.dumps(md.to_json_dict(exact_t=exact_t), indent=2) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")
