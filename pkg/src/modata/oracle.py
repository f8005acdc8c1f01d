"""Explicit multiplicity-free anyon models: the brute-force ground truth.

Each model carries literal braiding scalars r(i, j, k) on every
one-dimensional fusion channel.  The trace of a self-braiding over a 0- or
1-dimensional channel space is then r(i, i, k) or 0 straight from the
definition, with no basis choices and no reference to the formula route it
is used to check.

Every model is validated on construction: the r table must cover exactly
the fusion channels, satisfy |r| = 1 and the double-braiding identity
r(j,i,k) r(i,j,k) = w_k/(w_i w_j), and its modular data must reproduce the
model's fusion tensor through the Verlinde sum.  A typo in any shipped
number fails loudly at load time.

The shipped catalog (trivial, semion, conj-semion, z3, fibonacci,
conj-fibonacci, ising, su2_2, toric_code) stores phases as exact turn
fractions; all of it was regenerated from the constructions below, none of
it is copied from anywhere.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .modular_data import (
    InvalidModularData,
    ModularData,
    complex_to_json,
    parse_complex,
    verlinde_fusion,
)
from .numerics import DEFAULT_POLICY, TolerancePolicy, phase_from_turns, principal_root

__all__ = [
    "ExplicitModel",
    "CatalogEntry",
    "brute_trace",
    "build_pointed_model",
    "catalog",
    "catalog_names",
    "get_model",
    "load_model",
]


@dataclass(frozen=True)
class ExplicitModel:
    """A multiplicity-free anyon model with literal braiding scalars."""

    name: str
    labels: tuple[str, ...]
    fusion: np.ndarray                      # (n, n, n) entries in {0, 1}
    twists: np.ndarray                      # (n,) phases, twists[0] = 1
    r_scalars: dict[tuple[int, int, int], complex]
    modular_data: ModularData

    def __post_init__(self):
        fusion = np.asarray(self.fusion, dtype=int)
        twists = np.asarray(self.twists, dtype=complex)
        fusion.setflags(write=False)
        twists.setflags(write=False)
        object.__setattr__(self, "fusion", fusion)
        object.__setattr__(self, "twists", twists)
        object.__setattr__(self, "r_scalars", dict(self.r_scalars))
        _check_model(self)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def channels(self) -> list[tuple[int, int, int]]:
        return sorted(self.r_scalars)

    def to_json_dict(self) -> dict:
        d = self.modular_data.to_json_dict(exact_t=True)
        d["name"] = self.name
        d["r"] = [[list(ch), complex_to_json(v, exact=True)] for ch, v in sorted(self.r_scalars.items())]
        return d


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    md: ModularData
    notes: str


def _check_model(model: ExplicitModel, pol: TolerancePolicy = DEFAULT_POLICY) -> None:
    n = model.rank
    fusion = model.fusion
    if fusion.shape != (n, n, n) or np.any((fusion != 0) & (fusion != 1)):
        raise ValueError(f"model {model.name}: fusion must be a 0/1 tensor")
    support = {(i, j, k) for i in range(n) for j in range(n) for k in range(n)
               if fusion[i, j, k] == 1}
    given = set(model.r_scalars)
    if given != support:
        raise ValueError(
            f"model {model.name}: r table support mismatch "
            f"(missing {sorted(support - given)[:4]}, extra {sorted(given - support)[:4]})")
    w = model.twists
    if abs(w[0] - 1.0) > pol.eq_tol:
        raise ValueError(f"model {model.name}: twist of the vacuum must be 1")
    for (i, j, k), val in model.r_scalars.items():
        if abs(abs(val) - 1.0) > pol.eq_tol:
            raise ValueError(f"model {model.name}: |r({i},{j},{k})| != 1")
        mono = val * model.r_scalars[(j, i, k)]
        target = w[k] / (w[i] * w[j])
        if abs(mono - target) > pol.eq_tol:
            raise ValueError(
                f"model {model.name}: double braiding on ({i},{j},{k}) is "
                f"{mono:.6g}, expected {target:.6g}")
    md = model.modular_data
    if md.rank != n:
        raise ValueError(f"model {model.name}: modular data rank mismatch")
    if np.max(np.abs(md.T / md.T[0] - w)) > pol.eq_tol:
        raise ValueError(f"model {model.name}: T diagonal does not reproduce the twists")
    if not np.array_equal(verlinde_fusion(md, pol), fusion):
        raise ValueError(f"model {model.name}: Verlinde fusion does not match the r table support")
    # ribbon identity sum_k d_k r(i,i,k) = d_i w_i; the double-braiding
    # check alone cannot see a sign flip of a self-braiding scalar
    d = (md.S[0, :] / md.S[0, 0]).real
    for i in range(n):
        lhs = sum(d[k] * model.r_scalars.get((i, i, k), 0.0) for k in range(n))
        if abs(lhs - d[i] * w[i]) > pol.eq_tol:
            raise ValueError(
                f"model {model.name}: self-braiding scalars of sector {i} violate "
                f"the ribbon identity (got {lhs:.6g}, expected {d[i] * w[i]:.6g})")


def brute_trace(model: ExplicitModel, i: int, k: int) -> complex:
    """Trace of the self-braiding of i over channel k, by definition.

    The channel space has dimension 0 or 1, so the trace is the stored
    scalar or zero; no formula is involved.
    """
    return complex(model.r_scalars.get((i, i, k), 0.0))


# ---------------------------------------------------------------------------
# pointed models on Z_n
# ---------------------------------------------------------------------------

def build_pointed_model(n: int, p: int) -> ExplicitModel:
    """Abelian anyons on Z_n with quadratic exponent p.

    With zeta = e^{i pi / n} and c = p for even n (2p for odd n, so the
    form is well defined on Z_n):

        twists   w_a       = zeta^(c a^2)
        braiding r(a,b)    = zeta^(c a b)        on channel a+b mod n
        S matrix S_{a,b}   = n^{-1/2} zeta^(-2 c a b)

    (2,1) is the semion, (2,-1) its conjugate, (3,1) the Z_3 model.  The
    form is nondegenerate , and S unitary, iff gcd(c, n) = 1.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    c = p if n % 2 == 0 else 2 * p
    if n > 1 and math.gcd(c, n) != 1:
        raise ValueError(f"not modular for ({n},{p}): the quadratic form is degenerate")
    twists = np.array([phase_from_turns(Fraction(c * a * a, 2 * n)) for a in range(n)])
    S = np.array(
        [[phase_from_turns(Fraction(-c * a * b, n)) for b in range(n)] for a in range(n)]
    ) / math.sqrt(n)
    r = {(a, b, (a + b) % n): phase_from_turns(Fraction(c * a * b, 2 * n))
         for a in range(n) for b in range(n)}
    fusion = np.zeros((n, n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            fusion[a, b, (a + b) % n] = 1
    T = _t_diagonal(S, twists)
    md = ModularData.from_matrices(S, T, labels=[str(a) for a in range(n)])
    return ExplicitModel(name=f"pointed_z{n}_p{p}", labels=md.labels, fusion=fusion,
                         twists=twists, r_scalars=r, modular_data=md)


def _t_diagonal(S: np.ndarray, twists: np.ndarray,
                pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """T = T_0 * twists with (S T)^3 = S^2, T_0 the principal cube root."""
    M = S * twists[None, :]
    M3 = M @ M @ M
    C = S @ S
    lam = M3[0, 0] / C[0, 0]
    if np.max(np.abs(M3 - lam * C)) > pol.eq_tol:
        raise InvalidModularData("no global phase makes (S T)^3 = S^2 hold")
    t0 = 1.0 / principal_root(lam, 3)
    return t0 * twists


# ---------------------------------------------------------------------------
# shipped catalog
# ---------------------------------------------------------------------------

def _data_dir():
    return resources.files("modata") / "data" / "models"


def load_model(source: str | Path) -> ExplicitModel:
    """Read a model file: modular-data format plus the "r" scalar block."""
    if hasattr(source, "read_text"):
        text = source.read_text(encoding="utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidModularData(f"malformed JSON: {exc}") from exc
    name = doc.get("name", "unnamed")
    S = np.array([[parse_complex(z) for z in row] for row in doc["S"]], dtype=complex)
    T = np.array([parse_complex(z) for z in doc["T"]], dtype=complex)
    md = ModularData.from_matrices(S, T, labels=doc.get("labels"))
    r = {}
    for entry in doc.get("r", []):
        ch, val = entry
        r[tuple(int(x) for x in ch)] = parse_complex(val)
    fusion = verlinde_fusion(md)
    twists = T / T[0]
    twists[0] = 1.0
    return ExplicitModel(name=name, labels=md.labels, fusion=fusion,
                         twists=twists, r_scalars=r, modular_data=md)


_CATALOG_ORDER = [
    "trivial", "semion", "conj-semion", "z3",
    "fibonacci", "conj-fibonacci", "ising", "su2_2", "toric_code",
]

_NOTES = {
    "trivial": "rank 1; the unit theory; c = 0",
    "semion": "pointed Z_2, p = 1; twists (1, i); c = 1",
    "conj-semion": "pointed Z_2, p = -1; twists (1, -i); c = -1",
    "z3": "pointed Z_3, p = 1; twists (1, z, z) with z = e^{2 pi i/3}; c = 2",
    "fibonacci": "x*x = 1 + x; dims (1, phi); twist e^{4 pi i/5}; c = 14/5",
    "conj-fibonacci": "conjugate Fibonacci; twist e^{-4 pi i/5}; c = -14/5",
    "ising": "sigma^2 = 1 + psi; twist_sigma = e^{i pi/8}; c = 1/2",
    "su2_2": "Ising fusion with twist_sigma = e^{3 i pi/8}; c = 3/2",
    "toric_code": "Z_2 x Z_2 hyperbolic form; twists (1,1,1,-1); c = 0",
}


def _model_file_name(name: str) -> str:
    return name.replace("-", "_") + ".json"


@lru_cache(maxsize=1)
def _load_catalog_models() -> tuple[ExplicitModel, ...]:
    return tuple(load_model(_data_dir() / _model_file_name(n)) for n in _CATALOG_ORDER)


def catalog_models() -> list[ExplicitModel]:
    """All shipped explicit models, validated at load."""
    return list(_load_catalog_models())


def catalog() -> list[CatalogEntry]:
    """The known-good modular data shipped with the package."""
    return [CatalogEntry(name=m.name, md=m.modular_data, notes=_NOTES.get(m.name, ""))
            for m in _load_catalog_models()]


def catalog_names() -> list[str]:
    return list(_CATALOG_ORDER)


def get_model(name: str) -> ExplicitModel:
    for m in _load_catalog_models():
        if m.name == name:
            return m
    raise KeyError(f"no model named {name!r}; known: {', '.join(_CATALOG_ORDER)}")
