"""Small-rank search: fusion ring -> candidate S -> candidate T -> filters.

Pipeline:

  1. ``candidate_s`` simultaneously diagonalizes the fusion matrices
     (standard character theory of a commutative fusion ring); columns are
     the common eigenvectors, phase-fixed to a positive first entry, and
     every column ordering that yields a symmetric matrix with a positive
     vacuum column is kept.
  2. ``enumerate_t`` assigns roots of unity (bounded order) to the twists,
     respecting w_0 = 1 and w_ibar = w_i, keeps assignments for which
     (S diag(w))^3 is a scalar multiple of S^2, and emits all three cube
     roots of that scalar as T_0 candidates; each emitted T satisfies
     (S T)^3 = S^2 exactly.  The three lifts differ by the central charge
     mod 8 and are genuinely distinct data.
  3. ``search_pipeline`` runs the axiom battery and the trace-realizability
     report on every candidate and keeps the passes, deterministically
     ordered by provenance.

The pipeline enumerates admissible modular data; whether two realizations
of the same data are equivalent categories is out of its scope.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from pathlib import Path
from typing import IO, NamedTuple

import numpy as np

from .axioms import AxiomReport
from .bantay import realizability_report
from .modular_data import ModularData, verlinde_fusion
from .numerics import DEFAULT_POLICY, TolerancePolicy, phase_from_turns, principal_root

__all__ = [
    "FusionRingError",
    "FusionRing",
    "SearchResult",
    "TEnumeration",
    "candidate_s",
    "enumerate_t",
    "search_pipeline",
    "load_fusion_ring",
    "save_fusion_ring",
]

MAX_SEARCH_RANK = 6


class FusionRingError(ValueError):
    pass


@dataclass(frozen=True)
class FusionRing:
    """A commutative associative fusion ring; N[i, j, k] = N^k_{i,j}."""

    rank: int
    N: np.ndarray

    def __post_init__(self):
        N = np.asarray(self.N, dtype=int)
        if N.shape != (self.rank,) * 3:
            raise FusionRingError(f"N must be rank^3 = {(self.rank,)*3}, got {N.shape}")
        if np.any(N < 0):
            raise FusionRingError("fusion multiplicities must be nonnegative")
        if not np.array_equal(N, N.transpose(1, 0, 2)):
            raise FusionRingError("fusion ring is not commutative")
        if not np.array_equal(N[0], np.eye(self.rank, dtype=int)):
            raise FusionRingError("index 0 is not a unit")
        # N^0_{i,j} = delta_{j, ibar} for an involution fixing 0
        vac = N[:, :, 0]
        if np.any(vac.sum(axis=1) != 1) or np.any(vac.sum(axis=0) != 1):
            raise FusionRingError("vacuum row N^0 is not a permutation")
        conj = np.argmax(vac, axis=1)
        if conj[0] != 0 or not np.array_equal(conj[conj], np.arange(self.rank)):
            raise FusionRingError("duality from N^0 is not an involution fixing 0")
        # associativity: sum_m N^m_{i,j} N^l_{m,k} = sum_m N^m_{j,k} N^l_{i,m}
        left = np.einsum("ijm,mkl->ijkl", N, N)
        right = np.einsum("jkm,iml->ijkl", N, N)
        if not np.array_equal(left, right):
            raise FusionRingError("fusion ring is not associative")
        N.setflags(write=False)
        object.__setattr__(self, "N", N)

    @property
    def conj(self) -> np.ndarray:
        """The duality involution i -> ibar read off the vacuum row N^0."""
        return np.argmax(self.N[:, :, 0], axis=1)

    def to_json_dict(self) -> dict:
        return {"rank": self.rank, "N": [[[int(x) for x in row] for row in plane]
                                         for plane in self.N]}


@dataclass(frozen=True)
class SearchResult:
    """One admissible modular datum with its passing report and provenance."""

    md: ModularData
    report: AxiomReport
    provenance: tuple[int, int, int]  # (S index, twist assignment index, cube-root index)


class TEnumeration(NamedTuple):
    diagonals: list[np.ndarray]
    assignments: list[int]  # assignment index per diagonal, parallel list
    skipped: int


# ---------------------------------------------------------------------------
# candidate S matrices
# ---------------------------------------------------------------------------

def _joint_eigenvectors(fr: FusionRing, split_tol: float = 1e-8) -> list[np.ndarray]:
    """Common eigenvectors of the fusion matrices via subspace splitting.

    The action matrices B_i (B_i)[k, j] = N^k_{i,j} form a commuting family
    closed under transposition (B_ibar = B_i^t), so splitting with the
    Hermitian generators B_i + B_i^t and i(B_i - B_i^t) refines the space
    into the joint eigenspaces.
    """
    n = fr.rank
    gens: list[np.ndarray] = []
    for i in range(1, n):
        B = fr.N[i].T.astype(float)
        gens.append(B + B.T)
        A = B - B.T
        if np.max(np.abs(A)) > 0:
            gens.append(1j * A)
    spaces: list[np.ndarray] = [np.eye(n, dtype=complex)]
    for H in gens:
        refined: list[np.ndarray] = []
        for Q in spaces:
            if Q.shape[1] == 1:
                refined.append(Q)
                continue
            sub = Q.conj().T @ H @ Q
            vals, vecs = np.linalg.eigh(sub)
            start = 0
            for t in range(1, len(vals) + 1):
                if t == len(vals) or vals[t] - vals[t - 1] > split_tol * (1.0 + abs(vals[t])):
                    refined.append(Q @ vecs[:, start:t])
                    start = t
        spaces = refined
    if any(Q.shape[1] > 1 for Q in spaces):
        raise FusionRingError(
            "fusion ring not transitive: cannot diagonalize uniquely "
            f"(a joint eigenspace has dimension {max(Q.shape[1] for Q in spaces)})")
    return [Q[:, 0] for Q in spaces]


def candidate_s(fr: FusionRing, pol: TolerancePolicy = DEFAULT_POLICY) -> list[np.ndarray]:
    """Unitary symmetric S candidates assembled from the ring characters.

    Columns are phase-fixed so the first entry is real positive; orderings
    are kept when the matrix is symmetric and the vacuum column (position
    0) is entrywise positive.  Duplicate matrices within eq_tol collapse.
    """
    if fr.rank > MAX_SEARCH_RANK:
        raise FusionRingError(f"rank {fr.rank} exceeds the search bound {MAX_SEARCH_RANK}")
    cols = []
    for v in _joint_eigenvectors(fr):
        v = v / np.linalg.norm(v)
        if abs(v[0]) <= pol.eq_tol:
            return []  # a character vanishing on the vacuum admits no S
        v = v * (np.conj(v[0]) / abs(v[0]))
        cols.append(v)
    out: list[np.ndarray] = []
    for perm in permutations(range(len(cols))):
        S = np.column_stack([cols[p] for p in perm])
        if np.max(np.abs(S - S.T)) > pol.eq_tol:
            continue
        c0 = S[:, 0]
        if np.max(np.abs(c0.imag)) > pol.eq_tol or np.any(c0.real <= pol.eq_tol):
            continue
        if not any(np.max(np.abs(S - seen)) <= pol.eq_tol for seen in out):
            out.append(S)
    return out


# ---------------------------------------------------------------------------
# candidate T diagonals
# ---------------------------------------------------------------------------

def _roots_of_unity(max_order: int) -> list[Fraction]:
    return sorted({Fraction(p, q) for q in range(1, max_order + 1)
                   for p in range(q) if math.gcd(p, q) == 1})


def _twist_orbits(S: np.ndarray, pol: TolerancePolicy) -> list[list[int]]:
    """Orbits {i, ibar} of the duality read off S^2, vacuum excluded."""
    n = S.shape[0]
    C = S @ S
    perm = [int(np.argmax(np.abs(C[i]))) for i in range(n)]
    orbits, seen = [], {0}
    for i in range(1, n):
        if i in seen:
            continue
        orb = sorted({i, perm[i]})
        seen.update(orb)
        orbits.append(orb)
    return orbits


def enumerate_t(S: np.ndarray, max_order: int,
                pol: TolerancePolicy = DEFAULT_POLICY) -> TEnumeration:
    """All T diagonals with (S T)^3 = S^2 and twists of order <= max_order.

    For each conjugation-respecting twist assignment the cube
    M = (S diag(w))^3 either matches a single scalar lambda times S^2, in
    which case the three diagonals lambda^{-1/3} zeta diag(w), zeta^3 = 1,
    are emitted, or the assignment is counted as skipped.
    """
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    C = S @ S
    orbits = _twist_orbits(S, pol)
    roots = _roots_of_unity(max_order)
    cube_roots = [phase_from_turns(Fraction(j, 3)) for j in range(3)]
    diagonals: list[np.ndarray] = []
    assignment_ids: list[int] = []
    skipped = 0
    for a_idx, assign in enumerate(product(range(len(roots)), repeat=len(orbits))):
        w = np.ones(n, dtype=complex)
        for orb, ri in zip(orbits, assign):
            val = phase_from_turns(roots[ri])
            for i in orb:
                w[i] = val
        M = S * w[None, :]
        M3 = M @ M @ M
        lam = M3[0, 0] / C[0, 0]
        if np.max(np.abs(M3 - lam * C)) > pol.eq_tol:
            skipped += 1
            continue
        base = (1.0 / principal_root(lam, 3)) * w
        for zeta in cube_roots:
            t_diag = zeta * base
            if not any(np.max(np.abs(t_diag - seen)) <= pol.eq_tol for seen in diagonals):
                diagonals.append(t_diag)
                assignment_ids.append(a_idx)
    return TEnumeration(diagonals=diagonals, assignments=assignment_ids, skipped=skipped)


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------

def _evaluate_candidate(args):
    s_idx, a_idx, root_idx, S, t_diag, pol = args
    md = ModularData.from_matrices(S, t_diag)
    rep = realizability_report(md, pol)  # runs the axiom battery first
    if not rep.passed:
        return None
    return SearchResult(md=md, report=rep, provenance=(s_idx, a_idx, root_idx))


def search_pipeline(fr: FusionRing, max_order: int = 16,
                    pol: TolerancePolicy = DEFAULT_POLICY,
                    jobs: int = 1,
                    stats_out: dict | None = None) -> list[SearchResult]:
    """Admissible modular data for a fusion ring, deterministically ordered.

    Results are ordered lexicographically by provenance (S candidate, twist
    assignment, cube root) and deduplicated on (S, T) equality within
    eq_tol, so parallel and serial runs return identical lists.  Pass a
    dict as ``stats_out`` to receive the candidate/skip counters.
    """
    tasks = []
    n_candidates = 0
    n_skipped = 0
    for s_idx, S in enumerate(candidate_s(fr, pol)):
        n_candidates += 1
        enum = enumerate_t(S, max_order, pol)
        n_skipped += enum.skipped
        root_seen: dict[int, int] = {}
        for t_diag, a_idx in zip(enum.diagonals, enum.assignments):
            root_idx = root_seen.get(a_idx, 0)
            root_seen[a_idx] = root_idx + 1
            tasks.append((s_idx, a_idx, root_idx, S, t_diag, pol))
    if stats_out is not None:
        stats_out.update(s_candidates=n_candidates, skipped_assignments=n_skipped,
                         t_candidates=len(tasks))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            evaluated = list(pool.map(_evaluate_candidate, tasks))
    else:
        evaluated = [_evaluate_candidate(t) for t in tasks]
    results: list[SearchResult] = []
    for res in evaluated:
        if res is None:
            continue
        if any(res.md.approx_eq(kept.md, pol) for kept in results):
            continue
        results.append(res)
    results.sort(key=lambda r: r.provenance)
    # every winner must reproduce the ring it came from
    for res in results:
        if not np.array_equal(verlinde_fusion(res.md, pol), fr.N):
            raise FusionRingError("internal error: result does not reproduce the fusion ring")
    return results


# ---------------------------------------------------------------------------
# fusion ring files
# ---------------------------------------------------------------------------

def load_fusion_ring(source: str | Path | IO[str]) -> FusionRing:
    """Read {"rank": int, "N": [[[int...]...]...]} with N[i][j][k] = N^k_{i,j}."""
    if hasattr(source, "read"):
        text = source.read()
    elif hasattr(source, "read_text"):
        text = source.read_text(encoding="utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FusionRingError(f"malformed JSON: {exc}") from exc
    try:
        rank = int(doc["rank"])
        N = np.array(doc["N"], dtype=int)
    except (KeyError, TypeError, ValueError) as exc:
        raise FusionRingError(f"missing or malformed field: {exc}") from exc
    return FusionRing(rank=rank, N=N)


def save_fusion_ring(fr: FusionRing, target: str | Path | IO[str]) -> None:
    text = json.dumps(fr.to_json_dict(), indent=2) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")
