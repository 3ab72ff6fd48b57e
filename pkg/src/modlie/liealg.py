"""Lie algebras given by structure constants over GF(p).

The bracket table is a sparse matrix with one row per ordered pair of basis
vectors: row ``i*n + j`` holds the coordinates of ``[b_i, b_j]``.  On top of
that core live the structural queries (centre, series, derivations, Killing
form, simplicity, radical, quotients), filtrations and gradings, and the
condition checkers for graded algebras, the Seligman-Mills criterion and the
recognition theorem.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .linalg import (
    ConstraintSolver,
    SubspaceBasis,
    as_operator,
    matmul,
    module_irreducible,
    nullspace,
    rref,
    solve_linear,
    spin,
    to_dense,
)

__all__ = [
    "JacobiViolation",
    "AntisymmetryViolation",
    "ParentMismatch",
    "DimensionLimitExceeded",
    "NotAnIdeal",
    "PreconditionFailed",
    "UnrecognizedQuotient",
    "LieAlgebra",
    "LieElement",
    "Grading",
    "Filtration",
    "Quotient",
    "from_structure_constants",
    "from_json",
    "closure",
    "invariant_subspaces",
    "derivation_algebra",
    "killing_form",
    "radical_of_form",
    "is_simple",
    "solvable_radical",
    "quotient",
    "standard_filtration",
    "filtration_from_degrees",
    "associated_graded",
    "weisfeiler_ideal",
    "check_graded_conditions",
    "seligman_mills_check",
    "recognition_check",
    "dim_limit",
    "classify_reductive_quotient",
    "matrix_lie_algebra",
    "centralizer",
    "normalizer",
    "minimal_ideal",
    "is_maximal_subalgebra",
    "Verdict",
    "BilinearForm",
]


class JacobiViolation(ValueError):
    def __init__(self, i, j, k):
        super().__init__(f"Jacobi identity fails on basis triple ({i}, {j}, {k})")
        self.triple = (i, j, k)


class AntisymmetryViolation(ValueError):
    pass


class ParentMismatch(TypeError):
    pass


class DimensionLimitExceeded(RuntimeError):
    pass


class NotAnIdeal(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


class UnrecognizedQuotient(ValueError):
    pass


def dim_limit() -> int:
    """Dimension gate for the quadratic-size solves (env MODLIE_DIM_LIMIT)."""
    return int(os.environ.get("MODLIE_DIM_LIMIT", "60"))


# ---------------------------------------------------------------------------
# core types

@dataclass
class Grading:
    """Integer (or Z/k) degree for each basis vector."""

    degrees: tuple[int, ...]
    modulus: int | None = None

    def component_indices(self, d: int) -> list[int]:
        if self.modulus:
            d %= self.modulus
        return [i for i, e in enumerate(self.degrees) if e == d]

    @property
    def support(self) -> list[int]:
        return sorted(set(self.degrees))

    def component(self, d: int, p: int) -> SubspaceBasis:
        return SubspaceBasis.spanned_by_indices(self.component_indices(d), len(self.degrees), p)


@dataclass
class Filtration:
    """Descending chain ``spaces[i] = L_(i)`` for ``lo <= i <= hi``.

    ``L_(i) = L`` for i <= lo and ``L_(i) = 0`` for i > hi.
    """

    spaces: dict[int, SubspaceBasis]
    lo: int
    hi: int

    def __getitem__(self, i: int) -> SubspaceBasis:
        if i < self.lo:
            return self.spaces[self.lo]
        if i > self.hi:
            n = self.spaces[self.lo].ambient_dim
            return SubspaceBasis.zero(n, self.spaces[self.lo].p)
        return self.spaces[i]

    @property
    def depth(self) -> int:
        """s' with L = L_(-s')."""
        return -self.lo

    @property
    def height(self) -> int:
        """s with L_(s) != 0 and L_(s+1) = 0."""
        return self.hi

    def dims(self) -> dict[int, int]:
        return {i: self.spaces[i].dim for i in range(self.lo, self.hi + 1)}


class LieElement:
    __slots__ = ("coords", "parent")

    def __init__(self, coords, parent: "LieAlgebra"):
        self.coords = np.asarray(coords, dtype=np.int64) % parent.p
        self.parent = parent

    def _check(self, other):
        if not isinstance(other, LieElement) or other.parent is not self.parent:
            raise ParentMismatch("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return LieElement(self.coords + other.coords, self.parent)

    def __sub__(self, other):
        self._check(other)
        return LieElement(self.coords - other.coords, self.parent)

    def __neg__(self):
        return LieElement(-self.coords, self.parent)

    def __mul__(self, c: int):
        return LieElement(self.coords * int(c), self.parent)

    __rmul__ = __mul__

    def bracket(self, other) -> "LieElement":
        self._check(other)
        return LieElement(self.parent.bracket(self.coords, other.coords), self.parent)

    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def __eq__(self, other):
        return isinstance(other, LieElement) and other.parent is self.parent and np.array_equal(
            self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self):
        terms = [f"{c}*{self.parent.labels[i]}" for i, c in enumerate(self.coords) if c]
        return " + ".join(terms) or "0"


class LieAlgebra:
    """Finite-dimensional Lie algebra over GF(p) with a sparse bracket table."""

    def __init__(self, table: sp.spmatrix, p: int, labels: Sequence[str] | None = None,
                 grading: Grading | None = None, name: str = "", check: bool | str = True,
                 metadata: dict | None = None):
        table = sp.csr_matrix(table, dtype=np.int64)
        n = table.shape[1]
        if table.shape[0] != n * n:
            raise ValueError("bracket table must have dim^2 rows")
        table.data %= p
        table.eliminate_zeros()
        self.p = p
        self.dim = n
        self.table = table
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(n)]
        self.grading = grading
        self.filtration: Filtration | None = None
        self.pmap = None
        self.name = name
        self.metadata = dict(metadata or {})
        self._by_i = None
        self._ad = {}
        if check:
            self.validate(full=(check == "full") or n <= 260)

    # -- basic operations --------------------------------------------------

    @property
    def by_first(self) -> sp.csr_matrix:
        """(n, n*n) matrix: row i, column j*n+k holds c_ij^k."""
        if self._by_i is None:
            n = self.dim
            self._by_i = self.table.reshape((n, n * n)).tocsr()
        return self._by_i

    def basis(self, i: int) -> LieElement:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return LieElement(v, self)

    def element(self, coords) -> LieElement:
        if isinstance(coords, Mapping):
            v = np.zeros(self.dim, dtype=np.int64)
            for key, c in coords.items():
                v[self.labels.index(key) if isinstance(key, str) else key] += c
            coords = v
        return LieElement(coords, self)

    def bracket(self, x, y) -> np.ndarray:
        if isinstance(x, LieElement) or isinstance(y, LieElement):
            if isinstance(x, LieElement) and isinstance(y, LieElement) and x.parent is not y.parent:
                raise ParentMismatch("elements belong to different algebras")
            x = x.coords if isinstance(x, LieElement) else x
            y = y.coords if isinstance(y, LieElement) else y
        return to_dense(matmul(self.ad(x), np.asarray(y, dtype=np.int64), self.p)).reshape(-1)

    def ad_basis(self, i: int):
        A = self._ad.get(i)
        if A is None:
            n = self.dim
            row = self.table[i * n:(i + 1) * n]  # row j: [b_i, b_j]
            A = self._ad[i] = as_operator(row.T, self.p)
        return A

    def ad(self, x):
        """Matrix of ad x acting on column vectors."""
        if isinstance(x, LieElement):
            x = x.coords
        x = np.asarray(x, dtype=np.int64) % self.p
        nz = np.flatnonzero(x)
        if len(nz) == 1:
            A = self.ad_basis(int(nz[0]))
            return (A * int(x[nz[0]])) if x[nz[0]] != 1 else A
        n = self.dim
        flat = sp.csr_matrix(x[None, :]) @ self.by_first
        M = flat.reshape((n, n)).T  # [k, j]
        return as_operator(M, self.p)

    def ad_dense(self, x) -> np.ndarray:
        return to_dense(self.ad(x)) % self.p

    def ad_matrices(self) -> list:
        return [self.ad_basis(i) for i in range(self.dim)]

    def bracket_rows(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Brackets [X_a, Y_b] for all rows, returned as (len X * len Y, n)."""
        out = []
        for x in np.atleast_2d(X):
            out.append(to_dense(matmul(self.ad(x), np.atleast_2d(Y).T, self.p)).T)
        if not out:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.concatenate(out) % self.p

    def bracket_spaces(self, U: SubspaceBasis, V: SubspaceBasis) -> SubspaceBasis:
        """The subspace [U, V]."""
        acc = SubspaceBasis.zero(self.dim, self.p)
        if U.dim == 0 or V.dim == 0:
            return acc
        chunk = []
        rows = 0
        for u in U.vectors:
            block = to_dense(matmul(self.ad(u), V.vectors.T, self.p)).T
            chunk.append(block)
            rows += block.shape[0]
            if rows >= 4 * self.dim:
                acc = acc.span_with(acc.reduce(np.concatenate(chunk)))
                chunk, rows = [], 0
                if acc.dim == self.dim:
                    return acc
        if chunk:
            acc = acc.span_with(acc.reduce(np.concatenate(chunk)))
        return acc

    def full_space(self) -> SubspaceBasis:
        return SubspaceBasis.full(self.dim, self.p)

    def zero_space(self) -> SubspaceBasis:
        return SubspaceBasis.zero(self.dim, self.p)

    def span(self, vectors) -> SubspaceBasis:
        V = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
        if V.size == 0:
            return self.zero_space()
        return SubspaceBasis(V, self.p, self.dim)

    # -- validation -------------------------------------------------------

    def validate(self, full: bool = True, trials: int = 40, seed: int = 0) -> None:
        n, p = self.dim, self.p
        T = self.table.tocoo()
        i, j = np.divmod(T.row, n)
        A = sp.csr_matrix((T.data, (j * n + i, T.col)), shape=T.shape)
        S = (self.table + A).tocsr()
        S.data %= p
        S.eliminate_zeros()
        if S.nnz:
            r = S.tocoo().row[0]
            raise AntisymmetryViolation(f"[b{r // n}, b{r % n}] != -[b{r % n}, b{r // n}]")
        diag = self.table[[k * n + k for k in range(n)]]
        if diag.nnz:
            raise AntisymmetryViolation("[x, x] != 0 for a basis vector")
        if full:
            self._jacobi_full()
        else:
            self._jacobi_random(trials, seed)

    def _jacobi_full(self) -> None:
        n, p = self.dim, self.p
        C = self.table
        B1 = self.by_first
        for i in range(n):
            adT = sp.csr_matrix(to_dense(self.ad_basis(i)).T) if not sp.issparse(
                self.ad_basis(i)) else self.ad_basis(i).T.tocsr()
            # J(j,k) = [b_i,[b_j,b_k]] - [[b_i,b_j],b_k] - [b_j,[b_i,b_k]]
            first = (C @ adT).tocoo()  # row j*n+k, col l
            second = (adT @ B1).tocoo()  # row j, col k*n+l
            jj, kk = np.divmod(first.row, n)
            e1 = (jj * n + kk) * n + first.col
            kk2, ll2 = np.divmod(second.col, n)
            e2 = (second.row * n + kk2) * n + ll2
            e3 = (kk2 * n + second.row) * n + ll2  # [b_j,[b_i,b_k]] = -[[b_i,b_k],b_j]
            idx = np.concatenate([e1, e2, e3])
            val = np.concatenate([first.data, -second.data, second.data])
            tot = sp.coo_matrix((val % p, (np.zeros_like(idx), idx)), shape=(1, n**3)).tocsr()
            tot.sum_duplicates()
            tot.data %= p
            tot.eliminate_zeros()
            if tot.nnz:
                e = tot.indices[0]
                raise JacobiViolation(i, e // (n * n), (e // n) % n)

    def _jacobi_random(self, trials: int, seed: int) -> None:
        rng = np.random.default_rng(seed)
        n, p = self.dim, self.p
        for _ in range(trials):
            x, y, z = (rng.integers(0, p, n) for _ in range(3))
            a = self.bracket(x, self.bracket(y, z))
            b = self.bracket(y, self.bracket(z, x))
            c = self.bracket(z, self.bracket(x, y))
            if np.any((a + b + c) % p):
                raise JacobiViolation("random", "random", "random")

    # -- subobjects --------------------------------------------------------

    def is_subalgebra(self, V: SubspaceBasis) -> bool:
        return V.contains_subspace(self.bracket_spaces(V, V))

    def is_ideal(self, V: SubspaceBasis) -> bool:
        return V.contains_subspace(self.bracket_spaces(self.full_space(), V))

    def subalgebra(self, V: SubspaceBasis, name: str = "", check: bool = False) -> "LieAlgebra":
        """Lie algebra on the echelon basis of ``V``; ``metadata['embedding']`` maps it back."""
        d = V.dim
        rows, cols, vals = [], [], []
        B = V.vectors
        for a in range(d):
            br = to_dense(matmul(self.ad(B[a]), B.T, self.p)).T  # [B_a, B_b]
            if np.any(V.reduce(br)):
                raise PreconditionFailed("subspace is not closed under the bracket")
            coords = V.coordinates(br)
            nz_b, nz_c = np.nonzero(coords)
            rows.extend(a * d + nz_b)
            cols.extend(nz_c)
            vals.extend(coords[nz_b, nz_c])
        table = sp.csr_matrix((vals, (rows, cols)), shape=(d * d, d), dtype=np.int64)
        labels = [_vector_label(self, v) for v in B]
        sub = LieAlgebra(table, self.p, labels, name=name, check=check)
        sub.metadata["embedding"] = B
        if self.grading is not None and not self.grading.modulus:
            degs = []
            for v in B:
                ds = {self.grading.degrees[i] for i in np.flatnonzero(v)}
                degs.append(ds.pop() if len(ds) == 1 else None)
            if all(dg is not None for dg in degs):
                sub.grading = Grading(tuple(degs))
        return sub

    def center(self) -> SubspaceBasis:
        solver = ConstraintSolver(self.dim, self.p)
        B1T = self.by_first.T.tocsr()  # row j*n+k, col i
        step = max(1, 4096 // max(1, self.dim)) * self.dim
        for start in range(0, self.dim * self.dim, step):
            solver.add(B1T[start:start + step])
            if solver.dim == 0:
                break
        return solver.solutions()

    def derived(self, V: SubspaceBasis | None = None) -> SubspaceBasis:
        if V is None:
            return _row_span(self.table, self.dim, self.p)
        return self.bracket_spaces(V, V)

    def lie_generators(self, seed: int = 0, count: int = 2) -> list[np.ndarray]:
        """A few random elements, extended until they generate the algebra."""
        rng = np.random.default_rng(seed)
        gens = [rng.integers(0, self.p, self.dim) for _ in range(count)]
        S = closure(self, gens, "subalgebra")
        while S.dim < self.dim:
            idx = S.complement_indices()
            v = np.zeros(self.dim, dtype=np.int64)
            v[idx[0]] = 1
            gens.append(v)
            S = closure(self, gens, "subalgebra")
        return gens

    # -- serialisation -----------------------------------------------------

    def to_dict(self) -> dict:
        n = self.dim
        T = self.table.tocoo()
        entries: dict[tuple[int, int], list] = {}
        for r, c, v in zip(T.row, T.col, T.data):
            i, j = divmod(int(r), n)
            if i < j:
                entries.setdefault((i, j), []).append([int(c), str(int(v))])
        brackets = [[i, j, sorted(entries[(i, j)])] for (i, j) in sorted(entries)]
        out = {"p": self.p, "k": 1, "dim": n, "labels": self.labels, "brackets": brackets}
        if self.name:
            out["name"] = self.name
        if self.grading is not None:
            out["grading"] = list(self.grading.degrees)
            if self.grading.modulus:
                out["grading_modulus"] = self.grading.modulus
        meta = {k: v for k, v in self.metadata.items() if _jsonable(v)}
        if meta:
            out["metadata"] = meta
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def structure_constants(self) -> dict[tuple[int, int], dict[int, int]]:
        n = self.dim
        T = self.table.tocoo()
        out: dict[tuple[int, int], dict[int, int]] = {}
        for r, c, v in zip(T.row, T.col, T.data):
            i, j = divmod(int(r), n)
            out.setdefault((i, j), {})[int(c)] = int(v)
        return out

    def __repr__(self):
        return f"LieAlgebra({self.name or '?'}, dim={self.dim}, p={self.p})"


def _jsonable(v) -> bool:
    try:
        json.dumps(v)
        return True
    except TypeError:
        return False


def _vector_label(L: LieAlgebra, v: np.ndarray) -> str:
    nz = np.flatnonzero(v)
    if len(nz) == 1 and v[nz[0]] == 1:
        return L.labels[nz[0]]
    return " + ".join(f"{v[i]}*{L.labels[i]}" for i in nz[:4]) + (" + ..." if len(nz) > 4 else "")


def _row_span(M: sp.spmatrix, n: int, p: int, chunk: int | None = None) -> SubspaceBasis:
    M = sp.csr_matrix(M)
    keep = np.flatnonzero(np.diff(M.indptr))
    M = M[keep]
    acc = SubspaceBasis.zero(n, p)
    chunk = chunk or max(4 * n, 256)
    for start in range(0, M.shape[0], chunk):
        block = M[start:start + chunk].toarray() % p
        block = acc.reduce(block)
        block = block[np.any(block, axis=1)]
        if block.shape[0]:
            acc = acc.span_with(block)
        if acc.dim == n:
            break
    return acc


def from_structure_constants(table, p: int, labels: Sequence[str] | None = None,
                             dim: int | None = None, check: bool | str = True, **kw) -> LieAlgebra:
    """Build an algebra from ``{(i, j): {k: c}}`` (both orders or i<j only).

    With ``i<j`` entries only, the table is completed antisymmetrically.  If
    both orders are present they must agree up to sign.
    """
    if isinstance(table, Mapping):
        items = list(table.items())
        n = dim if dim is not None else (len(labels) if labels is not None else 1 + max(
            [max(i, j, *(v.keys() or [0])) for (i, j), v in items] or [0]))
        explicit = {(i, j) for (i, j), _ in items}
        rows, cols, vals = [], [], []
        for (i, j), coeffs in items:
            if not (0 <= i < n and 0 <= j < n):
                raise IndexError(f"basis index out of range in ({i}, {j})")
            for k, c in coeffs.items():
                if not 0 <= k < n:
                    raise IndexError(f"basis index {k} out of range")
                c = int(c) % p
                if not c:
                    continue
                rows.append(i * n + j)
                cols.append(k)
                vals.append(c)
                if (j, i) not in explicit:
                    if i == j:
                        raise AntisymmetryViolation(f"[b{i}, b{i}] != 0")
                    rows.append(j * n + i)
                    cols.append(k)
                    vals.append((-c) % p)
        T = sp.coo_matrix((vals, (rows, cols)), shape=(n * n, n), dtype=np.int64).tocsr()
        T.sum_duplicates()
    else:
        T = sp.csr_matrix(table)
    return LieAlgebra(T, p, labels, check=check, **kw)


def from_json(data: str | dict, check: bool | str = True) -> LieAlgebra:
    if isinstance(data, str):
        data = json.loads(data)
    if int(data.get("k", 1)) != 1:
        raise ValueError("only prime-field structure constants are supported")
    p, n = int(data["p"]), int(data["dim"])
    table = {}
    for idx, entry in enumerate(data["brackets"]):
        try:
            i, j, terms = entry
            if not i < j:
                raise ValueError("bracket entries must have i < j")
            table[(int(i), int(j))] = {int(k): int(c) for k, c in terms}
        except (TypeError, ValueError) as exc:
            raise ValueError(f"malformed bracket entry #{idx}: {entry!r} ({exc})") from exc
    L = from_structure_constants(table, p, data.get("labels"), dim=n, check=check,
                                 name=data.get("name", ""))
    if "grading" in data:
        L.grading = Grading(tuple(data["grading"]), data.get("grading_modulus"))
    L.metadata.update(data.get("metadata", {}))
    return L


# ---------------------------------------------------------------------------
# closures and series

def closure(L: LieAlgebra, seed, mode: str = "subalgebra") -> SubspaceBasis:
    """Smallest subalgebra or ideal containing the seed vectors."""
    seed = [s.coords if isinstance(s, LieElement) else np.asarray(s) for s in seed]
    if not seed:
        raise ValueError("seed must be nonempty")
    S = L.span(np.array(seed))
    if mode == "ideal":
        gens = L.ad_matrices()
        return spin(S.vectors, gens, L.p) if S.dim else S
    if mode != "subalgebra":
        raise ValueError(mode)
    frontier = S.vectors
    while frontier.shape[0]:
        new = L.bracket_rows(frontier, S.vectors)
        new = S.reduce(new)
        new = new[np.any(new, axis=1)]
        if not new.shape[0]:
            break
        R, _ = rref(new, L.p)
        S = S.span_with(R)
        frontier = R
    return S


def invariant_subspaces(L: LieAlgebra) -> dict:
    """Centre, derived and lower central series, solvability and nilpotency."""
    derived_series = [L.full_space()]
    while True:
        nxt = L.derived(derived_series[-1]) if len(derived_series) > 1 else L.derived()
        if nxt.dim == derived_series[-1].dim:
            break
        derived_series.append(nxt)
        if nxt.dim == 0:
            break
    lower = [L.full_space()]
    while True:
        nxt = L.bracket_spaces(L.full_space(), lower[-1])
        if nxt.dim == lower[-1].dim:
            break
        lower.append(nxt)
        if nxt.dim == 0:
            break
    return {
        "center": L.center(),
        "derived_series": derived_series,
        "lower_central_series": lower,
        "is_solvable": derived_series[-1].dim == 0,
        "is_nilpotent": lower[-1].dim == 0,
    }


def derivation_algebra(L: LieAlgebra, limit: int | None = None) -> LieAlgebra:
    """Der L as a Lie algebra; basis matrices in ``metadata['matrices']``."""
    n, p = L.dim, L.p
    if n > (limit or dim_limit()):
        raise DimensionLimitExceeded(f"dim {n} exceeds derivation limit {limit or dim_limit()}")
    # unknown D as vector d[k*n + j] = D_{k j} (D b_j = sum_k D_kj b_k)
    solver = ConstraintSolver(n * n, p)
    ads = [to_dense(L.ad_basis(i)) for i in range(n)]
    for i in range(n):
        rows = []
        for j in range(i + 1, n):
            # D[b_i,b_j] - [D b_i, b_j] - [b_i, D b_j] = 0, n equations indexed by l
            E = np.zeros((n, n, n), dtype=np.int64)  # (l, k, col)
            cij = to_dense(L.bracket_rows(np.eye(n, dtype=np.int64)[i], np.eye(n, dtype=np.int64)[j]))[0]
            for m in np.flatnonzero(cij):
                E[:, :, m] += 0
                # D[b_i,b_j] = sum_m c_ij^m D b_m -> coefficient of D_{l m}
                E[np.arange(n), np.arange(n), m] += cij[m]
            # [D b_i, b_j] = sum_k D_ki [b_k, b_j] = -sum_k D_ki ad_j b_k
            E[:, :, i] += ads[j]
            # [b_i, D b_j] = sum_k D_kj ad_i b_k
            E[:, :, j] -= ads[i]
            rows.append(E.reshape(n, n * n) % p)
        if rows:
            solver.add(np.concatenate(rows))
    D = solver.solutions()
    mats = [v.reshape(n, n) for v in D.vectors]
    return matrix_lie_algebra(mats, p, name=f"Der({L.name})")


def matrix_lie_algebra(mats: Sequence[np.ndarray], p: int, name: str = "",
                       labels: Sequence[str] | None = None) -> LieAlgebra:
    """Lie algebra spanned by linearly independent matrices, commutator bracket."""
    mats = [to_dense(M) % p for M in mats]
    d = len(mats)
    if d == 0:
        out = LieAlgebra(sp.csr_matrix((0, 0), dtype=np.int64), p, [], name=name, check=False)
        out.metadata["matrices"] = []
        return out
    flat = np.array([M.reshape(-1) for M in mats])
    span = SubspaceBasis(flat, p)
    if span.dim != d:
        raise ValueError("matrices are linearly dependent")
    # coordinates w.r.t. the given matrices: solve via pivot columns of their span
    A = flat.T
    rows, cols, vals = [], [], []
    piv_solve = _coordinate_solver(flat, p)
    for a in range(d):
        for b in range(a + 1, d):
            C = (matmul(mats[a], mats[b], p) - matmul(mats[b], mats[a], p)) % p
            c = piv_solve(C.reshape(-1))
            if c is None:
                raise PreconditionFailed("matrices do not span a Lie algebra")
            for k in np.flatnonzero(c):
                rows += [a * d + b, b * d + a]
                cols += [k, k]
                vals += [int(c[k]), int(-c[k]) % p]
    table = sp.csr_matrix((vals, (rows, cols)), shape=(d * d, d), dtype=np.int64)
    out = LieAlgebra(table, p, labels or [f"D{i}" for i in range(d)], name=name, check=False)
    out.metadata["matrices"] = mats
    return out


def _coordinate_solver(flat: np.ndarray, p: int):
    """Return v -> coordinates of v in the rows of ``flat`` (or None)."""
    d = flat.shape[0]
    aug = np.concatenate([flat % p, np.eye(d, dtype=np.int64)], axis=1)
    R, piv = rref(aug, p)
    m = flat.shape[1]
    piv_cols = [c for c in piv if c < m]
    k = len(piv_cols)
    top = R[:k]  # rows: combination of input rows (last d cols) giving echelon rows

    def solve(v):
        v = np.asarray(v, dtype=np.int64) % p
        coef = v[piv_cols]
        rem = (v - matmul(coef, top[:, :m], p)) % p
        if np.any(rem):
            return None
        return matmul(coef, top[:, m:], p) % p

    return solve


# ---------------------------------------------------------------------------
# Killing form

@dataclass
class BilinearForm:
    gram: np.ndarray
    p: int

    def __call__(self, x, y) -> int:
        return int(matmul(matmul(np.asarray(x), self.gram, self.p), np.asarray(y), self.p))

    def is_zero(self) -> bool:
        return not np.any(self.gram)

    def is_symmetric(self) -> bool:
        return np.array_equal(self.gram, self.gram.T)


def killing_form(L: LieAlgebra) -> BilinearForm:
    n, p = L.dim, L.p
    B1 = L.by_first  # row i = (ad_i)^T flattened as [j, k]
    coo = B1.tocoo()
    j, k = np.divmod(coo.col, n)
    B2 = sp.csr_matrix((coo.data, (coo.row, k * n + j)), shape=B1.shape)  # ad_i flattened
    G = (B1 @ B2.T).toarray() % p
    return BilinearForm(G.astype(np.int64), p)


def radical_of_form(form: BilinearForm) -> SubspaceBasis:
    return nullspace(form.gram, form.p)


# ---------------------------------------------------------------------------
# simplicity and the radical

def adjoint_module_test(L: LieAlgebra, submodule_of: SubspaceBasis | None = None,
                        acting: Sequence | None = None, seed: int = 0):
    """Irreducibility of ``submodule_of`` (default L) under ad of ``acting``.

    Uses a few random elements of the acting algebra as module generators;
    a proper invariant subspace found that way is re-checked against the
    whole acting basis before being reported.
    """
    p = L.p
    V = submodule_of if submodule_of is not None else L.full_space()
    acting = list(acting) if acting is not None else [row for row in np.eye(L.dim, dtype=np.int64)]
    rng = np.random.default_rng(seed)

    def restricted(x):
        img = to_dense(matmul(L.ad(x), V.vectors.T, p)).T
        return V.coordinates(img).T % p  # columns are images in V-coordinates

    all_ops = None
    k = 3
    for attempt in range(8):
        xs = [sum(int(c) * a for c, a in zip(rng.integers(0, p, len(acting)), acting)) % p
              for _ in range(k)]
        gens = [restricted(x) for x in xs]
        res = module_irreducible(gens, p, seed=seed + attempt)
        if res.irreducible:
            return res
        W = res.submodule
        if all_ops is None:
            all_ops = [restricted(a) for a in acting]
        if all(not np.any(W.reduce(matmul(g, W.vectors.T, p).T)) for g in all_ops):
            res.submodule = SubspaceBasis(matmul(W.vectors, V.vectors, p), p, L.dim)
            return res
        k += 2
    res = module_irreducible(all_ops, p, seed=seed)
    if res.submodule is not None:
        res.submodule = SubspaceBasis(matmul(res.submodule.vectors, V.vectors, p), p, L.dim)
    return res


def is_simple(L: LieAlgebra, seed: int = 0) -> bool:
    if L.dim <= 1:
        return False
    if L.derived().dim != L.dim:
        return False
    return adjoint_module_test(L, seed=seed).irreducible


def minimal_ideal(L: LieAlgebra, inside: SubspaceBasis | None = None, seed: int = 0) -> SubspaceBasis:
    """A minimal ideal of L contained in the ideal ``inside`` (default L)."""
    V = inside if inside is not None else L.full_space()
    while True:
        res = adjoint_module_test(L, V, seed=seed)
        if res.irreducible:
            return V
        V = res.submodule


def solvable_radical(L: LieAlgebra, limit: int | None = None, seed: int = 0) -> SubspaceBasis:
    if L.dim > (limit or dim_limit()):
        raise DimensionLimitExceeded(f"dim {L.dim} exceeds radical limit {limit or dim_limit()}")
    if L.dim == 0:
        return L.zero_space()
    A = _abelian_ideal(L, seed)
    if A is None:
        return L.zero_space()
    Q = quotient(L, A)
    R = solvable_radical(Q.algebra, limit, seed)
    pre = Q.preimage(R)
    return pre


def _abelian_ideal(L: LieAlgebra, seed: int) -> SubspaceBasis | None:
    z = L.center()
    if z.dim:
        return z
    search = L.full_space()
    while search.dim:
        I = minimal_ideal(L, search, seed)
        if L.bracket_spaces(I, I).dim == 0:
            return I
        # abelian minimal ideals commute with the perfect minimal ideal I
        C = _centralizer(L, I)
        search = C.intersection(search)
    return None


def _centralizer(L: LieAlgebra, V: SubspaceBasis) -> SubspaceBasis:
    solver = ConstraintSolver(L.dim, L.p)
    for v in V.vectors:
        solver.add(L.ad(v))  # [v, x] = 0
    return solver.solutions()


def centralizer(L: LieAlgebra, V: SubspaceBasis) -> SubspaceBasis:
    return _centralizer(L, V)


def normalizer(L: LieAlgebra, V: SubspaceBasis) -> SubspaceBasis:
    """{x : [x, V] in V}."""
    p = L.p
    solver = ConstraintSolver(L.dim, p)
    comp = V.complement_indices()
    for v in V.vectors:
        # [x, v] = -ad(v) x must reduce to zero modulo V
        M = to_dense(L.ad(v))
        red = V.reduce(M.T).T  # reduce each column image
        solver.add(red[comp] if comp else red[:0])
    return solver.solutions()


# ---------------------------------------------------------------------------
# quotients

@dataclass
class Quotient:
    algebra: LieAlgebra
    ideal: SubspaceBasis
    transversal: list[int]

    def project(self, v) -> np.ndarray:
        v = np.atleast_2d(np.asarray(v, dtype=np.int64))
        red = self.ideal.reduce(v)
        out = red[:, self.transversal]
        return out[0] if out.shape[0] == 1 else out

    def section(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64)
        v = np.zeros(c.shape[:-1] + (self.ideal.ambient_dim,), dtype=np.int64)
        v[..., self.transversal] = c
        return v

    def preimage(self, W: SubspaceBasis) -> SubspaceBasis:
        if W.dim == 0:
            return self.ideal
        return self.ideal.span_with(self.section(W.vectors))

    @property
    def projection(self) -> np.ndarray:
        return self.project(np.eye(self.ideal.ambient_dim, dtype=np.int64)).T


def quotient(L: LieAlgebra, I: SubspaceBasis, name: str = "") -> Quotient:
    if not L.is_ideal(I):
        raise NotAnIdeal("subspace is not an ideal")
    comp = I.complement_indices()
    d = len(comp)
    rows, cols, vals = [], [], []
    E = np.eye(L.dim, dtype=np.int64)[comp]
    for a in range(d):
        br = to_dense(matmul(L.ad(E[a]), E.T, L.p)).T
        red = I.reduce(br)[:, comp]
        nz_b, nz_c = np.nonzero(red)
        rows.extend(a * d + nz_b)
        cols.extend(nz_c)
        vals.extend(red[nz_b, nz_c])
    table = sp.csr_matrix((vals, (rows, cols)), shape=(d * d, d), dtype=np.int64)
    Q = LieAlgebra(table, L.p, [L.labels[c] for c in comp], name=name or f"{L.name}/I", check=False)
    return Quotient(Q, I, comp)


# ---------------------------------------------------------------------------
# filtrations and gradings

def _quotient_action(L: LieAlgebra, acting: SubspaceBasis, top: SubspaceBasis,
                     bottom: SubspaceBasis) -> list[np.ndarray]:
    """Matrices of ad(acting) on top/bottom in transversal coordinates."""
    p = L.p
    trans = _transversal(top, bottom)
    full = np.concatenate([trans, bottom.vectors]) if bottom.dim else trans
    solver = _coordinate_solver(full, p)
    mats = []
    for a in acting.vectors:
        imgs = to_dense(matmul(L.ad(a), trans.T, p)).T
        M = np.zeros((len(trans), len(trans)), dtype=np.int64)
        for col, v in enumerate(imgs):
            c = solver(v)
            if c is None:
                raise PreconditionFailed("subspace not stable under the acting algebra")
            M[:, col] = c[: len(trans)]
        mats.append(M)
    return mats


def _transversal(top: SubspaceBasis, bottom: SubspaceBasis) -> np.ndarray:
    """Rows of ``top`` completing a basis of ``bottom`` to one of ``top``."""
    acc = bottom
    picked = []
    for v in top.vectors:
        r = acc.reduce(v)
        if np.any(r):
            picked.append(v)
            acc = acc.span_with(v[None, :])
    return np.array(picked, dtype=np.int64).reshape(-1, top.ambient_dim)


def is_maximal_subalgebra(L: LieAlgebra, L0: SubspaceBasis, max_points: int = 4000) -> tuple[bool, bool]:
    """(maximal?, exhaustive?) for a proper subalgebra ``L0``.

    Every subalgebra strictly containing L0 contains L0 + Fv for some v, so
    closing L0 + Fv over all projective points v of L/L0 decides maximality;
    when there are too many points only the basis complement is tried.
    """
    if not L.is_subalgebra(L0) or L0.dim >= L.dim:
        return False, True
    comp = L0.complement_indices()
    c = len(comp)
    p = L.p
    npts = (p**c - 1) // (p - 1)
    if npts <= max_points:
        vecs = _projective_points(c, p)
        exhaustive = True
    else:
        vecs = np.eye(c, dtype=np.int64)
        exhaustive = False
    for w in vecs:
        v = np.zeros(L.dim, dtype=np.int64)
        v[comp] = w
        S = closure(L, list(L0.vectors) + [v], "subalgebra")
        if S.dim < L.dim:
            return False, True
    return True, exhaustive


def _projective_points(c: int, p: int) -> np.ndarray:
    pts = []
    for lead in range(c):
        for tail in itertools.product(range(p), repeat=c - lead - 1):
            v = [0] * lead + [1] + list(tail)
            pts.append(v)
    return np.array(pts, dtype=np.int64)


def standard_filtration(L: LieAlgebra, L0: SubspaceBasis, Lm1: SubspaceBasis,
                        check_maximal: bool = True) -> Filtration:
    """Weisfeiler's filtration attached to (L_(0), L_(-1))."""
    p = L.p
    if not Lm1.contains_subspace(L0) or L0.dim >= Lm1.dim:
        raise PreconditionFailed("L_(0) must be a proper subspace of L_(-1)")
    if not Lm1.contains_subspace(L.bracket_spaces(L0, Lm1)):
        raise PreconditionFailed("[L_(0), L_(-1)] is not contained in L_(-1)")
    if check_maximal:
        maximal, _ = is_maximal_subalgebra(L, L0)
        if not maximal:
            raise PreconditionFailed("L_(0) is not a maximal subalgebra")
    mats = _quotient_action(L, L0, Lm1, L0)
    if Lm1.dim - L0.dim > 1 and not module_irreducible(mats, p).irreducible:
        raise PreconditionFailed("L_(-1)/L_(0) is not an irreducible L_(0)-module")
    spaces = {0: L0, -1: Lm1}
    i = 0
    while spaces[i].dim:
        cur = spaces[i]
        solver = ConstraintSolver(cur.dim, p)
        for y in Lm1.vectors:
            imgs = to_dense(matmul(L.ad(y), cur.vectors.T, p)).T  # [y, b] = -[b, y]
            solver.add(cur.reduce(imgs).T)
        sol = solver.solutions()
        nxt = SubspaceBasis(matmul(sol.vectors, cur.vectors, p), p, L.dim) if sol.dim else L.zero_space()
        if nxt.dim == cur.dim:
            break  # not separating; stop at the stable term
        i += 1
        spaces[i] = nxt
    hi = i - 1 if spaces[i].dim == 0 else i
    if spaces[i].dim == 0:
        del spaces[i]
    j = -1
    while spaces[j].dim < L.dim:
        nxt = L.bracket_spaces(spaces[j], Lm1) + spaces[j]
        if nxt.dim == spaces[j].dim:
            break
        j -= 1
        spaces[j] = nxt
    return Filtration(spaces, j, hi)


def filtration_from_degrees(L: LieAlgebra, degrees: Sequence[int] | None = None) -> Filtration:
    """Filtration L_(i) = span of basis vectors of degree >= i."""
    degrees = list(degrees if degrees is not None else L.grading.degrees)
    lo, hi = min(degrees), max(degrees)
    spaces = {i: SubspaceBasis.spanned_by_indices([k for k, d in enumerate(degrees) if d >= i], L.dim, L.p)
              for i in range(lo, hi + 1)}
    return Filtration(spaces, lo, hi)


def associated_graded(L: LieAlgebra, f: Filtration, name: str = "") -> LieAlgebra:
    """gr L on transversal bases, with its grading attached."""
    p = L.p
    trans = {}
    for i in range(f.lo, f.hi + 1):
        trans[i] = _transversal(f[i], f[i + 1])
    order = [(i, v) for i in range(f.lo, f.hi + 1) for v in trans[i]]
    degs = [i for i, _ in order]
    basis = np.array([v for _, v in order], dtype=np.int64)
    n = len(order)
    offsets = {}
    pos = 0
    for i in range(f.lo, f.hi + 1):
        offsets[i] = pos
        pos += len(trans[i])
    solvers = {}
    for i in range(f.lo, f.hi + 1):
        full = np.concatenate([trans[i], f[i + 1].vectors]) if f[i + 1].dim else trans[i]
        solvers[i] = _coordinate_solver(full, p)
    rows, cols, vals = [], [], []
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            s = degs[a] + degs[b]
            if s > f.hi:
                continue
            br = L.bracket(basis[a], basis[b])
            s_eff = max(s, f.lo)
            if s < f.lo:
                # degree below the bottom: component lands in L = L_(lo)
                s_eff = f.lo
            c = solvers[s_eff](br)
            if c is None:
                raise PreconditionFailed("bracket leaves the filtration term")
            if s < f.lo:
                continue  # gr_s = 0 for s below the range
            k = len(trans[s_eff])
            for t in np.flatnonzero(c[:k]):
                rows.append(a * n + b)
                cols.append(offsets[s_eff] + t)
                vals.append(int(c[t]))
    table = sp.csr_matrix((vals, (rows, cols)), shape=(n * n, n), dtype=np.int64)
    G = LieAlgebra(table, p, [f"gr{d}:{_vector_label(L, v)}" for d, v in order],
                   grading=Grading(tuple(degs)), name=name or f"gr {L.name}", check=False)
    G.metadata["transversal"] = basis
    return G


def weisfeiler_ideal(G: LieAlgebra) -> SubspaceBasis:
    """Largest ideal of the graded algebra G inside the sum of G_i, i < -1."""
    if G.grading is None:
        raise PreconditionFailed("grading required")
    p = G.p
    M = SubspaceBasis.spanned_by_indices([k for k, d in enumerate(G.grading.degrees) if d < -1], G.dim, p)
    while M.dim:
        solver = ConstraintSolver(M.dim, p)
        for i in range(G.dim):
            imgs = to_dense(matmul(G.ad_basis(i), M.vectors.T, p)).T
            solver.add(M.reduce(imgs).T)
            if solver.dim == 0:
                break
        sol = solver.solutions()
        nxt = SubspaceBasis(matmul(sol.vectors, M.vectors, p), p, G.dim) if sol.dim else G.zero_space()
        if nxt.dim == M.dim:
            break
        M = nxt
    return M


def check_graded_conditions(G: LieAlgebra) -> dict[str, bool]:
    """Evaluate the graded conditions g1-g4 on a Z-graded algebra."""
    if G.grading is None:
        raise PreconditionFailed("grading required")
    p = G.p
    comp = {d: G.grading.component(d, p) for d in G.grading.support}

    def C(d):
        return comp.get(d, G.zero_space())

    lo, hi = min(comp), max(comp)
    g0, gm1 = C(0), C(-1)
    out = {}
    # g1
    if gm1.dim == 0:
        out["g1"] = False
    else:
        mats = [G.ad_dense(x)[np.ix_(gm1.pivots, gm1.pivots)] for x in g0.vectors]
        flat = np.array([m.reshape(-1) for m in mats]) if mats else np.zeros((0, gm1.dim**2), dtype=np.int64)
        faithful = (SubspaceBasis(flat, p, gm1.dim**2).dim == g0.dim) if mats else True
        irreducible = gm1.dim == 1 or (bool(mats) and module_irreducible(mats, p).irreducible)
        if gm1.dim == 1 and not mats:
            irreducible = True
        out["g1"] = bool(faithful and irreducible)
    # g2
    ok = True
    for i in range(1, -lo + 2):
        if G.bracket_spaces(C(-i + 1), gm1) != C(-i):
            ok = False
            break
    out["g2"] = ok
    # g3
    ok = True
    for i in range(1, hi + 1):
        Gi = C(i)
        if not Gi.dim:
            continue
        solver = ConstraintSolver(Gi.dim, p)
        for y in gm1.vectors:
            solver.add(to_dense(matmul(G.ad(y), Gi.vectors.T, p)))
        if solver.dim:
            ok = False
            break
    out["g3"] = ok
    # g4
    ok = True
    pos = [C(k) for k in range(1, hi + 1)]
    for i in range(1, -lo + 1):
        Gi = C(-i)
        if not Gi.dim:
            continue
        solver = ConstraintSolver(Gi.dim, p)
        for Pk in pos:
            for y in Pk.vectors:
                solver.add(to_dense(matmul(G.ad(y), Gi.vectors.T, p)))
        if solver.dim:
            ok = False
            break
    out["g4"] = ok
    return out


# ---------------------------------------------------------------------------
# classification-theorem side conditions

@dataclass
class Verdict:
    passed: bool
    clauses: dict[str, bool]
    failing: str | None = None
    notes: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.passed


def _weight_spaces(L: LieAlgebra, H: SubspaceBasis) -> tuple[dict[tuple, SubspaceBasis], bool]:
    """GF(p)-weight spaces of ad H; second value says whether they fill L."""
    p = L.p
    ops = [L.ad_dense(h) for h in H.vectors]
    pieces = {(): L.full_space()}
    for A in ops:
        nxt = {}
        for w, V in pieces.items():
            M = to_dense(matmul(A, V.vectors.T, p))[V.pivots, :]
            for lam in range(p):
                K = nullspace((M - lam * np.eye(V.dim, dtype=np.int64)) % p, p)
                if K.dim:
                    nxt[w + (lam,)] = SubspaceBasis(matmul(K.vectors, V.vectors, p), p, L.dim)
        pieces = nxt
    total = sum(V.dim for V in pieces.values())
    return pieces, total == L.dim


def seligman_mills_check(L: LieAlgebra, H: SubspaceBasis) -> Verdict:
    """Clauses (1), (2a)-(2c) of the Seligman-Mills characterisation."""
    p = L.p
    clauses: dict[str, bool] = {}
    notes = []
    clauses["1"] = L.derived().dim == L.dim and L.center().dim == 0
    abelian = L.bracket_spaces(H, H).dim == 0
    self_norm = normalizer(L, H).dim == H.dim
    clauses["2:abelian_cartan"] = bool(abelian and self_norm)
    spaces, covers = _weight_spaces(L, H)
    zero = tuple([0] * H.dim)
    clauses["2a"] = bool(covers and spaces.get(zero, L.zero_space()) == H)
    if not covers:
        notes.append("ad H is not diagonalisable over GF(p)")
    roots = [w for w in spaces if w != zero]
    ok_b = True
    for a in roots:
        neg = tuple((-x) % p for x in a)
        if neg in spaces:
            d = L.bracket_spaces(spaces[a], spaces[neg]).dim
        else:
            d = 0
        if d != 1:
            ok_b = False
            notes.append(f"dim [L_a, L_-a] = {d} for a = {a}")
            break
    clauses["2b"] = ok_b
    ok_c = True
    for a in roots:
        for b in roots:
            if all(tuple((x + k * y) % p for x, y in zip(a, b)) in spaces for k in range(p)):
                ok_c = False
                notes.append(f"root string a + k b covers F_p for a = {a}, b = {b}")
                break
        if not ok_c:
            break
    clauses["2c"] = ok_c
    order = ["1", "2:abelian_cartan", "2a", "2b", "2c"]
    failing = next((c for c in order if not clauses[c]), None)
    return Verdict(failing is None, clauses, failing, notes)


_CLASSICAL_DIMS = None


def _classical_dims(p: int) -> dict[int, list[str]]:
    out: dict[int, list[str]] = {}
    for l in range(1, 12):
        d = l * (l + 2)
        if (l + 1) % p == 0:
            out.setdefault(d - 1, []).append(f"psl({l + 1})")
        else:
            out.setdefault(d, []).append(f"A{l}")
        if l >= 2:
            out.setdefault(l * (2 * l + 1), []).append(f"B{l}/C{l}")
        if l >= 4:
            out.setdefault(l * (2 * l - 1), []).append(f"D{l}")
    for d, t in [(14, "G2"), (52, "F4"), (78, "E6"), (133, "E7"), (248, "E8")]:
        out.setdefault(d, []).append(t)
    return out


def classify_reductive_quotient(Q: LieAlgebra, seed: int = 0) -> list[str]:
    """Fingerprint L_(0)/L_(1) against the recognition-theorem list.

    Returns a list of component descriptions; raises UnrecognizedQuotient if
    some component matches no fingerprint.  This is a necessary-condition
    screen (dimension, centre, derived algebra, simplicity), not an
    isomorphism test.
    """
    p = Q.p
    if Q.dim == 0:
        return []
    der = Q.derived()
    z = Q.center()
    if der.dim == 0:
        return [f"abelian({Q.dim})"]
    n2 = {k * k: k for k in range(2, 30)}
    # gl(n), sl(n), pgl(n) with p | n as single indecomposable ideals
    if Q.dim in n2 and n2[Q.dim] % p == 0 and z.dim == 1 and der.dim == Q.dim - 1 and der.contains_subspace(z):
        return [f"gl({n2[Q.dim]})"]
    if Q.dim + 1 in n2 and n2[Q.dim + 1] % p == 0:
        k = n2[Q.dim + 1]
        if der.dim == Q.dim and z.dim == 1:
            return [f"sl({k})"]
        if z.dim == 0 and der.dim == Q.dim - 1:
            return [f"pgl({k})"]
    # otherwise expect centre (+) semisimple part with simple components
    parts: list[str] = []
    if z.dim:
        if (z + der).dim != Q.dim or z.intersection(der).dim:
            raise UnrecognizedQuotient(f"centre and derived algebra do not split (dim {Q.dim})")
        parts.append(f"abelian({z.dim})")
    rest = der
    dims = _classical_dims(p)
    while rest.dim:
        I = minimal_ideal(Q, rest, seed)
        sub = Q.subalgebra(I)
        if not is_simple(sub, seed) or sub.dim not in dims:
            raise UnrecognizedQuotient(f"component of dim {sub.dim} matches no classical fingerprint")
        parts.append("/".join(dims[sub.dim]))
        C = _centralizer(Q, I)
        rest = rest.intersection(C)
        if rest.dim + I.dim != der.dim and rest.dim == der.dim:
            raise UnrecognizedQuotient("semisimple part is not a direct sum of simple ideals")
    return parts


def recognition_check(L: LieAlgebra, f: Filtration, seed: int = 0) -> Verdict:
    """Clauses (a)-(e) of the recognition theorem for a filtration of L."""
    p = L.p
    clauses: dict[str, bool] = {}
    notes: list[str] = []
    s_prime, s = f.depth, f.height
    clauses["a"] = s >= 1 and s_prime >= 1 and s_prime <= s
    if clauses["a"] or f[1].dim:
        L0, L1 = f[0], f[1]
        sub = L.subalgebra(L0)
        ideal = SubspaceBasis(np.atleast_2d(L0.coordinates(L1.vectors)).reshape(-1, L0.dim) if L1.dim
                              else np.zeros((0, L0.dim), dtype=np.int64), p, L0.dim)
        Q = quotient(sub, ideal).algebra
        parts = classify_reductive_quotient(Q, seed)
        notes.append("L_(0)/L_(1) ~ " + " + ".join(parts) + " (fingerprint match)")
        clauses["b"] = True
    else:
        clauses["b"] = False
    # c
    Lm1, L0 = f[-1], f[0]
    if Lm1.dim - L0.dim <= 1:
        clauses["c"] = Lm1.dim > L0.dim
    else:
        mats = _quotient_action(L, L0, Lm1, L0)
        clauses["c"] = module_irreducible(mats, p).irreducible
    # d: j <= 0
    ok = True
    L1 = f[1]
    for j in range(f.lo, 1):
        Lj, Lj1, Lj2 = f[j], f[j + 1], f[j + 2]
        solver = ConstraintSolver(Lj.dim, p)
        for y in L1.vectors:
            imgs = to_dense(matmul(L.ad(y), Lj.vectors.T, p)).T
            solver.add(Lj2.reduce(imgs).T)
        sol = solver.solutions()
        if sol.dim:
            xs = matmul(sol.vectors, Lj.vectors, p)
            if not Lj1.contains_subspace(SubspaceBasis(xs, p, L.dim)):
                ok = False
                notes.append(f"clause (d) fails at j = {j}")
                break
    clauses["d"] = ok
    # e: j >= 0
    ok = True
    for j in range(0, f.hi + 1):
        Lj, Lj1 = f[j], f[j + 1]
        solver = ConstraintSolver(Lj.dim, p)
        for y in Lm1.vectors:
            imgs = to_dense(matmul(L.ad(y), Lj.vectors.T, p)).T
            solver.add(Lj.reduce(imgs).T)
        sol = solver.solutions()
        if sol.dim:
            xs = matmul(sol.vectors, Lj.vectors, p)
            if not Lj1.contains_subspace(SubspaceBasis(xs, p, L.dim)):
                ok = False
                notes.append(f"clause (e) fails at j = {j}")
                break
    clauses["e"] = ok
    failing = next((c for c in "abcde" if not clauses[c]), None)
    return Verdict(failing is None, clauses, failing, notes)
