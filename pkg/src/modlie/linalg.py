"""Exact linear algebra over a prime field GF(p).

Vectors and matrices are numpy ``int64`` arrays with entries in ``[0, p)``;
sparse operators are ``scipy.sparse`` CSR matrices with the same convention.
Everything here is exact: floating point only appears inside
:func:`matmul`, where the bound ``inner_dim * (p-1)^2 < 2^53`` keeps BLAS
products exact before reduction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "NotCommuting",
    "NotToral",
    "DENSITY_THRESHOLD",
    "as_operator",
    "to_dense",
    "matmul",
    "matpow",
    "rref",
    "rank",
    "nullspace",
    "solve_linear",
    "inverse",
    "SubspaceBasis",
    "ConstraintSolver",
    "simultaneous_eigenspaces",
    "spin",
    "ModuleTest",
    "module_irreducible",
    "jordan_chevalley_matrix",
    "fitting_split",
    "p_power_chain",
    "inv_table",
    "Inconclusive",
]

# Operators denser than this are stored as dense arrays.
DENSITY_THRESHOLD = 0.2


class NotCommuting(ValueError):
    pass


class NotToral(ValueError):
    pass


def _inv_table(p: int) -> np.ndarray:
    tab = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        tab[a] = pow(a, p - 2, p)
    return tab


_INV_CACHE: dict[int, np.ndarray] = {}


def inv_table(p: int) -> np.ndarray:
    tab = _INV_CACHE.get(p)
    if tab is None:
        tab = _INV_CACHE[p] = _inv_table(p)
    return tab


# ---------------------------------------------------------------------------
# operators

def to_dense(A) -> np.ndarray:
    if sp.issparse(A):
        return np.asarray(A.toarray(), dtype=np.int64)
    return np.asarray(A, dtype=np.int64)


def as_operator(A, p: int):
    """Store ``A`` sparse when its fill is below the density threshold."""
    if sp.issparse(A):
        A = A.tocsr()
        A.data %= p
        A.eliminate_zeros()
        size = A.shape[0] * A.shape[1]
        if size and A.nnz / size >= DENSITY_THRESHOLD:
            return to_dense(A)
        return A
    A = np.asarray(A, dtype=np.int64) % p
    size = A.size
    if size and np.count_nonzero(A) / size < DENSITY_THRESHOLD:
        return sp.csr_matrix(A)
    return A


def matmul(A, B, p: int):
    """Product mod p of dense and/or sparse operands."""
    if sp.issparse(A) or sp.issparse(B):
        if sp.issparse(A) and sp.issparse(B):
            C = (A @ B).tocsr()
            C.data %= p
            C.eliminate_zeros()
            return C
        C = A @ B
        if sp.issparse(C):
            C = C.toarray()
        return np.asarray(C, dtype=np.int64) % p
    A = np.asarray(A)
    B = np.asarray(B)
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < 2**53 and A.ndim <= 2 and B.ndim <= 2 and inner > 8:
        # reduced operands keep every partial sum below 2^53, so BLAS is exact
        C = (A % p).astype(np.float64) @ (B % p).astype(np.float64)
        return np.rint(np.mod(C, p)).astype(np.int64)
    return (A.astype(np.int64) @ B.astype(np.int64)) % p


def matpow(A, e: int, p: int):
    e = int(e)
    if e < 0:
        raise ValueError("negative exponent")
    result = None
    base = A
    while e:
        if e & 1:
            result = base if result is None else matmul(result, base, p)
        e >>= 1
        if e:
            base = matmul(base, base, p)
    if result is None:
        n = A.shape[0]
        return sp.identity(n, dtype=np.int64, format="csr") if sp.issparse(A) else np.eye(n, dtype=np.int64)
    return result


# ---------------------------------------------------------------------------
# elimination

def rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    R = to_dense(A) % p
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    m, n = R.shape
    inv = inv_table(p)
    pivots: list[int] = []
    # entries grow by at most p^2 per elimination step, so the full
    # reduction mod p is only needed every ``every`` steps
    every = max(1, 2**61 // (p * p))
    r = 0
    steps = 0
    for c in range(n):
        if r == m:
            break
        R[r:, c] %= p
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i], c:] = R[[i, r], c:]
        R[r, c:] = (R[r, c:] % p * inv[R[r, c]]) % p
        colv = R[:, c] % p
        colv[r] = 0
        rows = np.flatnonzero(colv)
        if rows.size * 3 > m:
            R[:, c:] -= np.outer(colv, R[r, c:])
        elif rows.size:
            R[rows, c:] -= np.outer(colv[rows], R[r, c:])
        if rows.size:
            steps += 1
            if steps % every == 0:
                R %= p
        R[:, c] = 0
        R[r, c] = 1
        pivots.append(c)
        r += 1
    R = R[:r] % p
    return R, pivots


def rank(A, p: int) -> int:
    A = to_dense(A)
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> "SubspaceBasis":
    A = to_dense(A)
    m, n = A.shape
    R, piv = rref(A, p) if m else (np.zeros((0, n), dtype=np.int64), [])
    free = [c for c in range(n) if c not in set(piv)]
    N = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, pc in enumerate(piv):
            N[k, pc] = (-R[i, f]) % p
    return SubspaceBasis(N, p, n, reduced=False)


def solve_linear(A, b, p: int):
    """A particular solution of ``A x = b`` or ``None`` when inconsistent.

    Free variables are set to zero, so the answer is determined by the
    echelon pivots.
    """
    A = to_dense(A)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    m, n = A.shape
    aug = np.concatenate([A % p, b[:, None]], axis=1)
    R, piv = rref(aug, p)
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return x


def inverse(A, p: int) -> np.ndarray:
    A = to_dense(A)
    n = A.shape[0]
    R, piv = rref(np.concatenate([A % p, np.eye(n, dtype=np.int64)], axis=1), p)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise np.linalg.LinAlgError("matrix is singular mod p")
    return R[:, n:]


# ---------------------------------------------------------------------------
# subspaces

class SubspaceBasis:
    """A subspace of GF(p)^n stored by its reduced echelon basis."""

    __slots__ = ("p", "ambient_dim", "vectors", "pivots")

    def __init__(self, vectors, p: int, ambient_dim: int | None = None, reduced: bool = False):
        V = to_dense(vectors) if not isinstance(vectors, list) else (
            np.array(vectors, dtype=np.int64) if vectors else None)
        if V is None or V.size == 0:
            if ambient_dim is None:
                raise ValueError("ambient dimension required for the zero subspace")
            V = np.zeros((0, ambient_dim), dtype=np.int64)
        V = V.reshape(-1, V.shape[-1]) if V.ndim == 1 else V
        self.p = p
        self.ambient_dim = V.shape[1] if ambient_dim is None else ambient_dim
        if reduced:
            self.vectors, self.pivots = V % p, _pivots_of(V)
        else:
            self.vectors, self.pivots = rref(V, p)

    @classmethod
    def zero(cls, n: int, p: int) -> "SubspaceBasis":
        return cls(np.zeros((0, n), dtype=np.int64), p, n, reduced=True)

    @classmethod
    def full(cls, n: int, p: int) -> "SubspaceBasis":
        return cls(np.eye(n, dtype=np.int64), p, n, reduced=True)

    @classmethod
    def spanned_by_indices(cls, idx: Iterable[int], n: int, p: int) -> "SubspaceBasis":
        idx = sorted(set(idx))
        V = np.zeros((len(idx), n), dtype=np.int64)
        for k, i in enumerate(idx):
            V[k, i] = 1
        return cls(V, p, n, reduced=True)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.dim

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Remainder of ``v`` (or rows of ``v``) modulo the subspace."""
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self.dim:
            return v
        return (v - matmul(v[..., self.pivots], self.vectors, self.p)) % self.p

    def contains(self, v) -> bool:
        return not np.any(self.reduce(v))

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        return other.dim == 0 or not np.any(self.reduce(other.vectors))

    def coordinates(self, v) -> np.ndarray:
        """Coordinates in the echelon basis (only meaningful for members)."""
        v = np.asarray(v, dtype=np.int64) % self.p
        return v[..., self.pivots]

    def __add__(self, other: "SubspaceBasis") -> "SubspaceBasis":
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return SubspaceBasis(np.concatenate([self.vectors, other.vectors]), self.p, self.ambient_dim)

    def span_with(self, vectors) -> "SubspaceBasis":
        V = to_dense(vectors).reshape(-1, self.ambient_dim)
        return self + SubspaceBasis(V, self.p, self.ambient_dim)

    def intersection(self, other: "SubspaceBasis") -> "SubspaceBasis":
        if self.dim == 0 or other.dim == 0:
            return SubspaceBasis.zero(self.ambient_dim, self.p)
        # a.U = b.W  <=>  [U; -W]^T (a, b) = 0
        M = np.concatenate([self.vectors, (-other.vectors) % self.p]).T
        N = nullspace(M, self.p)
        if N.dim == 0:
            return SubspaceBasis.zero(self.ambient_dim, self.p)
        return SubspaceBasis(matmul(N.vectors[:, : self.dim], self.vectors, self.p), self.p, self.ambient_dim)

    def complement_indices(self) -> list[int]:
        """Standard basis indices spanning a complement (non-pivot columns)."""
        piv = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in piv]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.dim == other.dim
                and np.array_equal(self.vectors, other.vectors))

    def __hash__(self):
        return hash((self.ambient_dim, self.vectors.tobytes()))

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim})"


def _pivots_of(V: np.ndarray) -> list[int]:
    piv = []
    for row in V:
        nz = np.flatnonzero(row)
        piv.append(int(nz[0]))
    return piv


class ConstraintSolver:
    """Solution space of a large homogeneous system fed in batches.

    The current solutions are the columns of ``basis`` (shape n x d); each
    batch ``E`` shrinks them to ``basis @ nullspace(E @ basis)``.  This keeps
    every elimination of size (batch rows) x d.
    """

    def __init__(self, nvars: int, p: int):
        self.p = p
        self.basis = np.eye(nvars, dtype=np.int64)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def add(self, E) -> None:
        if self.dim == 0:
            return
        EN = matmul(E, self.basis, self.p)
        EN = to_dense(EN)
        if not np.any(EN):
            return
        N = nullspace(EN, self.p)
        self.basis = matmul(self.basis, N.vectors.T, self.p) if N.dim else np.zeros(
            (self.basis.shape[0], 0), dtype=np.int64)

    def solutions(self) -> SubspaceBasis:
        return SubspaceBasis(self.basis.T, self.p, self.basis.shape[0])


# ---------------------------------------------------------------------------
# weight spaces

def simultaneous_eigenspaces(ops: Sequence, p: int, check: bool = True):
    """Joint eigenspace decomposition for commuting toral operators.

    Returns a list of ``(weight_tuple, SubspaceBasis)`` with weights in GF(p);
    the spaces form a direct sum decomposition of the whole space.
    """
    ops = list(ops)
    if not ops:
        raise ValueError("need at least one operator")
    n = ops[0].shape[0]
    if check:
        for i, A in enumerate(ops):
            if not _equal(matpow(A, p, p), A, p):
                raise NotToral(f"operator {i} does not satisfy A^p = A")
            for B in ops[i + 1:]:
                if not _equal(matmul(A, B, p), matmul(B, A, p), p):
                    raise NotCommuting("operators do not commute")
    pieces = [((), SubspaceBasis.full(n, p))]
    for A in ops:
        nxt = []
        for w, V in pieces:
            M = to_dense(matmul(A, V.vectors.T, p))[V.pivots, :]
            for lam in range(p):
                K = nullspace((M - lam * np.eye(V.dim, dtype=np.int64)) % p, p)
                if K.dim:
                    nxt.append((w + (lam,), SubspaceBasis(matmul(K.vectors, V.vectors, p), p, n)))
        pieces = nxt
    return pieces


def _equal(A, B, p) -> bool:
    if sp.issparse(A) or sp.issparse(B):
        D = (sp.csr_matrix(A) - sp.csr_matrix(B)).tocsr()
        D.data %= p
        return D.count_nonzero() == 0
    return not np.any((np.asarray(A) - np.asarray(B)) % p)


# ---------------------------------------------------------------------------
# submodules

def spin(vectors, gens: Sequence, p: int) -> SubspaceBasis:
    """Smallest subspace containing ``vectors`` and stable under ``gens``."""
    V = to_dense(vectors)
    if V.ndim == 1:
        V = V[None, :]
    n = V.shape[1]
    R, piv = rref(V, p)
    frontier = R
    gensT = [g for g in gens]
    while frontier.shape[0]:
        imgs = np.concatenate([to_dense(matmul(g, frontier.T, p)).T for g in gensT])
        if piv:
            imgs = (imgs - matmul(imgs[:, piv], R, p)) % p
        imgs = imgs[np.any(imgs, axis=1)]
        if not imgs.shape[0]:
            break
        Nw, npiv = rref(imgs, p)
        if not npiv:
            break
        R = (R - matmul(R[:, npiv], Nw, p)) % p
        R = np.concatenate([R, Nw])
        piv = piv + npiv
        order = np.argsort(piv)
        R = R[order]
        piv = [piv[i] for i in order]
        frontier = Nw
        if len(piv) == n:
            break
    return SubspaceBasis(R, p, n, reduced=True)


@dataclass
class ModuleTest:
    irreducible: bool
    submodule: SubspaceBasis | None = None
    method: str = ""


class Inconclusive(RuntimeError):
    pass


def module_irreducible(gens: Sequence, p: int, seed: int = 0, max_trials: int = 200) -> ModuleTest:
    """Decide (absolute) irreducibility of the module generated by ``gens``.

    A certificate of irreducibility is Norton's criterion for a random
    algebra element ``a`` with a GF(p)-eigenvalue of geometric multiplicity
    one: the eigenvector spins to the whole space under ``gens`` and the dual
    eigenvector spins to the whole space under the transposes.  This also
    shows the endomorphism ring is GF(p), i.e. absolute irreducibility.
    For dimension at most 12 the Burnside criterion (the generated
    associative algebra is the full matrix algebra) is used first, which is
    deterministic.
    """
    gens = [to_dense(g) % p for g in gens]
    n = gens[0].shape[0]
    if n <= 1:
        return ModuleTest(True, None, "trivial")
    if all(not np.any(g) for g in gens) or all(_is_scalar(g) for g in gens):
        return ModuleTest(False, SubspaceBasis.spanned_by_indices([0], n, p), "scalars")
    if n <= 12:
        if _burnside_full(gens, p):
            return ModuleTest(True, None, "burnside")
        # not absolutely irreducible: exhaust invariant lines of kernels
        sub = _exhaustive_submodule(gens, p)
        if sub is not None:
            return ModuleTest(False, sub, "exhaustive")
        raise Inconclusive("module is irreducible but not absolutely irreducible")
    gensT = [g.T.copy() for g in gens]
    rng = random.Random(seed)
    words = list(gens)
    for _ in range(max_trials):
        a = _random_word(words, rng, p)
        for lam in range(p):
            shifted = (a - lam * np.eye(n, dtype=np.int64)) % p
            K = nullspace(shifted, p)
            if K.dim == 0:
                continue
            v = K.vectors[0]
            S = spin(v, gens, p)
            if S.dim < n:
                return ModuleTest(False, S, "spin")
            if K.dim == 1:
                Kt = nullspace(shifted.T, p)
                St = spin(Kt.vectors[0], gensT, p)
                if St.dim < n:
                    # annihilator of a proper submodule of the dual
                    sub = nullspace(St.vectors, p)
                    return ModuleTest(False, sub, "dual-spin")
                return ModuleTest(True, None, "norton")
    raise Inconclusive("no certificate found; increase max_trials")


def _is_scalar(g: np.ndarray) -> bool:
    return not np.any(g - np.diag(np.diag(g))) and np.all(np.diag(g) == g[0, 0])


def _random_word(words: list, rng: random.Random, p: int) -> np.ndarray:
    # grow the pool with a random product, then take a random combination
    a = words[rng.randrange(len(words))]
    b = words[rng.randrange(len(words))]
    words.append(matmul(a, b, p))
    if len(words) > 24:
        del words[len(words) // 2]
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for w in rng.sample(words, min(4, len(words))):
        out = (out + rng.randrange(1, p) * w) % p
    return out


def _burnside_full(gens: list[np.ndarray], p: int) -> bool:
    n = gens[0].shape[0]
    ident = np.eye(n, dtype=np.int64).reshape(1, -1)
    span = SubspaceBasis(ident, p, n * n)
    frontier = [np.eye(n, dtype=np.int64)]
    while frontier:
        new = []
        for w in frontier:
            for g in gens:
                x = matmul(g, w, p)
                if not span.contains(x.reshape(-1)):
                    span = span.span_with(x.reshape(1, -1))
                    new.append(x)
        frontier = new
        if span.dim == n * n:
            return True
    return span.dim == n * n


def _exhaustive_submodule(gens, p):
    n = gens[0].shape[0]
    for g in gens:
        for lam in range(p):
            K = nullspace((g - lam * np.eye(n, dtype=np.int64)) % p, p)
            for v in K.vectors:
                S = spin(v, gens, p)
                if S.dim < n:
                    return S
    return None


# ---------------------------------------------------------------------------
# Jordan-Chevalley

def fitting_split(F: np.ndarray, x: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Split ``x`` along V = im F^N (+) ker F^N for a linear map ``F``.

    Returns (component in the image part, component in the kernel part).
    """
    d = F.shape[0]
    FN = matpow(F, max(d, 1), p)
    FN = to_dense(FN)
    img = SubspaceBasis(FN.T, p, d)
    ker = nullspace(FN, p)
    M = np.concatenate([img.vectors, ker.vectors]).T if (img.dim + ker.dim) else np.zeros((d, 0), dtype=np.int64)
    c = solve_linear(M, x, p)
    if c is None:
        raise ArithmeticError("Fitting decomposition failed")  # pragma: no cover
    s = matmul(c[: img.dim], img.vectors, p) if img.dim else np.zeros(d, dtype=np.int64)
    return s % p, (x - s) % p


def p_power_chain(first, power, p: int, flatten=lambda M: to_dense(M).reshape(-1)):
    """Span of ``x, power(x), power(power(x)), ...`` and the induced map.

    Returns (list of chain elements, companion matrix of ``power`` on the span).
    """
    chain = [first]
    flat = [flatten(first) % p]
    span = SubspaceBasis(np.array(flat), p, flat[0].size)
    while True:
        nxt = power(chain[-1])
        v = flatten(nxt) % p
        if span.contains(v) or span.dim == flat[0].size:
            break
        chain.append(nxt)
        flat.append(v)
        span = span.span_with(v[None, :])
    d = len(chain)
    A = np.array(flat).T  # columns are chain elements
    c = solve_linear(A, v, p)
    F = np.zeros((d, d), dtype=np.int64)
    for i in range(d - 1):
        F[i + 1, i] = 1
    F[:, d - 1] = c
    return chain, F


def jordan_chevalley_matrix(M, p: int):
    """Additive Jordan-Chevalley decomposition ``M = S + N`` over GF(p).

    Works inside the commutative algebra spanned by M, M^p, M^(p^2), ...,
    where the p-th power map is GF(p)-linear; the Fitting decomposition of
    that map separates the semisimple part (where it is bijective) from the
    nilpotent part.  Both parts are therefore polynomials in M.
    """
    M = to_dense(M) % p
    chain, F = p_power_chain(M, lambda A: to_dense(matpow(A, p, p)), p)
    e0 = np.zeros(len(chain), dtype=np.int64)
    e0[0] = 1
    s, _ = fitting_split(F, e0, p)
    S = np.zeros_like(M)
    for coef, A in zip(s, chain):
        if coef:
            S = (S + coef * A) % p
    return S, (M - S) % p
