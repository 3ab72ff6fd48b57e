"""Restricted structure: p-maps, envelopes, tori, root spaces and sandwiches.

Everything is computed over GF(p), where the p-semilinear maps that appear
(the p-map on an abelian p-closed subalgebra, for instance) are honestly
GF(p)-linear because lambda^p = lambda.  Restricted algebras are handled
through a faithful matrix representation: the p-map is the matrix p-th
power followed by a coordinate solve.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldElement, artin_schreier_root, make_field
from .linalg import (SubspaceBasis, fitting_split, inverse, matmul, matpow, nullspace, p_power_chain, rank,
                     rref, simultaneous_eigenspaces, solve_linear, to_dense)
from .liealg import (LieAlgebra, PreconditionFailed, _coordinate_solver, _projective_points, centralizer,
                     closure, from_structure_constants, invariant_subspaces, killing_form, matrix_lie_algebra,
                     normalizer, quotient, radical_of_form)

__all__ = [
    "NotRestrictable", "NotCentreless", "NotAbelian", "NotRootVector", "TorusNotMaximal", "DependentRoots",
    "PMapData", "RestrictedAlgebra", "Torus", "TorusSearch", "RootDatum", "WinterData", "SandwichReport",
    "p_power", "pmap_data", "is_restrictable", "restricted_structure", "p_envelope", "restricted_closure",
    "jordan_decomposition", "toral_elements", "maximal_torus", "absolute_toral_rank", "toral_rank_estimate",
    "known_toral_rank", "root_decomposition", "k_section", "jacobson_terms", "winter_exponential",
    "weight_set_compare", "compare_root_data", "K_alpha", "K_prime", "sandwich_search", "is_sandwich",
    "hp_tor", "make_torus", "closure_certificate",
]


class NotRestrictable(ValueError):
    pass


class NotCentreless(ValueError):
    pass


class NotAbelian(ValueError):
    pass


class NotRootVector(ValueError):
    pass


class TorusNotMaximal(RuntimeError):
    pass


class DependentRoots(ValueError):
    pass


def _coords(x) -> np.ndarray:
    return np.asarray(getattr(x, "coords", x), dtype=np.int64)


def _is_nilpotent_matrix(A, p: int) -> bool:
    n = A.shape[0]
    return not np.any(to_dense(matpow(A, max(n, 1), p)) % p)


# ---------------------------------------------------------------------------
# p-maps through ad

class _InnerSolver:
    """Solves ad y = D for a derivation D, using a few random test elements.

    With generic g_1..g_r the map y -> ([y, g_1], ..., [y, g_r]) already has
    kernel z(L), so a derivation is pinned down by its values on the g_i.
    """

    def __init__(self, L: LieAlgebra, seed: int = 0):
        n, p = L.dim, L.p
        self.L = L
        self.center = L.center()
        target = n - self.center.dim
        rng = np.random.default_rng(seed)
        gens, blocks = [], []
        # one element never suffices: g itself lies in the kernel of ad(g)
        for _ in range(2):
            g = rng.integers(0, p, n)
            gens.append(g)
            blocks.append((-L.ad_dense(g)) % p)  # [y, g] = -ad(g) y
        while True:
            A = np.concatenate(blocks)
            _, rows = rref(A.T, p)
            if len(rows) == target:
                break
            if len(gens) < 6:
                g = rng.integers(0, p, n)
            else:
                # basis vectors always suffice
                g = np.zeros(n, dtype=np.int64)
                g[len(gens) - 6] = 1
            gens.append(g)
            blocks.append((-L.ad_dense(g)) % p)
        A_sel = A[rows]
        r = len(rows)
        R, piv = rref(np.concatenate([A_sel, np.eye(r, dtype=np.int64)], axis=1), p)
        cols = [c for c in piv if c < n]
        sol = np.zeros((n, r), dtype=np.int64)
        sol[cols] = R[: len(cols), n:]
        self.gens = np.array(gens)
        self.rows = rows
        self.sol = sol

    def solve(self, D) -> np.ndarray | None:
        """Return y with ad y = D (columns convention), or None."""
        L, p = self.L, self.L.p
        b = to_dense(matmul(D, self.gens.T, p)).T.reshape(-1) % p
        y = matmul(self.sol, b[self.rows], p) % p
        if not _same(L.ad(y), D, p):
            return None
        return y


def _same(A, B, p) -> bool:
    return not np.any((to_dense(A) - to_dense(B)) % p)


def _solver(L: LieAlgebra) -> _InnerSolver:
    s = L.metadata.get("_inner_solver")
    if s is None:
        s = L.metadata["_inner_solver"] = _InnerSolver(L)
    return s


def p_power(L: LieAlgebra, x, return_ambiguity: bool = False):
    """x^[p]: the element y with ad y = (ad x)^p.

    Unique when z(L) = 0.  Otherwise the returned y has zero coordinates
    off a fixed complement of z(L); any y + z with z central is another
    valid choice, and ``return_ambiguity`` also returns that centre.
    """
    x = _coords(x)
    s = _solver(L)
    y = s.solve(matpow(L.ad(x), L.p, L.p))
    if y is None:
        raise NotRestrictable("(ad x)^p is not an inner derivation")
    out = L.element(y)
    return (out, s.center) if return_ambiguity else out


@dataclass
class PMapData:
    algebra: LieAlgebra
    images: np.ndarray          # row i: b_i^[p]
    ambiguity: SubspaceBasis    # centre; zero for the canonical p-map

    def __call__(self, x) -> np.ndarray:
        return p_power(self.algebra, x).coords

    def semilinearity_holds(self, seed: int = 0, trials: int = 5) -> bool:
        """(c x)^[p] = c^p x^[p] on random x and scalars."""
        L, p = self.algebra, self.algebra.p
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            x = rng.integers(0, p, L.dim)
            c = int(rng.integers(1, p))
            lhs = self(c * x % p)
            rhs = pow(c, p, p) * self(x) % p
            if np.any((lhs - rhs) % p) and not self.ambiguity.contains(lhs - rhs):
                return False
        return True


def pmap_data(L: LieAlgebra) -> PMapData:
    imgs = np.array([p_power(L, L.basis(i)).coords for i in range(L.dim)])
    return PMapData(L, imgs, _solver(L).center)


def is_restrictable(L: LieAlgebra) -> bool:
    """True iff (ad b)^p is inner for every basis vector b."""
    cached = L.metadata.get("_restrictable")
    if cached is not None:
        return cached
    s = _solver(L)
    ok = True
    for i in range(L.dim):
        if s.solve(matpow(L.ad_basis(i), L.p, L.p)) is None:
            ok = False
            break
    L.metadata["_restrictable"] = ok
    return ok


# ---------------------------------------------------------------------------
# restricted algebras as matrix images

class RestrictedAlgebra:
    """A restricted Lie algebra given by a faithful basis of matrices.

    ``algebra`` carries the structure constants; ``mats[i]`` represents its
    i-th basis vector.  ``source_map`` (rows indexed by the basis of
    ``source``) sends elements of the original algebra to coordinates here.
    """

    def __init__(self, algebra: LieAlgebra, mats, source: LieAlgebra | None = None,
                 source_map: np.ndarray | None = None):
        self.algebra = algebra
        self.p = algebra.p
        self.mats = np.array([to_dense(M) % self.p for M in mats])
        self.source = source
        self.source_map = source_map
        d = len(self.mats)
        self._flat = self.mats.reshape(d, -1)
        self._solve = _coordinate_solver(self._flat, self.p)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def rep(self, v) -> np.ndarray:
        v = _coords(v) % self.p
        return np.tensordot(v, self.mats, axes=1) % self.p

    def coords_of(self, M) -> np.ndarray:
        c = self._solve(to_dense(M).reshape(-1))
        if c is None:
            raise PreconditionFailed("matrix is not in the span")
        return c

    def pmap(self, v) -> np.ndarray:
        return self.coords_of(matpow(self.rep(v), self.p, self.p))

    def from_source(self, v) -> np.ndarray:
        return matmul(_coords(v), self.source_map, self.p) % self.p

    def span(self, vectors) -> SubspaceBasis:
        return self.algebra.span(np.atleast_2d(vectors))


def restricted_closure(mats, p: int, name: str = "") -> RestrictedAlgebra:
    """Restricted subalgebra of gl(n) generated by the span of ``mats``.

    The span must already be a Lie algebra; then the closure is the span of
    all iterated p-th powers of a basis.
    """
    mats = [to_dense(M) % p for M in mats]
    n = mats[0].shape[0]
    span = SubspaceBasis.zero(n * n, p)
    basis = []
    for M in mats:
        if not span.contains(M.reshape(-1)):
            span = span.span_with(M.reshape(1, -1))
            basis.append(M)
    for M in list(basis):
        P = M
        while True:
            P = to_dense(matpow(P, p, p)) % p
            if span.contains(P.reshape(-1)):
                break
            span = span.span_with(P.reshape(1, -1))
            basis.append(P)
    L = matrix_lie_algebra(basis, p, name=name)
    return RestrictedAlgebra(L, basis)


def _ad_closure(L: LieAlgebra, name: str = "") -> RestrictedAlgebra:
    """Restricted closure of ad L inside gl(L), using the known bracket on ad L."""
    n, p = L.dim, L.p
    z = L.center()
    if z.dim:
        Q = quotient(L, z)
        base_alg, trans = Q.algebra, Q.transversal
    else:
        Q, base_alg, trans = None, L, list(range(n))
    d0 = len(trans)
    base = [L.ad_dense(np.eye(n, dtype=np.int64)[t]) for t in trans]

    def proj(v):
        return Q.project(v) if Q is not None else np.asarray(v) % p

    span = SubspaceBasis(np.array([M.reshape(-1) for M in base]), p, n * n) if base else \
        SubspaceBasis.zero(n * n, p)
    extras = []
    for M in base:
        P = M
        while True:
            P = to_dense(matpow(P, p, p)) % p
            if span.contains(P.reshape(-1)):
                break
            span = span.span_with(P.reshape(1, -1))
            extras.append(P)
    if not extras and Q is None:
        src = np.eye(n, dtype=np.int64)
        return RestrictedAlgebra(L, base, source=L, source_map=src)
    mats = base + extras
    d = len(mats)
    solve = _coordinate_solver(np.array([M.reshape(-1) for M in mats]), p)
    table: dict = {}
    for (a, b), row in base_alg.structure_constants().items():
        table[(a, b)] = dict(row)
    for e, X in enumerate(extras):
        for a in range(d0):
            # [X, ad b] = ad(X b)
            v = proj(X[:, trans[a]] if Q is None else X @ np.eye(n, dtype=np.int64)[trans[a]] % p)
            row = {k: int(c) for k, c in enumerate(v) if c}
            if row:
                table[(d0 + e, a)] = row
        for f in range(e + 1, len(extras)):
            Y = extras[f]
            c = solve(((X @ Y - Y @ X) % p).reshape(-1))
            if c is None:
                raise PreconditionFailed("p-power closure is not a Lie algebra")  # pragma: no cover
            row = {k: int(v) for k, v in enumerate(c) if v}
            if row:
                table[(d0 + e, d0 + f)] = row
    labels = list(base_alg.labels) + [f"P{i}" for i in range(len(extras))]
    alg = from_structure_constants(table, p, labels, dim=d, name=name or f"{L.name}_p", check=False)
    src = np.zeros((n, d), dtype=np.int64)
    for i in range(n):
        src[i, :d0] = proj(np.eye(n, dtype=np.int64)[i])
    return RestrictedAlgebra(alg, mats, source=L, source_map=src)


def p_envelope(L: LieAlgebra) -> RestrictedAlgebra:
    """Restricted subalgebra of Der L generated by ad L (centreless L)."""
    if L.center().dim:
        raise NotCentreless("p-envelope is built for centreless algebras only")
    return _ad_closure(L, name=f"{L.name}_p")


def restricted_structure(L: LieAlgebra) -> RestrictedAlgebra:
    """Cached restricted algebra for L: ad L itself when restrictable, else its closure."""
    R = L.metadata.get("_restricted")
    if R is None:
        R = L.metadata["_restricted"] = _ad_closure(L)
    return R


def closure_certificate(R: RestrictedAlgebra) -> bool:
    """p-th powers of the basis stay in the span, and so do commutators."""
    p = R.p
    for M in R.mats:
        if R._solve(to_dense(matpow(M, p, p)).reshape(-1) % p) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# Jordan decomposition and tori

def _as_restricted(A) -> RestrictedAlgebra:
    return A if isinstance(A, RestrictedAlgebra) else restricted_structure(A)


def jordan_decomposition(A, x) -> tuple[np.ndarray, np.ndarray]:
    """(x_s, x_n) with x_s in the span of x^[p], x^[p]^2, ..."""
    R = _as_restricted(A)
    p = R.p
    x = _coords(x) % p
    chain, F = p_power_chain(x, R.pmap, p, flatten=lambda v: np.asarray(v))
    e0 = np.zeros(len(chain), dtype=np.int64)
    e0[0] = 1
    s, _ = fitting_split(F, e0, p)
    xs = matmul(s, np.array(chain), p) % p
    return xs, (x - xs) % p


def toral_elements(A, V: SubspaceBasis) -> SubspaceBasis:
    """Basis of {t in V : t^[p] = t} for an abelian p-closed subspace V."""
    R = _as_restricted(A)
    p = R.p
    if V.dim == 0:
        return V
    L = R.algebra
    if np.any(L.bracket_rows(V.vectors, V.vectors) % p):
        raise NotAbelian("subspace is not abelian")
    imgs = np.array([R.pmap(v) for v in V.vectors])
    if np.any(V.reduce(imgs)):
        raise PreconditionFailed("subspace is not closed under the p-map")
    # on an abelian p-closed space the p-map is additive, hence GF(p)-linear
    F = V.coordinates(imgs).T  # column a: image of basis vector a
    K = nullspace((F - np.eye(V.dim, dtype=np.int64)) % p, p)
    if K.dim == 0:
        return SubspaceBasis.zero(L.dim, p)
    return SubspaceBasis(matmul(K.vectors, V.vectors, p), p, L.dim)


@dataclass
class Torus:
    parent: LieAlgebra
    span: SubspaceBasis
    toral_basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.span.dim

    @property
    def split(self) -> bool:
        """True when the toral elements span the torus over GF(p)."""
        return self.toral_basis.shape[0] == self.span.dim


def make_torus(A, vectors) -> Torus:
    R = _as_restricted(A)
    V = R.algebra.span(np.atleast_2d(vectors)) if len(vectors) else R.algebra.zero_space()
    tor = toral_elements(R, V)
    return Torus(R.algebra, V, tor.vectors)


@dataclass
class TorusSearch:
    torus: Torus
    mt: int
    exact: bool
    certified: bool
    tried: list[int] = field(default_factory=list)


def _nilpotent(L: LieAlgebra, V: SubspaceBasis) -> bool:
    cur = V
    for _ in range(V.dim + 1):
        if cur.dim == 0:
            return True
        nxt = L.bracket_spaces(V, cur)
        if nxt.dim == cur.dim:
            return False
        cur = nxt
    return cur.dim == 0


def _greedy_torus(R: RestrictedAlgebra, rng: np.random.Generator, tries: int = 6) -> tuple[SubspaceBasis, bool]:
    L, p = R.algebra, R.p
    T = L.zero_space()
    while True:
        C = centralizer(L, T) if T.dim else L.full_space()
        new = None
        for _ in range(tries):
            x = matmul(rng.integers(0, p, C.dim), C.vectors, p) % p
            xs, _ = jordan_decomposition(R, x)
            if not T.contains(xs):
                new = xs
                break
        if new is None:
            for b in C.vectors:
                xs, _ = jordan_decomposition(R, b)
                if not T.contains(xs):
                    new = xs
                    break
        if new is None:
            # no semisimple part of a basis vector escapes T; for nilpotent C
            # that settles maximality since the Jordan map is then additive
            return T, _nilpotent(L, C)
        chain, _ = p_power_chain(new, R.pmap, p, flatten=lambda v: np.asarray(v))
        T = T.span_with(np.array(chain))


def maximal_torus(A, restarts: int = 3, seed: int = 0, bound: int | None = None,
                  prefer_split: bool = False) -> TorusSearch:
    """Greedy torus search with restarts; ``exact`` when ``bound`` is attained.

    With ``prefer_split`` a split torus beats a non-split one of the same
    dimension, and up to ``4 * restarts`` attempts are made to find one.
    """
    R = _as_restricted(A)
    best, best_key, tried = None, None, []
    attempts = 4 * max(1, restarts) if prefer_split else max(1, restarts)
    for r in range(attempts):
        rng = np.random.default_rng((seed, r))
        T, cert = _greedy_torus(R, rng)
        tried.append(T.dim)
        tor = toral_elements(R, T)
        split = tor.dim == T.dim
        key = (T.dim, split) if prefer_split else (T.dim,)
        if best is None or key > best_key:
            best, best_key = (T, cert, tor), key
        done = bound is not None and T.dim >= bound
        if prefer_split:
            done = (done or r + 1 >= max(1, restarts)) and best_key[1]
        if done:
            break
    T, cert, tor = best
    torus = Torus(R.algebra, T, tor.vectors)
    return TorusSearch(torus, T.dim, bound is not None and T.dim == bound, cert, tried)


_KNOWN_TR = {"W(1;1)": 1, "M(1,1)": 2}


def known_toral_rank(L: LieAlgebra) -> int | None:
    """Registered TR values for a few named families (None if unknown)."""
    if L.name in _KNOWN_TR:
        return _KNOWN_TR[L.name]
    name = L.name
    if re.fullmatch(r"[A-G][0-9]+", name):  # Chevalley algebra: TR is the rank
        return int(name[1:])
    for pre in ("sl(", "psl("):
        if name.startswith(pre) and name.endswith(")"):
            n = int(name[len(pre):-1])
            # for p | n the scalars lie in sl(n) and die in psl(n)
            return n - 2 if pre == "psl(" and n % L.p == 0 else n - 1
    return None


def absolute_toral_rank(L: LieAlgebra, restarts: int = 3, seed: int = 0,
                        bound: int | None = None) -> tuple[int, bool]:
    """(MT of the p-envelope, exact flag) for centreless L."""
    if L.center().dim:
        raise NotCentreless("absolute toral rank is computed for centreless algebras")
    bound = bound if bound is not None else known_toral_rank(L)
    res = maximal_torus(restricted_structure(L), restarts, seed, bound)
    return res.mt, res.exact


def toral_rank_estimate(L: LieAlgebra, restarts: int = 3, seed: int = 0) -> tuple[int, bool]:
    """TR estimate for any L via the closure of ad L in gl(L).

    Nilpotent L gives (0, True).  Otherwise returns the dimension of the
    image of a found torus modulo the centre of the closure, which is a
    lower bound for TR(L/z(L)) and so for TR(L); the flag is False.
    """
    if invariant_subspaces(L)["is_nilpotent"]:
        return 0, True
    R = _ad_closure(L)
    res = maximal_torus(R, restarts, seed)
    z = R.algebra.center()
    return res.mt - res.torus.span.intersection(z).dim, False


# ---------------------------------------------------------------------------
# root decompositions

@dataclass
class RootDatum:
    torus: np.ndarray                       # toral basis (rows)
    spaces: dict[tuple, SubspaceBasis]
    ambient_dim: int

    @property
    def weights(self) -> list[tuple]:
        return list(self.spaces)

    @property
    def roots(self) -> list[tuple]:
        return [w for w in self.spaces if any(w)]

    @property
    def zero_space(self) -> SubspaceBasis:
        k = self.torus.shape[0]
        z = (0,) * k
        if z in self.spaces:
            return self.spaces[z]
        p = next(iter(self.spaces.values())).p
        return SubspaceBasis.zero(self.ambient_dim, p)

    def multiplicities(self) -> dict[tuple, int]:
        return {w: V.dim for w, V in self.spaces.items()}


def root_decomposition(L: LieAlgebra, T, action=None, check: bool = True) -> RootDatum:
    """Weight spaces of a split torus; ``action`` maps t to its matrix (default ad)."""
    basis = T.toral_basis if isinstance(T, Torus) else np.atleast_2d(np.asarray(T, dtype=np.int64))
    if basis.shape[0] == 0:
        n = L.dim if action is None else action(np.zeros(L.dim, dtype=np.int64)).shape[0]
        return RootDatum(basis, {(): SubspaceBasis.full(n, L.p)}, n)
    ops = [to_dense(L.ad(t)) if action is None else to_dense(action(t)) for t in basis]
    pieces = simultaneous_eigenspaces(ops, L.p)
    spaces = {w: V for w, V in pieces}
    n = ops[0].shape[0]
    if sum(V.dim for V in spaces.values()) != n:
        raise PreconditionFailed("torus is not split over GF(p)")
    datum = RootDatum(basis, spaces, n)
    if check and action is None:
        p = L.p
        for a, Va in spaces.items():
            for b, Vb in spaces.items():
                c = tuple((x + y) % p for x, y in zip(a, b))
                br = L.bracket_rows(Va.vectors, Vb.vectors)
                target = spaces.get(c)
                if np.any(br % p) and (target is None or np.any(target.reduce(br))):
                    raise PreconditionFailed("bracket does not respect the weights")
    return datum


def k_section(L: LieAlgebra, T, roots) -> LieAlgebra:
    """Subalgebra sum of L_gamma over gamma in the GF(p)-span of ``roots``."""
    datum = T if isinstance(T, RootDatum) else root_decomposition(L, T)
    p = L.p
    roots = [tuple(int(c) % p for c in r) for r in roots]
    if roots and rank(np.array(roots), p) < len(roots):
        raise DependentRoots("roots are linearly dependent")
    k = datum.torus.shape[0]
    V = L.zero_space()
    for coeffs in itertools.product(range(p), repeat=len(roots)):
        g = tuple(sum(c * r[j] for c, r in zip(coeffs, roots)) % p for j in range(k)) if roots else (0,) * k
        if g in datum.spaces:
            V = V + datum.spaces[g]
    sec = L.subalgebra(V, name=f"{L.name}({len(roots)}-section)", check=False)
    return sec


# ---------------------------------------------------------------------------
# Jacobson's formula

def jacobson_terms(L: LieAlgebra, x, y, verify: bool = True) -> list[np.ndarray]:
    """[s_1, ..., s_{p-1}] from the coefficients of ad(tx+y)^{p-1}(x)."""
    p = L.p
    x, y = _coords(x) % p, _coords(y) % p
    poly = [x.copy()]  # coefficient of t^0, t^1, ...
    for _ in range(p - 1):
        nxt = [np.zeros_like(x) for _ in range(len(poly) + 1)]
        for d, c in enumerate(poly):
            nxt[d + 1] = (nxt[d + 1] + L.bracket(x, c)) % p
            nxt[d] = (nxt[d] + L.bracket(y, c)) % p
        poly = nxt
    inv = [0] + [pow(i, p - 2, p) for i in range(1, p)]
    terms = [(inv[i] * poly[i - 1]) % p for i in range(1, p)]
    if verify:
        lhs = p_power(L, (x + y) % p).coords
        rhs = (p_power(L, x).coords + p_power(L, y).coords + sum(terms)) % p
        diff = (lhs - rhs) % p
        if np.any(diff) and not _solver(L).center.contains(diff):
            raise AssertionError("Jacobson's formula failed")  # pragma: no cover
    return terms


# ---------------------------------------------------------------------------
# Winter exponential

class _Ext:
    """GF(p^k) as k x k multiplication matrices acting on coefficient vectors."""

    def __init__(self, fd):
        self.fd = fd
        self.p, self.k = fd.p, fd.k
        self._basis = [fd(tuple(int(a == b) for b in range(self.k))) for a in range(self.k)]

    def mat(self, lam: FieldElement) -> np.ndarray:
        return np.array([(lam * b).coeffs for b in self._basis], dtype=np.int64).T

    def element(self, c) -> FieldElement:
        return c if isinstance(c, FieldElement) else self.fd(int(c))


@dataclass
class WinterData:
    x: np.ndarray
    gamma: tuple
    m: int
    q_x: np.ndarray
    field: object                   # extension field used for the scalars xi(.)
    E: np.ndarray                   # GF(p)-matrix of E on L (x) GF(p^k), size nk
    new_torus: np.ndarray           # rows: t_x for the toral basis t
    transformed_roots: dict         # alpha -> tuple of alpha_{x,xi}(t_x) as FieldElements
    image_spaces: dict              # alpha -> SubspaceBasis of E(L_alpha) in the nk space
    invertible: bool
    cartan: bool
    decomposes: bool
    recomputed_match: bool | None

    @property
    def ok(self) -> bool:
        return self.invertible and self.cartan and self.decomposes and self.recomputed_match is not False


def _extend_algebra(L: LieAlgebra, ext: _Ext) -> LieAlgebra:
    """L (x) GF(p^k) as a GF(p)-Lie algebra on the basis b_i theta^a."""
    k, p, n = ext.k, ext.p, L.dim
    prod = [[(ext._basis[a] * ext._basis[b]).coeffs for b in range(k)] for a in range(k)]
    table = {}
    for (i, j), row in L.structure_constants().items():
        for a in range(k):
            for b in range(k):
                out = {}
                for l, c in row.items():
                    for e, v in enumerate(prod[a][b]):
                        if v:
                            key = l * k + e
                            out[key] = (out.get(key, 0) + c * v) % p
                out = {kk: vv for kk, vv in out.items() if vv}
                if out:
                    table[(i * k + a, j * k + b)] = out
    return from_structure_constants(table, p, dim=n * k, name=f"{L.name}_K", check=False)


def winter_exponential(A, T, x, validate: bool = True) -> WinterData:
    """Generalised exponential E_{x,xi} for a root vector x relative to a torus T.

    ``A`` is a restricted algebra (or a restrictable centreless L); ``T``
    gives a toral basis of a maximal torus in its coordinates.
    """
    R = _as_restricted(A)
    G, p = R.algebra, R.p
    n = G.dim
    x = _coords(x) % p
    datum = root_decomposition(G, T, check=False)
    tb = datum.torus
    Tspan = SubspaceBasis(tb, p, n)
    # the root of x
    gamma = None
    for w, V in datum.spaces.items():
        if V.contains(x):
            gamma = w
            break
    if gamma is None or not any(gamma) or not np.any(x):
        raise NotRootVector("x is not a root vector for a nonzero root")
    # m = least k with x^[p]^k in T
    powers = [x]
    m = None
    for k in range(1, n + 2):
        powers.append(R.pmap(powers[-1]))
        if Tspan.contains(powers[-1]):
            m = k
            break
    if m is None:
        raise TorusNotMaximal("no p-power of x lies in the torus")
    q = sum(powers[1:m], np.zeros(n, dtype=np.int64)) % p
    tcoef = _coords_in_rows(tb, powers[m], p)
    # alpha(x^[p]^m) for every weight
    cval = {w: int(sum(int(a) * int(b) for a, b in zip(tcoef, w)) % p) for w in datum.spaces}
    need_ext = any(cval.values())
    if need_ext:
        beta = artin_schreier_root(make_field(p, 1)(1))
        ext = _Ext(beta.field)
    else:
        beta = None
        ext = _Ext(make_field(p, 1))
    k = ext.k
    fd = ext.fd

    def xi(c):
        return fd(0) if c == 0 else beta * fd(c)

    adx = to_dense(G.ad(x)) % p
    adq = to_dense(G.ad(q)) % p
    I_k = np.eye(k, dtype=np.int64)
    big_adx = np.kron(adx, I_k)
    big_adq = np.kron(adq, I_k)

    def scalar(lam):
        return np.kron(np.eye(n, dtype=np.int64), ext.mat(lam))

    cols = []
    srcs = []
    image_spaces = {}
    for w, V in datum.spaces.items():
        mu = [None] + [xi(cval[w]) + fd(j) for j in range(1, p)]
        # vectors v (x) theta^a for v in V
        Y = np.kron(V.vectors.T, I_k)  # (nk, dim V * k)
        vs = [Y]
        for _ in range(p - 1):
            vs.append(big_adx @ vs[-1] % p)
        acc = vs[0]
        for i in range(1, p):
            acc = (vs[i] + (scalar(mu[i]) @ acc - big_adq @ acc)) % p
        img = (-acc) % p
        cols.append(img)
        srcs.append(Y)
        image_spaces[w] = SubspaceBasis(img.T, p, n * k)
    S = np.concatenate(srcs, axis=1)
    Img = np.concatenate(cols, axis=1)
    # E on the standard basis: Img = E S
    E = matmul(Img, inverse(S, p), p) % p
    invertible = rank(E, p) == n * k
    # new torus and transformed roots
    new_torus = []
    for t in tb:
        g = _weight_value(datum, gamma, t, tb, p)
        new_torus.append((t - g * (x + q)) % p)
    new_torus = np.array(new_torus)
    transformed = {}
    for w in datum.spaces:
        vals = []
        for s, t in enumerate(tb):
            g = _weight_value(datum, gamma, t, tb, p)
            vals.append(fd(w[s]) - xi(cval[w]) * fd(g))
        transformed[w] = tuple(vals)
    result = WinterData(x, gamma, m, q, fd, E, new_torus, transformed, image_spaces,
                        invertible, False, False, None)
    if not validate:
        return result
    # E(L_alpha) are weight spaces of ad t_x with the predicted weights
    decomposes = invertible
    for w, V in image_spaces.items():
        for s, tx in enumerate(new_torus):
            A = np.kron(to_dense(G.ad(tx)) % p, I_k)
            lhs = A @ V.vectors.T % p
            rhs = scalar(transformed[w][s]) @ V.vectors.T % p
            if np.any((lhs - rhs) % p):
                decomposes = False
    result.decomposes = decomposes
    # E(h) is a Cartan subalgebra
    zero = (0,) * tb.shape[0]
    Eh = image_spaces.get(zero)
    if k == 1:
        big = G
    else:
        big = _extend_algebra(G, ext)
    result.cartan = bool(Eh is not None and big.is_subalgebra(Eh) and _nilpotent(big, Eh)
                         and normalizer(big, Eh) == Eh)
    result.recomputed_match = _recompute_weights(big, new_torus, ext, image_spaces, transformed, n)
    return result


def _coords_in_rows(rows: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    c = solve_linear(rows.T, v, p)
    if c is None:
        raise PreconditionFailed("vector not in span")
    return c


def _weight_value(datum: RootDatum, w: tuple, t: np.ndarray, tb: np.ndarray, p: int) -> int:
    """w(t) for t in the span of the toral basis."""
    c = _coords_in_rows(tb, t, p)
    return int(sum(int(a) * int(b) for a, b in zip(c, w)) % p)


def _recompute_weights(big: LieAlgebra, new_torus, ext: _Ext, image_spaces, transformed, n) -> bool | None:
    """Weights of ad t_x on L (x) GF(p^k) found from scratch, compared as multisets."""
    p, k = ext.p, ext.k
    predicted = {}
    for w, V in image_spaces.items():
        key = tuple(c.coeffs for c in transformed[w])
        predicted[key] = predicted.get(key, 0) + V.dim // k
    if k == 1:
        ops = [to_dense(big.ad(t)) for t in new_torus]
        try:
            pieces = simultaneous_eigenspaces(ops, p)
        except Exception:
            return False
        found = {tuple((c,) for c in w): V.dim for w, V in pieces}
        return found == predicted
    if n * k > 800:
        return None
    # joint kernels of ad t_x - lambda at every predicted weight; their
    # dimensions must add up to the whole space
    ops = [_ad_ext(big, t, k, p) for t in new_torus]
    found = {}
    for key in predicted:
        blocks = []
        for A, coeffs in zip(ops, key):
            lam = ext.fd(coeffs)
            blocks.append((A - np.kron(np.eye(n, dtype=np.int64), ext.mat(lam))) % p)
        K = nullspace(np.concatenate(blocks), p)
        found[key] = K.dim // k
    return found == predicted and sum(found.values()) == n


def _ad_ext(big: LieAlgebra, t: np.ndarray, k: int, p: int) -> np.ndarray:
    """ad of t (x) 1 in the extended algebra."""
    n = t.shape[0]
    v = np.zeros(n * k, dtype=np.int64)
    v[::k] = t
    return to_dense(big.ad(v)) % p


# ---------------------------------------------------------------------------
# comparing weight sets of two tori

def compare_root_data(d1: RootDatum, d2: RootDatum, p: int, max_span: int = 3) -> dict:
    """Search for a linear bijection of weight spans matching multiplicities."""
    m1, m2 = d1.multiplicities(), d2.multiplicities()

    def flags(m):
        ws = list(m)
        nonzero = [w for w in ws if any(w)]
        line = any(all(tuple(i * c % p for c in w) in m for i in range(1, p)) for w in nonzero)
        return {"zero_weight": any(not any(w) for w in ws), "full_line": line}

    report = {"found": False, "checked": True, "map": None, "flags1": flags(m1), "flags2": flags(m2)}
    if sorted(m1.values()) != sorted(m2.values()):
        return report
    W1 = [w for w in m1 if any(w)]
    W2 = [w for w in m2 if any(w)]
    basis = []
    for w in W1:
        cand = basis + [w]
        if rank(np.array(cand), p) == len(cand):
            basis = cand
    r = len(basis)
    if W1 and rank(np.array(W2), p) != r:
        return report
    if r > max_span:
        report["checked"] = False
        return report
    if r == 0:
        report["found"] = m1.get(tuple([0] * len(next(iter(m1)))), 0) == m2.get(
            tuple([0] * len(next(iter(m2)))), 0)
        report["map"] = {}
        return report
    B = np.array(basis)
    coords = {w: _coords_in_rows(B, np.array(w), p) for w in m1}
    for images in itertools.product(W2, repeat=r):
        Im = np.array(images)
        if rank(Im, p) < r:
            continue
        mapping = {w: tuple(int(v) for v in matmul(c, Im, p) % p) for w, c in coords.items()}
        if len(set(mapping.values())) != len(mapping):
            continue
        if all(m2.get(mapping[w]) == m1[w] for w in m1):
            report["found"] = True
            report["map"] = mapping
            return report
    return report


def weight_set_compare(L: LieAlgebra, T1, T2, action=None) -> dict:
    d1 = root_decomposition(L, T1, action=action, check=False)
    d2 = root_decomposition(L, T2, action=action, check=False)
    return compare_root_data(d1, d2, L.p)


# ---------------------------------------------------------------------------
# K_alpha and K'

def _root_on_zero_space(G: LieAlgebra, datum: RootDatum, alpha: tuple) -> np.ndarray:
    """Values of alpha on the echelon basis of H = G_0 (generalised eigenvalues)."""
    p = G.p
    Va = datum.spaces[alpha]
    H = datum.zero_space
    vals = []
    for h in H.vectors:
        A = Va.coordinates(to_dense(matmul(G.ad(h), Va.vectors.T, p)).T).T
        lam = None
        for c in range(p):
            if not np.any(matpow((A - c * np.eye(Va.dim, dtype=np.int64)) % p, Va.dim, p) % p):
                lam = c
                break
        if lam is None:
            raise PreconditionFailed("H does not act on the root space with one eigenvalue")
        vals.append(lam)
    return np.array(vals, dtype=np.int64)


def K_alpha(G: LieAlgebra, T, alpha) -> SubspaceBasis:
    """{x in G_alpha : alpha([x, G_-alpha]) = 0}."""
    datum = T if isinstance(T, RootDatum) else root_decomposition(G, T, check=False)
    p = G.p
    alpha = tuple(int(a) % p for a in alpha)
    Va = datum.spaces.get(alpha)
    if Va is None:
        return G.zero_space()
    neg = tuple((-a) % p for a in alpha)
    Vn = datum.spaces.get(neg)
    if Vn is None:
        return Va
    H = datum.zero_space
    vals = _root_on_zero_space(G, datum, alpha)
    M = np.zeros((Va.dim, Vn.dim), dtype=np.int64)
    for i, xv in enumerate(Va.vectors):
        br = G.bracket_rows(xv[None, :], Vn.vectors)
        M[i] = matmul(H.coordinates(br), vals, p) % p
    if not np.any(M):
        return Va
    N = nullspace(M.T, p)
    if N.dim == 0:
        return G.zero_space()
    return SubspaceBasis(matmul(N.vectors, Va.vectors, p), p, G.dim)


def K_prime(G: LieAlgebra, T, alpha) -> tuple[SubspaceBasis, bool]:
    """(subalgebra generated by the K_{i alpha}, triangulability flag)."""
    datum = T if isinstance(T, RootDatum) else root_decomposition(G, T, check=False)
    p = G.p
    seeds = []
    for i in range(1, p):
        K = K_alpha(G, datum, tuple(i * a % p for a in alpha))
        seeds.extend(K.vectors)
    if not seeds:
        return G.zero_space(), True
    S = closure(G, seeds)
    D = G.bracket_spaces(S, S)
    tri = all(_is_nilpotent_matrix(to_dense(G.ad(v)), p) for v in D.vectors)
    return S, tri


# ---------------------------------------------------------------------------
# sandwiches

def is_sandwich(L: LieAlgebra, x) -> bool:
    A = L.ad(_coords(x))
    return not np.any(to_dense(matmul(A, A, L.p)) % L.p)


@dataclass
class SandwichReport:
    span: SubspaceBasis
    components: list[tuple[str, int, int]]   # (label, dim, number of sandwich points)
    skipped: list[tuple[str, int]]
    in_killing_radical: bool

    @property
    def strongly_degenerate(self) -> bool:
        return self.span.dim > 0


def _component_sandwiches(L: LieAlgebra, V: SubspaceBasis, chunk: int = 256) -> np.ndarray:
    """All projective points c with (ad sum c_i v_i)^2 = 0."""
    p, d = L.p, V.dim
    ads = [to_dense(L.ad(v)).astype(np.float64) for v in V.vectors]
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    P = np.empty((len(pairs), L.dim * L.dim))
    for r, (i, j) in enumerate(pairs):
        M = ads[i] @ ads[i] if i == j else ads[i] @ ads[j] + ads[j] @ ads[i]
        P[r] = np.mod(M, p).reshape(-1)
    pts = _projective_points(d, p)
    found = []
    for s in range(0, len(pts), chunk):
        c = pts[s:s + chunk]
        mono = np.stack([c[:, i] * c[:, j] for i, j in pairs], axis=1).astype(np.float64)
        Q = np.mod(mono @ P, p)
        hit = ~np.any(Q, axis=1)
        found.extend(c[hit])
    return np.array(found, dtype=np.int64).reshape(-1, d)


def sandwich_search(L: LieAlgebra, T=None, bound: int = 6) -> SandwichReport:
    """Sandwich elements inside root spaces of T or graded components of L."""
    p = L.p
    if T is not None:
        datum = T if isinstance(T, RootDatum) else root_decomposition(L, T, check=False)
        comps = [(f"root{w}", V) for w, V in datum.spaces.items()]
    elif L.grading is not None:
        comps = [(f"deg{d}", L.grading.component(d, p)) for d in L.grading.support]
    else:
        comps = [("all", L.full_space())]
    span = L.zero_space()
    done, skipped = [], []
    for label, V in comps:
        if V.dim == 0:
            continue
        if V.dim > bound:
            skipped.append((label, V.dim))
            continue
        pts = _component_sandwiches(L, V)
        done.append((label, V.dim, len(pts)))
        if len(pts):
            span = span.span_with(matmul(pts, V.vectors, p) % p)
    rad = radical_of_form(killing_form(L)) if span.dim else L.zero_space()
    return SandwichReport(span, done, skipped, rad.contains_subspace(span))


# ---------------------------------------------------------------------------
# maximal torus of the closure of ad H

def hp_tor(L: LieAlgebra, H: SubspaceBasis) -> SubspaceBasis:
    """Toral elements of the restricted closure of ad H inside gl(L), as matrices' coordinates.

    Returns the toral span inside the closure algebra; its dimension is the
    usual dim H_p^tor for nilpotent H.
    """
    R = restricted_closure([L.ad_dense(h) for h in H.vectors], L.p, name="H_p")
    parts = [jordan_decomposition(R, np.eye(R.dim, dtype=np.int64)[i])[0] for i in range(R.dim)]
    S = R.algebra.span(np.array(parts)) if parts else R.algebra.zero_space()
    return toral_elements(R, S)
