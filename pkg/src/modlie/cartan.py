"""Cartan-type Lie algebras as subalgebras of W(m;n).

W(m;n) has basis x^(a) d_i ordered by (degree, a, i), where the degree of
x^(a) d_i under the grading of type r is sum r_k a_k - r_i.  The families
S, CS, H, CH, K (and their filtered variants) are cut out of W(m;n) by the
linear conditions D w = 0, D w in F w, D w in O(m;n) w for a form w.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .dpalg import (
    DPAlgebra,
    DPElement,
    DifferentialForm,
    SpecialDerivation,
    WrongDegree,
    derivation_action_on_form,
    dx,
    exterior_d,
    nondegenerate,
    omega_H,
    omega_K,
    omega_S,
    partial_derivative,
)
from .liealg import Filtration, Grading, LieAlgebra, PreconditionFailed
from .linalg import SubspaceBasis, matmul, nullspace, solve_linear

__all__ = [
    "DegenerateForm",
    "InvalidDecomposition",
    "BadBlockShape",
    "CartanDescriptor",
    "NormalFormSpec",
    "build_witt",
    "build_from_form",
    "build_family",
    "derived_to_stability",
    "standard_maximal_subalgebra",
    "natural_filtration",
    "normal_form",
    "hamiltonian_blocks",
    "is_exact",
    "restrictability_profile",
    "witt_element",
]


class DegenerateForm(ValueError):
    pass


class InvalidDecomposition(ValueError):
    pass


class BadBlockShape(ValueError):
    pass


@dataclass
class CartanDescriptor:
    family: str
    m: int
    n: tuple[int, ...]
    p: int
    weights: tuple[int, ...]
    form: DifferentialForm | None = None


def _weights_for(family: str, m: int) -> tuple[int, ...]:
    if family.upper().endswith("K"):
        return (1,) * (m - 1) + (2,)
    return (1,) * m


def build_witt(m: int, n: Sequence[int] | int, p: int, weights: Sequence[int] | None = None,
               check: bool | str = False) -> LieAlgebra:
    """W(m;n) with its grading of type ``weights`` (default 1,...,1)."""
    O = DPAlgebra(m, n, p)
    w = tuple(weights) if weights is not None else (1,) * m
    alphas = np.array(list(itertools.product(*(range(s) for s in O.shape))), dtype=np.int64)
    N = len(alphas)
    mdeg = alphas @ np.array(w)
    keys = [(int(mdeg[a]) - w[i], tuple(int(v) for v in alphas[a]), i) for a in range(N) for i in range(m)]
    order = sorted(range(len(keys)), key=lambda t: keys[t])
    pos = np.empty(len(keys), dtype=np.int64)
    pos[order] = np.arange(len(keys))  # pos[a*m + i] = basis index of x^a d_i
    dim = N * m
    strides = np.array([int(np.prod(O.shape[k + 1:])) for k in range(m)], dtype=np.int64)
    shape = np.array(O.shape)

    rows, cols, vals = [], [], []
    A = alphas[:, None, :]
    B = alphas[None, :, :]
    for i in range(m):
        for j in range(m):
            # x^a d_i (x^b) d_j = binom(a + b - e_i, a) x^(a+b-e_i) d_j
            Bm = B.copy()
            Bm[..., i] -= 1
            ok = (Bm[..., i] >= 0)
            G = A + Bm
            ok = ok & np.all(G < shape, axis=-1)
            coef = np.ones((N, N), dtype=np.int64)
            for k in range(m):
                T = O._tables[k]
                coef = coef * T[np.broadcast_to(A[..., k], (N, N)), np.clip(Bm[..., k], 0, None)] % p
            coef = np.where(ok, coef, 0) % p
            a_idx, b_idx = np.nonzero(coef)
            if not len(a_idx):
                continue
            g_flat = (G[a_idx, b_idx] * strides).sum(axis=1)
            c = coef[a_idx, b_idx]
            # [x^a d_i, x^b d_j] gets +c x^g d_j ; [x^b d_j, x^a d_i] gets -c x^g d_j
            r1 = pos[a_idx * m + i] * dim + pos[b_idx * m + j]
            r2 = pos[b_idx * m + j] * dim + pos[a_idx * m + i]
            tgt = pos[g_flat * m + j]
            rows += [r1, r2]
            cols += [tgt, tgt]
            vals += [c, (-c) % p]
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    table = sp.coo_matrix((vals, (rows, cols)), shape=(dim * dim, dim)).tocsr()
    table.sum_duplicates()
    labels = [f"x^{keys[t][1]}d{keys[t][2] + 1}" for t in order]
    degs = tuple(keys[t][0] for t in order)
    nstr = ",".join(map(str, O.n))
    L = LieAlgebra(table, p, labels, grading=Grading(degs), name=f"W({m};{nstr})", check=check)
    L.metadata.update({"family": "W", "m": m, "n": list(O.n), "p": p, "weights": list(w),
                       "basis_keys": [[list(keys[t][1]), keys[t][2] + 1] for t in order]})
    L.metadata["_dp"] = O
    L.metadata["_ambient"] = L
    L.metadata["embedding"] = np.eye(dim, dtype=np.int64)
    L.filtration = natural_filtration(L)
    return L


def witt_element(W: LieAlgebra, D: SpecialDerivation) -> np.ndarray:
    """Coordinates of a special derivation in the basis of ``W``."""
    index = _basis_index(W)
    v = np.zeros(W.dim, dtype=np.int64)
    for i, f in enumerate(D.coeffs, start=1):
        for a, c in f.terms():
            v[index[(a, i)]] = (v[index[(a, i)]] + c) % W.p
    return v


def _basis_index(W: LieAlgebra) -> dict:
    idx = W.metadata.get("_index")
    if idx is None:
        idx = {(tuple(a), i): t for t, (a, i) in enumerate(W.metadata["basis_keys"])}
        W.metadata["_index"] = idx
    return idx


def _basis_derivations(W: LieAlgebra) -> list[SpecialDerivation]:
    O = W.metadata["_dp"]
    return [SpecialDerivation.basis_element(O, a, i) for a, i in W.metadata["basis_keys"]]


def _form_vector(w: DifferentialForm) -> np.ndarray:
    return w.vector()


def _homogeneous_degree(w: DifferentialForm, weights) -> int | None:
    if w.exp_factor is not None:
        return None
    degs = set()
    for I, c in w.terms.items():
        for a, _ in c.terms():
            degs.add(sum(x * y for x, y in zip(a, weights)) + sum(weights[i - 1] for i in I))
    return degs.pop() if len(degs) == 1 else None


def _unit_inverse(f: DPElement) -> DPElement:
    """Inverse of f with nonzero constant term (geometric series)."""
    O = f.parent
    c = f.constant_term
    if not c:
        raise DegenerateForm("coefficient is not a unit")
    ci = pow(c, -1, O.p)
    nil = f * ci - O.one()
    acc = O.one()
    term = O.one()
    for _ in range(sum(O.delta)):
        term = -(term * nil)
        if term.is_zero():
            break
        acc = acc + term
    return acc * ci


def build_from_form(m: int, n, p: int, omega: DifferentialForm, mode: str,
                    family: str | None = None, W: LieAlgebra | None = None,
                    check: bool | str = False) -> LieAlgebra:
    """Subalgebra of W(m;n) defined by a membership condition on ``omega``.

    mode: ``annihilate`` (D w = 0), ``scale_by_F`` (D w in F w) or
    ``scale_by_O`` (D w in O(m;n) w).
    """
    if omega.parent.m != m:
        raise WrongDegree("form lives on a different number of variables")
    deg = omega.degree
    if mode in ("annihilate", "scale_by_F") and deg not in (2, m):
        raise WrongDegree("volume or symplectic form expected")
    if mode == "scale_by_O" and deg != 1:
        raise WrongDegree("contact form must have degree 1")
    if not nondegenerate(omega):
        raise DegenerateForm("form is degenerate")
    if family is None:
        family = {("annihilate", m): "S", ("scale_by_F", m): "CS", ("annihilate", 2): "H",
                  ("scale_by_F", 2): "CH", ("scale_by_O", 1): "K"}[(mode, deg if deg != m else m)]
    weights = _weights_for(family, m)
    if W is None:
        W = build_witt(m, n, p, weights)
    ders = _basis_derivations(W)
    body = omega.body()
    cols = []
    if mode == "scale_by_O":
        i0 = next((I for I, c in sorted(omega.terms.items()) if c.constant_term), None)
        if i0 is None:
            raise DegenerateForm("no unit coefficient")
        phi_inv = _unit_inverse(omega.terms[i0])
    for D in ders:
        act = derivation_action_on_form(D, omega).body()
        if mode == "scale_by_O":
            g = act.coefficient(i0) * phi_inv
            act = act - body.scale(g)
        cols.append(_form_vector(act))
    M = np.array(cols, dtype=np.int64).T % p
    if mode == "scale_by_F":
        M = np.concatenate([M, (-_form_vector(body))[:, None] % p], axis=1)
    sol = nullspace(M, p)
    vecs = sol.vectors[:, : W.dim] if sol.dim else np.zeros((0, W.dim), dtype=np.int64)
    V = SubspaceBasis(vecs, p, W.dim)
    nstr = ",".join(map(str, W.metadata["n"]))
    L = W.subalgebra(V, name=f"{family}({m};{nstr};w)", check=check)
    homog = _homogeneous_degree(omega, weights)
    if homog is None:
        L.grading = None
    L.metadata.update({"family": family, "m": m, "n": W.metadata["n"], "p": p,
                       "weights": list(weights), "form": repr(omega), "mode": mode})
    L.metadata["_form"] = omega
    L.metadata["_ambient"] = W
    L.metadata["_dp"] = W.metadata["_dp"]
    L.filtration = natural_filtration(L)
    return L


def build_family(family: str, m: int, n, p: int, check: bool | str = False) -> LieAlgebra:
    """The graded algebras W, S, CS, H, CH, K(m;n) with their standard forms."""
    family = family.upper()
    if family == "W":
        return build_witt(m, n, p, check=check)
    O = DPAlgebra(m, n, p)
    if family in ("S", "CS"):
        w = omega_S(O)
    elif family in ("H", "CH"):
        w = omega_H(O)
    elif family == "K":
        w = omega_K(O)
    else:
        raise ValueError(f"unknown family {family}")
    mode = {"S": "annihilate", "H": "annihilate", "CS": "scale_by_F", "CH": "scale_by_F",
            "K": "scale_by_O"}[family]
    L = build_from_form(m, n, p, w, mode, family=family, check=check)
    nstr = ",".join(map(str, O.n))
    L.name = f"{family}({m};{nstr})"
    return L


def _embedding(L: LieAlgebra) -> np.ndarray:
    return L.metadata["embedding"]


def _sub(L: LieAlgebra, V: SubspaceBasis, name: str) -> LieAlgebra:
    S = L.subalgebra(V, name=name)
    S.metadata["embedding"] = matmul(V.vectors, _embedding(L), L.p) % L.p
    for key in ("_ambient", "_dp", "_form", "family", "m", "n", "p", "weights", "form", "mode"):
        if key in L.metadata:
            S.metadata[key] = L.metadata[key]
    if L.grading is None:
        S.grading = None
    if "_ambient" in S.metadata:
        S.filtration = natural_filtration(S)
    return S


def derived_to_stability(L: LieAlgebra) -> list[LieAlgebra]:
    chain = [L]
    k = 0
    while True:
        cur = chain[-1]
        D = cur.derived()
        if D.dim == cur.dim:
            return chain
        k += 1
        chain.append(_sub(cur, D, f"{L.name}^({k})"))
        if D.dim == 0:
            return chain


def natural_filtration(L: LieAlgebra) -> Filtration:
    """L_(i) = L intersected with the degree >= i part of the ambient W."""
    W = L.metadata["_ambient"]
    E = _embedding(L)
    degs = np.array(W.grading.degrees)
    lo, hi = int(degs.min()), int(degs.max())
    spaces = {}
    for i in range(lo, hi + 2):
        neg = np.flatnonzero(degs < i)
        if len(neg) == 0:
            spaces[i] = L.full_space()
        else:
            spaces[i] = nullspace(E[:, neg].T % L.p, L.p) if L.dim else L.zero_space()
    top = max(i for i in spaces if spaces[i].dim)
    bottom = max(i for i in spaces if spaces[i].dim == L.dim)
    return Filtration({i: spaces[i] for i in range(bottom, top + 1)}, bottom, top)


def standard_maximal_subalgebra(L: LieAlgebra) -> SubspaceBasis:
    """L intersected with W(m;n)_(0)."""
    return natural_filtration(L)[0]


# ---------------------------------------------------------------------------
# normal forms

@dataclass
class NormalFormSpec:
    family: str
    i: int | None = None
    decomposition: tuple | None = None
    A: np.ndarray | None = None
    B: np.ndarray | None = None
    params: dict = field(default_factory=dict)


def _index_set(n: Sequence[int]) -> set[int]:
    """1 together with every k where n_k < n_(k-1)."""
    return {1} | {k for k in range(2, len(n) + 1) if n[k - 1] < n[k - 2]}


def _check_pairs(pairs, used: set, m: int):
    for pr in pairs:
        if len(pr) != 2 or not pr[0] < pr[1]:
            raise InvalidDecomposition(f"pair {pr} must be (i, i') with i < i'")
        used.update(pr)
    if sorted(used) != list(range(1, m + 1)) or len(used) != sum(1 for _ in used):
        raise InvalidDecomposition("not a partition of {1..m}")


def normal_form(spec: NormalFormSpec, m: int, n, p: int) -> DifferentialForm:
    O = DPAlgebra(m, n, p)
    fam = spec.family
    if fam == "volume_exp_i":
        if spec.i not in _index_set(O.n):
            raise InvalidDecomposition(f"i = {spec.i} not in the index set {sorted(_index_set(O.n))}")
        w = omega_S(O).with_factor(O.x(spec.i))
    elif fam == "volume_delta":
        w = omega_S(O).scale(O.one() - O.monomial(O.delta))
    elif fam == "contact_I":
        i0, pairs = spec.decomposition
        if m % 2 == 0:
            raise InvalidDecomposition("contact forms need odd m")
        flat = [i0] + [x for pr in pairs for x in pr]
        if len(flat) != len(set(flat)):
            raise InvalidDecomposition("indices repeat")
        _check_pairs(pairs, {i0}, m)
        t = {(i0,): O.one()}
        for a, b in pairs:
            t[(b,)] = O.x(a)
        w = DifferentialForm(O, 1, t)
    elif fam == "hamiltonian_exp_iI":
        pairs = spec.decomposition
        flat = [x for pr in pairs for x in pr]
        if len(flat) != len(set(flat)):
            raise InvalidDecomposition("indices repeat")
        _check_pairs(pairs, set(), m)
        if spec.i is None or not 1 <= spec.i <= m:
            raise InvalidDecomposition("need 1 <= i <= m")
        eta = DifferentialForm(O, 1, {(b,): O.x(a) for a, b in pairs}, exp_factor=O.x(spec.i))
        w = exterior_d(eta, check=False)
    elif fam == "hamiltonian_AB":
        A = np.asarray(spec.A, dtype=np.int64) % p
        B = np.zeros_like(A) if spec.B is None else np.asarray(spec.B, dtype=np.int64) % p
        if A.shape != (m, m) or B.shape != (m, m) or m % 2:
            raise BadBlockShape("A and B must be m x m with m even")
        if np.any((A + A.T) % p) or np.any((B + B.T) % p):
            raise BadBlockShape("A and B must be skew-symmetric")
        top = [s - 1 for s in O.shape]
        t = {}
        for i in range(m):
            for j in range(i + 1, m):
                c = O.one() * int(A[i, j])
                if B[i, j]:
                    e = [0] * m
                    e[i], e[j] = top[i], top[j]
                    c = c + O.monomial(e, int(B[i, j]))
                if not c.is_zero():
                    t[(i + 1, j + 1)] = c
        w = DifferentialForm(O, 2, t)
    else:
        raise ValueError(f"unknown normal-form family {fam}")
    if not nondegenerate(w):
        raise DegenerateForm(f"{fam} form is degenerate")
    return w


def _jordan(r: int, lam: int) -> np.ndarray:
    J = lam * np.eye(r, dtype=np.int64)
    for k in range(r - 1):
        J[k, k + 1] = 1
    return J


def _cyclic(l: int) -> np.ndarray:
    C = np.zeros((l, l), dtype=np.int64)
    for k in range(l):
        C[k, (k + 1) % l] = 1
    return C


def _block_cyclic(d: int, s: int, lam: int) -> np.ndarray:
    C = np.zeros((d * s, d * s), dtype=np.int64)
    for k in range(d - 1):
        C[k * s:(k + 1) * s, (k + 1) * s:(k + 2) * s] = np.eye(s, dtype=np.int64)
    C[(d - 1) * s:, :s] = _jordan(s, lam)
    return C


def hamiltonian_blocks(blocks: Sequence[tuple], p: int) -> tuple[np.ndarray, np.ndarray]:
    """(A, B) from blocks ``("zero"|"J0", r)``, ``("C", r)`` or ``("Cds", d, s, lam)``.

    ``"zero"`` gives B_i = 0 (not in the canonical list, used for the
    constant form).
    """
    As, Bs = [], []
    for blk in blocks:
        kind = blk[0]
        if kind in ("zero", "J0", "C"):
            r = blk[1]
            X = {"zero": np.zeros((r, r), dtype=np.int64), "J0": _jordan(r, 0), "C": _cyclic(r)}[kind]
        elif kind == "Cds":
            d, s, lam = blk[1:]
            if lam % p == 0:
                raise BadBlockShape("lambda must be nonzero")
            r = d * s
            X = _block_cyclic(d, s, lam)
        else:
            raise BadBlockShape(f"unknown block {kind}")
        Z = np.zeros((r, r), dtype=np.int64)
        I = np.eye(r, dtype=np.int64)
        As.append(np.block([[Z, I], [-I, Z]]))
        Bs.append(np.block([[Z, X], [-X, Z]]))
    m = sum(a.shape[0] for a in As)
    A = np.zeros((m, m), dtype=np.int64)
    B = np.zeros((m, m), dtype=np.int64)
    o = 0
    for a, b in zip(As, Bs):
        k = a.shape[0]
        A[o:o + k, o:o + k] = a
        B[o:o + k, o:o + k] = b
        o += k
    return A % p, B % p


def is_exact(w: DifferentialForm) -> bool:
    """Whether w = d(eta) for a form eta with O(m;n) coefficients."""
    if w.exp_factor is not None:
        return False  # the coefficients do not lie in O(m;n)
    O = w.parent
    k = w.degree
    if k == 0:
        return w.is_zero()
    keys = list(itertools.combinations(range(1, O.m + 1), k - 1))
    cols = []
    for I in keys:
        for a in itertools.product(*(range(s) for s in O.shape)):
            eta = DifferentialForm(O, k - 1, {I: O.monomial(a)})
            cols.append(exterior_d(eta, check=False).vector())
    M = np.array(cols, dtype=np.int64).T % O.p
    return solve_linear(M, w.vector() % O.p, O.p) is not None


def restrictability_profile(L: LieAlgebra) -> dict:
    """Restrictability of L, L^(1), L^(2) next to the n = 1 and exactness tests."""
    from .restricted import is_restrictable

    chain = derived_to_stability(L)
    w = L.metadata.get("_form")
    n_one = all(k == 1 for k in L.metadata["n"])
    in_omega = w is None or w.exp_factor is None
    exact = w is not None and is_exact(w)
    out = {"n_is_1": n_one, "form_in_Omega": in_omega, "form_exact": exact, "terms": []}
    for k, A in enumerate(chain[:3]):
        out["terms"].append({"index": k, "dim": A.dim, "restrictable": is_restrictable(A)})
    return out
