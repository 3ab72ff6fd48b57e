"""Melikian, Brown and classical (Chevalley / matrix) Lie algebras."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .liealg import (
    Grading,
    LieAlgebra,
    closure,
    from_structure_constants,
    matrix_lie_algebra,
    quotient,
)
from .linalg import SubspaceBasis, matmul, to_dense

__all__ = [
    "WrongCharacteristic",
    "UnsupportedType",
    "RootSystem",
    "root_system",
    "build_melikian",
    "melikian_t0_analysis",
    "build_brown_g2",
    "build_chevalley",
    "verify_chevalley",
    "build_matrix_classical",
    "build_heisenberg",
    "graded_quotient",
]


class WrongCharacteristic(ValueError):
    pass


class UnsupportedType(ValueError):
    pass


# ---------------------------------------------------------------------------
# monomial helpers for O(2;n)

class _Monomials:
    def __init__(self, n: Sequence[int], p: int):
        self.p = p
        self.shape = tuple(p**k for k in n)
        self.alphas = sorted(itertools.product(*(range(s) for s in self.shape)),
                             key=lambda a: (sum(a), a))
        self.index = {a: t for t, a in enumerate(self.alphas)}
        self._binom = {}

    def mul(self, a, b):
        """(c, a+b) with c = prod binom(a_k+b_k, b_k) mod p, or None."""
        g = tuple(x + y for x, y in zip(a, b))
        if any(x >= s for x, s in zip(g, self.shape)):
            return None
        c = 1
        for x, y in zip(a, b):
            c = c * comb(x + y, y) % self.p
        return (c, g) if c else None

    @staticmethod
    def d(k, a):
        """d_k x^a = x^(a - e_k)."""
        if a[k] == 0:
            return None
        b = list(a)
        b[k] -= 1
        return tuple(b)


class _Acc:
    """Sparse accumulator for bracket coordinates."""

    def __init__(self, p):
        self.p = p
        self.v: dict[int, int] = {}

    def add(self, idx, c):
        if idx is None or not c % self.p:
            return
        self.v[idx] = (self.v.get(idx, 0) + c) % self.p

    def out(self):
        return {k: v for k, v in self.v.items() if v}


def _mul_into(acc, M, a, b, c, target):
    """acc += c * (x^a x^b) placed by target(monomial)."""
    if a is None or b is None:
        return
    r = M.mul(a, b)
    if r is not None:
        acc.add(target(r[1]), c * r[0])


# ---------------------------------------------------------------------------
# Melikian algebras

def build_melikian(m: int, n: int, p: int = 5, check: bool | str = True) -> LieAlgebra:
    """M(m,n) = W(2;(m,n)) + O(2;(m,n)) + W~(2;(m,n)) in characteristic 5."""
    if p != 5:
        raise WrongCharacteristic("Melikian algebras exist only in characteristic 5")
    M = _Monomials((m, n), p)
    N = len(M.alphas)
    # basis: W part (a, i), O part a, W~ part (a, i); ordered by Z-degree
    items = []
    for a in M.alphas:
        s = sum(a)
        for i in range(2):
            items.append((3 * s - 3, 0, a, i))
            items.append((3 * s - 1, 2, a, i))
        items.append((3 * s - 2, 1, a, None))
    items.sort(key=lambda t: (t[0], t[1], sum(t[2]), t[2], -1 if t[3] is None else t[3]))
    pos = {(kind, a, i): t for t, (_, kind, a, i) in enumerate(items)}
    Wi = lambda a, i: pos[(0, a, i)]
    Oi = lambda a: pos[(1, a, None)]
    Ti = lambda a, i: pos[(2, a, i)]

    def w_bracket(acc, a, i, b, j, place):
        # [x^a d_i, x^b d_j] = x^a d_i(x^b) d_j - x^b d_j(x^a) d_i
        _mul_into(acc, M, a, M.d(i, b), 1, lambda g: place(g, j))
        _mul_into(acc, M, b, M.d(j, a), -1, lambda g: place(g, i))

    def bracket(x, y):
        kx, a, i = x
        ky, b, j = y
        acc = _Acc(p)
        if kx == 0 and ky == 0:
            w_bracket(acc, a, i, b, j, Wi)
        elif kx == 0 and ky == 2:
            w_bracket(acc, a, i, b, j, Ti)
            # + 2 div(D) E~ ; div(x^a d_i) = x^(a - e_i)
            _mul_into(acc, M, M.d(i, a), b, 2, lambda g: Ti(g, j))
        elif kx == 0 and ky == 1:
            # D(f) - 2 div(D) f
            _mul_into(acc, M, a, M.d(i, b), 1, Oi)
            _mul_into(acc, M, M.d(i, a), b, -2, Oi)
        elif kx == 2 and ky == 2:
            # [f1 d~1 + f2 d~2, g1 d~1 + g2 d~2] = f1 g2 - f2 g1
            if i != j:
                _mul_into(acc, M, a, b, 1 if i == 0 else -1, Oi)
        elif kx == 1 and ky == 2:
            # [f, E~] = f E
            _mul_into(acc, M, a, b, 1, lambda g: Wi(g, j))
        elif kx == 1 and ky == 1:
            # 2 (f D~_g - g D~_f),  D_h = d1(h) d2 - d2(h) d1
            for (f, g, s) in ((a, b, 2), (b, a, -2)):
                _mul_into(acc, M, f, M.d(0, g), s, lambda h: Ti(h, 1))
                _mul_into(acc, M, f, M.d(1, g), -s, lambda h: Ti(h, 0))
        else:
            raise AssertionError("unordered pair")
        return acc.out()

    table = {}
    keys = [(kind, a, i) for (_, kind, a, i) in items]
    for s, x in enumerate(keys):
        for t in range(s + 1, len(keys)):
            y = keys[t]
            # reduce to the cases handled above
            pair = (x[0], y[0])
            if pair in ((0, 0), (0, 2), (0, 1), (2, 2), (1, 2), (1, 1)):
                out = bracket(x, y)
                sign = 1
            else:
                out = bracket(y, x)
                sign = -1
            if out:
                table[(s, t)] = {k: (sign * c) % p for k, c in out.items()}
    labels = []
    for (_, kind, a, i) in items:
        if kind == 0:
            labels.append(f"x^{a}d{i + 1}")
        elif kind == 1:
            labels.append(f"x^{a}")
        else:
            labels.append(f"x^{a}d~{i + 1}")
    degs = tuple(d for d, *_ in items)
    L = from_structure_constants(table, p, labels, dim=len(items), check=check,
                                 name=f"M({m},{n})", grading=Grading(degs))
    L.metadata.update({"family": "Melikian", "m": m, "n": [m, n], "p": p,
                       "z3_grading": [kind for (_, kind, _, _) in items],
                       "basis_keys": [[kind, list(a), i] for (_, kind, a, i) in items]})
    L.metadata["_pos"] = pos
    return L


def _melikian_w(L: LieAlgebra, coeffs: dict) -> np.ndarray:
    """Element of the W-component from {(alpha, i): c} (i 0-based)."""
    v = np.zeros(L.dim, dtype=np.int64)
    for (a, i), c in coeffs.items():
        v[L.metadata["_pos"][(0, tuple(a), i)]] += c
    return v % L.p


def melikian_t0_analysis(L: LieAlgebra) -> dict:
    """The torus t0 = F(1+x1)d1 + F(1+x2)d2, its centralizer h and checks."""
    from .liealg import centralizer, normalizer

    p = L.p
    t1 = _melikian_w(L, {((0, 0), 0): 1, ((1, 0), 0): 1})
    t2 = _melikian_w(L, {((0, 0), 1): 1, ((0, 1), 1): 1})
    t0 = L.span([t1, t2])
    h = centralizer(L, t0)
    hh = L.bracket_spaces(h, h)
    hhh = L.bracket_spaces(h, hh)
    # toral check t^[p] = t via (ad t)^p = ad t on the centreless algebra
    toral = []
    for t in (t1, t2):
        A = to_dense(L.ad(t))
        Ap = A.copy()
        for _ in range(p - 1):
            Ap = to_dense(matmul(Ap, A, p)) % p
        toral.append(bool(np.array_equal(Ap % p, A % p)))
    return {
        "t0": t0,
        "h": h,
        "dim_h": h.dim,
        "self_normalizing": normalizer(L, h).dim == h.dim,
        "hhh_equals_t0": hhh == t0,
        "h_abelian": hh.dim == 0,
        "h_nilpotent": _is_nilpotent_sub(L, h),
        "t0_toral": all(toral),
        "triangulable": False if hhh.dim else True,
    }


def _is_nilpotent_sub(L: LieAlgebra, V: SubspaceBasis) -> bool:
    cur = V
    for _ in range(V.dim + 1):
        nxt = L.bracket_spaces(V, cur)
        if nxt.dim == 0:
            return True
        if nxt.dim == cur.dim and nxt == cur:
            return False
        cur = nxt
    return False


# ---------------------------------------------------------------------------
# Brown algebras in characteristic 2

def build_brown_g2(n: Sequence[int] = (1, 1), p: int = 2, return_cover: bool = False,
                   check: bool | str = True):
    """G2(2;n) = (L / z(L))^(1) for Brown's Z/3-graded algebra L."""
    if p != 2:
        raise WrongCharacteristic("Brown's construction is in characteristic 2")
    M = _Monomials(tuple(n), p)
    items = []
    for a in M.alphas:
        s = sum(a)
        for i in range(2):
            items.append((3 * s - 3, 0, a, i))
        items.append((3 * s - 2, 1, a, None))  # f u
        items.append((3 * s - 4, 2, a, None))  # f
    items.sort(key=lambda t: (t[0], t[1], t[2], -1 if t[3] is None else t[3]))
    pos = {(kind, a, i): t for t, (_, kind, a, i) in enumerate(items)}
    Wi = lambda a, i: pos[(0, a, i)]
    Ui = lambda a: pos[(1, a, None)]
    Oi = lambda a: pos[(2, a, None)]

    def bracket(x, y):
        kx, a, i = x
        ky, b, j = y
        acc = _Acc(p)
        if kx == 0 and ky == 0:
            _mul_into(acc, M, a, M.d(i, b), 1, lambda g: Wi(g, j))
            _mul_into(acc, M, b, M.d(j, a), -1, lambda g: Wi(g, i))
        elif kx == 0 and ky == 1:
            # div(f D) u with f D = x^b x^a d_i
            r = M.mul(a, b)
            if r is not None:
                acc.add(Ui(M.d(i, r[1])) if M.d(i, r[1]) is not None else None, r[0])
        elif kx == 0 and ky == 2:
            _mul_into(acc, M, a, M.d(i, b), 1, Oi)
        elif kx == 1 and ky == 1:
            pass
        elif kx == 1 and ky == 2:
            # f D_g = f d1(g) d2 - f d2(g) d1
            _mul_into(acc, M, a, M.d(0, b), 1, lambda h: Wi(h, 1))
            _mul_into(acc, M, a, M.d(1, b), -1, lambda h: Wi(h, 0))
        elif kx == 2 and ky == 2:
            # D_g(f) u = d1(g) d2(f) - d2(g) d1(f)
            _mul_into(acc, M, M.d(0, b), M.d(1, a), 1, Ui)
            _mul_into(acc, M, M.d(1, b), M.d(0, a), -1, Ui)
        else:
            raise AssertionError
        return acc.out()

    keys = [(kind, a, i) for (_, kind, a, i) in items]
    handled = {(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)}
    table = {}
    for s, x in enumerate(keys):
        for t in range(len(keys)):
            if t == s:
                continue
            y = keys[t]
            if (x[0], y[0]) in handled and (x[0] != y[0] or s < t):
                out = bracket(x, y)
                if out:
                    table[(s, t)] = out
                    table[(t, s)] = {k: (-c) % p for k, c in out.items()}
    # [x, x] = 0 on basis vectors inside one component
    for x in keys:
        if bracket(x, x):
            raise AssertionError("[x, x] != 0 on a basis vector")
    labels = []
    for (_, kind, a, i) in items:
        labels.append(f"x^{a}d{i + 1}" if kind == 0 else (f"x^{a}u" if kind == 1 else f"x^{a}"))
    degs = tuple(d for d, *_ in items)
    cover = from_structure_constants(table, p, labels, dim=len(items), check=check,
                                     name=f"Brown L(2;{tuple(n)})", grading=Grading(degs))
    z = cover.center()
    Q = graded_quotient(cover, z)
    D = Q.derived()
    G = Q.subalgebra(D, name=f"G2(2;{','.join(map(str, n))})")
    G.metadata.update({"family": "Brown-G2", "n": list(n), "p": p})
    if return_cover:
        return G, cover, z
    return G


def graded_quotient(L: LieAlgebra, I: SubspaceBasis) -> LieAlgebra:
    """Quotient keeping the grading when the ideal is homogeneous."""
    q = quotient(L, I)
    Q = q.algebra
    if L.grading is not None:
        Q.grading = Grading(tuple(L.grading.degrees[c] for c in q.transversal))
    Q.metadata["_quotient"] = q
    return Q


# ---------------------------------------------------------------------------
# root systems and Chevalley bases

class RootSystem:
    def __init__(self, kind: str, rank: int):
        self.kind, self.rank = kind, rank
        self.cartan = _cartan_matrix(kind, rank)
        A = self.cartan
        l = rank
        # symmetrize: (a_i, a_j) = d_i A_ij with d_i = (a_i, a_i)/2
        d = _symmetrizer(A)
        self.gram = np.array([[d[i] * A[i, j] for j in range(l)] for i in range(l)], dtype=np.int64)
        self.pos = self._positive_roots()
        self.roots = self.pos + [tuple(-c for c in r) for r in self.pos]
        self.root_set = set(self.roots)
        # order: height then lexicographic on positive roots
        self.pos.sort(key=lambda r: (sum(r), r))
        self.rank_of = {r: t for t, r in enumerate(self.pos)}

    def ip(self, a, b) -> int:
        a, b = np.array(a), np.array(b)
        return int(a @ self.gram @ b)

    def pairing(self, beta, i) -> int:
        """<beta, alpha_i^vee> = 2 (beta, a_i) / (a_i, a_i)."""
        e = [0] * self.rank
        e[i] = 1
        return 2 * self.ip(beta, e) // self.ip(e, e)

    def _positive_roots(self):
        l = self.rank
        simple = [tuple(1 if k == i else 0 for k in range(l)) for i in range(l)]
        roots = list(simple)
        known = set(roots)
        frontier = list(simple)
        while frontier:
            new = []
            for b in frontier:
                for i in range(l):
                    # p = largest k with b - k a_i a root
                    pp = 0
                    while True:
                        c = list(b)
                        c[i] -= pp + 1
                        if tuple(c) in known and all(x >= 0 for x in c):
                            pp += 1
                        else:
                            break
                    q = pp - self.pairing(b, i)
                    if q > 0:
                        c = list(b)
                        c[i] += 1
                        c = tuple(c)
                        if c not in known:
                            known.add(c)
                            roots.append(c)
                            new.append(c)
            frontier = new
        return roots

    def is_root(self, r) -> bool:
        return tuple(r) in self.root_set

    def is_positive(self, r) -> bool:
        return all(x >= 0 for x in r) and any(r)

    def string_below(self, alpha, beta) -> int:
        """Largest q with beta - q alpha a root."""
        q = 0
        while self.is_root(tuple(b - (q + 1) * a for a, b in zip(alpha, beta))):
            q += 1
        return q

    def coroot(self, alpha) -> list[Fraction]:
        """alpha^vee = 2 alpha / (alpha, alpha) in simple-coroot coordinates."""
        aa = self.ip(alpha, alpha)
        out = []
        for i, c in enumerate(alpha):
            e = [0] * self.rank
            e[i] = 1
            out.append(Fraction(c * self.ip(e, e), aa))
        return out


def _cartan_matrix(kind: str, l: int) -> np.ndarray:
    kind = kind.upper()
    A = 2 * np.eye(l, dtype=np.int64)
    if kind == "A" and l >= 1:
        for i in range(l - 1):
            A[i, i + 1] = A[i + 1, i] = -1
    elif kind == "B" and l >= 2:
        for i in range(l - 1):
            A[i, i + 1] = A[i + 1, i] = -1
        A[l - 2, l - 1] = -2  # a_l short
    elif kind == "C" and l >= 3:
        for i in range(l - 1):
            A[i, i + 1] = A[i + 1, i] = -1
        A[l - 1, l - 2] = -2  # a_l long
    elif kind == "D" and l >= 4:
        for i in range(l - 2):
            A[i, i + 1] = A[i + 1, i] = -1
        A[l - 3, l - 1] = A[l - 1, l - 3] = -1
    elif kind == "G" and l == 2:
        A[0, 1] = -1
        A[1, 0] = -3  # a_1 short
    elif kind == "F" and l == 4:
        A[0, 1] = A[1, 0] = -1
        A[1, 2] = -2
        A[2, 1] = -1
        A[2, 3] = A[3, 2] = -1
    elif kind == "E" and l in (6, 7, 8):
        # Bourbaki labelling: 1-3-4-5-6(-7-8), 2 attached to 4
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, l - 1)]
        for i, j in edges:
            A[i, j] = A[j, i] = -1
    else:
        raise UnsupportedType(f"unsupported root system {kind}{l}")
    return A


def _symmetrizer(A: np.ndarray) -> list[int]:
    """Positive integers d_i with d_i A_ij = d_j A_ji, smallest = 1."""
    l = A.shape[0]
    d = [None] * l
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(l):
            if j != i and A[i, j] and d[j] is None:
                d[j] = d[i] * Fraction(int(A[i, j]), int(A[j, i]))
                stack.append(j)
    m = min(d)
    d = [x / m for x in d]
    return [int(x) for x in d]


def root_system(kind: str, rank: int) -> RootSystem:
    return RootSystem(kind, rank)


def _structure_constants(R: RootSystem) -> dict:
    """Integral N_{a,b} from extraspecial pairs (sign +, value q+1)."""
    pos = R.pos
    rank_of = R.rank_of
    extraspecial = {}
    for xi in pos:
        if sum(xi) == 1:
            continue
        for a in pos:
            b = tuple(x - y for x, y in zip(xi, a))
            if R.is_root(b) and R.is_positive(b) and rank_of[a] < rank_of[b]:
                extraspecial[xi] = (a, b)
                break
    memo: dict = {}

    def neg(r):
        return tuple(-x for x in r)

    def add(r, s):
        return tuple(x + y for x, y in zip(r, s))

    def length(r):
        return R.ip(r, r)

    def N(x, y) -> Fraction:
        s = add(x, y)
        if not R.is_root(s):
            return Fraction(0)
        key = (x, y)
        if key in memo:
            return memo[key]
        px, py = R.is_positive(x), R.is_positive(y)
        if px and py:
            if rank_of[x] > rank_of[y]:
                val = -N(y, x)
            else:
                val = special(x, y)
        elif not px and not py:
            val = -N(neg(x), neg(y))
        else:
            z = neg(s)
            pz = R.is_positive(z)
            if px:  # y negative
                if pz:
                    val = Fraction(length(z), length(y)) * N(z, x)
                else:
                    val = Fraction(length(z), length(x)) * N(y, z)
            else:  # x negative, y positive
                if pz:
                    val = Fraction(length(z), length(x)) * N(y, z)
                else:
                    val = Fraction(length(z), length(y)) * N(z, x)
        memo[key] = val
        return val

    def special(r, s) -> Fraction:
        xi = add(r, s)
        a, b = extraspecial[xi]
        if (r, s) == (a, b):
            return Fraction(R.string_below(a, b) + 1)
        t1 = Fraction(0)
        br = add(b, neg(r))
        if R.is_root(br):
            t1 = N(b, neg(r)) * N(a, neg(s)) / length(br)
        t2 = Fraction(0)
        ar = add(a, neg(r))
        if R.is_root(ar):
            t2 = N(neg(r), a) * N(b, neg(s)) / length(ar)
        return Fraction(length(xi)) / N(a, b) * (t1 + t2)

    out = {}
    for x in R.roots:
        for y in R.roots:
            if R.is_root(add(x, y)):
                v = N(x, y)
                if v.denominator != 1:
                    raise AssertionError("non-integral structure constant")
                out[(x, y)] = int(v)
    return out


def _chevalley_integral(kind: str, rank: int):
    R = root_system(kind, rank)
    Nc = _structure_constants(R)
    roots = R.pos + [tuple(-c for c in r) for r in reversed(R.pos)]
    l = rank
    # basis: positive roots, h_1..h_l, negative roots
    idx = {}
    labels = []
    for t, r in enumerate(R.pos):
        idx[r] = t
        labels.append(f"e{list(r)}")
    hbase = len(R.pos)
    for i in range(l):
        labels.append(f"h{i + 1}")
    for t, r in enumerate(reversed(R.pos)):
        nr = tuple(-c for c in r)
        idx[nr] = hbase + l + t
        labels.append(f"e-{list(r)}")
    table: dict = {}
    for i in range(l):
        for b in R.roots:
            c = R.pairing(b, i)
            if c:
                table[(hbase + i, idx[b])] = {idx[b]: c}
    for a in R.roots:
        for b in R.roots:
            if idx[a] >= idx[b]:
                continue
            s = tuple(x + y for x, y in zip(a, b))
            if not any(s):
                cor = R.coroot(a)
                table[(idx[a], idx[b])] = {hbase + i: int(c) for i, c in enumerate(cor) if c}
            elif R.is_root(s):
                table[(idx[a], idx[b])] = {idx[s]: Nc[(a, b)]}
    return R, table, labels, idx, hbase


def build_chevalley(kind: str, rank: int, p: int, check: bool | str = True) -> LieAlgebra:
    """Chevalley basis algebra of type kind_rank reduced mod p."""
    if p <= 3:
        raise WrongCharacteristic("Chevalley construction needs p > 3")
    R, table, labels, idx, hbase = _chevalley_integral(kind, rank)
    # Jacobi over Z: reduce modulo a large prime exceeding all possible values
    big = 1000003
    from_structure_constants(table, big, labels, dim=len(labels), check=True)
    L = from_structure_constants(table, p, labels, dim=len(labels), check=check,
                                 name=f"{kind.upper()}{rank}")
    # height grading
    degs = [sum(r) for r in R.pos] + [0] * rank + [-sum(r) for r in reversed(R.pos)]
    L.grading = Grading(tuple(degs))
    pm = {}
    for i in range(rank):
        v = np.zeros(L.dim, dtype=np.int64)
        v[hbase + i] = 1
        pm[hbase + i] = v
    for r, t in idx.items():
        pm[t] = np.zeros(L.dim, dtype=np.int64)
    L.pmap = pm
    L.metadata.update({"family": "Chevalley", "type": kind.upper(), "rank": rank, "p": p,
                       "sign_convention": "extraspecial pairs positive; roots ordered by height then lex"})
    L.metadata["_roots"] = R
    L.metadata["_root_index"] = idx
    L.metadata["_hbase"] = hbase
    return L


def verify_chevalley(L: LieAlgebra) -> dict[str, bool]:
    """Recheck the four Chevalley-basis relations over GF(p)."""
    R = L.metadata["_roots"]
    idx = L.metadata["_root_index"]
    hb = L.metadata["_hbase"]
    p = L.p
    l = R.rank
    E = np.eye(L.dim, dtype=np.int64)
    ok1 = all(not np.any(L.bracket(E[hb + i], E[hb + j])) for i in range(l) for j in range(l))
    ok2 = all(np.array_equal(L.bracket(E[hb + i], E[idx[b]]), (R.pairing(b, i) * E[idx[b]]) % p)
              for i in range(l) for b in R.roots)
    ok3 = True
    for a in R.roots:
        na = tuple(-c for c in a)
        h = L.bracket(E[idx[a]], E[idx[na]])
        if np.any(np.delete(h, range(hb, hb + l))):
            ok3 = False
        cor = R.coroot(a)
        if any(c.denominator != 1 for c in cor) or not np.array_equal(
                h[hb:hb + l], np.array([int(c) for c in cor]) % p):
            ok3 = False
    ok4 = True
    qs = set()
    for a in R.roots:
        for b in R.roots:
            s = tuple(x + y for x, y in zip(a, b))
            if not R.is_root(s):
                continue
            q = R.string_below(a, b)
            qs.add(q)
            v = L.bracket(E[idx[a]], E[idx[b]])
            expect = {(q + 1) % p, (-(q + 1)) % p}
            if np.any(np.delete(v, idx[s])) or int(v[idx[s]]) not in expect:
                ok4 = False
    return {"1": ok1, "2": ok2, "3": ok3, "4": ok4 and qs <= {0, 1, 2}}


# ---------------------------------------------------------------------------
# matrix algebras

def _E(n, i, j):
    M = np.zeros((n, n), dtype=np.int64)
    M[i, j] = 1
    return M


def build_matrix_classical(kind: str, size: int, p: int) -> LieAlgebra:
    """gl, sl, pgl or psl of ``size`` x ``size`` matrices over GF(p)."""
    n = size
    if n < 2:
        raise ValueError("size must be at least 2")
    kind = kind.lower()
    if kind in ("gl", "pgl"):
        mats = [_E(n, i, j) for i in range(n) for j in range(n)]
        labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    elif kind in ("sl", "psl"):
        mats, labels = [], []
        for i in range(n):
            for j in range(n):
                if i != j:
                    mats.append(_E(n, i, j))
                    labels.append(f"E{i + 1}{j + 1}")
        for i in range(n - 1):
            mats.append(_E(n, i, i) - _E(n, i + 1, i + 1))
            labels.append(f"H{i + 1}")
    else:
        raise ValueError(f"unknown kind {kind}")
    L = matrix_lie_algebra(mats, p, name=f"{kind[:-2] if kind.startswith('p') else ''}{kind[-2:]}({n})",
                           labels=labels)
    L.name = f"gl({n})" if kind == "gl" else f"sl({n})"
    # E_ij has degree j - i, diagonal matrices degree 0
    L.grading = Grading(tuple(int(lab[2]) - int(lab[1]) if lab[0] == "E" else 0 for lab in labels))
    if kind == "pgl":
        ident = np.zeros(L.dim, dtype=np.int64)
        for i in range(n):
            ident[i * n + i] = 1
        return _graded_quotient(L, L.span([ident]), f"pgl({n})")
    if kind == "psl":
        z = L.center()
        if z.dim == 0:
            L.name = f"psl({n})"
            return L
        return _graded_quotient(L, z, f"psl({n})")
    return L


def _graded_quotient(L: LieAlgebra, I: SubspaceBasis, name: str) -> LieAlgebra:
    q = quotient(L, I)
    Q = q.algebra
    Q.name = name
    Q.grading = Grading(tuple(L.grading.degrees[c] for c in q.transversal))
    return Q


def build_heisenberg(r: int, p: int) -> LieAlgebra:
    """Heisenberg algebra of dim 2r+1: [x_i, y_i] = z."""
    n = 2 * r + 1
    table = {(i, r + i): {2 * r: 1} for i in range(r)}
    labels = [f"x{i + 1}" for i in range(r)] + [f"y{i + 1}" for i in range(r)] + ["z"]
    L = from_structure_constants(table, p, labels, dim=n, name=f"heis({n})")
    L.grading = Grading(tuple([-1] * (2 * r) + [-2]))
    return L
