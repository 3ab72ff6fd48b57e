"""Truncated divided-power algebras O(m;n), special derivations and forms.

Elements are dense coefficient arrays of shape ``(p^n_1, ..., p^n_m)``;
entry ``[a_1, ..., a_m]`` is the coefficient of the divided-power monomial
``x^(a)``.  Products use ``x^a x^b = binom(a+b, b) x^(a+b)``, which vanishes
mod p whenever some a_i + b_i leaves the box, so O(m;n) is a subalgebra.

A differential form may carry an exponential prefactor ``exp(u)``.  The
factor lives in the completion, so it is kept symbolic and the identities
``D(exp(u) w) = exp(u) (D(u) w + D w)`` and ``d(exp(u) w) = exp(u) (du ^ w + dw)``
are used instead of truncating the series.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ParentMismatch",
    "NonzeroConstantTerm",
    "SBeyondCharacteristic",
    "WrongDegree",
    "NotClosed",
    "DPAlgebra",
    "DPElement",
    "SpecialDerivation",
    "DifferentialForm",
    "dp_multiply",
    "divided_power",
    "exp_truncated",
    "partial_derivative",
    "exterior_d",
    "wedge",
    "derivation_action_on_form",
    "form_divided_power",
    "nondegenerate",
    "omega_S",
    "omega_H",
    "omega_K",
    "dx",
]


class ParentMismatch(TypeError):
    pass


class NonzeroConstantTerm(ValueError):
    pass


class SBeyondCharacteristic(NotImplementedError):
    pass


class WrongDegree(ValueError):
    pass


class NotClosed(ValueError):
    pass


@lru_cache(maxsize=None)
def _binom_table(bound: int, p: int) -> np.ndarray:
    """T[a, b] = binom(a+b, b) mod p, zero when a+b >= bound."""
    T = np.zeros((bound, bound), dtype=np.int64)
    for a in range(bound):
        for b in range(bound - a):
            T[a, b] = comb(a + b, b) % p
    return T


class DPAlgebra:
    """Descriptor for O(m;n) over GF(p)."""

    _cache: dict = {}

    def __new__(cls, m: int, n: Sequence[int] | int, p: int):
        if isinstance(n, int):
            n = (n,) * m
        n = tuple(int(k) for k in n)
        key = (m, n, p)
        obj = cls._cache.get(key)
        if obj is None:
            if len(n) != m or m < 1 or min(n) < 1:
                raise ValueError("need m >= 1 and n_i >= 1 for each variable")
            obj = super().__new__(cls)
            obj.m, obj.n, obj.p = m, n, p
            obj.shape = tuple(p**k for k in n)
            obj.size = int(np.prod(obj.shape))
            obj._tables = [_binom_table(s, p) for s in obj.shape]
            cls._cache[key] = obj
        return obj

    def __reduce__(self):
        return (DPAlgebra, (self.m, self.n, self.p))

    def __repr__(self):
        return f"O({self.m};{self.n}) over GF({self.p})"

    @property
    def delta(self) -> tuple[int, ...]:
        return tuple(s - 1 for s in self.shape)

    def zero(self) -> "DPElement":
        return DPElement(self, np.zeros(self.shape, dtype=np.int64))

    def one(self) -> "DPElement":
        return self.monomial((0,) * self.m)

    def monomial(self, alpha: Sequence[int], c: int = 1) -> "DPElement":
        a = np.zeros(self.shape, dtype=np.int64)
        alpha = tuple(alpha)
        if any(not 0 <= x < s for x, s in zip(alpha, self.shape)):
            return self.zero()
        a[alpha] = c % self.p
        return DPElement(self, a)

    def x(self, i: int) -> "DPElement":
        """The variable x_i (1-based)."""
        e = [0] * self.m
        e[i - 1] = 1
        return self.monomial(e)

    def basis(self) -> list[tuple[int, ...]]:
        """Multi-indices ordered by total degree, then lexicographically."""
        idx = list(itertools.product(*(range(s) for s in self.shape)))
        return sorted(idx, key=lambda a: (sum(a), a))

    def degree(self, alpha: Sequence[int], weights: Sequence[int] | None = None) -> int:
        w = weights or (1,) * self.m
        return sum(a * x for a, x in zip(alpha, w))

    def random_element(self, rng: np.random.Generator, no_constant: bool = False,
                       density: float = 0.3) -> "DPElement":
        a = rng.integers(0, self.p, self.shape) * (rng.random(self.shape) < density)
        if no_constant:
            a[(0,) * self.m] = 0
        return DPElement(self, a)


class DPElement:
    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: DPAlgebra, coeffs: np.ndarray):
        self.parent = parent
        self.coeffs = np.asarray(coeffs, dtype=np.int64) % parent.p

    def _check(self, other):
        if not isinstance(other, DPElement) or other.parent is not self.parent:
            raise ParentMismatch("elements of different divided-power algebras")

    def __add__(self, other):
        self._check(other)
        return DPElement(self.parent, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return DPElement(self.parent, self.coeffs - other.coeffs)

    def __neg__(self):
        return DPElement(self.parent, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, DPElement):
            return dp_multiply(self, other)
        return DPElement(self.parent, self.coeffs * int(other))

    def __rmul__(self, other):
        return DPElement(self.parent, self.coeffs * int(other))

    def __eq__(self, other):
        return isinstance(other, DPElement) and other.parent is self.parent and np.array_equal(
            self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    @property
    def constant_term(self) -> int:
        return int(self.coeffs[(0,) * self.parent.m])

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        nz = np.argwhere(self.coeffs)
        return [(tuple(int(v) for v in a), int(self.coeffs[tuple(a)])) for a in nz]

    def __repr__(self):
        ts = self.terms()
        if not ts:
            return "0"
        return " + ".join(f"{c}*x^{a}" for a, c in ts)


def dp_multiply(f: DPElement, g: DPElement) -> DPElement:
    f._check(g)
    O = f.parent
    out = np.zeros(O.shape, dtype=np.int64)
    gc = g.coeffs
    if not np.any(gc):
        return O.zero()
    for alpha, c in f.terms():
        w = gc * c
        for i, a in enumerate(alpha):
            if a:
                shp = [1] * O.m
                shp[i] = O.shape[i]
                w = w * O._tables[i][a].reshape(shp)
        w %= O.p
        src = tuple(slice(0, s - a) for s, a in zip(O.shape, alpha))
        dst = tuple(slice(a, s) for s, a in zip(O.shape, alpha))
        out[dst] += w[src]
    return DPElement(O, out)


def _monomial_divided_power_coeff(alpha: Sequence[int], s: int, p: int) -> int:
    """(s alpha)! / ((alpha!)^s s!) mod p, coordinatewise product of factorials."""
    num = 1
    den = factorial(s)
    for a in alpha:
        num *= factorial(s * a)
        den *= factorial(a) ** s
    return (num // den) % p


def divided_power(f: DPElement, s: int) -> DPElement:
    """f^(s) for f without constant term, via the sum rule over monomials."""
    if f.constant_term:
        raise NonzeroConstantTerm("divided powers need a zero constant term")
    O = f.parent
    if s < 0:
        raise ValueError("s must be nonnegative")
    if s == 0:
        return O.one()
    terms = f.terms()

    @lru_cache(maxsize=None)
    def mono_power(t: int, k: int) -> DPElement:
        alpha, c = terms[t]
        if k == 0:
            return O.one()
        beta = tuple(k * a for a in alpha)
        coeff = _monomial_divided_power_coeff(alpha, k, O.p) * pow(c, k, O.p)
        return O.monomial(beta, coeff)

    @lru_cache(maxsize=None)
    def rest_power(t: int, k: int) -> DPElement:
        # (sum of terms[t:])^(k)
        if k == 0:
            return O.one()
        if t == len(terms):
            return O.zero()
        acc = O.zero()
        for i in range(k + 1):
            a = mono_power(t, i)
            if a.is_zero():
                break
            b = rest_power(t + 1, k - i)
            if not b.is_zero():
                acc = acc + a * b
        return acc

    return rest_power(0, s)


def _max_degree(O: DPAlgebra) -> int:
    return sum(O.delta)


def exp_truncated(f: DPElement) -> DPElement:
    """exp f = sum of f^(i); finitely many terms survive in O(m;n)."""
    if f.constant_term:
        raise NonzeroConstantTerm("exp needs a zero constant term")
    O = f.parent
    acc = O.one()
    for i in range(1, _max_degree(O) + 1):
        t = divided_power(f, i)
        if t.is_zero():
            # lowest degree of f^(i) is >= i, but coefficients may still vanish early
            continue
        acc = acc + t
    return acc


def partial_derivative(i: int, f: DPElement) -> DPElement:
    """d/dx_i (1-based): x^a -> x^(a - e_i)."""
    O = f.parent
    if not 1 <= i <= O.m:
        raise IndexError("variable index out of range")
    ax = i - 1
    out = np.zeros(O.shape, dtype=np.int64)
    src = [slice(None)] * O.m
    dst = [slice(None)] * O.m
    src[ax] = slice(1, None)
    dst[ax] = slice(0, -1)
    out[tuple(dst)] = f.coeffs[tuple(src)]
    return DPElement(O, out)


# ---------------------------------------------------------------------------
# special derivations

class SpecialDerivation:
    """sum_i f_i d_i with f_i in O(m;n)."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, coeffs: Sequence[DPElement]):
        coeffs = tuple(coeffs)
        O = coeffs[0].parent
        if len(coeffs) != O.m or any(c.parent is not O for c in coeffs):
            raise ParentMismatch("derivation needs m coefficients from one algebra")
        self.parent = O
        self.coeffs = coeffs

    @classmethod
    def basis_element(cls, O: DPAlgebra, alpha, i: int, c: int = 1) -> "SpecialDerivation":
        """c x^alpha d_i (i 1-based)."""
        fs = [O.zero() for _ in range(O.m)]
        fs[i - 1] = O.monomial(alpha, c)
        return cls(fs)

    @classmethod
    def partial(cls, O: DPAlgebra, i: int) -> "SpecialDerivation":
        return cls.basis_element(O, (0,) * O.m, i)

    def __call__(self, g: DPElement) -> DPElement:
        acc = self.parent.zero()
        for i, f in enumerate(self.coeffs, start=1):
            if not f.is_zero():
                acc = acc + f * partial_derivative(i, g)
        return acc

    def bracket(self, other: "SpecialDerivation") -> "SpecialDerivation":
        if other.parent is not self.parent:
            raise ParentMismatch("derivations of different algebras")
        return SpecialDerivation([self(g) - other(f) for f, g in zip(self.coeffs, other.coeffs)])

    def divergence(self) -> DPElement:
        acc = self.parent.zero()
        for i, f in enumerate(self.coeffs, start=1):
            acc = acc + partial_derivative(i, f)
        return acc

    def __add__(self, other):
        return SpecialDerivation([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return SpecialDerivation([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rmul__(self, c):
        if isinstance(c, DPElement):
            return SpecialDerivation([c * f for f in self.coeffs])
        return SpecialDerivation([f * int(c) for f in self.coeffs])

    __mul__ = __rmul__

    def __eq__(self, other):
        return isinstance(other, SpecialDerivation) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.coeffs)

    def vector(self) -> np.ndarray:
        return np.concatenate([f.coeffs.reshape(-1) for f in self.coeffs])

    def __repr__(self):
        parts = [f"({f})*d{i}" for i, f in enumerate(self.coeffs, start=1) if not f.is_zero()]
        return " + ".join(parts) or "0"


# ---------------------------------------------------------------------------
# differential forms

def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting idx, or 0 on a repeated index."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class DifferentialForm:
    """exp(u) * sum_I c_I dx_I with sorted 1-based index tuples I."""

    __slots__ = ("parent", "degree", "terms", "exp_factor")

    def __init__(self, parent: DPAlgebra, degree: int, terms: dict | None = None,
                 exp_factor: DPElement | None = None):
        self.parent = parent
        self.degree = degree
        self.terms = {}
        for I, c in (terms or {}).items():
            if len(I) != degree:
                raise WrongDegree(f"index {I} in a degree-{degree} form")
            s, J = _sort_sign(I)
            if s == 0 or c.is_zero():
                continue
            cur = self.terms.get(J, parent.zero())
            val = cur + (c if s == 1 else -c)
            if val.is_zero():
                self.terms.pop(J, None)
            else:
                self.terms[J] = val
        if exp_factor is not None:
            if exp_factor.constant_term:
                raise NonzeroConstantTerm("exponential factor needs a zero constant term")
            if exp_factor.is_zero():
                exp_factor = None
        self.exp_factor = exp_factor

    @classmethod
    def zero(cls, O: DPAlgebra, degree: int) -> "DifferentialForm":
        return cls(O, degree, {})

    @classmethod
    def function(cls, f: DPElement) -> "DifferentialForm":
        return cls(f.parent, 0, {(): f})

    def body(self) -> "DifferentialForm":
        return DifferentialForm(self.parent, self.degree, dict(self.terms))

    def with_factor(self, u: DPElement | None) -> "DifferentialForm":
        return DifferentialForm(self.parent, self.degree, dict(self.terms), u)

    def coefficient(self, I: Sequence[int]) -> DPElement:
        s, J = _sort_sign(I)
        c = self.terms.get(J, self.parent.zero())
        return c if s == 1 else -c

    def _same_factor(self, other):
        a, b = self.exp_factor, other.exp_factor
        if (a is None) != (b is None) or (a is not None and a != b):
            raise ValueError("forms carry different exponential factors")

    def __add__(self, other):
        if other.degree != self.degree:
            raise WrongDegree("adding forms of different degree")
        self._same_factor(other)
        t = dict(self.terms)
        for I, c in other.terms.items():
            t[I] = t[I] + c if I in t else c
        return DifferentialForm(self.parent, self.degree, t, self.exp_factor)

    def __neg__(self):
        return DifferentialForm(self.parent, self.degree, {I: -c for I, c in self.terms.items()},
                                self.exp_factor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "DifferentialForm":
        """Multiply the coefficients by a function or an integer."""
        if isinstance(f, DPElement):
            return DifferentialForm(self.parent, self.degree,
                                    {I: f * c for I, c in self.terms.items()}, self.exp_factor)
        return DifferentialForm(self.parent, self.degree,
                                {I: c * int(f) for I, c in self.terms.items()}, self.exp_factor)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm) or other.degree != self.degree:
            return False
        if self.is_zero() and other.is_zero():
            return True
        try:
            self._same_factor(other)
        except ValueError:
            return False
        return set(self.terms) == set(other.terms) and all(
            self.terms[I] == other.terms[I] for I in self.terms)

    def vector(self) -> np.ndarray:
        """Coefficients over (sorted index set, monomial), ignoring the factor."""
        O = self.parent
        keys = list(itertools.combinations(range(1, O.m + 1), self.degree))
        return np.concatenate([self.terms.get(I, O.zero()).coeffs.reshape(-1) for I in keys])

    def __repr__(self):
        pre = f"exp({self.exp_factor}) * " if self.exp_factor is not None else ""
        if not self.terms:
            return "0"
        body = " + ".join(f"({c})" + "".join(f"dx{i}" for i in I) for I, c in sorted(self.terms.items()))
        return pre + "(" + body + ")"


def dx(O: DPAlgebra, *idx: int) -> DifferentialForm:
    return DifferentialForm(O, len(idx), {tuple(idx): O.one()})


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    if a.parent is not b.parent:
        raise ParentMismatch("forms over different algebras")
    O = a.parent
    t: dict = {}
    for I, f in a.terms.items():
        for J, g in b.terms.items():
            s, K = _sort_sign(I + J)
            if s == 0:
                continue
            v = f * g
            v = v if s == 1 else -v
            t[K] = t[K] + v if K in t else v
    u = a.exp_factor
    if b.exp_factor is not None:
        u = b.exp_factor if u is None else u + b.exp_factor
    return DifferentialForm(O, a.degree + b.degree, t, u)


def _d_body(w: DifferentialForm) -> DifferentialForm:
    O = w.parent
    t: dict = {}
    for I, f in w.terms.items():
        for j in range(1, O.m + 1):
            s, K = _sort_sign((j,) + I)
            if s == 0:
                continue
            v = partial_derivative(j, f)
            if v.is_zero():
                continue
            v = v if s == 1 else -v
            t[K] = t[K] + v if K in t else v
    return DifferentialForm(O, w.degree + 1, t)


def exterior_d(w: DifferentialForm, check: bool = True) -> DifferentialForm:
    body = w.body()
    out = _d_body(body)
    if w.exp_factor is not None:
        u = w.exp_factor
        out = out + wedge(_d_body(DifferentialForm.function(u)), body)
        out = out.with_factor(u)
    if check and not _d_body(out.body()).is_zero() and w.exp_factor is None:
        raise AssertionError("d o d != 0")
    return out


def derivation_action_on_form(D: SpecialDerivation, w: DifferentialForm) -> DifferentialForm:
    """Lie derivative of w along D; D(dx_i) = d(D x_i)."""
    if D.parent is not w.parent:
        raise ParentMismatch("derivation and form over different algebras")
    O = w.parent
    dDx = [_d_body(DifferentialForm.function(f)) for f in D.coeffs]  # d(D x_i)
    t: dict = {}

    def add(K, v):
        if not v.is_zero():
            t[K] = t[K] + v if K in t else v

    for I, f in w.terms.items():
        add(I, D(f))
        for pos, i in enumerate(I):
            for (j,), g in dDx[i - 1].terms.items():
                new = I[:pos] + (j,) + I[pos + 1:]
                s, K = _sort_sign(new)
                if s:
                    add(K, f * g if s == 1 else -(f * g))
    out = DifferentialForm(O, w.degree, t)
    if w.exp_factor is not None:
        out = out + w.body().scale(D(w.exp_factor))
        out = out.with_factor(w.exp_factor)
    return out


def form_divided_power(w: DifferentialForm, s: int) -> DifferentialForm:
    """w^(s) = w^s / s! for even-degree w and s < p."""
    if w.degree % 2:
        raise WrongDegree("divided powers are defined on even-degree forms")
    p = w.parent.p
    if s >= p:
        raise SBeyondCharacteristic("only s < p is supported")
    if s == 0:
        return DifferentialForm.function(w.parent.one())
    acc = w
    for _ in range(s - 1):
        acc = wedge(acc, w)
    inv = pow(factorial(s) % p, -1, p)
    return acc.scale(inv)


def nondegenerate(w: DifferentialForm) -> bool:
    O = w.parent
    m = O.m
    if w.degree == m:
        phi = w.coefficient(tuple(range(1, m + 1)))
        return phi.constant_term != 0
    if w.degree == 2:
        if m % 2:
            return False
        if not exterior_d(w, check=False).is_zero():
            raise NotClosed("2-form is not closed")
        top = form_divided_power(w, m // 2)
        return top.coefficient(tuple(range(1, m + 1))).constant_term != 0
    if w.degree == 1:
        if m % 2 == 0:
            return False
        r = (m - 1) // 2
        dw = exterior_d(w, check=False)
        if dw.exp_factor is not None:
            # (exp(u) a)^(r) = exp(r u) a^(r); the factor is a unit
            dw = dw.body()
            w = w.body()
        top = wedge(form_divided_power(dw, r), w) if r else w
        return top.coefficient(tuple(range(1, m + 1))).constant_term != 0
    raise WrongDegree("nondegeneracy is defined for degrees 1, 2 and m")


# ---------------------------------------------------------------------------
# standard forms

def omega_S(O: DPAlgebra) -> DifferentialForm:
    return dx(O, *range(1, O.m + 1))


def omega_H(O: DPAlgebra) -> DifferentialForm:
    """sum_{i<=r} dx_i ^ dx_{i+r} for m = 2r."""
    if O.m % 2:
        raise WrongDegree("Hamiltonian form needs even m")
    r = O.m // 2
    acc = DifferentialForm.zero(O, 2)
    for i in range(1, r + 1):
        acc = acc + dx(O, i, i + r)
    return acc


def omega_K(O: DPAlgebra) -> DifferentialForm:
    """dx_m + sum_{i<=r} (x_{i+r} dx_i - x_i dx_{i+r}) for m = 2r+1."""
    if O.m % 2 == 0:
        raise WrongDegree("contact form needs odd m")
    r = (O.m - 1) // 2
    t = {(O.m,): O.one()}
    for i in range(1, r + 1):
        t[(i,)] = O.x(i + r)
        t[(i + r,)] = -O.x(i)
    return DifferentialForm(O, 1, t)
