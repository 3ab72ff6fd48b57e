"""Finite fields GF(p^k) organised as a lazily grown tower.

Elements are stored as coordinate tuples in the power basis of a monic
irreducible modulus.  Extensions are created on demand (for example by
:func:`artin_schreier_root`) and registered so that repeated requests return
the same descriptor.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from typing import Iterator, Sequence

__all__ = [
    "NonPrime",
    "DivisionByZero",
    "FieldMismatch",
    "NoEmbedding",
    "FieldDescriptor",
    "FieldElement",
    "is_prime",
    "make_field",
    "embed_element",
    "artin_schreier_root",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20240917


class NonPrime(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class FieldMismatch(TypeError):
    pass


class NoEmbedding(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# polynomials over GF(p), coefficient lists low degree first

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(_trim(a)) - 1 >= dm:
        shift = len(a) - 1 - dm
        c = a[-1] * inv_lead % p
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    k = len(f) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**k, f, p), x, p):
        return False
    for q in _prime_factors(k):
        h = _psub(_ppowmod(x, p ** (k // q), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# field descriptors and the tower registry

@dataclass(frozen=True, eq=False)
class FieldDescriptor:
    """GF(p^k) given by a monic irreducible ``modulus`` (low degree first)."""

    p: int
    k: int
    modulus: tuple[int, ...]
    _log: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def order(self) -> int:
        return self.p**self.k

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            return embed_element(value, self)
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.k:
            raise ValueError("too many coordinates")
        return FieldElement(self, coeffs + (0,) * (self.k - len(coeffs)))

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def generator(self) -> "FieldElement":
        """The class of T in GF(p)[T]/(modulus)."""
        if self.k == 1:
            return self(-self.modulus[0])
        return self((0, 1))

    def elements(self) -> Iterator["FieldElement"]:
        for n in range(self.order):
            coeffs = []
            for _ in range(self.k):
                coeffs.append(n % self.p)
                n //= self.p
            yield FieldElement(self, tuple(coeffs))

    def random_element(self, rng: random.Random) -> "FieldElement":
        return self(tuple(rng.randrange(self.p) for _ in range(self.k)))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


_registry: dict[tuple[int, int], FieldDescriptor] = {}
_embeddings: dict[tuple[int, int, int], "FieldElement"] = {}
_lock = threading.RLock()


def _find_modulus(p: int, k: int, seed: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    rng = random.Random((seed, p, k).__hash__())
    # A random monic polynomial of degree k is irreducible with probability
    # about 1/k, so this loop ends quickly; the enumeration fallback keeps
    # termination unconditional.
    for _ in range(200 * k):
        f = [rng.randrange(p) for _ in range(k)] + [1]
        if f[0] and _is_irreducible(f, p):
            return tuple(f)
    for n in range(p**k):
        f = []
        for _ in range(k):
            f.append(n % p)
            n //= p
        f.append(1)
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def make_field(p: int, k: int = 1, seed: int = DEFAULT_SEED) -> FieldDescriptor:
    """Return the registered GF(p^k), creating it on first use."""
    if not is_prime(p):
        raise NonPrime(p)
    if k < 1:
        raise ValueError("extension degree must be at least 1")
    with _lock:
        fd = _registry.get((p, k))
        if fd is None:
            fd = FieldDescriptor(p, k, _find_modulus(p, k, seed))
            _registry[(p, k)] = fd
        return fd


# ---------------------------------------------------------------------------
# elements

class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, fd: FieldDescriptor, coeffs: tuple[int, ...]):
        self.field = fd
        self.coeffs = coeffs

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is self.field:
                return other
            if other.field.p != self.field.p:
                raise FieldMismatch(f"{other.field} vs {self.field}")
            if self.field.k % other.field.k == 0:
                return embed_element(other, self.field)
            raise FieldMismatch(f"{other.field} does not embed in {self.field}")
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def _lift(self, other):
        """Coerce both operands into a common field."""
        if isinstance(other, FieldElement) and other.field is not self.field:
            if other.field.k % self.field.k == 0 and other.field.p == self.field.p:
                return embed_element(self, other.field), other
        return self, self._coerce(other)

    def __add__(self, other):
        a, b = self._lift(other)
        if b is NotImplemented:
            return NotImplemented
        p = a.field.p
        return FieldElement(a.field, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-x) % p for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._lift(other)
        if b is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._lift(other)
        if b is NotImplemented:
            return NotImplemented
        fd = a.field
        if fd.k == 1:
            return FieldElement(fd, ((a.coeffs[0] * b.coeffs[0]) % fd.p,))
        prod = _pmod(_pmul(a.coeffs, b.coeffs, fd.p), fd.modulus, fd.p)
        return FieldElement(fd, tuple(prod) + (0,) * (fd.k - len(prod)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        a, b = self._lift(other)
        if b is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field is not self.field:
            try:
                a, b = self._lift(other)
            except FieldMismatch:
                return False
            return a.coeffs == b.coeffs
        return self.coeffs == other.coeffs

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.p, self.field.k, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self):
        if not self.in_prime_field():
            raise ValueError("element is not in the prime field")
        return self.coeffs[0]

    def frobenius(self) -> "FieldElement":
        return self**self.field.p

    def trace(self) -> "FieldElement":
        """Absolute trace to GF(p); the result lives in ``self.field``."""
        acc, cur = self, self
        for _ in range(self.field.k - 1):
            cur = cur.frobenius()
            acc = acc + cur
        return acc

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.coeffs[0]}"
        return f"{self.field}{list(self.coeffs)}"


# ---------------------------------------------------------------------------
# polynomials with coefficients in a field of the tower (for root finding)

def _fp_trim(a):
    while a and a[-1].is_zero():
        a.pop()
    return a


def _fp_mod(a, m):
    a = list(a)
    inv_lead = m[-1].inverse()
    dm = len(m) - 1
    while len(_fp_trim(a)) - 1 >= dm:
        shift = len(a) - 1 - dm
        c = a[-1] * inv_lead
        for i, mi in enumerate(m):
            a[shift + i] = a[shift + i] - c * mi
        _fp_trim(a)
    return a


def _fp_mul(a, b, fd):
    if not a or not b:
        return []
    out = [fd.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return _fp_trim(out)


def _fp_gcd(a, b):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _fp_powmod(base, e, m, fd):
    result = [fd.one]
    base = _fp_mod(base, m)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, fd), m)
        base = _fp_mod(_fp_mul(base, base, fd), m)
        e >>= 1
    return result


def _split_roots(poly, fd: FieldDescriptor, rng: random.Random) -> list[FieldElement]:
    """All roots of a squarefree polynomial that splits into linear factors."""
    poly = _fp_trim(list(poly))
    inv = poly[-1].inverse()
    poly = [c * inv for c in poly]
    if len(poly) == 1:
        return []
    if len(poly) == 2:
        return [-poly[0]]
    q = fd.order
    while True:
        delta = fd.random_element(rng)
        if fd.p == 2:
            # Tr(delta T) = sum (delta T)^(2^i) takes values in GF(2) on the
            # roots, so its gcd with poly splits off the roots where it is 0
            t = [fd.zero, delta]
            acc, cur = list(t), list(t)
            for _ in range(fd.k - 1):
                cur = _fp_mod(_fp_mul(cur, cur, fd), poly)
                acc = [x + y for x, y in zip(acc + [fd.zero] * (len(cur) - len(acc)),
                                            cur + [fd.zero] * (len(acc) - len(cur)))]
            h = _fp_gcd(poly, _fp_trim(acc))
        else:
            w = _fp_powmod([delta, fd.one], (q - 1) // 2, poly, fd)
            w = w + [fd.zero] * (1 - len(w)) if not w else w
            w = list(w)
            w[0] = w[0] - fd.one
            h = _fp_gcd(poly, _fp_trim(w))
        if 1 < len(h) < len(poly):
            rest = _fp_div_exact(poly, h)
            return _split_roots(h, fd, rng) + _split_roots(rest, fd, rng)


def _fp_div_exact(a, b):
    a = list(a)
    out = [a[0].field.zero] * (len(a) - len(b) + 1)
    inv = b[-1].inverse()
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] = a[i + j] - c * bj
    return out


def _canonical(roots: list[FieldElement]) -> FieldElement:
    return min(roots, key=lambda r: r.coeffs)


def embed_element(a: FieldElement, target: FieldDescriptor) -> FieldElement:
    """Image of ``a`` under the registered embedding into ``target``."""
    src = a.field
    if src is target:
        return a
    if src.p != target.p or target.k % src.k:
        raise NoEmbedding(f"{src} does not embed in {target}")
    if a.in_prime_field():
        return target(a.coeffs[0])
    key = (src.p, src.k, target.k)
    with _lock:
        gen = _embeddings.get(key)
        if gen is None:
            rng = random.Random(hash(key))
            poly = [target(c) for c in src.modulus]
            gen = _canonical(_split_roots(poly, target, rng))
            _embeddings[key] = gen
    # Horner evaluation of the coordinate polynomial at the image of T
    acc = target.zero
    for c in reversed(a.coeffs):
        acc = acc * gen + target(c)
    return acc


def project_element(a: FieldElement, target: FieldDescriptor) -> FieldElement:
    """Inverse of :func:`embed_element` on its image (brute force for small fields)."""
    if a.field is target:
        return a
    if a.in_prime_field():
        return target(a.coeffs[0])
    for b in target.elements():
        if embed_element(b, a.field) == a:
            return b
    raise NoEmbedding("element is not in the image of the embedding")


def artin_schreier_root(a: FieldElement) -> FieldElement:
    """Return a root of T^p - T - a.

    The root lies in ``a.field`` when the absolute trace of ``a`` vanishes and
    otherwise in the degree-p extension, which is created on demand.  Among
    the p roots (which differ by GF(p) shifts) the one with zero constant
    coordinate is returned, so the choice does not depend on any randomness.
    """
    fd = a.field
    p = fd.p
    if a.is_zero():
        return fd.zero
    target = fd if a.trace().is_zero() else make_field(p, fd.k * p)
    a_t = embed_element(a, target)
    poly = [-a_t, -target.one] + [target.zero] * (p - 2) + [target.one]
    rng = random.Random(hash((p, target.k, a_t.coeffs)))
    roots = _split_roots(poly, target, rng)
    zero_const = [r for r in roots if r.coeffs[0] == 0]
    return _canonical(zero_const or roots)
