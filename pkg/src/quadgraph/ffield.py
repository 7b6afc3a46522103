"""Arithmetic in GF(q) and its quadratic extension GF(q^2) = GF(q)(beta), beta^2 = b.

q is an odd prime held as a machine integer; elements of GF(q) are residues
in [0, q) and elements of GF(q^2) are coordinate pairs (x, y) standing for
x + y*beta, where b is a fixed non-square mod q.  The module also carries the
number-theoretic helpers the cycle-count formulas need: quadratic character,
square roots, multiplicative orders, totients and divisor enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

MAX_PRIME = 2**31  # products of two residues must fit in a 64-bit intermediate

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n below 3_215_031_751."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in (2, 3, 5, 7):  # covers all n < 3_215_031_751 > 2**31
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass(frozen=True)
class PrimeField:
    """GF(q) for an odd prime q < 2**31."""

    q: int

    def __post_init__(self) -> None:
        if self.q < 3 or self.q % 2 == 0:
            raise ValueError(f"modulus must be an odd prime >= 3, got {self.q}")
        if self.q >= MAX_PRIME:
            raise ValueError(f"modulus must be < 2**31, got {self.q}")
        if not is_prime(self.q):
            raise ValueError(f"modulus must be prime, got {self.q}")

    def element(self, value: int) -> FieldElement:
        return FieldElement(value % self.q, self)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def __repr__(self) -> str:
        return f"GF({self.q})"


@dataclass(frozen=True)
class FieldElement:
    """Residue in [0, q)."""

    value: int
    field: PrimeField

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"value {self.value} out of range for {self.field}")

    def _check(self, other: FieldElement) -> None:
        if self.field != other.field:
            raise ValueError("elements belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value + other.value) % self.field.q, self.field)

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement((self.value - other.value) % self.field.q, self.field)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.value * other.value % self.field.q, self.field)

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.value % self.field.q, self.field)

    def __pow__(self, n: int) -> FieldElement:
        return FieldElement(pow(self.value, n, self.field.q), self.field)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(pow(self.value, -1, self.field.q), self.field)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"


@dataclass(frozen=True)
class QuadExt:
    """GF(q^2) presented on the basis {1, beta} with beta^2 = b, b a non-square."""

    base: PrimeField
    b: FieldElement

    def __post_init__(self) -> None:
        if self.b.field != self.base:
            raise ValueError("b must live in the base field")
        if chi2(self.b) != -1:
            raise ValueError(f"b={self.b.value} is not a non-square mod {self.base.q}")

    @classmethod
    def create(cls, q: int, b: int | None = None) -> QuadExt:
        field = PrimeField(q)
        if b is None:
            return cls(field, find_nonsquare(field))
        return cls(field, field.element(b))

    def element(self, x: int, y: int) -> ExtElement:
        return ExtElement(self.base.element(x), self.base.element(y))

    def zero(self) -> ExtElement:
        return self.element(0, 0)

    def one(self) -> ExtElement:
        return self.element(1, 0)

    def __repr__(self) -> str:
        return f"GF({self.base.q}^2), beta^2={self.b.value}"


@dataclass(frozen=True)
class ExtElement:
    """x + y*beta with componentwise equality."""

    x: FieldElement
    y: FieldElement

    def __post_init__(self) -> None:
        if self.x.field != self.y.field:
            raise ValueError("coordinates belong to different fields")

    @property
    def field(self) -> PrimeField:
        return self.x.field

    def coords(self) -> tuple[int, int]:
        return (self.x.value, self.y.value)

    def in_base_field(self) -> bool:
        return self.y.value == 0

    def __add__(self, other: ExtElement) -> ExtElement:
        return ExtElement(self.x + other.x, self.y + other.y)

    def __sub__(self, other: ExtElement) -> ExtElement:
        return ExtElement(self.x - other.x, self.y - other.y)

    def __neg__(self) -> ExtElement:
        return ExtElement(-self.x, -self.y)

    def __repr__(self) -> str:
        return f"({self.x.value} + {self.y.value}b mod {self.field.q})"


def chi2(alpha: FieldElement) -> int:
    """Quadratic character: 0 at zero, +1 on non-zero squares, -1 otherwise."""
    return chi2_int(alpha.value, alpha.field.q)


def chi2_int(value: int, q: int) -> int:
    """chi2 on a raw residue, by Euler's criterion value^((q-1)/2) mod q."""
    value %= q
    if value == 0:
        return 0
    return 1 if pow(value, (q - 1) // 2, q) == 1 else -1


def find_nonsquare(field: PrimeField) -> FieldElement:
    """Smallest positive non-square mod q (a canonical choice of b)."""
    for b in range(2, field.q):
        if chi2_int(b, field.q) == -1:
            return field.element(b)
    raise AssertionError("odd prime fields always contain a non-square")


def sqrt_mod(alpha: FieldElement) -> tuple[FieldElement, ...]:
    """Square roots of alpha in GF(q), as (r, q-r) with r <= q-r.

    Returns () when alpha is a non-square and (0,) when alpha is zero.
    Tonelli-Shanks with the smallest non-square as auxiliary non-residue,
    so the output is deterministic.
    """
    q = alpha.field.q
    a = alpha.value
    if a == 0:
        return (alpha.field.zero(),)
    if chi2_int(a, q) != 1:
        return ()
    if q % 4 == 3:
        r = pow(a, (q + 1) // 4, q)
    else:
        d = q - 1
        s = 0
        while d % 2 == 0:
            d //= 2
            s += 1
        z = find_nonsquare(alpha.field).value
        c = pow(z, d, q)
        r = pow(a, (d + 1) // 2, q)
        t = pow(a, d, q)
        m = s
        while t != 1:
            t2 = t
            i = 0
            while t2 != 1:
                t2 = t2 * t2 % q
                i += 1
            g = pow(c, 1 << (m - i - 1), q)
            r = r * g % q
            c = g * g % q
            t = t * c % q
            m = i
    r = min(r, q - r)
    return (alpha.field.element(r), alpha.field.element(q - r))


def ext_add(a: ExtElement, b: ExtElement) -> ExtElement:
    return a + b


def ext_mul(a: ExtElement, b: ExtElement, ext: QuadExt) -> ExtElement:
    """(x1 + y1*beta)(x2 + y2*beta) = (x1*x2 + b*y1*y2) + (x1*y2 + x2*y1)*beta."""
    q = ext.base.q
    bb = ext.b.value
    x1, y1 = a.coords()
    x2, y2 = b.coords()
    return ext.element((x1 * x2 + bb * y1 * y2) % q, (x1 * y2 + x2 * y1) % q)


def ext_scale(k: FieldElement, a: ExtElement) -> ExtElement:
    return ExtElement(k * a.x, k * a.y)


def ext_pow(a: ExtElement, n: int, ext: QuadExt) -> ExtElement:
    """Square-and-multiply power in GF(q^2), n >= 0."""
    if n < 0:
        raise ValueError("negative exponents not supported")
    result = ext.one()
    base = a
    while n > 0:
        if n & 1:
            result = ext_mul(result, base, ext)
        base = ext_mul(base, base, ext)
        n >>= 1
    return result


def frobenius(a: ExtElement, ext: QuadExt) -> ExtElement:
    """a^q. Since b is a non-square, beta^q = -beta, so (x, y) -> (x, -y)."""
    return ExtElement(a.x, -a.y)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (fine for the sizes used here)."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def divisors(n: int) -> list[int]:
    """All divisors of n in increasing order."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi expects n >= 1")
    phi = n
    for p in factorize(n):
        phi -= phi // p
    return phi


def multiplicative_order(m: int, n: int) -> int:
    """Least k >= 1 with m^k = 1 mod n; order mod 1 is 1 by convention."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    if n == 1:
        return 1
    m %= n
    if gcd(m, n) != 1:
        raise ValueError(f"order undefined: gcd({m}, {n}) != 1")
    order = euler_phi(n)
    for p in factorize(order):
        while order % p == 0 and pow(m, order // p, n) == 1:
            order //= p
    return order


def odd_part_and_divisors(q: int) -> tuple[int, int, list[int]]:
    """Split q-1 = 2^s * r with r odd; return (s, r, divisors of r)."""
    if q < 3 or q % 2 == 0:
        raise ValueError(f"expected an odd number >= 3, got {q}")
    r = q - 1
    s = 0
    while r % 2 == 0:
        r //= 2
        s += 1
    return s, r, divisors(r)
