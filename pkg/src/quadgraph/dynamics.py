"""The map f(X) = c(X^(q+1) + a*X^2) on GF(q^2): evaluation, iteration,
closed-form iterates, preimages and fixed points.

Two independent evaluation routes exist on purpose.  ``eval_direct`` works in
GF(q^2) through Frobenius and extension multiplication; ``eval_coords`` uses
the coordinate form

    (x, y) -> (c(a+1)x^2 + c(a-1)b y^2,  2c a x y)

obtained by expanding (x+y*beta)(x-y*beta+a(x+y*beta)) with beta^q = -beta.
They must agree everywhere; the test suite checks this exhaustively on small
fields.  ``preimages_bruteforce`` is the reference oracle against which the
analytic preimage counts are validated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ffield import (
    ExtElement,
    FieldElement,
    QuadExt,
    chi2_int,
    ext_mul,
    ext_scale,
    frobenius,
    sqrt_mod,
)


@dataclass(frozen=True)
class MapParams:
    """One dynamical system: the triple (q, a, c) plus the chosen non-square b.

    a = 0 is rejected: the map would collapse to the norm-like c*X^(q+1),
    which has a different theory entirely.
    """

    ext: QuadExt
    a: FieldElement
    c: FieldElement

    def __post_init__(self) -> None:
        if self.a.field != self.ext.base or self.c.field != self.ext.base:
            raise ValueError("a and c must live in the base field")
        if self.a.value == 0:
            raise ValueError("a must be non-zero")
        if self.c.value == 0:
            raise ValueError("c must be non-zero")

    @classmethod
    def from_ints(cls, q: int, a: int, c: int, b: int | None = None) -> MapParams:
        """Build params from raw integers; a and c are reduced mod q, so a=-1
        may be passed literally."""
        ext = QuadExt.create(q, b)
        return cls(ext, ext.base.element(a % q), ext.base.element(c % q))

    @property
    def q(self) -> int:
        return self.ext.base.q

    @property
    def b(self) -> int:
        return self.ext.b.value

    @property
    def a_int(self) -> int:
        return self.a.value

    @property
    def c_int(self) -> int:
        return self.c.value

    @property
    def is_a_minus_one(self) -> bool:
        return self.a.value == self.q - 1

    @property
    def is_a_plus_one(self) -> bool:
        return self.a.value == 1

    def describe(self) -> str:
        return (
            f"f(X) = {self.c_int}*(X^{self.q + 1} + {self.a_int}*X^2) "
            f"over GF({self.q}^2), b={self.b}"
        )


def _eval_xy(x: int, y: int, q: int, a: int, c: int, b: int) -> tuple[int, int]:
    fx = (c * ((a + 1) * x * x + (a - 1) * b * y * y)) % q
    fy = 2 * c * a * x * y % q
    return fx, fy


def eval_direct(X: ExtElement, p: MapParams) -> ExtElement:
    """c(X^(q+1) + a*X^2) computed in GF(q^2) via Frobenius: X^(q+1) = X * X^q."""
    Xq = frobenius(X, p.ext)
    X2 = ext_mul(X, X, p.ext)
    inner = ext_mul(X, Xq, p.ext) + ext_scale(p.a, X2)
    return ext_scale(p.c, inner)


def eval_coords(
    x: FieldElement, y: FieldElement, p: MapParams
) -> tuple[FieldElement, FieldElement]:
    """Coordinate form of f; agrees with eval_direct on every input."""
    fx, fy = _eval_xy(x.value, y.value, p.q, p.a_int, p.c_int, p.b)
    return p.ext.base.element(fx), p.ext.base.element(fy)


def iterate(X: ExtElement, n: int, p: MapParams) -> ExtElement:
    """n-fold composition f^(n), with f^(0) the identity."""
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    x, y = X.coords()
    q, a, c, b = p.q, p.a_int, p.c_int, p.b
    for _ in range(n):
        x, y = _eval_xy(x, y, q, a, c, b)
    return p.ext.element(x, y)


def _reduced_pow(base: int, exponent: int, q: int) -> int:
    # base != 0: exponent reduces mod q-1 (the order of the unit group)
    if base == 0:
        return 0
    return pow(base, exponent % (q - 1), q)


def closed_form_even_iterate(
    x: FieldElement, y: FieldElement, n: int, p: MapParams
) -> tuple[FieldElement, FieldElement]:
    """f^(2n)(x, y) for a = -1, as g^((4^n - 1)/3) * (x, y) with g = -8bc^3 xy^2.

    Applying the coordinate form twice gives f^(2)(x, y) = g(x, y)*(x, y), and
    f^(2)(v*x, v*y) = v^4 g(x, y)*(x, y) turns the even iterates into the
    geometric exponent (4^n - 1)/3 = 1 + 4 + ... + 4^(n-1).  When g = 0 (x or
    y zero) the orbit reaches 0 within two steps and the formula still holds
    because the exponent is >= 1.
    """
    if not p.is_a_minus_one:
        raise ValueError("even-iterate closed form requires a = -1")
    if n < 1:
        raise ValueError("n must be >= 1")
    q, c, b = p.q, p.c_int, p.b
    g = (-8 * b * pow(c, 3, q) * x.value * y.value % q * y.value) % q
    exponent = (4**n - 1) // 3
    k = _reduced_pow(g, exponent, q)
    return p.ext.base.element(k * x.value), p.ext.base.element(k * y.value)


def closed_form_iterate_a1(
    x: FieldElement, y: FieldElement, n: int, p: MapParams
) -> tuple[FieldElement, FieldElement]:
    """f^(n)(x, y) for a = +1, as (2cx)^(2^n - 1) * (x, y).

    The coordinate form is (x, y) -> 2cx*(x, y), so each step multiplies by
    2c times the current x coordinate; x = 0 maps straight to 0.
    """
    if not p.is_a_plus_one:
        raise ValueError("this closed form requires a = +1")
    if n < 1:
        raise ValueError("n must be >= 1")
    q, c = p.q, p.c_int
    if x.value == 0:
        return p.ext.base.zero(), p.ext.base.zero()
    k = _reduced_pow(2 * c * x.value % q, 2**n - 1, q)
    return p.ext.base.element(k * x.value), p.ext.base.element(k * y.value)


def preimages_bruteforce(alpha: ExtElement, p: MapParams) -> frozenset[ExtElement]:
    """Exact preimage set of alpha by exhaustive scan over all q^2 elements."""
    q, a, c, b = p.q, p.a_int, p.c_int, p.b
    target = alpha.coords()
    found = []
    for x in range(q):
        for y in range(q):
            if _eval_xy(x, y, q, a, c, b) == target:
                found.append(p.ext.element(x, y))
    return frozenset(found)


def preimage_count_predicted(alpha: ExtElement, p: MapParams) -> int | None:
    """Analytic preimage count of alpha, or None where no formula applies.

    Covered strata:
      a = -1 and a = +1: every alpha in GF(q^2);
      other a: alpha in GF(q) or on the beta line (alpha = u*beta).

    For u + v*beta to be hit, the coordinate form has to solve
      c(a+1)x^2 + c(a-1)b y^2 = u  and  2c a x y = v,
    and the counts reduce to quadratic-character conditions.  Scaling by c is
    folded in by testing u/c throughout.
    """
    q, a, c, b = p.q, p.a_int, p.c_int, p.b
    u, v = alpha.coords()
    c_inv = pow(c, -1, q)

    if p.is_a_minus_one:
        if v == 0:
            if u == 0:
                return q  # f vanishes exactly on GF(q)
            return 2 if chi2_int(-2 * u * c, q) == -1 else 0
        return 2 if chi2_int(-2 * b * c * u, q) == 1 else 0

    if p.is_a_plus_one:
        if u == 0:
            return q if v == 0 else 0
        return 2 if chi2_int(2 * c * u, q) == 1 else 0

    if u == 0 and v == 0:
        return 1  # 0 is a fixed point with no other parent
    if v == 0:
        un = u * c_inv % q
        count = 0
        if chi2_int(un * (a - 1), q) == -1:
            count += 2  # x = 0 branch: y^2 = u' / ((a-1)b)
        if chi2_int(un * (a + 1), q) == 1:
            count += 2  # y = 0 branch: x^2 = u' / (a+1)
        return count
    if u == 0:
        if chi2_int(1 - a * a, q) == 1:
            return 0  # (x/y)^2 = -(a-1)b/(a+1) has no solution
        vn = v * c_inv % q
        if q % 4 == 3:
            return 2  # exactly one sign of gamma yields a square
        gamma_sq = p.ext.base.element(-(a - 1) * b * pow(a + 1, -1, q) % q)
        gamma = sqrt_mod(gamma_sq)[0].value
        # chi2(-1) = 1 here, so the criterion does not depend on the sign of gamma
        return 4 if chi2_int(2 * gamma * vn * a, q) == 1 else 0
    return None


def fixed_points(p: MapParams) -> frozenset[ExtElement]:
    """The exact fixed-point set, case by case in a.

    a = -1: only 0 (c(X^q - X) = 1 would force X = X + 2/c).
    a = +1: 0 and the whole line x = (2c)^(-1), q+1 points in all.
    other a: 0 and ((c(a+1))^(-1), 0); the y != 0 candidate forces
      y^2 = (2ca)^(-2) / b, never solvable since b is a non-square.
    """
    q, a, c = p.q, p.a_int, p.c_int
    zero = p.ext.zero()
    if p.is_a_minus_one:
        return frozenset({zero})
    if p.is_a_plus_one:
        xs = pow(2 * c, -1, q)
        return frozenset({zero} | {p.ext.element(xs, y) for y in range(q)})
    xs = pow(c * (a + 1), -1, q)
    return frozenset({zero, p.ext.element(xs, 0)})


def fixed_points_bruteforce(p: MapParams) -> frozenset[ExtElement]:
    """Fixed points by exhaustive scan (oracle for fixed_points)."""
    q, a, c, b = p.q, p.a_int, p.c_int, p.b
    return frozenset(
        p.ext.element(x, y)
        for x in range(q)
        for y in range(q)
        if _eval_xy(x, y, q, a, c, b) == (x, y)
    )
