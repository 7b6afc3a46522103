"""Closed-form graph decompositions, computed without building any graph.

For a = -1 the functional graph of c(X^(q+1) - X^2) over GF(q^2) is

    Z(q)  (+)  sum over divisors d of r:
        phi(d)(q-1) / (2 ord_{3d}(4))  copies of  (Cyc(2 ord_{3d}(4)), T(s))

where q - 1 = 2^s * r with r odd.  The cycle lengths come from the even
iterate f^(2n)(x, y) = g^((4^n-1)/3) (x, y): a point sits on a 2n-cycle
exactly when n is minimal with 4^n = 1 mod 3*ord(g), which forces ord(g) odd,
i.e. ord(g) = d | r, and each of the phi(d)(q-1) points with ord(g) = d lies
on a cycle of length 2 ord_{3d}(4).

For a = +1 the same pipeline on f^(n)(x, y) = (2cx)^(2^n-1) (x, y) gives

    Z*(q)  (+)  sum over divisors d of r:
        q phi(d) / ord_d(2)  copies of  (Cyc(ord_d(2)), T(s))

with the d = 1 term contributing the q extra fixed points (the line
x = (2c)^(-1)); the fixed point 0 lives inside Z*(q).

Both decompositions are independent of c and of the choice of non-square b,
and both satisfy the node-count identity: 2q-1 + (q-1)^2 = q^2 and
q + q(q-1) = q^2, since the divisor sums telescope via sum phi(d) = r.

For other a only partial facts are available (fixed points, preimage counts
per stratum, and the shape of the GF(q)-side components when 1 - a^2 is a
square); these are returned as a PartialFacts record and validated against
brute force, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .dynamics import MapParams
from .ffield import (
    chi2_int,
    euler_phi,
    multiplicative_order,
    odd_part_and_divisors,
)
from .graph import (
    ComponentShape,
    GraphSignature,
    TreeShape,
    star_shape,
    t_shape,
    z_shape,
    zstar_shape,
)


class Term(NamedTuple):
    """`multiplicity` components (Cyc(cycle_length), T(tree_depth))."""

    multiplicity: int
    cycle_length: int
    tree_depth: int

    @property
    def nodes(self) -> int:
        return self.multiplicity * self.cycle_length * (1 << self.tree_depth)


_SPECIAL_SIZES = {"Z": lambda q: 2 * q - 1, "Z*": lambda q: q, "none": lambda q: 0}


@dataclass(frozen=True)
class PredictedDecomposition:
    """Predicted signature: a named zero-component plus (Cyc, T) terms.

    Terms are kept one per divisor d, in divisor order, even when two
    divisors produce the same cycle length; this keeps each term auditable
    against the counting formula.  The census and signature merge them.
    """

    q: int
    special: str  # "Z" | "Z*" | "none"
    terms: tuple[Term, ...]
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.special not in _SPECIAL_SIZES:
            raise ValueError(f"unknown special component {self.special!r}")

    def special_size(self) -> int:
        return _SPECIAL_SIZES[self.special](self.q)

    def node_count(self) -> int:
        return self.special_size() + sum(t.nodes for t in self.terms)

    def cycle_census(self) -> dict[int, int]:
        census: dict[int, int] = {}
        if self.special != "none":
            census[1] = 1
        for t in self.terms:
            census[t.cycle_length] = census.get(t.cycle_length, 0) + t.multiplicity
        return dict(sorted(census.items()))

    def signature(self) -> GraphSignature:
        pairs: list[tuple[ComponentShape, int]] = []
        if self.special == "Z":
            pairs.append((ComponentShape.uniform(1, z_shape(self.q)), 1))
        elif self.special == "Z*":
            pairs.append((ComponentShape.uniform(1, zstar_shape(self.q)), 1))
        for t in self.terms:
            shape = ComponentShape.uniform(t.cycle_length, t_shape(t.tree_depth))
            pairs.append((shape, t.multiplicity))
        return GraphSignature.from_pairs(pairs)

    def describe(self) -> str:
        parts = []
        if self.special == "Z":
            parts.append(f"Z({self.q})")
        elif self.special == "Z*":
            parts.append(f"Z*({self.q})")
        for t in self.terms:
            parts.append(
                f"{t.multiplicity}×(Cyc({t.cycle_length}),T({t.tree_depth}))"
            )
        return " ⊕ ".join(parts)


def predict_a_minus1(q: int, c: int = 1) -> PredictedDecomposition:
    """Decomposition for a = -1; c only sanity-checked (the shape ignores it)."""
    _check_qc(q, c)
    s, r, divs = odd_part_and_divisors(q)
    terms = []
    for d in divs:
        length = 2 * multiplicative_order(4, 3 * d)
        terms.append(Term(euler_phi(d) * (q - 1) // length, length, s))
    return PredictedDecomposition(q=q, special="Z", terms=tuple(terms))


def predict_a_plus1(q: int, c: int = 1) -> PredictedDecomposition:
    """Decomposition for a = +1; again independent of c."""
    _check_qc(q, c)
    s, r, divs = odd_part_and_divisors(q)
    terms = []
    for d in divs:
        length = multiplicative_order(2, d)
        terms.append(Term(q * euler_phi(d) // length, length, s))
    notes = ()
    if q == 13:
        notes = (
            "for q=13 the d=3 term has cycle length ord_3(2)=2; a Cyc(13) "
            "variant fails the node-count identity (13+52+676 != 169)",
        )
    return PredictedDecomposition(q=q, special="Z*", terms=tuple(terms), notes=notes)


def predicted_node_count(dec: PredictedDecomposition) -> int:
    """Total nodes of a predicted decomposition; must equal q^2."""
    return dec.node_count()


def predict_cycle_census(q: int, a_case: int) -> dict[int, int]:
    """Cycle length -> cycle count, fixed points included.

    a_case is -1 or +1.  For a = +1 the census merges the q fixed points of
    the d = 1 term with the fixed point 0 inside Z*(q), giving q + 1 in all.
    """
    if a_case == -1:
        return predict_a_minus1(q).cycle_census()
    if a_case == 1:
        return predict_a_plus1(q).cycle_census()
    raise ValueError("census is only predicted for a = -1 or a = +1")


def _check_qc(q: int, c: int) -> None:
    from .ffield import PrimeField

    PrimeField(q)  # validates odd prime
    if c % q == 0:
        raise ValueError("c must be non-zero mod q")


@dataclass(frozen=True)
class PartialFacts:
    """What can be said analytically for a outside {0, -1, +1}.

    The GF(q)-side facts apply when chi2(1 - a^2) = 1: every alpha in GF(q)*
    with chi2(alpha*c*(a-1)) = -1 carries exactly two childless extra
    preimages on the beta line, 0 is an isolated fixed point, and the
    component of the second fixed point x* = (c(a+1))^(-1) is a single chain
    of +/- zeta_(2^k) x* multiples capped by a beta pair: a 4-node star when
    s = 1, and (Cyc(1), T(s+1)) when s >= 2.  The s = 1 star is the literal
    reading of the walkthrough (root plus three childless preimages) and is
    only ever asserted after brute-force confirmation.

    When chi2(1 - a^2) = -1 no structural prediction is emitted; exploration
    falls back to brute force entirely.
    """

    params: MapParams
    s: int
    chi_one_minus_a2: int
    applicable: bool
    fixed_points: tuple[tuple[int, int], ...]
    center_state: tuple[int, int]
    augmented_alphas: tuple[int, ...]
    center_shape: TreeShape | None
    center_shape_name: str | None
    notes: tuple[str, ...]

    def preimage_count(self, x: int, y: int) -> int | None:
        from .dynamics import preimage_count_predicted

        return preimage_count_predicted(self.params.ext.element(x, y), self.params)


def predict_partial_general(q: int, a: int, c: int = 1) -> PartialFacts:
    """Partial facts for a not in {0, -1, +1} (a and c given as integers)."""
    params = MapParams.from_ints(q, a, c)
    a_n, c_n = params.a_int, params.c_int
    if a_n in (1, q - 1):
        raise ValueError("partial predictor requires a outside {0, -1, +1}")
    s, _, _ = odd_part_and_divisors(q)
    chi = chi2_int(1 - a_n * a_n, q)
    xstar = pow(c_n * (a_n + 1), -1, q)
    fixed = ((0, 0), (xstar, 0))
    applicable = chi == 1
    augmented: tuple[int, ...] = ()
    center_shape = None
    center_name = None
    notes: tuple[str, ...] = ()
    if applicable:
        augmented = tuple(
            alpha
            for alpha in range(1, q)
            if chi2_int(alpha * c_n * (a_n - 1), q) == -1
        )
        if s == 1:
            center_shape = star_shape(3)
            center_name = "4-node star (fixed point plus three childless parents)"
            notes = (
                "s=1 center component taken literally as the 4-node star; "
                "confirmed by brute force, not assumed",
            )
        else:
            center_shape = t_shape(s + 1)
            center_name = f"(Cyc(1),T({s + 1}))"
    else:
        notes = (
            "chi2(1-a^2) = -1: no structural prediction for the GF(q)-side "
            "components; brute force only",
        )
    return PartialFacts(
        params=params,
        s=s,
        chi_one_minus_a2=chi,
        applicable=applicable,
        fixed_points=fixed,
        center_state=(xstar, 0),
        augmented_alphas=augmented,
        center_shape=center_shape,
        center_shape_name=center_name,
        notes=notes,
    )
