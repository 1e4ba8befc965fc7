"""Positive definite binary quadratic forms, the SL2(Z) right action,
reduction, class numbers and the coset bookkeeping for Gamma_0(6)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath


@dataclass(frozen=True, order=True)
class QForm:
    """[a, b, c] = a X^2 + b XY + c Y^2, positive definite."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.discriminant >= 0:
            raise ValueError(f"{self} is not positive definite")

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return math.gcd(self.a, self.b, self.c)

    @property
    def is_primitive(self) -> bool:
        return self.content == 1

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not abs(b) <= a <= c:
            return False
        if abs(b) == a or a == c:
            return b >= 0
        return True


@dataclass(frozen=True)
class GL2Int:
    """Integer matrix (w x; y z) of determinant 1."""

    w: int
    x: int
    y: int
    z: int

    def __post_init__(self):
        if self.w * self.z - self.x * self.y != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, other: GL2Int) -> GL2Int:
        return GL2Int(
            self.w * other.w + self.x * other.y,
            self.w * other.x + self.x * other.z,
            self.y * other.w + self.z * other.y,
            self.y * other.x + self.z * other.z,
        )

    def inverse(self) -> GL2Int:
        return GL2Int(self.z, -self.x, -self.y, self.w)

    def mobius(self, tau):
        return (self.w * tau + self.x) / (self.y * tau + self.z)

    @property
    def in_gamma0_6(self) -> bool:
        return self.y % 6 == 0


IDENTITY = GL2Int(1, 0, 0, 1)
_S = GL2Int(0, -1, 1, 0)


def _T(k: int) -> GL2Int:
    return GL2Int(1, k, 0, 1)


def act(Q: QForm, sigma: GL2Int) -> QForm:
    """Q o sigma, i.e. Q(wX + xY, yX + zY). A right action."""
    a, b, c = Q.a, Q.b, Q.c
    w, x, y, z = sigma.w, sigma.x, sigma.y, sigma.z
    return QForm(
        a * w * w + b * w * y + c * y * y,
        2 * a * w * x + b * (w * z + x * y) + 2 * c * y * z,
        a * x * x + b * x * z + c * z * z,
    )


def reduce(Q: QForm) -> tuple[QForm, GL2Int]:
    """Reduced form equivalent to Q and sigma with act(Q, sigma) reduced."""
    sigma = IDENTITY
    while True:
        # translate b into (-a, a]
        k = (Q.a - Q.b) // (2 * Q.a)
        if k:
            step = _T(k)
            Q, sigma = act(Q, step), sigma @ step
        if Q.a > Q.c:
            Q, sigma = act(Q, _S), sigma @ _S
            continue
        if Q.a == Q.c and Q.b < 0:
            Q, sigma = act(Q, _S), sigma @ _S
        return Q, sigma


def _check_discriminant(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")


def reduced_forms(D: int, primitive: bool = True) -> list[QForm]:
    """Reduced forms of discriminant D, sorted by (a, b, c)."""
    _check_discriminant(D)
    out = []
    a_max = math.isqrt(-D // 3)
    for a in range(1, a_max + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            Q = QForm(a, b, c)
            if primitive and not Q.is_primitive:
                continue
            out.append(Q)
    return out


def reduced_primitive_forms(D: int) -> list[QForm]:
    return reduced_forms(D, primitive=True)


def class_number(D: int) -> int:
    return len(reduced_primitive_forms(D))


def square_divisors(D: int) -> list[int]:
    """All u > 0 with u^2 | D, increasing."""
    m = abs(D)
    return [u for u in range(1, math.isqrt(m) + 1) if m % (u * u) == 0]


def hurwitz_class_number(D: int) -> int:
    """sum_{u^2 | D} h(D/u^2) for D = 1 (mod 24).

    The general Hurwitz weights 1/2, 1/3 only touch D/u^2 in {-3, -4},
    which cannot occur for D = 1 (mod 24).
    """
    _check_discriminant(D)
    if D % 24 != 1:
        raise ValueError("hurwitz_class_number is only provided for D = 1 (mod 24)")
    return sum(class_number(D // (u * u)) for u in square_divisors(D))


def genus_sign(u: int) -> int:
    r = u % 12
    if r in (1, 7):
        return 1
    if r in (5, 11):
        return -1
    raise ValueError(f"u={u} is not a unit mod 12")


def square_divisors_with_sign(D: int) -> list[tuple[int, int]]:
    if D >= 0 or D % 24 != 1:
        raise ValueError("need a negative discriminant D = 1 (mod 24)")
    return [(u, genus_sign(u)) for u in square_divisors(D)]


# -- cosets of Gamma_0(6) in SL2(Z) ---------------------------------------

CUSP_WIDTH = {"infinity": 1, "one_third": 2, "one_half": 3, "zero": 6}
# eigenvalue of F under the Atkin-Lehner involution attached to each cusp
CUSP_SIGN = {"infinity": 1, "one_third": 1, "one_half": -1, "zero": -1}


class Coset(NamedTuple):
    cusp_class: str
    shift: int
    gamma: GL2Int


def _coset_list() -> list[Coset]:
    out = [Coset("infinity", 0, IDENTITY)]
    out += [Coset("one_third", r, GL2Int(1, 0, 3, 1) @ _T(r)) for r in range(2)]
    out += [Coset("one_half", s, GL2Int(1, 1, 2, 3) @ _T(s)) for s in range(3)]
    out += [Coset("zero", t, _S @ _T(t)) for t in range(6)]
    return out


COSETS: tuple[Coset, ...] = tuple(_coset_list())


@dataclass(frozen=True)
class CosetAssignment:
    gamma: GL2Int
    cusp_class: str
    width: int
    shift: int
    level6_form: QForm

    @property
    def sign(self) -> int:
        return CUSP_SIGN[self.cusp_class]

    @property
    def zeta_exponent(self) -> int:
        """k with zeta_Q = exp(2 pi i k / 6) for the leading term of F|gamma."""
        s = self.shift
        return {
            "infinity": 0,
            "one_third": 3 - 3 * s,
            "one_half": 3 - 2 * s,
            "zero": 3 - s,
        }[self.cusp_class] % 6


class CosetError(RuntimeError):
    pass


def _is_level6_r1(Q: QForm) -> bool:
    return Q.a % 6 == 0 and Q.b % 12 == 1


def assign_coset(Qr: QForm, D: int | None = None) -> CosetAssignment:
    """The unique gamma in the 12 coset representatives with
    Q o gamma^-1 in Q_{D,6,1}, found by scanning all of them."""
    if D is not None and Qr.discriminant != D:
        raise ValueError("form does not have the stated discriminant")
    hits = []
    for coset in COSETS:
        image = act(Qr, coset.gamma.inverse())
        if _is_level6_r1(image):
            hits.append((coset, image))
    if len(hits) != 1:
        raise CosetError(f"{len(hits)} coset representatives qualify for {Qr}")
    coset, image = hits[0]
    return CosetAssignment(coset.gamma, coset.cusp_class, CUSP_WIDTH[coset.cusp_class],
                           coset.shift, image)


# -- Heegner points --------------------------------------------------------

@dataclass(frozen=True)
class HeegnerPoint:
    re: mpmath.mpf
    im: mpmath.mpf
    source_form: QForm
    precision: int

    @property
    def tau(self) -> mpmath.mpc:
        with mpmath.workprec(self.precision):
            return mpmath.mpc(self.re, self.im)


def heegner_point(Q: QForm, precision: int = 128) -> HeegnerPoint:
    """Root (-b + sqrt(D)) / 2a of Q(X, 1) in the upper half plane."""
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    with mpmath.workprec(precision):
        two_a = 2 * Q.a
        re = mpmath.mpf(-Q.b) / two_a
        im = mpmath.sqrt(-Q.discriminant) / two_a
    return HeegnerPoint(re, im, Q, precision)


# -- Table 2 of the forms with small leading coefficient -------------------

# (a, |b|) -> (numerator slope, numerator intercept, denominator): c = (s*n + t)/d
TABLE2 = {
    (1, 1): (6, 0, 1),
    (2, 1): (3, 0, 1),
    (3, 1): (2, 0, 1),
    (4, 1): (3, 0, 2), (4, 3): (3, 1, 2),
    (5, 1): (6, 0, 5), (5, 3): (6, 2, 5),
    (6, 1): (1, 0, 1), (6, 5): (1, 1, 1),
    (7, 1): (6, 0, 7), (7, 3): (6, 2, 7), (7, 5): (6, 6, 7),
    (8, 1): (3, 0, 4), (8, 3): (3, 1, 4), (8, 5): (3, 3, 4), (8, 7): (3, 6, 4),
    (9, 1): (2, 0, 3), (9, 5): (2, 2, 3), (9, 7): (2, 4, 3),
    (10, 1): (3, 0, 5), (10, 3): (3, 1, 5), (10, 7): (3, 6, 5), (10, 9): (3, 10, 5),
    (11, 1): (6, 0, 11), (11, 3): (6, 2, 11), (11, 5): (6, 6, 11), (11, 7): (6, 12, 11),
    (11, 9): (6, 20, 11),
    (12, 1): (1, 0, 2), (12, 5): (1, 1, 2), (12, 7): (1, 2, 2), (12, 11): (1, 5, 2),
}


def table2_forms(n: int) -> list[QForm]:
    """Forms [a, +-b, c] from the small-a table for D_n = 1 - 24n whose c is
    an integer and which are reduced and primitive."""
    out = []
    for (a, b), (s, t, d) in TABLE2.items():
        if (s * n + t) % d:
            continue
        c = (s * n + t) // d
        for sb in (b, -b):
            Q = QForm(a, sb, c)
            if Q.is_reduced and Q.is_primitive:
                out.append(Q)
    return sorted(set(out))
