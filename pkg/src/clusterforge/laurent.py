"""Exact Laurent polynomials in ``x1..xn`` with arbitrary-precision integer coefficients.

Monomials are packed into single Python integers so that monomial
multiplication is integer addition and graded-lexicographic comparison is
integer comparison: the packed value of ``x^e`` is

    deg(e) * 2**(W*n) + sum((e_i + OFF) * 2**(W*(n-1-i)))

with ``W = 32`` bits per variable and ``OFF = 2**31``.  Exponents must stay
below ``2**30`` in absolute value.
"""

from __future__ import annotations

import heapq
import json
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import FormatError, NegativeExponent, NonExactDivision, ZeroPolynomial

W = 32
OFF = 1 << (W - 1)
MASK = (1 << W) - 1
EXP_LIMIT = 1 << 30

ExponentVector = tuple[int, ...]


def _offset(n: int) -> int:
    return sum(OFF << (W * (n - 1 - i)) for i in range(n))


_OFFSETS: dict[int, int] = {}


def offset(n: int) -> int:
    k = _OFFSETS.get(n)
    if k is None:
        k = _OFFSETS[n] = _offset(n)
    return k


def pack(e: Sequence[int]) -> int:
    n = len(e)
    p = sum(e) << (W * n)
    for i, x in enumerate(e):
        if not -EXP_LIMIT < x < EXP_LIMIT:
            raise OverflowError(f"exponent {x} outside supported range")
        p += (x + OFF) << (W * (n - 1 - i))
    return p


def unpack(p: int, n: int) -> ExponentVector:
    return tuple(((p >> (W * (n - 1 - i))) & MASK) - OFF for i in range(n))


class LaurentPolynomial:
    """Immutable Laurent polynomial; zero coefficients are never stored."""

    def __init__(self, n: int, packed: Mapping[int, int]):
        self.n = n
        self._t = {p: c for p, c in packed.items() if c}

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Sequence[int], int] | Iterable[tuple[Sequence[int], int]]) -> "LaurentPolynomial":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            if len(e) != n:
                raise ValueError(f"exponent vector {tuple(e)} has wrong length for n={n}")
            p = pack(e)
            acc[p] = acc.get(p, 0) + int(c)
        return cls(n, acc)

    @classmethod
    def zero(cls, n: int) -> "LaurentPolynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, c: int = 1) -> "LaurentPolynomial":
        return cls(n, {pack((0,) * n): c})

    @classmethod
    def monomial(cls, e: Sequence[int], c: int = 1) -> "LaurentPolynomial":
        return cls(len(e), {pack(e): c})

    @classmethod
    def variable(cls, n: int, i: int, power: int = 1) -> "LaurentPolynomial":
        """The 1-based variable ``x_i`` raised to ``power``."""
        e = [0] * n
        e[i - 1] = power
        return cls.monomial(e)

    # -- inspection -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    @property
    def is_zero(self) -> bool:
        return not self._t

    def terms(self) -> dict[ExponentVector, int]:
        return {unpack(p, self.n): c for p, c in self._t.items()}

    def sorted_terms(self) -> list[tuple[ExponentVector, int]]:
        """Terms in graded-lexicographic descending order."""
        return [(unpack(p, self.n), self._t[p]) for p in sorted(self._t, reverse=True)]

    def coefficients(self) -> list[int]:
        return list(self._t.values())

    @cached_property
    def sort_key(self) -> tuple[tuple[int, int], ...]:
        """Total order: lexicographic on the grlex-descending term list."""
        return tuple((p, self._t[p]) for p in sorted(self._t, reverse=True))

    def min_exponents(self) -> ExponentVector:
        if not self._t:
            raise ZeroPolynomial("zero polynomial has no exponents")
        exps = [unpack(p, self.n) for p in self._t]
        return tuple(min(e[i] for e in exps) for i in range(self.n))

    def max_exponents(self) -> ExponentVector:
        if not self._t:
            raise ZeroPolynomial("zero polynomial has no exponents")
        exps = [unpack(p, self.n) for p in self._t]
        return tuple(max(e[i] for e in exps) for i in range(self.n))

    def is_polynomial(self) -> bool:
        return not self._t or all(x >= 0 for x in self.min_exponents())

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def leading_term(self) -> tuple[ExponentVector, int]:
        p = max(self._t)
        return unpack(p, self.n), self._t[p]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.n == other.n and self._t == other._t

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = self.__dict__["_hash"] = hash((self.n, frozenset(self._t.items())))
        return h

    def __lt__(self, other: "LaurentPolynomial") -> bool:
        return self.sort_key < other.sort_key

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "LaurentPolynomial") -> None:
        if other.n != self.n:
            raise ValueError(f"ambient variable counts differ: {self.n} vs {other.n}")

    def __add__(self, other: "LaurentPolynomial | int") -> "LaurentPolynomial":
        if isinstance(other, int):
            other = LaurentPolynomial.constant(self.n, other)
        self._check(other)
        acc = dict(self._t)
        for p, c in other._t.items():
            acc[p] = acc.get(p, 0) + c
        return LaurentPolynomial(self.n, acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self.n, {p: -c for p, c in self._t.items()})

    def __sub__(self, other: "LaurentPolynomial | int") -> "LaurentPolynomial":
        if isinstance(other, int):
            other = LaurentPolynomial.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other: int) -> "LaurentPolynomial":
        return LaurentPolynomial.constant(self.n, other) - self

    def __mul__(self, other: "LaurentPolynomial | int") -> "LaurentPolynomial":
        if isinstance(other, int):
            return LaurentPolynomial(self.n, {p: c * other for p, c in self._t.items()})
        self._check(other)
        a, b = self._t, other._t
        if len(a) * len(b) > SUBSTITUTION_THRESHOLD:
            fast = _substitution_mul(self, other)
            if fast is not None:
                return fast
        if len(a) < len(b):
            a, b = b, a
        k = offset(self.n)
        acc: dict[int, int] = {}
        get = acc.get
        for pb, cb in b.items():
            shift = pb - k
            for pa, ca in a.items():
                p = pa + shift
                acc[p] = get(p, 0) + ca * cb
        return LaurentPolynomial(self.n, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPolynomial":
        if e < 0:
            if not self.is_monomial():
                raise NonExactDivision("only monomials have Laurent inverses")
            (p, c), = self._t.items()
            if c not in (1, -1):
                raise NonExactDivision("coefficient is not a unit")
            inv = LaurentPolynomial(self.n, {2 * offset(self.n) - p: c})
            return inv ** (-e)
        result = LaurentPolynomial.constant(self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, e: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial ``x^e``."""
        d = pack(e) - offset(self.n)
        return LaurentPolynomial(self.n, {p + d: c for p, c in self._t.items()})

    def evaluate(self, point: Sequence[int]) -> int:
        """Value at an integer point; only defined where no negative power hits 0."""
        total = 0
        for e, c in self.terms().items():
            v = c
            for x, a in zip(point, e):
                if a < 0:
                    if x == 0:
                        raise ZeroDivisionError("negative power of a zero coordinate")
                    raise ValueError("evaluate supports nonnegative exponents only")
                v *= x**a
            total += v
        return total

    # -- formatting -----------------------------------------------------------

    def __str__(self) -> str:
        return format_laurent(self)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.n}, {format_laurent(self)!r})"


def add(f: LaurentPolynomial, g: LaurentPolynomial) -> LaurentPolynomial:
    return f + g


def mul(f: LaurentPolynomial, g: LaurentPolynomial) -> LaurentPolynomial:
    return f * g


def exact_div(f: LaurentPolynomial, g: LaurentPolynomial, method: str = "auto") -> LaurentPolynomial:
    """Return ``q`` with ``q * g == f``; raise NonExactDivision if none exists.

    A monomial divisor divides termwise.  Otherwise both operands are shifted
    into the ordinary polynomial ring and the leading term of the remainder
    is eliminated under graded-lexicographic order until it vanishes.

    With ``method="auto"`` large divisions first try an integer-packing route
    (see :func:`_substitution_div`) whose answer is accepted only when exactness
    is proven; anything else falls through to the elimination loop.
    ``method="grlex"`` forces the loop.
    """
    if method not in ("auto", "grlex"):
        raise ValueError(f"unknown division method {method!r}")
    f._check(g)
    n = f.n
    if g.is_zero:
        raise ZeroPolynomial("division by the zero polynomial")
    if f.is_zero:
        return f
    k = offset(n)
    if g.is_monomial():
        (pg, cg), = g._t.items()
        out = {}
        for p, c in f._t.items():
            q, r = divmod(c, cg)
            if r:
                raise NonExactDivision(f"coefficient {c} not divisible by {cg}")
            out[p - pg + k] = q
        return LaurentPolynomial(n, out)

    fmin, gmin = f.min_exponents(), g.min_exponents()
    Fp = f.shift([-x for x in fmin])
    Gp = g.shift([-x for x in gmin])
    diff = [a - b for a, b in zip(fmin, gmin)]
    if method == "auto" and len(Fp) * len(Gp) > SUBSTITUTION_THRESHOLD:
        fast = _substitution_div(Fp, Gp)
        if fast is not None:
            return fast.shift(diff)
    F, G = Fp._t, Gp._t
    lead_g = max(G)
    lead_c = G[lead_g]
    g_items = list(G.items())
    R = dict(F)
    heap = [-p for p in R]
    heapq.heapify(heap)
    Q: dict[int, int] = {}
    # In a domain max_i(q) + max_i(g) = max_i(f), which bounds every quotient term.
    caps = [OFF + a - b for a, b in zip(Fp.max_exponents(), Gp.max_exponents())]
    fields = [(W * (n - 1 - i), caps[i]) for i in range(n)]
    while R:
        p = -heapq.heappop(heap)
        c = R.get(p)
        if c is None:
            continue
        t = p - lead_g + k
        for s, cap in fields:
            v = (t >> s) & MASK
            if v < OFF or v > cap:
                raise NonExactDivision("leading monomial of the remainder is not divisible")
        qc, rem = divmod(c, lead_c)
        if rem:
            raise NonExactDivision(f"leading coefficient {c} not divisible by {lead_c}")
        Q[t] = qc
        shift = t - k
        for pg, cg in g_items:
            key = pg + shift
            old = R.get(key)
            if old is None:
                R[key] = -qc * cg
                heapq.heappush(heap, -key)
            else:
                new = old - qc * cg
                if new:
                    R[key] = new
                else:
                    del R[key]
    quotient = LaurentPolynomial(n, Q)
    return quotient.shift(diff)


# -- integer-packing (Kronecker substitution) fast paths ---------------------
#
# An ordinary polynomial with exponents below per-variable radices D_i is laid
# out densely (mixed radix, slot u = sum e_i * prod_{j>i} D_j) and evaluated at
# z = 2**B with balanced B-bit digits.  Multiplication becomes one big-integer
# product; exact division becomes one big-integer division.

SUBSTITUTION_THRESHOLD = 4096
MAX_MUL_BYTES = 4 << 20
# Built-in integer division is quadratic, so without gmpy2 its budget is small.
try:
    from gmpy2 import mpz as _mpz
    MAX_DIV_BYTES = 4 << 20
except ImportError:  # pragma: no cover - gmpy2 is optional
    _mpz = int
    MAX_DIV_BYTES = 96 << 10


def _layout(radices: Sequence[int]) -> tuple[list[int], int]:
    weights = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        weights[i] = weights[i + 1] * radices[i + 1]
    return weights, weights[0] * radices[0] if radices else 1


def _to_int(f: LaurentPolynomial, weights: Sequence[int], slots: int, nbytes: int) -> int:
    half = 1 << (8 * nbytes - 1)
    pattern = half.to_bytes(nbytes, "little")
    buf = bytearray(pattern * slots)
    n = f.n
    fields = [(W * (n - 1 - i), w) for i, w in enumerate(weights)]
    base = OFF * sum(weights)
    for p, c in f._t.items():
        u = sum(((p >> s) & MASK) * w for s, w in fields) - base
        buf[u * nbytes:(u + 1) * nbytes] = (c + half).to_bytes(nbytes, "little")
    return int.from_bytes(buf, "little") - int.from_bytes(pattern * slots, "little")


def _from_int(v: int, n: int, radices: Sequence[int], weights: Sequence[int], slots: int, nbytes: int) -> Optional[LaurentPolynomial]:
    half = 1 << (8 * nbytes - 1)
    pattern = half.to_bytes(nbytes, "little")
    biased = v + int.from_bytes(pattern * slots, "little")
    if biased < 0 or biased.bit_length() > 8 * nbytes * slots:
        return None
    buf = biased.to_bytes(nbytes * slots, "little")
    top = W * n
    out: dict[int, int] = {}
    for u in range(slots):
        chunk = buf[u * nbytes:(u + 1) * nbytes]
        if chunk == pattern:
            continue
        c = int.from_bytes(chunk, "little") - half
        p, d, rest = 0, 0, u
        for w in weights:
            a, rest = divmod(rest, w)
            p = (p << W) | (a + OFF)
            d += a
        out[(d << top) + p] = c
    return LaurentPolynomial(n, out)


def _nbytes(bits: int) -> int:
    return max(1, (bits + 2 + 7) // 8)


def _substitution_mul(a: LaurentPolynomial, b: LaurentPolynomial) -> Optional[LaurentPolynomial]:
    amin, bmin = a.min_exponents(), b.min_exponents()
    A = a.shift([-x for x in amin])
    Bq = b.shift([-x for x in bmin])
    radices = [x + y + 1 for x, y in zip(A.max_exponents(), Bq.max_exponents())]
    weights, slots = _layout(radices)
    ca = max(abs(c) for c in A._t.values())
    cb = max(abs(c) for c in Bq._t.values())
    # Every product coefficient is bounded by ca * cb * min(len).
    nbytes = _nbytes((ca * cb * min(len(A), len(Bq))).bit_length())
    if slots * nbytes > MAX_MUL_BYTES:
        return None
    prod = int(_mpz(_to_int(A, weights, slots, nbytes)) * _mpz(_to_int(Bq, weights, slots, nbytes)))
    out = _from_int(prod, a.n, radices, weights, slots, nbytes)
    assert out is not None
    return out.shift([x + y for x, y in zip(amin, bmin)])


def _substitution_div(F: LaurentPolynomial, G: LaurentPolynomial) -> Optional[LaurentPolynomial]:
    """Quotient of ordinary polynomials, or None if exactness is not proven.

    Raises NonExactDivision when the packed integers do not divide, which
    rules out polynomial divisibility.  An accepted quotient ``Q`` satisfies
    ``Q(z) * G(z) == F(z)`` with all coefficients of ``Q * G`` provably below
    half the digit size and all exponent sums inside the radices, so the
    packing is injective on ``Q * G`` and the identity holds coefficientwise.
    """
    fmax = F.max_exponents()
    radices = [x + 1 for x in fmax]
    weights, slots = _layout(radices)
    cf = max(abs(c) for c in F._t.values())
    g_norm = sum(abs(c) for c in G._t.values())
    bits = cf.bit_length() + g_norm.bit_length() + 8
    for _ in range(3):
        nbytes = _nbytes(bits)
        if slots * nbytes > MAX_DIV_BYTES:
            return None
        fi = _to_int(F, weights, slots, nbytes)
        gi = _to_int(G, weights, slots, nbytes)
        qi, r = divmod(_mpz(fi), _mpz(gi))
        qi = int(qi)
        if r:
            raise NonExactDivision("packed dividend is not divisible by packed divisor")
        Q = _from_int(qi, F.n, radices, weights, slots, nbytes)
        if Q is not None and Q:
            half = 1 << (8 * nbytes - 1)
            cq = max(abs(c) for c in Q._t.values())
            gmax = G.max_exponents()
            if cq * g_norm < half and all(
                a + b <= c for a, b, c in zip(Q.max_exponents(), gmax, fmax)
            ):
                return Q
        bits *= 2
    return None


# -- reduced fractions ------------------------------------------------------


@dataclass(frozen=True)
class ReducedFraction:
    """``numerator / prod(x_i ** denominator[i])`` with no common variable factor."""

    numerator: LaurentPolynomial
    denominator: ExponentVector

    def to_laurent(self) -> LaurentPolynomial:
        return self.numerator.shift([-d for d in self.denominator])

    @property
    def sort_key(self) -> tuple:
        return (self.denominator, self.numerator.sort_key)

    def __lt__(self, other: "ReducedFraction") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        num = format_laurent(self.numerator)
        if not any(self.denominator):
            return num
        den = " ".join(
            f"x{i + 1}" if d == 1 else f"x{i + 1}^{d}"
            for i, d in enumerate(self.denominator)
            if d
        )
        if len(self.numerator) > 1:
            num = f"({num})"
        return f"{num} / ({den})"


def reduced_form(f: LaurentPolynomial) -> ReducedFraction:
    """Write ``f`` as a polynomial over the smallest monomial denominator."""
    if f.is_zero:
        raise ZeroPolynomial("zero has no reduced form")
    d = tuple(max(0, -x) for x in f.min_exponents())
    return ReducedFraction(f.shift(d), d)


def positivity_condition(f: LaurentPolynomial) -> bool:
    """True iff ``f(e_i) > 0`` for every ``e_i = (1,..,1,0,1,..,1)``.

    At ``e_i`` only the terms free of ``x_i`` survive, each contributing its
    coefficient.
    """
    if not f.is_zero and any(x < 0 for x in f.min_exponents()):
        raise NegativeExponent("positivity condition applies to polynomials only")
    terms = f.terms()
    for i in range(f.n):
        if sum(c for e, c in terms.items() if e[i] == 0) <= 0:
            return False
    return True


def coefficients_positive(f: LaurentPolynomial) -> bool:
    return all(c > 0 for c in f.coefficients())


# -- serialisation ----------------------------------------------------------


def _format_monomial(e: Sequence[int]) -> str:
    return " ".join(
        f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(e) if a
    )


def format_laurent(f: LaurentPolynomial) -> str:
    """Terms ``c * x1^a ...`` joined by `` + `` in grlex-descending order."""
    if f.is_zero:
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        mono = _format_monomial(e)
        parts.append(f"{c} * {mono}" if mono else str(c))
    return " + ".join(parts)


_FACTOR = re.compile(r"x(\d+)(?:\^\(?(-?\d+)\)?)?")


def parse_laurent(text: str, n: int) -> LaurentPolynomial:
    """Parse the output of :func:`format_laurent` (and mild variations)."""
    text = text.strip()
    if not text:
        raise FormatError("empty polynomial")
    if text == "0":
        return LaurentPolynomial.zero(n)
    # Split on '+' / '-' that separate terms, keeping exponent signs intact.
    tokens = re.split(r"\s*\+\s*|\s+(?=-\s*\d|-\s*x)", text)
    acc: dict[ExponentVector, int] = {}
    for tok in tokens:
        tok = tok.strip()
        if not tok:
            raise FormatError(f"empty term in {text!r}")
        m = re.match(r"^(-?\s*\d+)?\s*\*?\s*(.*)$", tok)
        assert m is not None
        coef_txt, rest = m.group(1), m.group(2).strip()
        if coef_txt is None:
            coef = -1 if rest.startswith("-") else 1
            rest = rest.lstrip("-").strip()
        else:
            coef = int(coef_txt.replace(" ", ""))
        e = [0] * n
        pos = 0
        rest = rest.replace("*", " ")
        while pos < len(rest):
            if rest[pos].isspace():
                pos += 1
                continue
            fm = _FACTOR.match(rest, pos)
            if not fm:
                raise FormatError(f"cannot parse factor in {tok!r}")
            i = int(fm.group(1))
            if not 1 <= i <= n:
                raise FormatError(f"variable x{i} out of range for n={n}")
            e[i - 1] += int(fm.group(2)) if fm.group(2) else 1
            pos = fm.end()
        key = tuple(e)
        acc[key] = acc.get(key, 0) + coef
    return LaurentPolynomial.from_terms(n, acc)


def laurent_to_json(f: LaurentPolynomial) -> list:
    return [[str(c), list(e)] for e, c in f.sorted_terms()]


def laurent_from_json(data: list, n: int) -> LaurentPolynomial:
    try:
        return LaurentPolynomial.from_terms(n, [(tuple(e), int(c)) for c, e in data])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad Laurent JSON: {exc}") from exc


def dumps_laurent(f: LaurentPolynomial) -> str:
    return json.dumps(laurent_to_json(f))
