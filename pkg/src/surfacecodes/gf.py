"""Finite field arithmetic over GF(p^e) backed by lookup tables."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import galois
import numpy as np

from surfacecodes.exceptions import (
    DivisionByZeroError,
    FieldError,
    FieldMismatchError,
    FormatError,
    ReducibleModulusError,
)

logger = logging.getLogger(__name__)

MAX_ORDER = 1 << 16
FULL_TABLE_ORDER = 256
DTYPE = np.int64


def is_irreducible(poly: galois.Poly) -> bool:
    """Trial division against every monic polynomial of degree <= deg/2."""
    p = poly.field.characteristic
    degree = poly.degree
    if degree < 1:
        return False
    for d in range(1, degree // 2 + 1):
        for value in range(p**d, 2 * p**d):
            divisor = galois.Poly.Int(value, field=poly.field)
            if int(poly % divisor) == 0:
                return False
    return True


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree e over GF(p).

    Coefficients are returned highest degree first.
    """
    prime_field = galois.GF(p)
    for value in range(p**e, 2 * p**e):
        poly = galois.Poly.Int(value, field=prime_field)
        if is_irreducible(poly):
            return tuple(int(c) for c in poly.coeffs)
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")


class Field:
    """GF(p^e) with exp/log tables keyed to a fixed primitive element.

    Elements are integers in [0, q): the base-p digits of an element are the
    coefficients of its residue polynomial, lowest degree first. For q <= 256
    addition and multiplication are full q x q tables; larger fields multiply
    through exp/log and add by XOR (p = 2) or through galois.

    Instances are immutable; build them with `field_new`.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]) -> None:
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus

        if e == 1:
            self._gf = galois.GF(p)
        else:
            irreducible = galois.Poly(list(modulus), field=galois.GF(p))
            self._gf = galois.GF(self.q, irreducible_poly=irreducible)

        q = self.q
        alpha = self._gf.primitive_element
        self.primitive_element = int(alpha)
        powers = self._gf(np.full(q - 1, self.primitive_element, dtype=DTYPE))
        exp = (powers ** np.arange(q - 1, dtype=DTYPE)).view(np.ndarray).astype(DTYPE)
        if q > 1 and np.unique(exp).size != q - 1:
            raise FieldError(f"generator {self.primitive_element} does not have order {q - 1}")
        log = np.zeros(q, dtype=DTYPE)
        log[exp] = np.arange(q - 1, dtype=DTYPE)
        self._exp = exp
        self._log = log

        elements = self._gf.elements
        self._neg = (-elements).view(np.ndarray).astype(DTYPE)
        inv = np.zeros(q, dtype=DTYPE)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        self._inv = inv

        self._add: np.ndarray | None = None
        self._mul: np.ndarray | None = None
        if q <= FULL_TABLE_ORDER:
            self._add = (elements[:, None] + elements[None, :]).view(np.ndarray).astype(DTYPE)
            self._mul = (elements[:, None] * elements[None, :]).view(np.ndarray).astype(DTYPE)

        for table in (self._exp, self._log, self._neg, self._inv, self._add, self._mul):
            if table is not None:
                table.flags.writeable = False
        logger.debug("Built %r with modulus %s", self, modulus)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __reduce__(self):
        return (field_new, (self.p, self.e, self.modulus))

    @property
    def galois_field(self) -> type[galois.FieldArray]:
        return self._gf

    @property
    def exp_table(self) -> np.ndarray:
        return self._exp

    @property
    def log_table(self) -> np.ndarray:
        return self._log

    def header(self) -> str:
        return f"q={self.p}^{self.e}"

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=DTYPE)

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, int(value))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    # Vectorised arithmetic on integer arrays (or Python ints).

    def add(self, a, b) -> np.ndarray:
        if self._add is not None:
            return self._add[a, b]
        if self.p == 2:
            return np.bitwise_xor(np.asarray(a, dtype=DTYPE), np.asarray(b, dtype=DTYPE))
        total = self._gf(np.asarray(a, dtype=DTYPE)) + self._gf(np.asarray(b, dtype=DTYPE))
        return total.view(np.ndarray).astype(DTYPE)

    def neg(self, a) -> np.ndarray:
        return self._neg[a]

    def sub(self, a, b) -> np.ndarray:
        return self.add(a, self._neg[b])

    def mul(self, a, b) -> np.ndarray:
        if self._mul is not None:
            return self._mul[a, b]
        a = np.asarray(a, dtype=DTYPE)
        b = np.asarray(b, dtype=DTYPE)
        product = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, product)

    def inv(self, a) -> np.ndarray:
        if np.any(np.asarray(a) == 0):
            raise DivisionByZeroError(f"zero has no inverse in {self!r}")
        return self._inv[a]

    def div(self, a, b) -> np.ndarray:
        return self.mul(a, self.inv(b))

    def power(self, a, n: int) -> np.ndarray:
        a = np.asarray(a, dtype=DTYPE)
        if n == 0:
            return np.ones_like(a)
        if n < 0 and np.any(a == 0):
            raise DivisionByZeroError(f"zero raised to a negative power in {self!r}")
        raised = self._exp[(self._log[a] * n) % (self.q - 1)]
        return np.where(a == 0, 0, raised)

    def embedding_into(self, ext: Field) -> np.ndarray:
        """Table mapping each element of this field to its image in `ext`.

        The image of the generator of the residue ring is the least root of the
        modulus in `ext`, so the table is deterministic.
        """
        if ext.p != self.p or ext.e % self.e:
            raise FieldError(f"{self!r} is not a subfield of {ext!r}")
        if self.e == 1:
            return self.elements()
        candidates = ext.elements()
        value = np.zeros(ext.q, dtype=DTYPE)
        for coeff in self.modulus:
            value = ext.add(ext.mul(value, candidates), coeff)
        root = int(np.flatnonzero(value == 0)[0])

        digits = (self.elements()[:, None] // self.p ** np.arange(self.e)) % self.p
        image = np.zeros(self.q, dtype=DTYPE)
        for i in range(self.e):
            image = ext.add(image, ext.mul(digits[:, i], ext.power(root, i)))
        return image


@dataclass(frozen=True)
class FieldElement:
    """A single element of a Field; equality is equality of representations."""

    field: Field
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise FieldError(f"{self.value} is not an element of {self.field!r}")

    def _other(self, other: FieldElement) -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
        return other.value

    def _wrap(self, value) -> FieldElement:
        return FieldElement(self.field, int(value))

    def __add__(self, other: FieldElement) -> FieldElement:
        return self._wrap(self.field.add(self.value, self._other(other)))

    def __sub__(self, other: FieldElement) -> FieldElement:
        return self._wrap(self.field.sub(self.value, self._other(other)))

    def __mul__(self, other: FieldElement) -> FieldElement:
        return self._wrap(self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self._wrap(self.field.div(self.value, self._other(other)))

    def __neg__(self) -> FieldElement:
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, n: int) -> FieldElement:
        return self._wrap(self.field.power(self.value, n))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value} in {self.field!r}"


@lru_cache(maxsize=None)
def _build_field(p: int, e: int, modulus: tuple[int, ...] | None) -> Field:
    if modulus is None:
        modulus = default_modulus(p, e)
    else:
        if len(modulus) != e + 1 or modulus[0] != 1:
            raise FieldError(f"modulus must be monic of degree {e}: {list(modulus)}")
        if any(not 0 <= c < p for c in modulus):
            raise FieldError(f"modulus coefficients must lie in [0, {p}): {list(modulus)}")
        if not is_irreducible(galois.Poly(list(modulus), field=galois.GF(p))):
            raise ReducibleModulusError(f"{list(modulus)} is reducible over GF({p})")
    return Field(p, e, modulus)


def field_new(p: int, e: int = 1, modulus: list[int] | tuple[int, ...] | None = None) -> Field:
    """Build (or fetch the cached) GF(p^e).

    Args:
        p: Prime characteristic.
        e: Extension degree, at least 1.
        modulus: Monic irreducible polynomial of degree e over GF(p), highest
            degree coefficient first. Defaults to the lexicographically least one.

    Returns:
        The field; identical arguments return the same shared instance.
    """
    if not galois.is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be positive, got {e}")
    if p**e > MAX_ORDER:
        raise FieldError(f"field order {p}^{e} exceeds {MAX_ORDER}")
    return _build_field(p, e, tuple(int(c) for c in modulus) if modulus is not None else None)


def field_from_order(q: int) -> Field:
    """Default field of order q."""
    if q < 2 or not galois.is_prime_power(q):
        raise FieldError(f"{q} is not a prime power")
    primes, exponents = galois.factors(q)
    return field_new(int(primes[0]), int(exponents[0]))


def parse_field_header(text: str, modulus: list[int] | None = None) -> Field:
    """Parse a `q=<p>^<e>` (or `q=<order>`) header line."""
    key, _, value = text.strip().partition("=")
    if key.strip() != "q" or not value:
        raise FormatError(f"expected field header 'q=<p>^<e>', got {text.strip()!r}")
    try:
        if "^" in value:
            base, _, exponent = value.partition("^")
            return field_new(int(base), int(exponent), modulus)
        field = field_from_order(int(value))
    except ValueError as e:
        raise FormatError(f"malformed field header {text.strip()!r}") from e
    if modulus is not None:
        return field_new(field.p, field.e, modulus)
    return field
