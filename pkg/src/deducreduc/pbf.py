"""Sparse multilinear pseudo-Boolean polynomials with integer coefficients.

A polynomial is a map from monomials to nonzero integers.  A monomial is a
strictly increasing tuple of variable indices; ``()`` is the constant term.
Because every variable is binary, ``x*x == x`` and the multilinear form is
unique, so two polynomials agree on every 0/1 assignment exactly when their
term maps are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import TooManyVariables, UncoveredVariable

Monomial = Tuple[int, ...]
Assignment = Mapping[int, int]

SPECTRUM_CAP = 25
_CHUNK_BITS = 20


@dataclass(frozen=True)
class Role:
    """What a variable stands for.  Never consulted by the arithmetic.

    ``kind`` is one of ``"p"``, ``"q"`` (factor bits), ``"carry"`` or
    ``"generic"``.  For factor bits ``bit`` is the bit position; for carries
    ``column`` is the column the carry leaves and ``slot`` its weight
    exponent (the carry is worth ``2**slot`` in that column).
    """

    kind: str = "generic"
    bit: Optional[int] = None
    column: Optional[int] = None
    slot: Optional[int] = None

    def label(self) -> str:
        if self.kind in ("p", "q"):
            return f"{self.kind}{self.bit}"
        if self.kind == "carry":
            return f"z{self.column}_{self.column + self.slot}"
        return "generic"


def monomial(variables: Iterable[int]) -> Monomial:
    """Canonical monomial: sorted, duplicates collapsed (x*x = x)."""
    return tuple(sorted(set(variables)))


def _union(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b or a == b:
        return a
    return tuple(sorted(set(a).union(b)))


class Polynomial:
    """Immutable multilinear polynomial over binary variables."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Iterable[int], int]] = None):
        clean: Dict[Monomial, int] = {}
        if terms:
            for mono, coeff in terms.items():
                if not isinstance(coeff, (int, np.integer)) or isinstance(coeff, bool):
                    raise TypeError(f"coefficients must be integers, got {coeff!r}")
                key = monomial(mono)
                clean[key] = clean.get(key, 0) + int(coeff)
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: Dict[Monomial, int]) -> "Polynomial":
        # caller guarantees canonical monomials and no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def var(cls, index: int, coeff: int = 1) -> "Polynomial":
        return cls._from_clean({(index,): coeff} if coeff else {})

    @classmethod
    def const(cls, value: int) -> "Polynomial":
        return cls._from_clean({(): value} if value else {})

    @classmethod
    def term(cls, coeff: int, variables: Iterable[int] = ()) -> "Polynomial":
        return cls._from_clean({monomial(variables): coeff} if coeff else {})

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def items(self) -> List[Tuple[Monomial, int]]:
        """Terms in lexicographic monomial order."""
        return sorted(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self._terms))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, mono: Iterable[int]) -> int:
        return self._terms.get(monomial(mono), 0)

    @property
    def constant(self) -> int:
        return self._terms.get((), 0)

    @property
    def degree(self) -> int:
        """Largest monomial size; the zero polynomial has degree 0."""
        return max((len(m) for m in self._terms), default=0)

    @property
    def variables(self) -> Tuple[int, ...]:
        seen = set()
        for m in self._terms:
            seen.update(m)
        return tuple(sorted(seen))

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def is_monomial(self) -> bool:
        """True for a single non-constant term with coefficient 1."""
        if len(self._terms) != 1:
            return False
        (m, c), = self._terms.items()
        return bool(m) and c == 1

    def as_monomial(self) -> Monomial:
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        return next(iter(self._terms))

    def min_value_bound(self) -> int:
        """Lower bound on the polynomial over {0,1}^n (negative coefficients only)."""
        return self.constant + sum(c for m, c in self._terms.items() if m and c < 0)

    def max_value_bound(self) -> int:
        """Upper bound on the polynomial over {0,1}^n (positive coefficients only)."""
        return self.constant + sum(c for m, c in self._terms.items() if m and c > 0)

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return Polynomial.const(int(other))
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._from_clean(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._from_clean({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_constant():
            k = other.constant
            if not k:
                return Polynomial()
            return Polynomial._from_clean({m: c * k for m, c in self._terms.items()})
        out: Dict[Monomial, int] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                key = _union(ma, mb)
                out[key] = out.get(key, 0) + ca * cb
        return Polynomial._from_clean({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def square(self) -> "Polynomial":
        """Multilinear square, using the x*x = x shortcut on the diagonal."""
        items = list(self._terms.items())
        out: Dict[Monomial, int] = {}
        for i, (ma, ca) in enumerate(items):
            out[ma] = out.get(ma, 0) + ca * ca
            for mb, cb in items[i + 1:]:
                key = _union(ma, mb)
                out[key] = out.get(key, 0) + 2 * ca * cb
        return Polynomial._from_clean({m: c for m, c in out.items() if c})

    # -- comparison ------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        # highest degree first reads like the usual hand-written form
        parts = []
        for m, c in sorted(self._terms.items(), key=lambda t: (-len(t[0]), t[0])):
            body = "*".join(f"x{v}" for v in m)
            if not m:
                text = str(abs(c))
            elif abs(c) == 1:
                text = body
            else:
                text = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    # -- evaluation ------------------------------------------------------

    def __call__(self, assignment: Assignment) -> int:
        return evaluate(self, assignment)


@dataclass(frozen=True)
class DegreeProfile:
    counts: Dict[int, int] = field(default_factory=dict)
    variable_count: int = 0

    def __getitem__(self, degree: int) -> int:
        return self.counts.get(degree, 0)

    @property
    def term_count(self) -> int:
        return sum(self.counts.values())

    def format(self) -> str:
        top = max(self.counts, default=0)
        fields = [f"vars={self.variable_count}"]
        fields += [f"deg{d}={self[d]}" for d in range(top, -1, -1)]
        return " ".join(fields)


def add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def evaluate(p: Polynomial, assignment: Assignment) -> int:
    total = 0
    for mono, coeff in p.terms.items():
        on = True
        for v in mono:
            try:
                bit = assignment[v]
            except KeyError:
                raise UncoveredVariable(v) from None
            if not bit:
                on = False
        if on:
            total += coeff
    return total


def partial_evaluate(p: Polynomial, assignment: Assignment) -> Polynomial:
    """Substitute the assigned variables, leaving a polynomial in the rest."""
    out: Dict[Monomial, int] = {}
    for mono, coeff in p.terms.items():
        rest = []
        dead = False
        for v in mono:
            bit = assignment.get(v)
            if bit is None:
                rest.append(v)
            elif not bit:
                dead = True
                break
        if dead:
            continue
        key = tuple(rest)
        out[key] = out.get(key, 0) + coeff
    return Polynomial._from_clean({m: c for m, c in out.items() if c})


def substitute(p: Polynomial, mapping: Mapping[int, Polynomial]) -> Polynomial:
    """Replace each mapped variable by a polynomial (composition)."""
    if not mapping:
        return p
    out: Dict[Monomial, int] = {}
    for mono, coeff in p.terms.items():
        kept = []
        factors = []
        for v in mono:
            image = mapping.get(v)
            if image is None:
                kept.append(v)
            else:
                factors.append(image)
        if not factors:
            out[mono] = out.get(mono, 0) + coeff
            continue
        piece = Polynomial._from_clean({tuple(kept): coeff})
        for f in factors:
            piece = piece * f
            if not piece:
                break
        for m, c in piece.terms.items():
            out[m] = out.get(m, 0) + c
    return Polynomial._from_clean({m: c for m, c in out.items() if c})


def degree_profile(p: Polynomial) -> DegreeProfile:
    counts: Dict[int, int] = {}
    for mono in p.terms:
        counts[len(mono)] = counts.get(len(mono), 0) + 1
    return DegreeProfile(dict(sorted(counts.items())), len(p.variables))


def max_abs_bound(p: Polynomial) -> int:
    """Triangle-inequality bound on max |p(x)| over all binary x."""
    return sum(abs(c) for c in p.terms.values())


def bits_to_assignment(index: int, order: Sequence[int]) -> Dict[int, int]:
    """Big-endian: the first variable in ``order`` is the most significant bit."""
    n = len(order)
    return {v: (index >> (n - 1 - i)) & 1 for i, v in enumerate(order)}


def assignment_to_index(assignment: Assignment, order: Sequence[int]) -> int:
    index = 0
    for v in order:
        index = (index << 1) | (1 if assignment[v] else 0)
    return index


def _check_order(p: Polynomial, order: Sequence[int], cap: int) -> None:
    if len(order) > cap:
        raise TooManyVariables(f"{len(order)} variables exceeds the cap of {cap}")
    if len(set(order)) != len(order):
        raise ValueError("variable order contains duplicates")
    known = set(order)
    for v in p.variables:
        if v not in known:
            raise UncoveredVariable(v)


def iter_spectrum(p: Polynomial, order: Sequence[int], cap: int = SPECTRUM_CAP,
                  chunk_bits: int = _CHUNK_BITS) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield ``(start, values)`` blocks covering indices ``0 .. 2**n - 1``.

    Values are int64 when the triangle bound allows it, else Python ints in
    an object array.
    """
    _check_order(p, order, cap)
    n = len(order)
    total = 1 << n
    position = {v: i for i, v in enumerate(order)}
    dtype = np.int64 if max_abs_bound(p) < 2**62 else object
    step = 1 << min(chunk_bits, n)
    terms = [([position[v] for v in m], c) for m, c in p.items()]
    for start in range(0, total, step):
        idx = np.arange(start, start + step, dtype=np.int64)
        bits = [((idx >> (n - 1 - i)) & 1).astype(bool) for i in range(n)]
        values = np.full(step, 0, dtype=dtype)
        for positions, coeff in terms:
            if not positions:
                values += coeff
                continue
            mask = bits[positions[0]]
            for i in positions[1:]:
                mask = mask & bits[i]
            if dtype is object:
                values[mask] += coeff
            else:
                values += mask * np.int64(coeff)
        yield start, values


def spectrum(p: Polynomial, order: Sequence[int], cap: int = SPECTRUM_CAP) -> List[int]:
    """Energies of all 2**n assignments, indexed big-endian in ``order``."""
    out: List[int] = []
    for _, values in iter_spectrum(p, order, cap):
        out.extend(int(v) for v in values)
    return out


def spectrum_array(p: Polynomial, order: Sequence[int], cap: int = SPECTRUM_CAP) -> np.ndarray:
    blocks = [values for _, values in iter_spectrum(p, order, cap)]
    return np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.int64)


def zero_indices(p: Polynomial, order: Sequence[int], cap: int = SPECTRUM_CAP) -> List[int]:
    found: List[int] = []
    for start, values in iter_spectrum(p, order, cap):
        found.extend(int(start + i) for i in np.flatnonzero(values == 0))
    return found
