"""Deductions and the "simple judgments" that produce them.

A deduction ``f = g`` (``deg g < deg f``) must hold at every ground state.
Its error term ``C = (f - g)**2`` vanishes exactly where it holds and is at
least 1 elsewhere, because both sides are integer valued.

``simple_judgments`` looks at one equation at a time, derives facts that
follow from interval bounds and parity alone, substitutes fixed and equal
variables back into the system, and repeats until nothing new appears.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .encoder import BinaryEquation, hamiltonian_from_equations
from .errors import DegreeViolation, Infeasible
from .pbf import (SPECTRUM_CAP, Monomial, Polynomial, bits_to_assignment, evaluate,
                  substitute, zero_indices)


class Provenance(enum.Enum):
    SIMPLE_JUDGMENT = "simple-judgment"
    SEARCH_PATTERN = "search-pattern"
    USER_SUPPLIED = "user-supplied"


@dataclass(frozen=True)
class Deduction:
    f: Polynomial
    g: Polynomial
    error: Polynomial
    provenance: Provenance = Provenance.USER_SUPPLIED
    rule: str = ""

    @property
    def monomial(self) -> Optional[Monomial]:
        """``f`` as a monomial, or None when ``f`` is not a bare monomial."""
        return self.f.as_monomial() if self.f.is_monomial() else None

    def holds(self, assignment) -> bool:
        return evaluate(self.f, assignment) == evaluate(self.g, assignment)

    def __str__(self) -> str:
        return f"{self.f} = {self.g}"


def make_deduction(f: Polynomial, g: Polynomial,
                   provenance: Provenance = Provenance.USER_SUPPLIED,
                   rule: str = "") -> Deduction:
    if f.is_constant():
        raise DegreeViolation(f"left side {f} of a deduction must be non-constant")
    if g.degree >= f.degree:
        raise DegreeViolation(f"deg({g}) = {g.degree} is not below deg({f}) = {f.degree}")
    return Deduction(f, g, (f - g).square(), provenance, rule)


def zero_product(mono: Monomial, provenance: Provenance, rule: str = "") -> Deduction:
    return make_deduction(Polynomial.term(1, mono), Polynomial(), provenance, rule)


class VerifyStatus(enum.Enum):
    HOLDS = "holds"
    COUNTEREXAMPLE = "counterexample"
    UNVERIFIABLE = "unverifiable"


@dataclass(frozen=True)
class DeductionCheck:
    status: VerifyStatus
    counterexample: Optional[Dict[int, int]] = None


def verify_deduction(d: Deduction, equations: Sequence[BinaryEquation],
                     cap: int = 22) -> DeductionCheck:
    """Brute-force check that ``d`` holds at every solution of ``equations``."""
    h = hamiltonian_from_equations(equations)
    order = sorted(set(h.variables) | set(d.f.variables) | set(d.g.variables)
                   | {v for eq in equations for v in eq.variables})
    if len(order) > min(cap, SPECTRUM_CAP):
        return DeductionCheck(VerifyStatus.UNVERIFIABLE)
    for index in zero_indices(h, order, cap=len(order)):
        a = bits_to_assignment(index, order)
        if not d.holds(a):
            return DeductionCheck(VerifyStatus.COUNTEREXAMPLE, a)
    return DeductionCheck(VerifyStatus.HOLDS)


# -- simple judgments -----------------------------------------------------


@dataclass
class JudgmentOutcome:
    fixed: Dict[int, int] = field(default_factory=dict)
    # (kept, eliminated, parity) with parity "same" or "complement"
    equalities: List[Tuple[int, int, str]] = field(default_factory=list)
    # every zero product found, in the variables current when it was found
    product_zeros: List[Monomial] = field(default_factory=list)
    # zero products still meaningful after substitution, ready for reduction
    deductions: List[Deduction] = field(default_factory=list)
    simplified_equations: List[BinaryEquation] = field(default_factory=list)
    # every eliminated variable as a polynomial in the surviving ones
    substitution: Dict[int, Polynomial] = field(default_factory=dict)

    @property
    def free_variables(self) -> List[int]:
        return sorted({v for eq in self.simplified_equations for v in eq.variables})


def normalize(eq: BinaryEquation) -> Optional[BinaryEquation]:
    """Move every term to the side where its coefficient is positive.

    Returns None for an identity.  Raises Infeasible for ``0 = c``, ``c != 0``.
    """
    diff = eq.difference()
    if not diff:
        return None
    if diff.is_constant():
        raise Infeasible(f"equation reduces to {diff.constant} = 0")
    lhs = {m: c for m, c in diff.terms.items() if c > 0}
    rhs = {m: -c for m, c in diff.terms.items() if c < 0}
    return BinaryEquation(Polynomial(lhs), Polynomial(rhs))


def _bounds(diff: Polynomial) -> Tuple[int, int]:
    return diff.min_value_bound(), diff.max_value_bound()


class _Judge:
    def __init__(self, equations: Sequence[BinaryEquation], max_zero_degree: int):
        self.max_zero_degree = max_zero_degree
        self.substitution: Dict[int, Polynomial] = {}
        self.zero_monos: Set[Monomial] = set()
        self.zero_sets: List[frozenset] = []
        self.found_zeros: Set[Monomial] = set()
        self.zero_rules: Dict[Monomial, str] = {}
        self.equalities: List[Tuple[int, int, str]] = []
        self.equations: List[Polynomial] = []
        for eq in equations:
            self._push(eq.difference())

    # equations are kept as difference polynomials lhs - rhs
    def _push(self, diff: Polynomial) -> None:
        diff = self._clean(diff)
        if not diff:
            return
        if diff.is_constant():
            raise Infeasible(f"equation reduces to {diff.constant} = 0")
        lo, hi = _bounds(diff)
        if lo > 0 or hi < 0:
            raise Infeasible(f"{diff} = 0 violates its bounds [{lo}, {hi}]")
        self.equations.append(diff)

    def _clean(self, diff: Polynomial) -> Polynomial:
        diff = substitute(diff, self.substitution)
        if self.zero_sets:
            kept = {}
            for m, c in diff.terms.items():
                if len(m) >= 2:
                    ms = set(m)
                    if any(z <= ms for z in self.zero_sets):
                        continue
                kept[m] = c
            if len(kept) != len(diff):
                diff = Polynomial(kept)
        return diff

    def eliminate(self, var: int, image: Polynomial) -> None:
        image = substitute(image, self.substitution)
        if var in self.substitution:
            # already eliminated: the fact becomes a new equation
            self._push(self.substitution[var] - image)
            return
        if image == Polynomial.var(var):
            return
        if var in image.variables:
            # x = 1 - x and similar
            self._push(Polynomial.var(var) - image)
            return
        step = {var: image}
        self.substitution = {v: substitute(p, step) for v, p in self.substitution.items()}
        self.substitution[var] = image

    def fix(self, var: int, value: int) -> None:
        self.eliminate(var, Polynomial.const(value))

    def add_zero(self, mono: Monomial, rule: str) -> bool:
        if len(mono) >= 2:
            self.found_zeros.add(mono)
        image = substitute(Polynomial.term(1, mono), self.substitution)
        if not image:
            return False
        if image.is_monomial():
            mono = image.as_monomial()
            if len(mono) == 1:
                self.fix(mono[0], 0)
                return True
            if mono in self.zero_monos:
                return False
            self.zero_monos.add(mono)
            self.zero_sets.append(frozenset(mono))
            self.zero_rules[mono] = rule
            return True
        self._push(image)
        return True

    def run(self) -> None:
        changed = True
        while changed:
            changed = False
            current, self.equations = self.equations, []
            for diff in current:
                self._push(diff)
            for diff in list(self.equations):
                if self._judge(self._clean(diff)):
                    changed = True
                    break

    def _judge(self, diff: Polynomial) -> bool:
        """Apply every rule to one equation; True if a new fact was recorded."""
        if not diff:
            return False
        lo, hi = _bounds(diff)
        terms = [(m, c) for m, c in diff.items() if m]
        # single-term forcing: a monomial whose value 1 (or 0) breaks the bounds
        for m, c in terms:
            lo1 = lo - min(c, 0) + c
            hi1 = hi - max(c, 0) + c
            if lo1 > 0 or hi1 < 0:
                return self.add_zero(m, "bound-zero")
            lo0 = lo - min(c, 0)
            hi0 = hi - max(c, 0)
            if lo0 > 0 or hi0 < 0:
                for v in m:
                    self.fix(v, 1)
                return True
        # parity: the odd-coefficient part must match the constant mod 2
        odd = [m for m, c in terms if c % 2]
        if not odd:
            if diff.constant % 2:
                raise Infeasible(f"{diff} = 0 has no solution mod 2")
        elif len(odd) == 1:
            value = diff.constant % 2
            (m,) = odd
            if value:
                for v in m:
                    self.fix(v, 1)
                return True
            return self.add_zero(m, "parity")
        elif len(odd) == 2 and all(len(m) == 1 for m in odd):
            (a,), (b,) = sorted(odd)
            if diff.constant % 2:
                self.equalities.append((a, b, "complement"))
                self.add_zero((a, b), "complement")
                self.eliminate(b, 1 - Polynomial.var(a))
            else:
                self.equalities.append((a, b, "same"))
                self.eliminate(b, Polynomial.var(a))
            return True
        # pair forcing: two monomials that cannot both be 1
        found = False
        for i, (m1, c1) in enumerate(terms):
            for m2, c2 in terms[i + 1:]:
                union = tuple(sorted(set(m1) | set(m2)))
                if len(union) > self.max_zero_degree or union in self.zero_monos:
                    continue
                lo2 = lo - min(c1, 0) - min(c2, 0) + c1 + c2
                hi2 = hi - max(c1, 0) - max(c2, 0) + c1 + c2
                if lo2 > 0 or hi2 < 0:
                    found = self.add_zero(union, "pair-zero") or found
        return found

    def outcome(self) -> JudgmentOutcome:
        equations = []
        for diff in self.equations:
            eq = normalize(BinaryEquation(self._clean(diff), Polynomial()))
            if eq is not None:
                equations.append(eq)
        zeros: List[Monomial] = []
        for mono in sorted(self.zero_monos | self.found_zeros):
            image = substitute(Polynomial.term(1, mono), self.substitution)
            if image.is_monomial() and len(image.as_monomial()) >= 2:
                m = image.as_monomial()
                if m not in zeros:
                    zeros.append(m)
        zeros.sort()
        fixed = {v: p.constant for v, p in sorted(self.substitution.items()) if p.is_constant()}
        deductions = [zero_product(m, Provenance.SIMPLE_JUDGMENT, self.zero_rules.get(m, "pair-zero"))
                      for m in zeros]
        return JudgmentOutcome(fixed, list(self.equalities), sorted(self.found_zeros | self.zero_monos),
                               deductions, equations,
                               dict(sorted(self.substitution.items())))


def simple_judgments(equations: Sequence[BinaryEquation],
                     max_zero_degree: int = 4) -> JudgmentOutcome:
    """Fixed-point of single-equation bound and parity rules.

    Rules, each applied to one (substituted) equation ``lhs - rhs = 0``:

    * bounds: if the range of the difference excludes 0 the system is
      infeasible; a monomial whose being 1 (resp. 0) would exclude 0 is
      forced to 0 (resp. all its variables to 1);
    * parity: the odd-coefficient terms must sum to the constant mod 2, so
      a lone odd variable is fixed and two odd variables are equal or
      complementary;
    * pairs: two monomials that cannot both be 1 give a zero product
      (``x1 + x2 + x3 = 1`` yields ``x1x2 = x1x3 = x2x3 = 0``).

    Fixed and equal variables are substituted into every equation, and
    known zero products delete the terms containing them.
    """
    judge = _Judge(equations, max_zero_degree)
    judge.run()
    return judge.outcome()
