"""The deduc-reduc transformation.

Given ``H = q*f + r`` and a deduction ``f = g`` that holds at every ground
state, ``H' = q*g + r + lam*(f - g)**2`` has exactly the zeros of ``H`` as
long as ``0 <= q*(g - f) + lam*(f - g)**2`` everywhere, which
``lam >= max|q|`` guarantees.  Negative terms containing a monomial known
to vanish can simply be deleted: that only raises energies off the ground
states.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .deduction import Deduction, make_deduction, simple_judgments
from .encoder import BinaryEquation
from .errors import InapplicableDeduction, NegativeLambda, PositiveCoefficientPresent
from .pbf import (DegreeProfile, Monomial, Polynomial, degree_profile, max_abs_bound,
                  substitute)
from .search import PatternSet, bfs_plausible, extract_patterns, resolve_order


class Mode(enum.Enum):
    ERROR_TERM = "error-term"
    STRAIGHT = "straight-substitution"
    ELIMINATION = "elimination"


@dataclass(frozen=True)
class DivisionResult:
    q: Polynomial
    r: Polynomial


@dataclass
class ReductionStep:
    deduction: Deduction
    lam: int
    mode: Mode
    q: Polynomial
    target: Optional[Monomial] = None
    before: Optional[DegreeProfile] = None
    after: Optional[DegreeProfile] = None


def divide_by_monomial(h: Polynomial, mono: Sequence[int]) -> DivisionResult:
    mono = tuple(sorted(set(mono)))
    if not mono:
        raise ValueError("cannot divide by the constant monomial")
    key = set(mono)
    q: Dict[Monomial, int] = {}
    r: Dict[Monomial, int] = {}
    for m, c in h.terms.items():
        if key.issubset(m):
            q[tuple(v for v in m if v not in key)] = c
        else:
            r[m] = c
    return DivisionResult(Polynomial(q), Polynomial(r))


def _is_zero_product(d: Deduction) -> bool:
    return d.monomial is not None and not d.g


def sufficient_lambda(q: Polynomial, d: Deduction) -> int:
    """Smallest weight this module can certify for quotient ``q``.

    For ``f`` a monomial and ``g = 0``, ``q*(g - f) + lam*C = f*(lam - q)``,
    so ``lam >= max q`` suffices and the sum of positive coefficients bounds
    ``max q``.  Otherwise fall back to the triangle bound on ``|q|``.
    """
    if _is_zero_product(d):
        return max(0, q.max_value_bound())
    return max_abs_bound(q)


def lambda_is_sufficient(q: Polynomial, d: Deduction, lam: int) -> bool:
    return lam >= 0 and (lam >= max_abs_bound(q) or lam >= sufficient_lambda(q, d))


def deduc_reduc(h: Polynomial, d: Deduction,
                lam: Optional[int] = None) -> Tuple[Polynomial, ReductionStep]:
    """One global substitution ``H -> q*g + r + lam*C`` for monomial ``f``."""
    mono = d.monomial
    if mono is None:
        raise InapplicableDeduction(f"left side {d.f} is not a monomial")
    div = divide_by_monomial(h, mono)
    if not div.q:
        raise InapplicableDeduction(f"no term of H contains {d.f}")
    if lam is None:
        lam = max_abs_bound(div.q)
    elif not lambda_is_sufficient(div.q, d, lam):
        raise NegativeLambda(f"lambda={lam} cannot be certified for q={div.q}")
    new = div.q * d.g + div.r + lam * d.error
    step = ReductionStep(d, lam, Mode.ERROR_TERM, div.q, mono,
                         degree_profile(h), degree_profile(new))
    return new, step


def straight_substitute_nonpositive(h: Polynomial, d: Deduction) -> Tuple[Polynomial, ReductionStep]:
    """Delete every term containing ``f`` when all of them are negative (``g = 0``)."""
    if not _is_zero_product(d):
        raise InapplicableDeduction("straight substitution needs a monomial f and g = 0")
    key = set(d.monomial)
    hit = {m: c for m, c in h.terms.items() if key.issubset(m)}
    positive = [m for m, c in hit.items() if c > 0]
    if positive:
        raise PositiveCoefficientPresent(
            f"{len(positive)} term(s) containing {d.f} have positive coefficients")
    new = Polynomial({m: c for m, c in h.terms.items() if m not in hit})
    q = Polynomial({tuple(v for v in m if v not in key): c for m, c in hit.items()})
    return new, ReductionStep(d, 0, Mode.STRAIGHT, q, d.monomial,
                              degree_profile(h), degree_profile(new))


class _Work:
    """Mutable term map with a variable index, for applying many deductions."""

    def __init__(self, h: Polynomial):
        self.terms: Dict[Monomial, int] = dict(h.terms)
        self.index: Dict[int, Set[Monomial]] = {}
        for m in self.terms:
            for v in m:
                self.index.setdefault(v, set()).add(m)

    def add(self, m: Monomial, c: int) -> None:
        if not c:
            return
        v = self.terms.get(m, 0) + c
        if v:
            if m not in self.terms:
                for x in m:
                    self.index.setdefault(x, set()).add(m)
            self.terms[m] = v
        else:
            self.remove(m)

    def remove(self, m: Monomial) -> int:
        c = self.terms.pop(m)
        for x in m:
            self.index[x].discard(m)
        return c

    def containing(self, mono: Monomial) -> List[Monomial]:
        sets = sorted((self.index.get(v, set()) for v in mono), key=len)
        if not sets or not sets[0]:
            return []
        found = set(sets[0])
        for s in sets[1:]:
            found &= s
        return sorted(found)

    def polynomial(self) -> Polynomial:
        return Polynomial(self.terms)


def _term_step(work: _Work, m: Monomial, d: Deduction) -> Optional[ReductionStep]:
    """Replace one term ``c*m`` (``m`` strictly containing ``f``) by ``c*rest*g + lam*C``."""
    mono = d.monomial
    c = work.terms[m]
    rest = tuple(v for v in m if v not in mono)
    q = Polynomial.term(c, rest)
    replacement = q * d.g
    if replacement.degree >= len(m) or d.error.degree >= len(m):
        return None
    lam = sufficient_lambda(q, d)
    work.remove(m)
    for mm, cc in replacement.terms.items():
        work.add(mm, cc)
    if lam:
        for mm, cc in d.error.terms.items():
            work.add(mm, lam * cc)
    mode = Mode.STRAIGHT if lam == 0 and not d.g else Mode.ERROR_TERM
    return ReductionStep(d, lam, mode, q, m)


def split_termwise(h: Polynomial, d: Deduction) -> Tuple[Polynomial, List[ReductionStep]]:
    """Apply ``d`` separately to every term strictly containing ``f``.

    Each term gets its own weight, which is usually far smaller in total
    than a single bound on the whole quotient.
    """
    mono = d.monomial
    if mono is None:
        raise InapplicableDeduction(f"left side {d.f} is not a monomial")
    work = _Work(h)
    steps = []
    for m in work.containing(mono):
        if len(m) > len(mono):
            step = _term_step(work, m, d)
            if step is not None:
                steps.append(step)
    return work.polynomial(), steps


def apply_deductions(h: Polynomial, deductions: Sequence[Deduction],
                     global_lambda: bool = False) -> Tuple[Polynomial, List[ReductionStep], int]:
    """Apply monomial deductions, highest-degree targets first.

    Returns the new polynomial, the steps taken and how many deductions
    changed anything.
    """
    usable = sorted({d.monomial: d for d in deductions if d.monomial is not None}.items())
    used: Set[Monomial] = set()
    steps: List[ReductionStep] = []

    if global_lambda:
        for mono, d in usable:
            if not any(len(m) > len(mono) for m in _Work(h).containing(mono)):
                continue
            if d.error.degree >= h.degree:
                continue
            h, step = deduc_reduc(h, d)
            steps.append(step)
            used.add(mono)
        work = _Work(h)
    else:
        work = _Work(h)
        top = max((len(m) for m in work.terms), default=0)
        for degree in range(top, 1, -1):
            for mono, d in usable:
                if len(mono) >= degree:
                    continue
                for m in work.containing(mono):
                    if len(m) != degree or m not in work.terms:
                        continue
                    step = _term_step(work, m, d)
                    if step is not None:
                        steps.append(step)
                        used.add(mono)

    # negative terms equal to a vanishing monomial can go outright
    for mono, d in usable:
        if d.g or mono not in work.terms or work.terms[mono] >= 0:
            continue
        q = Polynomial.const(work.remove(mono))
        steps.append(ReductionStep(d, 0, Mode.STRAIGHT, q, mono))
        used.add(mono)
    return work.polynomial(), steps, len(used)


# -- pipeline -------------------------------------------------------------


@dataclass
class ReductionConfig:
    states: int = 1000
    pattern_degree: int = 2
    rounds: int = 1
    global_lambda: bool = False
    judgments: bool = True
    user_deductions: Sequence[Deduction] = ()
    # each entry is an explicit variable order or one of "ascending",
    # "descending", "constrained"; one search per entry per round
    orders: Sequence = ("ascending", "descending", "constrained")


@dataclass
class Stage:
    name: str
    hamiltonian: Polynomial
    deductions: Optional[int]
    seconds: float = 0.0


@dataclass
class ReductionResult:
    hamiltonian: Polynomial
    stages: List[Stage]
    substitution: Dict[int, Polynomial]
    steps: List[ReductionStep] = field(default_factory=list)
    deductions: List[Deduction] = field(default_factory=list)
    equations: List[BinaryEquation] = field(default_factory=list)


def _compose(substitution: Dict[int, Polynomial], extra: Dict[int, Polynomial]) -> Dict[int, Polynomial]:
    if not extra:
        return dict(substitution)
    out = {v: substitute(p, extra) for v, p in substitution.items()}
    out.update(extra)
    return dict(sorted(out.items()))


def _eliminations(constants: Dict[int, int],
                  equalities: Sequence[Tuple[int, int, str]]) -> Dict[int, Polynomial]:
    """Resolve constant and pairwise facts into one substitution map."""
    mapping: Dict[int, Polynomial] = {v: Polynomial.const(c) for v, c in constants.items()}
    for a, b, parity in equalities:
        if a in mapping or b in mapping:
            continue
        image = Polynomial.var(a) if parity == "same" else 1 - Polynomial.var(a)
        mapping = {v: substitute(p, {b: image}) for v, p in mapping.items()}
        mapping[b] = image
    return mapping


def _restate(d: Deduction, substitution: Dict[int, Polynomial]) -> Optional[Deduction]:
    """Rewrite a deduction in the surviving variables, if it stays useful."""
    f = substitute(d.f, substitution)
    g = substitute(d.g, substitution)
    if not f.is_monomial() or g.degree >= f.degree:
        return None
    if f == d.f and g == d.g:
        return d
    return make_deduction(f, g, d.provenance, d.rule)


def _user_eliminations(deductions: Sequence[Deduction]):
    """Split user deductions into single-variable eliminations and the rest."""
    mapping: Dict[int, Polynomial] = {}
    rest = []
    for d in deductions:
        if d.monomial is not None and len(d.monomial) == 1 and d.g.is_constant() \
                and d.g.constant in (0, 1):
            mapping[d.monomial[0]] = d.g
        else:
            rest.append(d)
    return mapping, rest


def reduce_pipeline(h0: Polynomial, equations: Sequence[BinaryEquation],
                    config: Optional[ReductionConfig] = None) -> ReductionResult:
    """H0 -> simple judgments (H1) -> search patterns + deduc-reduc (H_n)."""
    config = config or ReductionConfig()
    stages = [Stage("Original", h0, None)]
    substitution: Dict[int, Polynomial] = {}
    pending: List[Deduction] = []
    eqs = list(equations)
    h = h0

    if config.judgments:
        t0 = time.perf_counter()
        outcome = simple_judgments(eqs)
        substitution = dict(outcome.substitution)
        eqs = outcome.simplified_equations
        pending += outcome.deductions
        h = substitute(h0, substitution)
        stages.append(Stage("SimpleJudgments", h, None, time.perf_counter() - t0))

    t0 = time.perf_counter()
    eliminated = 0
    user_map, user_rest = _user_eliminations(config.user_deductions)
    if user_map:
        extra = {v: substitute(p, substitution) for v, p in user_map.items() if v not in substitution}
        substitution = _compose(substitution, extra)
        h = substitute(h, extra)
        eqs = [BinaryEquation(substitute(e.lhs, extra), substitute(e.rhs, extra)) for e in eqs]
        eliminated += len(extra)
    pending += user_rest

    if config.states > 0:
        for _ in range(max(1, config.rounds)):
            if not eqs:
                break
            patterns = PatternSet()
            for choice in config.orders:
                frontier = bfs_plausible(eqs, config.states, resolve_order(eqs, choice))
                patterns = patterns.merge(extract_patterns(frontier, config.pattern_degree))
            extra = _eliminations(patterns.constants, patterns.pair_equalities)
            pending += [d for d in patterns.deductions() if len(d.f.variables) > 1]
            if config.judgments:
                # feed the new facts back through the judgments
                facts = [BinaryEquation(Polynomial.var(v), p) for v, p in sorted(extra.items())]
                outcome = simple_judgments(list(eqs) + facts)
                extra = outcome.substitution
                pending += outcome.deductions
                eqs = outcome.simplified_equations
            else:
                eqs = [BinaryEquation(substitute(e.lhs, extra), substitute(e.rhs, extra))
                       for e in eqs]
            eliminated += len(extra)
            substitution = _compose(substitution, extra)
            h = substitute(h, extra)
            if not extra and not patterns.zero_products:
                break

    restated: List[Deduction] = []
    for d in pending:
        r = _restate(d, substitution)
        if r is not None:
            restated.append(r)
    h, steps, used = apply_deductions(h, restated, config.global_lambda)
    name = f"Reduction({config.states})" if config.states > 0 else "Reduction"
    stages.append(Stage(name, h, eliminated + used, time.perf_counter() - t0))
    return ReductionResult(h, stages, substitution, steps, restated, list(eqs))
