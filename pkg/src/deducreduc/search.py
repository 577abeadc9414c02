"""Bounded breadth-first enumeration of plausible partial solutions.

Variables are assigned one per round in a fixed order.  A branch is pruned
when some equation, with its assigned variables substituted, can no longer
reach zero: every unassigned term contributes the interval between 0 and its
coefficient.  The loop stops after the first round whose frontier holds more
than ``budget`` states, so the returned frontier can be up to twice the
budget.  Since only contradictory branches are pruned, every true solution
extends some frontier state, and any pattern shared by all frontier states
holds at every solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .deduction import Deduction, Provenance, make_deduction, zero_product
from .encoder import BinaryEquation
from .errors import NoPlausibleStates
from .pbf import Monomial, Polynomial


@dataclass
class SearchFrontier:
    variables: List[int]
    # each state lists the bits of ``variables`` in order
    states: List[Tuple[int, ...]]
    budget: int
    variable_order: List[int]
    rounds: int = 0

    def __len__(self) -> int:
        return len(self.states)

    def assignments(self) -> List[Dict[int, int]]:
        return [dict(zip(self.variables, s)) for s in self.states]

    @property
    def complete(self) -> bool:
        return len(self.variables) == len(self.variable_order)


@dataclass
class PatternSet:
    constants: Dict[int, int] = field(default_factory=dict)
    # (i, j, "same" | "complement") with i < j
    pair_equalities: List[Tuple[int, int, str]] = field(default_factory=list)
    zero_products: List[Monomial] = field(default_factory=list)

    def deductions(self) -> List[Deduction]:
        """Constants and zero products as deductions (equalities are eliminations)."""
        out = [make_deduction(Polynomial.var(v), Polynomial.const(c),
                              Provenance.SEARCH_PATTERN, "constant")
               for v, c in sorted(self.constants.items())]
        out += [zero_product(m, Provenance.SEARCH_PATTERN, "zero-product")
                for m in self.zero_products]
        return out

    def __len__(self) -> int:
        return len(self.constants) + len(self.pair_equalities) + len(self.zero_products)

    def merge(self, other: "PatternSet") -> "PatternSet":
        """Union of two sound pattern sets (e.g. from searches in different orders)."""
        constants = dict(self.constants)
        constants.update(other.constants)
        pairs = list(dict.fromkeys(self.pair_equalities + other.pair_equalities))
        zeros = sorted(set(self.zero_products) | set(other.zero_products))
        return PatternSet(dict(sorted(constants.items())), pairs, zeros)


class _Checker:
    """Incremental interval bounds for every equation under a growing prefix."""

    def __init__(self, equations: Sequence[BinaryEquation], order: Sequence[int]):
        self.position = {v: i for i, v in enumerate(order)}
        self.terms: List[List[Tuple[Tuple[int, ...], int]]] = []
        self.initial: List[Tuple[int, int]] = []
        # variable -> [(equation, positions of the term's other variables, coefficient)]
        self.occurrences: Dict[int, List[Tuple[int, Tuple[int, ...], int]]] = {}
        for e, eq in enumerate(equations):
            diff = eq.difference()
            lo = hi = diff.constant
            for mono, c in diff.items():
                if not mono:
                    continue
                lo += min(c, 0)
                hi += max(c, 0)
                for v in mono:
                    others = tuple(self.position[u] for u in mono if u != v)
                    self.occurrences.setdefault(v, []).append((e, others, c))
            self.initial.append((lo, hi))

    def extend(self, bits: Tuple[int, ...], bounds: List[Tuple[int, int]], var: int,
               value: int) -> Optional[List[Tuple[int, int]]]:
        """Bounds after assigning ``var``; None if some equation is violated.

        ``bits`` covers exactly the variables before ``var`` in the order.
        """
        k = len(bits)
        touched: Dict[int, Tuple[int, int]] = {}
        for e, others, c in self.occurrences.get(var, ()):
            # a term already killed by an assigned 0 is unaffected
            if any(p < k and not bits[p] for p in others):
                continue
            lo, hi = touched.get(e, bounds[e])
            if value == 0:
                lo -= min(c, 0)
                hi -= max(c, 0)
            elif all(p < k for p in others):
                lo += c - min(c, 0)
                hi += c - max(c, 0)
            else:
                continue
            touched[e] = (lo, hi)
        if not touched:
            return bounds
        for lo, hi in touched.values():
            if lo > 0 or hi < 0:
                return None
        out = list(bounds)
        for e, b in touched.items():
            out[e] = b
        return out


def default_order(equations: Sequence[BinaryEquation]) -> List[int]:
    return sorted({v for eq in equations for v in eq.variables})


def constrained_order(equations: Sequence[BinaryEquation]) -> List[int]:
    """Greedy order: always take a variable from the equation with fewest left."""
    remaining = [set(eq.variables) for eq in equations]
    order: List[int] = []
    while True:
        live = [r for r in remaining if r]
        if not live:
            return order
        smallest = min(live, key=len)
        v = min(smallest)
        order.append(v)
        for r in remaining:
            r.discard(v)


def resolve_order(equations: Sequence[BinaryEquation], choice) -> List[int]:
    """Turn an order name (or an explicit list) into a variable order.

    Encoders number variables column by column, so ``"ascending"`` walks the
    multiplication from the least significant column up and ``"descending"``
    from the top column down.
    """
    if choice is None or choice == "ascending":
        return default_order(equations)
    if choice == "descending":
        return default_order(equations)[::-1]
    if choice == "constrained":
        return constrained_order(equations)
    if isinstance(choice, str):
        raise ValueError(f"unknown variable order {choice!r}")
    return list(choice)


def bfs_plausible(equations: Sequence[BinaryEquation], budget: int,
                  variable_order: Optional[Sequence[int]] = None) -> SearchFrontier:
    if budget < 1:
        raise ValueError("state budget must be at least 1")
    present = default_order(equations)
    if variable_order is None:
        order = present
    else:
        seen = set(present)
        order = [v for v in variable_order if v in seen]
        order += [v for v in present if v not in set(order)]
    checker = _Checker(equations, order)
    for lo, hi in checker.initial:
        if lo > 0 or hi < 0:
            raise NoPlausibleStates("the empty assignment already violates an equation")

    frontier: List[Tuple[Tuple[int, ...], List[Tuple[int, int]]]] = [((), list(checker.initial))]
    rounds = 0
    for var in order:
        nxt = []
        for bits, bounds in frontier:
            for value in (0, 1):
                b = checker.extend(bits, bounds, var, value)
                if b is not None:
                    nxt.append((bits + (value,), b))
        rounds += 1
        if not nxt:
            raise NoPlausibleStates(f"every branch is contradictory after assigning x{var}")
        frontier = nxt
        if len(frontier) > budget:
            break
    assigned = list(order[:rounds])
    return SearchFrontier(assigned, [bits for bits, _ in frontier], budget, list(order), rounds)


def extract_patterns(frontier: SearchFrontier, degree_cap: int = 2) -> PatternSet:
    """Facts shared by every frontier state, over the assigned variables."""
    if not frontier.states:
        raise ValueError("cannot extract patterns from an empty frontier")
    n_states = len(frontier.states)
    full = (1 << n_states) - 1
    # bit s of masks[i] is the value of variable i in state s
    masks = []
    for i in range(len(frontier.variables)):
        m = 0
        for s, bits in enumerate(frontier.states):
            if bits[i]:
                m |= 1 << s
        masks.append(m)

    patterns = PatternSet()
    columns = list(zip(frontier.variables, masks))
    for v, m in columns:
        if m == 0:
            patterns.constants[v] = 0
        elif m == full:
            patterns.constants[v] = 1
    free = [(v, m) for v, m in columns if v not in patterns.constants]

    for (a, ma), (b, mb) in combinations(free, 2):
        if ma == mb:
            patterns.pair_equalities.append((a, b, "same"))
        elif ma ^ mb == full:
            patterns.pair_equalities.append((a, b, "complement"))

    zero_sets: List[frozenset] = []
    for degree in range(2, degree_cap + 1):
        for combo in combinations(columns, degree):
            acc = full
            for _, m in combo:
                acc &= m
                if not acc:
                    break
            if acc:
                continue
            mono = tuple(v for v, _ in combo)
            if degree > 2 and any(z <= set(mono) for z in zero_sets):
                continue
            zero_sets.append(frozenset(mono))
            patterns.zero_products.append(mono)
    return patterns
