"""Brute-force audits: ground-state comparison, the unsafe naive
substitution, lambda checks and factor decoding."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .deduction import Deduction
from .encoder import FactorizationInstance
from .errors import NotASolution
from .pbf import (SPECTRUM_CAP, Assignment, Polynomial, bits_to_assignment, evaluate,
                  iter_spectrum, substitute)
from .reduc import ReductionStep

DEFAULT_CAP = 22


class Status(enum.Enum):
    EQUIVALENT = "Equivalent"
    GROUND_STATE_LOST = "GroundStateLost"
    SPURIOUS_GROUND_STATE = "SpuriousGroundState"
    NEGATIVE_ENERGY = "NegativeEnergy"
    NO_GROUND_STATE = "NoGroundState"
    TOO_LARGE = "TooLarge"


@dataclass(frozen=True)
class EquivalenceVerdict:
    status: Status
    assignment: Optional[Dict[int, int]] = None
    value: Optional[int] = None
    min_before: Optional[int] = None
    min_after: Optional[int] = None
    checked_states: int = 0
    zeros: Tuple[Dict[int, int], ...] = ()
    order: Tuple[int, ...] = ()

    @property
    def equivalent(self) -> bool:
        return self.status is Status.EQUIVALENT

    def describe(self) -> str:
        lines = [f"status {self.status.value}"]
        if self.assignment is not None:
            bits = " ".join(f"x{v}={b}" for v, b in sorted(self.assignment.items()))
            lines.append(f"assignment {bits}")
        if self.value is not None:
            lines.append(f"value {self.value}")
        if self.min_before is not None:
            lines.append(f"min_before {self.min_before}")
            lines.append(f"min_after {self.min_after}")
        lines.append(f"checked_states {self.checked_states}")
        if self.status is Status.EQUIVALENT:
            lines.append(f"ground_states {len(self.zeros)}")
        return "\n".join(lines)


def _first(mask: np.ndarray) -> Optional[int]:
    hits = np.flatnonzero(mask)
    return int(hits[0]) if hits.size else None


def compare_ground_states(before: Polynomial, after: Polynomial, cap: int = DEFAULT_CAP,
                          order: Optional[Sequence[int]] = None,
                          keep_zeros: int = 64) -> EquivalenceVerdict:
    """Exhaustively compare the zero sets of two non-negative Hamiltonians.

    Checks, in this order: a negative value of ``after`` (reported at its first
    minimum), an empty zero set, then the first state (lexicographic, first
    variable most significant) where exactly one of them vanishes.
    """
    if order is None:
        order = sorted(set(before.variables) | set(after.variables))
    order = tuple(order)
    if len(order) > min(cap, SPECTRUM_CAP):
        return EquivalenceVerdict(Status.TOO_LARGE, order=order)

    min_b = min_a = None
    neg_index = neg_value = None
    mismatch: Optional[Tuple[int, Status]] = None
    zeros: List[int] = []
    zero_count = 0
    for (start, vb), (_, va) in zip(iter_spectrum(before, order, cap),
                                    iter_spectrum(after, order, cap)):
        lo_b, lo_a = vb.min(), va.min()
        min_b = lo_b if min_b is None else min(min_b, lo_b)
        if min_a is None or lo_a < min_a:
            min_a = lo_a
            if lo_a < 0:
                neg_index, neg_value = start + _first(va == lo_a), int(lo_a)
        zb, za = vb == 0, va == 0
        if mismatch is None:
            lost, spurious = _first(zb & ~za), _first(za & ~zb)
            hits = [(i, s) for i, s in ((lost, Status.GROUND_STATE_LOST),
                                        (spurious, Status.SPURIOUS_GROUND_STATE)) if i is not None]
            if hits:
                i, s = min(hits, key=lambda h: h[0])
                mismatch = (start + i, s)
        both = np.flatnonzero(zb & za)
        zero_count += int(both.size)
        if len(zeros) < keep_zeros:
            zeros.extend(int(start + i) for i in both[:keep_zeros - len(zeros)])

    common = dict(min_before=int(min_b), min_after=int(min_a),
                  checked_states=1 << len(order), order=order)
    if neg_index is not None:
        return EquivalenceVerdict(Status.NEGATIVE_ENERGY, bits_to_assignment(neg_index, order),
                                  neg_value, **common)
    if mismatch is not None:
        index, status = mismatch
        return EquivalenceVerdict(status, bits_to_assignment(index, order), None, **common)
    if zero_count == 0:
        return EquivalenceVerdict(Status.NO_GROUND_STATE, None, None, **common)
    return EquivalenceVerdict(Status.EQUIVALENT, None, None,
                              zeros=tuple(bits_to_assignment(i, order) for i in zeros), **common)


def extend_assignment(assignment: Assignment, substitution: Mapping[int, Polynomial]) -> Dict[int, int]:
    """Fill in eliminated variables from the surviving ones."""
    out = dict(assignment)
    for v, image in substitution.items():
        out[v] = evaluate(image, assignment)
    return out


def compare_reduced(original: Polynomial, reduced: Polynomial,
                    substitution: Mapping[int, Polynomial],
                    cap: int = DEFAULT_CAP) -> EquivalenceVerdict:
    """Ground-state check for a reduction that also eliminated variables.

    Every zero of ``original`` must satisfy the substitution (else it was
    lost), and over the surviving variables ``original`` restricted by the
    substitution must share its zero set with ``reduced``.
    """
    full = sorted(set(original.variables) | set(substitution))
    if len(full) > min(cap, SPECTRUM_CAP):
        return EquivalenceVerdict(Status.TOO_LARGE, order=tuple(full))
    checked = 0
    for start, values in iter_spectrum(original, full, cap):
        checked += len(values)
        for i in np.flatnonzero(values == 0):
            a = bits_to_assignment(int(start + i), full)
            for v, image in substitution.items():
                if a[v] != evaluate(image, a):
                    return EquivalenceVerdict(Status.GROUND_STATE_LOST, a, None,
                                              checked_states=checked, order=tuple(full))
    restricted = substitute(original, substitution)
    survivors = sorted((set(full) - set(substitution)) | set(reduced.variables)
                       | set(restricted.variables))
    verdict = compare_ground_states(restricted, reduced, cap, survivors)
    if verdict.assignment is not None:
        return EquivalenceVerdict(verdict.status, extend_assignment(verdict.assignment, substitution),
                                  verdict.value, verdict.min_before, verdict.min_after,
                                  verdict.checked_states, verdict.zeros, verdict.order)
    return verdict


def ground_states(h: Polynomial, cap: int = DEFAULT_CAP,
                  order: Optional[Sequence[int]] = None) -> List[Dict[int, int]]:
    """All zeros of ``h`` in lexicographic order."""
    order = sorted(h.variables) if order is None else list(order)
    out = []
    for start, values in iter_spectrum(h, order, min(cap, SPECTRUM_CAP)):
        out.extend(bits_to_assignment(int(start + i), order) for i in np.flatnonzero(values == 0))
    return out


def naive_substitute(h: Polynomial, deductions) -> Polynomial:
    """Replace ``f`` by ``g`` in every term containing it, with no error term.

    This is unsafe in general; it exists to demonstrate the failure.
    """
    if isinstance(deductions, Deduction):
        deductions = [deductions]
    for d in deductions:
        mono = d.monomial
        if mono is None:
            raise ValueError(f"left side {d.f} is not a monomial")
        key = set(mono)
        kept = Polynomial({m: c for m, c in h.terms.items() if not key.issubset(m)})
        q = Polynomial({tuple(v for v in m if v not in key): c
                        for m, c in h.terms.items() if key.issubset(m)})
        h = kept + q * d.g
    return h


def lambda_holds(step: ReductionStep, cap: int = DEFAULT_CAP) -> bool:
    """Brute-force ``0 <= q*(g - f) + lam*C`` over the step's variables.

    Falls back to the conservative bound when there are too many variables.
    """
    d = step.deduction
    slack = step.q * (d.g - d.f) + step.lam * d.error
    order = sorted(slack.variables)
    if len(order) > min(cap, SPECTRUM_CAP):
        return step.lam >= sum(abs(c) for c in step.q.terms.values())
    return all(values.min() >= 0 for _, values in iter_spectrum(slack, order, cap))


def decode_factors(instance: FactorizationInstance, assignment: Assignment) -> Tuple[int, int]:
    """Read ``p`` and ``q`` back out of a solution of the instance's equations."""
    for eq in instance.equations:
        missing = [v for v in eq.variables if v not in assignment]
        if missing:
            raise NotASolution(f"assignment does not cover x{missing[0]}")
        if not eq.holds(assignment):
            raise NotASolution(f"equation {eq} fails")

    def number(layout) -> int:
        return sum((1 if bit is None else assignment[bit]) << i for i, bit in enumerate(layout))

    p, q = number(instance.p_layout), number(instance.q_layout)
    if p * q != instance.product:
        raise NotASolution(f"{p} x {q} != {instance.product}")
    return p, q


def factors_from_reduction(instance: FactorizationInstance, reduced: Polynomial,
                           substitution: Mapping[int, Polynomial],
                           cap: int = DEFAULT_CAP) -> List[Tuple[int, int]]:
    """Brute-force the reduced Hamiltonian and decode every zero.

    Raises TooManyVariables when the surviving variables exceed ``cap``.
    """
    survivors = sorted((set(instance.roles) - set(substitution)) | set(reduced.variables))
    out = []
    for zero in ground_states(reduced, cap, survivors):
        pair = decode_factors(instance, extend_assignment(zero, substitution))
        if pair not in out:
            out.append(pair)
    return out
