"""Binary long-multiplication encoding of a factorization problem.

Column ``col`` of ``p * q = N`` becomes one equation::

    sum_{i+j=col} p_i q_j + (carries into col) = N_col + sum_k 2**k z_{col,k}

Both sides keep non-negative coefficients.  A column whose left side can
reach ``S`` gets ``floor(log2 S)`` outgoing carries, the carry of weight
``2**k`` landing in column ``col + k``.  The lowest and highest bit of each
factor are fixed to 1 and substituted away before anything is emitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import InfeasibleWidths, InvalidProduct, NotASolution
from .pbf import Assignment, Polynomial, Role, evaluate


@dataclass(frozen=True)
class BinaryEquation:
    lhs: Polynomial
    rhs: Polynomial

    def difference(self) -> Polynomial:
        return self.lhs - self.rhs

    def holds(self, assignment: Assignment) -> bool:
        return evaluate(self.lhs, assignment) == evaluate(self.rhs, assignment)

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.lhs.variables) | set(self.rhs.variables)))

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass
class FactorizationInstance:
    product: int
    p_bits: int
    q_bits: int
    equations: List[BinaryEquation]
    roles: Dict[int, Role]
    # per bit position, LSB first: a variable index, or None for a bit fixed to 1
    p_layout: List[Optional[int]] = field(default_factory=list)
    q_layout: List[Optional[int]] = field(default_factory=list)

    @property
    def variable_order(self) -> List[int]:
        """Allocation order: columns low to high, factor bits before carries."""
        return sorted(self.roles)

    @property
    def variable_count(self) -> int:
        return len(self.roles)

    def factor_variables(self) -> List[int]:
        return [v for v in sorted(self.roles) if self.roles[v].kind in ("p", "q")]

    def carry_variables(self) -> List[int]:
        return [v for v in sorted(self.roles) if self.roles[v].kind == "carry"]

    def hamiltonian(self) -> Polynomial:
        return hamiltonian_from_equations(self.equations)

    def assignment_for(self, p: int, q: int) -> Dict[int, int]:
        """Assignment encoding factors ``p`` and ``q`` with the carries they induce."""
        if p.bit_length() != self.p_bits or q.bit_length() != self.q_bits:
            raise ValueError(f"{p} x {q} does not fit {self.p_bits}+{self.q_bits} bits")
        values: Dict[int, int] = {}
        for v, role in self.roles.items():
            if role.kind == "p":
                values[v] = (p >> role.bit) & 1
            elif role.kind == "q":
                values[v] = (q >> role.bit) & 1
        for col, (lhs, rhs) in enumerate(_columns(self)):
            outgoing = sorted((v for v, r in self.roles.items()
                               if r.kind == "carry" and r.column == col),
                              key=lambda v: self.roles[v].slot)
            excess = evaluate(lhs, values) - ((self.product >> col) & 1)
            if excess < 0 or excess % 2:
                raise NotASolution(f"column {col} cannot balance for {p} x {q}")
            excess //= 2
            for v in outgoing:
                values[v] = excess & 1
                excess >>= 1
            if excess:
                raise NotASolution(f"column {col} overflows its carries for {p} x {q}")
        return values

    @classmethod
    def from_roles(cls, product: int, p_bits: int, q_bits: int,
                   roles: Mapping[int, Role]) -> "FactorizationInstance":
        instance = encode(product, p_bits, q_bits)
        if roles and dict(roles) != instance.roles:
            raise ValueError("variable roles do not match the canonical encoding")
        return instance


def _columns(instance: FactorizationInstance) -> List[Tuple[Polynomial, Polynomial]]:
    """Left sides of every column (partial products plus incoming carries)."""
    lhs_by_col: Dict[int, Polynomial] = {}
    p = [_bit_poly(b) for b in instance.p_layout]
    q = [_bit_poly(b) for b in instance.q_layout]
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            lhs_by_col[i + j] = lhs_by_col.get(i + j, Polynomial()) + pi * qj
    for v, role in instance.roles.items():
        if role.kind == "carry":
            target = role.column + role.slot
            lhs_by_col[target] = lhs_by_col.get(target, Polynomial()) + Polynomial.var(v)
    top = max(lhs_by_col, default=0)
    return [(lhs_by_col.get(c, Polynomial()), Polynomial()) for c in range(top + 1)]


def _bit_poly(bit: Optional[int]) -> Polynomial:
    return Polynomial.const(1) if bit is None else Polynomial.var(bit)


def _check(product: int, p_bits: int, q_bits: int) -> None:
    if not isinstance(product, int) or product < 3 or product % 2 == 0:
        raise InvalidProduct(f"product must be an odd integer >= 3, got {product}")
    if p_bits < 2 or q_bits < 2:
        raise InfeasibleWidths("factor bit-lengths must be at least 2")
    m = product.bit_length()
    if p_bits + q_bits < m:
        raise InfeasibleWidths(f"{p_bits}+{q_bits} bits cannot reach a {m}-bit product")
    if p_bits + q_bits - 1 > m:
        raise InfeasibleWidths(f"{p_bits}+{q_bits} bits always exceed a {m}-bit product")


def balanced_splits(product: int) -> List[Tuple[int, int]]:
    """Candidate (p_bits, q_bits), most balanced first, total width m then m+1."""
    m = product.bit_length()
    out = []
    for total in (m, m + 1):
        a = total // 2
        split = (max(a, 2), max(total - a, 2))
        if split not in out:
            out.append(split)
    return out


def encode(product: int, p_bits: int, q_bits: int) -> FactorizationInstance:
    _check(product, p_bits, q_bits)
    roles: Dict[int, Role] = {}
    p_layout: List[Optional[int]] = [None] * p_bits
    q_layout: List[Optional[int]] = [None] * q_bits
    next_index = 1

    def new_var(role: Role) -> int:
        nonlocal next_index
        roles[next_index] = role
        next_index += 1
        return next_index - 1

    def partial_products(col: int) -> Polynomial:
        total = Polynomial()
        for i in range(max(0, col - q_bits + 1), min(col, p_bits - 1) + 1):
            total = total + _bit_poly(p_layout[i]) * _bit_poly(q_layout[col - i])
        return total

    lhs: Dict[int, Polynomial] = {}
    rhs: Dict[int, Polynomial] = {}
    last_partial = p_bits + q_bits - 2
    col = 0
    while col <= last_partial or col < product.bit_length() or col in lhs:
        if 0 < col < p_bits - 1:
            p_layout[col] = new_var(Role("p", bit=col))
        if 0 < col < q_bits - 1:
            q_layout[col] = new_var(Role("q", bit=col))
        left = lhs.get(col, Polynomial()) + partial_products(col)
        right = rhs.get(col, Polynomial()) + ((product >> col) & 1)
        top = left.max_value_bound()
        for slot in range(1, max(top, 1).bit_length()):
            z = new_var(Role("carry", column=col, slot=slot))
            right = right + Polynomial.var(z, 2**slot)
            lhs[col + slot] = lhs.get(col + slot, Polynomial()) + Polynomial.var(z)
        lhs[col], rhs[col] = left, right
        col += 1

    equations = [BinaryEquation(lhs[c], rhs[c]) for c in sorted(lhs) if lhs[c] != rhs[c]]
    return FactorizationInstance(product, p_bits, q_bits, equations, roles, p_layout, q_layout)


def hamiltonian_from_equations(equations: Sequence[BinaryEquation]) -> Polynomial:
    """Sum of squared differences; zero exactly where every equation holds."""
    total = Polynomial()
    for eq in equations:
        total = total + eq.difference().square()
    return total
