"""Line-oriented text formats.

Polynomial files hold one term per line::

    # comment
    2 x1 x2 x4 x5
    -3 x1 x4
    1

Inline polynomials (used by equation and deduction files) join the same
terms with ``+``: ``2 x1 x2 + -3 x4 + 1``; the zero polynomial is ``0``.
Equation files hold ``lhs := rhs`` per line, deduction files ``f == g``,
substitution files ``x5 := <inline polynomial>``.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

from .errors import ParseError
from .pbf import Polynomial

PathLike = Union[str, Path]

_VAR = re.compile(r"x(\d+)$")


def _parse_term(text: str, line: int | None) -> Tuple[Tuple[int, ...], int]:
    tokens = text.split()
    if not tokens:
        raise ParseError("empty term", line)
    coeff = 1
    if not _VAR.match(tokens[0]):
        try:
            coeff = int(tokens[0])
        except ValueError:
            raise ParseError(f"bad coefficient {tokens[0]!r}", line) from None
        tokens = tokens[1:]
    variables = []
    for tok in tokens:
        m = _VAR.match(tok)
        if not m:
            raise ParseError(f"bad variable {tok!r}", line)
        variables.append(int(m.group(1)))
    return tuple(variables), coeff


def _accumulate(terms: Iterable[Tuple[Tuple[int, ...], int]]) -> Polynomial:
    acc: Dict[Tuple[int, ...], int] = {}
    for mono, coeff in terms:
        key = tuple(sorted(set(mono)))
        acc[key] = acc.get(key, 0) + coeff
    return Polynomial(acc)


def parse_polynomial(text: str) -> Polynomial:
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            terms.append(_parse_term(body, lineno))
    return _accumulate(terms)


def format_term(mono: Tuple[int, ...], coeff: int) -> str:
    return " ".join([str(coeff)] + [f"x{v}" for v in mono])


def format_polynomial(p: Polynomial) -> str:
    return "".join(format_term(m, c) + "\n" for m, c in p.items())


def parse_inline(text: str, line: int | None = None) -> Polynomial:
    text = text.strip()
    if not text:
        raise ParseError("missing polynomial", line)
    return _accumulate(_parse_term(part, line) for part in text.split("+"))


def format_inline(p: Polynomial) -> str:
    if not p:
        return "0"
    return " + ".join(format_term(m, c) for m, c in p.items())


def _parse_pairs(text: str, sep: str) -> List[Tuple[Polynomial, Polynomial]]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.count(sep) != 1:
            raise ParseError(f"expected exactly one {sep!r}", lineno)
        left, right = body.split(sep)
        pairs.append((parse_inline(left, lineno), parse_inline(right, lineno)))
    return pairs


def parse_equations(text: str):
    from .encoder import BinaryEquation

    return [BinaryEquation(lhs, rhs) for lhs, rhs in _parse_pairs(text, ":=")]


def format_equations(equations) -> str:
    return "".join(f"{format_inline(e.lhs)} := {format_inline(e.rhs)}\n" for e in equations)


def parse_deductions(text: str):
    from .deduction import Provenance, make_deduction

    return [make_deduction(f, g, Provenance.USER_SUPPLIED)
            for f, g in _parse_pairs(text, "==")]


def format_deductions(deductions) -> str:
    return "".join(f"{format_inline(d.f)} == {format_inline(d.g)}\n" for d in deductions)


def parse_substitution(text: str) -> Dict[int, Polynomial]:
    mapping = {}
    for left, right in _parse_pairs(text, ":="):
        if not left.is_monomial() or len(left.as_monomial()) != 1:
            raise ParseError(f"substitution target must be a single variable, got {left}")
        mapping[left.as_monomial()[0]] = right
    return mapping


def format_substitution(mapping: Dict[int, Polynomial]) -> str:
    return "".join(f"x{v} := {format_inline(mapping[v])}\n" for v in sorted(mapping))


def parse_instance(text: str):
    """Read the key-value instance description written by ``format_instance``."""
    from .encoder import FactorizationInstance
    from .pbf import Role

    fields: Dict[str, str] = {}
    roles = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, _, rest = body.partition(" ")
        rest = rest.strip()
        if key in ("product", "p_bits", "q_bits"):
            fields[key] = rest
        elif key == "var":
            parts = rest.split()
            try:
                index = int(_VAR.match(parts[0]).group(1))
                kind = parts[1]
                nums = [int(t) for t in parts[2:]]
            except (AttributeError, IndexError, ValueError):
                raise ParseError(f"bad variable record {rest!r}", lineno) from None
            if kind in ("p", "q"):
                roles[index] = Role(kind, bit=nums[0])
            elif kind == "carry":
                roles[index] = Role("carry", column=nums[0], slot=nums[1])
            else:
                roles[index] = Role()
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    try:
        product = int(fields["product"])
        p_bits = int(fields["p_bits"])
        q_bits = int(fields["q_bits"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"instance file missing or bad field: {exc}") from None
    return FactorizationInstance.from_roles(product, p_bits, q_bits, roles)


def format_instance(instance) -> str:
    lines = [
        f"product {instance.product}",
        f"p_bits {instance.p_bits}",
        f"q_bits {instance.q_bits}",
    ]
    for v in sorted(instance.roles):
        role = instance.roles[v]
        if role.kind in ("p", "q"):
            lines.append(f"var x{v} {role.kind} {role.bit}")
        elif role.kind == "carry":
            lines.append(f"var x{v} carry {role.column} {role.slot}")
        else:
            lines.append(f"var x{v} generic")
    return "\n".join(lines) + "\n"


def read_text(path: PathLike) -> str:
    return Path(path).read_text(encoding="utf-8")


def write_text(path: PathLike, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
