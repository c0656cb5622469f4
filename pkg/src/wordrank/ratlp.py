"""Exact rational linear programming.

Minimise ``c·x`` subject to ``A x = b`` and ``x >= 0`` with a dense
two-phase simplex over :class:`fractions.Fraction`, using Bland's rule for
both the entering and the leaving variable so that it always terminates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .errors import ConstructionError, InternalInvariantError

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ConstructionError(f"not an exact rational: {x!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class LinearProgram:
    """``min objective·x`` over ``{x >= 0 : A x = b}``."""

    num_vars: int
    constraints: List[Tuple[Tuple[Fraction, ...], Fraction]] = field(default_factory=list)
    objective: Tuple[Fraction, ...] = ()
    names: Optional[List[str]] = None
    row_names: Optional[List[str]] = None

    def __post_init__(self):
        if self.num_vars < 0:
            raise ConstructionError("negative number of variables")
        if not self.objective:
            self.objective = tuple(Fraction(0) for _ in range(self.num_vars))
        self.objective = tuple(as_fraction(c) for c in self.objective)
        if len(self.objective) != self.num_vars:
            raise ConstructionError(f"objective has {len(self.objective)} entries, expected {self.num_vars}")
        rows = []
        for coeffs, rhs in self.constraints:
            coeffs = tuple(as_fraction(c) for c in coeffs)
            if len(coeffs) != self.num_vars:
                raise ConstructionError(f"constraint has {len(coeffs)} coefficients, expected {self.num_vars}")
            rows.append((coeffs, as_fraction(rhs)))
        self.constraints = rows
        if self.names is not None and len(self.names) != self.num_vars:
            raise ConstructionError("one name per variable is required")

    def add_constraint(self, coeffs: Sequence[Number], rhs: Number, name: Optional[str] = None) -> None:
        coeffs = tuple(as_fraction(c) for c in coeffs)
        if len(coeffs) != self.num_vars:
            raise ConstructionError(f"constraint has {len(coeffs)} coefficients, expected {self.num_vars}")
        self.constraints.append((coeffs, as_fraction(rhs)))
        if name is not None:
            if self.row_names is None:
                self.row_names = [f"r{i}" for i in range(len(self.constraints) - 1)]
            self.row_names.append(name)
        elif self.row_names is not None:
            self.row_names.append(f"r{len(self.constraints) - 1}")

    @property
    def num_rows(self) -> int:
        return len(self.constraints)

    def var_name(self, j: int) -> str:
        return self.names[j] if self.names else f"x{j}"

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_vars or any(v < 0 for v in x):
            return False
        return all(sum(c * v for c, v in zip(coeffs, x)) == rhs for coeffs, rhs in self.constraints)

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    solution: Tuple[Fraction, ...]
    basis: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Infeasible:
    pass


def _pivot(T: List[List[Fraction]], basis: List[int], r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p != 1:
        inv = 1 / p
        T[r] = row = [x * inv for x in row]
    nz = [j for j, x in enumerate(row) if x]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[c]
        if f:
            for j in nz:
                other[j] -= f * row[j]
    basis[r] = c


def _simplex(T: List[List[Fraction]], basis: List[int], cost: List[Fraction], allowed: int) -> bool:
    """Run Bland's-rule simplex on tableau ``T`` (last column = rhs).

    ``cost`` is the objective over columns; only columns ``< allowed`` may
    enter. Returns False when the objective is unbounded below.
    """
    rhs = len(T[0]) - 1 if T else 0
    while True:
        # reduced costs: c_j - c_B B^{-1} A_j, computed directly from the tableau
        entering = -1
        for j in range(allowed):
            if j in basis:
                continue
            red = cost[j]
            for i, row in enumerate(T):
                if row[j]:
                    red -= cost[basis[i]] * row[j]
            if red < 0:
                entering = j
                break
        if entering < 0:
            return True
        leave = -1
        best = None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                ratio = row[rhs] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return False
        _pivot(T, basis, leave, entering)


def solve(lp: LinearProgram) -> Union[Optimal, Infeasible]:
    """Exact two-phase simplex; returns a basic optimal solution or Infeasible."""
    n = lp.num_vars
    rows = []
    for coeffs, rhs in lp.constraints:
        if rhs < 0:
            coeffs = tuple(-c for c in coeffs)
            rhs = -rhs
        rows.append((list(coeffs), rhs))
    r = len(rows)
    if r == 0:
        if any(c < 0 for c in lp.objective):
            raise InternalInvariantError("LP unbounded: negative objective coefficient without constraints")
        return Optimal(Fraction(0), tuple(Fraction(0) for _ in range(n)), ())
    # columns: 0..n-1 structural, n..n+r-1 artificial, n+r rhs
    T = []
    for i, (coeffs, rhs) in enumerate(rows):
        art = [Fraction(0)] * r
        art[i] = Fraction(1)
        T.append(coeffs + art + [rhs])
    basis = [n + i for i in range(r)]
    phase1 = [Fraction(0)] * n + [Fraction(1)] * r
    _simplex(T, basis, phase1, n + r)
    if sum((T[i][-1] for i in range(r) if basis[i] >= n), Fraction(0)) != 0:
        return Infeasible()
    # drive artificial variables out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0 and j not in basis), -1)
            if col < 0:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    T = [row[:n] + [row[-1]] for row in T]
    cost = list(lp.objective)
    if T and not _simplex(T, basis, cost, n):
        raise InternalInvariantError("LP unbounded although all objective coefficients are nonnegative")
    if not T and any(c < 0 for c in cost):
        raise InternalInvariantError("LP unbounded although all objective coefficients are nonnegative")
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    x = tuple(x)
    if not lp.is_feasible_point(x):
        raise InternalInvariantError("simplex returned a point violating the constraints")
    return Optimal(lp.value_at(x), x, tuple(basis))


def to_text(lp: LinearProgram) -> str:
    """Plain-text equality form: objective line, then one constraint per line."""
    def term(c: Fraction, j: int) -> str:
        return f"{format_rational(c)}*{lp.var_name(j)}"

    lines = [f"# variables: {lp.num_vars}", f"# rows: {lp.num_rows}"]
    obj = " + ".join(term(c, j) for j, c in enumerate(lp.objective) if c) or "0"
    lines.append(f"minimize {obj}")
    for i, (coeffs, rhs) in enumerate(lp.constraints):
        lhs = " + ".join(term(c, j) for j, c in enumerate(coeffs) if c) or "0"
        name = lp.row_names[i] if lp.row_names else f"r{i}"
        lines.append(f"{name}: {lhs} = {format_rational(rhs)}")
    lines.append("bounds: all variables >= 0")
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> LinearProgram:
    """Inverse of :func:`to_text` (used for round-trip tests and external files)."""
    names: List[str] = []
    index = {}
    objective_terms = []
    rows = []
    row_names = []

    def parse_side(expr: str):
        out = []
        expr = expr.strip()
        if expr == "0":
            return out
        for t in expr.split(" + "):
            coef, var = t.strip().split("*")
            if var not in index:
                index[var] = len(names)
                names.append(var)
            out.append((index[var], Fraction(coef)))
        return out

    declared = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("bounds"):
            continue
        if line.startswith("#"):
            if line.startswith("# variables:"):
                declared = int(line.split(":")[1])
            continue
        if line.startswith("minimize "):
            objective_terms = parse_side(line[len("minimize "):])
            continue
        # row names may themselves contain colons (balance keys), so split on ": "
        name, rest = line.split(": ", 1)
        lhs, rhs = rest.rsplit("=", 1)
        rows.append((parse_side(lhs), Fraction(rhs.strip())))
        row_names.append(name.strip())
    n = declared if declared is not None else len(names)
    while len(names) < n:
        names.append(f"x{len(names)}")
    obj = [Fraction(0)] * n
    for j, c in objective_terms:
        obj[j] = c
    cons = []
    for terms, rhs in rows:
        coeffs = [Fraction(0)] * n
        for j, c in terms:
            coeffs[j] = c
        cons.append((tuple(coeffs), rhs))
    return LinearProgram(n, cons, tuple(obj), names, row_names)
