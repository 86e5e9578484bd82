"""Exact rational linear programming.

A two-phase primal simplex on a dense tableau of :class:`fractions.Fraction`
entries. Bland's smallest-index rule is used for both the entering and the
leaving variable, which rules out cycling.

Variables default to the bounds ``0 <= x`` (no upper bound); pass ``bounds``
to change that, with ``None`` meaning unbounded in that direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Optional, Sequence, Union

LE, EQ, GE = "<=", "==", ">="
RELATIONS = (LE, EQ, GE)


class MalformedProgram(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction


@dataclass
class LinearProgram:
    variables: list[str]
    constraints: list[Constraint] = field(default_factory=list)
    objective: Optional[tuple[str, tuple[Fraction, ...]]] = None
    bounds: dict[int, tuple[Optional[Fraction], Optional[Fraction]]] = field(default_factory=dict)

    def add(self, coeffs: Union[Sequence, Mapping[int, object]], relation: str, rhs) -> None:
        """Append a constraint; ``coeffs`` is a dense row or a sparse ``{var_index: coeff}``."""
        if isinstance(coeffs, Mapping):
            row = [Fraction(0)] * len(self.variables)
            for j, a in coeffs.items():
                row[j] += Fraction(a)
        else:
            row = [Fraction(a) for a in coeffs]
        self.constraints.append(Constraint(tuple(row), relation, Fraction(rhs)))

    def maximize(self, coeffs: Sequence) -> None:
        self.objective = ("max", tuple(Fraction(c) for c in coeffs))

    def minimize(self, coeffs: Sequence) -> None:
        self.objective = ("min", tuple(Fraction(c) for c in coeffs))

    def set_bounds(self, j: int, lower=0, upper=None) -> None:
        self.bounds[j] = (
            None if lower is None else Fraction(lower),
            None if upper is None else Fraction(upper),
        )

    def bounds_of(self, j: int) -> tuple[Optional[Fraction], Optional[Fraction]]:
        return self.bounds.get(j, (Fraction(0), None))

    def validate(self) -> None:
        n = len(self.variables)
        for i, c in enumerate(self.constraints):
            if len(c.coeffs) != n:
                raise MalformedProgram(f"row {i} has {len(c.coeffs)} coefficients, expected {n}")
            if c.relation not in RELATIONS:
                raise MalformedProgram(f"row {i} has unknown relation {c.relation!r}")
        if self.objective is not None:
            sense, coeffs = self.objective
            if sense not in ("max", "min"):
                raise MalformedProgram(f"unknown objective sense {sense!r}")
            if len(coeffs) != n:
                raise MalformedProgram("objective length does not match the variables")
        for j in self.bounds:
            if not 0 <= j < n:
                raise MalformedProgram(f"bound on unknown variable {j}")

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        for c in self.constraints:
            lhs = sum(a * xi for a, xi in zip(c.coeffs, x))
            if c.relation == LE and lhs > c.rhs:
                return False
            if c.relation == GE and lhs < c.rhs:
                return False
            if c.relation == EQ and lhs != c.rhs:
                return False
        for j, xj in enumerate(x):
            lo, hi = self.bounds_of(j)
            if (lo is not None and xj < lo) or (hi is not None and xj > hi):
                return False
        return True

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        if self.objective is None:
            return Fraction(0)
        return sum((c * xi for c, xi in zip(self.objective[1], x)), Fraction(0))


@dataclass(frozen=True)
class Optimal:
    point: tuple[Fraction, ...]
    value: Fraction
    dual_point: Optional[tuple[Fraction, ...]] = None


@dataclass(frozen=True)
class Infeasible:
    farkas_certificate: Optional[tuple[Fraction, ...]] = None


@dataclass(frozen=True)
class Unbounded:
    feasible_point: tuple[Fraction, ...]
    ray: tuple[Fraction, ...]


LpOutcome = Union[Optimal, Infeasible, Unbounded]


def scale_to_integer(x: Sequence) -> list[int]:
    """Multiply a rational vector by the lcm of its denominators."""
    fracs = [Fraction(v) for v in x]
    m = lcm(1, *(f.denominator for f in fracs))
    return [int(f * m) for f in fracs]


# --- solver --------------------------------------------------------------------

_ZERO = Fraction(0)
_ONE = Fraction(1)


class _Tableau:
    """Standard-form tableau ``A x = b, x >= 0, b >= 0`` plus one objective row."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int], ncols: int):
        self.rows = rows  # each row has ncols entries followed by the rhs
        self.basis = basis
        self.ncols = ncols
        self.obj: list[Fraction] = []

    def set_objective(self, cost: Sequence[Fraction]) -> None:
        obj = list(cost) + [_ZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(self.ncols + 1):
                    if row[j]:
                        obj[j] -= cb * row[j]
        # obj[j] is the reduced cost for j < ncols; obj[-1] is minus the objective value.
        self.obj = obj

    def pivot(self, r: int, q: int) -> None:
        rows = self.rows
        prow = rows[r]
        p = prow[q]
        if p != _ONE:
            inv = _ONE / p
            prow = [a * inv if a else a for a in prow]
            rows[r] = prow
        nz = [j for j, a in enumerate(prow) if a]
        for i, row in enumerate(rows):
            if i != r:
                f = row[q]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        f = self.obj[q]
        if f:
            for j in nz:
                self.obj[j] -= f * prow[j]
        self.basis[r] = q

    def run(self, allowed: Sequence[bool]) -> Optional[int]:
        """Maximize; returns None at optimum or the entering column proving unboundedness."""
        while True:
            q = -1
            for j in range(self.ncols):
                if allowed[j] and self.obj[j] > 0:
                    q = j
                    break
            if q < 0:
                return None
            best = None
            r = -1
            for i, row in enumerate(self.rows):
                a = row[q]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[r])
                    ):
                        best, r = ratio, i
            if r < 0:
                return q
            self.pivot(r, q)

    def solution(self) -> list[Fraction]:
        x = [_ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = self.rows[i][-1]
        return x


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly. Feasibility problems (no objective) report value 0."""
    lp.validate()
    n = len(lp.variables)

    # Column j of the standard form stands for sign * (x_var - offset).
    col_var: list[int] = []
    col_sign: list[int] = []
    offset = [_ZERO] * n
    var_cols: list[list[int]] = [[] for _ in range(n)]
    extra_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
    plain_bounds = True
    for j in range(n):
        lo, hi = lp.bounds_of(j)
        if lo is not None:
            offset[j] = lo
            var_cols[j].append(len(col_var))
            col_var.append(j)
            col_sign.append(1)
            if hi is not None:
                extra_rows.append(({var_cols[j][0]: _ONE}, LE, hi - lo))
            if lo != 0 or hi is not None:
                plain_bounds = False
        elif hi is not None:
            offset[j] = hi
            var_cols[j].append(len(col_var))
            col_var.append(j)
            col_sign.append(-1)
            plain_bounds = False
        else:
            for s in (1, -1):
                var_cols[j].append(len(col_var))
                col_var.append(j)
                col_sign.append(s)
            plain_bounds = False
    nstruct = len(col_var)

    rows_spec: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for c in lp.constraints:
        coeffs: dict[int, Fraction] = {}
        rhs = c.rhs
        for j, a in enumerate(c.coeffs):
            if a:
                rhs -= a * offset[j]
                for k in var_cols[j]:
                    coeffs[k] = a * col_sign[k]
        rows_spec.append((coeffs, c.relation, rhs))
    n_user_rows = len(rows_spec)
    rows_spec.extend(extra_rows)

    flipped = []
    normalized = []
    for coeffs, rel, rhs in rows_spec:
        if rhs < 0:
            coeffs = {k: -a for k, a in coeffs.items()}
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
            rhs = -rhs
            flipped.append(True)
        else:
            flipped.append(False)
        normalized.append((coeffs, rel, rhs))

    m = len(normalized)
    n_slack = sum(1 for _, rel, _ in normalized if rel != EQ)
    n_art = sum(1 for _, rel, _ in normalized if rel != LE)
    ncols = nstruct + n_slack + n_art
    art_start = nstruct + n_slack
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    id_col: list[int] = []  # column holding B^-1 e_i in the final tableau
    s_next, a_next = nstruct, art_start
    for coeffs, rel, rhs in normalized:
        row = [_ZERO] * (ncols + 1)
        for k, a in coeffs.items():
            row[k] = a
        row[-1] = rhs
        if rel == LE:
            row[s_next] = _ONE
            basis.append(s_next)
            id_col.append(s_next)
            s_next += 1
        else:
            if rel == GE:
                row[s_next] = -_ONE
                s_next += 1
            row[a_next] = _ONE
            basis.append(a_next)
            id_col.append(a_next)
            a_next += 1
        rows.append(row)

    tab = _Tableau(rows, basis, ncols)
    is_art = [j >= art_start for j in range(ncols)]

    if n_art:
        cost1 = [(-_ONE if is_art[j] else _ZERO) for j in range(ncols)]
        tab.set_objective(cost1)
        tab.run([True] * ncols)
        if tab.obj[-1] != 0:  # phase-one optimum -sum(art) < 0
            cert = None
            if plain_bounds:
                y = _duals(tab, cost1, id_col)
                cert = tuple((y[i] if flipped[i] else -y[i]) for i in range(n_user_rows))
            return Infeasible(cert)
        # Drive zero-level artificials out of the basis where possible.
        for i in range(m):
            if is_art[tab.basis[i]]:
                row = tab.rows[i]
                for j in range(art_start):
                    if row[j]:
                        tab.pivot(i, j)
                        break

    cost = [_ZERO] * ncols
    sense = None
    if lp.objective is not None:
        sense, obj = lp.objective
        sgn = 1 if sense == "max" else -1
        for k in range(nstruct):
            cost[k] = sgn * obj[col_var[k]] * col_sign[k]
    tab.set_objective(cost)
    allowed = [not is_art[j] for j in range(ncols)]
    q = tab.run(allowed)

    std = tab.solution()
    point = _to_original(std, col_var, col_sign, offset, n, with_offset=True)
    if q is not None:
        ray_std = [_ZERO] * ncols
        ray_std[q] = _ONE
        for i, b in enumerate(tab.basis):
            ray_std[b] = -tab.rows[i][q]
        ray = _to_original(ray_std, col_var, col_sign, offset, n, with_offset=False)
        return Unbounded(tuple(point), tuple(ray))

    value = lp.objective_value(point)
    y = _duals(tab, cost, id_col)
    dual = [(-y[i] if flipped[i] else y[i]) for i in range(n_user_rows)]
    if sense == "min":
        dual = [-d for d in dual]
    return Optimal(tuple(point), value, tuple(dual))


def _duals(tab: _Tableau, cost: Sequence[Fraction], id_col: Sequence[int]) -> list[Fraction]:
    y = []
    for c in id_col:
        s = _ZERO
        for i, b in enumerate(tab.basis):
            if cost[b]:
                a = tab.rows[i][c]
                if a:
                    s += cost[b] * a
        y.append(s)
    return y


def _to_original(std, col_var, col_sign, offset, n, with_offset):
    x = list(offset) if with_offset else [_ZERO] * n
    for k, j in enumerate(col_var):
        if std[k]:
            x[j] += col_sign[k] * std[k]
    return x
