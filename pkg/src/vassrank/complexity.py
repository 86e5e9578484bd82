"""Complexity classification of terminating VASSs.

The polynomial order comes from the ranking certificate; an LP over balanced
transition counts decides whether the complexity is exactly linear and, if
so, gives the constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import lp as lpmod
from .lp import EQ, GE, LinearProgram, Optimal, Unbounded
from .ranking import AnalysisResult, RankingCertificate, RankNode, analyze
from .vass import Vass, build_flow_matrix, build_update_matrix


class NonTerminatingInput(ValueError):
    pass


@dataclass(frozen=True)
class ExactLinear:
    """``comp_N = c * N`` asymptotically."""

    c: Fraction

    def describe(self) -> str:
        return f"{self.c}N asymptotically"


@dataclass(frozen=True)
class AtLeastQuadratic:
    def describe(self) -> str:
        return "at least quadratic"


@dataclass(frozen=True)
class NotApplicable:
    reason: str = "non-terminating"

    def describe(self) -> str:
        return f"not applicable ({self.reason})"


@dataclass(frozen=True)
class PolyOrder:
    k: int


@dataclass(frozen=True)
class Unknown:
    pass


@dataclass(frozen=True)
class Omega:
    k: int


LinearVerdict = Union[ExactLinear, AtLeastQuadratic, NotApplicable]


def poly_string(k: int) -> str:
    if k == 0:
        return "1"
    if k == 1:
        return "N"
    return f"N^{k}"


@dataclass(frozen=True)
class ComplexityReport:
    terminating: bool
    order_k: int
    conservative_syntactic: bool
    conservative_generalized: bool
    upper: Union[PolyOrder, Unknown]
    lower: Optional[Omega]
    linear_verdict: LinearVerdict

    @property
    def theta(self) -> Optional[str]:
        if isinstance(self.upper, PolyOrder) and self.lower is not None and self.upper.k == self.lower.k:
            return poly_string(self.order_k)
        return None

    def to_dict(self) -> dict:
        lin = self.linear_verdict
        return {
            "terminating": self.terminating,
            "order": self.order_k if self.terminating else None,
            "conservative": self.conservative_syntactic,
            "conservative_generalized": self.conservative_generalized,
            "theta": self.theta,
            "upper": poly_string(self.upper.k) if isinstance(self.upper, PolyOrder) else None,
            "lower": poly_string(self.lower.k) if self.lower is not None else None,
            "linear": str(lin.c) if isinstance(lin, ExactLinear) else None,
            "linear_verdict": lin.describe(),
        }


# --- conservativity --------------------------------------------------------------


def is_conservative(v: Vass) -> bool:
    return all(sum(t.update) == 0 for t in v.transitions)


def _balanced_program(v: Vass) -> LinearProgram:
    prog = LinearProgram([f"mu{t.id}" for t in v.transitions])
    for row in build_flow_matrix(v):
        if any(row):
            prog.add({j: a for j, a in enumerate(row) if a}, EQ, 0)
    return prog


def _cone_reaches(v: Vass, direction) -> bool:
    """Is there a balanced ``mu >= 0`` with ``direction . D mu >= 1``?"""
    if not v.transitions:
        return False
    D = build_update_matrix(v)
    coeffs = [sum(Fraction(w) * D[i][j] for i, w in enumerate(direction)) for j in range(len(v.transitions))]
    if not any(coeffs):
        return False
    prog = _balanced_program(v)
    prog.add({j: a for j, a in enumerate(coeffs) if a}, GE, 1)
    return isinstance(lpmod.solve(prog), Optimal)


def is_generalized_conservative(v: Vass) -> bool:
    """Every balanced non-negative count has total value summing to 0.

    This is the cycle-level version of ``is_conservative``: the entry sum of
    the valuation can then only drift by a constant along any path, which is
    all the polynomial upper bound needs. Two LP checks, one per sign.
    """
    return not any(_cone_reaches(v, [sign] * v.dim) for sign in (1, -1))


# --- cone dimension ---------------------------------------------------------------


def _nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of ``{w : row . w = 0 for every row}``, by Gauss-Jordan elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        w = [Fraction(0)] * n
        w[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            w[pc] = -m[i][free]
        basis.append(w)
    return basis


def _cone_vector(v: Vass, direction) -> Optional[list[Fraction]]:
    D = build_update_matrix(v)
    m = len(v.transitions)
    coeffs = [sum(Fraction(w) * D[i][j] for i, w in enumerate(direction)) for j in range(m)]
    if not any(coeffs):
        return None
    prog = _balanced_program(v)
    prog.add({j: a for j, a in enumerate(coeffs) if a}, GE, 1)
    out = lpmod.solve(prog)
    if not isinstance(out, Optimal):
        return None
    return [sum(D[i][j] * out.point[j] for j in range(m)) for i in range(v.dim)]


def cone_dimension(v: Vass) -> int:
    """Dimension of the linear span of ``{D mu : F mu = 0, mu >= 0}``.

    Greedy: while some direction orthogonal to the vectors found so far is
    reached by the cone (with either sign), add such a cone vector.
    """
    found: list[list[Fraction]] = []
    while len(found) < v.dim:
        new = None
        for w in _nullspace(found, v.dim):
            for sign in (1, -1):
                new = _cone_vector(v, [sign * x for x in w])
                if new is not None:
                    break
            if new is not None:
                break
        if new is None:
            break
        found.append(new)
    return len(found)


# --- linear complexity ------------------------------------------------------------


def linear_program(v: Vass) -> LinearProgram:
    """max 1.rho  s.t.  rho >= 0, D rho >= -1, F rho = 0."""
    prog = _balanced_program(v)
    for row in build_update_matrix(v):
        prog.add({j: a for j, a in enumerate(row) if a}, GE, -1)
    prog.maximize([1] * len(v.transitions))
    return prog


def linear_complexity(v: Vass, result: Optional[AnalysisResult] = None) -> Union[ExactLinear, AtLeastQuadratic]:
    if result is None:
        result = analyze(v)
    if not result.terminating:
        raise NonTerminatingInput("linear complexity is only defined for terminating VASSs")
    if not v.transitions:
        return ExactLinear(Fraction(0))
    out = lpmod.solve(linear_program(v))
    if isinstance(out, Unbounded):
        return AtLeastQuadratic()
    if not isinstance(out, Optimal):
        raise AssertionError("rho = 0 is always feasible")
    return ExactLinear(Fraction(out.value))


def classify(v: Vass, result: AnalysisResult, with_linear: bool = True) -> ComplexityReport:
    cons = is_conservative(v)
    gen = cons or is_generalized_conservative(v)
    if not result.terminating:
        return ComplexityReport(False, 0, cons, gen, Unknown(), None, NotApplicable())
    k = result.certificate.degree
    upper = PolyOrder(k) if gen else Unknown()
    lin = linear_complexity(v, result) if with_linear else NotApplicable("not requested")
    return ComplexityReport(True, k, cons, gen, upper, Omega(k), lin)


# --- symbolic bounds --------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicBound:
    """One ``|r| * dim * N + |z|`` factor per non-constant level on a deepest branch.

    Only meaningful for conservative VASSs, where the valuation norm never
    exceeds ``dim * N``. ``cost_bound`` gives the matching concrete number.
    """

    factors: tuple[str, ...]
    coefficients: tuple[tuple[int, int], ...] = ()

    def __str__(self) -> str:
        if not self.coefficients:
            return "1"
        return " * ".join(f"({a}N + {b + 1})" for a, b in self.coefficients)

    def at(self, n: int) -> int:
        out = 1
        for a, b in self.coefficients:
            out *= a * n + b + 1
        return out


def _norm(xs) -> int:
    return max((abs(x) for x in xs), default=0)


def _deepest(node: RankNode) -> list[RankNode]:
    if not node.children:
        return [node]
    best = max(node.children, key=lambda c: c.degree)
    return [node] + _deepest(best)


def symbolic_bound(v: Vass, cert: RankingCertificate) -> SymbolicBound:
    if cert.root is None:
        return SymbolicBound(())
    coeffs = [
        (_norm(node.r) * v.dim, _norm(node.z.values()))
        for node in _deepest(cert.root)
        if any(node.r)
    ]
    return SymbolicBound(tuple(f"{a}N + {b}" for a, b in coeffs), tuple(coeffs))


def cost_bound(v: Vass, cert: RankingCertificate, n: int) -> int:
    """Concrete upper bound on ``comp_N`` for a conservative VASS.

    A level with value at most ``u`` on reachable states can be strictly
    decreased at most ``u`` times; between two strict steps only transitions
    of a single child SCC fire.
    """

    def walk(node: RankNode) -> int:
        u = _norm(node.r) * v.dim * n + _norm(node.z.values())
        inner = max((walk(c) for c in node.children), default=0)
        return (u + 1) * (inner + 1) - 1

    return 0 if cert.root is None else walk(cert.root)
