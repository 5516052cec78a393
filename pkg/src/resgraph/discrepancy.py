"""Numerical pull-back of ``K + D``, the index, and the fundamental cycle.

For a resolution with exceptional curves ``C_j`` we write the numerical
pull-back as ``K' + D' + sum_j a_j C_j``.  Intersecting with ``C_i`` and using
adjunction for smooth rational curves (``K'.C_i = -C_i^2 - 2``) gives the
linear system

    sum_j a_j (C_j . C_i) = C_i^2 + 2 - (D' . C_i)

which is solved exactly here.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, NamedTuple

from . import linalg
from .graph import ResolutionGraph, intersection_matrix


class AnalysisError(ValueError):
    """An analysis refused its input (exit status 1 on the command line)."""


class NotNegativeDefiniteError(AnalysisError):
    pass


class NotLogTerminalError(AnalysisError):
    pass


class PairClass(enum.Enum):
    CANONICAL = "Canonical"
    LOG_TERMINAL_NOT_CANONICAL = "LogTerminalNotCanonical"
    NOT_LOG_TERMINAL = "NotLogTerminal"

    def __str__(self) -> str:
        return self.value


class ScaledCoefficients(Mapping[str, Fraction]):
    """Read-only ``{id: n_j / r}`` built from integers; fractions are made on first access."""

    __slots__ = ("ids", "scaled", "index", "_made")

    def __init__(self, ids: tuple[str, ...], scaled: tuple[int, ...], index: int):
        self.ids = ids
        self.scaled = scaled
        self.index = index
        self._made: dict[str, Fraction] | None = None

    def _all(self) -> dict[str, Fraction]:
        if self._made is None:
            r = self.index
            self._made = {vid: Fraction(n, r) for vid, n in zip(self.ids, self.scaled)}
        return self._made

    def __getitem__(self, vid: str) -> Fraction:
        return self._all()[vid]

    def __iter__(self):
        return iter(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def __repr__(self) -> str:
        return repr(self._all())


@dataclass(frozen=True)
class DiscrepancyProfile:
    """Coefficients ``a_j`` of the pulled-back log canonical divisor and the index.

    ``index`` is the least common multiple of the coefficient denominators.
    For log terminal graphs this is the Cartier index; otherwise it is only a
    numerical index and ``numerical_only`` is set.
    """

    coefficients: Mapping[str, Fraction]
    index: int
    numerical_only: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.coefficients, ScaledCoefficients):
            coefficients = {vid: a if type(a) is Fraction else Fraction(a) for vid, a in self.coefficients.items()}
            object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def _from_scaled(cls, ids: tuple[str, ...], scaled: list[int], index: int) -> DiscrepancyProfile:
        return cls(ScaledCoefficients(ids, tuple(scaled), index), index, any(n >= index for n in scaled))

    def __getitem__(self, vid: str) -> Fraction:
        return self.coefficients[vid]

    @property
    def ids(self) -> tuple[str, ...]:
        c = self.coefficients
        return c.ids if isinstance(c, ScaledCoefficients) else tuple(c)

    @property
    def values(self) -> list[Fraction]:
        return list(self.coefficients.values())

    @property
    def is_log_terminal(self) -> bool:
        c = self.coefficients
        if isinstance(c, ScaledCoefficients):
            return all(n < c.index for n in c.scaled)
        return all(a.numerator < a.denominator for a in c.values())

    def scaled(self) -> dict[str, int]:
        """The integers ``index * a_j``."""
        return dict(zip(self.coefficients, self.scaled_values()))

    def scaled_values(self) -> tuple[int, ...]:
        """The integers ``index * a_j`` in vertex order."""
        c = self.coefficients
        if isinstance(c, ScaledCoefficients) and c.index == self.index:
            return c.scaled
        out = []
        r = self.index
        for vid, a in c.items():
            if r % a.denominator:
                raise ArithmeticError(f"index {r} does not clear the denominator of a[{vid}] = {a}")
            out.append(a.numerator * (r // a.denominator))
        return tuple(out)


@dataclass(frozen=True)
class Cycle:
    multiplicities: Mapping[str, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "multiplicities", dict(self.multiplicities))

    def __getitem__(self, vid: str) -> int:
        return self.multiplicities[vid]

    def as_tuple(self, graph: ResolutionGraph) -> tuple[int, ...]:
        return tuple(self.multiplicities.get(vid, 0) for vid in graph.ids)


class CycleNumbers(NamedTuple):
    z_squared: int
    z_dot_k: int
    p_a: Fraction


class RationalityCheck(NamedTuple):
    """Outcome of the rationality test on the fundamental cycle.

    ``holds`` is the inequality ``Z^2 + Z.K < 0``.  ``multiplicity`` is
    ``-Z^2``, reported only when ``p_a(Z) = 0`` (Artin's criterion).
    """

    holds: bool
    multiplicity: int | None
    cycle: Cycle
    numbers: CycleNumbers

    def __bool__(self) -> bool:
        return self.holds


def adjunction_rhs(graph: ResolutionGraph) -> list[int]:
    """Right-hand side ``C_i^2 + 2 - (D'.C_i)`` of the pull-back system."""
    return [w + 2 - b for w, b in zip(graph.weights, graph.boundary_vector)]


def _forest_order(graph: ResolutionGraph) -> tuple[list[int], list[int]]:
    """An order listing every parent before its children, and each vertex's parent (-1 at roots)."""
    known = graph.__dict__.get("_tree_parents")
    if known is not None:
        return list(range(len(known))), known
    n = len(graph.vertices)
    adj = graph.adjacency
    parent = [-1] * n
    order: list[int] = []
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        k = len(order)
        order.append(root)
        while k < len(order):
            v = order[k]
            k += 1
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    order.append(u)
    return order, parent


def _forest_is_negative_definite(graph: ResolutionGraph) -> bool:
    order, parent = _forest_order(graph)
    en = list(graph.weights)
    ed = [1] * len(en)
    for v in reversed(order):
        num, den = en[v], ed[v]
        if num >= 0:
            return False
        p = parent[v]
        if p >= 0:
            q = -num
            en[p], ed[p] = en[p] * q + den * ed[p], ed[p] * q
            g = gcd(en[p], ed[p])
            en[p] //= g
            ed[p] //= g
    return True


def is_negative_definite(graph: ResolutionGraph) -> bool:
    """Negative definiteness of the intersection matrix, by leaf elimination on forests."""
    known = graph.__dict__.get("_negative_definite")
    if known is None:
        if graph.is_forest():
            known = _forest_is_negative_definite(graph)
        else:
            known = linalg.is_negative_definite(intersection_matrix(graph))
        graph.__dict__["_negative_definite"] = known
    return known


def _solve_forest(graph: ResolutionGraph, rhs: list[int]) -> tuple[list[int], int] | None:
    """Leaf-elimination solve for forests; ``None`` if a pivot is non-negative.

    Returns integers ``s_v`` and the index ``r`` with ``a_v = s_v / r``.

    Eliminating the leaves of a subtree ``T`` towards its root ``v`` leaves
    the pivot ``-det(T) / det(T - v)`` and a reduced right-hand side over the
    same denominator, where ``det`` is the determinant of minus the
    intersection matrix.  Keeping both as numerators over that common
    denominator keeps every number a determinant-sized integer, so no
    reductions are needed along the way.  The pivots are ratios of
    consecutive principal minors, so the matrix is negative definite iff
    all of them are negative.
    """
    n = len(graph.vertices)
    order, parent = _forest_order(graph)
    en = list(graph.weights)  # -det(T_v)
    ed = [1] * n  # det(T_v - v)
    rn = list(rhs)  # reduced right-hand side times ed
    for v in reversed(order):
        e = en[v]
        if e >= 0:
            return None
        p = parent[v]
        if p >= 0:
            q = -e
            d = ed[p]
            en[p] = en[p] * q + ed[v] * d
            rn[p] = rn[p] * q + rn[v] * d
            ed[p] = d * q
    # with delta = det of the component, delta * a_v is an integer:
    # a_root = rn / en, and a_v = (rn_v - a_p ed_v) / en_v below the root
    s = [0] * n
    delta = [0] * n
    for v in order:
        p = parent[v]
        if p < 0:
            delta[v] = -en[v]
            s[v] = -rn[v]
        else:
            d = delta[v] = delta[p]
            s[v] = (rn[v] * d - s[p] * ed[v]) // en[v]
    return _combine_components(order, parent, s, delta)


def _combine_components(order: list[int], parent: list[int], s: list[int], delta: list[int]) -> tuple[list[int], int]:
    """Turn per-component numerators over ``delta`` into numerators over the least common index."""
    roots = [v for v in order if parent[v] < 0]
    if not roots:
        return [], 1
    if len(roots) == 1:
        g = gcd(delta[roots[0]], *s)
        return [x // g for x in s], delta[roots[0]] // g
    comp = [0] * len(s)
    for v in order:
        comp[v] = v if parent[v] < 0 else comp[parent[v]]
    dens = {}
    for root in roots:
        g = gcd(delta[root], *(s[v] for v in order if comp[v] == root))
        dens[root] = (g, delta[root] // g)
    index = lcm(*(d for _, d in dens.values()))
    out = []
    for v, x in enumerate(s):
        g, d = dens[comp[v]]
        out.append(x // g * (index // d))
    return out, index


def _check_solution(graph: ResolutionGraph, scaled: list[int], rhs: list[int], index: int) -> None:
    """Substitute ``index * a`` back into the system, in integers."""
    weights = graph.weights
    for i, nbrs in enumerate(graph.adjacency):
        total = weights[i] * scaled[i]
        for j in nbrs:
            total += scaled[j]
        if total != rhs[i] * index:
            raise ArithmeticError(f"back-substitution failed at {graph.ids[i]}")


def discrepancies(graph: ResolutionGraph) -> DiscrepancyProfile:
    """Solve for the coefficients ``a_j`` and the index.

    Raises :class:`NotNegativeDefiniteError` if the intersection matrix is
    not negative definite (the pull-back is then undefined).
    """
    rhs = adjunction_rhs(graph)
    solved = _solve_forest(graph, rhs) if graph.is_forest() else _solve_general(graph, rhs)
    if solved is None:
        raise NotNegativeDefiniteError("intersection matrix is not negative definite; no numerical pull-back")
    scaled, index = solved
    _check_solution(graph, scaled, rhs, index)
    # remembered so that later negative definiteness checks are free
    graph.__dict__["_negative_definite"] = True
    return DiscrepancyProfile._from_scaled(graph.ids, scaled, index)


def _solve_general(graph: ResolutionGraph, rhs: list[int]) -> tuple[list[int], int] | None:
    m = intersection_matrix(graph)
    if not linalg.is_negative_definite(m):
        return None
    a = linalg.solve_linear_system(m, rhs)
    index = lcm(*(x.denominator for x in a)) if a else 1
    return [x.numerator * (index // x.denominator) for x in a], index


def classify_pair(profile: DiscrepancyProfile) -> PairClass:
    c = profile.coefficients
    if isinstance(c, ScaledCoefficients):
        if all(n <= 0 for n in c.scaled):
            return PairClass.CANONICAL
        return PairClass.LOG_TERMINAL_NOT_CANONICAL if all(n < c.index for n in c.scaled) else PairClass.NOT_LOG_TERMINAL
    values = c.values()
    if all(a.numerator <= 0 for a in values):
        return PairClass.CANONICAL
    if all(a.numerator < a.denominator for a in values):
        return PairClass.LOG_TERMINAL_NOT_CANONICAL
    return PairClass.NOT_LOG_TERMINAL


def fundamental_cycle(graph: ResolutionGraph) -> Cycle:
    """Laufer's algorithm, raising the lowest-index curve with ``Z.C_i > 0`` first."""
    if not is_negative_definite(graph):
        raise NotNegativeDefiniteError("fundamental cycle needs a negative definite intersection matrix")
    if graph.has_boundary:
        warnings.warn("fundamental_cycle ignores the boundary divisor", stacklevel=2)
    n = len(graph.vertices)
    adj = graph.adjacency
    weights = graph.weights
    z = [1] * n
    dots = [weights[i] + len(adj[i]) for i in range(n)]
    while True:
        i = next((i for i in range(n) if dots[i] > 0), None)
        if i is None:
            break
        z[i] += 1
        dots[i] += weights[i]
        for j in adj[i]:
            dots[j] += 1
    return Cycle(dict(zip(graph.ids, z)))


def cycle_numbers(graph: ResolutionGraph, z: Cycle) -> CycleNumbers:
    mult = z.multiplicities
    if tuple(mult) == graph.ids:
        zv = tuple(mult.values())
    else:
        unknown = set(mult) - set(graph.ids)
        if unknown:
            raise ValueError(f"cycle mentions unknown vertices {sorted(unknown)}")
        zv = z.as_tuple(graph)
    weights = graph.weights
    z2 = sum(w * zi * zi for w, zi in zip(weights, zv))
    z2 += 2 * sum(zv[i] * zv[j] for i, nbrs in enumerate(graph.adjacency) for j in nbrs if i < j)
    zk = sum(zi * (-w - 2) for zi, w in zip(zv, graph.weights))
    return CycleNumbers(z2, zk, Fraction(2 + z2 + zk, 2))


def rationality_check(graph: ResolutionGraph) -> RationalityCheck:
    """Check ``Z^2 + Z.K < 0`` for the fundamental cycle of a log terminal graph.

    The boundary is dropped first: if the pair is log terminal then so is the
    surface alone.
    """
    bare = graph.without_boundary()
    profile = discrepancies(bare)
    if not profile.is_log_terminal:
        raise NotLogTerminalError("rationality check requires a log terminal graph")
    z = fundamental_cycle(bare)
    nums = cycle_numbers(bare, z)
    mult = -nums.z_squared if nums.p_a == 0 else None
    return RationalityCheck(nums.z_squared + nums.z_dot_k < 0, mult, z, nums)
