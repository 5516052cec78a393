"""Degree-p steps of the index 1 cover in characteristic p.

Only the numerical shadow of the cover is computed.  For a general section
the divisor of the defining function along ``C_j`` has multiplicity ``m_j``
with ``m_j + r a_j = 0 (mod r)``, so the residues ``m_j mod p`` are
determined by the discrepancy profile.  Each exceptional component then falls
into one of two local models:

* ``p`` does not divide ``m_j``: the component is totally ramified,
  ``pi^* C_j = p C~_j`` and the new coefficient is ``p(a_j - 1 + 1/p)``;
* ``p`` divides ``m_j`` and both (at most two) neighbours have nonzero
  residue: the cover is smooth generically along ``C_j`` and the
  coefficient is unchanged.

A component with zero residue whose only neighbour also has zero residue is
the failure pattern of the characteristic 2 and 3 counterexamples; there the
coefficient is at least ``p a_j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, NamedTuple

from .blowup import BlowUpCenter, BoundaryPoint, EdgePoint, FreePoint
from .discrepancy import AnalysisError, DiscrepancyProfile, NotLogTerminalError, ScaledCoefficients
from .graph import ResolutionGraph


class CoverError(AnalysisError):
    pass


class TameIndexError(CoverError):
    """``p`` does not divide the index, so the cover is tame (etale off the point)."""


class CoverConsistencyError(CoverError):
    """Residue data that cannot come from a genuine discrepancy profile."""


class UnhandledCenterError(CoverError):
    pass


@lru_cache(maxsize=1 << 16)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=1 << 16)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n``, ascending."""
    return list(_prime_factors(n))


@dataclass(frozen=True)
class ResidueVector:
    """Residues ``m_j mod p`` together with the profile they came from."""

    residues: Mapping[str, int]
    p: int
    r: int
    coefficients: Mapping[str, Fraction] = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "residues", dict(self.residues))
        # a profile's own coefficient mapping is read-only and can be shared
        if not isinstance(self.coefficients, ScaledCoefficients):
            object.__setattr__(self, "coefficients", dict(self.coefficients))

    def __getitem__(self, vid: str) -> int:
        return self.residues[vid]


class CaseKind(enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    FAIL_END_PATTERN = "FailEndPattern"
    UNCLASSIFIED = "Unclassified"

    def __str__(self) -> str:
        return self.value


class ComponentCase(NamedTuple):
    """Local behaviour of one exceptional component under a degree-p step.

    ``value`` is the new coefficient for the two cases, a lower bound for
    the failure pattern, and ``None`` when unclassified.
    """

    kind: CaseKind
    value: Fraction | None = None
    pullback_multiplicity: int | None = None

    @property
    def is_lower_bound(self) -> bool:
        return self.kind is CaseKind.FAIL_END_PATTERN


class Verdict(enum.Enum):
    TAME_CANONICAL = "TameCanonical"
    STEP_LOG_TERMINAL = "StepLogTerminal"
    NOT_LOG_TERMINAL = "NotLogTerminal"
    THEOREM_ONE_CANONICAL = "TheoremOneCanonical"
    TYPE_A_REMARK_CANONICAL = "TypeARemarkCanonical"
    INDETERMINATE = "Indeterminate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CoverReport:
    p: int
    index: int
    cases: Mapping[str, ComponentCase]
    step_index_after: int | None
    boundary_reduced: bool
    verdict: Verdict
    provenance: str
    residues: ResidueVector | None = None
    failing: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "cases", dict(self.cases))


def residues_mod_p(profile: DiscrepancyProfile, p: int) -> ResidueVector:
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    r = profile.index
    if r % p:
        raise TameIndexError(f"p = {p} does not divide the index {r}; the index 1 cover is tame")
    try:
        scaled = profile.scaled()
    except ArithmeticError as exc:
        raise CoverConsistencyError(str(exc)) from None
    residues = {vid: -ra % p for vid, ra in scaled.items()}
    return ResidueVector(residues, p, r, profile.coefficients)


def classify_component(graph: ResolutionGraph, rv: ResidueVector, j: str) -> ComponentCase:
    ids = graph.ids
    residues = [rv.residues[v] for v in ids]
    return _component_case(ids, graph.adjacency, residues, rv.p, graph.index_of[j], rv.coefficients[j])


def _component_case(
    ids: tuple[str, ...], adjacency: tuple[tuple[int, ...], ...], residues: list[int], p: int, k: int, a: Fraction
) -> ComponentCase:
    d = a.denominator
    kind, top, mult = _component_kind(ids, adjacency, residues, p, k, a.numerator, d)
    return ComponentCase(kind) if top is None else ComponentCase(kind, Fraction(top, d), mult)


def _component_kind(
    ids: tuple[str, ...], adjacency: tuple[tuple[int, ...], ...], residues: list[int], p: int, k: int, n: int, d: int
) -> tuple[CaseKind, int | None, int | None]:
    """Case of component ``k`` with coefficient ``n / d``, and the numerator over ``d`` of its value."""
    if residues[k] != 0:
        # p (a - 1 + 1/p) = p a - p + 1
        return CaseKind.CASE1, p * n - (p - 1) * d, p
    nbrs = adjacency[k]
    zero = [i for i in nbrs if residues[i] == 0]
    if len(nbrs) <= 2 and not zero:
        if len(nbrs) == 1:
            # the congruence at C_j forces a second neighbour with nonzero residue
            raise CoverConsistencyError(
                f"{ids[k]} has residue 0 and a single neighbour {ids[nbrs[0]]} with nonzero residue; "
                "this cannot come from a discrepancy profile"
            )
        return CaseKind.CASE2, n, 1
    if len(nbrs) == 1:
        return CaseKind.FAIL_END_PATTERN, p * n, p
    return CaseKind.UNCLASSIFIED, None, None


def _require_minimal_lt(graph: ResolutionGraph, profile: DiscrepancyProfile) -> None:
    if profile.ids != graph.ids:
        raise ValueError("profile does not belong to this graph")
    if any(w > -2 for w in graph.weights):
        low = [v for v, w in zip(graph.ids, graph.weights) if w > -2]
        raise CoverError(f"cover analysis needs the minimal resolution; {', '.join(low)} has self-intersection >= -1")
    if not profile.is_log_terminal:
        raise NotLogTerminalError("cover analysis needs a log terminal pair")


def cover_step(graph: ResolutionGraph, profile: DiscrepancyProfile, p: int) -> CoverReport:
    _require_minimal_lt(graph, profile)
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    r = profile.index
    if r % p:
        raise TameIndexError(f"p = {p} does not divide the index {r}; the index 1 cover is tame")
    try:
        scaled = profile.scaled_values()
    except ArithmeticError as exc:
        raise CoverConsistencyError(str(exc)) from None
    ids, adjacency = graph.ids, graph.adjacency
    residues = [-n % p for n in scaled]
    rv = ResidueVector(dict(zip(ids, residues)), p, r, profile.coefficients)
    # work with the numerators over r and build each fraction once
    cases = {}
    failing = []
    classified = True
    for k, j in enumerate(ids):
        if residues[k]:
            # the common case, inlined from _component_kind
            kind, top, mult = CaseKind.CASE1, p * scaled[k] - (p - 1) * r, p
        else:
            kind, top, mult = _component_kind(ids, adjacency, residues, p, k, scaled[k], r)
        if top is None:
            cases[j] = ComponentCase(kind)
            classified = False
            continue
        cases[j] = ComponentCase(kind, Fraction(top, r), mult)
        if top >= r:
            failing.append(j)
        if kind is CaseKind.FAIL_END_PATTERN:
            classified = False
    if failing:
        verdict = Verdict.NOT_LOG_TERMINAL
    elif classified:
        verdict = Verdict.STEP_LOG_TERMINAL
    else:
        verdict = Verdict.INDETERMINATE
    return CoverReport(
        p=p,
        index=r,
        cases=cases,
        step_index_after=r // p,
        boundary_reduced=classified,
        verdict=verdict,
        provenance="computed",
        residues=rv,
        failing=tuple(failing),
    )


def is_type_a(graph: ResolutionGraph) -> bool:
    """Chain-shaped exceptional locus (boundary incidences are ignored)."""
    return graph.is_tree() and all(len(n) <= 2 for n in graph.adjacency)


def cover_verdict(graph: ResolutionGraph, profile: DiscrepancyProfile, p: int) -> CoverReport:
    """Overall verdict for the index 1 cover in characteristic ``p``.

    The first degree-p step is always computed.  For ``p >= 5`` the later
    steps of the tower are not recomputed: canonicity there is a known
    result, labelled "theorem-backed" in ``provenance``, while the parts
    actually computed are labelled "computed".
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    _require_minimal_lt(graph, profile)
    if profile.index % p:
        return CoverReport(
            p=p,
            index=profile.index,
            cases={},
            step_index_after=None,
            boundary_reduced=True,
            verdict=Verdict.TAME_CANONICAL,
            provenance="known result: the cover is etale outside the point",
        )
    step = cover_step(graph, profile, p)
    if step.verdict is not Verdict.STEP_LOG_TERMINAL:
        return step
    if p >= 5:
        deeper = "; later steps theorem-backed" if (profile.index // p) % p == 0 else ""
        return _with(step, Verdict.THEOREM_ONE_CANONICAL, f"first step computed{deeper}; canonicity theorem-backed")
    if is_type_a(graph):
        return _with(step, Verdict.TYPE_A_REMARK_CANONICAL, "first step computed; type A remark for p in {2, 3}")
    return step


def _with(report: CoverReport, verdict: Verdict, provenance: str) -> CoverReport:
    return CoverReport(
        p=report.p,
        index=report.index,
        cases=report.cases,
        step_index_after=report.step_index_after,
        boundary_reduced=report.boundary_reduced,
        verdict=verdict,
        provenance=provenance,
        residues=report.residues,
        failing=report.failing,
    )


def classify_center_case(graph: ResolutionGraph, rv: ResidueVector, center: BlowUpCenter) -> str:
    """Which of the three blow-up centre cases ``a``, ``b``, ``c`` applies.

    ``a``: a point on one component with zero residue; ``b``: on one
    component with nonzero residue; ``c``: the intersection of two components,
    at least one with nonzero residue.
    """
    if isinstance(center, (FreePoint, BoundaryPoint)):
        if center.vertex is None:
            raise UnhandledCenterError("a boundary point off the exceptional locus is not one of the cases")
        if center.vertex not in rv.residues:
            raise UnhandledCenterError(f"unknown vertex {center.vertex!r}")
        return "a" if rv.residues[center.vertex] == 0 else "b"
    if isinstance(center, EdgePoint):
        if not graph.index_of.keys() >= {center.u, center.v}:
            raise UnhandledCenterError(f"unknown vertex in {center}")
        if rv.residues[center.u] == 0 and rv.residues[center.v] == 0:
            raise UnhandledCenterError(f"both components through {center} have residue 0")
        return "c"
    raise TypeError(f"not a blow-up center: {center!r}")
