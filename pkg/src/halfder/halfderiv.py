"""Windowed half-derivation spaces by exact linear algebra.

A graded linear map of shift i sends each basis element at degree m to the
span of the basis at degree m + i.  On a finite window W the map is a vector
of unknowns, one per (source element, target tag):

  virasoro variants:   phi(L_m) = alpha_m L_{m+i}
  torus variants:      phi(x_m) = a_m x_{m+i} + b_m D_{m+i}
                       phi(D_m) = c_m x_{m+i} + d_m D_{m+i}

The half-derivation condition 2 phi([A,B]) = [phi(A),B] + [A,phi(B)] is
expanded per unordered element pair {A, B} with deg A + deg B inside
W u {(0,0)}, one row per graded target component.  Unknowns whose target
degree m + i is (0,0) are pinned away (the image is zero by convention).

Solutions of the windowed system can strictly contain restrictions of true
global half-derivations near the boundary, where constraints are missing;
`interior_dimension` therefore reports the rank of the solution space
restricted to sources in a smaller subwindow.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Optional

from . import linalg
from .algebra import (
    GAMMA1,
    TAG_D,
    TAG_X,
    AlgebraSpec,
    BasisElem,
    Degree,
    Element,
    UnsupportedVariantError,
    VIRASORO_ROOT,
    TORUS_GENERIC,
    TORUS_ROOT,
    Window,
    elem_iadd,
    elem_key,
    elem_str,
)

Candidate = Callable[[BasisElem], Element]


class InvalidInteriorError(Exception):
    """Interior size must be strictly smaller than the window."""


class InvalidShiftError(Exception):
    """Shift outside the family's admissible lattice."""


class UnknownLayout:
    """Column numbering of the unknowns for one (spec, window, shift).

    Entries are (source degree, source tag, target tag), ordered
    lexicographically by (m1, m2, source tag, target tag); entries whose
    target degree m + shift is (0,0) are omitted (pinned to zero).
    """

    __slots__ = ("spec", "window", "shift", "entries", "index")

    def __init__(self, spec: AlgebraSpec, window: Window, shift: Degree):
        self.spec = spec
        self.window = window
        self.shift = shift
        neg = (-shift[0], -shift[1])
        entries = []
        for m in window.points:
            if m == neg:
                continue
            for src in spec.tags:
                for tgt in spec.tags:
                    entries.append((m, src, tgt))
        self.entries = entries
        self.index = {e: k for k, e in enumerate(entries)}

    @property
    def ncols(self) -> int:
        return len(self.entries)


@dataclass
class ConstraintSystem:
    layout: UnknownLayout
    rows: list
    pair_blocks: int

    @property
    def spec(self) -> AlgebraSpec:
        return self.layout.spec

    @property
    def window(self) -> Window:
        return self.layout.window

    @property
    def shift(self) -> Degree:
        return self.layout.shift


@dataclass
class NullspaceBasis:
    layout: UnknownLayout
    vectors: list

    @property
    def dim(self) -> int:
        return len(self.vectors)


def build_constraints(spec: AlgebraSpec, window: Window, shift: Degree) -> ConstraintSystem:
    """Exact linear system whose kernel is the windowed shift-i
    half-derivation space."""
    layout = UnknownLayout(spec, window, shift)
    index = layout.index
    tags = spec.tags
    bracket = spec.bracket
    wset = window.point_set
    i1, i2 = shift
    rows: list = []
    pair_blocks = 0
    points = window.points

    def elem_pairs():
        for a_idx, m in enumerate(points):
            for n in points[a_idx:]:
                s = (m[0] + n[0], m[1] + n[1])
                if s != (0, 0) and s not in wset:
                    continue
                if m == n:
                    if len(tags) == 2:
                        yield (m, TAG_X), (n, TAG_D), s
                else:
                    for ta in tags:
                        for tb in tags:
                            yield (m, ta), (n, tb), s

    for A, B, s in elem_pairs():
        pair_blocks += 1
        out: dict = {t: {} for t in tags}

        def put(tag, col, value):
            row = out[tag]
            cur = row.get(col)
            nv = value if cur is None else cur + value
            if nv:
                row[col] = nv
            elif cur is not None:
                del row[col]

        # 2 phi([A, B])
        for (cdeg, ctag), beta in bracket(A, B).items():
            two_beta = beta + beta
            for tgt in tags:
                col = index.get((cdeg, ctag, tgt))
                if col is not None:
                    put(tgt, col, two_beta)
        # -[phi(A), B] and -[A, phi(B)]
        (mdeg, mtag) = A
        (ndeg, ntag) = B
        for tgt in tags:
            col = index.get((mdeg, mtag, tgt))
            if col is not None:
                e = ((mdeg[0] + i1, mdeg[1] + i2), tgt)
                for (fdeg, ftag), gamma in bracket(e, B).items():
                    put(ftag, col, -gamma)
            col = index.get((ndeg, ntag, tgt))
            if col is not None:
                e = ((ndeg[0] + i1, ndeg[1] + i2), tgt)
                for (fdeg, ftag), gamma in bracket(A, e).items():
                    put(ftag, col, -gamma)
        for t in tags:
            if out[t]:
                rows.append(out[t])
    return ConstraintSystem(layout, rows, pair_blocks)


def nullspace(system: ConstraintSystem) -> NullspaceBasis:
    """Canonical exact kernel basis (reduced echelon form, leading ones)."""
    field = system.spec.field
    vectors = linalg.solve_kernel(
        system.rows, system.layout.ncols, field.one, field.modp_map()
    )
    return NullspaceBasis(system.layout, vectors)


def interior_dimension(basis: NullspaceBasis, M: int) -> int:
    """Rank of the solution space restricted to sources with |m1|,|m2| <= M."""
    layout = basis.layout
    if M >= layout.window.N:
        raise InvalidInteriorError("interior bound must satisfy M < N")
    keep = {
        col
        for (deg, _src, _tgt), col in layout.index.items()
        if abs(deg[0]) <= M and abs(deg[1]) <= M
    }
    restricted = [linalg.restrict(v, keep) for v in basis.vectors]
    return linalg.rank(r for r in restricted if r)


class ShiftSolver:
    """Caches windowed nullspaces per shift for one spec and window.

    Opposite shifts are related by the degree-negation automorphism
    m -> -m of every variant, so only one of {i, -i} is solved and the
    other basis is transported (and re-echelonized).
    """

    def __init__(self, spec: AlgebraSpec, window: Window, use_negation: bool = True):
        self.spec = spec
        self.window = window
        self.use_negation = use_negation
        self._cache: dict = {}

    def basis_at(self, shift: Degree) -> NullspaceBasis:
        got = self._cache.get(shift)
        if got is not None:
            return got
        neg = (-shift[0], -shift[1])
        if self.use_negation and neg in self._cache:
            basis = self._transport(self._cache[neg], shift)
        else:
            basis = nullspace(build_constraints(self.spec, self.window, shift))
        self._cache[shift] = basis
        return basis

    def _transport(self, src: NullspaceBasis, shift: Degree) -> NullspaceBasis:
        dst_layout = UnknownLayout(self.spec, self.window, shift)
        src_index = src.layout.index
        moved = []
        for vec in src.vectors:
            entries = src.layout.entries
            out = {}
            for col, value in vec.items():
                deg, s_tag, t_tag = entries[col]
                out[dst_layout.index[((-deg[0], -deg[1]), s_tag, t_tag)]] = value
            moved.append(out)
        reduced = linalg.rref(moved)
        return NullspaceBasis(dst_layout, [reduced[lead] for lead in sorted(reduced)])


@dataclass
class SweepEntry:
    full_dim: int
    interior_dim: int


def shift_sweep(
    spec: AlgebraSpec,
    window: Window,
    shift_bound: int,
    M: int,
    solver: Optional[ShiftSolver] = None,
) -> dict:
    """Per-shift (full, interior) kernel dimensions over |i1|,|i2| <= bound."""
    solver = solver or ShiftSolver(spec, window)
    out = {}
    for s1 in range(-shift_bound, shift_bound + 1):
        for s2 in range(-shift_bound, shift_bound + 1):
            shift = (s1, s2)
            basis = solver.basis_at(shift)
            out[shift] = SweepEntry(basis.dim, interior_dimension(basis, M))
    return out


# ---------------------------------------------------------------------------
# Closed-form candidates and their verification
# ---------------------------------------------------------------------------

@dataclass
class CandidateReport:
    pairs_checked: int = 0
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_candidate(spec: AlgebraSpec, window: Window, candidate: Candidate) -> CandidateReport:
    """Evaluate every windowed half-derivation constraint against a
    closed-form map; violations carry the offending pair and residual."""
    report = CandidateReport()
    bracket = spec.bracket
    wset = window.point_set
    points = window.points
    tags = spec.tags
    images = {e: candidate(e) for e in spec.basis(window)}

    def residual(A: BasisElem, B: BasisElem) -> Element:
        res: Element = {}
        for c_elem, beta in bracket(A, B).items():
            elem_iadd(res, images[c_elem], beta + beta)
        for e, u in images[A].items():
            elem_iadd(res, bracket(e, B), -u)
        for e, u in images[B].items():
            elem_iadd(res, bracket(A, e), -u)
        return res

    for a_idx, m in enumerate(points):
        for n in points[a_idx:]:
            s = (m[0] + n[0], m[1] + n[1])
            if s != (0, 0) and s not in wset:
                continue
            if m == n:
                pairs = [((m, TAG_X), (n, TAG_D))] if len(tags) == 2 else []
            else:
                pairs = [((m, ta), (n, tb)) for ta in tags for tb in tags]
            for A, B in pairs:
                report.pairs_checked += 1
                res = residual(A, B)
                if res:
                    report.violations.append((A, B, elem_str(res)))
    return report


def candidate_vector(layout: UnknownLayout, candidate: Candidate) -> dict:
    """Coefficient vector of a graded closed-form map in a layout's columns."""
    i1, i2 = layout.shift
    vec = {}
    seen: dict = {}
    for (deg, s_tag, t_tag), col in layout.index.items():
        key = (deg, s_tag)
        img = seen.get(key)
        if img is None:
            img = seen[key] = candidate((deg, s_tag))
        target = ((deg[0] + i1, deg[1] + i2), t_tag)
        value = img.get(target)
        if value:
            vec[col] = value
    return vec


def identity_candidate(spec: AlgebraSpec) -> Candidate:
    one = spec.field.one
    return lambda e: {e: one}


def shifted_identity(spec: AlgebraSpec, shift: Degree) -> Candidate:
    """phi(e_m) = e_{m+shift} with coefficient 1 (generally NOT a
    half-derivation; useful as a negative control)."""
    one = spec.field.one

    def image(e: BasisElem) -> Element:
        deg, tag = e
        tdeg = (deg[0] + shift[0], deg[1] + shift[1])
        if tdeg == (0, 0):
            return {}
        return {(tdeg, tag): one}

    return image


def thm_f_family(spec: AlgebraSpec, shift: Degree, kappa, center_coeffs: dict) -> Candidate:
    """Single-shift root-of-unity Virasoro family: a constant kappa on the
    non-central degrees, arbitrary per-degree coefficients on the central
    lattice (tZ)^2, with shift in (tZ)^2 u {0}."""
    if spec.variant != VIRASORO_ROOT:
        raise UnsupportedVariantError("family defined on the root-of-unity Virasoro variant")
    t = spec.t
    if shift[0] % t or shift[1] % t:
        raise InvalidShiftError(f"shift {shift} not in the (t={t}) lattice")
    for deg in center_coeffs:
        if spec.gamma_class(deg) != GAMMA1:
            raise ValueError(f"center coefficient at non-central degree {deg}")
    zero = spec.field.zero

    def image(e: BasisElem) -> Element:
        deg, tag = e
        tdeg = (deg[0] + shift[0], deg[1] + shift[1])
        if tdeg == (0, 0):
            return {}
        coeff = center_coeffs.get(deg, zero) if spec.gamma_class(deg) == GAMMA1 else kappa
        if not coeff:
            return {}
        return {(tdeg, tag): coeff}

    return image


def thm_h_family(spec: AlgebraSpec, a, c) -> Candidate:
    """Shift-0 root-of-unity torus family: phi(x_m) = a x_m and
    phi(D_m) = c x_m + a D_m on the central lattice, a D_m off it."""
    if spec.variant != TORUS_ROOT:
        raise UnsupportedVariantError("family defined on the root-of-unity torus")

    def image(e: BasisElem) -> Element:
        deg, tag = e
        if tag == TAG_X:
            return {e: a} if a else {}
        out: Element = {}
        if a:
            out[(deg, TAG_D)] = a
        if c and spec.gamma_class(deg) == GAMMA1:
            out[(deg, TAG_X)] = c
        return out

    return image


def torus_generic_family(spec: AlgebraSpec, c, d) -> Candidate:
    """Shift-0 generic torus family: phi(x_m) = (c+d) x_m,
    phi(D_m) = c x_m + d D_m."""
    if spec.variant != TORUS_GENERIC:
        raise UnsupportedVariantError("family defined on the generic torus")
    cd = c + d

    def image(e: BasisElem) -> Element:
        deg, tag = e
        if tag == TAG_X:
            return {e: cd} if cd else {}
        out: Element = {}
        if c:
            out[(deg, TAG_X)] = c
        if d:
            out[(deg, TAG_D)] = d
        return out

    return image
