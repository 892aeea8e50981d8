"""Candidate commutative products and transposed Poisson verification.

A ProductTable stores a symmetric bilinear product on the windowed basis:
entries live on unordered element pairs, values are sparse elements whose
targets stay inside the window (degree-zero targets are the zero element and
are never stored).  Verification covers the three axioms:

  commutative   -- structural, by unordered storage
  associative   -- (A.B).C = A.(B.C) on triples whose intermediate products
                   are table entries
  compatibility -- 2 z.[x,y] = [z.x, y] + [x, z.y]

The triviality probe solves, shift by shift, for every symmetric product
satisfying the compatibility condition on the window.  Compatibility for a
fixed left factor z says exactly that y -> z.y is a windowed half-derivation
of shift deg(z) + s, so the probe couples the per-shift nullspaces computed
by `halfderiv` through the symmetry constraints; associativity is quadratic
in the product and is applied afterwards as a per-vector filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Optional

from . import linalg
from .algebra import (
    GAMMA1,
    GAMMA2,
    TAG_L,
    AlgebraSpec,
    BasisElem,
    Degree,
    Element,
    UnsupportedVariantError,
    VIRASORO_ROOT,
    Window,
    elem_iadd,
    elem_key,
    elem_str,
)
from .halfderiv import ShiftSolver, UnknownLayout


class InvalidCenterVectorError(Exception):
    """Center product target must be a central degree."""


def pair_key(a: BasisElem, b: BasisElem) -> tuple:
    return (a, b) if elem_key(a) <= elem_key(b) else (b, a)


class ProductTable:
    """Sparse symmetric product on window basis elements."""

    __slots__ = ("spec", "window", "entries")

    def __init__(self, spec: AlgebraSpec, window: Window):
        self.spec = spec
        self.window = window
        self.entries: dict = {}

    def set(self, a: BasisElem, b: BasisElem, value: Element) -> None:
        value = {e: c for e, c in value.items() if c}
        for (deg, _tag) in value:
            if deg not in self.window:
                raise ValueError(f"product target {deg} outside the window")
        key = pair_key(a, b)
        if value:
            self.entries[key] = value
        else:
            self.entries.pop(key, None)

    def add(self, a: BasisElem, b: BasisElem, value: Element) -> None:
        key = pair_key(a, b)
        cur = dict(self.entries.get(key, {}))
        elem_iadd(cur, value)
        self.set(a, b, cur)

    def get(self, a: BasisElem, b: BasisElem) -> Element:
        return self.entries.get(pair_key(a, b), {})

    def product_elem(self, a: BasisElem, x: Element) -> Element:
        """a . x for a sparse element x supported on the window."""
        out: Element = {}
        for e, c in x.items():
            elem_iadd(out, self.get(a, e), c)
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> list:
        return sorted(self.entries, key=lambda k: (elem_key(k[0]), elem_key(k[1])))

    def to_json(self) -> list:
        from .scalars import scalar_to_str

        out = []
        for (a, b) in self.support():
            terms = [
                {"degree": list(e[0]), "tag": e[1], "coeff": scalar_to_str(c)}
                for e, c in sorted(self.entries[(a, b)].items(), key=lambda kv: elem_key(kv[0]))
            ]
            out.append(
                {
                    "a": list(a[0]),
                    "a_tag": a[1],
                    "b": list(b[0]),
                    "b_tag": b[1],
                    "terms": terms,
                }
            )
        return out


# ---------------------------------------------------------------------------
# Axiom verification
# ---------------------------------------------------------------------------

@dataclass
class AxiomReport:
    commutativity_ok: bool = True
    associativity_checked: int = 0
    associativity_violations: list = dc_field(default_factory=list)
    compatibility_checked: int = 0
    compatibility_violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.commutativity_ok
            and not self.associativity_violations
            and not self.compatibility_violations
        )


def verify_axioms(spec: AlgebraSpec, window: Window, table: ProductTable) -> AxiomReport:
    """Check associativity and the compatibility condition exactly.

    Only triples that can produce a nonzero residual are evaluated: every
    term of either side involves a table entry, so candidate triples are
    enumerated from the table's support.  A triple never enumerated has both
    sides identically zero.
    """
    report = AxiomReport()
    basis = spec.basis(window)
    bracket = spec.bracket
    wset = window.point_set

    # associativity: (A.B).C - A.(B.C); commutativity makes the associator
    # antisymmetric under (A, C) swap, so canonicalize key(A) <= key(C)
    candidates = set()
    for (u, v) in table.entries:
        for (a, b) in ((u, v), (v, u)):
            for c in basis:
                trip = (a, b, c) if elem_key(a) <= elem_key(c) else (c, b, a)
                candidates.add(trip)
                trip = (c, a, b) if elem_key(c) <= elem_key(b) else (b, a, c)
                candidates.add(trip)
    for (a, b, c) in sorted(candidates, key=lambda t: tuple(map(elem_key, t))):
        report.associativity_checked += 1
        res = table.product_elem(c, table.get(a, b))
        elem_iadd(res, table.product_elem(a, table.get(b, c)), -spec.field.one)
        if res:
            report.associativity_violations.append((a, b, c, elem_str(res)))

    # compatibility 2 z.[x,y] = [z.x, y] + [x, z.y] on (z, {x, y}) with
    # deg x + deg y inside the window or zero
    def bracket_pairs_with_sum(target: BasisElem):
        tdeg = target[0]
        out = []
        for x in basis:
            ydeg = (tdeg[0] - x[0][0], tdeg[1] - x[0][1])
            if ydeg == (0, 0) or ydeg not in wset:
                continue
            for ytag in spec.tags:
                y = (ydeg, ytag)
                if elem_key(x) <= elem_key(y):
                    br = bracket(x, y)
                    if target in br:
                        out.append((x, y))
        return out

    comp_candidates = set()
    for (u, v) in table.entries:
        for (z, other) in ((u, v), (v, u)):
            # z . [x, y] hits the entry {z, other} when [x, y] lands on other
            for (x, y) in bracket_pairs_with_sum(other):
                comp_candidates.add((z, x, y))
            # [z.x, y] or [x, z.y] hits it when {z, x} or {z, y} is the entry
            for w in basis:
                sdeg = (other[0][0] + w[0][0], other[0][1] + w[0][1])
                if sdeg == (0, 0) or sdeg in wset:
                    x, y = (other, w) if elem_key(other) <= elem_key(w) else (w, other)
                    comp_candidates.add((z, x, y))

    one = spec.field.one
    for (z, x, y) in sorted(comp_candidates, key=lambda t: tuple(map(elem_key, t))):
        report.compatibility_checked += 1
        res: Element = {}
        for e, c in bracket(x, y).items():
            elem_iadd(res, table.get(z, e), c + c)
        for e, c in table.get(z, x).items():
            elem_iadd(res, bracket(e, y), -c)
        for e, c in table.get(z, y).items():
            elem_iadd(res, bracket(x, e), -c)
        if res:
            report.compatibility_violations.append((z, x, y, elem_str(res)))
    return report


# ---------------------------------------------------------------------------
# The root-of-unity Virasoro center products
# ---------------------------------------------------------------------------

def rank_one_center_product(
    spec: AlgebraSpec, window: Window, tau: Mapping, v: Degree
) -> ProductTable:
    """L_a . L_b = tau(a) tau(b) L_v with tau supported on the central
    lattice and v central: the canonical nonzero transposed Poisson product.
    """
    if spec.variant != VIRASORO_ROOT:
        raise UnsupportedVariantError("center products live on the root-of-unity Virasoro variant")
    if v not in window:
        raise InvalidCenterVectorError(f"target degree {v} outside the window")
    if spec.gamma_class(v) != GAMMA1:
        raise InvalidCenterVectorError(f"target degree {v} is not central")
    support = []
    for deg, coeff in tau.items():
        if spec.gamma_class(deg) != GAMMA1 or deg not in window:
            raise ValueError(f"tau must be supported on central window degrees, got {deg}")
        if coeff:
            support.append((deg, coeff))
    support.sort()
    table = ProductTable(spec, window)
    for i, (a, ca) in enumerate(support):
        for (b, cb) in support[i:]:
            table.set((a, TAG_L), (b, TAG_L), {(v, TAG_L): ca * cb})
    return table


@dataclass
class ThmGReport:
    pairs_checked: int = 0
    difference_violations: list = dc_field(default_factory=list)
    support_violations: list = dc_field(default_factory=list)
    family_violations: list = dc_field(default_factory=list)
    quadratic_checked: int = 0
    quadratic_violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.difference_violations
            or self.support_violations
            or self.family_violations
            or self.quadratic_violations
        )


def thmG_check(spec: AlgebraSpec, window: Window, table: ProductTable) -> ThmGReport:
    """Necessary conditions for a product to extend to a transposed Poisson
    structure on the root-of-unity Virasoro variant:

      (a) L_m . L_n = 0 whenever m - n is non-central;
      (b) for non-central m, n with central difference, the product is
          supported on central shifts of n and its shift-coefficient family
          does not depend on the partner n;
      (c) for central m, n the support condition again, plus the quadratic
          sum conditions coming from associativity on central triples.
    """
    if spec.variant != VIRASORO_ROOT:
        raise UnsupportedVariantError("the product classification applies to the root-of-unity Virasoro variant")
    report = ThmGReport()
    t = spec.t

    def central_diff(m: Degree, n: Degree) -> bool:
        return (m[0] - n[0]) % t == 0 and (m[1] - n[1]) % t == 0

    # (a) - and the support conditions of (b)/(c)
    for (A, B) in table.support():
        report.pairs_checked += 1
        m, n = A[0], B[0]
        value = table.entries[(A, B)]
        if not central_diff(m, n):
            report.difference_violations.append((A, B, elem_str(value)))
            continue
        for (u, _tag) in value:
            if not (central_diff(u, n) and central_diff(u, m)):
                report.support_violations.append((A, B, u))

    # (b) partner-independence of the shift families on non-central degrees
    gamma2 = [m for m in window.points if spec.gamma_class(m) == GAMMA2]
    fams: dict = {}
    for m in gamma2:
        fam = None
        ref_partner = None
        for n in gamma2:
            if not central_diff(m, n):
                continue
            entry = table.get((m, TAG_L), (n, TAG_L))
            shifts = {
                (u[0] - n[0], u[1] - n[1]): c for (u, _tag), c in entry.items()
            }
            if fam is None:
                fam, ref_partner = shifts, n
            elif shifts != fam:
                report.family_violations.append((m, ref_partner, n))
        fams[m] = fam or {}

    # (c) quadratic sums on central triples
    gamma1 = [m for m in window.points if spec.gamma_class(m) == GAMMA1]

    def alpha(m: Degree, n: Degree, i: Degree):
        entry = table.get((m, TAG_L), (n, TAG_L))
        return entry.get(((n[0] + i[0], n[1] + i[1]), TAG_L))

    zero = spec.field.zero
    for m in gamma1:
        for n in gamma1:
            for r in gamma1:
                if m == n == r:
                    continue
                sums: dict = {}
                entry_mn = table.get((m, TAG_L), (n, TAG_L))
                for (u, _tag), c_i in entry_mn.items():
                    # u = n + i; second factor indexed by j with target r + j
                    entry2 = table.get((u, TAG_L), (r, TAG_L))
                    for (w, _tag2), c_j in entry2.items():
                        j = (w[0] - r[0], w[1] - r[1])
                        sums[j] = sums.get(j, zero) + c_i * c_j
                sums2: dict = {}
                entry_nr = table.get((n, TAG_L), (r, TAG_L))
                for (u, _tag), c_i in entry_nr.items():
                    entry2 = table.get((u, TAG_L), (m, TAG_L))
                    for (w, _tag2), c_j in entry2.items():
                        j = (w[0] - m[0], w[1] - m[1])
                        sums2[j] = sums2.get(j, zero) + c_i * c_j
                report.quadratic_checked += 1
                for j, s in sums.items():
                    if s and j != (-m[0], -m[1]) and j != (-r[0], -r[1]):
                        report.quadratic_violations.append(("left", m, n, r, j))
                for j, s in sums2.items():
                    if s and j != (-m[0], -m[1]) and j != (-r[0], -r[1]):
                        report.quadratic_violations.append(("right", m, n, r, j))
    return report



# ---------------------------------------------------------------------------
# Triviality probe
# ---------------------------------------------------------------------------

@dataclass
class ProbeReport:
    full_dim: int = 0
    interior_dim: int = 0
    per_shift: dict = dc_field(default_factory=dict)
    tables: list = dc_field(default_factory=list)  # (shift, index, ProductTable)
    associativity_failures: list = dc_field(default_factory=list)


def default_probe_shifts(spec: AlgebraSpec) -> int:
    return spec.t if spec.is_root else 2


def _window_target_vectors(nb) -> list:
    """Restrict a half-derivation nullspace to maps whose targets stay in
    the window (product tables may not leave it; graded maps may).

    Forbidden coordinates are moved to the front of the column order and the
    basis re-echelonized: rows pivoting in the allowed region have no
    forbidden entries at all and span exactly the pinned subspace.
    """
    lay = nb.layout
    i1, i2 = lay.shift
    wset = lay.window.point_set
    forbidden = {
        col
        for (deg, _st, _tt), col in lay.index.items()
        if (deg[0] + i1, deg[1] + i2) not in wset
    }
    if not forbidden:
        return nb.vectors
    if not any(c in forbidden for vec in nb.vectors for c in vec):
        return nb.vectors
    mapped = [
        {((0, c) if c in forbidden else (1, c)): v for c, v in vec.items()}
        for vec in nb.vectors
    ]
    pivots = linalg.rref(mapped)
    kept = [pivots[lead] for lead in sorted(pivots) if lead[0] == 1]
    return [{c: v for (_flag, c), v in row.items()} for row in kept]


def triviality_probe(
    spec: AlgebraSpec,
    window: Window,
    M: int,
    shift_cap: Optional[int] = None,
    solver: Optional[ShiftSolver] = None,
) -> ProbeReport:
    """Solve for all symmetric products satisfying the compatibility
    condition on the window, product shift by product shift.

    For a fixed product shift s, compatibility with left factor z is the
    statement that the column map y -> z.y lies in the windowed
    half-derivation nullspace of shift deg(z) + s; the remaining linear
    condition is symmetry of the table.  Associativity is quadratic and is
    reported per basis vector instead of being imposed.
    """
    cap = default_probe_shifts(spec) if shift_cap is None else shift_cap
    solver = solver or ShiftSolver(spec, window)
    report = ProbeReport()
    basis = spec.basis(window)
    basis.sort(key=elem_key)
    one = spec.field.one

    shifts = [
        (s1, s2)
        for s1 in range(-cap, cap + 1)
        for s2 in range(-cap, cap + 1)
    ]
    pinned_cache: dict = {}

    def pinned(shift):
        got = pinned_cache.get(shift)
        if got is None:
            nb = solver.basis_at(shift)
            got = pinned_cache[shift] = (nb.layout, _window_target_vectors(nb))
        return got

    for s in sorted(shifts):
        # columns: nullspace coordinates per left factor with nonzero space
        col_of: dict = {}
        spaces: dict = {}
        for A in basis:
            shift = (A[0][0] + s[0], A[0][1] + s[1])
            layout, vectors = pinned(shift)
            if vectors:
                spaces[A] = (layout, vectors)
                for k in range(len(vectors)):
                    col_of[(A, k)] = len(col_of)
        if not col_of:
            report.per_shift[s] = (0, 0)
            continue

        nz_elems = sorted(spaces, key=elem_key)
        rows = []
        seen_pairs = set()
        for A in nz_elems:
            layA, vecsA = spaces[A]
            for B in basis:
                if A == B:
                    continue
                key = pair_key(A, B)
                if key in seen_pairs:
                    continue
                seen_pairs.add(key)
                other = spaces.get(B)
                for tgt in spec.tags:
                    row: dict = {}
                    idx = layA.index.get((B[0], B[1], tgt))
                    if idx is not None:
                        for k, vec in enumerate(vecsA):
                            coeff = vec.get(idx)
                            if coeff:
                                row[col_of[(A, k)]] = coeff
                    if other is not None:
                        layB, vecsB = other
                        idx = layB.index.get((A[0], A[1], tgt))
                        if idx is not None:
                            for k, vec in enumerate(vecsB):
                                coeff = vec.get(idx)
                                if coeff:
                                    col = col_of[(B, k)]
                                    cur = row.get(col)
                                    nv = -coeff if cur is None else cur - coeff
                                    if nv:
                                        row[col] = nv
                                    else:
                                        del row[col]
                    if row:
                        rows.append(row)
        kernel = linalg.solve_kernel(rows, len(col_of), one, None)

        tables = []
        for u in kernel:
            table = ProductTable(spec, window)
            for A in nz_elems:
                layA, vecsA = spaces[A]
                column: dict = {}
                for k, vec in enumerate(vecsA):
                    c = u.get(col_of[(A, k)])
                    if c:
                        for idx, val in vec.items():
                            cur = column.get(idx)
                            nv = val * c if cur is None else cur + val * c
                            if nv:
                                column[idx] = nv
                            elif cur is not None:
                                del column[idx]
                entries = layA.entries
                i1, i2 = layA.shift
                for idx, val in column.items():
                    (deg, s_tag, t_tag) = entries[idx]
                    B = (deg, s_tag)
                    if elem_key(B) < elem_key(A):
                        continue  # stored when scanning from the B side
                    target = ((deg[0] + i1, deg[1] + i2), t_tag)
                    table.add(A, B, {target: val})
            tables.append(table)

        # interior restriction: coordinates with both factors inside M
        restricted = []
        for table in tables:
            vec = {}
            for (A, B), value in table.entries.items():
                if max(abs(A[0][0]), abs(A[0][1])) > M:
                    continue
                if max(abs(B[0][0]), abs(B[0][1])) > M:
                    continue
                for e, c in value.items():
                    vec[(A, B, e)] = c
            if vec:
                restricted.append(vec)
        interior = linalg.rank(restricted)
        report.per_shift[s] = (len(kernel), interior)
        report.full_dim += len(kernel)
        report.interior_dim += interior
        for idx, table in enumerate(tables):
            report.tables.append((s, idx, table))
            axioms = verify_axioms(spec, window, table)
            if axioms.associativity_violations:
                report.associativity_failures.append((s, idx, len(axioms.associativity_violations)))
    return report
