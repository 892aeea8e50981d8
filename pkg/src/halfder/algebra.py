"""The four Z^2-graded Lie algebras, defined by their structure constants.

Degrees are integer pairs m = (m1, m2); the degree (0, 0) is excluded from
every basis and all conventions send it to zero.  Basis elements are pairs
(degree, tag) with tag "L" for the Virasoro-like variants and "X" / "D" for
the quantum-torus variants.  The bracket tables, with
lambda(m, n) = q^(m2*n1) - q^(m1*n2) and det2(m, n) = m2*n1 - m1*n2:

  virasoro-generic / virasoro-root:
      [L_m, L_n] = lambda(m, n) L_{m+n}
  torus-generic:
      [x_m, x_n] = lambda(m, n) x_{m+n}
      [D_m, x_n] = lambda(m, n) x_{m+n}      [x_m, D_n] = -lambda(n, m) x_{m+n}
      [D_m, D_n] = lambda(m, n) D_{m+n}
  torus-root (t-th root of unity; Gamma1 = (tZ)^2 \\ {0}, Gamma2 = rest):
      [x_m, x_n] = lambda(m, n) x_{m+n}
      [D_m, x_n] = h(m, n) x_{m+n}           [x_m, D_n] = -h(n, m) x_{m+n}
      [D_m, D_n] = g(m, n) D_{m+n}
      h(m, n) = det2(m, n) if m in Gamma1 else lambda(m, n)
      g(m, n) = lambda(m, n) if m, n both in Gamma2 else det2(m, n)

Sparse elements are plain dicts {basis_elem: scalar} with no stored zeros.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Optional

from .scalars import (
    CyclotomicField,
    GenericQField,
    Scalar,
    ScalarField,
    as_rational,
)

Degree = tuple[int, int]
BasisElem = tuple[Degree, str]
Element = dict  # BasisElem -> Scalar, zero coefficients absent

TAG_L, TAG_X, TAG_D = "L", "X", "D"
_TAG_ORDER = {TAG_L: 0, TAG_X: 0, TAG_D: 1}

VIRASORO_GENERIC = "virasoro-generic"
VIRASORO_ROOT = "virasoro-root"
TORUS_GENERIC = "torus-generic"
TORUS_ROOT = "torus-root"
VARIANTS = (VIRASORO_GENERIC, VIRASORO_ROOT, TORUS_GENERIC, TORUS_ROOT)

GAMMA1 = 1
GAMMA2 = 2


class UnsupportedVariantError(Exception):
    """Operation invoked on an algebra variant it does not apply to."""


def elem_key(e: BasisElem):
    return (e[0][0], e[0][1], _TAG_ORDER[e[1]])


def det2(m: Degree, n: Degree) -> int:
    """m2*n1 - m1*n2; the first argument plays the lower row."""
    return m[1] * n[0] - m[0] * n[1]


class Window:
    """All degrees m != (0,0) with |m1| <= N and |m2| <= N."""

    __slots__ = ("N", "points", "point_set")

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("window size must be >= 1")
        self.N = N
        self.points = tuple(
            (m1, m2)
            for m1 in range(-N, N + 1)
            for m2 in range(-N, N + 1)
            if (m1, m2) != (0, 0)
        )
        self.point_set = frozenset(self.points)

    def __contains__(self, deg: Degree) -> bool:
        return deg in self.point_set

    def __repr__(self):
        return f"Window(N={self.N})"


class AlgebraSpec:
    """One of the four algebra variants plus its scalar field."""

    __slots__ = ("variant", "field", "t")

    def __init__(self, variant: str, field: ScalarField, t: Optional[int] = None):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        root = variant in (VIRASORO_ROOT, TORUS_ROOT)
        if root:
            if not isinstance(field, CyclotomicField):
                raise ValueError("root-of-unity variants need a cyclotomic field")
            t = field.t
        else:
            if not isinstance(field, GenericQField):
                raise ValueError("generic variants need a generic-q field")
            if t is not None:
                raise ValueError("t only applies to root-of-unity variants")
        self.variant = variant
        self.field = field
        self.t = t

    # -- constructors -------------------------------------------------------

    @classmethod
    def virasoro_generic(cls, q="2") -> "AlgebraSpec":
        return cls(VIRASORO_GENERIC, GenericQField(q))

    @classmethod
    def virasoro_root(cls, t: int) -> "AlgebraSpec":
        return cls(VIRASORO_ROOT, CyclotomicField(t))

    @classmethod
    def torus_generic(cls, q="2") -> "AlgebraSpec":
        return cls(TORUS_GENERIC, GenericQField(q))

    @classmethod
    def torus_root(cls, t: int) -> "AlgebraSpec":
        return cls(TORUS_ROOT, CyclotomicField(t))

    # -- classification helpers ---------------------------------------------

    @property
    def is_root(self) -> bool:
        return self.variant in (VIRASORO_ROOT, TORUS_ROOT)

    @property
    def is_torus(self) -> bool:
        return self.variant in (TORUS_GENERIC, TORUS_ROOT)

    @property
    def tags(self) -> tuple[str, ...]:
        return (TAG_X, TAG_D) if self.is_torus else (TAG_L,)

    def basis(self, window: Window) -> list[BasisElem]:
        return [(m, tag) for m in window.points for tag in self.tags]

    # -- structure constants -------------------------------------------------

    def lambda_coeff(self, m: Degree, n: Degree) -> Scalar:
        """q^(m2*n1) - q^(m1*n2)."""
        f = self.field
        return f.qpow(m[1] * n[0]) - f.qpow(m[0] * n[1])

    def gamma_class(self, m: Degree) -> int:
        if not self.is_root:
            raise UnsupportedVariantError("lattice classes need a root-of-unity variant")
        t = self.t
        return GAMMA1 if (m[0] % t == 0 and m[1] % t == 0) else GAMMA2

    def h_coeff(self, m: Degree, n: Degree) -> Scalar:
        if self.variant != TORUS_ROOT:
            raise UnsupportedVariantError("h is defined for the root-of-unity torus only")
        if self.gamma_class(m) == GAMMA1:
            return self.field.from_int(det2(m, n))
        return self.lambda_coeff(m, n)

    def g_coeff(self, m: Degree, n: Degree) -> Scalar:
        if self.variant != TORUS_ROOT:
            raise UnsupportedVariantError("g is defined for the root-of-unity torus only")
        if self.gamma_class(m) == GAMMA2 and self.gamma_class(n) == GAMMA2:
            return self.lambda_coeff(m, n)
        return self.field.from_int(det2(m, n))

    def bracket(self, a: BasisElem, b: BasisElem) -> Element:
        """Lie bracket of two basis elements as a sparse element.

        Results at degree (0,0) and coefficient-zero results are {}.
        """
        (m, ta), (n, tb) = a, b
        s = (m[0] + n[0], m[1] + n[1])
        torus = self.is_torus
        if torus:
            if ta == TAG_L or tb == TAG_L:
                raise UnsupportedVariantError("tag L is not part of the torus variants")
        elif ta != TAG_L or tb != TAG_L:
            raise UnsupportedVariantError("torus tags on a Virasoro-like variant")
        if s == (0, 0):
            return {}
        if not torus:
            coeff = self.lambda_coeff(m, n)
            tag = TAG_L
        elif self.variant == TORUS_GENERIC:
            if ta == TAG_X and tb == TAG_D:
                coeff = -self.lambda_coeff(n, m)
            else:
                coeff = self.lambda_coeff(m, n)
            tag = TAG_D if (ta == TAG_D and tb == TAG_D) else TAG_X
        else:  # torus-root
            if ta == TAG_X and tb == TAG_X:
                coeff = self.lambda_coeff(m, n)
                tag = TAG_X
            elif ta == TAG_D and tb == TAG_X:
                coeff = self.h_coeff(m, n)
                tag = TAG_X
            elif ta == TAG_X and tb == TAG_D:
                coeff = -self.h_coeff(n, m)
                tag = TAG_X
            else:
                coeff = self.g_coeff(m, n)
                tag = TAG_D
        if not coeff:
            return {}
        return {(s, tag): coeff}

    def bracket_elem(self, a: BasisElem, x: Element) -> Element:
        """[a, x] for a sparse element x, extended bilinearly."""
        out: Element = {}
        for e, c in x.items():
            for f, d in self.bracket(a, e).items():
                acc = out.get(f)
                v = c * d if acc is None else acc + c * d
                if v:
                    out[f] = v
                elif acc is not None:
                    del out[f]
        return out

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        if self.is_root:
            return {"variant": self.variant, "t": self.t}
        return {"variant": self.variant, "q": str(self.field.q0)}

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraSpec":
        variant = data.get("variant")
        if variant in (VIRASORO_ROOT, TORUS_ROOT):
            return cls(variant, CyclotomicField(int(data["t"])))
        if variant in (VIRASORO_GENERIC, TORUS_GENERIC):
            return cls(variant, GenericQField(data.get("q", "2")))
        raise ValueError(f"unknown variant {variant!r}")

    def __repr__(self):
        extra = f", t={self.t}" if self.is_root else f", q={self.field.q0}"
        return f"AlgebraSpec({self.variant}{extra})"


# ---------------------------------------------------------------------------
# Sparse element helpers
# ---------------------------------------------------------------------------

def elem_iadd(dst: Element, src: Element, scale=None) -> Element:
    """dst += scale * src in place (scale None means 1); zeros are pruned."""
    for e, c in src.items():
        v = c if scale is None else c * scale
        acc = dst.get(e)
        if acc is None:
            if v:
                dst[e] = v
        else:
            acc = acc + v
            if acc:
                dst[e] = acc
            else:
                del dst[e]
    return dst


def elem_scale(x: Element, scale) -> Element:
    if not scale:
        return {}
    return {e: c * scale for e, c in x.items()}


def elem_str(x: Element) -> str:
    from .scalars import scalar_to_str

    if not x:
        return "0"
    parts = []
    for e in sorted(x, key=elem_key):
        parts.append(f"{scalar_to_str(x[e])}*{e[1]}{e[0]}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# Lie-axiom verification
# ---------------------------------------------------------------------------

@dataclass
class JacobiReport:
    triples_checked: int = 0
    pairs_checked: int = 0
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def worker_count(explicit: Optional[int] = None) -> int:
    """Worker count for parallel verification, capped by HALFDER_THREADS."""
    cap = os.environ.get("HALFDER_THREADS")
    if explicit is None:
        explicit = 1
    n = max(1, explicit)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def _jacobi_triple(spec: AlgebraSpec, a: BasisElem, b: BasisElem, c: BasisElem) -> Element:
    res: Element = {}
    elem_iadd(res, spec.bracket_elem(a, spec.bracket(b, c)))
    elem_iadd(res, spec.bracket_elem(b, spec.bracket(c, a)))
    elem_iadd(res, spec.bracket_elem(c, spec.bracket(a, b)))
    return res


def jacobi_check(spec: AlgebraSpec, window: Window, workers: Optional[int] = None) -> JacobiReport:
    """Check antisymmetry on all basis pairs and the Jacobi identity on every
    basis triple whose pairwise and nested bracket degrees stay in the window
    (or hit degree zero).  Violations are returned as data, not raised.
    """
    report = JacobiReport()
    basis = spec.basis(window)
    wset = window.point_set

    def admissible(d: Degree) -> bool:
        return d == (0, 0) or d in wset

    # antisymmetry on unordered pairs (equal pairs included)
    for i, a in enumerate(basis):
        for b in basis[i:]:
            report.pairs_checked += 1
            res = dict(spec.bracket(a, b))
            elem_iadd(res, spec.bracket(b, a))
            if res:
                report.violations.append(("antisymmetry", a, b, elem_str(res)))

    # Jacobi on unordered triples; the residual is alternating once
    # antisymmetry holds, and antisymmetry was checked exhaustively above
    degs = window.points
    triples = []
    for i, m in enumerate(degs):
        for j in range(i, len(degs)):
            n = degs[j]
            mn = (m[0] + n[0], m[1] + n[1])
            if not admissible(mn):
                continue
            for k in range(j, len(degs)):
                p = degs[k]
                if not admissible((n[0] + p[0], n[1] + p[1])):
                    continue
                if not admissible((m[0] + p[0], m[1] + p[1])):
                    continue
                if not admissible((mn[0] + p[0], mn[1] + p[1])):
                    continue
                triples.append((m, n, p))

    tags = spec.tags

    def check_chunk(chunk):
        found = []
        count = 0
        for (m, n, p) in chunk:
            for ta in tags:
                for tb in tags:
                    for tc in tags:
                        a, b, c = (m, ta), (n, tb), (p, tc)
                        count += 1
                        res = _jacobi_triple(spec, a, b, c)
                        if res:
                            found.append(("jacobi", a, b, c, elem_str(res)))
        return count, found

    nworkers = worker_count(workers)
    if nworkers <= 1 or len(triples) < 64:
        count, found = check_chunk(triples)
        report.triples_checked += count
        report.violations.extend(found)
    else:
        step = (len(triples) + nworkers - 1) // nworkers
        chunks = [triples[i : i + step] for i in range(0, len(triples), step)]
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            for count, found in pool.map(check_chunk, chunks):
                report.triples_checked += count
                report.violations.extend(found)
    report.violations.sort(key=lambda v: str(v))
    return report


# ---------------------------------------------------------------------------
# Generator relations of the generic quantum torus
# ---------------------------------------------------------------------------

def lemma41_relations(spec: AlgebraSpec) -> list[tuple[str, bool]]:
    """Evaluate both sides of the ten defining relations of the generic
    torus generators and report exact equality per relation."""
    if spec.variant != TORUS_GENERIC:
        raise UnsupportedVariantError("generator relations apply to the generic torus")
    f = spec.field
    q = f.qpow(1)
    qi = f.qpow(-1)
    one = f.one

    def x(m1, m2):
        return ((m1, m2), TAG_X)

    def D(m1, m2):
        return ((m1, m2), TAG_D)

    def _nested(spec, a, b, c):
        # [[a, b], c]
        inner = spec.bracket(a, b)
        out: Element = {}
        for e, coeff in inner.items():
            elem_iadd(out, spec.bracket(e, c), coeff)
        return out

    checks: list[tuple[str, Element, Element]] = [
        ("[x(1,0), x(-1,0)] = 0", spec.bracket(x(1, 0), x(-1, 0)), {}),
        ("[x(0,1), x(0,-1)] = 0", spec.bracket(x(0, 1), x(0, -1)), {}),
        ("[D(1,0), D(-1,0)] = 0", spec.bracket(D(1, 0), D(-1, 0)), {}),
        ("[D(0,1), D(0,-1)] = 0", spec.bracket(D(0, 1), D(0, -1)), {}),
        (
            "[[x(1,0), x(0,1)], x(-1,0)] = (1-q)(q^-1-1) x(0,1)",
            _nested(spec, x(1, 0), x(0, 1), x(-1, 0)),
            {x(0, 1): (one - q) * (qi - one)},
        ),
        (
            "[[x(1,0), x(0,-1)], x(-1,0)] = (1-q^-1)(q-1) x(0,-1)",
            _nested(spec, x(1, 0), x(0, -1), x(-1, 0)),
            {x(0, -1): (one - qi) * (q - one)},
        ),
        (
            "[[x(0,1), x(1,0)], x(0,-1)] = (q-1)(1-q^-1) x(1,0)",
            _nested(spec, x(0, 1), x(1, 0), x(0, -1)),
            {x(1, 0): (q - one) * (one - qi)},
        ),
        (
            "[[x(0,1), x(-1,0)], x(0,-1)] = (q^-1-1)(1-q) x(-1,0)",
            _nested(spec, x(0, 1), x(-1, 0), x(0, -1)),
            {x(-1, 0): (qi - one) * (one - q)},
        ),
        (
            "[[D(1,0), D(0,1)], D(-1,0)] = (1-q)(q^-1-1) D(0,1)",
            _nested(spec, D(1, 0), D(0, 1), D(-1, 0)),
            {D(0, 1): (one - q) * (qi - one)},
        ),
        (
            "[[D(1,0), D(0,-1)], D(-1,0)] = (1-q^-1)(q-1) D(0,-1)",
            _nested(spec, D(1, 0), D(0, -1), D(-1, 0)),
            {D(0, -1): (one - qi) * (q - one)},
        ),
        (
            "[[D(0,1), D(1,0)], D(0,-1)] = (q-1)(1-q^-1) D(1,0)",
            _nested(spec, D(0, 1), D(1, 0), D(0, -1)),
            {D(1, 0): (q - one) * (one - qi)},
        ),
        (
            "[[D(0,1), D(-1,0)], D(0,-1)] = (q^-1-1)(1-q) D(-1,0)",
            _nested(spec, D(0, 1), D(-1, 0), D(0, -1)),
            {D(-1, 0): (qi - one) * (one - q)},
        ),
    ]
    results = []
    for name, lhs, rhs in checks:
        diff = dict(lhs)
        elem_iadd(diff, {e: -c for e, c in rhs.items()})
        results.append((name, not diff))
    return results
