"""Sparse exact Gaussian elimination over a field.

Rows and vectors are dicts {column index: scalar} with no stored zeros;
scalars only need +, -, *, division and truthiness (gmpy2 rationals and
CycloElem both qualify).  Pivots are always the smallest column index, so
the reduced echelon form, and everything derived from it, is canonical: it
does not depend on the order rows are fed in.
"""

from __future__ import annotations

from typing import Iterable, Optional

SparseRow = dict


def _sub_scaled(row: SparseRow, pivot_row: SparseRow, factor, skip) -> None:
    # row -= factor * pivot_row, in place; the caller already removed the
    # entry at `skip` (the pivot's leading column), which cancels exactly
    for c, v in pivot_row.items():
        if c == skip:
            continue
        fv = factor * v
        cur = row.get(c)
        if cur is None:
            if fv:
                row[c] = -fv
        else:
            cur = cur - fv
            if cur:
                row[c] = cur
            else:
                del row[c]


def _normalize(row: SparseRow, lead) -> SparseRow:
    inv = 1 / row[lead]
    return {c: v * inv for c, v in row.items()}


def rref(rows: Iterable[SparseRow]) -> dict:
    """Reduced row echelon form as {pivot column: normalized row}."""
    pivots: dict = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = _normalize(row, lead)
                break
            _sub_scaled(row, piv, row.pop(lead), lead)
    # back-substitute so every pivot column appears in exactly one row
    for lead in sorted(pivots, reverse=True):
        piv = pivots[lead]
        for other_lead, other in pivots.items():
            if other_lead < lead and lead in other:
                _sub_scaled(other, piv, other.pop(lead), lead)
    return pivots


def kernel_basis(pivots: dict, ncols: int, one) -> list[SparseRow]:
    """Canonical kernel basis of the system with the given RREF.

    One vector per free column, re-echelonized so leading coefficients are 1;
    vectors come out sorted by leading column.  `one` is the field's
    multiplicative identity (sets the scalar type of unit coordinates).
    """
    pivot_cols = set(pivots)
    vectors = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec: SparseRow = {free: one}
        for lead, row in pivots.items():
            coeff = row.get(free)
            if coeff:
                vec[lead] = -coeff
        vectors.append(vec)
    reduced = rref(vectors)
    return [reduced[lead] for lead in sorted(reduced)]


def rank(vectors: Iterable[SparseRow]) -> int:
    return len(rref(vectors))


def restrict(vec: SparseRow, keep) -> SparseRow:
    return {c: v for c, v in vec.items() if c in keep}


def residual(row: SparseRow, vec: SparseRow):
    """Dot product of a constraint row with a vector (None when zero)."""
    acc = None
    for c, coeff in row.items():
        v = vec.get(c)
        if v is None:
            continue
        term = coeff * v
        acc = term if acc is None else acc + term
    if acc is not None and not acc:
        return None
    return acc


def in_span(vec: SparseRow, basis: list[SparseRow]) -> bool:
    """Whether vec lies in the span of an echelonized basis."""
    by_lead = {min(b): b for b in basis if b}
    rem = dict(vec)
    while rem:
        lead = min(rem)
        b = by_lead.get(lead)
        if b is None:
            return False
        _sub_scaled(rem, b, rem.pop(lead), lead)
    return True


def solve_kernel(rows: Iterable[SparseRow], ncols: int, one, to_int=None) -> list[SparseRow]:
    """Exact kernel basis of a sparse system, optionally modular-assisted.

    With `to_int` (a ring homomorphism scalar -> Z/p together with the
    modulus, as returned by a field's modp_map), a cheap mod-p elimination
    first picks a subset of rows that spans the row space mod p.  Only those
    rows are eliminated exactly; every remaining row is then certified to be
    orthogonal to the computed kernel by exact dot products.  Certification
    failures (possible only for unlucky p) pull the offending rows into the
    exact elimination, so the result never depends on p.  The returned basis
    is the same canonical one `rref` + `kernel_basis` would produce.
    """
    rows = [r for r in rows if r]
    if to_int is None:
        return kernel_basis(rref(rows), ncols, one)
    mapper, p = to_int
    rows.sort(key=len)

    selected = []
    rest = []
    pivots_p: dict = {}
    try:
        for idx, row in enumerate(rows):
            r = {}
            for c, v in row.items():
                iv = mapper(v)
                if iv:
                    r[c] = iv
            while r:
                lead = min(r)
                piv = pivots_p.get(lead)
                if piv is None:
                    inv = pow(r[lead], p - 2, p)
                    pivots_p[lead] = {c: (v * inv) % p for c, v in r.items()}
                    selected.append(idx)
                    break
                f = r.pop(lead)
                for c, v in piv.items():
                    if c == lead:
                        continue
                    nv = (r.get(c, 0) - f * v) % p
                    if nv:
                        r[c] = nv
                    elif c in r:
                        del r[c]
            else:
                rest.append(idx)
    except ZeroDivisionError:
        return kernel_basis(rref(rows), ncols, one)

    active = [rows[i] for i in selected]
    for _ in range(3):
        kernel = kernel_basis(rref(active), ncols, one)
        bad = []
        for i in rest:
            row = rows[i]
            if any(residual(row, v) is not None for v in kernel):
                bad.append(i)
        if not bad:
            return kernel
        active.extend(rows[i] for i in bad)
        rest = [i for i in rest if i not in set(bad)]
    return kernel_basis(rref(rows), ncols, one)
