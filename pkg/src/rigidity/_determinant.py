"""Determinant engines for Sylvester matrices of sparse polynomials.

Two paths compute the same expansion-by-minors dynamic program over
column bitmasks (one level per row, minors keyed by the set of used
columns):

* a dict path working on {packed exponent key: coeff} dicts, used for
  small determinants and whenever the fast path does not apply;
* an array path that repacks exponents into per-determinant bit fields
  inside a single uint64 and runs the term merging through numpy radix
  sorts and segmented sums, with exactness guaranteed by tracked
  coefficient bounds (any risk of exceeding int64 falls back to dicts).

Both honour the Limits caps and raise ResourceExhausted identically, so
an over-budget elimination aborts the same way regardless of path.
"""
from __future__ import annotations

import math

from .polyring import Limits, MultiPoly, PolyError, ResourceExhausted

try:
    import numpy as np
except ImportError:  # pragma: no cover
    np = None

_INT64_MAX = (1 << 62) - 1  # headroom under the true 2^63-1
_CHUNK_ROWS = 1 << 24


def _parity(order) -> int:
    inv = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                inv ^= 1
    return inv


def _row_weight(row) -> int:
    return sum(len(d) for d in row.values())


def det_minors(rows, dim: int, nvars: int, limits: Limits) -> dict:
    """Determinant of a sparse polynomial matrix as a term dict.

    rows: list of {column: term dict} in the caller's 8-bit packing with
    nvars fields.  Raises ResourceExhausted when limits are exceeded.
    """
    if len(rows) != dim:
        raise PolyError("matrix is not square")
    for row in rows:
        if not row:
            return {}
    arr = None
    if np is not None:
        arr = _ArrayPlan.build(rows, dim, nvars, limits)
    if arr is not None:
        try:
            return arr.run()
        except _Int64Risk:
            pass  # coefficient bounds got too close to int64; redo exactly
    return _det_dict(rows, dim, nvars, limits)


# -- dict path -------------------------------------------------------------


def _det_dict(rows, dim: int, nvars: int, limits: Limits) -> dict:
    # big rows first so hopeless computations hit the caps early
    order = sorted(range(dim), key=lambda r: -_row_weight(rows[r]))
    sign0 = -1 if _parity(order) else 1
    level = {0: {0: sign0}}
    live = 1
    for r in order:
        row = rows[r]
        groups: dict[int, list] = {}
        for mask, minor in level.items():
            for c, ent in row.items():
                if mask >> c & 1:
                    continue
                s = -1 if (mask >> (c + 1)).bit_count() & 1 else 1
                groups.setdefault(mask | (1 << c), []).append((minor, ent, s))
        nxt: dict[int, dict] = {}
        nxt_total = 0
        for tgt, prods in groups.items():
            acc: dict[int, int] = {}
            ops = 0
            for minor, ent, s in prods:
                if len(minor) < len(ent):
                    small, big = minor, ent
                else:
                    small, big = ent, minor
                for ks, cs in small.items():
                    css = cs * s
                    for kb, cb in big.items():
                        k = ks + kb
                        t = acc.get(k, 0) + css * cb
                        if t:
                            acc[k] = t
                        else:
                            del acc[k]
                    ops += len(big)
                    if ops >= 4096:
                        ops = 0
                        if len(acc) > limits.max_terms:
                            raise ResourceExhausted(
                                "determinant minor", len(acc), limits.max_terms
                            )
                        if live + nxt_total + len(acc) > limits.max_total_terms:
                            raise ResourceExhausted(
                                "determinant live terms",
                                live + nxt_total + len(acc),
                                limits.max_total_terms,
                            )
            if acc:
                nxt[tgt] = acc
                nxt_total += len(acc)
        level = nxt
        live = nxt_total
        if not level:
            return {}
    return level.get((1 << dim) - 1, {})


# -- array path ------------------------------------------------------------


class _Int64Risk(Exception):
    pass


class _Entry:
    __slots__ = ("keys", "coeffs", "max_abs", "l1")

    def __init__(self, keys, coeffs, max_abs, l1):
        self.keys = keys
        self.coeffs = coeffs
        self.max_abs = max_abs
        self.l1 = l1


class _Minor:
    __slots__ = ("keys", "coeffs", "max_abs")

    def __init__(self, keys, coeffs, max_abs):
        self.keys = keys
        self.coeffs = coeffs
        self.max_abs = max_abs


def _field_matrix(keys, nvars: int):
    buf = b"".join(k.to_bytes(nvars, "big") for k in keys)
    return np.frombuffer(buf, dtype=np.uint8).reshape(len(keys), nvars)


def _dict_max_degrees(d: dict, nvars: int):
    if len(d) > 20_000:
        return _field_matrix(list(d.keys()), nvars).max(axis=0).tolist()
    out = [0] * nvars
    for key in d:
        for i in range(nvars):
            e = (key >> (8 * (nvars - 1 - i))) & 255
            if e > out[i]:
                out[i] = e
    return out


class _ArrayPlan:
    """Per-determinant exponent packing plus converted entries."""

    def __init__(self, rows, dim, nvars, limits, shifts, widths, perm_sign):
        self.rows = rows  # list of {col: _Entry}
        self.dim = dim
        self.nvars = nvars
        self.limits = limits
        self.shifts = shifts
        self.widths = widths
        self.perm_sign = perm_sign

    @classmethod
    def build(cls, rows, dim, nvars, limits):
        if nvars == 0:
            return None  # constant entries; the dict path is instant
        maxdeg_cache: dict[int, list] = {}

        def maxdeg(d):
            got = maxdeg_cache.get(id(d))
            if got is None:
                got = maxdeg_cache[id(d)] = _dict_max_degrees(d, nvars)
            return got

        bounds = [0] * nvars
        for row in rows:
            row_max = [0] * nvars
            for d in row.values():
                for i, e in enumerate(maxdeg(d)):
                    if e > row_max[i]:
                        row_max[i] = e
            for i in range(nvars):
                bounds[i] += row_max[i]
        widths = [b.bit_length() for b in bounds]
        if sum(widths) > 64:
            return None
        shifts = [0] * nvars
        pos = 0
        for i in range(nvars - 1, -1, -1):
            shifts[i] = pos
            pos += widths[i]
        order = sorted(range(dim), key=lambda r: _row_weight(rows[r]))
        perm_sign = -1 if _parity(order) else 1
        converted: dict[int, _Entry] = {}

        def convert(d):
            ent = converted.get(id(d))
            if ent is not None:
                return ent
            keys = list(d.keys())
            coeffs = list(d.values())
            max_abs = max((abs(c) for c in coeffs), default=0)
            if max_abs > _INT64_MAX:
                return None
            l1 = sum(abs(c) for c in coeffs)
            mat = _field_matrix(keys, nvars).astype(np.uint64)
            weights = np.array(
                [1 << shifts[i] if widths[i] else 0 for i in range(nvars)],
                dtype=np.uint64,
            )
            dk = (mat * weights).sum(axis=1, dtype=np.uint64)
            ca = np.array(coeffs, dtype=np.int64)
            srt = np.argsort(dk, kind="stable")
            ent = _Entry(dk[srt], ca[srt], max_abs, l1)
            converted[id(d)] = ent
            return ent

        new_rows = []
        for r in order:
            row = {}
            for c, d in rows[r].items():
                ent = convert(d)
                if ent is None:
                    return None  # a coefficient already exceeds int64
                row[c] = ent
            new_rows.append(row)
        return cls(new_rows, dim, nvars, limits, shifts, widths, perm_sign)

    # -- merging ----------------------------------------------------------

    @staticmethod
    def _merge(parts_k, parts_c):
        K = np.concatenate(parts_k)
        C = np.concatenate(parts_c)
        srt = np.argsort(K, kind="stable")
        K = K[srt]
        C = C[srt]
        neq = np.empty(len(K), dtype=bool)
        neq[0] = True
        np.not_equal(K[1:], K[:-1], out=neq[1:])
        starts = np.flatnonzero(neq)
        sums = np.add.reduceat(C, starts)
        keys = K[starts]
        nz = sums != 0
        return keys[nz], sums[nz]

    def _combine(self, prods, live):
        """Sum of sign * minor * entry over prods, capped and bounded."""
        limits = self.limits
        acc_k = acc_c = None
        bound = 0
        buf_k, buf_c, buf_rows = [], [], 0

        def flush():
            nonlocal acc_k, acc_c, buf_k, buf_c, buf_rows
            parts_k = buf_k if acc_k is None else [acc_k] + buf_k
            parts_c = buf_c if acc_c is None else [acc_c] + buf_c
            acc_k, acc_c = self._merge(parts_k, parts_c)
            buf_k, buf_c, buf_rows = [], [], 0
            if len(acc_k) > limits.max_terms:
                raise ResourceExhausted(
                    "determinant minor", len(acc_k), limits.max_terms
                )
            if live + len(acc_k) > limits.max_total_terms:
                raise ResourceExhausted(
                    "determinant live terms",
                    live + len(acc_k),
                    limits.max_total_terms,
                )

        for minor, ent, s in prods:
            if minor.max_abs and ent.max_abs:
                if minor.max_abs * ent.l1 > _INT64_MAX:
                    raise _Int64Risk
            bound += minor.max_abs * ent.l1
            if bound > _INT64_MAX:
                raise _Int64Risk
            ek = ent.keys
            ec = ent.coeffs
            for t in range(len(ek)):
                ct = int(ec[t]) * s
                buf_k.append(minor.keys + ek[t])
                buf_c.append(minor.coeffs * np.int64(ct))
                buf_rows += len(minor.keys)
                if buf_rows >= _CHUNK_ROWS:
                    flush()
        if buf_rows or acc_k is None:
            flush()
        max_abs = int(np.abs(acc_c).max()) if len(acc_c) else 0
        return _Minor(acc_k, acc_c, max_abs)

    def run(self) -> dict:
        one = _Minor(
            np.zeros(1, dtype=np.uint64),
            np.full(1, self.perm_sign, dtype=np.int64),
            1,
        )
        level = {0: one}
        live = 1
        for row in self.rows:
            groups: dict[int, list] = {}
            for mask, minor in level.items():
                for c, ent in row.items():
                    if mask >> c & 1:
                        continue
                    s = -1 if (mask >> (c + 1)).bit_count() & 1 else 1
                    groups.setdefault(mask | (1 << c), []).append((minor, ent, s))
            nxt: dict[int, _Minor] = {}
            nxt_total = 0
            for tgt, prods in groups.items():
                m = self._combine(prods, live + nxt_total)
                if len(m.keys):
                    nxt[tgt] = m
                    nxt_total += len(m.keys)
            level = nxt
            live = nxt_total
            if not level:
                return {}
        final = level.get((1 << self.dim) - 1)
        if final is None:
            return {}
        return self._to_dict(final)

    def _to_dict(self, minor) -> dict:
        nvars = self.nvars
        cols = []
        for i in range(nvars):
            if self.widths[i]:
                f = (minor.keys >> np.uint64(self.shifts[i])) & np.uint64(
                    (1 << self.widths[i]) - 1
                )
            else:
                f = np.zeros(len(minor.keys), dtype=np.uint64)
            cols.append(f.astype(np.uint8))
        mat = np.stack(cols, axis=1)
        blob = mat.tobytes()
        coeffs = minor.coeffs
        out = {}
        for t in range(len(coeffs)):
            key = int.from_bytes(blob[t * nvars : (t + 1) * nvars], "big")
            out[key] = int(coeffs[t])
        return out


def poly_det(mat, limits: Limits | None = None) -> MultiPoly:
    """Determinant of a dense square MultiPoly matrix via the minor DP."""
    dim = len(mat)
    if any(len(row) != dim for row in mat):
        raise PolyError("matrix is not square")
    union = tuple(sorted({v for row in mat for p in row for v in p.vars}))
    rows = []
    for row in mat:
        aligned = {}
        for c, p in enumerate(row):
            p = p.with_vars(union)
            if p.terms:
                aligned[c] = p.terms
        rows.append(aligned)
    terms = det_minors(rows, dim, len(union), limits or Limits())
    return MultiPoly(union, terms)


# -- fraction-free elimination ----------------------------------------------


def exact_div(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Exact polynomial quotient; raises PolyError if division fails."""
    if q.is_zero():
        raise PolyError("division by zero polynomial")
    p, q = MultiPoly._common(p, q)
    if p.is_zero():
        return p
    shifts = p._shifts
    qk = q._leading_key_grlex()
    qc = q.terms[qk]
    rem = dict(p.terms)
    out: dict[int, int] = {}
    qitems = list(q.terms.items())
    while rem:
        rk = max(rem, key=lambda k: (sum((k >> s) & 255 for s in shifts), k))
        rc = rem[rk]
        for s in shifts:
            if ((rk >> s) & 255) < ((qk >> s) & 255):
                raise PolyError("not an exact polynomial quotient")
        if rc % qc:
            raise PolyError("not an exact polynomial quotient")
        tk = rk - qk
        tc = rc // qc
        out[tk] = tc
        for k2, c2 in qitems:
            k = tk + k2
            t = rem.get(k, 0) - tc * c2
            if t:
                rem[k] = t
            else:
                rem.pop(k, None)
    return MultiPoly(p.vars, out)


def bareiss(mat, vars) -> MultiPoly:
    """Bareiss fraction-free determinant of a square MultiPoly matrix."""
    n = len(mat)
    m = [[p.with_vars(vars) for p in row] for row in mat]
    one = MultiPoly.const(1, vars)
    zero = MultiPoly.zero(vars)
    sign = 1
    prev = one
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = exact_div(num, prev)
            m[i][k] = zero
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det
