"""Exact sparse multivariate polynomials in squared-distance variables.

A variable is an unordered vertex pair (i, j), i < j.  A polynomial keeps
a tuple of such variables plus a dict from packed exponent keys to integer
coefficients.  Exponents pack 8 bits per variable with vars[0] in the most
significant field, so comparing keys as integers compares exponent tuples
lexicographically and (total degree, key) is graded lex.

Coefficients are arbitrary-precision integers throughout; nothing here
ever rounds.
"""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from fractions import Fraction

DistVar = tuple  # (i, j) with i < j


class PolyError(ValueError):
    pass


class ResourceExhausted(RuntimeError):
    """A term-count or memory-budget cap was hit mid-computation.

    Mirrors an out-of-memory abort as a structured, reproducible outcome.
    """

    def __init__(self, stage: str, observed: int, cap: int):
        super().__init__(f"{stage}: {observed} terms exceeds cap {cap}")
        self.stage = stage
        self.observed = observed
        self.cap = cap


@dataclass(frozen=True)
class Limits:
    """Resource caps for resultant computations.

    max_terms bounds any single polynomial; max_total_terms bounds all
    terms alive inside one determinant evaluation (the memory budget).
    """

    max_terms: int = 20_000_000
    max_total_terms: int = 25_000_000


class _NotHomogeneous:
    __slots__ = ()

    def __repr__(self):
        return "NotHomogeneous"

    def __bool__(self):
        return False


NOT_HOMOGENEOUS = _NotHomogeneous()


def dvar(i: int, j: int) -> DistVar:
    if i == j:
        raise PolyError(f"no distance variable between {i} and itself")
    return (i, j) if i < j else (j, i)


def _check_vars(vs) -> tuple:
    out = []
    for v in vs:
        if not (isinstance(v, tuple) and len(v) == 2 and v[0] < v[1]):
            raise PolyError(f"bad distance variable {v!r}")
        out.append((int(v[0]), int(v[1])))
    t = tuple(sorted(out))
    if len(set(t)) != len(t):
        raise PolyError("duplicate variables")
    return t


class MultiPoly:
    """Immutable sparse polynomial over integers."""

    __slots__ = ("vars", "terms", "_shifts")

    def __init__(self, vars, terms: dict):
        object.__setattr__(self, "vars", _check_vars(vars))
        nv = len(self.vars)
        object.__setattr__(
            self, "_shifts", tuple(8 * (nv - 1 - i) for i in range(nv))
        )
        clean = {int(k): int(c) for k, c in terms.items() if c}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, vars=()) -> "MultiPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, c: int, vars=()) -> "MultiPoly":
        return cls(vars, {0: c} if c else {})

    @classmethod
    def variable(cls, v: DistVar) -> "MultiPoly":
        v = dvar(*v)
        return cls((v,), {1: 1})

    @classmethod
    def from_exponents(cls, vars, table: dict) -> "MultiPoly":
        """Build from {exponent tuple: coefficient} in the order of vars."""
        vs = _check_vars(vars)
        nv = len(vs)
        terms: dict[int, int] = {}
        for expo, c in table.items():
            if len(expo) != nv:
                raise PolyError("exponent tuple length mismatch")
            key = 0
            for e in expo:
                if not 0 <= e < 256:
                    raise PolyError("exponent out of range")
                key = (key << 8) | e
            terms[key] = terms.get(key, 0) + c
        return cls(vs, terms)

    @classmethod
    def monomial(cls, coeff: int, powers: dict) -> "MultiPoly":
        """powers: {(i,j): exponent}."""
        vs = _check_vars(powers.keys())
        expo = tuple(powers[v] for v in vs)
        return cls.from_exponents(vs, {expo: coeff})

    # -- inspection -----------------------------------------------------

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def exponent(self, key: int, i: int) -> int:
        return (key >> self._shifts[i]) & 255

    def decode(self, key: int) -> tuple:
        return tuple((key >> s) & 255 for s in self._shifts)

    def iter_terms(self):
        """Yield ({var: exponent}, coeff) with zero exponents dropped."""
        for key, c in self.terms.items():
            mono = {}
            for i, s in enumerate(self._shifts):
                e = (key >> s) & 255
                if e:
                    mono[self.vars[i]] = e
            yield mono, c

    def max_degrees(self) -> tuple:
        """Per-variable maximum exponent."""
        out = [0] * len(self.vars)
        for key in self.terms:
            for i, s in enumerate(self._shifts):
                e = (key >> s) & 255
                if e > out[i]:
                    out[i] = e
        return tuple(out)

    def degree_in(self, v: DistVar) -> int:
        v = dvar(*v)
        if v not in self.vars:
            return 0
        i = self.vars.index(v)
        s = self._shifts[i]
        return max(((k >> s) & 255 for k in self.terms), default=0)

    def total_degree(self) -> int:
        best = 0
        for key in self.terms:
            d = sum((key >> s) & 255 for s in self._shifts)
            if d > best:
                best = d
        return best

    def homogeneous_degree(self):
        """Common total degree of all terms, or the NotHomogeneous marker."""
        if not self.terms:
            raise PolyError("the zero polynomial has no homogeneous degree")
        it = iter(self.terms)
        k0 = next(it)
        first = sum((k0 >> s) & 255 for s in self._shifts)
        for key in it:
            if sum((key >> s) & 255 for s in self._shifts) != first:
                return NOT_HOMOGENEOUS
        return first

    def is_homogeneous(self) -> bool:
        return bool(self.terms) and self.homogeneous_degree() is not NOT_HOMOGENEOUS

    def used_vars(self) -> tuple:
        seen = [False] * len(self.vars)
        for key in self.terms:
            for i, s in enumerate(self._shifts):
                if (key >> s) & 255:
                    seen[i] = True
        return tuple(v for v, ok in zip(self.vars, seen) if ok)

    # -- variable alignment ---------------------------------------------

    def with_vars(self, vars) -> "MultiPoly":
        """Repack onto a superset (or reordering) of the variables."""
        vs = _check_vars(vars)
        if vs == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vs)}
        nv = len(vs)
        for i, v in enumerate(self.vars):
            if v not in pos:
                # dropping a variable is only sound when it is unused
                s = self._shifts[i]
                if any((k >> s) & 255 for k in self.terms):
                    raise PolyError(f"variable {v} is in use and absent from target")
        new_shift = [
            8 * (nv - 1 - pos[v]) if v in pos else None for v in self.vars
        ]
        out: dict[int, int] = {}
        for key, c in self.terms.items():
            nk = 0
            for i, s in enumerate(self._shifts):
                e = (key >> s) & 255
                if e:
                    nk |= e << new_shift[i]
            out[nk] = c
        return MultiPoly(vs, out)

    def drop_unused_vars(self) -> "MultiPoly":
        return self.with_vars(self.used_vars())

    @staticmethod
    def _common(p: "MultiPoly", q: "MultiPoly"):
        if p.vars == q.vars:
            return p, q
        vs = tuple(sorted(set(p.vars) | set(q.vars)))
        return p.with_vars(vs), q.with_vars(vs)

    # -- arithmetic -----------------------------------------------------

    def __neg__(self):
        return MultiPoly(self.vars, {k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(other, self.vars)
        p, q = self._common(self, other)
        out = dict(p.terms)
        for k, c in q.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MultiPoly(p.vars, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return MultiPoly.zero(self.vars)
            return MultiPoly(self.vars, {k: c * other for k, c in self.terms.items()})
        p, q = self._common(self, other)
        if len(p.terms) < len(q.terms):
            p, q = q, p
        # guard the 8-bit exponent fields
        for dp, dq in zip(p.max_degrees(), q.max_degrees()):
            if dp + dq > 255:
                raise PolyError("product exceeds the 8-bit exponent fields")
        out: dict[int, int] = {}
        for kq, cq in q.terms.items():
            for kp, cp in p.terms.items():
                k = kp + kq
                s = out.get(k, 0) + cp * cq
                if s:
                    out[k] = s
                else:
                    del out[k]
        return MultiPoly(p.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PolyError("negative power")
        result = MultiPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        p, q = self._common(self.drop_unused_vars(), other.drop_unused_vars())
        return p.terms == q.terms

    def __hash__(self):
        p = self.drop_unused_vars()
        return hash((p.vars, frozenset(p.terms.items())))

    def __repr__(self):
        n = len(self.terms)
        if n <= 6:
            return f"MultiPoly({poly_to_text(self)!r})"
        return f"MultiPoly(<{n} terms in {len(self.vars)} vars>)"

    # -- coefficient views ----------------------------------------------

    def coeffs_in(self, v: DistVar) -> list:
        """Coefficients of v^0 .. v^deg, each a polynomial free of v."""
        v = dvar(*v)
        if v not in self.vars:
            return [self]
        i = self.vars.index(v)
        s = self._shifts[i]
        rest = tuple(u for u in self.vars if u != v)
        nv = len(rest)
        # shift table from old field position to new packing
        old_shifts = self._shifts
        new_shifts = []
        j = 0
        for t, u in enumerate(self.vars):
            if u == v:
                new_shifts.append(None)
            else:
                new_shifts.append(8 * (nv - 1 - j))
                j += 1
        buckets: dict[int, dict] = {}
        for key, c in self.terms.items():
            e = (key >> s) & 255
            nk = 0
            for t, os in enumerate(old_shifts):
                if new_shifts[t] is None:
                    continue
                f = (key >> os) & 255
                if f:
                    nk |= f << new_shifts[t]
            buckets.setdefault(e, {})[nk] = c
        deg = max(buckets, default=0)
        return [
            MultiPoly(rest, buckets.get(e, {})) for e in range(deg + 1)
        ]

    # -- normalization ---------------------------------------------------

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
            if g == 1:
                return 1
        return g

    def _leading_key_grlex(self):
        best = None
        best_rank = None
        for key in self.terms:
            d = sum((key >> s) & 255 for s in self._shifts)
            rank = (d, key)
            if best_rank is None or rank > best_rank:
                best_rank, best = rank, key
        return best

    def leading_term(self):
        """(exponent tuple, coeff) of the graded-lex leading monomial."""
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        k = self._leading_key_grlex()
        return self.decode(k), self.terms[k]

    def primitive_part(self) -> "MultiPoly":
        """Divide out the integer content; leading grlex coefficient > 0."""
        if not self.terms:
            raise PolyError("the zero polynomial has no primitive part")
        npmod = _numpy()
        if npmod is not None and len(self.terms) > 100_000:
            out = _primitive_part_np(self, npmod)
            if out is not None:
                return out
        g = self.content()
        if self.terms[self._leading_key_grlex()] < 0:
            g = -g
        if g == 1:
            return self
        return MultiPoly(self.vars, {k: c // g for k, c in self.terms.items()})

    # -- evaluation -------------------------------------------------------

    def evaluate(self, values: dict):
        """Exact evaluation; values maps each used (i,j) to int or Fraction."""
        vals = []
        for i, v in enumerate(self.vars):
            if v in values:
                vals.append(values[v])
            else:
                s = self._shifts[i]
                if any((k >> s) & 255 for k in self.terms):
                    raise PolyError(f"no value for variable {v}")
                vals.append(0)
        degs = self.max_degrees()
        tables = [
            [val ** e for e in range(d + 1)] for val, d in zip(vals, degs)
        ]
        shifts = self._shifts
        total = 0
        for key, c in self.terms.items():
            acc = c
            for i, s in enumerate(shifts):
                e = (key >> s) & 255
                if e:
                    acc = acc * tables[i][e]
            total += acc
        return total

    def relabel(self, mapping: dict) -> "MultiPoly":
        """Push a vertex relabeling through the variables."""
        new_vars = []
        for (i, j) in self.vars:
            a = mapping.get(i, i)
            b = mapping.get(j, j)
            if a == b:
                raise PolyError("relabeling collapses a variable")
            new_vars.append(dvar(a, b))
        if len(set(new_vars)) != len(new_vars):
            raise PolyError("relabeling merges two variables")
        order = sorted(range(len(new_vars)), key=lambda t: new_vars[t])
        vs = tuple(new_vars[t] for t in order)
        nv = len(vs)
        out: dict[int, int] = {}
        old_shifts = self._shifts
        new_shift_of_old = [0] * nv
        for new_pos, old_pos in enumerate(order):
            new_shift_of_old[old_pos] = 8 * (nv - 1 - new_pos)
        for key, c in self.terms.items():
            nk = 0
            for t, os in enumerate(old_shifts):
                e = (key >> os) & 255
                if e:
                    nk |= e << new_shift_of_old[t]
            out[nk] = c
        return MultiPoly(vs, out)


def _numpy():
    try:
        import numpy

        return numpy
    except ImportError:  # pragma: no cover - numpy is a hard dependency
        return None


def _primitive_part_np(p: MultiPoly, np):
    coeffs = list(p.terms.values())
    try:
        arr = np.array(coeffs, dtype=np.int64)
    except OverflowError:
        return None  # coefficients exceed int64; take the slow path
    if not (arr == np.array(coeffs, dtype=object)).all():
        return None  # silent wrap-around on this numpy; slow path too
    g = int(np.gcd.reduce(np.abs(arr))) if len(arr) else 1
    keys = list(p.terms.keys())
    nv = len(p.vars)
    nbytes = max(nv, 1)
    buf = b"".join(k.to_bytes(nbytes, "big") for k in keys)
    mat = np.frombuffer(buf, dtype=np.uint8).reshape(len(keys), nbytes)
    degs = mat.sum(axis=1, dtype=np.int64)
    top = degs == degs.max()
    idx = np.nonzero(top)[0]
    lead = idx[np.argmax([keys[i] for i in idx])] if len(idx) > 1 else idx[0]
    if coeffs[lead] < 0:
        g = -g
    if g == 1:
        return p
    return MultiPoly(p.vars, {k: c // g for k, c in zip(keys, coeffs)})


# -- serialization -------------------------------------------------------


def poly_to_text(p: MultiPoly) -> str:
    """One term per line: `coeff [i,j]^e [k,l]^e ...`, graded lex descending."""
    if not p.terms:
        return "0\n"
    ranked = sorted(
        p.terms,
        key=lambda k: (sum((k >> s) & 255 for s in p._shifts), k),
        reverse=True,
    )
    lines = []
    for key in ranked:
        parts = [str(p.terms[key])]
        for i, s in enumerate(p._shifts):
            e = (key >> s) & 255
            if e:
                a, b = p.vars[i]
                parts.append(f"[{a},{b}]^{e}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def poly_from_text(text: str) -> MultiPoly:
    terms = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "0":
            continue
        bits = line.split()
        try:
            coeff = int(bits[0])
        except ValueError:
            raise PolyError(f"line {ln}: bad coefficient {bits[0]!r}") from None
        mono = {}
        for tok in bits[1:]:
            if not (tok.startswith("[") and "]^" in tok):
                raise PolyError(f"line {ln}: bad factor {tok!r}")
            pair, _, exp = tok.partition("]^")
            try:
                i, j = (int(x) for x in pair[1:].split(","))
                e = int(exp)
            except ValueError:
                raise PolyError(f"line {ln}: bad factor {tok!r}") from None
            if e <= 0:
                raise PolyError(f"line {ln}: exponent must be positive")
            v = dvar(i, j)
            if v in mono:
                raise PolyError(f"line {ln}: repeated variable {v}")
            mono[v] = e
        terms.append((mono, coeff))
    vars = sorted({v for mono, _ in terms for v in mono})
    out: dict[int, int] = {}
    nv = len(vars)
    pos = {v: 8 * (nv - 1 - i) for i, v in enumerate(vars)}
    for mono, coeff in terms:
        key = 0
        for v, e in mono.items():
            key |= e << pos[v]
        out[key] = out.get(key, 0) + coeff
    return MultiPoly(vars, out)


_BIN_MAGIC = b"RCPOLY01"


def save_poly(p: MultiPoly, path) -> None:
    """Compact binary dump; round-trips exactly."""
    header = json.dumps({"vars": [list(v) for v in p.vars], "n": len(p.terms)})
    nv = max(len(p.vars), 1)
    with open(path, "wb") as fh:
        fh.write(_BIN_MAGIC)
        hb = header.encode()
        fh.write(struct.pack("<II", len(hb), nv))
        fh.write(hb)
        for key, c in p.terms.items():
            cb = c.to_bytes((c.bit_length() + 8) // 8, "little", signed=True)
            fh.write(key.to_bytes(nv, "little"))
            fh.write(struct.pack("<H", len(cb)))
            fh.write(cb)


def load_poly(path) -> MultiPoly:
    with open(path, "rb") as fh:
        if fh.read(len(_BIN_MAGIC)) != _BIN_MAGIC:
            raise PolyError(f"{path}: not a polynomial cache file")
        hlen, nv = struct.unpack("<II", fh.read(8))
        header = json.loads(fh.read(hlen))
        vars = tuple(tuple(v) for v in header["vars"])
        terms = {}
        for _ in range(header["n"]):
            key = int.from_bytes(fh.read(nv), "little")
            (clen,) = struct.unpack("<H", fh.read(2))
            c = int.from_bytes(fh.read(clen), "little", signed=True)
            terms[key] = c
        return MultiPoly(vars, terms)


# -- Sylvester matrix and resultant ---------------------------------------


@dataclass(frozen=True)
class SylMatrix:
    """Sylvester matrix of f and g in the variable var.

    rows[i][j] are polynomials over the union of the operand variables
    with var removed.  The first deg_g rows carry the coefficients of f
    (descending), the last deg_f rows those of g.
    """

    var: DistVar
    deg_f: int
    deg_g: int
    rows: tuple

    @property
    def dimension(self) -> int:
        return self.deg_f + self.deg_g

    def entry(self, i: int, j: int) -> MultiPoly:
        return self.rows[i][j]


def _coeff_split(p: MultiPoly, v: DistVar, target_vars: tuple) -> list:
    """Coefficient dicts of p in v, keyed in the target_vars packing."""
    i = p.vars.index(v)
    sv = p._shifts[i]
    nv = len(target_vars)
    pos = {u: 8 * (nv - 1 - t) for t, u in enumerate(target_vars)}
    shift_map = [
        None if u == v else pos[u] for u, s in zip(p.vars, p._shifts)
    ]
    old_shifts = p._shifts
    deg = p.degree_in(v)
    buckets: list[dict] = [dict() for _ in range(deg + 1)]
    for key, c in p.terms.items():
        e = (key >> sv) & 255
        nk = 0
        for t, os in enumerate(old_shifts):
            ns = shift_map[t]
            if ns is None:
                continue
            f = (key >> os) & 255
            if f:
                nk |= f << ns
        buckets[e][nk] = c
    return buckets


def sylvester_matrix(f: MultiPoly, g: MultiPoly, v: DistVar) -> SylMatrix:
    v = dvar(*v)
    df = f.degree_in(v)
    dg = g.degree_in(v)
    if df < 1 or dg < 1:
        raise PolyError(f"both operands must contain {v}")
    union = tuple(sorted((set(f.vars) | set(g.vars)) - {v}))
    fa = _coeff_split(f.with_vars(tuple(sorted(set(f.vars) | {v}))), v, union)
    ga = _coeff_split(g.with_vars(tuple(sorted(set(g.vars) | {v}))), v, union)
    dim = df + dg
    fc = [MultiPoly(union, d) for d in fa]  # index = exponent of v
    gc = [MultiPoly(union, d) for d in ga]
    zero = MultiPoly.zero(union)
    rows = []
    for r in range(dg):
        row = [zero] * dim
        for k in range(df + 1):
            row[r + k] = fc[df - k]
        rows.append(tuple(row))
    for r in range(df):
        row = [zero] * dim
        for k in range(dg + 1):
            row[r + k] = gc[dg - k]
        rows.append(tuple(row))
    return SylMatrix(v, df, dg, tuple(rows))


def resultant(
    f: MultiPoly,
    g: MultiPoly,
    v: DistVar,
    limits: Limits | None = None,
    method: str = "minors",
) -> MultiPoly:
    """Determinant of the Sylvester matrix; eliminates v exactly.

    May raise ResourceExhausted under the given limits.  A zero result is
    returned as the zero polynomial for the caller to classify.
    """
    from . import _determinant

    v = dvar(*v)
    df = f.degree_in(v)
    dg = g.degree_in(v)
    if df < 1 or dg < 1:
        raise PolyError(f"both operands must contain {v}")
    limits = limits or Limits()
    union = tuple(sorted((set(f.vars) | set(g.vars)) - {v}))
    fa = _coeff_split(f.with_vars(tuple(sorted(set(f.vars) | {v}))), v, union)
    ga = _coeff_split(g.with_vars(tuple(sorted(set(g.vars) | {v}))), v, union)
    dim = df + dg
    # sparse rows: list of (col -> coefficient dict)
    rows = []
    for r in range(dg):
        rows.append({r + k: fa[df - k] for k in range(df + 1) if fa[df - k]})
    for r in range(df):
        rows.append({r + k: ga[dg - k] for k in range(dg + 1) if ga[dg - k]})
    if method == "bareiss":
        mat = [
            [MultiPoly(union, rows[i].get(j, {})) for j in range(dim)]
            for i in range(dim)
        ]
        return _determinant.bareiss(mat, union)
    if method != "minors":
        raise PolyError(f"unknown determinant method {method!r}")
    terms = _determinant.det_minors(rows, dim, len(union), limits)
    return MultiPoly(union, terms)
