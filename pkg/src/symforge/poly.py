"""Exact sparse multivariate polynomials over the integers.

Variables ("atoms") come in four kinds, ordered ``feyn < leg < dot < mass``:

* ``x(i)``      Feynman parameter attached to internal edge ``i``
* ``z(j)``      leg variable of the extended graph
* ``sp(i, j)``  scalar product ``p_i . p_j`` (stored with ``i <= j``)
* ``msq(i)``    squared mass ``m_i^2``

A monomial is a tuple of ``(atom, exponent)`` pairs sorted by atom.  Terms are
ordered graded-lexicographically with ``x1 > x2 > ... > z1 > ... > sp(1,1) > ...``,
which makes ``str(p)`` canonical.
"""

from __future__ import annotations

import re
from collections import Counter
from functools import lru_cache
from itertools import chain
from typing import Callable, Iterable, Iterator, Mapping

__all__ = [
    "FEYN",
    "LEG",
    "DOT",
    "MASS",
    "Atom",
    "Monomial",
    "Poly",
    "NotDivisible",
    "NotMultilinear",
    "x",
    "z",
    "sp",
    "msq",
    "exact_div",
    "grade_by_leg_degree",
    "reciprocal_transform",
    "is_multilinear",
    "is_homogeneous",
    "rename_feyn",
    "find_variable_isomorphism",
]

FEYN, LEG, DOT, MASS = 0, 1, 2, 3

Atom = tuple[int, int, int]
Monomial = tuple[tuple[Atom, int], ...]

_ATOM_NAMES = {FEYN: "x", LEG: "z", MASS: "msq"}


class NotDivisible(ArithmeticError):
    pass


class NotMultilinear(ValueError):
    pass


def make_atom(kind: int, i: int, j: int = 0) -> Atom:
    if i < 1 or (kind == DOT and j < 1):
        raise ValueError(f"atom indices must be positive, got {(i, j)}")
    if kind == DOT:
        if j < i:
            i, j = j, i
        return (DOT, i, j)
    if kind not in (FEYN, LEG, MASS):
        raise ValueError(f"unknown atom kind {kind}")
    return (kind, i, 0)


def atom_str(a: Atom) -> str:
    kind, i, j = a
    if kind == DOT:
        return f"sp({i},{j})"
    return f"{_ATOM_NAMES[kind]}{i}"


@lru_cache(maxsize=None)
def _mono_key(m: Monomial) -> tuple:
    # larger key = leading monomial
    deg = sum(e for _, e in m)
    return (deg, tuple((-a[0], -a[1], -a[2], e) for a, e in m))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for atom, e in b:
        d[atom] = d.get(atom, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """Return a/b if b divides a, else None."""
    if not b:
        return a
    d = dict(a)
    for atom, e in b:
        have = d.get(atom, 0)
        if have < e:
            return None
        if have == e:
            del d[atom]
        else:
            d[atom] = have - e
    return tuple(sorted(d.items()))


def _mono_str(m: Monomial) -> str:
    return "*".join(atom_str(a) if e == 1 else f"{atom_str(a)}^{e}" for a, e in m)


class Poly:
    """Immutable polynomial; ``terms`` maps monomials to nonzero ints."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self._terms: dict[Monomial, int] = (
            {m: c for m, c in terms.items() if c} if terms else {}
        )
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> Poly:
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> Poly:
        return cls._raw({(): c} if c else {})

    @classmethod
    def atom(cls, a: Atom) -> Poly:
        return cls._raw({((a, 1),): 1})

    @classmethod
    def parse(cls, text: str) -> Poly:
        return _parse(text)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def items(self) -> list[tuple[Monomial, int]]:
        """Terms in canonical (descending graded-lex) order."""
        return sorted(self._terms.items(), key=lambda t: _mono_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def atoms(self) -> set[Atom]:
        return {a for m in self._terms for a, _ in m}

    def feyn_indices(self) -> set[int]:
        return {a[1] for a in self.atoms() if a[0] == FEYN}

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def leading(self) -> tuple[Monomial, int]:
        m = max(self._terms, key=_mono_key)
        return m, self._terms[m]

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Poly | int) -> Poly:
        other = _coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Poly | int) -> Poly:
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> Poly:
        return _coerce(other) - self

    def __mul__(self, other: Poly | int) -> Poly:
        other = _coerce(other)
        if not self._terms or not other._terms:
            return ZERO
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for m, c in self.items():
            body = _mono_str(m)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if not parts:
                parts.append(text if c > 0 else f"-{text}")
            else:
                parts.append(f"+ {text}" if c > 0 else f"- {text}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    # -- transformations ----------------------------------------------------

    def map_terms(self, fn: Callable[[Monomial, int], Poly]) -> Poly:
        out = ZERO
        for m, c in self._terms.items():
            out = out + fn(m, c)
        return out

    def substitute(self, values: Mapping[Atom, Poly | int]) -> Poly:
        """Replace atoms by polynomials (or integers); others are kept."""
        vals = {a: _coerce(v) for a, v in values.items()}
        out: dict[Monomial, int] = {}
        cache: dict[tuple[Atom, int], Poly] = {}
        acc = ZERO
        for m, c in self._terms.items():
            kept: list[tuple[Atom, int]] = []
            factor = Poly.const(c)
            for a, e in m:
                if a in vals:
                    key = (a, e)
                    if key not in cache:
                        cache[key] = vals[a] ** e
                    factor = factor * cache[key]
                    if not factor:
                        break
                else:
                    kept.append((a, e))
            if not factor:
                continue
            if len(factor) == 1 and () in factor._terms:
                mono = tuple(kept)
                s = out.get(mono, 0) + factor._terms[()]
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
            else:
                acc = acc + factor * Poly._raw({tuple(kept): 1})
        return Poly._raw(out) + acc

    def evaluate(self, values: Mapping[Atom, int]) -> int:
        """Evaluate at integer values; every atom must be assigned."""
        total = 0
        for m, c in self._terms.items():
            v = c
            for a, e in m:
                v *= values[a] ** e
            total += v
        return total


def _coerce(v: Poly | int) -> Poly:
    if isinstance(v, Poly):
        return v
    if isinstance(v, int):
        return Poly.const(v)
    raise TypeError(f"cannot convert {type(v).__name__} to Poly")


ZERO = Poly._raw({})
ONE = Poly._raw({(): 1})


def x(i: int) -> Poly:
    return Poly.atom(make_atom(FEYN, i))


def z(j: int) -> Poly:
    return Poly.atom(make_atom(LEG, j))


def sp(i: int, j: int) -> Poly:
    return Poly.atom(make_atom(DOT, i, j))


def msq(i: int) -> Poly:
    return Poly.atom(make_atom(MASS, i))


def monomial_poly(m: Monomial, c: int = 1) -> Poly:
    return Poly._raw({m: c} if c else {})


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x|z|msq)(\d+)|sp\((\d+),\s*(\d+)\)|([-+*^()]))")


def _tokenize(text: str) -> list[tuple[int, object]]:
    tokens: list[tuple[int, object]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ValueError(f"cannot parse polynomial at column {pos + 1}: {text[pos:]!r}")
        num, name, idx, d1, d2, op = mt.groups()
        col = mt.start() + 1
        if num is not None:
            tokens.append((col, int(num)))
        elif name is not None:
            kind = {"x": FEYN, "z": LEG, "msq": MASS}[name]
            tokens.append((col, Poly.atom(make_atom(kind, int(idx)))))
        elif d1 is not None:
            tokens.append((col, Poly.atom(make_atom(DOT, int(d1), int(d2)))))
        else:
            tokens.append((col, op))
        pos = mt.end()
    return tokens


def _parse(text: str) -> Poly:
    """Parse polynomial text: the canonical rendering, plus parentheses."""
    tokens = _tokenize(text)
    pos = 0

    def peek() -> object:
        return tokens[pos][1] if pos < len(tokens) else None

    def take() -> object:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("polynomial text ends unexpectedly")
        pos += 1
        return tokens[pos - 1][1]

    def expr() -> Poly:
        sign = 1
        while peek() in ("+", "-"):
            if take() == "-":
                sign = -sign
        out = term() * sign
        while peek() in ("+", "-"):
            op = take()
            t = term()
            out = out + t if op == "+" else out - t
        return out

    def term() -> Poly:
        out = power()
        while peek() == "*" or peek() == "(":
            if peek() == "*":
                take()
            out = out * power()
        return out

    def power() -> Poly:
        base = atom()
        if peek() == "^":
            take()
            e = take()
            if not isinstance(e, int):
                raise ValueError("exponent must be a non-negative integer")
            base = base**e
        return base

    def atom() -> Poly:
        tok = take()
        if tok == "(":
            inner = expr()
            if take() != ")":
                raise ValueError("unbalanced parenthesis")
            return inner
        if tok == "-":
            return -power()
        if isinstance(tok, int):
            return Poly.const(tok)
        if isinstance(tok, Poly):
            return tok
        raise ValueError(f"unexpected token {tok!r}")

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"unexpected trailing input at column {tokens[pos][0]}")
    return result


# -- ring-level operations ----------------------------------------------------


def exact_div(a: Poly, b: Poly | int) -> Poly:
    """Return q with q*b == a, raising NotDivisible otherwise."""
    b = _coerce(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return ZERO
    if len(b) == 1:
        (bm, bc), = b.terms.items()
        out: dict[Monomial, int] = {}
        for m, c in a.terms.items():
            qm = _mono_div(m, bm)
            if qm is None or c % bc:
                raise NotDivisible(f"{b} does not divide {a}")
            out[qm] = c // bc
        return Poly._raw(out)

    lead_m, lead_c = b.leading()
    rest = [(m, c) for m, c in b.terms.items() if m != lead_m]
    rem = dict(a.terms)
    quot: dict[Monomial, int] = {}
    while rem:
        m = max(rem, key=_mono_key)
        c = rem[m]
        qm = _mono_div(m, lead_m)
        if qm is None or c % lead_c:
            raise NotDivisible(f"{b} does not divide {a}")
        qc = c // lead_c
        quot[qm] = qc
        del rem[m]
        for bm, bc in rest:
            pm = _mono_mul(qm, bm)
            s = rem.get(pm, 0) - qc * bc
            if s:
                rem[pm] = s
            else:
                rem.pop(pm, None)
    return Poly._raw(quot)


def _kind_degree(m: Monomial, kind: int, indices: frozenset[int] | None = None) -> int:
    return sum(
        e for a, e in m if a[0] == kind and (indices is None or a[1] in indices)
    )


def grade_by_leg_degree(w: Poly) -> list[Poly]:
    """Split ``w`` into parts homogeneous in the leg variables ``z_j``."""
    buckets: dict[int, dict[Monomial, int]] = {}
    for m, c in w.terms.items():
        buckets.setdefault(_kind_degree(m, LEG), {})[m] = c
    top = max(buckets, default=0)
    return [Poly._raw(buckets.get(k, {})) for k in range(top + 1)]


def _index_set(vars: Iterable[int] | None) -> frozenset[int] | None:
    return None if vars is None else frozenset(vars)


def is_multilinear(p: Poly, vars: Iterable[int] | None = None) -> bool:
    """True if no listed Feynman parameter (default: all) has power >= 2."""
    idx = _index_set(vars)
    return all(
        e == 1
        for m in p.terms
        for a, e in m
        if a[0] == FEYN and (idx is None or a[1] in idx)
    )


def is_homogeneous(
    p: Poly, vars: Iterable[int] | None, degree: int, *, kind: int = FEYN
) -> bool:
    """True if every monomial has total degree ``degree`` in the given atoms.

    ``vars`` lists indices of atoms of ``kind``; ``None`` means all of them.
    """
    idx = _index_set(vars)
    return all(_kind_degree(m, kind, idx) == degree for m in p.terms)


def reciprocal_transform(p: Poly, vars: Iterable[int]) -> Poly:
    """Return ``x_1...x_n * p(1/x_1, ..., 1/x_n)`` over the given parameters.

    Non-Feynman atoms (legs, kinematics, masses) are carried through untouched.
    """
    idx = frozenset(vars)
    full = tuple(((FEYN, i, 0), 1) for i in sorted(idx))
    out: dict[Monomial, int] = {}
    for m, c in p.terms.items():
        used: set[int] = set()
        other: list[tuple[Atom, int]] = []
        for a, e in m:
            if a[0] != FEYN:
                other.append((a, e))
                continue
            if a[1] not in idx:
                raise NotMultilinear(f"x{a[1]} is outside the transform variables")
            if e != 1:
                raise NotMultilinear(f"x{a[1]} appears with power {e}")
            used.add(a[1])
        comp = tuple(t for t in full if t[0][1] not in used)
        mono = tuple(sorted(chain(comp, other)))
        out[mono] = out.get(mono, 0) + c
    return Poly(out)


def rename_feyn(p: Poly, sigma: Mapping[int, int]) -> Poly:
    """Apply ``x_i -> x_sigma(i)``; indices missing from sigma are kept."""
    out: dict[Monomial, int] = {}
    for m, c in p.terms.items():
        d: dict[Atom, int] = {}
        for a, e in m:
            if a[0] == FEYN:
                a = (FEYN, sigma.get(a[1], a[1]), 0)
            d[a] = d.get(a, 0) + e
        mono = tuple(sorted(d.items()))
        out[mono] = out.get(mono, 0) + c
    return Poly(out)


def _occurrence_signature(p: Poly, i: int) -> tuple:
    """Multiset of (exponent, coefficient, monomial degree) over terms containing x_i."""
    sig: Counter = Counter()
    for m, c in p.terms.items():
        for a, e in m:
            if a == (FEYN, i, 0):
                sig[(e, c, sum(f for _, f in m))] += 1
    return tuple(sorted(sig.items()))


def find_variable_isomorphism(p: Poly, q: Poly) -> dict[int, int] | None:
    """Find a bijection sigma of Feynman parameters with ``rename_feyn(p, sigma) == q``.

    Backtracking search.  Candidates are pruned by a per-variable occurrence
    signature, and every partial assignment must preserve the multiset of
    terms restricted to the already-mapped variables.  The search order is
    fixed, so the result is deterministic.
    """
    pv = sorted(p.feyn_indices())
    qv = sorted(q.feyn_indices())
    if len(pv) != len(qv) or len(p) != len(q):
        return None
    if Counter(p.terms.values()) != Counter(q.terms.values()):
        return None
    psig = {i: _occurrence_signature(p, i) for i in pv}
    qsig = {j: _occurrence_signature(q, j) for j in qv}
    if Counter(psig.values()) != Counter(qsig.values()):
        return None

    # most constrained variables first
    order = sorted(pv, key=lambda i: (sum(1 for j in qv if qsig[j] == psig[i]), i))
    p_terms = list(p.terms.items())
    q_terms = list(q.terms.items())

    def restricted(terms, keep: dict[int, int] | set[int], rename: bool) -> Counter:
        out: Counter = Counter()
        for m, c in terms:
            key = []
            for a, e in m:
                if a[0] != FEYN:
                    key.append((a, e))
                elif a[1] in keep:
                    key.append(((FEYN, keep[a[1]] if rename else a[1], 0), e))
            out[(tuple(sorted(key)), c)] += 1
        return out

    sigma: dict[int, int] = {}
    used: set[int] = set()

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        for j in qv:
            if j in used or qsig[j] != psig[i]:
                continue
            sigma[i] = j
            used.add(j)
            if restricted(p_terms, sigma, True) == restricted(q_terms, used, False):
                if search(pos + 1):
                    return True
            del sigma[i]
            used.discard(j)
        return False

    if not search(0):
        return None
    result = dict(sorted(sigma.items()))
    assert rename_feyn(p, result) == q
    return result


def iter_feyn(m: Monomial) -> Iterator[int]:
    return (a[1] for a, _ in m if a[0] == FEYN)
