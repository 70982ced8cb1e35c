"""Exact supercommutative polynomial algebra.

Ground ring is Q (stdlib Fraction).  Variables come in five families:
bosonic x0, x1..xn, y1..yn and fermionic th1..thm ("theta"), vt1..vtm
("vartheta").  Fermionic generators square to zero and anticommute;
everything else commutes.  Monomials are kept in a canonical form where
the fermionic factors appear in the fixed order

    th1 < ... < thm < vt1 < ... < vtm

and any reordering sign is pushed into the coefficient of the enclosing
term.  All arithmetic is exact; there is no floating point anywhere.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union


# ===================================================================
# variables
# ===================================================================

class Family(IntEnum):
    # the numeric order here fixes the global variable order:
    # x0 < x1..xn < y1..yn < th1..thm < vt1..vtm
    X0 = 0
    X = 1
    Y = 2
    THETA = 3
    VARTHETA = 4


_FAMILY_PREFIX = {
    Family.X0: "x",
    Family.X: "x",
    Family.Y: "y",
    Family.THETA: "th",
    Family.VARTHETA: "vt",
}


class VariableId(NamedTuple):
    family: Family
    index: int

    @property
    def fermionic(self) -> bool:
        return self.family in (Family.THETA, Family.VARTHETA)

    @property
    def parity(self) -> int:
        return 1 if self.fermionic else 0

    def name(self) -> str:
        return f"{_FAMILY_PREFIX[self.family]}{self.index}"


def x0() -> VariableId:
    return VariableId(Family.X0, 0)


def x(i: int) -> VariableId:
    if i == 0:
        return x0()
    return VariableId(Family.X, i)


def y(i: int) -> VariableId:
    return VariableId(Family.Y, i)


def theta(r: int) -> VariableId:
    return VariableId(Family.THETA, r)


def vartheta(r: int) -> VariableId:
    return VariableId(Family.VARTHETA, r)


_VAR_RE = re.compile(r"^(x|y|th|vt)(\d+)$")


def parse_variable(name: str) -> VariableId:
    mo = _VAR_RE.match(name)
    if mo is None:
        raise ValueError(f"not a variable name: {name!r}")
    prefix, idx = mo.group(1), int(mo.group(2))
    if prefix == "x":
        return x(idx)
    if prefix == "y":
        if idx < 1:
            raise ValueError(f"bad variable index in {name!r}")
        return y(idx)
    if idx < 1:
        raise ValueError(f"bad variable index in {name!r}")
    return theta(idx) if prefix == "th" else vartheta(idx)


def merge_signed(
    w1: Sequence[VariableId], w2: Sequence[VariableId]
) -> Optional[tuple[int, tuple[VariableId, ...]]]:
    """Merge two strictly ascending fermionic words.

    Returns (sign, merged word) where sign = (-1)^inversions, or None when
    the words share a generator (the product is then zero).
    """
    out: list[VariableId] = []
    inv = 0
    i = j = 0
    while i < len(w1) and j < len(w2):
        a, b = w1[i], w2[j]
        if a == b:
            return None
        if a < b:
            out.append(a)
            i += 1
        else:
            out.append(b)
            inv += len(w1) - i
            j += 1
    out.extend(w1[i:])
    out.extend(w2[j:])
    return (-1 if inv % 2 else 1, tuple(out))


# ===================================================================
# monomials
# ===================================================================

class SuperMonomial(NamedTuple):
    """Canonical monomial: sparse bosonic exponents + ascending fermionic word."""

    bos: tuple[tuple[VariableId, int], ...]  # sorted by variable, exponents >= 1
    ferm: tuple[VariableId, ...]             # strictly ascending

    @staticmethod
    def unit() -> "SuperMonomial":
        return SuperMonomial((), ())

    @staticmethod
    def make(
        bos: Iterable[tuple[VariableId, int]] = (),
        ferm: Iterable[VariableId] = (),
    ) -> "SuperMonomial":
        acc: dict[VariableId, int] = {}
        for v, e in bos:
            if v.fermionic:
                raise ValueError(f"{v.name()} is fermionic")
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                acc[v] = acc.get(v, 0) + e
        fw = tuple(sorted(ferm))
        if len(set(fw)) != len(fw):
            raise ValueError("repeated fermionic generator")
        for v in fw:
            if not v.fermionic:
                raise ValueError(f"{v.name()} is bosonic")
        return SuperMonomial(tuple(sorted(acc.items())), fw)

    def degree(self) -> int:
        return sum(e for _, e in self.bos) + len(self.ferm)

    def parity(self) -> int:
        return len(self.ferm) % 2

    def exponent(self, v: VariableId) -> int:
        if v.fermionic:
            return 1 if v in self.ferm else 0
        for w, e in self.bos:
            if w == v:
                return e
        return 0

    def variables(self) -> tuple[VariableId, ...]:
        return tuple(v for v, _ in self.bos) + self.ferm

    def mul(self, other: "SuperMonomial") -> Optional[tuple[int, "SuperMonomial"]]:
        """Signed product; None when a fermionic generator repeats."""
        merged = merge_signed(self.ferm, other.ferm)
        if merged is None:
            return None
        sign, fw = merged
        acc = dict(self.bos)
        for v, e in other.bos:
            acc[v] = acc.get(v, 0) + e
        return sign, SuperMonomial(tuple(sorted(acc.items())), fw)

    def sort_key(self):
        """Graded order key; ties broken variable by variable."""
        pairs = sorted(
            [(v, -e) for v, e in self.bos] + [(v, -1) for v in self.ferm]
        )
        return (self.degree(), pairs)

    def render(self) -> str:
        parts = []
        for v, e in self.bos:
            parts.append(v.name() if e == 1 else f"{v.name()}^{e}")
        parts.extend(v.name() for v in self.ferm)
        return "*".join(parts) if parts else "1"


# ===================================================================
# polynomials
# ===================================================================

Scalar = Union[int, Fraction]


class SuperPolynomial:
    """Sparse polynomial: canonical monomial -> nonzero Fraction."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[dict[SuperMonomial, Fraction]] = None):
        self._terms = {m: c for m, c in (terms or {}).items() if c != 0}

    # ---- constructors ----

    @staticmethod
    def zero() -> "SuperPolynomial":
        return SuperPolynomial()

    @staticmethod
    def one() -> "SuperPolynomial":
        return SuperPolynomial({SuperMonomial.unit(): Fraction(1)})

    @staticmethod
    def scalar(c: Scalar) -> "SuperPolynomial":
        return SuperPolynomial({SuperMonomial.unit(): Fraction(c)})

    @staticmethod
    def monomial(m: SuperMonomial, c: Scalar = 1) -> "SuperPolynomial":
        return SuperPolynomial({m: Fraction(c)})

    @staticmethod
    def variable(v: VariableId) -> "SuperPolynomial":
        if v.fermionic:
            m = SuperMonomial((), (v,))
        else:
            m = SuperMonomial(((v, 1),), ())
        return SuperPolynomial({m: Fraction(1)})

    # ---- inspection ----

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> list[tuple[SuperMonomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: t[0].sort_key())

    def monomials(self) -> list[SuperMonomial]:
        return [m for m, _ in self.terms()]

    def coefficient(self, m: SuperMonomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(m.degree() for m in self._terms)

    def parity(self) -> Optional[int]:
        """0 or 1 when parity-homogeneous, None when mixed or zero-ambiguous."""
        if not self._terms:
            return None
        ps = {m.parity() for m in self._terms}
        return ps.pop() if len(ps) == 1 else None

    def variables(self) -> set[VariableId]:
        out: set[VariableId] = set()
        for m in self._terms:
            out.update(m.variables())
        return out

    # ---- arithmetic ----

    def __add__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, Fraction(0)) + c
        return SuperPolynomial(acc)

    def __sub__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, Fraction(0)) - c
        return SuperPolynomial(acc)

    def __neg__(self) -> "SuperPolynomial":
        return SuperPolynomial({m: -c for m, c in self._terms.items()})

    def scale(self, c: Scalar) -> "SuperPolynomial":
        c = Fraction(c)
        if c == 0:
            return SuperPolynomial.zero()
        return SuperPolynomial({m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "SuperPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        acc: dict[SuperMonomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                prod = m1.mul(m2)
                if prod is None:
                    continue
                sign, m = prod
                acc[m] = acc.get(m, Fraction(0)) + sign * c1 * c2
        return SuperPolynomial(acc)

    def __rmul__(self, other) -> "SuperPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"SuperPolynomial({self.render()})"

    # ---- rendering ----

    def render(self) -> str:
        if not self._terms:
            return "0"
        chunks: list[str] = []
        for m, c in self.terms():
            mono = m.render()
            mag = abs(c)
            if mono == "1":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)


def mul(p: SuperPolynomial, q: SuperPolynomial) -> SuperPolynomial:
    return p * q


def derive(p: SuperPolynomial, v: VariableId) -> SuperPolynomial:
    """Partial derivative; fermionic derivatives use the signed Leibniz rule."""
    acc: dict[SuperMonomial, Fraction] = {}
    if not v.fermionic:
        for m, c in p._terms.items():
            e = m.exponent(v)
            if e == 0:
                continue
            bos = tuple(
                (w, ee - 1) if w == v else (w, ee) for w, ee in m.bos if not (w == v and ee == 1)
            )
            bos = tuple((w, ee) for w, ee in bos if ee)
            nm = SuperMonomial(bos, m.ferm)
            acc[nm] = acc.get(nm, Fraction(0)) + c * e
        return SuperPolynomial(acc)
    for m, c in p._terms.items():
        if v not in m.ferm:
            continue
        pos = m.ferm.index(v)  # derivative hops over pos earlier odd factors
        sign = -1 if pos % 2 else 1
        nm = SuperMonomial(m.bos, m.ferm[:pos] + m.ferm[pos + 1:])
        acc[nm] = acc.get(nm, Fraction(0)) + c * sign
    return SuperPolynomial(acc)


def integrate_bosonic(p: SuperPolynomial, v: VariableId) -> SuperPolynomial:
    """Right inverse of derive(., v): x^a -> x^(a+1)/(a+1)."""
    if v.fermionic:
        raise ValueError(f"cannot integrate fermionic variable {v.name()}")
    acc: dict[SuperMonomial, Fraction] = {}
    for m, c in p._terms.items():
        e = m.exponent(v)
        bos = dict(m.bos)
        bos[v] = e + 1
        nm = SuperMonomial(tuple(sorted(bos.items())), m.ferm)
        acc[nm] = acc.get(nm, Fraction(0)) + c / (e + 1)
    return SuperPolynomial(acc)


# ===================================================================
# grading schemes
# ===================================================================

class SchemeKind(Enum):
    GL_NATURAL = "gl-natural"
    GL_TWISTED = "gl-twisted"
    OSP_EVEN_NATURAL = "osp-even-natural"
    OSP_EVEN_TWISTED = "osp-even-twisted"
    OSP_ODD_NATURAL = "osp-odd-natural"
    OSP_ODD_TWISTED = "osp-odd-twisted"


_TWISTED_KINDS = {
    SchemeKind.GL_TWISTED,
    SchemeKind.OSP_EVEN_TWISTED,
    SchemeKind.OSP_ODD_TWISTED,
}

_ODD_KINDS = {SchemeKind.OSP_ODD_NATURAL, SchemeKind.OSP_ODD_TWISTED}

# slices of these schemes need a degree cap before enumeration
_CAP_REQUIRED_KINDS = _TWISTED_KINDS | _ODD_KINDS

Label = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class GradingScheme:
    """Variant tag + parameters; doubles as the representation choice."""

    kind: SchemeKind
    n: int
    m: int
    n1: Optional[int] = None
    n2: Optional[int] = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        if self.is_twisted:
            if self.n1 is None or self.n2 is None:
                raise ValueError("twisted scheme needs n1 and n2")
            if not (1 <= self.n1 and self.n1 + 2 <= self.n2 <= self.n):
                raise ValueError("twisted scheme needs 1 < n1+1 < n2 <= n")
        else:
            if self.n1 is not None or self.n2 is not None:
                raise ValueError("n1/n2 only make sense for twisted schemes")

    @property
    def is_twisted(self) -> bool:
        return self.kind in _TWISTED_KINDS

    @property
    def has_x0(self) -> bool:
        return self.kind in _ODD_KINDS

    @property
    def is_gl(self) -> bool:
        return self.kind in (SchemeKind.GL_NATURAL, SchemeKind.GL_TWISTED)

    def bosonic_variables(self) -> list[VariableId]:
        out: list[VariableId] = []
        if self.has_x0:
            out.append(x0())
        out.extend(x(i) for i in range(1, self.n + 1))
        out.extend(y(i) for i in range(1, self.n + 1))
        return out

    def fermionic_variables(self) -> list[VariableId]:
        out = [theta(r) for r in range(1, self.m + 1)]
        out.extend(vartheta(r) for r in range(1, self.m + 1))
        return out

    def variables(self) -> list[VariableId]:
        return self.bosonic_variables() + self.fermionic_variables()

    def describe(self) -> str:
        if self.is_twisted:
            return f"{self.kind.value}(n={self.n},m={self.m},n1={self.n1},n2={self.n2})"
        return f"{self.kind.value}(n={self.n},m={self.m})"


def _check_universe(m: SuperMonomial, scheme: GradingScheme) -> None:
    for v in m.variables():
        if v.family == Family.X0:
            if not scheme.has_x0:
                raise ValueError(f"{v.name()} illegal for {scheme.describe()}")
        elif v.family in (Family.X, Family.Y):
            if not (1 <= v.index <= scheme.n):
                raise ValueError(f"{v.name()} out of range for {scheme.describe()}")
        else:
            if not (1 <= v.index <= scheme.m):
                raise ValueError(f"{v.name()} out of range for {scheme.describe()}")


def _twisted_bidegree(m: SuperMonomial, scheme: GradingScheme) -> tuple[int, int]:
    n1, n2 = scheme.n1, scheme.n2
    l = lp = 0
    for v, e in m.bos:
        if v.family == Family.X:
            l += e if v.index > n1 else -e
        elif v.family == Family.Y:
            lp += e if v.index <= n2 else -e
    for v in m.ferm:
        if v.family == Family.THETA:
            l += 1
        else:
            lp += 1
    return l, lp


def grade(mono: SuperMonomial, scheme: GradingScheme) -> Label:
    """Grading label of a monomial: a pair for gl schemes, an integer for osp."""
    _check_universe(mono, scheme)
    kind = scheme.kind
    if kind == SchemeKind.GL_NATURAL:
        l = lp = 0
        for v, e in mono.bos:
            if v.family == Family.X:
                l += e
            else:
                lp += e
        for v in mono.ferm:
            if v.family == Family.THETA:
                l += 1
            else:
                lp += 1
        return (l, lp)
    if kind == SchemeKind.GL_TWISTED:
        return _twisted_bidegree(mono, scheme)
    if kind == SchemeKind.OSP_EVEN_NATURAL or kind == SchemeKind.OSP_ODD_NATURAL:
        return mono.degree()
    # twisted osp labels: x0 (if present) counts +1 per power
    e0 = mono.exponent(x0()) if scheme.has_x0 else 0
    if e0:
        bos = tuple((v, e) for v, e in mono.bos if v.family != Family.X0)
        mono = SuperMonomial(bos, mono.ferm)
    l, lp = _twisted_bidegree(mono, scheme)
    return e0 + l + lp


# ===================================================================
# slice enumeration
# ===================================================================

@dataclass(frozen=True)
class GradedSlice:
    scheme: GradingScheme
    label: Label
    degree_cap: Optional[int]
    basis: tuple[SuperMonomial, ...]

    @property
    def complete(self) -> bool:
        """True when the basis is the whole slice, not a capped truncation."""
        if self.scheme.is_twisted:
            return False
        if self.degree_cap is None:
            return True
        need = self.label if isinstance(self.label, int) else sum(self.label)
        return self.degree_cap >= need

    def dimension(self) -> int:
        return len(self.basis)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` non-negative integers summing to `total`."""
    if total < 0:
        return
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cut:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def _bos_monos(vars_: Sequence[VariableId], total: int) -> Iterator[tuple[tuple[VariableId, int], ...]]:
    for comp in _compositions(total, len(vars_)):
        yield tuple((v, e) for v, e in zip(vars_, comp) if e)


def _ferm_words(vars_: Sequence[VariableId], count: int) -> Iterator[tuple[VariableId, ...]]:
    yield from itertools.combinations(vars_, count)


def enumerate_slice(
    scheme: GradingScheme, label: Label, degree_cap: Optional[int] = None
) -> GradedSlice:
    """Enumerate the canonical monomial basis of one graded slice.

    Twisted schemes and the x0 ladders have infinite (or cap-gated) slices,
    so they insist on a degree cap; the natural gl / even-osp slices are
    finite and enumerate fully.
    """
    if scheme.kind in _CAP_REQUIRED_KINDS and degree_cap is None:
        raise ValueError(f"{scheme.describe()} requires a degree cap")
    if degree_cap is not None and degree_cap < 0:
        raise ValueError("degree cap must be non-negative")

    if scheme.is_gl:
        if not (isinstance(label, tuple) and len(label) == 2):
            raise ValueError("gl schemes take a bidegree label (l, lp)")
    else:
        if not isinstance(label, int):
            raise ValueError("osp schemes take an integer label k")

    gen = _SLICE_GENERATORS[scheme.kind]
    basis = sorted(gen(scheme, label, degree_cap), key=lambda m: m.sort_key())
    return GradedSlice(scheme, label, degree_cap, tuple(basis))


def _slice_gl_natural(scheme, label, cap):
    l, lp = label
    if l < 0 or lp < 0:
        return
    if cap is not None and l + lp > cap:
        return
    thetas = [theta(r) for r in range(1, scheme.m + 1)]
    vthetas = [vartheta(r) for r in range(1, scheme.m + 1)]
    xs = [x(i) for i in range(1, scheme.n + 1)]
    ys = [y(i) for i in range(1, scheme.n + 1)]
    for t in range(0, min(scheme.m, l) + 1):
        for v in range(0, min(scheme.m, lp) + 1):
            for tw in _ferm_words(thetas, t):
                for vw in _ferm_words(vthetas, v):
                    for bx in _bos_monos(xs, l - t):
                        for by in _bos_monos(ys, lp - v):
                            yield SuperMonomial(bx + by, tw + vw)


def _slice_osp_even_natural(scheme, label, cap):
    k = label
    if k < 0:
        return
    if cap is not None and k > cap:
        return
    ferms = scheme.fermionic_variables()
    bos = scheme.bosonic_variables()
    for fcount in range(0, min(2 * scheme.m, k) + 1):
        for fw in _ferm_words(ferms, fcount):
            for bm in _bos_monos(bos, k - fcount):
                yield SuperMonomial(bm, fw)


def _slice_osp_odd_natural(scheme, label, cap):
    yield from _slice_osp_even_natural(scheme, label, cap)


def _twisted_groups(scheme):
    n, n1, n2 = scheme.n, scheme.n1, scheme.n2
    neg_x = [x(i) for i in range(1, n1 + 1)]
    pos_x = [x(i) for i in range(n1 + 1, n + 1)]
    pos_y = [y(i) for i in range(1, n2 + 1)]
    neg_y = [y(i) for i in range(n2 + 1, n + 1)]
    return neg_x, pos_x, pos_y, neg_y


def _slice_gl_twisted_pairs(scheme, label, cap):
    """(l, lp) slice of the twisted bidegree, total degree <= cap."""
    l, lp = label
    neg_x, pos_x, pos_y, neg_y = _twisted_groups(scheme)
    thetas = [theta(r) for r in range(1, scheme.m + 1)]
    vthetas = [vartheta(r) for r in range(1, scheme.m + 1)]
    for t in range(0, scheme.m + 1):
        for v in range(0, scheme.m + 1):
            for a in range(0, cap + 1):        # degree in x1..x_{n1}
                b = l - t + a                  # degree in x_{n1+1}..x_n
                if b < 0 or a + b + t + v > cap:
                    continue
                for d in range(0, cap + 1):    # degree in y_{n2+1}..y_n
                    c = lp - v + d             # degree in y1..y_{n2}
                    if c < 0 or a + b + c + d + t + v > cap:
                        continue
                    for tw in _ferm_words(thetas, t):
                        for vw in _ferm_words(vthetas, v):
                            for ba in _bos_monos(neg_x, a):
                                for bb in _bos_monos(pos_x, b):
                                    for bc in _bos_monos(pos_y, c):
                                        for bd in _bos_monos(neg_y, d):
                                            yield SuperMonomial(
                                                tuple(sorted(ba + bb + bc + bd)),
                                                tw + vw,
                                            )


def _slice_osp_even_twisted(scheme, label, cap):
    k = label
    for l in range(-cap, cap + 1):
        yield from _slice_gl_twisted_pairs(scheme, (l, k - l), cap)


def _slice_osp_odd_twisted(scheme, label, cap):
    k = label
    for e0 in range(0, cap + 1):
        head = ((x0(), e0),) if e0 else ()
        for l in range(-(cap - e0), cap - e0 + 1):
            for mono in _slice_gl_twisted_pairs(scheme, (l, k - e0 - l), cap - e0):
                yield SuperMonomial(head + mono.bos, mono.ferm)


_SLICE_GENERATORS = {
    SchemeKind.GL_NATURAL: _slice_gl_natural,
    SchemeKind.GL_TWISTED: _slice_gl_twisted_pairs,
    SchemeKind.OSP_EVEN_NATURAL: _slice_osp_even_natural,
    SchemeKind.OSP_EVEN_TWISTED: _slice_osp_even_twisted,
    SchemeKind.OSP_ODD_NATURAL: _slice_osp_odd_natural,
    SchemeKind.OSP_ODD_TWISTED: _slice_osp_odd_twisted,
}


# ===================================================================
# text format
# ===================================================================

def render_polynomial(p: SuperPolynomial) -> str:
    return p.render()


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>(?:x|y|th|vt)\d+)|(?P<op>[*^+-]))"
)


def _tokenize(text: str) -> list:
    pos = 0
    out = []
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo is None:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot parse polynomial at: {text[pos:]!r}")
        if mo.group("num") is not None:
            out.append(("num", Fraction(mo.group("num"))))
        elif mo.group("name") is not None:
            out.append(("var", parse_variable(mo.group("name"))))
        else:
            out.append(("op", mo.group("op")))
        pos = mo.end()
    return out


def parse_polynomial(text: str) -> SuperPolynomial:
    """Parse the render_polynomial format (sums of *-joined power factors)."""
    toks = _tokenize(text)
    if not toks:
        raise ValueError("empty polynomial text")
    total = SuperPolynomial.zero()
    i = 0
    sign = 1
    # leading sign
    while i < len(toks) and toks[i] == ("op", "-"):
        sign = -sign
        i += 1
    term = SuperPolynomial.scalar(sign)
    expect_factor = True
    while i < len(toks):
        kind, val = toks[i]
        if kind == "op" and val in "+-" and not expect_factor:
            total = total + term
            sign = 1 if val == "+" else -1
            i += 1
            while i < len(toks) and toks[i][0] == "op" and toks[i][1] in "+-":
                if toks[i][1] == "-":
                    sign = -sign
                i += 1
            term = SuperPolynomial.scalar(sign)
            expect_factor = True
            continue
        if kind == "op" and val == "*":
            i += 1
            expect_factor = True
            continue
        if kind == "num":
            term = term * val
            i += 1
            expect_factor = False
            continue
        if kind == "var":
            v = val
            exp = 1
            if i + 2 < len(toks) and toks[i + 1] == ("op", "^") and toks[i + 2][0] == "num":
                frac = toks[i + 2][1]
                if frac.denominator != 1:
                    raise ValueError("fractional exponent")
                exp = int(frac)
                i += 2
            if v.fermionic:
                if exp > 1:
                    term = SuperPolynomial.zero()
                elif exp == 1:
                    term = term * SuperPolynomial.variable(v)
            else:
                if exp:
                    term = term * SuperPolynomial.monomial(
                        SuperMonomial(((v, exp),), ())
                    )
            i += 1
            expect_factor = False
            continue
        raise ValueError(f"unexpected token {toks[i]!r}")
    if expect_factor:
        raise ValueError("dangling operator at end of polynomial text")
    return total + term
