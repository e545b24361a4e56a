"""Tautological-ring calculator: kappa classes, the Euler class, Gysin
pushforward, primitive coproducts, and pairing evaluation.

Classes live in the polynomial ring on e (degree 2), kappa_1, kappa_2, ...
(degree 2i) and the auxiliary degree-2 class lambda1 (present only through
the recorded relation kappa_1 = 12 lambda1).  Coefficients are polynomials
in named formal parameters with exact rational coefficients, so symbolic
identities like pi_!(A e^2 + B e kappa_1) = (A - 6B) kappa_1 are literal
computations.

The Gysin map is linear over kappa-monomials and acts on Euler-class powers by

    e^0 -> 0,   e^1 -> (2 - 2g) * 1,   e^(i+1) -> kappa_i  (i >= 1),

so it needs the ambient genus as an explicit argument; the projection formula
pi_!(q * p) = q * pi_!(p) for q free of e is then automatic.

Coproducts use that the kappa_i are primitive: Delta(kappa_i) =
kappa_i (x) 1 + 1 (x) kappa_i, extended multiplicatively; n-fold expansions
are collected with multinomial coefficients and kept as explicit tensor
terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from .errors import DomainError, InputError


# ---------------------------------------------------------------------------
# formal-parameter coefficients

ParamMono = tuple[tuple[str, int], ...]  # sorted ((name, exp), ...)


class ParamPoly(dict):
    """Polynomial in named formal parameters over Q: {ParamMono: Fraction}."""

    @classmethod
    def const(cls, c) -> "ParamPoly":
        c = Fraction(c)
        return cls({(): c}) if c else cls()

    @classmethod
    def param(cls, name: str) -> "ParamPoly":
        return cls({((name, 1),): Fraction(1)})

    def __add__(self, other):
        out = ParamPoly(self)
        for m, c in other.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return out

    def __neg__(self):
        return ParamPoly({m: -c for m, c in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(other)
        out = ParamPoly()
        for m1, c1 in self.items():
            for m2, c2 in other.items():
                exps: dict[str, int] = dict(m1)
                for name, e in m2:
                    exps[name] = exps.get(name, 0) + e
                m = tuple(sorted(exps.items()))
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ParamPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self

    def render(self) -> str:
        if not self:
            return "0"
        parts = []
        for m, c in sorted(self.items()):
            factors = []
            if c == -1 and m:
                head = "-"
            elif c == 1 and m:
                head = ""
            else:
                head = str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
                if m:
                    head += "*"
            for name, e in m:
                factors.append(name if e == 1 else f"{name}^{e}")
            parts.append(head + "*".join(factors) if m else head)
        text = parts[0]
        for p in parts[1:]:
            text += p if p.startswith("-") else "+" + p
        return text

    def sorted_items(self):
        return sorted(self.items())


# ---------------------------------------------------------------------------
# tautological polynomials

TautMono = tuple[int, int, tuple[int, ...]]  # (e_exp, l1_exp, kappa exponents)


def _mono_degree(m: TautMono) -> int:
    e, l1, ks = m
    return 2 * e + 2 * l1 + sum(2 * (i + 1) * a for i, a in enumerate(ks))


def _trim(ks) -> tuple[int, ...]:
    ks = list(ks)
    while ks and ks[-1] == 0:
        ks.pop()
    return tuple(ks)


def mono_name(m: TautMono) -> str:
    e, l1, ks = m
    parts = []
    if e:
        parts.append("e" if e == 1 else f"e^{e}")
    if l1:
        parts.append("l1" if l1 == 1 else f"l1^{l1}")
    for i, a in enumerate(ks):
        if a:
            parts.append(f"k{i+1}" if a == 1 else f"k{i+1}^{a}")
    return "*".join(parts) if parts else "1"


class TautPoly(dict):
    """{TautMono: ParamPoly}; homogeneity is checked where operations need it."""

    def add_term(self, m: TautMono, c: ParamPoly) -> None:
        m = (m[0], m[1], _trim(m[2]))
        s = self.get(m, ParamPoly()) + c
        if s.is_zero():
            self.pop(m, None)
        else:
            self[m] = s

    def __add__(self, other):
        out = TautPoly(self)
        for m, c in other.items():
            out.add_term(m, c)
        return out

    def __mul__(self, other):
        out = TautPoly()
        for (e1, l1a, k1), c1 in self.items():
            for (e2, l1b, k2), c2 in other.items():
                n = max(len(k1), len(k2))
                ks = tuple(
                    (k1[i] if i < len(k1) else 0) + (k2[i] if i < len(k2) else 0)
                    for i in range(n)
                )
                out.add_term((e1 + e2, l1a + l1b, ks), c1 * c2)
        return out

    def scale(self, c) -> "TautPoly":
        c = ParamPoly.const(c) if isinstance(c, (int, Fraction)) else c
        out = TautPoly()
        for m, v in self.items():
            out.add_term(m, v * c)
        return out

    def degree(self) -> int:
        """Cohomological degree; raises on inhomogeneous input."""
        degs = {_mono_degree(m) for m in self}
        if not degs:
            return 0
        if len(degs) > 1:
            raise DomainError(f"inhomogeneous polynomial, degrees {sorted(degs)}")
        return degs.pop()

    def has_e(self) -> bool:
        return any(m[0] for m in self)

    def render(self) -> str:
        if not self:
            return "0"
        parts = []
        # descending powers with kappa monomials before l1, matching the
        # usual printed order 3*k1^2+32*k2
        for m in sorted(self.keys(), key=lambda m: (m[0], m[2], m[1]), reverse=True):
            c = self[m]
            cs = c.render()
            nm = mono_name(m)
            if nm == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(nm)
            elif cs == "-1":
                parts.append(f"-{nm}")
            elif "+" in cs or (cs.count("-") - cs.startswith("-")) > 0:
                parts.append(f"({cs})*{nm}")
            else:
                parts.append(f"{cs}*{nm}")
        text = parts[0]
        for p in parts[1:]:
            text += p if p.startswith("-") else "+" + p
        return text


def kappa(i: int, exp: int = 1) -> TautPoly:
    if i < 1:
        raise DomainError("kappa index must be >= 1 (kappa_0 enters only through the Gysin rule)")
    ks = [0] * i
    ks[i - 1] = exp
    p = TautPoly()
    p.add_term((0, 0, tuple(ks)), ParamPoly.const(1))
    return p


def euler(exp: int = 1) -> TautPoly:
    p = TautPoly()
    p.add_term((exp, 0, ()), ParamPoly.const(1))
    return p


def taut_const(c=1) -> TautPoly:
    p = TautPoly()
    p.add_term((0, 0, ()), ParamPoly.const(c))
    return p


# ---------------------------------------------------------------------------
# Gysin pushforward


def gysin_pushforward(p: TautPoly, genus: int) -> TautPoly:
    """Integration along the fiber of the universal genus-g surface bundle."""
    if genus < 0:
        raise DomainError("negative genus")
    p.degree()  # homogeneity check
    out = TautPoly()
    for (e, l1, ks), c in p.items():
        if l1:
            raise DomainError("Gysin pushforward is defined on e/kappa polynomials only")
        if e == 0:
            continue
        if e == 1:
            out.add_term((0, 0, ks), c * Fraction(2 - 2 * genus))
        else:
            i = e - 1  # e^(i+1) -> kappa_i
            ks2 = list(ks) + [0] * max(0, i - len(ks))
            ks2[i - 1] += 1
            out.add_term((0, 0, tuple(ks2)), c)
    return out


# ---------------------------------------------------------------------------
# relation ledger


@dataclass(frozen=True)
class Relation:
    poly_repr: tuple  # canonical items of the TautPoly, for hashability
    ambient_genus: int | None  # None: genus-independent
    source_label: str

    def poly(self) -> TautPoly:
        p = TautPoly()
        for m, items in self.poly_repr:
            p.add_term(m, ParamPoly(dict(items)))
        return p

    def degree(self) -> int:
        return self.poly().degree()


def make_relation(p: TautPoly, genus: int | None, label: str) -> Relation:
    p.degree()  # reject inhomogeneous relations
    repr_items = tuple(sorted((m, tuple(sorted(c.items()))) for m, c in p.items()))
    return Relation(poly_repr=repr_items, ambient_genus=genus, source_label=label)


def r12_restricted() -> TautPoly:
    """Morita's third relation for k = 7, restricted to kappa_1 and kappa_2
    (up to a nonzero scalar), as used for the degree-14 pairing."""
    p = TautPoly()
    for coeff, a, b in ((80435, 7, 0), (21719880, 5, 1), (1387036224, 3, 2), (17581100544, 1, 3)):
        p.add_term((0, 0, (a, b)), ParamPoly.const(coeff))
    return p


def builtin_ledger() -> list[Relation]:
    k1, k2 = kappa(1), kappa(2)
    l1 = TautPoly()
    l1.add_term((0, 1, ()), ParamPoly.const(1))
    return [
        make_relation(k1.scale(3) * k1 + k2.scale(32), 4, "genus-4 degree-4 relation"),
        make_relation(k1.scale(5) * k1 + k2.scale(72), 5, "genus-5 degree-4 relation"),
        make_relation(k1 + l1.scale(-12), None, "kappa1 = 12 lambda1"),
        make_relation(r12_restricted(), 18, "Morita third relation, k=7, kappa1/kappa2 part"),
    ]


@dataclass
class Ledger:
    relations: list[Relation] = dc_field(default_factory=builtin_ledger)
    # nonvanishing facts: (genus, monomial) known to be nonzero
    nonvanishing: list[tuple[int, TautMono]] = dc_field(
        default_factory=lambda: [(4, (0, 0, (1,))), (4, (0, 0, (0, 1)))]
    )

    def lookup(self, genus: int | None = None, degree: int | None = None) -> list[Relation]:
        out = []
        for r in self.relations:
            if genus is not None and r.ambient_genus not in (None, genus):
                continue
            if degree is not None and r.degree() != degree:
                continue
            out.append(r)
        return out

    def add_from_text(self, text: str, genus: int | None, label: str) -> None:
        self.relations.append(make_relation(parse_taut(text), genus, label))


# ---------------------------------------------------------------------------
# the H^3(Gamma_4) kernel deduction


@dataclass
class KernelReport:
    solution_dim: int
    constraints: list[str]
    contradiction: str | None
    insufficient: bool

    @property
    def zero_only(self) -> bool:
        return self.solution_dim == 0 and self.contradiction is None


def deduce_h43_kernel(ledger: Ledger | None = None) -> KernelReport:
    """Suppose A e + B kappa_1 is killed by multiplication by the Euler class
    at genus 4.  Push forward e*(Ae + B kappa_1) and e^2*(Ae + B kappa_1),
    reduce modulo the genus-4 degree-4 ledger, and solve for (A, B).

    With the built-in ledger (3 kappa_1^2 + 32 kappa_2 = 0, kappa_1 != 0,
    kappa_2 != 0) the solution space is {A = B = 0}.  Dropping kappa_2 != 0
    leaves a one-dimensional solution line, flagged as insufficient; a ledger
    that forces kappa_2 = 0 is reported as a contradiction.
    """
    ledger = ledger or Ledger()
    A, B = ParamPoly.param("A"), ParamPoly.param("B")
    p = euler().scale(A) + kappa(1).scale(B)
    push1 = gysin_pushforward(euler() * p, 4)
    push2 = gysin_pushforward(euler(2) * p, 4)

    # degree-4 kappa monomials: kappa_1^2 and kappa_2
    basis4 = [(0, 0, (2,)), (0, 0, (0, 1))]
    rel_rows = []
    for r in ledger.lookup(genus=4, degree=4):
        poly = r.poly()
        if any(m not in basis4 for m in poly):
            continue
        rel_rows.append([poly.get(m, ParamPoly()).get((), Fraction(0)) for m in basis4])
    # echelonize the relation rows (2 columns)
    pivots = {}
    for row in rel_rows:
        row = list(row)
        for col, prow in pivots.items():
            if row[col]:
                f = row[col] / prow[col]
                row = [x - f * y for x, y in zip(row, prow)]
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is not None:
            pivots[lead] = row
    nonvan = {m for g, m in ledger.nonvanishing if g == 4}
    contradiction = None
    if len(pivots) == len(basis4) and nonvan:
        contradiction = (
            "ledger relations span all degree-4 classes, forcing "
            + " and ".join(sorted(mono_name(m) for m in nonvan))
            + " to vanish"
        )

    constraints: list[str] = []
    param_rows: list[dict[str, Fraction]] = []

    def add_constraint(pp: ParamPoly, why: str):
        row: dict[str, Fraction] = {}
        for m, c in pp.items():
            if len(m) != 1 or m[0][1] != 1:
                raise DomainError("kernel deduction expects linear parameter terms")
            row[m[0][0]] = row.get(m[0][0], Fraction(0)) + c
        if any(row.values()):
            param_rows.append(row)
            constraints.append(why)

    # degree-2 line: push1 = c * kappa_1, and kappa_1 != 0 is in the ledger
    k1_coeff = push1.get((0, 0, (1,)), ParamPoly())
    if (4, (0, 0, (1,))) in ledger.nonvanishing:
        add_constraint(k1_coeff, f"coefficient of k1 in pi_!(e*(Ae+Bk1)): {k1_coeff.render()} = 0")
    # degree-4: reduce push2 modulo relations, then each surviving nonvanishing
    # monomial contributes a constraint
    vec = [push2.get(m, ParamPoly()) for m in basis4]
    for col in sorted(pivots):
        prow = pivots[col]
        coeff = vec[col]
        if not coeff.is_zero():
            scale = Fraction(1) / prow[col]
            vec = [v - coeff * (scale * prow[i]) for i, v in enumerate(vec)]
    for m, v in zip(basis4, vec):
        if v.is_zero():
            continue
        if (4, m) in ledger.nonvanishing:
            add_constraint(v, f"coefficient of {mono_name(m)} after reduction: {v.render()} = 0")

    # rank of the constraint system in parameters A, B
    names = sorted({n for row in param_rows for n in row})
    rows = [[row.get(n, Fraction(0)) for n in names] for row in param_rows]
    rk = 0
    for col in range(len(names)):
        piv = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for i in range(len(rows)):
            if i != rk and rows[i][col]:
                f = rows[i][col] / rows[rk][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
    dim = 2 - rk
    return KernelReport(
        solution_dim=dim,
        constraints=constraints,
        contradiction=contradiction,
        insufficient=(dim > 0 and contradiction is None),
    )


# ---------------------------------------------------------------------------
# coproducts and pairings


@dataclass(frozen=True)
class TensorTerm:
    coeff: ParamPoly
    slots: tuple[TautMono, ...]

    def render(self) -> str:
        c = self.coeff.render()
        body = " (x) ".join(mono_name(s) for s in self.slots)
        return body if c == "1" else f"{c} * {body}"


def _distributions(a: int, n: int):
    """All ways to put a identical items into n slots, with multinomials."""
    if n == 1:
        yield (a,), 1
        return
    for first in range(a + 1):
        for rest, ways in _distributions(a - first, n - 1):
            yield (first,) + rest, ways * comb(a, first)


def nfold_coproduct(p: TautPoly, n: int) -> list[TensorTerm]:
    """Full expansion of the (n-1)-fold iterated coproduct of a kappa
    polynomial, using primitivity of each kappa_i and multiplicativity."""
    if n < 2:
        raise DomainError("coproduct arity must be >= 2")
    if p.has_e():
        raise DomainError("coproduct is defined for kappa polynomials only")
    terms: dict[tuple[TautMono, ...], ParamPoly] = {}
    for (e, l1, ks), coeff in p.items():
        if l1:
            raise DomainError("coproduct is defined for kappa polynomials only")
        slotted = [((0, 0, ()),) * n]
        weights = [1]
        for i, a in enumerate(ks):
            if not a:
                continue
            new_slotted = []
            new_weights = []
            for slots, w in zip(slotted, weights):
                for dist, ways in _distributions(a, n):
                    ns = []
                    for s, cnt in zip(slots, dist):
                        kse = list(s[2]) + [0] * max(0, i + 1 - len(s[2]))
                        kse[i] += cnt
                        ns.append((0, 0, _trim(kse)))
                    new_slotted.append(tuple(ns))
                    new_weights.append(w * ways)
            slotted, weights = new_slotted, new_weights
        for slots, w in zip(slotted, weights):
            cur = terms.get(slots, ParamPoly()) + coeff * Fraction(w)
            if cur.is_zero():
                terms.pop(slots, None)
            else:
                terms[slots] = cur
    return [TensorTerm(coeff=c, slots=s) for s, c in sorted(terms.items())]


def restrict_terms(terms, slot_patterns) -> list[TensorTerm]:
    """Keep terms whose slot monomials match the per-slot allowed sets."""
    out = []
    for t in terms:
        if len(t.slots) != len(slot_patterns):
            raise InputError("pattern arity mismatch")
        if all(s in pat for s, pat in zip(t.slots, slot_patterns)):
            out.append(t)
    return out


@dataclass
class HomologyFunctional:
    """A linear functional on kappa monomials of one fixed degree; unlisted
    monomials pair to zero.  Values are formal-parameter polynomials."""

    name: str
    values: dict[TautMono, ParamPoly]

    def __post_init__(self):
        degs = {_mono_degree(m) for m in self.values}
        if len(degs) > 1:
            raise InputError(f"functional {self.name} mixes degrees {sorted(degs)}")
        self.degree = degs.pop() if degs else 0

    def pair(self, m: TautMono) -> ParamPoly:
        return self.values.get(m, ParamPoly())


def pair_tensor(terms, functionals) -> ParamPoly:
    """Sum over terms of coeff times the product of slotwise pairings."""
    total = ParamPoly()
    for t in terms:
        if len(t.slots) != len(functionals):
            raise InputError("slot count does not match functional count")
        acc = t.coeff
        for s, f in zip(t.slots, functionals):
            acc = acc * f.pair(s)
            if acc.is_zero():
                break
        total = total + acc
    return total


def pair_tensor_trace(terms, functionals):
    """As pair_tensor, also returning the nonzero per-term contributions."""
    total = ParamPoly()
    trace = []
    for t in terms:
        if len(t.slots) != len(functionals):
            raise InputError("slot count does not match functional count")
        acc = t.coeff
        for s, f in zip(t.slots, functionals):
            acc = acc * f.pair(s)
            if acc.is_zero():
                break
        if not acc.is_zero():
            trace.append((t, acc))
            total = total + acc
    return total, trace


def paper_63_functionals() -> list[HomologyFunctional]:
    """<lambda, kappa_1> = u; <x, kappa_2> = t, <x, kappa_1^2> = -(72/5) t."""
    u, t = ParamPoly.param("u"), ParamPoly.param("t")
    lam = HomologyFunctional("lambda", {(0, 0, (1,)): u})
    x = HomologyFunctional(
        "x", {(0, 0, (0, 1)): t, (0, 0, (2,)): t * Fraction(-72, 5)}
    )
    return [lam, lam, lam, x, x]


def paper_63_pairing() -> ParamPoly:
    """The degree-14 pairing of lambda (x) lambda (x) lambda (x) x (x) x
    against the 5-fold coproduct of the stored restricted relation."""
    return pair_tensor(nfold_coproduct(r12_restricted(), 5), paper_63_functionals())


# ---------------------------------------------------------------------------
# expression parsing


_TAUT_TOKEN = re.compile(r"\s*([+-]|\^|\*|\d+/\d+|\d+|[A-Za-z_][A-Za-z_0-9]*)")


def parse_taut(text: str) -> TautPoly:
    """Parse ``c*k1^a*k2^b*e^m`` expressions; names other than e, l1, k<i>
    are formal parameters."""
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TAUT_TOKEN.match(text, pos)
        if not m:
            raise InputError(f"bad expression near {text[pos:pos+20]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    out = TautPoly()
    i = 0
    sign = 1
    if tokens and tokens[0] in ("+", "-"):
        sign = 1 if tokens[0] == "+" else -1
        i = 1
    while i < len(tokens):
        coeff = ParamPoly.const(sign)
        e_exp = l1_exp = 0
        ks: dict[int, int] = {}
        saw = False
        while i < len(tokens) and tokens[i] not in ("+", "-"):
            tok = tokens[i]
            if tok == "*":
                i += 1
                continue
            exp = 1
            if re.fullmatch(r"\d+/\d+|\d+", tok):
                coeff = coeff * Fraction(tok)
                i += 1
                saw = True
                continue
            i += 1
            if i < len(tokens) and tokens[i] == "^":
                if i + 1 >= len(tokens) or not tokens[i + 1].isdigit():
                    raise InputError(f"bad exponent in {text!r}")
                exp = int(tokens[i + 1])
                i += 2
            saw = True
            if tok == "e":
                e_exp += exp
            elif tok == "l1":
                l1_exp += exp
            elif re.fullmatch(r"k\d+", tok):
                idx = int(tok[1:])
                if idx < 1:
                    raise InputError("kappa index must be >= 1")
                ks[idx] = ks.get(idx, 0) + exp
            else:
                coeff = coeff * (ParamPoly.param(tok) ** exp)
            saw = True
        if not saw:
            raise InputError(f"empty term in {text!r}")
        kmax = max(ks) if ks else 0
        kt = tuple(ks.get(j, 0) for j in range(1, kmax + 1))
        out.add_term((e_exp, l1_exp, kt), coeff)
        if i < len(tokens):
            sign = 1 if tokens[i] == "+" else -1
            i += 1
            if i >= len(tokens):
                raise InputError(f"dangling sign in {text!r}")
    return out
