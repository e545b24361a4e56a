"""Free graded-commutative differential algebras in bidegree boxes.

A CDGA here is: a finite ordered alphabet of bigraded letters (each letter a
named generator, possibly a bracket word like ``[sigma,sigma]`` or a tower
``xi(sigma)`` produced by `freealg`), a coefficient field, and a differential
given on letters by polynomial expressions, extended multiplicatively by the
graded Leibniz rule

    delta(m * n) = delta(m) * n + (-1)^d(m) m * delta(n).

Monomials use the Koszul sign convention in the homological degree d; the
filtration weight r is carried along but carries no signs.  In characteristic
2 every letter is polynomial; otherwise odd-d letters are exterior.

Homology is computed per bidegree with exact linear algebra.  Letters whose
differential is not explicitly given are closed: the named complexes this
reproduces arise as associated graded of a computational filtration in which
exactly the listed differentials survive, so assigning zero differential to
the deeper letters is the object those vanishing claims constrain, not an
approximation of it.

delta^2 = 0 is checked symbolically on every letter (and module generator)
at construction time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import DomainError, InputError
from . import exactla, freealg
from .exactla import GF, QQ, Matrix
from .grading import VanishingLine


@dataclass(frozen=True, order=True)
class Letter:
    g: int
    d: int
    r: int
    name: str

    def __post_init__(self):
        if self.g < 1 or self.d < 0:
            raise DomainError(f"bad letter grading: {self.name}")


def _letters_from_basis(basis) -> list[Letter]:
    return [Letter(g=x.g, d=x.d, r=x.r, name=x.name) for x in basis]


class CDGA:
    """Finitely generated free graded-commutative algebra with differential."""

    def __init__(self, fld, letters, differential=None, check=True):
        self.field = fld
        self.letters = sorted(letters)
        names = [x.name for x in self.letters]
        if len(set(names)) != len(names):
            raise InputError("duplicate letter names")
        self.index = {x.name: i for i, x in enumerate(self.letters)}
        self.n = len(self.letters)
        self.diff = {}
        self._basis_cache: dict[tuple[int, int], list] = {}
        for name, poly in (differential or {}).items():
            if name not in self.index:
                raise InputError(f"differential on unknown letter {name}")
            poly = {m: c for m, c in poly.items() if not fld.is_zero(c)}
            if poly:
                self.diff[name] = poly
        if check:
            self._check_homogeneous()
            self._check_d_squared()

    # -- polynomial layer ---------------------------------------------------

    def is_exterior(self, i: int) -> bool:
        return self.field.char != 2 and self.letters[i].d % 2 == 1

    def mono_bidegree(self, mono) -> tuple[int, int]:
        g = sum(e * x.g for e, x in zip(mono, self.letters))
        d = sum(e * x.d for e, x in zip(mono, self.letters))
        return g, d

    def mono_weight(self, mono) -> int:
        return sum(e * x.r for e, x in zip(mono, self.letters))

    def mono_name(self, mono) -> str:
        parts = []
        for e, x in zip(mono, self.letters):
            if e == 1:
                parts.append(x.name)
            elif e > 1:
                parts.append(f"{x.name}^{e}")
        return "*".join(parts) if parts else "1"

    def mono_of(self, exps: dict[str, int]):
        mono = [0] * self.n
        for name, e in exps.items():
            if name not in self.index:
                raise InputError(f"unknown letter {name}")
            mono[self.index[name]] = e
        return tuple(mono)

    def mono_mul(self, m1, m2):
        """Product of monomials with Koszul sign; None if an odd square dies."""
        out = []
        for i, (a, b) in enumerate(zip(m1, m2)):
            if a + b >= 2 and self.is_exterior(i):
                return None
            out.append(a + b)
        if self.field.char == 2:
            return 1, tuple(out)
        # interleave the factors of m2 into m1: each odd factor of m2 at index
        # j moves past the odd factors of m1 at indices > j
        sign = 0
        odd_tail = 0  # number of odd-d factors of m1 with index > j, built from the right
        odd_positions = [i for i in range(self.n) if self.letters[i].d % 2 == 1]
        tail_counts = {}
        acc = 0
        for i in reversed(range(self.n)):
            tail_counts[i] = acc
            if self.letters[i].d % 2 == 1:
                acc += m1[i]
        for j in odd_positions:
            if m2[j]:
                sign += m2[j] * tail_counts[j]
        return (-1) ** (sign % 2), tuple(out)

    def poly_add(self, p, q):
        f = self.field
        out = dict(p)
        for m, c in q.items():
            s = f.add(out.get(m, f.zero()), c)
            if f.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return out

    def poly_scale(self, p, c):
        f = self.field
        if f.is_zero(c):
            return {}
        return {m: f.mul(c, v) for m, v in p.items()}

    def poly_mul(self, p, q):
        f = self.field
        out = {}
        for m1, c1 in p.items():
            for m2, c2 in q.items():
                sm = self.mono_mul(m1, m2)
                if sm is None:
                    continue
                sign, m = sm
                c = f.mul(c1, c2)
                if sign < 0:
                    c = f.neg(c)
                s = f.add(out.get(m, f.zero()), c)
                if f.is_zero(s):
                    out.pop(m, None)
                else:
                    out[m] = s
        return out

    def poly_of_expr(self, text: str):
        return parse_poly(self, text)

    # -- differential -------------------------------------------------------

    def delta_mono(self, mono):
        """delta of a monomial, by the graded Leibniz rule."""
        f = self.field
        out = {}
        deg_prefix = 0  # total homological degree of letters left of position i
        for i in range(self.n):
            a = mono[i]
            if a:
                name = self.letters[i].name
                dpoly = self.diff.get(name)
                if dpoly:
                    coeff = f.of(a)
                    if f.char != 2 and deg_prefix % 2 == 1:
                        coeff = f.neg(coeff)
                    if not f.is_zero(coeff):
                        m_rest = list(mono)
                        m_rest[i] = a - 1
                        m_rest = tuple(m_rest)
                        deg_tail = sum(
                            mono[j] * self.letters[j].d for j in range(i + 1, self.n)
                        )
                        for n_mono, n_coeff in dpoly.items():
                            c = f.mul(coeff, n_coeff)
                            if f.char != 2:
                                nd = sum(e * x.d for e, x in zip(n_mono, self.letters))
                                if (nd * deg_tail) % 2 == 1:
                                    c = f.neg(c)
                            sm = self.mono_mul(m_rest, n_mono)
                            if sm is None:
                                continue
                            sign, m = sm
                            if sign < 0:
                                c = f.neg(c)
                            s = f.add(out.get(m, f.zero()), c)
                            if f.is_zero(s):
                                out.pop(m, None)
                            else:
                                out[m] = s
                deg_prefix += a * self.letters[i].d
        return out

    def delta_poly(self, p):
        out = {}
        for m, c in p.items():
            out = self.poly_add(out, self.poly_scale(self.delta_mono(m), c))
        return out

    def _check_homogeneous(self):
        for name, poly in self.diff.items():
            x = self.letters[self.index[name]]
            for m in poly:
                g, d = self.mono_bidegree(m)
                if (g, d) != (x.g, x.d - 1):
                    raise InputError(
                        f"differential of {name} is not homogeneous of bidegree "
                        f"(0,-1): term {self.mono_name(m)} at {(g, d)}"
                    )

    def _check_d_squared(self):
        for name in self.diff:
            mono = self.mono_of({name: 1})
            dd = self.delta_poly(self.delta_mono(mono))
            if dd:
                raise InputError(f"delta^2 != 0 on letter {name}")

    # -- bases and matrices ---------------------------------------------------

    def monomial_basis(self, bd: tuple[int, int]):
        """All monomials of bidegree bd, deterministically ordered."""
        if bd in self._basis_cache:
            return self._basis_cache[bd]
        g_t, d_t = bd
        out = []
        mono = [0] * self.n

        def rec(i, g, d):
            if g == g_t and d == d_t:
                out.append(tuple(mono))
                return
            if i >= self.n or g > g_t or d > d_t:
                return
            x = self.letters[i]
            max_e = 1 if self.is_exterior(i) else (g_t - g) // x.g
            if x.d:
                max_e = min(max_e, (d_t - d) // x.d)
            for e in range(max_e, -1, -1):
                mono[i] = e
                rec(i + 1, g + e * x.g, d + e * x.d)
            mono[i] = 0

        if (g_t, d_t) == (0, 0):
            out.append(tuple(mono))
        elif g_t >= 0 and d_t >= 0:
            rec(0, 0, 0)
        out.sort(reverse=True)
        self._basis_cache[bd] = out
        return out

    def differential_matrix(self, bd: tuple[int, int]) -> Matrix:
        """Matrix of delta from bidegree bd to (g, d-1) in the monomial bases."""
        g, d = bd
        cols = self.monomial_basis((g, d))
        rows = self.monomial_basis((g, d - 1)) if d >= 1 else []
        row_index = {m: i for i, m in enumerate(rows)}
        mat = Matrix(self.field, len(rows), len(cols))
        for j, m in enumerate(cols):
            for m2, c in self.delta_mono(m).items():
                mat.rows[row_index[m2]][j] = c
        return mat

    def quotient(self, names) -> "CDGA":
        """Delete the named letters and erase differential terms divisible by
        them.  This realizes the free-on-quotient description Lambda(L/<...>),
        not a general ideal quotient."""
        names = set(names)
        for nm in names:
            if nm not in self.index:
                raise InputError(f"cannot quotient by unknown letter {nm}")
        kept = [x for x in self.letters if x.name not in names]
        keep_idx = [i for i, x in enumerate(self.letters) if x.name not in names]
        new = CDGA(self.field, kept, {}, check=False)

        def push(poly):
            out = {}
            for m, c in poly.items():
                if any(m[self.index[nm]] for nm in names):
                    continue
                out[tuple(m[i] for i in keep_idx)] = c
            return out

        for nm, poly in self.diff.items():
            if nm in names:
                continue
            p = push(poly)
            if p:
                new.diff[nm] = p
        new._check_homogeneous()
        new._check_d_squared()
        return new


class DGModule:
    """A free module over a CDGA on finitely many bigraded module generators,
    with a differential valued in base tensor module."""

    def __init__(self, base: CDGA, module_gens, mdiff=None, check=True):
        self.base = base
        self.field = base.field
        self.module_gens = sorted(module_gens, key=lambda t: (t[1], t[2], t[0]))
        # module_gens: list of (name, g, d, r) with g, d >= 0
        self.mg_index = {t[0]: i for i, t in enumerate(self.module_gens)}
        if len(self.mg_index) != len(self.module_gens):
            raise InputError("duplicate module generator names")
        self.mdiff = {}
        for name, terms in (mdiff or {}).items():
            if name not in self.mg_index:
                raise InputError(f"module differential on unknown generator {name}")
            self.mdiff[name] = [(dict(p), e) for p, e in terms]
        if check:
            self._check()

    def _gen(self, name):
        return self.module_gens[self.mg_index[name]]

    def _check(self):
        for name, terms in self.mdiff.items():
            _, g0, d0, _ = self._gen(name)
            for p, e in terms:
                if e not in self.mg_index:
                    raise InputError(f"module differential hits unknown generator {e}")
                _, ge, de, _ = self._gen(e)
                for m in p:
                    g, d = self.base.mono_bidegree(m)
                    if (g + ge, d + de) != (g0, d0 - 1):
                        raise InputError(f"module differential of {name} not homogeneous")
            # delta^2 = 0 on the generator
            dd = {}
            for p, e in terms:
                dp = self.base.delta_poly(p)
                dd = self._acc(dd, dp, e, 1)
                for p2, e2 in self.mdiff.get(e, ()):
                    sign = -1 if (self.field.char != 2 and self._poly_deg(p) % 2 == 1) else 1
                    prod = self.base.poly_mul(p, p2)
                    dd = self._acc(dd, prod, e2, sign)
            if any(not self.field.is_zero(c) for c in dd.values()):
                raise InputError(f"delta^2 != 0 on module generator {name}")

    def _poly_deg(self, p):
        for m in p:
            return sum(e * x.d for e, x in zip(m, self.base.letters))
        return 0

    def _acc(self, out, poly, e, sign):
        f = self.field
        for m, c in poly.items():
            if sign < 0:
                c = f.neg(c)
            key = (m, e)
            s = f.add(out.get(key, f.zero()), c)
            if f.is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
        return out

    def monomial_basis(self, bd: tuple[int, int]):
        g, d = bd
        out = []
        for name, ge, de, _ in self.module_gens:
            if ge <= g and de <= d:
                for m in self.base.monomial_basis((g - ge, d - de)):
                    out.append((m, name))
        out.sort(key=lambda t: (self.mg_index[t[1]], t[0]), reverse=True)
        return out

    def delta_elt(self, m, e):
        """delta(m tensor e) = delta(m) e + (-1)^d(m) m * delta(e)."""
        f = self.field
        out = {}
        for m2, c in self.base.delta_mono(m).items():
            out = self._acc(out, {m2: c}, e, 1)
        md = sum(ee * x.d for ee, x in zip(m, self.base.letters))
        sign = -1 if (f.char != 2 and md % 2 == 1) else 1
        for p, e2 in self.mdiff.get(e, ()):
            prod = self.base.poly_mul({m: f.one()}, p)
            out = self._acc(out, prod, e2, sign)
        return out

    def differential_matrix(self, bd: tuple[int, int]) -> Matrix:
        g, d = bd
        cols = self.monomial_basis((g, d))
        rows = self.monomial_basis((g, d - 1)) if d >= 1 else []
        row_index = {k: i for i, k in enumerate(rows)}
        mat = Matrix(self.field, len(rows), len(cols))
        for j, (m, e) in enumerate(cols):
            for key, c in self.delta_elt(m, e).items():
                mat.rows[row_index[key]][j] = c
        return mat

    def mono_name(self, key):
        m, e = key
        base = self.base.mono_name(m)
        return e if base == "1" else f"{base}*{e}"


# ---------------------------------------------------------------------------
# homology tables and vanishing certificates


@dataclass
class HomologyTable:
    field_name: str
    box: tuple[int, int]
    dims: dict[tuple[int, int], int] = dc_field(default_factory=dict)

    def dim(self, g: int, d: int) -> int:
        return self.dims.get((g, d), 0)

    def sorted_items(self):
        return sorted((gd, n) for gd, n in self.dims.items() if n)


def homology_table(cx, box: tuple[int, int]) -> HomologyTable:
    """dim ker - dim im per bidegree.  The incoming differential at the top
    row is taken from bidegree (g, d+1) even when that falls outside the box,
    so no edge cell is overcounted (complexes built by `build_paper_complex`
    enumerate their alphabet one degree above the box for exactly this
    reason)."""
    g_max, d_max = box
    ranks: dict[tuple[int, int], int] = {}

    def rank_at(g, d):
        if d < 1:
            return 0
        if (g, d) not in ranks:
            ranks[(g, d)] = exactla.rank(cx.differential_matrix((g, d)))
        return ranks[(g, d)]

    dims = {}
    for g in range(0, g_max + 1):
        for d in range(0, d_max + 1):
            n = len(cx.monomial_basis((g, d)))
            if n == 0:
                continue
            h = (n - rank_at(g, d)) - rank_at(g, d + 1)
            if h:
                dims[(g, d)] = h
    return HomologyTable(field_name=cx.field.name, box=box, dims=dims)


@dataclass
class VanishingReport:
    certified: bool
    line: VanishingLine
    box: tuple[int, int]
    table: HomologyTable
    violation: tuple[int, int, int] | None  # (g, d, dim) of the first bad cell


def verify_vanishing(cx, line, box: tuple[int, int]) -> VanishingReport:
    """Certify that homology vanishes at every in-box bidegree strictly below
    the line; otherwise report the first violating bidegree."""
    if isinstance(line, Fraction):
        line = VanishingLine(lam=line)
    table = homology_table(cx, box)
    for (g, d) in sorted(table.dims):
        if line.strictly_below((g, d)) and table.dims[(g, d)]:
            return VanishingReport(False, line, box, table, (g, d, table.dims[(g, d)]))
    return VanishingReport(True, line, box, table, None)


# ---------------------------------------------------------------------------
# the named complexes


PRESETS = ("vanishA", "vanishB", "intstab-f2", "intstab-fl", "A-algebra-fl")


def _require(cdga: CDGA, names):
    missing = [nm for nm in names if nm not in cdga.index]
    if missing:
        raise InputError(f"box too small for preset: missing letters {missing}")


def build_paper_complex(preset: str, box: tuple[int, int] | None = None, ell: int | None = None):
    """Construct one of the named complexes.

    vanishA        Lambda_Q(L/<sigma,lambda>) on sigma(1,0), lambda(3,2),
                   rho(2,2), with d(rho) = [sigma,sigma].
    vanishB        as vanishA plus rho'(4,4) with d(rho') = [sigma,lambda].
    intstab-f2     F2 module complex (1, rho4) over the xi-tower algebra on
                   sigma, tau, rho1, rho2, rho3 mod sigma; d(rho2) = xi(sigma),
                   d(rho4) = rho3.
    intstab-fl     odd-ell analogue; d(rho2) = -(1/2)[sigma,sigma].
    A-algebra-fl   the full algebra over F_ell with d(rho1) = 10 sigma tau,
                   d(rho2) = Q1(sigma) - 3 sigma tau, d(rho3) = sigma^2 tau.

    The letter alphabet is enumerated with degree bound one above the box so
    the homology table has complete incoming differentials on its top row.
    """
    if preset in ("vanishA", "vanishB"):
        box = box or (8, 8)
        gens = [freealg.gen("sigma", 1, 0), freealg.gen("lambda", 3, 2), freealg.gen("rho", 2, 2)]
        if preset == "vanishB":
            gens.append(freealg.gen("rho'", 4, 4))
        letter_box = (box[0], box[1] + 1)
        letters = _letters_from_basis(freealg.free_graded_lie_basis(gens, letter_box))
        full = CDGA(QQ, letters, {}, check=False)
        _require(full, ["rho", "[sigma,sigma]"] + (["rho'", "[sigma,lambda]"] if preset == "vanishB" else []))
        full.diff["rho"] = {full.mono_of({"[sigma,sigma]": 1}): Fraction(1)}
        if preset == "vanishB":
            full.diff["rho'"] = {full.mono_of({"[sigma,lambda]": 1}): Fraction(1)}
        full._check_homogeneous()
        full._check_d_squared()
        return full.quotient(["sigma", "lambda"])

    if preset in ("intstab-f2", "intstab-fl", "A-algebra-fl"):
        if preset == "intstab-f2":
            ell = 2
        if ell is None:
            raise InputError(f"preset {preset} needs a prime ell")
        fld = GF(ell)
        box = box or (6, 6)
        letter_box = (box[0], box[1] + 1)
        gens = [
            freealg.gen("sigma", 1, 0, 0),
            freealg.gen("tau", 1, 1, 1),
            freealg.gen("rho1", 2, 2, 2),
            freealg.gen("rho2", 2, 2, 2),
            freealg.gen("rho3", 3, 2, 2),
        ]
        if ell == 2:
            basis = freealg.cohen_generators_f2(gens, letter_box)
            q1_name = "xi(sigma)"
        else:
            basis = freealg.free_graded_lie_basis(gens, letter_box)
            q1_name = "[sigma,sigma]"
        full = CDGA(fld, _letters_from_basis(basis), {}, check=False)
        _require(full, ["sigma", "tau", "rho1", "rho2", "rho3", q1_name])

        def q1_poly():
            # Q1(sigma): xi(sigma) at ell = 2, -(1/2)[sigma,sigma] at odd ell
            if ell == 2:
                return {full.mono_of({q1_name: 1}): 1}
            return {full.mono_of({q1_name: 1}): fld.of(Fraction(-1, 2))}

        sigma_tau = full.mono_of({"sigma": 1, "tau": 1})
        full.diff["rho1"] = {m: c for m, c in {sigma_tau: fld.of(10)}.items() if not fld.is_zero(c)}
        full.diff["rho2"] = full.poly_add(q1_poly(), {sigma_tau: fld.of(-3)})
        full.diff["rho3"] = {full.mono_of({"sigma": 2, "tau": 1}): fld.of(1)}
        full.diff = {k: v for k, v in full.diff.items() if v}
        full._check_homogeneous()
        full._check_d_squared()
        if preset == "A-algebra-fl":
            return full
        base = full.quotient(["sigma"])
        rho3_mono = base.mono_of({"rho3": 1})
        return DGModule(
            base,
            [("1", 0, 0, 0), ("rho4", 3, 3, 3)],
            {"rho4": [({rho3_mono: fld.one()}, "1")]},
        )

    raise InputError(f"unknown preset: {preset}")


# ---------------------------------------------------------------------------
# expression and file parsing


_TOKEN_RE = re.compile(r"\s*([+-]|\^|\*|\d+/\d+|\d+|\[[^\]]*\]|[A-Za-z_'][A-Za-z_0-9']*)")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise InputError(f"bad expression near: {text[pos:pos+20]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_poly(cdga: CDGA, text: str):
    """Parse ``c*x^a*y*[u,v]^b +- ...`` with integer or p/q coefficients."""
    f = cdga.field
    tokens = _tokenize(text)
    out: dict = {}
    i = 0
    sign = 1
    if not tokens:
        return out
    if tokens[0] in ("+", "-"):
        sign = 1 if tokens[0] == "+" else -1
        i = 1
    while i < len(tokens):
        coeff = Fraction(sign)
        exps: dict[str, int] = {}
        saw_factor = False
        expect_factor = True
        while i < len(tokens) and tokens[i] not in ("+", "-"):
            tok = tokens[i]
            if tok == "*":
                i += 1
                continue
            if re.fullmatch(r"\d+/\d+|\d+", tok):
                coeff *= Fraction(tok)
                i += 1
                saw_factor = True
                continue
            name = tok
            i += 1
            e = 1
            if i < len(tokens) and tokens[i] == "^":
                if i + 1 >= len(tokens) or not tokens[i + 1].isdigit():
                    raise InputError(f"bad exponent in {text!r}")
                e = int(tokens[i + 1])
                i += 2
            exps[name] = exps.get(name, 0) + e
            saw_factor = True
        if not saw_factor:
            raise InputError(f"empty term in {text!r}")
        mono = cdga.mono_of(exps)
        c = f.of(coeff)
        s = f.add(out.get(mono, f.zero()), c)
        if f.is_zero(s):
            out.pop(mono, None)
        else:
            out[mono] = s
        if i < len(tokens):
            sign = 1 if tokens[i] == "+" else -1
            i += 1
            if i >= len(tokens):
                raise InputError(f"dangling sign in {text!r}")
    return out


def parse_cdga_file(text: str, fld) -> CDGA:
    """CDGA spec file: letter lines ``name g d [r]`` and differential lines
    ``d name = <expr>``."""
    letters = []
    diff_lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("d ") or line.startswith("d\t"):
            if "=" not in line:
                raise InputError(f"bad differential line: {raw!r}")
            lhs, rhs = line[2:].split("=", 1)
            diff_lines.append((lhs.strip(), rhs.strip()))
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise InputError(f"bad letter line: {raw!r}")
        name = parts[0]
        try:
            g, d = int(parts[1]), int(parts[2])
            r = int(parts[3]) if len(parts) == 4 else d
        except ValueError as exc:
            raise InputError(f"bad letter line: {raw!r}") from exc
        letters.append(Letter(g=g, d=d, r=r, name=name))
    cx = CDGA(fld, letters, {}, check=False)
    for name, expr in diff_lines:
        if name not in cx.index:
            raise InputError(f"differential on undeclared letter {name}")
        p = parse_poly(cx, expr)
        if p:
            cx.diff[name] = p
    cx._check_homogeneous()
    cx._check_d_squared()
    return cx
