"""Finite group presentations and their abelianizations.

Abelianizing a presentation only sees exponent sums: the relators give an
integer matrix (relators x generators) whose Smith normal form reads off the
invariant factors of the abelianization.  Relator words are space-separated
generator tokens, a capitalized initial letter marking an inverse (``a B``
is a * b^-1); compact single-letter words like ``abAB`` are also accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .exactla import SmithForm, smith_normal_form


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[str, ...], ...]  # tokenized words, capital = inverse

    def __post_init__(self):
        lowered = {g.lower() for g in self.generators}
        if len(lowered) != len(self.generators):
            raise InputError("generator names must be distinct up to case")
        for word in self.relators:
            for tok in word:
                if tok.lower() not in lowered:
                    raise InputError(f"relator uses undeclared generator {tok!r}")


def tokenize_word(text: str) -> tuple[str, ...]:
    parts = text.split()
    if len(parts) > 1 or not text:
        return tuple(parts)
    if len(set(len(p) for p in parts)) == 1 and len(parts[0]) > 1:
        # compact form: every character is a single-letter generator token
        return tuple(text)
    return tuple(parts)


def presentation(gens, relator_words) -> Presentation:
    return Presentation(
        generators=tuple(gens),
        relators=tuple(tokenize_word(w) if isinstance(w, str) else tuple(w) for w in relator_words),
    )


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]  # divisibility chain, entries > 1

    def symbol(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def exponent_matrix(p: Presentation) -> list[list[int]]:
    """Relators-by-generators matrix of exponent sums."""
    gidx = {g: j for j, g in enumerate(p.generators)}
    rows = []
    for word in p.relators:
        row = [0] * len(p.generators)
        for tok in word:
            if tok.lower() in gidx and tok != tok.lower():
                row[gidx[tok.lower()]] -= 1
            elif tok in gidx:
                row[gidx[tok]] += 1
            else:
                raise InputError(f"bad token {tok!r} in relator")
        rows.append(row)
    return rows


def abelianization(p: Presentation) -> AbelianInvariants:
    rows = exponent_matrix(p)
    if not rows:
        return AbelianInvariants(free_rank=len(p.generators), torsion=())
    sf: SmithForm = smith_normal_form(rows)
    return AbelianInvariants(
        free_rank=sf.free_rank, torsion=tuple(d for d in sf.factors if d > 1)
    )


def parse_presentation(text: str) -> Presentation:
    """Presentation file: ``gens: a b`` then ``rel: a b a B A B`` lines."""
    gens: list[str] = []
    rels: list[tuple[str, ...]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gens:"):
            gens.extend(line[5:].split())
        elif line.startswith("rel:"):
            rels.append(tuple(line[4:].split()))
        else:
            raise InputError(f"bad presentation line: {raw!r}")
    if not gens:
        raise InputError("presentation has no generators")
    return Presentation(generators=tuple(gens), relators=tuple(rels))


BRAID3 = presentation(["a", "b"], ["a b a B A B"])
