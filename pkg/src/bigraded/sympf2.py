"""Sp_4(F_2) acting on totally non-orthogonal 5-subsets of F_2^4.

Vectors are 4-bit masks over the standard symplectic basis e1, f1, e2, f2
(bits 0..3), with pairing <u, v> = u1 v2 + u2 v1 + u3 v4 + u4 v3 (mod 2).
A totally non-orthogonal subset is a 5-element set of nonzero vectors whose
pairwise pairings are all 1; there are exactly six, and the action of the
symplectic group on them is a bijection onto Sym(6).

Matrices act on row vectors, v |-> v*M, so the permutation map is a
homomorphism in left-to-right composition order: perm(A*B) = perm(A) then
perm(B).  Permutations are stored as tuples p with p[i] = image of i
(0-based); "then" composition is compose(p, q)[i] = q[p[i]].

The canonical labels 1..6 reproduce a fixed printed enumeration of the six
subsets (see CANONICAL_SUBSETS); enumeration order alone is tie-broken by
sorted coordinate masks and then matched against that list.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import DomainError, InputError

DIM = 4


def pairing(u: int, v: int) -> int:
    """Standard symplectic pairing on bitmask vectors."""
    return (
        ((u >> 0) & (v >> 1) & 1)
        ^ ((u >> 1) & (v >> 0) & 1)
        ^ ((u >> 2) & (v >> 3) & 1)
        ^ ((u >> 3) & (v >> 2) & 1)
    )


_BASIS_NAMES = ("e1", "f1", "e2", "f2")


def vector_name(v: int) -> str:
    parts = [nm for i, nm in enumerate(_BASIS_NAMES) if (v >> i) & 1]
    return "+".join(parts) if parts else "0"


def vector_of_name(text: str) -> int:
    v = 0
    for part in text.split("+"):
        part = part.strip()
        if part == "0":
            continue
        if part not in _BASIS_NAMES:
            raise InputError(f"unknown basis vector {part!r}")
        v |= 1 << _BASIS_NAMES.index(part)
    return v


def _subset(*names: str) -> frozenset[int]:
    return frozenset(vector_of_name(nm) for nm in names)


# the printed enumeration that fixes the labels 1..6
CANONICAL_SUBSETS: tuple[frozenset[int], ...] = (
    _subset("e1", "f1", "e1+f1+e2", "e1+f1+f2", "e1+f1+e2+f2"),
    _subset("e2", "f2", "e2+f2+e1", "e2+f2+f1", "e2+f2+e1+f1"),
    _subset("e1", "e1+f1", "f1+e2", "f1+f2", "f1+e2+f2"),
    _subset("e2", "e2+f2", "f2+e1", "f2+f1", "f2+e1+f1"),
    _subset("f2", "e1+e2", "e1+f1+e2", "e2+f2", "f1+e2"),
    _subset("f1", "e1+e2", "e2+f2+e1", "e1+f1", "f2+e1"),
)


_SUBSET_CACHE: list[frozenset[int]] | None = None


def totally_nonorthogonal_subsets() -> list[frozenset[int]]:
    """Exhaustively enumerate the totally non-orthogonal 5-subsets of F_2^4,
    returned in canonical label order 1..6."""
    global _SUBSET_CACHE
    if _SUBSET_CACHE is not None:
        return _SUBSET_CACHE
    found = []
    vectors = [v for v in range(1, 16)]
    for combo in combinations(vectors, 5):
        if all(pairing(u, v) == 1 for u, v in combinations(combo, 2)):
            found.append(frozenset(combo))
    found.sort(key=lambda s: sorted(s))
    if len(found) != len(CANONICAL_SUBSETS):
        raise DomainError(f"expected {len(CANONICAL_SUBSETS)} subsets, found {len(found)}")
    if set(found) != set(CANONICAL_SUBSETS):
        raise DomainError("enumerated subsets do not match the canonical list")
    _SUBSET_CACHE = list(CANONICAL_SUBSETS)
    return _SUBSET_CACHE


# ---------------------------------------------------------------------------
# matrices over F_2, acting on row vectors


SympMatrix = tuple[int, int, int, int]  # rows as bitmasks


def apply_matrix(v: int, m: SympMatrix) -> int:
    """Row-vector action v |-> v*M: the image is the XOR of the rows of M
    selected by the bits of v."""
    out = 0
    for i in range(DIM):
        if (v >> i) & 1:
            out ^= m[i]
    return out


def matrix_from_rows(rows) -> SympMatrix:
    if len(rows) != DIM or any(len(r) != DIM for r in rows):
        raise InputError("need a 4x4 matrix")
    return tuple(sum((int(x) & 1) << j for j, x in enumerate(r)) for r in rows)


def parse_matrix(text: str) -> SympMatrix:
    """Parse "0,0,1,0;0,0,0,1;1,0,0,0;0,1,0,0"."""
    rows = []
    for chunk in text.split(";"):
        try:
            rows.append([int(x) for x in chunk.split(",")])
        except ValueError as exc:
            raise InputError(f"bad matrix chunk {chunk!r}") from exc
    return matrix_from_rows(rows)


SWAP_MATRIX: SympMatrix = matrix_from_rows(
    [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
)


def is_symplectic(m: SympMatrix) -> bool:
    basis = [1 << i for i in range(DIM)]
    return all(
        pairing(apply_matrix(u, m), apply_matrix(v, m)) == pairing(u, v)
        for u in basis
        for v in basis
    ) and _is_invertible(m)


def _is_invertible(m: SympMatrix) -> bool:
    rows = list(m)
    rank = 0
    for col in range(DIM):
        piv = next((i for i in range(rank, DIM) if (rows[i] >> col) & 1), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(DIM):
            if i != rank and (rows[i] >> col) & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank == DIM


def mat_mul(a: SympMatrix, b: SympMatrix) -> SympMatrix:
    """Row-convention product: (v*a)*b = v*(mat_mul(a, b))."""
    return tuple(apply_matrix(row, b) for row in a)


# ---------------------------------------------------------------------------
# permutations


Permutation = tuple[int, ...]


def compose_lr(p: Permutation, q: Permutation) -> Permutation:
    """Left-to-right composition: apply p, then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def perm_sign(p: Permutation) -> int:
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def cycle_notation(p: Permutation) -> str:
    seen = [False] * len(p)
    cycles = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)  # 1-based labels
            j = p[j]
        cycles.append("(" + "".join(str(x) for x in cyc) + ")")
    return "".join(cycles) if cycles else "()"


def phi(m: SympMatrix) -> Permutation:
    """The permutation of the six labeled subsets induced by v |-> v*M."""
    if not is_symplectic(m):
        raise DomainError("matrix does not preserve the symplectic form")
    subsets = totally_nonorthogonal_subsets()
    index = {s: i for i, s in enumerate(subsets)}
    out = []
    for s in subsets:
        img = frozenset(apply_matrix(v, m) for v in s)
        if img not in index:
            raise DomainError("image of a subset is not a subset; form not preserved")
        out.append(index[img])
    return tuple(out)


def all_symplectic_matrices() -> list[SympMatrix]:
    """Brute-force enumeration of Sp_4(F_2) over all 4x4 matrices."""
    out = []
    for r0 in range(16):
        for r1 in range(16):
            for r2 in range(16):
                for r3 in range(16):
                    m = (r0, r1, r2, r3)
                    if is_symplectic(m):
                        out.append(m)
    return out


@dataclass
class IsomorphismReport:
    group_order: int
    kernel_trivial: bool
    image_is_full_symmetric: bool
    homomorphism_checked_pairs: int
    has_transposition: bool
    has_six_cycle: bool

    @property
    def is_isomorphism(self) -> bool:
        return (
            self.group_order == 720
            and self.kernel_trivial
            and self.image_is_full_symmetric
        )


def verify_isomorphism(random_pairs: int = 10000, seed: int = 2) -> IsomorphismReport:
    """Enumerate Sp_4(F_2), check order 720, injectivity of the permutation
    map, surjectivity onto Sym(6), and the homomorphism law on random pairs."""
    import random as _random

    group = all_symplectic_matrices()
    perms = {}
    for m in group:
        perms[m] = phi(m)
    kernel_trivial = sum(1 for p in perms.values() if all(p[i] == i for i in range(6))) == 1
    image = set(perms.values())
    full = len(image) == 720 and len(group) == 720
    rng = _random.Random(seed)
    checked = 0
    for _ in range(random_pairs):
        a = group[rng.randrange(len(group))]
        b = group[rng.randrange(len(group))]
        if phi(mat_mul(a, b)) != compose_lr(perms[a], perms[b]):
            raise DomainError("permutation map failed the homomorphism law")
        checked += 1
    has_transposition = any(
        sorted(cycle_lengths(p)) == [1, 1, 1, 1, 2] for p in image
    )
    has_six_cycle = any(cycle_lengths(p) == [6] for p in image)
    return IsomorphismReport(
        group_order=len(group),
        kernel_trivial=kernel_trivial,
        image_is_full_symmetric=full,
        homomorphism_checked_pairs=checked,
        has_transposition=has_transposition,
        has_six_cycle=has_six_cycle,
    )


def cycle_lengths(p: Permutation) -> list[int]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        out.append(length)
    return sorted(out)
