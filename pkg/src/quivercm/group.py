"""The symplectic automorphism group acting on cyclic quiver varieties.

Generators are the triangular substitutions

    psi[k, mu]: (x, y) -> (x + mu * y^(km-1), y)
    phi[k, nu]: (x, y) -> (x, y + nu * x^(km-1))

with k >= 1.  On a representation the psi generator adds to each arm

    X_i += mu * Y_{i-1}...Y_0 (Y_{m-1}...Y_0)^(k-1) Y_{m-1}...Y_{i+1}

(and dually for phi on the Y arms), which in block form is exactly
X -> X + mu * Y^(km-1).  The psi generators commute among themselves, as do
the phi generators; for m >= 3 the group is their free product, so the
canonical form of a word is the alternating sequence of nonempty blocks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

from .points import QuiverPoint


@dataclass(frozen=True)
class GeneratorG:
    kind: str  # "psi" | "phi"
    k: int
    coeff: complex

    def __post_init__(self):
        if self.kind not in ("psi", "phi"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.k < 1:
            raise ValueError("generator exponent k must be >= 1")

    def inverse(self) -> "GeneratorG":
        return GeneratorG(self.kind, self.k, -self.coeff)


@dataclass(frozen=True)
class GroupWord:
    """Canonical form: alternating blocks, each a sorted tuple of (k, coeff)."""

    blocks: tuple[tuple[str, tuple[tuple[int, complex], ...]], ...]

    def generators(self) -> list[GeneratorG]:
        out = []
        for kind, entries in self.blocks:
            for k, c in entries:
                out.append(GeneratorG(kind, k, c))
        return out

    def is_identity(self) -> bool:
        return not self.blocks

    def inverse_generators(self) -> list[GeneratorG]:
        return [g.inverse() for g in reversed(self.generators())]


def canonicalize(gens: Iterable[GeneratorG]) -> GroupWord:
    """Merge adjacent same-kind generators (they commute), dropping zeros.

    For m >= 3 the result is the unique reduced word of the free product;
    for m = 2 only the abelian-block merging is performed.
    """
    blocks: list[tuple[str, dict[int, complex]]] = []
    for g in gens:
        if blocks and blocks[-1][0] == g.kind:
            blk = blocks[-1][1]
            blk[g.k] = blk.get(g.k, 0) + g.coeff
            if blk[g.k] == 0:
                del blk[g.k]
            if not blk:
                blocks.pop()
        elif g.coeff != 0:
            blocks.append((g.kind, {g.k: g.coeff}))
    # a zero block may have exposed two same-kind neighbours; iterate to fixpoint
    changed = True
    while changed:
        changed = False
        for t in range(len(blocks) - 1):
            if blocks[t][0] == blocks[t + 1][0]:
                kind, a = blocks[t]
                for k, c in blocks[t + 1][1].items():
                    a[k] = a.get(k, 0) + c
                    if a[k] == 0:
                        del a[k]
                del blocks[t + 1]
                if not a:
                    del blocks[t]
                changed = True
                break
    return GroupWord(
        tuple((kind, tuple(sorted(blk.items()))) for kind, blk in blocks)
    )


def _chain(mats: Sequence[np.ndarray], ident_dim: int) -> np.ndarray:
    if not mats:
        return np.eye(ident_dim, dtype=complex)
    return reduce(lambda a, b: a @ b, mats)


def apply_generator(g: GeneratorG, p: QuiverPoint) -> QuiverPoint:
    """Act on a point; the moment relations are preserved exactly."""
    s = p.setting
    m, k, c = s.m, g.k, g.coeff
    if c == 0:
        return p
    if g.kind == "psi":
        A = _chain([p.Y[t] for t in reversed(range(m))], s.dim(0))
        Acc = np.linalg.matrix_power(A, k - 1)
        newX = []
        for i in range(m):
            left = _chain([p.Y[t] for t in reversed(range(i))], s.dim(0))
            right = _chain([p.Y[t] for t in reversed(range(i + 1, m))], s.dim(i + 1))
            newX.append(p.X[i] + c * left @ Acc @ right)
        return QuiverPoint(s, tuple(newX), p.Y, p.v, p.w)
    B = _chain([p.X[t] for t in range(m)], s.dim(0))
    Bcc = np.linalg.matrix_power(B, k - 1)
    newY = []
    for i in range(m):
        left = _chain([p.X[t] for t in range(i + 1, m)], s.dim(0))
        right = _chain([p.X[t] for t in range(i)], s.dim(i))
        newY.append(p.Y[i] + c * left @ Bcc @ right)
    return QuiverPoint(s, p.X, tuple(newY), p.v, p.w)


def apply_word(word: Union[GroupWord, Iterable[GeneratorG]], p: QuiverPoint) -> QuiverPoint:
    """Apply generators left-to-right (first listed acts first)."""
    gens = word.generators() if isinstance(word, GroupWord) else list(word)
    for g in gens:
        p = apply_generator(g, p)
    return p


# -------------------------------------------------------- free algebra check

X_LETTER, Y_LETTER = "x", "y"


class FreePoly:
    """Polynomial in two noncommuting letters, dict word -> coefficient.

    Coefficients are arbitrary Python scalars (ints and Fractions keep the
    arithmetic exact).  Multiplication beyond the degree cap raises, so a
    passed check never silently truncated anything.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def letter(cls, ch: str) -> "FreePoly":
        return cls({ch: 1})

    @classmethod
    def const(cls, c) -> "FreePoly":
        return cls({"": c})

    def __add__(self, other: "FreePoly") -> "FreePoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FreePoly(out)

    def __sub__(self, other: "FreePoly") -> "FreePoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) - c
        return FreePoly(out)

    def scale(self, c) -> "FreePoly":
        return FreePoly({w: c * v for w, v in self.terms.items()})

    def mul(self, other: "FreePoly", cap: int) -> "FreePoly":
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if len(w1) + len(w2) > cap:
                    raise DegreeCapExceeded(
                        f"product degree {len(w1) + len(w2)} exceeds cap {cap}"
                    )
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return FreePoly(out)

    def power(self, n: int, cap: int) -> "FreePoly":
        out = FreePoly.const(1)
        for _ in range(n):
            out = out.mul(self, cap)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, FreePoly) and self.terms == other.terms

    def __repr__(self):
        return f"FreePoly({self.terms!r})"


class DegreeCapExceeded(ValueError):
    pass


def _generator_images(g: GeneratorG, m: int, cap: int) -> tuple[FreePoly, FreePoly]:
    x = FreePoly.letter(X_LETTER)
    y = FreePoly.letter(Y_LETTER)
    d = g.k * m - 1
    if d > cap:
        raise DegreeCapExceeded(f"generator needs degree {d} > cap {cap}")
    if g.kind == "psi":
        return x + y.power(d, cap).scale(g.coeff), y
    return x, y + x.power(d, cap).scale(g.coeff)


def _substitute(poly: FreePoly, img_x: FreePoly, img_y: FreePoly, cap: int) -> FreePoly:
    out = FreePoly()
    for word, c in poly.terms.items():
        term = FreePoly.const(1)
        for ch in word:
            term = term.mul(img_x if ch == X_LETTER else img_y, cap)
        out = out + term.scale(c)
    return out


def free_algebra_check(
    g: Union[GeneratorG, GroupWord, Sequence[GeneratorG]],
    m: int,
    degree_cap: int,
) -> bool:
    """Verify the substitution fixes the commutator xy - yx exactly.

    For words, additionally requires a nontrivial image (x or y moved);
    raises DegreeCapExceeded when the cap is too small to decide exactly.
    """
    if isinstance(g, GeneratorG):
        gens = [g]
        need_nontrivial = False
    else:
        gens = g.generators() if isinstance(g, GroupWord) else list(g)
        need_nontrivial = True
    if any(gg.k * m < 1 for gg in gens):
        raise ValueError("invalid generator")
    img_x, img_y = FreePoly.letter(X_LETTER), FreePoly.letter(Y_LETTER)
    for gg in gens:
        gx, gy = _generator_images(gg, m, degree_cap)
        img_x = _substitute(img_x, gx, gy, degree_cap)
        img_y = _substitute(img_y, gx, gy, degree_cap)
    omega = img_x.mul(img_y, degree_cap) - img_y.mul(img_x, degree_cap)
    target = FreePoly({X_LETTER + Y_LETTER: 1, Y_LETTER + X_LETTER: -1})
    if omega != target:
        return False
    if need_nontrivial and gens:
        if img_x == FreePoly.letter(X_LETTER) and img_y == FreePoly.letter(Y_LETTER):
            return False
    return True


# --------------------------------------------------------------- word syntax

_GEN_RE = re.compile(
    r"^\s*(psi|phi)\s*\(\s*(\d+)\s*,\s*([^,\s]+)\s*,\s*([^,\s)]+)\s*\)\s*$"
)


def parse_word(text: str) -> list[GeneratorG]:
    """Parse ``psi(k,re,im);phi(k,re,im)`` syntax into a generator list."""
    gens = []
    for part in text.split(";"):
        if not part.strip():
            continue
        mt = _GEN_RE.match(part)
        if not mt:
            raise ValueError(f"cannot parse generator {part!r}")
        kind, k, re_s, im_s = mt.groups()
        gens.append(GeneratorG(kind, int(k), complex(float(re_s), float(im_s))))
    return gens
