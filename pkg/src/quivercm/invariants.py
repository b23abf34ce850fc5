"""Trace invariants of cyclic quiver representations.

With A = Y_{m-1}...Y_0, B = X_0...X_{m-1}, C_0 = Id and
C_k = Y_{m-1}...Y_{m-k} X_{m-k}...X_{m-1}, the functions

    G[i,j,k] = Tr(A^i C_k B^j),    H[i,j,k] = w (A^i C_k B^j) v

generate the coordinate ring of the variety; by Cayley-Hamilton it is
enough to take max(m*i + k, m*j + k) <= N with N = sum(alpha).

Block-form bookkeeping: with the cyclic block matrices (X, Y, v, w),

    w Y^{mi+k} X^{mj+k} v  =  H[i,j,k]                    (exact),
    Tr(Y^{mi+k} X^{mj+k})  =  sum over base vertices t of the
                              vertex-t rotation of Tr(A^i C_k B^j).

The trace identity sums the m diagonal blocks, one per base vertex; the
per-vertex rotations differ from G[i,j,k] by lower-order corrections (already
visible at i=j=k=0, where the left side is N while G[0,0,0] = alpha_0).
``block_consistency`` checks exactly this recorded correspondence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .points import QuiverPoint, block_form


@dataclass(frozen=True)
class InvariantIndex:
    i: int
    j: int
    k: int

    def __post_init__(self):
        if self.i < 0 or self.j < 0 or self.k < 0:
            raise ValueError("indices must be nonnegative")


@dataclass(frozen=True)
class InvariantVector:
    entries: dict  # (family, i, j, k) -> complex
    setting: object


def cycle_matrices(p: QuiverPoint):
    """Return (A, B, [C_0..C_{m-1}]), all of size alpha_0 x alpha_0."""
    s = p.setting
    m = s.m
    A = np.eye(s.dim(0), dtype=complex)
    for i in range(m):
        A = p.Y[i] @ A
    B = np.eye(s.dim(0), dtype=complex)
    for i in range(m):
        B = B @ p.X[i]

    C = [np.eye(s.dim(0), dtype=complex)]
    for k in range(1, m):
        Ck = np.eye(s.dim(m - k), dtype=complex)
        for t in range(m - k, m):
            Ck = Ck @ p.X[t]
        for t in range(m - k, m):
            Ck = p.Y[t] @ Ck
        C.append(Ck)
    return A, B, C


def admissible_indices(p_or_setting) -> list[tuple[int, int, int]]:
    s = getattr(p_or_setting, "setting", p_or_setting)
    N, m = s.total_dim, s.m
    out = []
    for k in range(min(m, N + 1)):
        imax = (N - k) // m
        for i in range(imax + 1):
            for j in range(imax + 1):
                if max(m * i + k, m * j + k) <= N:
                    out.append((i, j, k))
    return out


def _word_matrix(p: QuiverPoint, idx: InvariantIndex) -> np.ndarray:
    A, B, C = cycle_matrices(p)
    if idx.k >= p.setting.m:
        raise ValueError(f"k={idx.k} out of range for m={p.setting.m}")
    return np.linalg.matrix_power(A, idx.i) @ C[idx.k] @ np.linalg.matrix_power(B, idx.j)


def invariant(p: QuiverPoint, family: str, idx: InvariantIndex) -> complex:
    """Evaluate G (trace) or H (w . v bilinear) at one admissible index."""
    s = p.setting
    if not (0 <= idx.k < s.m):
        raise ValueError(f"k={idx.k} out of range for m={s.m}")
    if max(s.m * idx.i + idx.k, s.m * idx.j + idx.k) > s.total_dim:
        raise ValueError(f"index {idx} outside the admissible box")
    M = _word_matrix(p, idx)
    if family == "G":
        return complex(np.trace(M))
    if family == "H":
        return complex((p.w @ M @ p.v)[0, 0])
    raise ValueError(f"unknown family {family!r}")


def invariant_vector(p: QuiverPoint) -> InvariantVector:
    """All admissible G and H values; identifies the gauge orbit."""
    A, B, C = cycle_matrices(p)
    entries = {}
    Apow = {0: np.eye(A.shape[0], dtype=complex)}
    Bpow = {0: np.eye(B.shape[0], dtype=complex)}

    def power(d, M, n):
        if n not in d:
            d[n] = power(d, M, n - 1) @ M
        return d[n]

    for (i, j, k) in admissible_indices(p):
        M = power(Apow, A, i) @ C[k] @ power(Bpow, B, j)
        entries[("G", i, j, k)] = complex(np.trace(M))
        entries[("H", i, j, k)] = complex((p.w @ M @ p.v)[0, 0])
    return InvariantVector(entries, p.setting)


def _rotated_cycle_value(p: QuiverPoint, i: int, j: int, k: int, base: int) -> complex:
    """Trace of the (i, j, k) cycle word read from base vertex ``base``."""
    s = p.setting
    m = s.m
    M = np.eye(s.dim(base), dtype=complex)
    vtx = base
    for _ in range(m * j + k):  # descending X-chain applied first
        nxt = (vtx - 1) % m
        M = p.X[nxt] @ M
        vtx = nxt
    for _ in range(m * i + k):
        M = p.Y[vtx] @ M
        vtx = (vtx + 1) % m
    assert vtx == base
    return complex(np.trace(M))


def block_consistency(p: QuiverPoint) -> float:
    """Cross-check per-arm invariants against the block matrices.

    H[i,j,k] must equal w Y^{mi+k} X^{mj+k} v exactly; the block trace of
    Y^{mi+k} X^{mj+k} must equal the sum of the m vertex rotations of the
    per-arm cycle word.  Returns the max relative deviation over the box.
    """
    b = block_form(p)
    s = p.setting
    m = s.m
    worst = 0.0
    for (i, j, k) in admissible_indices(p):
        Yp = np.linalg.matrix_power(b.Y_big, m * i + k)
        Xp = np.linalg.matrix_power(b.X_big, m * j + k)
        W = Yp @ Xp
        h_block = complex((b.w_big @ W @ b.v_big)[0, 0])
        h_arm = invariant(p, "H", InvariantIndex(i, j, k))
        g_block = complex(np.trace(W))
        g_arm_sum = sum(
            _rotated_cycle_value(p, i, j, k, t) for t in range(m)
        )
        for a, c in ((h_block, h_arm), (g_block, g_arm_sum)):
            dev = abs(a - c) / (1.0 + max(abs(a), abs(c)))
            worst = max(worst, dev)
    return worst


# -------------------------------------------------------------- serialization


def invariants_to_text(vec: InvariantVector) -> str:
    doc = {
        f"{fam}:{i}:{j}:{k}": [val.real, val.imag]
        for (fam, i, j, k), val in sorted(vec.entries.items())
    }
    return json.dumps(doc, indent=1)


def invariants_from_text(text: str) -> dict:
    doc = json.loads(text)
    out = {}
    for key, (re, im) in doc.items():
        fam, i, j, k = key.split(":")
        out[(fam, int(i), int(j), int(k))] = complex(re, im)
    return out
