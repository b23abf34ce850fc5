"""Integer-lattice layer for the framed cyclic quiver.

The quiver has cyclic vertices 0..m-1 (arrows i+1 -> i, indices mod m) plus a
framing vertex, labelled ``INF``, with one arrow INF -> 0.  Dimension vectors
live in Z^{m+1}, deformation parameters in C^{m+1}.  Everything here is exact
integer / complex arithmetic on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

INF = "inf"  # label of the framing vertex

Vertex = Union[int, str]

#: defensive bound for classify_root (malformed inputs)
CLASSIFY_CAP = 10_000

#: tolerance for the "is an integer" test on ratios of user-supplied doubles
INT_TOL = 1e-9


@dataclass(frozen=True)
class DimVector:
    """Dimension vector (n_inf, n_0, ..., n_{m-1})."""

    inf: int
    alpha: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        if len(self.alpha) < 1:
            raise ValueError("need at least one cyclic vertex")

    @property
    def m(self) -> int:
        return len(self.alpha)

    def entry(self, v: Vertex) -> int:
        return self.inf if v == INF else self.alpha[v % self.m]

    def with_entry(self, v: Vertex, value: int) -> "DimVector":
        if v == INF:
            return DimVector(value, self.alpha)
        a = list(self.alpha)
        a[v % self.m] = value
        return DimVector(self.inf, tuple(a))

    def height(self) -> int:
        return self.inf + sum(self.alpha)

    def is_zero(self) -> bool:
        return self.inf == 0 and all(a == 0 for a in self.alpha)


@dataclass(frozen=True)
class ParamVector:
    """Deformation parameter (lambda_inf, lambda_0, ..., lambda_{m-1})."""

    inf: complex
    lam: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(complex(x) for x in self.lam))
        object.__setattr__(self, "inf", complex(self.inf))

    @property
    def m(self) -> int:
        return len(self.lam)

    def entry(self, v: Vertex) -> complex:
        return self.inf if v == INF else self.lam[v % self.m]

    def dot(self, beta: DimVector) -> complex:
        _check_m(self.m, beta.m)
        return self.inf * beta.inf + sum(
            l * a for l, a in zip(self.lam, beta.alpha)
        )


@dataclass(frozen=True)
class RootClass:
    """Outcome of root classification, with a replayable reflection word."""

    tag: str  # "real" | "imaginary" | "not_a_root"
    witness: tuple[Vertex, ...]


def _check_m(m1: int, m2: int):
    if m1 != m2:
        raise ValueError(f"mismatched quiver sizes {m1} != {m2}")


def vertices(m: int) -> list[Vertex]:
    return [INF] + list(range(m))


def edges(m: int) -> list[tuple[Vertex, Vertex]]:
    """Arrows as (tail, head): m cyclic arrows i+1 -> i plus INF -> 0."""
    es: list[tuple[Vertex, Vertex]] = [((i + 1) % m, i) for i in range(m)]
    es.append((INF, 0))
    return es


def is_loop_free(v: Vertex, m: int) -> bool:
    if v == INF:
        return True
    if not 0 <= v < m:
        raise ValueError(f"vertex {v} out of range for m={m}")
    return m >= 2  # for m=1 the single cyclic vertex carries a loop


def ringel_bilinear(beta: DimVector, gamma: DimVector) -> int:
    """Euler-type bilinear form <beta, gamma> of the framed cyclic quiver."""
    _check_m(beta.m, gamma.m)
    m = beta.m
    total = beta.inf * gamma.inf + sum(
        b * g for b, g in zip(beta.alpha, gamma.alpha)
    )
    for t, h in edges(m):
        total -= beta.entry(t) * gamma.entry(h)
    return total


def ringel_p(beta: DimVector, gamma: DimVector) -> tuple[int, int, int]:
    """Return (<beta,gamma>, (beta,gamma), p(beta)) with p = 1 - <beta,beta>."""
    b = ringel_bilinear(beta, gamma)
    s = b + ringel_bilinear(gamma, beta)
    p = 1 - ringel_bilinear(beta, beta)
    return b, s, p


def cartan(i: Vertex, j: Vertex, m: int) -> int:
    """Symmetrised pairing (eps_i, eps_j)."""
    c = 2 if i == j else 0
    for t, h in edges(m):
        if (t == i and h == j) or (t == j and h == i):
            c -= 1 if i != j else 2
    return c


def sym_pairing(beta: DimVector, i: Vertex) -> int:
    """(beta, eps_i) = sum_j beta_j (eps_j, eps_i)."""
    m = beta.m
    return sum(beta.entry(v) * cartan(v, i, m) for v in vertices(m))


def simple_reflection(i: Vertex, beta: DimVector) -> DimVector:
    """Reflection s_i(beta) = beta - (beta, eps_i) eps_i at a loop-free vertex."""
    if not is_loop_free(i, beta.m):
        raise ValueError(f"vertex {i} carries a loop; reflection undefined")
    return beta.with_entry(i, beta.entry(i) - sym_pairing(beta, i))


def dual_reflection(i: Vertex, tau: ParamVector) -> ParamVector:
    """Dual reflection (r_i tau)_j = tau_j - (eps_i, eps_j) tau_i."""
    m = tau.m
    if not is_loop_free(i, m):
        raise ValueError(f"vertex {i} carries a loop; reflection undefined")
    ti = tau.entry(i)
    new_inf = tau.inf - cartan(i, INF, m) * ti
    new_lam = tuple(tau.lam[j] - cartan(i, j, m) * ti for j in range(m))
    return ParamVector(new_inf, new_lam)


def apply_weyl_word(word: Sequence[Vertex], beta: DimVector) -> DimVector:
    """Apply reflections left-to-right (first letter acts first)."""
    for i in word:
        beta = simple_reflection(i, beta)
    return beta


def apply_weyl_word_dual(word: Sequence[Vertex], tau: ParamVector) -> ParamVector:
    for i in word:
        tau = dual_reflection(i, tau)
    return tau


def is_generic(lam: Sequence[complex], m: int | None = None) -> bool:
    """Decide genericity of the cyclic deformation parameter.

    For m = 1 this is lambda_0 != 0.  For m >= 2 the total sum must be
    nonzero and, for each finite-type root of the affine cycle realised
    either as a consecutive interval sum or as a coordinate difference,
    the pairing divided by the total sum must not be an integer (within
    INT_TOL of the nearest integer).
    """
    lam = [complex(x) for x in lam]
    if m is None:
        m = len(lam)
    _check_m(m, len(lam))
    scale = max(1.0, max(abs(x) for x in lam))
    if m == 1:
        return abs(lam[0]) > INT_TOL * scale
    total = sum(lam)
    if abs(total) <= INT_TOL * scale:
        return False

    def integral(z: complex) -> bool:
        return abs(z - round(z.real)) <= INT_TOL

    # interval sums lambda_s + ... + lambda_{s+l-1} (cyclic, proper)
    for s in range(m):
        acc = 0.0 + 0.0j
        for l in range(1, m):
            acc += lam[(s + l - 1) % m]
            if integral(acc / total):
                return False
    # coordinate differences lambda_a - lambda_b
    for a in range(m):
        for b in range(a + 1, m):
            if integral((lam[a] - lam[b]) / total):
                return False
    return True


def _support_connected(beta: DimVector) -> bool:
    m = beta.m
    supp = {v for v in vertices(m) if beta.entry(v) != 0}
    if not supp:
        return False
    adj: dict[Vertex, set[Vertex]] = {v: set() for v in supp}
    for t, h in edges(m):
        if t in supp and h in supp and t != h:
            adj[t].add(h)
            adj[h].add(t)
    seen = set()
    stack = [next(iter(supp))]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(adj[v] - seen)
    return seen == supp


def classify_root(beta: DimVector) -> RootClass:
    """Classify beta as a real root, an imaginary root, or not a root.

    Minimisation: repeatedly reflect at a loop-free vertex with positive
    symmetric pairing (height strictly decreases), stopping at a simple
    root, inside the fundamental region, or on a sign violation.  The
    returned witness word replays the reduction via simple_reflection.
    """
    if beta.is_zero():
        raise ValueError("zero vector has no root classification")
    m = beta.m
    vals = [beta.entry(v) for v in vertices(m)]
    if any(x > 0 for x in vals) and any(x < 0 for x in vals):
        return RootClass("not_a_root", ())
    if all(x <= 0 for x in vals):
        beta = DimVector(-beta.inf, tuple(-a for a in beta.alpha))
    loop_free = [v for v in vertices(m) if is_loop_free(v, m)]
    word: list[Vertex] = []
    for _ in range(CLASSIFY_CAP):
        for v in loop_free:
            if beta.entry(v) == 1 and beta.with_entry(v, 0).is_zero():
                return RootClass("real", tuple(word))
        pairings = {v: sym_pairing(beta, v) for v in vertices(m)}
        pos = [v for v in loop_free if pairings[v] > 0]
        if not pos and all(p <= 0 for p in pairings.values()):
            if _support_connected(beta):
                return RootClass("imaginary", tuple(word))
            return RootClass("not_a_root", tuple(word))
        i = pos[0]
        nxt = simple_reflection(i, beta)
        word.append(i)
        if any(nxt.entry(v) < 0 for v in vertices(m)):
            return RootClass("not_a_root", tuple(word))
        beta = nxt
    raise RuntimeError("root classification did not terminate within cap")


def is_positive_root(beta: DimVector) -> bool:
    if all(beta.entry(v) == 0 for v in vertices(beta.m)):
        return False
    if any(beta.entry(v) < 0 for v in vertices(beta.m)):
        return False
    return classify_root(beta).tag in ("real", "imaginary")


def in_sigma_tau(tau: ParamVector, beta: DimVector) -> bool:
    """Membership test for dimension vectors carrying simple representations.

    Only the framed shape (1, alpha) with generic cyclic parameter is
    decided; there the criterion is exactly "beta is a positive root".
    """
    _check_m(tau.m, beta.m)
    scale = max(1.0, max(abs(x) for x in tau.lam), float(beta.height()))
    if abs(tau.dot(beta)) > 1e-12 * scale:
        raise ValueError("tau . beta must vanish")
    if not is_generic(tau.lam):
        raise ValueError(
            "parameter is not generic; the general membership test is not implemented"
        )
    if beta.inf != 1:
        raise ValueError("only framed dimension vectors (1, alpha) are supported")
    if any(a < 0 for a in beta.alpha):
        return False
    return is_positive_root(beta)


def reduce_to_cm(beta: DimVector) -> tuple[tuple[int, ...], int]:
    """Reduce (1, alpha) to the balanced vector (1, (n,...,n)) inside W_inf.

    At each step reflect at the smallest cyclic vertex whose symmetric
    pairing with beta is positive; the height strictly decreases, and for
    positive roots the procedure provably halts exactly at the balanced
    vector.  Returns the word in application order and n.  Applying the
    reversed word to (1, (n,...,n)) rebuilds beta.
    """
    if beta.inf != 1:
        raise ValueError("expected a framed dimension vector (1, alpha)")
    m = beta.m
    if any(a < 0 for a in beta.alpha):
        raise ValueError("entries must be nonnegative")
    cap = 64 * (m + max(beta.alpha, default=0) + 1)
    word: list[int] = []
    if m == 1:
        return (), beta.alpha[0]
    for _ in range(cap):
        pos = [k for k in range(m) if sym_pairing(beta, k) > 0]
        if not pos:
            n = beta.alpha[0]
            if any(a != n for a in beta.alpha):
                raise RuntimeError(
                    f"reduction stalled off the balanced vector at {beta}; "
                    "input is not a positive root"
                )
            return tuple(word), n
        k = pos[0]
        beta = simple_reflection(k, beta)
        word.append(k)
        if any(a < 0 for a in beta.alpha):
            raise RuntimeError(
                "reduction produced a negative entry; input is not a positive root"
            )
    raise RuntimeError(
        "reduction iteration cap exceeded; input is likely not a positive root"
    )
