"""Matrix representations of the framed cyclic quiver.

A point is a tuple (X_0..X_{m-1}, Y_0..Y_{m-1}, v, w) with X_i of shape
alpha_i x alpha_{i+1} (the arrow i+1 -> i), Y_i of shape alpha_{i+1} x alpha_i,
v a column of length alpha_0 and w a row of length alpha_0, satisfying the
deformed preprojective relations

    X_0 Y_0 - Y_{m-1} X_{m-1} + v w = lambda_0 I        (vertex 0)
    X_i Y_i - Y_{i-1} X_{i-1}       = lambda_i I        (vertex i != 0)
    -w v                            = lambda_inf        (framing vertex)

with lambda_inf = -lambda . alpha.  Note the trace of the cyclic relations
forces w v = lambda . alpha = -lambda_inf.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .weyl import DimVector, ParamVector, in_sigma_tau, is_generic

CERTIFY_TOL = 1e-10
COMPARE_TOL = 1e-6
GAUGE_COND_MAX = 1e12

POINT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class QuiverSetting:
    """The tuple (m, lambda, alpha) with derived tau and beta."""

    m: int
    lam: tuple[complex, ...]
    alpha: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(complex(x) for x in self.lam))
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        if self.m < 1 or len(self.lam) != self.m or len(self.alpha) != self.m:
            raise ValueError("lambda and alpha must have length m")
        if any(a < 0 for a in self.alpha):
            raise ValueError("alpha entries must be nonnegative")
        if not is_generic(self.lam):
            raise ValueError("lambda is not generic")

    @property
    def lam_inf(self) -> complex:
        return -sum(l * a for l, a in zip(self.lam, self.alpha))

    @property
    def tau(self) -> ParamVector:
        return ParamVector(self.lam_inf, self.lam)

    @property
    def beta(self) -> DimVector:
        return DimVector(1, self.alpha)

    @property
    def total_dim(self) -> int:
        return sum(self.alpha)

    def dim(self, i: int) -> int:
        return self.alpha[i % self.m]

    def close_to(self, other: "QuiverSetting", tol: float = 1e-9) -> bool:
        return (
            self.m == other.m
            and self.alpha == other.alpha
            and all(abs(a - b) <= tol for a, b in zip(self.lam, other.lam))
        )


@dataclass(frozen=True)
class QuiverPoint:
    """Raw matrix data of a representation, immutable after construction."""

    setting: QuiverSetting
    X: tuple[np.ndarray, ...]
    Y: tuple[np.ndarray, ...]
    v: np.ndarray  # column, shape (alpha_0, 1)
    w: np.ndarray  # row, shape (1, alpha_0)

    def __post_init__(self):
        s = self.setting
        X = tuple(np.asarray(x, dtype=complex) for x in self.X)
        Y = tuple(np.asarray(y, dtype=complex) for y in self.Y)
        v = np.asarray(self.v, dtype=complex).reshape(s.dim(0), 1)
        w = np.asarray(self.w, dtype=complex).reshape(1, s.dim(0))
        if len(X) != s.m or len(Y) != s.m:
            raise ValueError("need m matrices per arrow family")
        for i in range(s.m):
            if X[i].shape != (s.dim(i), s.dim(i + 1)):
                raise ValueError(
                    f"X[{i}] has shape {X[i].shape}, expected {(s.dim(i), s.dim(i + 1))}"
                )
            if Y[i].shape != (s.dim(i + 1), s.dim(i)):
                raise ValueError(
                    f"Y[{i}] has shape {Y[i].shape}, expected {(s.dim(i + 1), s.dim(i))}"
                )
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class BlockPoint:
    """Cyclic block assembly (X, Y, v, w, Lambda) of size N = sum(alpha)."""

    X_big: np.ndarray
    Y_big: np.ndarray
    v_big: np.ndarray
    w_big: np.ndarray
    Lambda_big: np.ndarray
    setting: QuiverSetting


def relation_matrices(p: QuiverPoint) -> list[np.ndarray]:
    """Residual matrices of the vertex relations, cyclic vertices then framing."""
    s = p.setting
    m = s.m
    out = []
    for i in range(m):
        r = p.X[i] @ p.Y[i] - p.Y[i - 1] @ p.X[i - 1] - s.lam[i] * np.eye(s.dim(i))
        if i == 0:
            r = r + p.v @ p.w
        out.append(r)
    out.append(-p.w @ p.v - s.lam_inf * np.eye(1))
    return out


def moment_residual(p: QuiverPoint) -> float:
    """Max Frobenius norm over the vertex relation residuals."""
    return max(float(np.linalg.norm(r)) for r in relation_matrices(p))


def base_point_n1(setting: QuiverSetting) -> QuiverPoint:
    """Explicit scalar solution at alpha = (1,...,1).

    Y_i = 1, X_0 = 0, X_i = lambda_1 + ... + lambda_i, v = 1,
    w = lambda_0 + ... + lambda_{m-1}.  For m = 1 the commutator vanishes and
    the point degenerates to X = Y = 0, v = 1, w = lambda_0.
    """
    m = setting.m
    if setting.alpha != (1,) * m:
        raise ValueError("base point requires alpha = (1,...,1)")
    one = np.ones((1, 1), dtype=complex)
    if m == 1:
        zero = np.zeros((1, 1), dtype=complex)
        return QuiverPoint(setting, (zero,), (zero,), one, setting.lam[0] * one)
    X = [np.zeros((1, 1), dtype=complex)]
    for i in range(1, m):
        X.append(sum(setting.lam[1 : i + 1]) * one)
    Y = [one.copy() for _ in range(m)]
    w = sum(setting.lam) * one
    return QuiverPoint(setting, tuple(X), tuple(Y), one, w)


# ----------------------------------------------------------------- the solver


def _pack(p: QuiverPoint) -> np.ndarray:
    return np.concatenate(
        [m.ravel() for m in (*p.X, *p.Y, p.v, p.w)]
    )


def _unpack(setting: QuiverSetting, x: np.ndarray) -> QuiverPoint:
    m = setting.m
    pos = 0
    mats = []
    shapes = [(setting.dim(i), setting.dim(i + 1)) for i in range(m)]
    shapes += [(setting.dim(i + 1), setting.dim(i)) for i in range(m)]
    shapes += [(setting.dim(0), 1), (1, setting.dim(0))]
    for shp in shapes:
        k = shp[0] * shp[1]
        mats.append(x[pos : pos + k].reshape(shp))
        pos += k
    return QuiverPoint(setting, tuple(mats[:m]), tuple(mats[m : 2 * m]), mats[2 * m], mats[2 * m + 1])


def _residual_vector(setting: QuiverSetting, x: np.ndarray) -> np.ndarray:
    p = _unpack(setting, x)
    return np.concatenate([r.ravel() for r in relation_matrices(p)])


def _jacobian(setting: QuiverSetting, x: np.ndarray, f0: np.ndarray) -> np.ndarray:
    # the relations are multilinear, so unit forward differences are exact
    n = x.size
    J = np.empty((f0.size, n), dtype=complex)
    for k in range(n):
        xk = x.copy()
        xk[k] += 1.0
        J[:, k] = _residual_vector(setting, xk) - f0
    return J


def solve_point(
    setting: QuiverSetting,
    seed: int,
    tol: float = CERTIFY_TOL,
    max_iter: int = 200,
    restarts: int = 5,
) -> QuiverPoint:
    """Find a point of the variety by Gauss-Newton least squares.

    Initial matrices have independent standard-normal real and imaginary
    parts drawn from a generator seeded with ``seed``; restarts draw fresh
    initial data from the same stream, so the output is deterministic.
    """
    if not in_sigma_tau(setting.tau, setting.beta):
        raise ValueError(
            f"beta = (1, {setting.alpha}) admits no simple representation"
        )
    rng = np.random.default_rng(seed)
    nvars = sum(
        setting.dim(i) * setting.dim(i + 1) * 2 for i in range(setting.m)
    ) + 2 * setting.dim(0)
    best = np.inf
    for _ in range(restarts):
        x = rng.standard_normal(nvars) + 1j * rng.standard_normal(nvars)
        f = _residual_vector(setting, x)
        for _ in range(max_iter):
            nf = np.linalg.norm(f)
            if nf <= tol * 1e-2:
                break
            J = _jacobian(setting, x, f)
            step, *_ = np.linalg.lstsq(J, -f, rcond=None)
            t = 1.0
            improved = False
            for _ in range(30):
                f_new = _residual_vector(setting, x + t * step)
                if np.linalg.norm(f_new) < nf:
                    x = x + t * step
                    f = f_new
                    improved = True
                    break
                t *= 0.5
            if not improved:
                break
        p = _unpack(setting, x)
        res = moment_residual(p)
        best = min(best, res)
        if res <= tol:
            return p
    raise RuntimeError(
        f"solver failed to certify a point (best residual {best:.3e} > {tol:.1e})"
    )


# ------------------------------------------------------------------ gauge


def gauge_apply(g: Sequence[np.ndarray], p: QuiverPoint) -> QuiverPoint:
    """Base change (g_i X_i g_{i+1}^{-1}, g_{i+1} Y_i g_i^{-1}, g_0 v, w g_0^{-1})."""
    s = p.setting
    g = [np.asarray(gi, dtype=complex) for gi in g]
    if len(g) != s.m:
        raise ValueError("need one invertible matrix per cyclic vertex")
    ginv = []
    for i, gi in enumerate(g):
        if gi.shape != (s.dim(i), s.dim(i)):
            raise ValueError(f"g[{i}] has wrong shape {gi.shape}")
        if gi.size and np.linalg.cond(gi) > GAUGE_COND_MAX:
            raise ValueError(f"g[{i}] is numerically singular")
        ginv.append(np.linalg.inv(gi) if gi.size else gi.reshape(gi.shape))
    X = tuple(g[i] @ p.X[i] @ ginv[(i + 1) % s.m] for i in range(s.m))
    Y = tuple(g[(i + 1) % s.m] @ p.Y[i] @ ginv[i] for i in range(s.m))
    return QuiverPoint(s, X, Y, g[0] @ p.v, p.w @ ginv[0])


# ------------------------------------------------------------------ blocks


def block_form(p: QuiverPoint) -> BlockPoint:
    """Assemble the cyclic N x N block matrices.

    X has X_i in block (i, i+1 mod m), Y has Y_i in block (i+1 mod m, i);
    v and w are supported on the leading alpha_0 coordinates, and
    Lambda = Diag(lambda_i I).  The assembled data satisfies
    XY - YX + vw = Lambda and w v = -lambda_inf.
    """
    s = p.setting
    m, N = s.m, s.total_dim
    offs = np.cumsum([0] + list(s.alpha))
    Xb = np.zeros((N, N), dtype=complex)
    Yb = np.zeros((N, N), dtype=complex)
    for i in range(m):
        j = (i + 1) % m
        Xb[offs[i] : offs[i + 1], offs[j] : offs[j] + s.dim(j)] = p.X[i]
        Yb[offs[j] : offs[j] + s.dim(j), offs[i] : offs[i + 1]] = p.Y[i]
    vb = np.zeros((N, 1), dtype=complex)
    wb = np.zeros((1, N), dtype=complex)
    vb[: s.dim(0)] = p.v
    wb[:, : s.dim(0)] = p.w
    Lb = np.zeros((N, N), dtype=complex)
    for i in range(m):
        idx = np.arange(offs[i], offs[i + 1])
        Lb[idx, idx] = s.lam[i]
    return BlockPoint(Xb, Yb, vb, wb, Lb, s)


def block_residual(b: BlockPoint) -> float:
    r1 = b.X_big @ b.Y_big - b.Y_big @ b.X_big + b.v_big @ b.w_big - b.Lambda_big
    r2 = b.w_big @ b.v_big + b.setting.lam_inf * np.eye(1)
    return max(float(np.linalg.norm(r1)), float(np.linalg.norm(r2)))


# ------------------------------------------------------------------ equality


def points_equal(p: QuiverPoint, q: QuiverPoint, rel_tol: float = COMPARE_TOL) -> bool:
    """Orbit equality decided through the generating trace invariants.

    Sound for generic lambda: every representation of shape (1, alpha) is
    then simple, orbits are closed, and the invariants separate them.
    """
    from .invariants import invariant_vector

    if not p.setting.close_to(q.setting):
        raise ValueError("points live in different settings")
    vp = invariant_vector(p)
    vq = invariant_vector(q)
    for key, a in vp.entries.items():
        b = vq.entries[key]
        if abs(a - b) > rel_tol * (1.0 + max(abs(a), abs(b))):
            return False
    return True


# ---------------------------------------------------------------- dimensions


def tangent_dimension(p: QuiverPoint, rank_tol: float = 1e-7) -> int:
    """Dimension of the variety at p: nullity of the linearised relations
    minus the rank of the infinitesimal gauge action (framing included)."""
    s = p.setting
    x = _pack(p)
    f0 = _residual_vector(s, x)
    J = _jacobian(s, x, f0)

    def rank(M: np.ndarray) -> int:
        if min(M.shape) == 0:
            return 0
        sv = np.linalg.svd(M, compute_uv=False)
        return int(np.sum(sv > rank_tol * max(1.0, sv[0])))

    null_J = x.size - rank(J)

    dirs = []
    for i in range(s.m):  # gl(alpha_i) directions
        d = s.dim(i)
        for a in range(d):
            for b in range(d):
                E = np.zeros((d, d), dtype=complex)
                E[a, b] = 1.0
                dX = [np.zeros_like(Xj) for Xj in p.X]
                dY = [np.zeros_like(Yj) for Yj in p.Y]
                dX[i] = E @ p.X[i]
                dX[i - 1] = dX[i - 1] - p.X[i - 1] @ E
                dY[i] = dY[i] - p.Y[i] @ E
                dY[i - 1] = dY[i - 1] + E @ p.Y[i - 1]
                dv = E @ p.v if i == 0 else np.zeros_like(p.v)
                dw = -p.w @ E if i == 0 else np.zeros_like(p.w)
                dirs.append(
                    np.concatenate([m.ravel() for m in (*dX, *dY, dv, dw)])
                )
    # framing gl(1) direction
    dirs.append(
        np.concatenate(
            [np.zeros_like(m).ravel() for m in (*p.X, *p.Y)]
            + [-p.v.ravel(), p.w.ravel()]
        )
    )
    G = np.array(dirs).T
    return null_J - rank(G)


# ------------------------------------------------------------------- file io


def _c2pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _mat2json(mat: np.ndarray) -> list:
    return [[_c2pair(z) for z in row] for row in np.asarray(mat)]


def _json2mat(rows, shape) -> np.ndarray:
    arr = np.array(
        [[complex(e[0], e[1]) for e in row] for row in rows], dtype=complex
    ).reshape(shape)
    return arr


def save_point(p: QuiverPoint, path: str):
    s = p.setting
    doc = {
        "format_version": POINT_FORMAT_VERSION,
        "m": s.m,
        "lambda": [_c2pair(l) for l in s.lam],
        "alpha": list(s.alpha),
        "X": [_mat2json(x) for x in p.X],
        "Y": [_mat2json(y) for y in p.Y],
        "v": [_c2pair(z) for z in p.v.ravel()],
        "w": [_c2pair(z) for z in p.w.ravel()],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)


def load_point(path: str) -> QuiverPoint:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format_version") != POINT_FORMAT_VERSION:
        raise ValueError(
            f"unsupported point file version {doc.get('format_version')!r}"
        )
    m = int(doc["m"])
    lam = tuple(complex(a, b) for a, b in doc["lambda"])
    alpha = tuple(int(a) for a in doc["alpha"])
    if len(lam) != m or len(alpha) != m:
        raise ValueError("lambda/alpha length does not match m")
    setting = QuiverSetting(m, lam, alpha)
    if len(doc["X"]) != m or len(doc["Y"]) != m:
        raise ValueError("need m matrices per arrow family")
    X = tuple(
        _json2mat(doc["X"][i], (setting.dim(i), setting.dim(i + 1)))
        for i in range(m)
    )
    Y = tuple(
        _json2mat(doc["Y"][i], (setting.dim(i + 1), setting.dim(i)))
        for i in range(m)
    )
    v = np.array([complex(a, b) for a, b in doc["v"]], dtype=complex)
    w = np.array([complex(a, b) for a, b in doc["w"]], dtype=complex)
    if v.size != setting.dim(0) or w.size != setting.dim(0):
        raise ValueError("v/w length does not match alpha_0")
    return QuiverPoint(setting, X, Y, v.reshape(-1, 1), w.reshape(1, -1))
