"""Cartan projections, nilpotent weight filtrations, sl2 triples, stability tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ._linalg import null_space, numerical_rank, orth_basis, projective_normalize

NILPOTENT_TOL = 1e-9
SL2_TOL = 1e-8


# --- KAK / Cartan projection -------------------------------------------------


@dataclass(frozen=True)
class CartanData:
    """g = k_minus . exp(diag mu) . k_plus with orthogonal factors, mu nonincreasing."""

    k_minus: np.ndarray
    mu: np.ndarray
    k_plus: np.ndarray

    def reconstruct(self):
        return self.k_minus @ np.diag(np.exp(self.mu)) @ self.k_plus

    @property
    def chamber_pair(self):
        """(mu_1, mu_2), the dominant pair for 4x4 symplectic input."""
        return float(self.mu[0]), float(self.mu[1])


def kak(g) -> CartanData:
    """SVD-based Cartan decomposition with a deterministic sign convention."""
    g = np.asarray(g, dtype=float)
    u, s, vt = np.linalg.svd(g)
    if s[-1] <= 0:
        raise ValueError("singular matrix has no KAK decomposition")
    # fix signs: largest entry of each left singular vector made positive
    for i in range(u.shape[1]):
        j = int(np.argmax(np.abs(u[:, i])))
        if u[j, i] < 0:
            u[:, i] = -u[:, i]
            vt[i, :] = -vt[i, :]
    return CartanData(k_minus=u, mu=np.log(s), k_plus=vt)


def alpha1_gap(g) -> float:
    """mu_1 - mu_2, the first simple-root value of the Cartan projection."""
    d = kak(g)
    return float(d.mu[0] - d.mu[1])


def alpha1_gaps_batch(gs) -> np.ndarray:
    s = np.linalg.svd(np.asarray(gs, dtype=float), compute_uv=False)
    return np.log(s[..., 0]) - np.log(s[..., 1])


# --- nilpotent structure ------------------------------------------------------


def _matrix_scale(n):
    return max(1.0, float(np.linalg.norm(n)))


def nilpotent_order(N, tol=NILPOTENT_TOL):
    """Largest d with N^d != 0 (and N^{dim} must vanish); errors otherwise."""
    N = np.asarray(N, dtype=float)
    dim = N.shape[0]
    scale = _matrix_scale(N)
    powers = [np.eye(dim)]
    for _ in range(dim):
        powers.append(powers[-1] @ N)
    if np.linalg.norm(powers[dim]) > tol * scale**dim:
        raise ValueError("matrix is not nilpotent")
    d = 0
    for i in range(dim, 0, -1):
        if np.linalg.norm(powers[i]) > tol * max(1.0, scale**i):
            d = i
            break
    return d, powers


def jordan_chains(N, tol=NILPOTENT_TOL):
    """Jordan chain basis of a nilpotent N.

    Returns a list of chains, each a list [w, Nw, ..., N^{s-1} w].  The
    number of chains of each length is fixed by the kernel dimensions, so
    exactly that many tops are split off at every level.
    """
    N = np.asarray(N, dtype=float)
    dim = N.shape[0]
    d, powers = nilpotent_order(N, tol)
    scale = _matrix_scale(N)
    kernels = [np.zeros((dim, 0))]
    for i in range(1, d + 1):
        kernels.append(null_space(powers[i] / max(1.0, scale**i), atol=1e-12))
    kernels.append(np.eye(dim))  # N^{d+1} = 0 by definition of the order
    chains = []
    for s in range(d + 1, 0, -1):  # chain length s, tops have height s
        expected = kernels[s].shape[1] - kernels[s - 1].shape[1] - sum(
            1 for ch in chains if len(ch) > s
        )
        if expected <= 0:
            continue
        spanned = [kernels[s - 1]]
        for ch in chains:
            if len(ch) > s:
                spanned.append(ch[len(ch) - s][:, None])
        M = np.hstack(spanned)
        base = orth_basis(M) if M.shape[1] else M
        cand = kernels[s]
        proj = cand - base @ (base.T @ cand) if base.shape[1] else cand
        u, sv, _ = np.linalg.svd(proj, full_matrices=False)
        if sv[expected - 1] < 1e-8:
            raise ValueError("chain construction failed: degenerate tops")
        tops = u[:, :expected]
        for j in range(expected):
            w = tops[:, j]
            chain = [w]
            for _ in range(s - 1):
                chain.append(N @ chain[-1])
            chains.append(chain)
    total = sum(len(c) for c in chains)
    if total != dim:
        raise ValueError(f"chain construction failed: got {total} vectors, need {dim}")
    return chains


@dataclass(frozen=True)
class WeightFiltration:
    """Nested subspaces W_{-d} c ... c W_d = V attached to a nilpotent."""

    order: int
    levels: dict  # level i -> orthonormal basis (columns) of W_i

    def basis(self, i):
        d = self.order
        if i >= d:
            return self.levels[d]
        if i < -d:
            return self.levels[-d][:, :0]
        # stored levels cover -d..d
        return self.levels[i]

    def dim(self, i):
        return self.basis(i).shape[1]


def weight_filtration_from_chains(chains, dim) -> WeightFiltration:
    d = max(len(c) for c in chains) - 1
    by_weight = {}
    for ch in chains:
        s = len(ch)
        for j, v in enumerate(ch):
            by_weight.setdefault(s - 1 - 2 * j, []).append(v)
    levels = {}
    acc = []
    for i in range(-d, d + 1):
        acc.extend(by_weight.get(i, []))
        levels[i] = orth_basis(np.column_stack(acc)) if acc else np.zeros((dim, 0))
    return WeightFiltration(order=d, levels=levels)


def weight_filtration(N, tol=NILPOTENT_TOL) -> WeightFiltration:
    """The canonical weight filtration of a nilpotent N.

    Characterized by N(W_i) c W_{i-2} together with N^i inducing
    isomorphisms W_i/W_{i-1} -> W_{-i}/W_{-i-1}; computed here through the
    sl2 grading of a Jordan chain basis.
    """
    N = np.asarray(N, dtype=float)
    dim = N.shape[0]
    d, _ = nilpotent_order(N, tol)
    if d == 0:
        return WeightFiltration(order=0, levels={0: np.eye(dim)})
    chains = jordan_chains(N, tol)
    return weight_filtration_from_chains(chains, dim)


def weight_filtration_kernel_image(N, tol=NILPOTENT_TOL) -> WeightFiltration:
    """Independent construction: W_k = sum_i ker(N^{k+i+1}) & im(N^i)."""
    N = np.asarray(N, dtype=float)
    dim = N.shape[0]
    d, powers = nilpotent_order(N, tol)
    scale = _matrix_scale(N)
    kers = {0: np.zeros((dim, 0)), d + 1: np.eye(dim)}
    ims = {0: np.eye(dim), d + 1: np.zeros((dim, 0))}
    for i in range(1, d + 1):
        kers[i] = null_space(powers[i] / max(1.0, scale**i), atol=1e-12)
        ims[i] = orth_basis(powers[i] / max(1.0, scale**i), atol=1e-12)
    levels = {}
    for k in range(-d, d + 1):
        pieces = []
        for i in range(0, d + 1):
            j = k + i + 1
            if j <= 0:
                continue
            j = min(j, d + 1)
            ker = kers[j]
            im = ims[min(i, d + 1)]
            if ker.shape[1] == 0 or im.shape[1] == 0:
                continue
            from ._linalg import subspace_intersection

            inter = subspace_intersection(ker, im)
            if inter.shape[1]:
                pieces.append(inter)
        levels[k] = orth_basis(np.hstack(pieces)) if pieces else np.zeros((dim, 0))
    return WeightFiltration(order=d, levels=levels)


def unipotent_log(T, tol=1e-8):
    """log T by the finite series for unipotent T; errors if T - id is not nilpotent."""
    T = np.asarray(T, dtype=float)
    dim = T.shape[0]
    M = T - np.eye(dim)
    scale = max(1.0, np.linalg.norm(T))
    power = np.eye(dim)
    check = M
    for _ in range(dim - 1):
        check = check @ M
    if np.linalg.norm(check @ M) > tol * scale**dim:
        raise ValueError("matrix is not unipotent")
    out = np.zeros_like(M)
    power = M.copy()
    for k in range(1, dim + 1):
        out += ((-1) ** (k + 1) / k) * power
        power = power @ M
    return out


def is_log_proximal(T, tol=NILPOTENT_TOL):
    """Log-proximality verdict with the attracting line and repelling hyperplane.

    T unipotent with N = log T of order d is log-proximal iff rank(N^d) = 1,
    i.e. the deepest filtration step W_{-d} = im(N^d) is a line and
    W_{d-1} = ker(N^d) a hyperplane.
    """
    N = unipotent_log(T)
    d, powers = nilpotent_order(N, tol)
    if d == 0:
        return False, None, None
    nd = powers[d]
    if numerical_rank(nd, rtol=1e-9) != 1:
        return False, None, None
    line = projective_normalize(orth_basis(nd)[:, 0])
    hyperplane = null_space(nd / max(1.0, np.linalg.norm(nd)))
    return True, line, hyperplane


def jacobson_morozov(N, tol=NILPOTENT_TOL):
    """An sl2 triple (Y, N_plus) completing the nilpotent N = N_minus.

    Built directly from a Jordan chain basis: on a chain of length s the
    grading element acts by (s-1, s-3, ..., -(s-1)) and the raising operator
    by the standard coefficients j(s-j).  Relations are checked to 1e-8.
    """
    N = np.asarray(N, dtype=float)
    dim = N.shape[0]
    d, _ = nilpotent_order(N, tol)
    if d == 0:
        raise ValueError("need a nonzero nilpotent")
    chains = jordan_chains(N, tol)
    P = np.column_stack([v for ch in chains for v in ch])
    y_hat = np.zeros((dim, dim))
    np_hat = np.zeros((dim, dim))
    col = 0
    for ch in chains:
        s = len(ch)
        for j in range(s):
            y_hat[col + j, col + j] = s - 1 - 2 * j
            if j > 0:
                np_hat[col + j - 1, col + j] = j * (s - j)
        col += s
    Pinv = np.linalg.inv(P)
    Y = P @ y_hat @ Pinv
    N_plus = P @ np_hat @ Pinv
    resid = max(
        np.linalg.norm(Y @ N - N @ Y + 2.0 * N),
        np.linalg.norm(Y @ N_plus - N_plus @ Y - 2.0 * N_plus),
        np.linalg.norm(N_plus @ N - N @ N_plus - Y),
    )
    if resid > SL2_TOL * max(1.0, np.linalg.norm(N)) ** 2:
        raise ValueError(f"sl2 relations not satisfied, residual {resid:.3e}")
    return Y, N_plus


def y_eigenspace(Y, k, tol=1e-6):
    """Basis of the integer eigenspace V_k of a grading element Y."""
    Y = np.asarray(Y, dtype=float)
    dim = Y.shape[0]
    return null_space(Y - k * np.eye(dim), rtol=tol)


def strictly_adapted_norm(N, Y, tau, v):
    """Norm of v in the cusp metric h(tau) = e^{(Re tau) N} e^{-(log Im tau) Y / 2}.

    Computed as ||e^{(log Im tau) Y / 2} e^{-(Re tau) N} v||; requires
    Im tau >= 1 (the cusp regime).
    """
    tau = complex(tau)
    if tau.imag < 1.0:
        raise ValueError("strictly adapted metrics are used only for Im tau >= 1")
    N = np.asarray(N, dtype=float)
    Y = np.asarray(Y, dtype=float)
    v = np.ravel(np.asarray(v, dtype=float))
    w = scipy.linalg.expm(-tau.real * N) @ v
    w = scipy.linalg.expm(0.5 * np.log(tau.imag) * Y) @ w
    return float(np.linalg.norm(w))


# --- coarse weight splits and stability --------------------------------------

STANDARD_WEIGHTS = ((1, 0), (0, 1), (0, -1), (-1, 0))
WREP_WEIGHTS = ((1, 1), (1, -1), (0, 0), (-1, 1), (-1, -1))


def coarse_weight_split(rep_weights, mu_dir, zero_tol=1e-10):
    """Index partition (negative, zero, positive) of weights against a chamber ray.

    Weights are linear functionals on (mu_1, mu_2) given as coefficient
    pairs; zero is decided at relative threshold ``zero_tol``.
    """
    mu = np.asarray(mu_dir, dtype=float)
    if np.linalg.norm(mu) == 0:
        raise ValueError("zero chamber direction")
    mu = mu / np.linalg.norm(mu)
    neg, zero, pos = [], [], []
    for i, w in enumerate(rep_weights):
        val = float(np.dot(w, mu))
        scale = max(1.0, float(np.linalg.norm(w)))
        if val > zero_tol * scale:
            pos.append(i)
        elif val < -zero_tol * scale:
            neg.append(i)
        else:
            zero.append(i)
    return neg, zero, pos


@dataclass(frozen=True)
class LimitDatum:
    """A limit ray (k_plus, [mu]): orthogonal frame and Weyl-chamber direction.

    ``mu_dir`` is either the full nonincreasing log-singular-value direction
    (length matching k_plus) or the dominant pair (mu_1, mu_2), in which case
    representation weights are needed to produce sign patterns.
    """

    k_plus: np.ndarray
    mu_dir: np.ndarray

    def sign_split(self, rep_weights=None, zero_tol=1e-10):
        mu = np.asarray(self.mu_dir, dtype=float)
        if len(mu) == self.k_plus.shape[0]:
            vals = mu / max(np.linalg.norm(mu), 1e-300)
            neg = [i for i, v in enumerate(vals) if v < -zero_tol]
            zero = [i for i, v in enumerate(vals) if abs(v) <= zero_tol]
            pos = [i for i, v in enumerate(vals) if v > zero_tol]
            return neg, zero, pos
        if rep_weights is None:
            raise ValueError("chamber-pair datum needs representation weights")
        return coarse_weight_split(rep_weights, mu, zero_tol)


STABLE = "stable"
SEMISTABLE_ONLY = "semistable_only"
UNSTABLE = "unstable"


def stable_point_test(v, data: Sequence[LimitDatum], rep_weights=None, tol=1e-8):
    """GIT-style verdict of a projective point against limit data.

    stable: every datum leaves a component in the positive-weight part;
    unstable: some datum confines k_plus v to the strictly negative part;
    semistable_only: some datum lands it in the zero-but-not-negative wall.
    """
    if not len(data):
        raise ValueError("need at least one limit datum")
    v = np.ravel(np.asarray(v, dtype=float))
    nv = np.linalg.norm(v)
    if nv == 0:
        raise ValueError("zero vector")
    v = v / nv
    verdict = STABLE
    for datum in data:
        w = datum.k_plus @ v
        neg, zero, pos = datum.sign_split(rep_weights)
        pos_norm = np.linalg.norm(w[pos]) if pos else 0.0
        zero_norm = np.linalg.norm(w[zero]) if zero else 0.0
        if pos_norm <= tol:
            if zero_norm <= tol:
                return UNSTABLE
            verdict = SEMISTABLE_ONLY
    return verdict


def unipotent_limit_datum(T, tol=NILPOTENT_TOL):
    """The exact limit datum of the power sequence {T^k} of a unipotent T.

    Singular frames of T^k converge only polynomially, so finite samples
    never resolve this ray numerically; in the limit the slow subspace for
    cutoff c is the weight-filtration space W_c(log T), and the chamber
    direction is the sorted sl2-weight multiset.  Returns None for T = id.
    """
    N = unipotent_log(T)
    wf = weight_filtration(N, tol)
    d = wf.order
    if d == 0:
        return None
    n = N.shape[0]
    blocks = []
    mus = []
    prev = np.zeros((n, 0))
    for c in range(-d, d + 1):
        cur = wf.basis(c)
        if cur.shape[1] > prev.shape[1]:
            proj = cur - prev @ (prev.T @ cur) if prev.shape[1] else cur
            newb = orth_basis(proj, rtol=1e-9)
            blocks.append((c, newb))
        prev = cur
    rows = []
    weights = []
    for c, b in reversed(blocks):  # descending weight order
        for j in range(b.shape[1]):
            rows.append(b[:, j])
            weights.append(float(c))
    k_plus = np.array(rows)
    mu = np.array(weights)
    return LimitDatum(k_plus=k_plus, mu_dir=mu / np.linalg.norm(mu))


def limit_data_from_matrices(mats, min_norm=2.0, dedup_tol=1e-3):
    """Limit data (k_plus, [mu]) from a family of group elements.

    Elements with ||mu|| below ``min_norm`` are skipped (they have not
    diverged); rays are deduplicated at angular resolution ``dedup_tol``.
    """
    out = []
    seen = set()
    mats = np.asarray(mats, dtype=float)
    for g in mats:
        u, s, vt = np.linalg.svd(g)
        mu = np.log(s)
        norm = np.linalg.norm(mu)
        if norm < min_norm:
            continue
        for i in range(vt.shape[0]):
            j = int(np.argmax(np.abs(vt[i])))
            if vt[i, j] < 0:
                vt[i, :] = -vt[i, :]
        ray = mu / norm
        key = tuple(np.round(np.concatenate([ray, vt.ravel()]) / dedup_tol).astype(int))
        if key in seen:
            continue
        seen.add(key)
        out.append(LimitDatum(k_plus=vt, mu_dir=ray))
    return out
