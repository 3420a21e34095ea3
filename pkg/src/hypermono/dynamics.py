"""Word-ball dynamics: limit curves, log-Anosov certificates, Lyapunov exponents.

All pipelines work on matrices in the standard symplectic frame; the word
alphabet is {h0^{+-1}, hinf^{+-1}} with exponents of finite-order generators
confined to (-e/2, e/2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._linalg import chordal_distance, projective_normalize, qr_pos, subspace_intersection
from .exterior import (
    LagrangianPlane,
    photon_lagrangian,
    pluecker,
    reduced_exterior_square_batch,
    symplectic_perp,
    W_ISOMETRY_SCALE,
)
from .fuchsian import (
    IDENT,
    INF,
    OrbifoldSignature,
    build_domain,
    frobenius_distance,
    geodesic_sample,
    mat_inv,
    mat_mul,
    mat_normalize,
)
from .lie import LimitDatum, is_log_proximal, limit_data_from_matrices, stable_point_test

MAT_DEDUP_RES = 1e-7


def canonical_exponent(k: int, order) -> int:
    """Reduce an exponent into (-order/2, order/2] for a finite-order generator."""
    if order == INF or order is None:
        return k
    e = int(order)
    k = k % e
    if k > e / 2:
        k -= e
    return k


@dataclass
class WordBall:
    """Reduced words of bounded length with their matrices, hash-deduplicated."""

    words: list
    mats: np.ndarray
    lengths: np.ndarray
    orders: dict
    fuchs: Optional[list] = None

    def __len__(self):
        return len(self.words)


def _word_length(word):
    return sum(abs(k) for _, k in word)


def enumerate_ball(
    gen_mats: Dict[str, np.ndarray],
    orders: Dict[str, float],
    L: int,
    fuchs_gens: Optional[Dict[str, tuple]] = None,
    alphabet: Optional[Sequence[str]] = None,
) -> WordBall:
    """All reduced words of length <= L over the alphabet, by left multiplication.

    Exponents of a finite-order generator stay in (-e/2, e/2]; matrices are
    deduplicated by rounded-entry hashing.
    """
    if L < 0:
        raise ValueError("L must be >= 0")
    alphabet = list(alphabet or gen_mats.keys())
    mats = {s: np.asarray(gen_mats[s], dtype=float) for s in alphabet}
    invs = {s: np.linalg.inv(mats[s]) for s in alphabet}
    n = next(iter(mats.values())).shape[0]
    f_mats = None
    if fuchs_gens is not None:
        f_mats = {s: tuple(map(float, fuchs_gens[s])) for s in alphabet}
        f_invs = {s: mat_inv(f_mats[s]) for s in alphabet}

    def mkey(m):
        return tuple(np.round(m.ravel() / MAT_DEDUP_RES).astype(np.int64))

    words = [()]
    out_mats = [np.eye(n)]
    lengths = [0]
    out_fuchs = [IDENT] if f_mats is not None else None
    seen = {mkey(out_mats[0])}
    frontier = [((), out_mats[0], IDENT)]
    for ell in range(1, L + 1):
        nxt = []
        for word, mat, fm in frontier:
            for s in alphabet:
                for sgn in (1, -1):
                    if word and word[0][0] == s:
                        net = word[0][1] + sgn
                        if canonical_exponent(net, orders.get(s, INF)) != net or net == 0:
                            continue
                        if abs(net) <= abs(word[0][1]):
                            continue
                        new_word = ((s, net),) + word[1:]
                    else:
                        if canonical_exponent(sgn, orders.get(s, INF)) != sgn:
                            continue
                        new_word = ((s, sgn),) + word
                    g = mats[s] if sgn > 0 else invs[s]
                    new_mat = g @ mat
                    new_fm = fm
                    if f_mats is not None:
                        new_fm = mat_normalize(
                            mat_mul(f_mats[s] if sgn > 0 else f_invs[s], fm)
                        )
                    key = mkey(new_mat)
                    if key in seen:
                        continue
                    seen.add(key)
                    nxt.append((new_word, new_mat, new_fm))
                    words.append(new_word)
                    out_mats.append(new_mat)
                    lengths.append(ell)
                    if out_fuchs is not None:
                        out_fuchs.append(new_fm)
        frontier = nxt
    return WordBall(
        words=words,
        mats=np.array(out_mats),
        lengths=np.array(lengths),
        orders=dict(orders),
        fuchs=out_fuchs,
    )


# --- limit curve ---------------------------------------------------------------


@dataclass(frozen=True)
class LimitSample:
    point: np.ndarray
    word: tuple
    gap: float
    kind: str  # "attracting" | "cusp"


def limit_curve_samples(
    ball: WordBall, gap_min: float, h1: Optional[np.ndarray] = None, dedup=1e-8
) -> List[LimitSample]:
    """Boundary-curve samples from a word ball.

    Attracting points are top left-singular directions of elements with
    alpha_1-gap >= gap_min; cusp points are the ball translates of the line
    ker(h1 - id) & im(h1 - id) when h1 is log-proximal.
    """
    if gap_min <= 0:
        raise ValueError("gap_min must be positive")
    out = []
    seen = set()

    def push(vec, word, gap, kind):
        v = projective_normalize(vec)
        key = (kind, tuple(np.round(v / dedup).astype(np.int64)))
        if key in seen:
            return
        seen.add(key)
        out.append(LimitSample(point=v, word=word, gap=float(gap), kind=kind))

    if len(ball):
        u, s, _ = np.linalg.svd(ball.mats)
        gaps = np.log(s[:, 0]) - np.log(s[:, 1])
        for i in range(len(ball)):
            if gaps[i] >= gap_min:
                push(u[i][:, 0], ball.words[i], gaps[i], "attracting")
    if h1 is not None:
        ok, line, _ = is_log_proximal(h1)
        if ok:
            pts = ball.mats @ line
            for i in range(len(ball)):
                word = ball.words[i] + (("1", 1),) + _invert_word(ball.words[i])
                push(pts[i], word, 0.0, "cusp")
    return out


def _invert_word(word):
    return tuple((s, -k) for s, k in reversed(word))


# --- log-Anosov certificate ------------------------------------------------------


@dataclass(frozen=True)
class AnosovCertificate:
    eps_hat: float
    c_hat: float
    dists: np.ndarray
    gaps: np.ndarray
    words: list


def _lower_hull(xs, ys):
    pts = sorted(zip(xs, ys))
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) < 0:
                hull.pop()
            else:
                break
        if hull and abs(hull[-1][0] - p[0]) < 1e-12:
            continue  # keep the lower of equal-x points (sorted order does)
        hull.append(p)
    return hull


def _hull_value(hull, x):
    """Value of the piecewise-linear lower minorant at x (clamped to its range)."""
    if x <= hull[0][0]:
        return hull[0][1]
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x <= x2:
            if x2 - x1 < 1e-15:
                return min(y1, y2)
            return y1 + (y2 - y1) * (x - x1) / (x2 - x1)
    return hull[-1][1]


def anosov_certificate(ball: WordBall, gap_arr=None) -> AnosovCertificate:
    """Support-line certificate for the singular-value gap against displacement.

    The scatter is (dist(x0, gamma x0), mu_1 - mu_2) over the ball.  eps_hat
    is the slope of the lower convex minorant at scale, read as the secant of
    the minorant between half and 0.95 of the maximal displacement (the far
    vertex alone is a single-word artifact); c_hat is the smallest intercept
    making gap >= eps_hat * dist - c_hat hold for every point.  A violated
    inequality family yields eps_hat <= 0.
    """
    if ball.fuchs is None:
        raise ValueError("ball was enumerated without Fuchsian matrices")
    s = np.linalg.svd(ball.mats, compute_uv=False)
    gaps = np.log(s[:, 0]) - np.log(s[:, 1]) if gap_arr is None else gap_arr
    dists = np.array([frobenius_distance(f) for f in ball.fuchs])
    hull = _lower_hull(dists.tolist(), gaps.tolist())
    if len(hull) < 2:
        eps = 0.0
    else:
        x_max = hull[-1][0]
        x_lo, x_hi = 0.5 * x_max, 0.95 * x_max
        if x_hi - x_lo < 1e-9:
            eps = 0.0
        else:
            eps = (_hull_value(hull, x_hi) - _hull_value(hull, x_lo)) / (x_hi - x_lo)
    c = float(np.max(eps * dists - gaps)) if len(dists) else 0.0
    return AnosovCertificate(eps_hat=float(eps), c_hat=c, dists=dists, gaps=gaps, words=ball.words)


# --- Lyapunov exponents -----------------------------------------------------------


@dataclass
class LyapunovResult:
    exponents: np.ndarray
    stderr: np.ndarray
    per_trajectory: np.ndarray
    total_time: float
    n_discarded: int = 0

    @property
    def nonnegative(self):
        """The nonnegative half of the (symmetric) spectrum."""
        return self.exponents[: len(self.exponents) // 2]

    @property
    def nonnegative_pair(self):
        lam = self.nonnegative
        return float(lam[0]), float(lam[1]) if len(lam) > 1 else 0.0


def lyapunov_mc(
    rep_mats: Dict[str, np.ndarray],
    sig: OrbifoldSignature,
    T: float,
    n_traj: int,
    seed: int,
) -> LyapunovResult:
    """Benettin frame transport along random geodesics of the base orbifold.

    The flat frame is pulled back to the fundamental-domain chart at every
    side crossing (matrix rho(gamma)^{-1}) and QR-renormalized; exponents are
    averaged log diagonal growth per unit of flow time.  Time follows the
    diag(e^t, e^{-t}) convention, under which the geodesic covers hyperbolic
    arc length 2t and the uniformizing representation itself has top exponent
    exactly 1.
    """
    if T <= 0 or n_traj <= 0:
        raise ValueError("T and n_traj must be positive")
    mats = {s: np.asarray(m, dtype=float) for s, m in rep_mats.items()}
    n = next(iter(mats.values())).shape[0]
    step = {}
    for s, m in mats.items():
        mi = np.linalg.inv(m)
        step[(s, 1)] = mi  # deck gains gamma  -> frame gains rho(gamma)^{-1}
        step[(s, -1)] = m
    t_each = T / n_traj
    seeds = np.random.SeedSequence(seed).spawn(n_traj)
    rows = []
    discarded = 0
    for sq in seeds:
        # trajectories are sampled by arc length 2 t_each (flow-time t_each)
        traj = geodesic_sample(sig, sq, 2.0 * t_each)
        frame = np.eye(n)
        logs = np.zeros(n)
        bad = False
        for _, sym, sgn in traj.events:
            frame = step[(sym, sgn)] @ frame
            frame, r = qr_pos(frame)
            diag = np.abs(np.diag(r))
            if not np.all(np.isfinite(diag)) or np.any(diag == 0):
                bad = True
                break
            logs += np.log(diag)
        if bad:
            discarded += 1
            continue
        rows.append(logs / t_each)
    if not rows:
        raise RuntimeError("all trajectories were discarded")
    per = np.array(rows)
    lam = per.mean(axis=0)
    err = per.std(axis=0, ddof=1) / math.sqrt(len(rows)) if len(rows) > 1 else np.zeros(n)
    return LyapunovResult(
        exponents=lam,
        stderr=err,
        per_trajectory=per,
        total_time=t_each * len(rows),
        n_discarded=discarded,
    )


def sum_formula_report(result: LyapunovResult, chi: float, rhs_degrees=None) -> dict:
    """Compare the sum of nonnegative exponents against (extension degrees) / chi."""
    if chi == 0:
        raise ValueError("chi must be nonzero")
    lam_sum = float(np.sum(result.nonnegative))
    report = {
        "lambda_sum": lam_sum,
        "chi": chi,
        "evaluated": rhs_degrees is not None,
    }
    if rhs_degrees is None:
        report["note"] = "not evaluated (no degree data supplied)"
        return report
    rhs = float(sum(rhs_degrees)) / chi
    report["rhs_over_chi"] = rhs
    report["abs_discrepancy"] = abs(lam_sum - rhs)
    report["rel_discrepancy"] = abs(lam_sum - rhs) / max(abs(rhs), 1e-300)
    return report


# --- contraction maps and fiberwise unipotents ------------------------------------


def contraction_map(l, Lp: LagrangianPlane, rtol=1e-9):
    """The photon point (l^perp & Lp) mod l, for a Lagrangian Lp not through l.

    Returns (representative direction, Lagrangian span(l, representative)).
    """
    l = np.ravel(np.asarray(l, dtype=float))
    stacked = np.column_stack([Lp.span, l])
    s = np.linalg.svd(stacked, compute_uv=False)
    if s[-1] <= rtol * s[0]:
        raise ValueError("line is contained in the Lagrangian")
    perp = symplectic_perp(l)
    inter = subspace_intersection(perp, Lp.span, rtol)
    if inter.shape[1] != 1:
        raise ValueError("unexpected intersection dimension (degenerate input)")
    x = inter[:, 0]
    # remove the l-component for a clean quotient representative
    x = x - (x @ l) / (l @ l) * l
    x = projective_normalize(x)
    return x, LagrangianPlane(l, x)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    raise TypeError(f"cannot coerce {x!r} to a rational")


def fiberwise_unipotent(alpha, beta):
    """The three-cusp contraction cycle matrices, in exact rational arithmetic.

    c_p2 = [[-a, 1/b], [-b, 0]], c_p3 = [[-1/a, 0], [b, -a]]; their product
    is [[1, -1/(a b)], [0, 1]].
    """
    a = _as_fraction(alpha)
    b = _as_fraction(beta)
    if a == 0 or b == 0:
        raise ValueError("need alpha * beta != 0")
    c_p2 = ((-a, 1 / b), (-b, Fraction(0)))
    c_p3 = ((-1 / a, Fraction(0)), (b, -a))
    prod = tuple(
        tuple(sum(c_p3[i][k] * c_p2[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )
    return c_p2, c_p3, prod


# --- rational limit points --------------------------------------------------------


def _frac_mat(m):
    return tuple(tuple(_as_fraction(x) for x in row) for row in np.asarray(m).tolist())


def _frac_matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def _frac_inv(m):
    n = len(m)
    aug = [list(m[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _frac_rank(rows):
    rows = [list(r) for r in rows if any(x != 0 for x in r)]
    rank = 0
    col = 0
    ncols = len(rows[0]) if rows else 0
    while rows and col < ncols:
        piv = next((i for i, r in enumerate(rows) if r[col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[0], rows[piv] = rows[piv], rows[0]
        lead = rows[0]
        rows = [
            [x - (r[col] / lead[col]) * y for x, y in zip(r, lead)] if r[col] != 0 else r
            for r in rows[1:]
        ]
        rows = [r for r in rows if any(x != 0 for x in r)]
        rank += 1
        col += 1
    return rank


def _check_integral(m, name):
    arr = np.asarray(m, dtype=float)
    if not np.allclose(arr, np.round(arr), atol=1e-9):
        raise ValueError(f"{name} is not integral")
    return tuple(tuple(Fraction(int(round(x))) for x in row) for row in arr.tolist())


@dataclass(frozen=True)
class CuspWitness:
    word: tuple
    unipotent: tuple


def rational_limit_classify(gen_mats, orders, v=None, lagrangian=None, L=6):
    """Search the word ball for a unipotent certifying a rational limit point.

    For a vector: a witness u with v in ker(u - id) & im(u - id).  For a
    Lagrangian: a witness whose fixed cusp line lies in the plane.  Returns a
    CuspWitness or None (meaning: no witness within length L, no claim of
    nonexistence).  Generators must be integral.
    """
    if (v is None) == (lagrangian is None):
        raise ValueError("pass exactly one of v, lagrangian")
    gens = {s: _check_integral(m, f"generator {s}") for s, m in gen_mats.items()}
    n = len(next(iter(gens.values())))
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    inv = {s: _frac_inv(m) for s, m in gens.items()}
    if v is not None:
        target = [_as_fraction(x) for x in np.ravel(np.asarray(v, dtype=object)).tolist()]
    else:
        target = [[_as_fraction(x) for x in np.ravel(col).tolist()] for col in np.asarray(lagrangian, dtype=object).T.tolist()]

    def is_witness(u):
        d = tuple(tuple(u[i][j] - ident[i][j] for j in range(n)) for i in range(n))
        power = d
        for _ in range(n - 1):
            power = _frac_matmul(power, d)
        if any(any(x != 0 for x in row) for row in power):
            return False  # not unipotent
        cols = [[d[i][j] for i in range(n)] for j in range(n)]
        cols = [c for c in cols if any(x != 0 for x in c)]
        if not cols:
            return False
        rank_d = _frac_rank([list(r) for r in zip(*cols)]) if cols else 0
        if v is not None:
            if any(sum(d[i][j] * target[j] for j in range(n)) != 0 for i in range(n)):
                return False  # not fixed
            aug = cols + [target]
            return _frac_rank([list(r) for r in zip(*aug)]) == rank_d
        # lagrangian: some vector of ker & im lies in the plane
        ker_im = _frac_kernel_image(d, n)
        if not ker_im:
            return False
        stacked = ker_im + target
        return _frac_rank(stacked) < _frac_rank(ker_im) + _frac_rank(target)

    frontier = [((), ident)]
    seen = {ident}
    if is_witness(ident):
        return CuspWitness(word=(), unipotent=ident)
    for _ in range(L):
        nxt = []
        for word, mat in frontier:
            for s in gens:
                for sgn in (1, -1):
                    if word and word[-1][0] == s:
                        net = word[-1][1] + sgn
                        if canonical_exponent(net, orders.get(s, INF)) != net or net == 0:
                            continue
                        if abs(net) <= abs(word[-1][1]):
                            continue
                        new_word = word[:-1] + ((s, net),)
                    else:
                        if canonical_exponent(sgn, orders.get(s, INF)) != sgn:
                            continue
                        new_word = word + ((s, sgn),)
                    g = gens[s] if sgn > 0 else inv[s]
                    new_mat = _frac_matmul(mat, g)
                    nxt.append((new_word, new_mat))
                    if new_mat in seen:
                        continue
                    seen.add(new_mat)
                    if is_witness(new_mat):
                        return CuspWitness(word=new_word, unipotent=new_mat)
        frontier = nxt
    return None


def _frac_kernel_image(d, n):
    """Rational basis (list of row vectors) of ker(d) & im(d)."""
    # kernel by row reduction of d
    rows = [list(r) for r in d]
    # solve d x = 0 exactly: reduce [d] and read free variables
    aug = [list(r) for r in d]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        lead = aug[r][c]
        aug[r] = [x / lead for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -aug[i][fc]
        kernel.append(vec)
    image = [[d[i][j] for i in range(n)] for j in range(n)]
    image = [c for c in image if any(x != 0 for x in c)]
    # intersection: vectors in span(kernel) & span(image)
    if not kernel or not image:
        return []
    k, m = len(kernel), len(image)
    combo = [list(kernel[i]) + [Fraction(0)] * 0 for i in range(k)]
    # solve sum a_i kernel_i - sum b_j image_j = 0
    sys_rows = []
    for coord in range(n):
        sys_rows.append([kernel[i][coord] for i in range(k)] + [-image[j][coord] for j in range(m)])
    null = _frac_nullspace(sys_rows, k + m)
    out = []
    for sol in null:
        vec = [sum(sol[i] * kernel[i][coord] for i in range(k)) for coord in range(n)]
        if any(x != 0 for x in vec):
            out.append(vec)
    return out


def _frac_nullspace(rows, ncols):
    aug = [list(r) for r in rows]
    nrows = len(aug)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        lead = aug[r][c]
        aug[r] = [x / lead for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -aug[i][fc] if i < len(aug) else Fraction(0)
        out.append(vec)
    return out


# --- minimality ----------------------------------------------------------------


def orbit_pluecker(mats, plane: LagrangianPlane):
    """Normalized Plucker vectors of a batch of matrices applied to a plane."""
    u = mats @ plane.span[:, 0]
    v = mats @ plane.span[:, 1]
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    w6 = np.stack([u[:, i] * v[:, j] - u[:, j] * v[:, i] for i, j in pairs], axis=1)
    from .exterior import _BASIS6_INV

    w5 = w6 @ _BASIS6_INV[:5].T
    norms = np.linalg.norm(w5, axis=1)
    w5 = w5 / norms[:, None]
    # sign convention: first coordinate of large modulus positive
    lead = np.argmax(np.abs(w5) > 1e-12, axis=1)
    signs = np.sign(w5[np.arange(len(w5)), lead])
    signs[signs == 0] = 1.0
    return w5 * signs[:, None]


def cusp_lagrangian(h1):
    """A Lagrangian through the cusp line of a log-proximal unipotent."""
    ok, line, _ = is_log_proximal(h1)
    if not ok:
        raise ValueError("h1 is not a log-proximal unipotent")
    return photon_lagrangian(line, np.array([1.0, 0.0]))


def minimality_scan(ball: WordBall, h1, targets, radius):
    """Coverage of limit-set sample balls by the orbit of one cusp Lagrangian.

    ``targets`` is an (m, 5) array of normalized Plucker vectors; a target is
    hit when some orbit point comes chordally within ``radius``.
    """
    plane = cusp_lagrangian(h1)
    orbit = orbit_pluecker(ball.mats, plane)
    targets = np.asarray(targets, dtype=float)
    if targets.ndim == 1:
        targets = targets[None, :]
    hits = 0
    for t in targets:
        dots = np.abs(orbit @ t)
        d = np.sqrt(np.maximum(0.0, 1.0 - np.minimum(1.0, dots) ** 2))
        if float(d.min()) <= radius:
            hits += 1
    return hits / len(targets)


def photon_targets(samples: Sequence[LimitSample], n_dirs=4):
    """Plucker targets on the photons over limit-curve samples."""
    out = []
    for s in samples:
        for j in range(n_dirs):
            theta = math.pi * j / n_dirs
            t = np.array([math.cos(theta), math.sin(theta)])
            try:
                plane = photon_lagrangian(s.point, t)
            except ValueError:
                continue
            out.append(pluecker(plane))
    return np.array(out)


# --- W-frame stability pipeline ---------------------------------------------------


def w_limit_data(ball: WordBall, cusp_mats=(), cusp_depth=2, min_norm=2.0, dedup_tol=1e-3):
    """Limit data of the ball acting on W, in isometric W-coordinates.

    SVD rays of ball elements are complemented by the exact limit data of
    unipotent cusp monodromies (``cusp_mats``) conjugated through the
    sub-ball of length <= cusp_depth; singular frames of unipotent powers
    converge too slowly for finite sampling to reach them.
    """
    from .lie import unipotent_limit_datum

    w_mats = reduced_exterior_square_batch(ball.mats)
    C = W_ISOMETRY_SCALE
    Ci = 1.0 / C
    scaled = C[None, :, None] * w_mats * Ci[None, None, :]
    data = limit_data_from_matrices(scaled, min_norm=min_norm, dedup_tol=dedup_tol)
    seen = set()
    for u in cusp_mats:
        for g, ell in zip(ball.mats, ball.lengths):
            if ell > cusp_depth:
                continue
            conj = g @ u @ np.linalg.inv(g)
            w_u = C[:, None] * reduced_exterior_square_batch(conj) * Ci[None, :]
            key = tuple(np.round(w_u.ravel() / dedup_tol).astype(np.int64))
            if key in seen:
                continue
            seen.add(key)
            datum = unipotent_limit_datum(w_u)
            if datum is not None:
                data.append(datum)
    return data


def w_stability_verdict(w_vec, data, tol=1e-8):
    """Stability of a W-point (spec basis) against W-frame limit data."""
    v = W_ISOMETRY_SCALE * np.ravel(np.asarray(w_vec, dtype=float))
    return stable_point_test(v, data, tol=tol)


# --- auxiliary representations ----------------------------------------------------


def sym_cube(g):
    """Third symmetric power of a 2x2 matrix in the weight-orthonormal basis.

    Basis (x^3, sqrt3 x^2 y, sqrt3 x y^2, y^3): rotations map to orthogonal
    matrices and diag(l, 1/l) to diag(l^3, l, 1/l, 1/l^3).
    """
    a, b, c, d = np.ravel(np.asarray(g, dtype=float))
    r3 = math.sqrt(3.0)
    return np.array(
        [
            [a**3, r3 * a * a * b, r3 * a * b * b, b**3],
            [r3 * a * a * c, a * a * d + 2 * a * b * c, b * b * c + 2 * a * b * d, r3 * b * b * d],
            [r3 * a * c * c, b * c * c + 2 * a * c * d, a * d * d + 2 * b * c * d, r3 * b * d * d],
            [c**3, r3 * c * c * d, r3 * c * d * d, d**3],
        ]
    )


def veronese(v):
    """Image of a plane direction on the twisted cubic in the sym_cube basis."""
    s, t = float(v[0]), float(v[1])
    r3 = math.sqrt(3.0)
    return projective_normalize(np.array([s**3, r3 * s * s * t, r3 * s * t * t, t**3]))
