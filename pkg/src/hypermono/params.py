"""Hypergeometric exponent parameters: Hodge numbers and degeneration classes.

Exponents live in [0, 1) and are kept as exact ``Fraction`` values whenever
the input allows it; real-valued parameters are supported for classification
only (the geometric pipelines require rational exponents).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

Exponent = Union[Fraction, float]

EXACT_TOL = 1e-12
_DENOM_LIMIT = 10**6
_SNAP_TOL = 1e-9

HALF = Fraction(1, 2)
ZERO = Fraction(0)


def parse_exponent(x) -> Exponent:
    """Coerce a user-facing exponent ("p/q", int, float, Fraction) into [0, 1)."""
    if isinstance(x, Fraction):
        v: Exponent = x
    elif isinstance(x, int):
        v = Fraction(x)
    elif isinstance(x, str):
        x = x.strip()
        if "/" in x:
            num, den = x.split("/")
            v = Fraction(int(num), int(den))
        else:
            f = float(x)
            v = Fraction(f).limit_denominator(_DENOM_LIMIT)
            if abs(v - f) > _SNAP_TOL:
                v = f
    elif isinstance(x, float):
        v = x
    else:
        raise TypeError(f"cannot parse exponent {x!r}")
    return mod1(v)


def mod1(x: Exponent) -> Exponent:
    if isinstance(x, Fraction):
        return x % 1
    return x % 1.0


def dual(x: Exponent) -> Exponent:
    """The involution x -> (1 - x) mod 1."""
    return mod1(1 - x)


def as_exact(x: Exponent) -> Optional[Fraction]:
    """Nearby small-denominator rational, or None for (numerically) irrational x."""
    if isinstance(x, Fraction):
        return x
    f = Fraction(x).limit_denominator(_DENOM_LIMIT)
    if abs(f - x) <= _SNAP_TOL:
        return f
    return None


def _close(x: Exponent, y: Exponent) -> bool:
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    return abs(float(x) - float(y)) <= EXACT_TOL


def _sorted_key(values: Sequence[Exponent]):
    return sorted(values, key=float)


def is_self_dual(values: Sequence[Exponent]) -> bool:
    """True iff the multiset is invariant under x -> (1 - x) mod 1."""
    a = _sorted_key(values)
    b = _sorted_key(dual(x) for x in values)
    return all(_close(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class HypergeomParams:
    """Exponent multisets alpha, beta of a rank-n hypergeometric local system.

    Both lists are stored sorted nondecreasing; irreducibility (alpha_i !=
    beta_j for all i, j) is enforced at construction.
    """

    alpha: tuple
    beta: tuple

    def __init__(self, alpha, beta):
        a = tuple(_sorted_key(parse_exponent(x) for x in alpha))
        b = tuple(_sorted_key(parse_exponent(x) for x in beta))
        if len(a) != len(b) or not a:
            raise ValueError("alpha and beta must be nonempty of equal length")
        for x in a:
            for y in b:
                if _close(x, y):
                    raise ValueError(
                        f"reducible parameters: alpha value {x} equals beta value {y}"
                    )
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def rank(self) -> int:
        return len(self.alpha)

    @property
    def self_dual(self) -> bool:
        return is_self_dual(self.alpha) and is_self_dual(self.beta)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.alpha + self.beta)

    def swapped(self) -> "HypergeomParams":
        return HypergeomParams(self.beta, self.alpha)

    def __repr__(self):
        fmt = lambda t: "(" + ", ".join(str(x) for x in t) + ")"
        return f"HypergeomParams(alpha={fmt(self.alpha)}, beta={fmt(self.beta)})"


def hodge_numbers(p: HypergeomParams):
    """Hodge numbers of the underlying VHS, as a contiguous vector.

    rho(k) counts alpha-values <= beta_k minus k; the Hodge number at level
    q is #rho^{-1}(q).  The absolute level is meaningless, so the vector is
    reported starting at the lowest occupied level.
    """
    n = p.rank
    levels = []
    for k in range(1, n + 1):
        bk = p.beta[k - 1]
        count = sum(1 for a in p.alpha if float(a) <= float(bk) or _close(a, bk))
        levels.append(count - k)
    lo, hi = min(levels), max(levels)
    out = [0] * (hi - lo + 1)
    for q in levels:
        out[q - lo] += 1
    return tuple(out)


# --- local degeneration classes -------------------------------------------

MUM = "MUM"
RANK1_LINE = "Rank1Line"
RANK1_LAGRANGIAN = "Rank1Lagrangian"
ELLIPTIC_GOOD = "EllipticGood"
ELLIPTIC_BAD = "EllipticBad"
UNCLASSIFIED = "Unclassified"

_OK_TAGS = frozenset({MUM, RANK1_LINE, ELLIPTIC_GOOD})


@dataclass(frozen=True)
class DegenerationClass:
    tag: str
    N: Optional[int] = None
    k: Optional[int] = None

    @property
    def assumption_a_ok(self) -> bool:
        return self.tag in _OK_TAGS

    def __repr__(self):
        if self.tag == ELLIPTIC_GOOD:
            return f"DegenerationClass({self.tag}, N={self.N}, k={self.k})"
        return f"DegenerationClass({self.tag})"


def classify_local_degeneration(exponents) -> DegenerationClass:
    """Classify a self-dual quadruple of local exponents in [0, 1).

    Case table: (0,0,0,0) or (1/2)^4 -> MUM; (0,0,mu,1-mu) or
    (mu,1/2,1/2,1-mu) with 0<mu<1/2 -> rank-1 unipotent with invariant line;
    (mu,mu,1-mu,1-mu) incl. (0,0,1/2,1/2) -> rank-1 with invariant
    Lagrangian; strictly increasing quadruples are elliptic and good exactly
    for the ((N-(2k+1))/2N, (N-1)/2N, (N+1)/2N, (N+(2k+1))/2N) pattern.
    """
    e = [parse_exponent(x) for x in exponents]
    if len(e) != 4:
        raise ValueError("expected exactly 4 local exponents")
    e = _sorted_key(e)
    if not is_self_dual(e):
        raise ValueError(f"exponents {e} are not invariant under x -> 1-x mod 1")
    m1, m2, m3, m4 = e

    def eq(x, y):
        return _close(x, y)

    if all(eq(x, ZERO) for x in e) or all(eq(x, HALF) for x in e):
        return DegenerationClass(MUM)
    if eq(m1, ZERO) and eq(m2, ZERO) and eq(m3, HALF) and eq(m4, HALF):
        return DegenerationClass(RANK1_LAGRANGIAN)
    if eq(m1, ZERO) and eq(m2, ZERO) and 0 < float(m3) < 0.5:
        return DegenerationClass(RANK1_LINE)
    if eq(m2, HALF) and eq(m3, HALF) and 0 < float(m1) < 0.5:
        return DegenerationClass(RANK1_LINE)
    if eq(m1, m2) and eq(m3, m4) and 0 < float(m1) < 0.5:
        return DegenerationClass(RANK1_LAGRANGIAN)
    if 0 < float(m1) < float(m2) < 0.5:
        # elliptic: match mu2 = (N-1)/2N, mu1 = (N-(2k+1))/2N
        x2 = as_exact(m2)
        x1 = as_exact(m1)
        if x1 is None or x2 is None:
            return DegenerationClass(ELLIPTIC_BAD)
        nn = 1 / (1 - 2 * x2)
        if nn.denominator != 1:
            return DegenerationClass(ELLIPTIC_BAD)
        N = int(nn)
        kk = (N * (1 - 2 * x1) - 1) / 2
        if kk.denominator != 1:
            return DegenerationClass(ELLIPTIC_BAD)
        k = int(kk)
        if k >= 1 and N > 2 * k + 1:
            return DegenerationClass(ELLIPTIC_GOOD, N=N, k=k)
        return DegenerationClass(ELLIPTIC_BAD)
    return DegenerationClass(UNCLASSIFIED)


@dataclass(frozen=True)
class AssumptionACertificate:
    ok: bool
    class_alpha: DegenerationClass
    class_beta: DegenerationClass
    hodge: tuple
    failed_clause: Optional[str] = None


def satisfies_assumption_a(p: HypergeomParams):
    """Decide assumption A for rank-4 self-dual parameters.

    Holds iff both local degenerations are good and the Hodge numbers are
    (1,1,1,1).  Returns (verdict, certificate).
    """
    if p.rank != 4:
        raise ValueError(f"assumption A is a rank-4 condition, got rank {p.rank}")
    if not p.self_dual:
        raise ValueError("assumption A requires self-dual parameters")
    ca = classify_local_degeneration(p.alpha)
    cb = classify_local_degeneration(p.beta)
    h = hodge_numbers(p)
    failed = None
    if not ca.assumption_a_ok:
        failed = "alpha_local"
    elif not cb.assumption_a_ok:
        failed = "beta_local"
    elif h != (1, 1, 1, 1):
        failed = "hodge_numbers"
    cert = AssumptionACertificate(failed is None, ca, cb, h, failed)
    return cert.ok, cert


# --- assumption B (rank 5, maximal) ----------------------------------------


def maximal_alpha(N: Optional[int] = None, k_N: Optional[int] = None,
                  mu: Optional[Exponent] = None):
    """A first-column rank-5 pattern: (mu,1/2,1/2,1/2,1-mu) or the (N,k_N) one."""
    if mu is not None:
        mu = parse_exponent(mu)
        if not 0 < float(mu) < 0.5:
            raise ValueError("mu must lie in (0, 1/2)")
        return (mu, HALF, HALF, HALF, dual(mu))
    if not (isinstance(N, int) and isinstance(k_N, int)):
        raise ValueError("need integers N, k_N or a real mu")
    if not 1 < k_N < N:
        raise ValueError(f"need 1 < k_N < N, got k_N={k_N}, N={N}")
    return tuple(
        Fraction(N + s, 2 * N) for s in (-k_N, -1, 0, 1, k_N)
    )


def maximal_beta(M: int, k_M: Optional[int] = None):
    """A second-column rank-5 pattern: (0,0,0,M/(2M+1),(M+1)/(2M+1)) or the k_M one."""
    if not isinstance(M, int) or M < 1:
        raise ValueError("M must be a positive integer")
    if k_M is None:
        return (ZERO, ZERO, ZERO, Fraction(M, 2 * M + 1), Fraction(M + 1, 2 * M + 1))
    if not isinstance(k_M, int) or k_M < 1:
        raise ValueError("k_M must be a positive integer")
    if not 2 * (k_M + 1) < M:
        raise ValueError(f"need 2(k_M+1) < M, got k_M={k_M}, M={M}")
    return (
        ZERO,
        Fraction(k_M, M),
        Fraction(k_M + 1, M),
        Fraction(M - (k_M + 1), M),
        Fraction(M - k_M, M),
    )


def _match_maximal_alpha(a):
    """Return alpha_min for a first-column match, None if no match.

    Raises when the quadruple has the integer-pattern shape but the inferred
    integers violate 1 < k_N < N.
    """
    a1, a2, a3, a4, a5 = a
    if not _close(a3, HALF):
        return None
    if _close(a2, HALF) and _close(a4, HALF):
        if 0 < float(a1) < 0.5 and _close(a5, dual(a1)):
            return a1
        return None
    # integer pattern: a2 = (N-1)/2N, a1 = (N-k_N)/2N
    if not (_close(a4, dual(a2)) and _close(a5, dual(a1))):
        return None
    if not 0 < float(a1) <= float(a2) < 0.5:
        return None
    x1, x2 = as_exact(a1), as_exact(a2)
    if x1 is None or x2 is None:
        return None
    nn = 1 / (1 - 2 * x2)
    if nn.denominator != 1:
        return None
    N = int(nn)
    kk = N * (1 - 2 * x1)
    if kk.denominator != 1:
        return None
    k_N = int(kk)
    if not 1 < k_N < N:
        raise ValueError(f"alpha matches the maximal pattern with k_N={k_N}, N={N}, "
                         "violating 1 < k_N < N")
    return a1


def _match_maximal_beta(b):
    """Return beta_med for a second-column match, None if no match."""
    b1, b2, b3, b4, b5 = b
    if not _close(b1, ZERO):
        return None
    if _close(b2, ZERO) and _close(b3, ZERO):
        # (0,0,0,M/(2M+1),(M+1)/(2M+1))
        x4 = as_exact(b4)
        if x4 is None or not 0 < float(b4) < 0.5 or not _close(b5, dual(b4)):
            return None
        mm = x4 / (1 - 2 * x4)
        if mm.denominator != 1 or mm < 1:
            return None
        return b4
    # (0, k/M, (k+1)/M, (M-k-1)/M, (M-k)/M)
    if not (_close(b4, dual(b3)) and _close(b5, dual(b2))):
        return None
    if not 0 < float(b2) < float(b3) < 0.5:
        return None
    x2, x3 = as_exact(b2), as_exact(b3)
    if x2 is None or x3 is None:
        return None
    mm = 1 / (x3 - x2)
    if mm.denominator != 1:
        return None
    M = int(mm)
    kk = x2 * M
    if kk.denominator != 1:
        return None
    k_M = int(kk)
    if k_M < 1:
        return None
    if not 2 * (k_M + 1) < M:
        raise ValueError(f"beta matches the maximal pattern with k_M={k_M}, M={M}, "
                         "violating 2(k_M+1) < M")
    return b3


def satisfies_assumption_b(p: HypergeomParams) -> bool:
    """Decide assumption B (maximality) for rank-5 self-dual parameters.

    True iff alpha matches a first-column pattern, beta a second-column
    pattern, and alpha_min > beta_med.  Pattern-shaped inputs with invalid
    integer parameters raise.
    """
    if p.rank != 5:
        raise ValueError(f"assumption B is a rank-5 condition, got rank {p.rank}")
    if not p.self_dual:
        raise ValueError("assumption B requires self-dual parameters")
    amin = _match_maximal_alpha(p.alpha)
    if amin is None:
        amin = _match_maximal_alpha(p.beta)
        bmed = _match_maximal_beta(p.alpha) if amin is not None else None
    else:
        bmed = _match_maximal_beta(p.beta)
    if amin is None or bmed is None:
        return False
    return float(amin) > float(bmed)


# --- table enumeration ------------------------------------------------------


def elliptic_alpha(N: int, k: int):
    """The ((N-(2k+1))/2N, (N-1)/2N, (N+1)/2N, (N+(2k+1))/2N) quadruple."""
    if not (k >= 1 and N > 2 * k + 1):
        raise ValueError(f"need k >= 1 and N > 2k+1, got N={N}, k={k}")
    return tuple(Fraction(N + s, 2 * N) for s in (-(2 * k + 1), -1, 1, 2 * k + 1))


def _try_params(alpha, beta):
    try:
        return HypergeomParams(alpha, beta)
    except ValueError:
        return None


def enumerate_good_families(max_N: int, max_k: int, mu_grid=(), rank: int = 4):
    """Exhaust the good-parameter table patterns within the given bounds.

    Real parameters are drawn from mu_grid; integer parameters range over
    N <= max_N (the same bound caps the second elliptic index M) and
    k <= max_k.  Every returned parameter set satisfies assumption A
    (rank 4) resp. assumption B (rank 5).
    """
    if max_N <= 0 or max_k <= 0:
        raise ValueError("bounds must be positive")
    grid = sorted({parse_exponent(m) for m in mu_grid}, key=float)
    grid = [m for m in grid if 0 < float(m)]
    out = []

    def push(alpha, beta):
        p = _try_params(alpha, beta)
        if p is not None:
            out.append(p)

    if rank == 4:
        zeros4 = (ZERO,) * 4
        halves4 = (HALF,) * 4
        # real table: alpha = (mu, 1/2, 1/2, 1-mu)
        for mu in grid:
            if not float(mu) <= 0.5:
                continue
            alpha = (mu, HALF, HALF, dual(mu))
            push(alpha, zeros4)
            for nu in grid:
                if 0 < float(nu) < float(mu):
                    push(alpha, (ZERO, ZERO, nu, dual(nu)))
        # integer table: alpha elliptic (N, k)
        for N in range(2, max_N + 1):
            for k in range(1, max_k + 1):
                if N <= 2 * k + 1:
                    continue
                alpha = elliptic_alpha(N, k)
                push(alpha, halves4)
                push(alpha, zeros4)
                for mu in grid:
                    if 0 < float(mu) < (2 * k - 1) / (2 * N):
                        push(alpha, (ZERO, ZERO, mu, dual(mu)))
                    if (N - 1) / (2 * N) < float(mu) < 0.5:
                        push(alpha, (mu, HALF, HALF, dual(mu)))
                for M in range(2, max_N + 1):
                    for kM in range(1, max_k + 1):
                        if M <= 2 * kM + 1:
                            continue
                        if Fraction(2 * kM + 1, M) < Fraction(1, N):
                            push(alpha, elliptic_alpha(M, kM))
        out = [p for p in out if satisfies_assumption_a(p)[0]]
        return out

    if rank == 5:
        alphas = [maximal_alpha(mu=m) for m in grid if float(m) < 0.5]
        for N in range(3, max_N + 1):
            for kN in range(2, min(max_k, N - 1) + 1):
                alphas.append(maximal_alpha(N=N, k_N=kN))
        betas = [maximal_beta(M) for M in range(1, max_N + 1)]
        for M in range(2, max_N + 1):
            for kM in range(1, max_k + 1):
                if 2 * (kM + 1) < M:
                    betas.append(maximal_beta(M, kM))
        for a in alphas:
            for b in betas:
                p = _try_params(a, b)
                if p is not None and satisfies_assumption_b(p):
                    out.append(p)
        return out

    raise ValueError("rank must be 4 or 5")


MIRROR_QUINTIC = HypergeomParams(
    (Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)),
    (ZERO, ZERO, ZERO, ZERO),
)
