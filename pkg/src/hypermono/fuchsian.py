"""Triangle-group uniformization and geodesic sampling on the base orbifold.

The base orbifold of a rank-n hypergeometric local system is the sphere with
three cone/cusp points of orders (e0, e1, einf).  The orientation-preserving
triangle group is realized in PSL(2, R), acting on the upper half-plane, with
a quadrilateral fundamental domain (a triangle and its mirror image) whose
four sides are paired by the rotations/parabolics around the vertices over
0 and 1.  Geodesics are flowed analytically and reduced to the domain at
every side crossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .params import HypergeomParams, as_exact

INF = math.inf

# --- 2x2 real matrices as tuples (a, b, c, d) --------------------------------


def mat_mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_inv(m):
    a, b, c, d = m
    det = a * d - b * c
    return (d / det, -b / det, -c / det, a / det)


def mat_det(m):
    return m[0] * m[3] - m[1] * m[2]


def mat_normalize(m):
    det = mat_det(m)
    s = math.sqrt(abs(det))
    if det < 0:
        raise ValueError("matrix has negative determinant")
    return tuple(x / s for x in m)


def mobius(m, z):
    a, b, c, d = m
    if z == INF:
        return a / c if c != 0 else INF
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


IDENT = (1.0, 0.0, 0.0, 1.0)


def _rot(phi):
    c, s = math.cos(phi), math.sin(phi)
    return (c, s, -s, c)


def _translate_to(p):
    """Element of SL(2, R) mapping i to the interior point p, fixing 'up'."""
    x, y = p.real, p.imag
    r = math.sqrt(y)
    return (r, x / r, 0.0, 1.0 / r)


def point_at(p, direction, dist):
    """Endpoint of the geodesic from interior p with tangent angle ``direction``."""
    g = mat_mul(_translate_to(p), _rot((direction - math.pi / 2) / 2.0))
    return mobius(g, complex(0.0, math.exp(dist)))


def ray_ideal_endpoint(p, direction):
    g = mat_mul(_translate_to(p), _rot((direction - math.pi / 2) / 2.0))
    a, _, c, _ = g
    return a / c if c != 0 else INF


def rotation_about(p, angle):
    """Hyperbolic rotation by ``angle`` (counterclockwise) about interior p."""
    t = _translate_to(p)
    return mat_mul(mat_mul(t, _rot(angle / 2.0)), mat_inv(t))


# --- distances ----------------------------------------------------------------


def hyp_distance(tau1, tau2):
    """Hyperbolic distance in the upper half-plane: cosh d = 1 + |dt|^2/(2 y1 y2)."""
    t1, t2 = complex(tau1), complex(tau2)
    if t1.imag <= 0 or t2.imag <= 0:
        raise ValueError("points must have positive imaginary part")
    x = 1.0 + abs(t1 - t2) ** 2 / (2.0 * t1.imag * t2.imag)
    return math.acosh(max(1.0, x))


def to_halfplane(z):
    """Disk -> half-plane: tau = (1/sqrt(-1)) (z+1)/(z-1)."""
    z = complex(z)
    return (z + 1) / (z - 1) / 1j


def to_disk(tau):
    """Half-plane -> disk: z = (tau - i)/(tau + i)."""
    tau = complex(tau)
    return (tau - 1j) / (tau + 1j)


def frobenius_distance(m):
    """dist(i, m . i) = arccosh(||m||_F^2 / 2) for m in SL(2, R)."""
    a, b, c, d = m
    q = (a * a + b * b + c * c + d * d) / 2.0
    return math.acosh(max(1.0, q))


def group_norm_distance(word, gens):
    """Displacement dist(x0, gamma x0) of a word over Fuchsian generators.

    ``word`` is a sequence of (symbol, exponent); ``gens`` maps symbols to
    2x2 tuples.
    """
    m = IDENT
    for sym, k in word:
        g = gens[sym] if k >= 0 else mat_inv(gens[sym])
        for _ in range(abs(int(k))):
            m = mat_mul(m, g)
    return frobenius_distance(mat_normalize(m))


# --- orbifold signature -------------------------------------------------------


@dataclass(frozen=True)
class OrbifoldSignature:
    """Cone orders at the three singular points; math.inf marks a cusp."""

    e0: float
    e1: float
    einf: float

    def __post_init__(self):
        for e in (self.e0, self.e1, self.einf):
            if e != INF and (int(e) != e or e < 2):
                raise ValueError(f"cone order must be an integer >= 2 or inf, got {e}")
        if self.chi >= 0:
            raise ValueError(f"signature {self} is not hyperbolic (chi = {self.chi})")

    @property
    def chi(self) -> float:
        return -1.0 + sum(0.0 if e == INF else 1.0 / e for e in (self.e0, self.e1, self.einf))

    @property
    def orders(self):
        return {"0": self.e0, "1": self.e1, "inf": self.einf}


def _local_order(exps, convention):
    """Cone order of a companion-form local monodromy with the given exponents."""
    fracs = []
    for x in exps:
        f = as_exact(x)
        if f is None:
            raise ValueError(f"irrational exponent {x}: no finite-cover orbifold model")
        fracs.append(f % 1)
    if len(set(fracs)) != len(fracs):
        return INF  # repeated exponent: nontrivial unipotent part
    if convention == "gl":
        order = 1
        for f in fracs:
            order = order * f.denominator // math.gcd(order, f.denominator)
    elif convention == "projective":
        order = 1
        for f in fracs[1:]:
            den = (f - fracs[0]).denominator
            order = order * den // math.gcd(order, den)
    else:
        raise ValueError("convention must be 'gl' or 'projective'")
    if order < 2:
        raise ValueError("trivial local monodromy: no cone point")
    return order


def orbifold_signature(p: HypergeomParams, convention: str = "gl") -> OrbifoldSignature:
    """Cone orders (e0, e1, einf) of the base orbifold of a parameter set.

    A point gets order inf when the local monodromy has a nontrivial
    unipotent part, else the multiplicative order of the finite-order local
    monodromy.  Exponents must be rational.
    """
    e0 = _local_order(p.beta, convention)
    einf = _local_order(p.alpha, convention)
    # at 1, the monodromy is a pseudo-reflection with special eigenvalue
    # exp(2 pi i gamma), gamma = (n-1) - sum(alpha) - sum(beta)
    total = Fraction(0)
    for x in p.alpha + p.beta:
        f = as_exact(x)
        if f is None:
            raise ValueError(f"irrational exponent {x}: no finite-cover orbifold model")
        total += f
    gamma = (Fraction(p.rank - 1) - total) % 1
    e1 = INF if gamma == 0 else gamma.denominator
    return OrbifoldSignature(e0=e0, e1=float(e1) if e1 != INF else INF, einf=einf)


# --- triangle domain ----------------------------------------------------------


@dataclass
class Side:
    name: str
    mop: tuple  # maps the side geodesic to the imaginary axis
    s_lo: float
    s_hi: float
    pull: tuple  # applied to the local state when crossing out
    sym: str
    sgn: int
    deck: tuple  # deck generator appended on crossing (gamma_sym^sgn)


@dataclass
class TriangleDomain:
    sig: OrbifoldSignature
    v0: object  # complex (interior) or 0.0 (ideal)
    v1: object  # complex (interior) or INF
    w: object  # right vertex: complex or positive real (ideal)
    gamma0: tuple
    gamma1: tuple
    sides: List[Side] = field(default_factory=list)
    basepoint: complex = 1j

    @property
    def gamma_inf(self):
        return mat_inv(mat_mul(self.gamma0, self.gamma1))

    @property
    def gens(self):
        """Fuchsian generators keyed like the monodromy: rho(0)=gamma0, rho(1)=gamma1,
        rho(inf) = (gamma0 gamma1), matching h0 h1 = hinf."""
        return {"0": self.gamma0, "1": self.gamma1, "inf": mat_mul(self.gamma0, self.gamma1)}

    @property
    def angles(self):
        e = self.sig
        return tuple(0.0 if x == INF else math.pi / x for x in (e.e0, e.e1, e.einf))

    @property
    def area(self):
        return 2.0 * (math.pi - sum(self.angles))

    def contains(self, z, tol=1e-9):
        for side in self.sides:
            if _axis_side_value(side.mop, z) < -tol:
                return False
        return True


def _is_ideal(v):
    return not isinstance(v, complex)


def _geodesic_ideal_endpoints(u, v):
    """Ideal endpoints (p, q) of the geodesic through u, v (interior or ideal)."""
    if _is_ideal(u) and _is_ideal(v):
        return u, v
    if _is_ideal(u) or _is_ideal(v):
        x, z = (u, v) if _is_ideal(u) else (v, u)
        if x == INF:
            return z.real, INF
        c = (abs(z) ** 2 - x * x) / (2.0 * (z.real - x))
        return x, 2.0 * c - x
    if abs(u.real - v.real) < 1e-14:
        return u.real, INF
    c = (abs(u) ** 2 - abs(v) ** 2) / (2.0 * (u.real - v.real))
    r = abs(u - c)
    return c - r, c + r


def _mob_to_axis(p, q):
    """SL(2,R) element sending the geodesic (p, q) to the imaginary axis, p->0, q->inf."""
    if q == INF:
        return (1.0, -p, 0.0, 1.0)
    if p == INF:
        return (0.0, -1.0, 1.0, -q)
    m = (1.0, -p, 1.0, -q)
    if mat_det(m) < 0:
        m = (1.0, -p, -1.0, q)
    return mat_normalize(m)


def _axis_side_value(mop, z):
    """Signed side value Re(mop(z)) of a point against an axis-mapped geodesic."""
    val = mobius(mop, complex(z))
    return val.real if val != INF else 0.0


def _position_on_axis(mop, z):
    """log|mop(z)| for z on (or near) the geodesic."""
    val = mobius(mop, complex(z))
    if val == INF:
        return INF
    return math.log(abs(val)) if val != 0 else -INF


def _endpoint_position(mop, endpoint, p, q):
    if _is_ideal(endpoint):
        if endpoint == p:
            return -INF
        if endpoint == q:
            return INF
    return _position_on_axis(mop, endpoint)


def _solve_ideal_ideal_vertex(ainf):
    """Right vertex of the triangle (0, infty, w) with angle ainf at w, |w| = 1."""
    if ainf == 0.0:
        return 1.0  # ideal triangle (0, 1, infty)

    def angle(psi):
        u = complex(math.cos(psi) - 1.0 / (2.0 * math.cos(psi)), math.sin(psi))
        return abs(math.atan2(u.imag, u.real))

    psi = brentq(lambda s: angle(s) - ainf, 1e-9, math.pi / 2 - 1e-9, xtol=1e-14)
    return complex(math.cos(psi), math.sin(psi))


def _acosh_law(cos_a, cos_b, cos_c, sin_b, sin_c):
    """Side length opposite angle A: cosh = (cos A + cos B cos C)/(sin B sin C)."""
    return math.acosh((cos_a + cos_b * cos_c) / (sin_b * sin_c))


@lru_cache(maxsize=None)
def _build_domain_cached(e0, e1, einf):
    sig = OrbifoldSignature(e0, e1, einf)
    a0, a1, ainf = (0.0 if e == INF else math.pi / e for e in (e0, e1, einf))

    # vertices v0 (bottom) and v1 (top) on the imaginary axis, w to the right
    if e0 != INF and e1 != INF:
        l01 = _acosh_law(math.cos(ainf), math.cos(a0), math.cos(a1), math.sin(a0), math.sin(a1))
        v0 = complex(0.0, math.exp(-l01 / 2.0))
        v1 = complex(0.0, math.exp(l01 / 2.0))
    elif e0 == INF and e1 != INF:
        v0 = 0.0
        v1 = complex(0.0, math.e)
    elif e0 != INF and e1 == INF:
        v0 = complex(0.0, 1.0 / math.e)
        v1 = INF
    else:
        v0, v1 = 0.0, INF

    if not _is_ideal(v0):
        direction = math.pi / 2 - a0
        if ainf > 0:
            dist = _acosh_law(math.cos(a1), math.cos(a0), math.cos(ainf), math.sin(a0), math.sin(ainf))
            w = point_at(v0, direction, dist)
        else:
            w = ray_ideal_endpoint(v0, direction)
    elif not _is_ideal(v1):
        direction = -math.pi / 2 + a1
        if ainf > 0:
            dist = _acosh_law(math.cos(a0), math.cos(a1), math.cos(ainf), math.sin(a1), math.sin(ainf))
            w = point_at(v1, direction, dist)
        else:
            w = ray_ideal_endpoint(v1, direction)
    else:
        w = _solve_ideal_ideal_vertex(ainf)

    w_m = -w if _is_ideal(w) else complex(-w.real, w.imag)

    # side pairings: gamma0 maps (v0, w_m) to (v0, w); gamma1 maps (v1, w) to (v1, w_m)
    if _is_ideal(v0):
        pA, qA = _geodesic_ideal_endpoints(v0, w)
        x_a = qA if abs(pA) < 1e-12 else pA
        gamma0 = mat_normalize((1.0, 0.0, 2.0 / x_a, 1.0))
        img = mobius(gamma0, w_m if not _is_ideal(w_m) else complex(w_m, 0.0))
        target = w if not _is_ideal(w) else complex(w, 0.0)
        if abs(img - target) > 1e-8 * max(1.0, abs(target)):
            gamma0 = mat_inv(gamma0)
    else:
        gamma0 = None
        for sgn in (1.0, -1.0):
            cand = rotation_about(v0, sgn * 2.0 * a0)
            img = mobius(cand, w_m if not _is_ideal(w_m) else complex(w_m, 0.0))
            target = w if not _is_ideal(w) else complex(w, 0.0)
            if abs(img - target) < 1e-8 * max(1.0, abs(target)):
                gamma0 = cand
                break
        if gamma0 is None:
            raise RuntimeError("could not orient the rotation at v0")
    if _is_ideal(v1):
        x_b = w.real if not _is_ideal(w) else float(w)
        gamma1 = (1.0, -2.0 * x_b, 0.0, 1.0)
    else:
        gamma1 = None
        for sgn in (1.0, -1.0):
            cand = rotation_about(v1, sgn * 2.0 * a1)
            img = mobius(cand, w if not _is_ideal(w) else complex(w, 0.0))
            target = w_m if not _is_ideal(w_m) else complex(w_m, 0.0)
            if abs(img - target) < 1e-8 * max(1.0, abs(target)):
                gamma1 = cand
                break
        if gamma1 is None:
            raise RuntimeError("could not orient the rotation at v1")

    dom = TriangleDomain(sig=sig, v0=v0, v1=v1, w=w, gamma0=gamma0, gamma1=gamma1)

    g0i = mat_inv(gamma0)
    g1i = mat_inv(gamma1)
    specs = [
        ("A", v0, w, g0i, "0", +1, gamma0),
        ("D", v0, w_m, gamma0, "0", -1, g0i),
        ("B", v1, w, gamma1, "1", -1, g1i),
        ("C", v1, w_m, g1i, "1", +1, gamma1),
    ]
    for name, u, v, pull, sym, sgn, deck in specs:
        p, q = _geodesic_ideal_endpoints(u, v)
        mop = _mob_to_axis(p, q)
        s_u = _endpoint_position(mop, u, p, q)
        s_v = _endpoint_position(mop, v, p, q)
        lo, hi = min(s_u, s_v), max(s_u, s_v)
        # orient mop so that the basepoint is on the positive side
        if _axis_side_value(mop, dom.basepoint) < 0:
            mop = mat_mul((-1.0, 0.0, 0.0, 1.0), mop)
        dom.sides.append(Side(name, mop, lo, hi, pull, sym, sgn, deck))

    if not dom.contains(dom.basepoint, tol=-1e-9):
        raise RuntimeError("basepoint fell outside the fundamental domain")
    return dom


def build_domain(sig: OrbifoldSignature) -> TriangleDomain:
    return _build_domain_cached(sig.e0, sig.e1, sig.einf)


def triangle_group(sig: OrbifoldSignature):
    """Generators (gamma0, gamma1, gamma_inf) with gamma0 gamma1 gamma_inf = +-id.

    |trace gamma_i| = 2 cos(pi/e_i) for finite orders and 2 at cusps.
    """
    dom = build_domain(sig)
    return dom.gamma0, dom.gamma1, dom.gamma_inf


# --- geodesic sampling ----------------------------------------------------------


@dataclass
class GeodesicTrajectory:
    seed: int
    total_time: float
    events: list  # (timestamp, symbol, sign)
    deck: tuple  # accumulated deck transformation, 2x2
    end_state: tuple  # SL(2,R) state of the endpoint inside the domain

    @property
    def word(self):
        return [(sym, sgn) for _, sym, sgn in self.events]


_BACK_TOL = 1e-9


def _crossing_time(mop, state):
    """Next outward crossing of the axis-mapped geodesic along state . (e^t i).

    The side value Re(mop . state (e^t i)) is proportional to ac e^{2t} + bd;
    with the basepoint on the positive side, an outward crossing requires
    ac < 0.  Crossings a roundoff behind the present time (down to -1e-9,
    e.g. re-entry exactly on a paired side) are clipped to t = 0; inward
    re-detections have ac > 0 and are rejected by the sign test alone.
    """
    a, b, c, d = mat_mul(mop, state)
    ac = a * c
    bd = b * d
    if ac >= 0.0:
        return None, None
    ratio = -bd / ac
    if ratio <= 0.0:
        return None, None
    t = 0.5 * math.log(ratio)
    if t < -_BACK_TOL:
        return None, None
    t = max(t, 0.0)
    y = math.exp(t)
    num = math.hypot(a * y, b)
    den = math.hypot(c * y, d)
    if den == 0.0 or num == 0.0:
        return None, None
    return t, math.log(num / den)


def _flow(state, t):
    a, b, c, d = state
    e = math.exp(t / 2.0)
    return (a * e, b / e, c * e, d / e)


def geodesic_sample(sig: OrbifoldSignature, seed: int, total_time: float) -> GeodesicTrajectory:
    """Unit-speed geodesic from the basepoint with a seeded random direction.

    The geodesic is flowed in closed form; each exit through a side of the
    fundamental domain emits that side's deck generator and maps the state
    back inside.  Deterministic per seed.
    """
    if total_time < 0:
        raise ValueError("total_time must be >= 0")
    dom = build_domain(sig)
    rng = np.random.default_rng(seed)
    phi = float(rng.uniform(0.0, math.pi))
    state = _rot(phi)
    return _continue_geodesic(dom, state, seed, total_time)


def _continue_geodesic(dom, state, seed, total_time):
    t_now = 0.0
    events = []
    deck = IDENT
    sides = dom.sides
    seg_tol = 1e-9
    while t_now < total_time:
        best_t = None
        best_side = None
        for side in sides:
            t, s = _crossing_time(side.mop, state)
            if t is None:
                continue
            if s < side.s_lo - seg_tol or s > side.s_hi + seg_tol:
                continue
            if best_t is None or t < best_t:
                best_t = t
                best_side = side
        if best_t is None:
            raise RuntimeError("geodesic found no exit side (corner hit?)")
        if t_now + best_t >= total_time:
            state = _flow(state, total_time - t_now)
            t_now = total_time
            break
        state = _flow(state, best_t)
        t_now += best_t
        state = mat_normalize(mat_mul(best_side.pull, state))
        deck = mat_mul(deck, best_side.deck)
        events.append((t_now, best_side.sym, best_side.sgn))
    return GeodesicTrajectory(
        seed=seed, total_time=total_time, events=events, deck=deck, end_state=state
    )
