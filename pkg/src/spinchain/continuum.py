"""Continuum limit functionals on step functions.

The scaled chain energies converge to

    F(u)   = 2 * |{x : 0 < u(x) < 1}| + TV(u)            (open chain)
    F#(u)  = F(u) + boundary_term(tau, u(0+), u(L-))     (periodic chain)

for u: (0, L) -> [0, 1].  Everything here is evaluated on piecewise
constant u with exact interval arithmetic, so equalities between the two
routes (functional formula vs. geometric perimeter accounting) can be
asserted without tolerances when the data are rational.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .rationals import frac

__all__ = [
    "PiecewiseConstant",
    "TauParams",
    "total_variation",
    "continuum_energy",
    "continuum_energy_periodic",
    "boundary_term",
    "periodic_cell_perimeter",
]


# --- exact interval sets ---------------------------------------------------
# An interval set is a list of disjoint, sorted (lo, hi) pairs with lo < hi.


def _normalize(segments):
    segs = sorted((lo, hi) for lo, hi in segments if lo < hi)
    out = []
    for lo, hi in segs:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _measure(segs):
    total = 0
    for lo, hi in segs:
        total += hi - lo
    return total


def _clip(segs, lo, hi):
    return [(max(a, lo), min(b, hi)) for a, b in segs if max(a, lo) < min(b, hi)]


def _complement_within(segs, lo, hi):
    out = []
    cur = lo
    for a, b in _clip(segs, lo, hi):
        if cur < a:
            out.append((cur, a))
        cur = b
    if cur < hi:
        out.append((cur, hi))
    return out


def _symmetric_difference(a, b, lo, hi):
    """(a ^ b) restricted to [lo, hi], both inputs normalized."""
    a = _clip(a, lo, hi)
    b = _clip(b, lo, hi)
    a_not_b = _intersect(a, _complement_within(b, lo, hi))
    b_not_a = _intersect(b, _complement_within(a, lo, hi))
    return _normalize(a_not_b + b_not_a)


def _intersect(a, b):
    out = []
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        lo = max(a[ia][0], b[ib][0])
        hi = min(a[ia][1], b[ib][1])
        if lo < hi:
            out.append((lo, hi))
        if a[ia][1] < b[ib][1]:
            ia += 1
        else:
            ib += 1
    return out


# --- step functions --------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseConstant:
    """Step function u: (0, L) -> [0, 1], canonicalized.

    breakpoints = (0 = x0 < x1 < ... < xk = L); values has one entry per
    piece, u = values[m] on (x[m], x[m+1]).  Adjacent equal values are
    merged on construction.
    """

    L: Fraction
    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        L = frac(self.L)
        bps = [b if isinstance(b, float) else frac(b) for b in self.breakpoints]
        vals = [v if isinstance(v, float) else frac(v) for v in self.values]
        if L <= 0:
            raise ValueError("L must be positive")
        if len(bps) != len(vals) + 1:
            raise ValueError("need one more breakpoint than values")
        if bps[0] != 0 or bps[-1] != L:
            raise ValueError("breakpoints must run from 0 to L")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise ValueError("breakpoints must increase strictly")
        if any(v < 0 or v > 1 for v in vals):
            raise ValueError("values must lie in [0, 1]")
        # merge adjacent equal values
        mb, mv = [bps[0]], []
        for i, v in enumerate(vals):
            if mv and v == mv[-1]:
                mb[-1] = bps[i + 1]
            else:
                mv.append(v)
                mb.append(bps[i + 1])
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "breakpoints", tuple(mb))
        object.__setattr__(self, "values", tuple(mv))

    @staticmethod
    def constant(L, c) -> "PiecewiseConstant":
        L = frac(L)
        return PiecewiseConstant(L, (0, L), (c,))

    @staticmethod
    def indicator(L, a, b) -> "PiecewiseConstant":
        """Characteristic function of [a, b] inside (0, L)."""
        L, a, b = frac(L), frac(a), frac(b)
        if not 0 <= a < b <= L:
            raise ValueError("need 0 <= a < b <= L")
        bps = [Fraction(0)]
        vals = []
        if a > 0:
            bps.append(a)
            vals.append(Fraction(0))
        bps.append(b)
        vals.append(Fraction(1))
        if b < L:
            bps.append(L)
            vals.append(Fraction(0))
        return PiecewiseConstant(L, tuple(bps), tuple(vals))

    @staticmethod
    def from_pieces(L, pieces: Sequence[tuple]) -> "PiecewiseConstant":
        """pieces = [(to, value), ...] with increasing 'to' ending at L."""
        bps = [Fraction(0)] + [p[0] for p in pieces]
        vals = [p[1] for p in pieces]
        return PiecewiseConstant(frac(L), tuple(bps), tuple(vals))

    def pieces(self):
        return list(zip(self.breakpoints[:-1], self.breakpoints[1:], self.values))

    def left_value(self):
        """u(0+)."""
        return self.values[0]

    def right_value(self):
        """u(L-)."""
        return self.values[-1]

    def value_at(self, x):
        """Value on the piece whose half-open interval (x_{m-1}, x_m] contains x."""
        for m in range(len(self.values)):
            if self.breakpoints[m] < x <= self.breakpoints[m + 1]:
                return self.values[m]
        if x == 0:
            return self.values[0]
        raise ValueError(f"{x} outside (0, {self.L}]")

    def mean(self):
        total = 0
        for a, b, v in self.pieces():
            total += (b - a) * v
        return total / self.L

    def reflect(self) -> "PiecewiseConstant":
        """x -> u(L - x)."""
        bps = tuple(self.L - b for b in reversed(self.breakpoints))
        return PiecewiseConstant(self.L, bps, tuple(reversed(self.values)))

    def complement(self) -> "PiecewiseConstant":
        return PiecewiseConstant(self.L, self.breakpoints, tuple(1 - v for v in self.values))

    # JSON wire format: {"L": "p/q", "pieces": [{"to": ..., "value": ...}, ...]}
    def to_json(self) -> str:
        def enc(x):
            if isinstance(x, float):
                return x
            x = frac(x)
            return f"{x.numerator}/{x.denominator}"

        return json.dumps(
            {
                "L": enc(self.L),
                "pieces": [
                    {"to": enc(b), "value": enc(v)}
                    for b, v in zip(self.breakpoints[1:], self.values)
                ],
            }
        )

    @staticmethod
    def from_json(text: str) -> "PiecewiseConstant":
        doc = json.loads(text)

        def dec(x):
            return Fraction(x) if isinstance(x, str) else frac(x)

        pieces = [(dec(p["to"]), dec(p["value"])) for p in doc["pieces"]]
        return PiecewiseConstant.from_pieces(dec(doc["L"]), pieces)


@dataclass(frozen=True)
class TauParams:
    """Periodicity-defect parameter tau in [0, 1] with its symmetrized pair."""

    tau: Fraction

    def __post_init__(self):
        t = self.tau if isinstance(self.tau, float) else frac(self.tau)
        if not 0 <= t <= 1:
            raise ValueError("tau must lie in [0, 1]")
        object.__setattr__(self, "tau", t)

    @property
    def lo(self):
        """tau_* = min(tau, 1 - tau) <= 1/2."""
        return min(self.tau, 1 - self.tau)

    @property
    def hi(self):
        """tau^* = max(tau, 1 - tau) >= 1/2."""
        return max(self.tau, 1 - self.tau)


def _as_tau(t) -> TauParams:
    return t if isinstance(t, TauParams) else TauParams(frac(t))


# --- functionals ------------------------------------------------------------


def total_variation(u: PiecewiseConstant):
    """Sum of interior jump magnitudes on (0, L)."""
    return sum(
        abs(u.values[m + 1] - u.values[m]) for m in range(len(u.values) - 1)
    )


def continuum_energy(u: PiecewiseConstant):
    """2 * (length where 0 < u < 1) + total variation, no boundary contribution."""
    fractional = sum(b - a for a, b, v in u.pieces() if 0 < v < 1)
    return 2 * fractional + total_variation(u)


def boundary_term(t, x, y):
    """Mismatch measure between the boundary traces of a periodic extension.

    With A = [0, y] and B = [-tau, x - tau] u [1 - tau, x + 1 - tau],
    returns |[0,1] ^ (B symdiff A)|.  Equivalently: the circle (R mod 1)
    symmetric difference between the arc [0, y] and the arc of length x
    starting at 1 - tau.
    """
    t = _as_tau(t)
    x = x if isinstance(x, float) else frac(x)
    y = y if isinstance(y, float) else frac(y)
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ValueError("arguments must lie in [0, 1]")
    tau = t.tau
    shifted = _normalize([(-tau, x - tau), (1 - tau, x + 1 - tau)])
    base = _normalize([(0, y)])
    return _measure(_symmetric_difference(shifted, base, 0, 1))


def continuum_energy_periodic(u: PiecewiseConstant, t):
    """Open-chain limit energy plus the boundary term at the seam."""
    t = _as_tau(t)
    return continuum_energy(u) + boundary_term(t, u.left_value(), u.right_value())


# --- perimeter accounting ---------------------------------------------------


def _occupancy_column(u: PiecewiseConstant, t: TauParams, x):
    """Vertical occupancy at abscissa x as an interval set inside [0, 1].

    The tiling translates the subgraph of u by (j*L, j*(1-tau) + m) over all
    integers j, m.  For x in (0, L) only j = 0 contributes; past the seam
    (x in (L, 2L)) only j = 1.
    """
    segs = []
    for j in (0, 1, -1):
        pos = x - j * u.L
        if 0 < pos < u.L:
            c = u.value_at(pos)
            if c > 0:
                off = j * (1 - t.tau)
                # stack periods m so that [off + m, off + m + c] can meet [0, 1]
                for m in (-2, -1, 0, 1, 2):
                    segs.append((off + m, off + m + c))
    return _clip(_normalize(segs), 0, 1)


def _occupancy_row(u: PiecewiseConstant, t: TauParams, y):
    """Horizontal occupancy at ordinate y restricted to [0, L]; only the j = 0
    column of translates meets the open strip (0, L)."""
    segs = []
    for m in (-1, 0, 1):
        rel = y - m
        for a, b, c in u.pieces():
            if 0 <= rel <= c:
                segs.append((a, b))
    return _clip(_normalize(segs), 0, u.L)


def periodic_cell_perimeter(u: PiecewiseConstant, t):
    """Boundary length (with axis-aligned normals) of the tiled subgraph in one cell.

    The subgraph of u is repeated under translations (L, 1 - tau) and (0, 1);
    this measures the resulting boundary inside (0, L] x (0, 1] by sweeping
    vertical and horizontal cut lines and measuring occupancy differences.
    Agrees with continuum_energy_periodic.
    """
    t = _as_tau(t)
    L = u.L

    # vertical boundary: interior breakpoints plus the seam at x = L
    xs = sorted(set(list(u.breakpoints[1:-1]) + [L]))
    x_probe = sorted(set([Fraction(0), L] + list(u.breakpoints) + [L + b for b in u.breakpoints]))
    gaps = [b - a for a, b in zip(x_probe, x_probe[1:]) if b > a]
    dx = min(gaps) / 2
    total = 0
    for x0 in xs:
        left = _occupancy_column(u, t, x0 - dx)
        right = _occupancy_column(u, t, x0 + dx)
        total += _measure(_symmetric_difference(left, right, 0, 1))

    # horizontal boundary: piece values (and 0) shifted by whole periods
    ys = set()
    for v in list(u.values) + [0]:
        for m in (-1, 0, 1):
            yv = v + m
            if 0 < yv <= 1:
                ys.add(yv)
    y_probe = sorted(set(list(ys) + [Fraction(0), Fraction(1)]))
    gaps = [b - a for a, b in zip(y_probe, y_probe[1:]) if b > a]
    dy = min(gaps) / 2 if gaps else Fraction(1, 4)
    for y0 in sorted(ys):
        below = _occupancy_row(u, t, y0 - dy)
        above = _occupancy_row(u, t, y0 + dy)
        total += _measure(_symmetric_difference(below, above, 0, L))
    return total
