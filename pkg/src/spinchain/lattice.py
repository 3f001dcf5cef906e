"""Exact energies of 0/1 spin chains with nearest and range-n couplings.

A chain of N = floor(L*n^2) sites carries one bit per site (site spacing
1/n^2, domain length L).  Two sites interact when their index distance is
1 or n; the periodic variant additionally couples distances N-1 and N-n.
An energy is the number of mismatched interacting pairs divided by n,
returned as an exact Fraction.

Grouping the chain into columns of n consecutive sites identifies it with
a subset of an n-row grid of cell size 1/n: distance-1 pairs are vertical
neighbours inside a column (or the top of one column against the bottom
of the next, the "wrap" pairs), and distance-n pairs are horizontal
neighbours between adjacent columns.  `to_grid` materializes the picture.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .rationals import frac

__all__ = [
    "SpinConfig",
    "EdgeKind",
    "GridSet",
    "Window",
    "site_count",
    "full_columns",
    "lambda_defect",
    "column_heights",
    "energy_open",
    "energy_periodic",
    "volume",
    "energy_decomposition",
    "to_grid",
    "from_grid",
    "grid_energy",
    "site_to_cell",
    "cell_to_site",
    "config_to_text",
    "parse_config",
]


def site_count(n: int, L) -> int:
    """Number of sites N = floor(L * n^2), computed in exact arithmetic."""
    return math.floor(frac(L) * n * n)


def full_columns(n: int, L) -> int:
    """Number of height-n columns, floor(L * n)."""
    return math.floor(frac(L) * n)


def lambda_defect(n: int, L) -> int:
    """Sites left over after filling full columns: floor(L n^2) - n floor(L n), in [0, n)."""
    return site_count(n, L) - n * full_columns(n, L)


def column_heights(n: int, L) -> tuple[int, ...]:
    lam = lambda_defect(n, L)
    heights = [n] * full_columns(n, L)
    if lam:
        heights.append(lam)
    return tuple(heights)


@dataclass(frozen=True)
class EdgeKind:
    """Boundary flavour of the interaction set: open chain or periodic closure.

    For the periodic flavour, ``lam`` records the defect floor(L n^2) - n floor(L n)
    of the underlying domain.
    """

    kind: str  # "open" | "periodic"
    lam: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("open", "periodic"):
            raise ValueError(f"unknown edge kind {self.kind!r}")
        if self.kind == "periodic" and self.lam is None:
            raise ValueError("periodic edges need the defect lam")

    @staticmethod
    def open_chain() -> "EdgeKind":
        return EdgeKind("open")

    @staticmethod
    def periodic_ring(n: int, L) -> "EdgeKind":
        return EdgeKind("periodic", lambda_defect(n, L))

    @property
    def periodic(self) -> bool:
        return self.kind == "periodic"


@dataclass(frozen=True)
class SpinConfig:
    """A 0/1 configuration on the first floor(L n^2) sites of the 1/n^2 lattice."""

    n: int
    L: Fraction
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "L", frac(self.L))
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.L <= 0:
            raise ValueError("L must be positive")
        if any(v not in (0, 1) for v in self.values):
            raise ValueError("values must be 0/1")
        expected = site_count(self.n, self.L)
        if len(self.values) != expected:
            raise ValueError(
                f"expected {expected} sites for n={self.n}, L={self.L}, got {len(self.values)}"
            )

    @property
    def N(self) -> int:
        return len(self.values)

    def bitmask(self) -> int:
        """Pack the configuration into an int, site i at bit i-1."""
        m = 0
        for i, v in enumerate(self.values):
            if v:
                m |= 1 << i
        return m

    @staticmethod
    def from_bitmask(n: int, L, mask: int) -> "SpinConfig":
        N = site_count(n, L)
        return SpinConfig(n, frac(L), tuple((mask >> i) & 1 for i in range(N)))

    def complement(self) -> "SpinConfig":
        return SpinConfig(self.n, self.L, tuple(1 - v for v in self.values))

    def columns(self) -> list[tuple[int, ...]]:
        out, pos = [], 0
        for h in column_heights(self.n, self.L):
            out.append(self.values[pos : pos + h])
            pos += h
        return out

    def column_counts(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in self.columns())


def volume(cfg: SpinConfig) -> int:
    """Number of occupied sites."""
    return sum(cfg.values)


def _mismatches_at_distance(mask: int, N: int, d: int) -> int:
    """Mismatched pairs {i, i+d} within 1..N, via xor/popcount on the packed bits."""
    if d <= 0 or d >= N:
        return 0
    window = (1 << (N - d)) - 1
    return ((mask ^ (mask >> d)) & window).bit_count()


def _open_distances(n: int) -> set[int]:
    return {1, n}


def _periodic_distances(n: int, N: int) -> set[int]:
    # The four distance classes, as a set: coincident classes count once.
    return {d for d in (1, N - 1, n, N - n) if 1 <= d <= N - 1}


def energy_open(cfg: SpinConfig) -> Fraction:
    """Open-chain energy: (mismatched pairs at distances 1 and n) / n."""
    mask = cfg.bitmask()
    total = sum(_mismatches_at_distance(mask, cfg.N, d) for d in _open_distances(cfg.n))
    return Fraction(total, cfg.n)


def energy_periodic(cfg: SpinConfig) -> Fraction:
    """Ring energy over distances {1, N-1, n, N-n}, each unordered pair counted once."""
    if cfg.N < 2:
        raise ValueError("periodic energy needs at least 2 sites")
    mask = cfg.bitmask()
    total = sum(
        _mismatches_at_distance(mask, cfg.N, d) for d in _periodic_distances(cfg.n, cfg.N)
    )
    return Fraction(total, cfg.n)


def energy_decomposition(cfg: SpinConfig) -> tuple[int, int, int]:
    """Split the open mismatch count into (vertical, horizontal, wrap) integers.

    vertical: distance-1 pairs inside a column (smaller index not divisible by n);
    wrap: distance-1 pairs joining the top of a column to the bottom of the next;
    horizontal: distance-n pairs (empty for n == 1, where that class coincides
    with the distance-1 class already counted).

    n * energy_open(cfg) == vertical + horizontal + wrap, exactly.
    """
    v = cfg.values
    N = cfg.N
    n = cfg.n
    vertical = wrap = 0
    for i in range(1, N):  # pair {i, i+1}, 1-based i
        if v[i - 1] != v[i]:
            if i % n == 0:
                wrap += 1
            else:
                vertical += 1
    horizontal = 0
    if n > 1:
        horizontal = _mismatches_at_distance(cfg.bitmask(), N, n)
    return vertical, horizontal, wrap


def site_to_cell(i: int, n: int) -> tuple[int, int]:
    """1-based site index -> (column h, row k), both in 1..n (row <= lam in a partial column)."""
    return (i - 1) // n + 1, (i - 1) % n + 1


def cell_to_site(h: int, k: int, n: int) -> int:
    return (h - 1) * n + k


@dataclass(frozen=True)
class GridSet:
    """Occupancy of the column/row grid equivalent to a SpinConfig.

    columns[h-1][k-1] is the bit of cell (h, k); the last column may be
    shorter than n.  Cells outside the stored columns are vacant.
    """

    n: int
    columns: tuple[tuple[int, ...], ...]

    def heights(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.columns)

    def occupancy(self, h: int, k: int) -> int:
        if 1 <= h <= len(self.columns) and 1 <= k <= len(self.columns[h - 1]):
            return self.columns[h - 1][k - 1]
        return 0


def to_grid(cfg: SpinConfig) -> GridSet:
    return GridSet(cfg.n, tuple(cfg.columns()))


def from_grid(grid: GridSet, L) -> SpinConfig:
    """Inverse of to_grid; round-trips exactly."""
    flat: list[int] = []
    for col in grid.columns:
        flat.extend(col)
    return SpinConfig(grid.n, frac(L), tuple(flat))


@dataclass(frozen=True)
class Window:
    """Axis-aligned half-open rectangle (x0, x1] x (y0, y1] with rational corners."""

    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def __post_init__(self):
        for name in ("x0", "y0", "x1", "y1"):
            object.__setattr__(self, name, frac(getattr(self, name)))


def grid_energy(grid: GridSet, window: Window) -> Fraction:
    """Nearest-neighbour grid energy inside a window, (1/n) * mismatched pairs.

    A pair counts iff both integer endpoints lie in n*window; occupancy is
    extended by zero outside the stored columns.
    """
    n = grid.n
    ax0 = math.floor(window.x0 * n)  # integer a qualifies iff ax0 < a <= ax1
    ax1 = math.floor(window.x1 * n)
    ay0 = math.floor(window.y0 * n)
    ay1 = math.floor(window.y1 * n)
    if ax1 <= ax0 or ay1 <= ay0:
        warnings.warn("grid_energy: empty window", stacklevel=2)
        return Fraction(0)
    mismatches = 0
    for a in range(ax0 + 1, ax1 + 1):
        for b in range(ay0 + 1, ay1 + 1):
            here = grid.occupancy(a, b)
            if a + 1 <= ax1 and here != grid.occupancy(a + 1, b):
                mismatches += 1
            if b + 1 <= ay1 and here != grid.occupancy(a, b + 1):
                mismatches += 1
    return Fraction(mismatches, n)


# --- text serialization -------------------------------------------------

_HEADER_RE = re.compile(
    r"^n=(?P<n>\d+)\s+L=(?P<L>\d+(?:/\d+)?)\s+boundary=(?P<b>open|periodic)\s*$"
)


def config_to_text(cfg: SpinConfig, boundary: str = "open", rle: bool = False) -> str:
    """Serialize as a header line plus a 0/1 string (or run-length encoding)."""
    if boundary not in ("open", "periodic"):
        raise ValueError("boundary must be open or periodic")
    L = frac(cfg.L)
    header = f"n={cfg.n} L={L.numerator}/{L.denominator} boundary={boundary}"
    if not rle:
        return header + "\n" + "".join(str(v) for v in cfg.values) + "\n"
    runs = []
    pos = 0
    while pos < cfg.N:
        bit = cfg.values[pos]
        run = pos
        while run < cfg.N and cfg.values[run] == bit:
            run += 1
        runs.append(f"{run - pos}x{bit}")
        pos = run
    return header + "\n" + ",".join(runs) + "\n"


def parse_config(text: str) -> tuple[SpinConfig, EdgeKind]:
    """Parse the text format emitted by config_to_text (plain or run-length body)."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ValueError("expected a header line and a body line")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise ValueError(f"bad header: {lines[0]!r}")
    n = int(m.group("n"))
    L = Fraction(m.group("L"))
    body = lines[1]
    if "x" in body:
        bits: list[int] = []
        for part in body.split(","):
            count, _, bit = part.partition("x")
            bits.extend([int(bit)] * int(count))
        values = tuple(bits)
    else:
        values = tuple(int(c) for c in body)
    cfg = SpinConfig(n, L, values)
    if m.group("b") == "periodic":
        return cfg, EdgeKind.periodic_ring(n, L)
    return cfg, EdgeKind.open_chain()
