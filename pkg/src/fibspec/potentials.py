"""Potential pieces, split-function validation, and cell assembly."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, InvalidCellError, UnsupportedPieceError
from .words import validate_word


class PotentialPiece:
    """A potential fragment on [0, length].

    Subclasses implement `_eval` on the closed interval; the right
    endpoint is admitted (beyond the half-open convention of the cell
    decomposition) because split validation needs f(1).
    """

    length = 1.0

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x > self.length):
            raise DomainError(f"x outside [0, {self.length}]")
        return self._eval(x)

    def __call__(self, x):
        return self.evaluate(x)

    def segments(self):
        """[(value, length)] when piecewise constant, else None."""
        return None

    def abs_max(self, samples=4097):
        """Sampled sup |f|; used to choose safe ODE step counts."""
        xs = np.linspace(0.0, self.length, samples)
        return float(np.max(np.abs(self._eval(xs))))

    def sample(self, xs):
        """Evaluate without the domain guard (integration grids only)."""
        return self._eval(np.asarray(xs, dtype=float))


class ZeroPiece(PotentialPiece):
    """f == 0 on [0, 1]."""

    def _eval(self, x):
        return np.zeros_like(x)

    def segments(self):
        return [(0.0, 1.0)]

    def abs_max(self, samples=0):
        return 0.0

    def __repr__(self):
        return "ZeroPiece()"


class ConstantPiece(PotentialPiece):
    def __init__(self, value):
        self.value = float(value)

    def _eval(self, x):
        return np.full_like(x, self.value)

    def segments(self):
        return [(self.value, 1.0)]

    def abs_max(self, samples=0):
        return abs(self.value)

    def __repr__(self):
        return f"ConstantPiece({self.value!r})"


class PiecewiseConstantPiece(PotentialPiece):
    """Constant segments [(value, length), ...]; lengths must be positive."""

    def __init__(self, segs):
        segs = [(float(v), float(l)) for v, l in segs]
        if not segs:
            raise ConfigError("piecewise-constant piece needs at least one segment")
        if any(l <= 0 for _, l in segs):
            raise ConfigError("piecewise-constant segment lengths must be positive")
        self.segs = segs
        self.length = float(sum(l for _, l in segs))
        self._edges = np.cumsum([0.0] + [l for _, l in segs])

    def _eval(self, x):
        idx = np.searchsorted(self._edges, x, side="right") - 1
        idx = np.clip(idx, 0, len(self.segs) - 1)
        vals = np.array([v for v, _ in self.segs])
        return vals[idx]

    def segments(self):
        return list(self.segs)

    def abs_max(self, samples=0):
        return max(abs(v) for v, _ in self.segs)

    def __repr__(self):
        return f"PiecewiseConstantPiece({self.segs!r})"


class PolynomialPiece(PotentialPiece):
    """Polynomial on [0, 1], coefficients in ascending degree."""

    def __init__(self, coeffs):
        self.coeffs = [float(c) for c in coeffs]
        if not self.coeffs:
            raise ConfigError("polynomial piece needs at least one coefficient")

    def _eval(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def __repr__(self):
        return f"PolynomialPiece({self.coeffs!r})"


class BumpPiece(PotentialPiece):
    """exp(1 + 1/((2x-1)^2 - 1)) on (0, 1), zero at the endpoints."""

    def _eval(self, x):
        out = np.zeros_like(x)
        inner = (x > 0.0) & (x < 1.0)
        xi = x[inner]
        out[inner] = np.exp(1.0 + 1.0 / ((2.0 * xi - 1.0) ** 2 - 1.0))
        return out

    def abs_max(self, samples=0):
        return 1.0

    def __repr__(self):
        return "BumpPiece()"


def splitcubic():
    """The split function 50 x (x - 1/3)(x - 1) as a polynomial piece."""
    return PolynomialPiece([0.0, 50.0 / 3.0, -200.0 / 3.0, 50.0])


def discrete_split(c=4.0):
    """Discrete split preset: value 1 on [0, 1/2), -c on [1/2, 1)."""
    if c <= 0:
        raise ConfigError("discrete split constant c must be positive")
    return PiecewiseConstantPiece([(1.0, 0.5), (-c, 0.5)])


@dataclass(frozen=True)
class SplitReport:
    is_split: bool
    x_star: float | None = None


def validate_split(piece, grid_points=2001, zero_tol=1e-10):
    """Check the split-function sign pattern and locate the interior zero.

    A split piece vanishes at 0 and 1, is positive then negative with a
    single interior sign change x_star, and has f'(x_star) < 0 and
    f'(1) > 0.  Derivatives are central differences; x_star comes from
    bisection on the sampled sign change.
    """
    if grid_points < 100:
        raise ConfigError("grid_points must be at least 100")
    if abs(piece.length - 1.0) > 1e-12:
        raise UnsupportedPieceError("split validation requires a unit-length piece")

    if abs(piece.evaluate(0.0)) > zero_tol or abs(piece.evaluate(1.0)) > zero_tol:
        return SplitReport(False)

    xs = np.linspace(0.0, 1.0, grid_points)[1:-1]
    vals = piece.evaluate(xs)
    signs = np.sign(vals)
    if np.any(signs == 0):
        # tolerate isolated exact zeros on the grid; a run of zeros fails
        nz = signs != 0
        if not np.any(nz):
            return SplitReport(False)
        signs = signs[nz]
        xs_nz = xs[nz]
    else:
        xs_nz = xs
    flips = np.nonzero(np.diff(signs) != 0)[0]
    if len(flips) != 1:
        return SplitReport(False)
    if signs[0] <= 0 or signs[-1] >= 0:
        return SplitReport(False)

    lo, hi = xs_nz[flips[0]], xs_nz[flips[0] + 1]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if piece.evaluate(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    x_star = 0.5 * (lo + hi)

    h = 1e-6
    d_star = (piece.evaluate(min(x_star + h, 1.0)) - piece.evaluate(x_star - h)) / (2 * h)
    d_one = (piece.evaluate(1.0) - piece.evaluate(1.0 - 2 * h)) / (2 * h)
    if d_star >= 0 or d_one <= 0:
        return SplitReport(False)
    return SplitReport(True, float(x_star))


class CellPotential:
    """One period of the potential: lambda * f_{w_n} translated to cell n."""

    def __init__(self, word, piece0, piece1, coupling):
        self.word = validate_word(word)
        if coupling < 0:
            raise ConfigError(f"coupling must be nonnegative, got {coupling}")
        self.piece0 = piece0
        self.piece1 = piece1
        self.coupling = float(coupling)
        self._lengths = [
            (piece1 if ch == "1" else piece0).length for ch in self.word
        ]
        self._starts = np.cumsum([0.0] + self._lengths)

    @property
    def period(self):
        return float(self._starts[-1])

    def piece_for(self, letter):
        return self.piece1 if letter == "1" else self.piece0

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        if np.any(x < 0.0) or np.any(x >= self.period):
            raise DomainError(f"x outside [0, {self.period})")
        idx = np.clip(np.searchsorted(self._starts, x, side="right") - 1,
                      0, len(self.word) - 1)
        out = np.empty_like(x)
        for n in np.unique(idx):
            piece = self.piece_for(self.word[n])
            local = x[idx == n] - self._starts[n]
            out[idx == n] = self.coupling * piece.sample(local)
        return out[0] if scalar else out

    def __repr__(self):
        return (f"CellPotential(word={self.word!r}, piece0={self.piece0!r}, "
                f"piece1={self.piece1!r}, coupling={self.coupling!r})")


def assemble(word, piece0, piece1, coupling):
    """Build a cell potential; raises InvalidCellError on an empty word."""
    if not word:
        raise InvalidCellError("cannot assemble a cell from an empty word")
    return CellPotential(word, piece0, piece1, coupling)


PIECE_PRESETS = ("zero", "bump", "splitcubic")


def parse_piece(spec):
    """Parse a CLI piece spec.

    Forms: "zero", "const:<v>", "pwc:<v1>@<l1>,<v2>@<l2>,...",
    "poly:<c0>,<c1>,...", "bump", "splitcubic".
    """
    spec = spec.strip()
    if spec == "zero":
        return ZeroPiece()
    if spec == "bump":
        return BumpPiece()
    if spec == "splitcubic":
        return splitcubic()
    if spec.startswith("const:"):
        try:
            return ConstantPiece(float(spec[6:]))
        except ValueError as exc:
            raise ConfigError(f"bad constant piece spec {spec!r}") from exc
    if spec.startswith("pwc:"):
        segs = []
        try:
            for part in spec[4:].split(","):
                v, l = part.split("@")
                segs.append((float(v), float(l)))
        except ValueError as exc:
            raise ConfigError(f"bad piecewise-constant piece spec {spec!r}") from exc
        return PiecewiseConstantPiece(segs)
    if spec.startswith("poly:"):
        try:
            coeffs = [float(c) for c in spec[5:].split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad polynomial piece spec {spec!r}") from exc
        return PolynomialPiece(coeffs)
    raise ConfigError(f"unknown piece spec {spec!r}")
