"""Exact truncated power series in ``z`` and one marking variable ``u``.

Coefficients are Python ints or :class:`fractions.Fraction` held in numpy
object arrays, so every identity is checked as an exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Literal

import numpy as np

from .errors import DomainError
from .lukasiewicz import LukaPattern, autocorrelation


class TruncSeries:
    """``sum a[i, j] z^i u^j`` truncated at ``z^K`` and ``u^U``."""

    __slots__ = ("a",)

    def __init__(self, a):
        a = np.array(a, dtype=object)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        self.a = a

    @classmethod
    def zeros(cls, K: int, U: int = 0) -> "TruncSeries":
        a = np.empty((K + 1, U + 1), dtype=object)
        a.fill(0)
        return cls(a)

    @classmethod
    def monomial(cls, K: int, U: int, i: int, j: int = 0, c=1) -> "TruncSeries":
        s = cls.zeros(K, U)
        if i <= K and j <= U:
            s.a[i, j] = c
        return s

    @classmethod
    def const(cls, K: int, U: int, c=1) -> "TruncSeries":
        return cls.monomial(K, U, 0, 0, c)

    @property
    def K(self) -> int:
        return self.a.shape[0] - 1

    @property
    def U(self) -> int:
        return self.a.shape[1] - 1

    def _lift(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            if other.a.shape != self.a.shape:
                raise ValueError(f"truncation mismatch {other.a.shape} vs {self.a.shape}")
            return other
        return TruncSeries.const(self.K, self.U, other)

    def __add__(self, other):
        return TruncSeries(self.a + self._lift(other).a)

    __radd__ = __add__

    def __sub__(self, other):
        return TruncSeries(self.a - self._lift(other).a)

    def __rsub__(self, other):
        return TruncSeries(self._lift(other).a - self.a)

    def __neg__(self):
        return TruncSeries(-self.a)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries(self.a * other)
        other = self._lift(other)
        K, U = self.K, self.U
        out = np.empty_like(self.a)
        out.fill(0)
        for i, j in zip(*np.nonzero(self.a != 0)):
            out[i:, j:] += self.a[i, j] * other.a[:K + 1 - i, :U + 1 - j]
        return TruncSeries(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative powers are not supported")
        result = TruncSeries.const(self.K, self.U, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        return bool(np.all(self.a == other.a))

    def shift_z(self, p: int) -> "TruncSeries":
        """Multiply by ``z^p``."""
        out = TruncSeries.zeros(self.K, self.U)
        if p <= self.K:
            out.a[p:] = self.a[:self.K + 1 - p]
        return out

    def coeff(self, i: int, j: int = 0):
        return self.a[i, j] if i <= self.K and j <= self.U else 0

    def zcoeffs(self) -> list:
        """Coefficients of the univariate series (``u`` ignored / absent)."""
        return list(self.a[:, 0])

    def at_u1(self) -> list:
        """``[z^i] S(z, 1)`` for each ``i``."""
        return list(self.a.sum(axis=1))

    def du_at_u1(self, order: int = 1) -> list:
        """``[z^i]`` of the ``order``-th ``u``-derivative at ``u = 1``."""
        w = np.array([_falling(j, order) for j in range(self.U + 1)], dtype=object)
        return list((self.a * w).sum(axis=1))

    def subs_u_shift(self) -> "TruncSeries":
        """Substitute ``u -> v + 1`` (binomial transform of each row)."""
        U = self.U
        T = np.array([[comb(c, j) for j in range(U + 1)] for c in range(U + 1)], dtype=object)
        return TruncSeries(self.a.dot(T))

    def is_zero(self) -> bool:
        return bool(np.all(self.a == 0))

    def __repr__(self) -> str:
        return f"TruncSeries(K={self.K}, U={self.U})"


def _falling(j: int, r: int) -> int:
    out = 1
    for t in range(r):
        out *= j - t
    return out


# ---------------------------------------------------------------------------
# classic series
# ---------------------------------------------------------------------------

def _tree_coeffs(K: int) -> list[int]:
    # T = z + T^2
    t = [0] * (K + 2)
    if K >= 1:
        t[1] = 1
    for n in range(2, K + 2):
        t[n] = sum(t[i] * t[n - i] for i in range(1, n))
    return t


def classic_series(name: Literal["T", "F", "catalan"], K: int, U: int = 0) -> TruncSeries:
    """Plane trees ``T(z) = (1 - sqrt(1 - 4z))/2`` or forests ``F(z) = T(z)/z``,
    built from the Catalan recurrence."""
    if K < 0:
        raise DomainError("order must be nonnegative")
    t = _tree_coeffs(K)
    s = TruncSeries.zeros(K, U)
    if name == "T":
        s.a[:, 0] = t[:K + 1]
    elif name in ("F", "catalan"):
        s.a[:, 0] = t[1:K + 2]
    else:
        raise DomainError(f"unknown series {name!r}")
    return s


def geometric(K: int, U: int = 0, power: int = 1) -> TruncSeries:
    """``(1 - z)^(-power)``."""
    s = TruncSeries.zeros(K, U)
    s.a[:, 0] = [comb(n + power - 1, power - 1) for n in range(K + 1)]
    return s


# ---------------------------------------------------------------------------
# pattern series
# ---------------------------------------------------------------------------

def _autocorr_at(pat: LukaPattern, y: TruncSeries) -> TruncSeries:
    acc = TruncSeries.zeros(y.K, y.U)
    for i, hi in autocorrelation(pat):
        acc = acc + (y ** hi).shift_z(i)
    return acc


def pattern_equation_rhs(L: TruncSeries, pat: LukaPattern) -> TruncSeries:
    """Right side of the polynomial equation satisfied by ``L(z, u)``."""
    K, U = L.K, L.U
    one_minus_u = TruncSeries.const(K, U, 1) - TruncSeries.monomial(K, U, 0, 1)
    y = L + 1
    zy2 = (y * y).shift_z(1)
    inner = (L * y ** pat.h).shift_z(pat.m) + (L - zy2) * _autocorr_at(pat, y)
    return zy2 - one_minus_u * inner


def luka_pattern_series(pat, K: int, U: int | None = None) -> TruncSeries:
    """Series ``L(z, u)`` counting paths by length and skip-first occurrences.

    Fixed-point iteration from ``L = 0``; each pass fixes one more power of
    ``z``.  ``U`` defaults to ``K``, which keeps every ``u`` power exactly.
    """
    pat = pat if isinstance(pat, LukaPattern) else LukaPattern(tuple(pat))
    if K < 1:
        raise DomainError("order must be >= 1")
    U = K if U is None else U
    L = TruncSeries.zeros(K, U)
    for _ in range(K + 1):
        nxt = pattern_equation_rhs(L, pat)
        if nxt == L:
            return L
        L = nxt
    if pattern_equation_rhs(L, pat) != L:
        raise RuntimeError("fixed-point iteration did not converge; this is a bug")
    return L


def kernel_residual(pat, L: TruncSeries) -> TruncSeries:
    """Denominator of the pre-kernel equation evaluated at ``y = 1 + L``."""
    pat = pat if isinstance(pat, LukaPattern) else LukaPattern(tuple(pat))
    K, U = L.K, L.U
    one_minus_u = TruncSeries.const(K, U, 1) - TruncSeries.monomial(K, U, 0, 1)
    y = L + 1
    ahat = _autocorr_at(pat, y)
    first = ((y ** pat.h) * (1 - y) * one_minus_u).shift_z(pat.m)
    second = (1 - y + (y * y).shift_z(1)) * (1 + one_minus_u * ahat)
    return first + second


def luka_height_series(K: int, Y: int) -> TruncSeries:
    """``L(z, y)`` with ``y`` marking final height, by iterating the height
    equation in its polynomial form: ``L = zy + zy (L(z,1) - L(z,y)) / (1-y) + ...``.

    Rather than divide by ``1 - y``, build the path counts directly: a step
    from height ``h`` reaches any height in ``1..h+1``.
    """
    s = TruncSeries.zeros(K, Y)
    row = [0] * (Y + 2)
    row[0] = 1
    for n in range(1, K + 1):
        nxt = [0] * (Y + 2)
        for h, c in enumerate(row):
            if c:
                for g in range(1, min(h + 1, Y) + 1):
                    nxt[g] += c
        row = nxt
        s.a[n, :] = row[:Y + 1]
    return s


def height_equation_residual(L: TruncSeries) -> TruncSeries:
    """``(1-y) L - [zy(1-y) + zy(L(z,1) - yL)]``; zero iff ``L`` satisfies the
    height functional equation (multiplied through by ``1 - y``)."""
    K, Y = L.K, L.U
    y = TruncSeries.monomial(K, Y, 0, 1)
    one = TruncSeries.const(K, Y, 1)
    L1 = TruncSeries.zeros(K, Y)
    L1.a[:, 0] = L.at_u1()
    lhs = (one - y) * L
    rhs = (y * (one - y) + y * (L1 - y * L)).shift_z(1)
    # multiplying by polynomials in y only raises y-degree, so every retained
    # coefficient is exact
    return lhs - rhs


# ---------------------------------------------------------------------------
# marked generating functions
# ---------------------------------------------------------------------------

Family = Literal["B", "G", "R", "L"]


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def _div(num: int, den: int) -> Fraction:
    if den == 0:
        raise DomainError("degenerate parameters: closed form divides by zero")
    return Fraction(num, den)


def _forests(c: int, n: int) -> Fraction:
    """``(c/n) C(2n-c-1, n-1)`` plane forests of ``n`` vertices and ``c`` trees;
    the empty forest (``n = 0``) is the removable case ``[c = 0]``."""
    if n < 0 or c < 0:
        return Fraction(0)
    if n == 0:
        return Fraction(int(c == 0))
    return Fraction(c * _binom(2 * n - c - 1, n - 1), n)


def closed_form_coeffs(family: Family, k: int, **p) -> tuple[Fraction, Fraction, Fraction | None]:
    """The closed-form binomial formulas for ``([z^k]A, [z^k]A_x, [z^k]A_xx)`` at ``x = 1``."""
    if family == "B":
        d, i, ell = p["d"], p["i"], k
        if not 1 <= d <= ell - 1:
            raise DomainError(f"B family needs 1 <= d <= ell-1, got d={d}, ell={ell}")
        # d/(l-1) C(2l-d-3, l-2), d(d-1)/(l-i-1) C(2l-2i-d-2, l-i-2), ...
        return (
            _forests(d, ell - 1),
            d * _forests(d - 1, ell - i - 1),
            d * (d - 1) * _forests(d - 2, ell - 2 * i - 1),
        )
    if family == "G":
        d, j = p["d"], p["j"]
        if d < 1 or k < 1 or j < 0:
            raise DomainError(f"G family needs d >= 1, k >= 1, j >= 0; got d={d}, k={k}, j={j}")
        return (
            Fraction(_binom(k + d - 1, d)),
            Fraction(d * _binom(k - j + d - 2, d - 1)),
            Fraction(d * (d - 1) * _binom(k - 2 * j + d - 3, d - 2)),
        )
    if family == "R":
        m = p["m"]
        if k < 1 or m < 1:
            raise DomainError(f"R family needs k >= 1, m >= 1; got k={k}, m={m}")
        return (
            _div(1, k) * _binom(2 * k - 2, k - 1),
            Fraction(_binom(2 * k - 2 * m - 3, k - m - 1)),
            Fraction((k - 2 * m - 2) * _binom(2 * k - 4 * m - 4, k - 2 * m - 2)),
        )
    if family == "L":
        m, h = p["m"], p["h"]
        return (
            Fraction(_binom(2 * k, k), k + 1),
            Fraction(_binom(2 * k - 2 * m + h, k - m - 1)),
            None,
        )
    raise DomainError(f"unknown family {family!r}")


def marked_series(family: Family, K: int, **p) -> TruncSeries:
    """Bivariate series with ``u`` marking the family's parameter.

    ``B``: plane trees of root degree ``d``, ``u`` marking principal subtrees
    equal to one fixed ``i``-vertex tree.  ``G``: pre-interleavings with ``d``
    blue roots, ``u`` marking gaps of size ``j``.  ``R``: plane trees, ``u``
    marking vertices whose leftmost subtrees form one fixed ``m``-vertex
    forest followed by at least one more child.  ``L``: paths, ``u`` marking
    skip-first occurrences of ``pattern``.
    """
    if family == "B":
        d, i = p["d"], p["i"]
        U = d
        T = classic_series("T", K, U)
        mark = TruncSeries.monomial(K, U, i, 1) - TruncSeries.monomial(K, U, i, 0)
        return ((T + mark) ** d).shift_z(1)
    if family == "G":
        d, j = p["d"], p["j"]
        U = d
        geo = geometric(K, U)
        mark = TruncSeries.monomial(K, U, j, 1) - TruncSeries.monomial(K, U, j, 0)
        return (geo * (geo + mark) ** d).shift_z(1)
    if family == "R":
        m = p["m"]
        U = K
        z = TruncSeries.monomial(K, U, 1)
        mark = TruncSeries.monomial(K, U, m + 1, 1) - TruncSeries.monomial(K, U, m + 1, 0)
        R = TruncSeries.zeros(K, U)
        # R (1 - R) = z (1 + (w - 1) z^m R)
        for _ in range(K + 1):
            R = z + R * R + mark * R
        return R
    if family == "L":
        return luka_pattern_series(p["pattern"], K)
    raise DomainError(f"unknown family {family!r}")


@dataclass(frozen=True)
class MarkedCoeffs:
    A: int
    A_x: int
    A_xx: int


def marked_gf_coeffs(family: Family, k: int, check: bool = True, **p) -> MarkedCoeffs:
    """``[z^k]`` of ``A``, ``A_x``, ``A_xx`` at ``x = 1``, computed from the
    series and (with ``check``) asserted against the closed forms."""
    s = marked_series(family, k, **p)
    got = MarkedCoeffs(s.at_u1()[k], s.du_at_u1(1)[k], s.du_at_u1(2)[k] if s.U >= 2 else 0)
    if check:
        cp = dict(p)
        if family == "L":
            pat = p["pattern"]
            pat = pat if isinstance(pat, LukaPattern) else LukaPattern(tuple(pat))
            cp = {"m": pat.m, "h": pat.h}
        want = closed_form_coeffs(family, k, **cp)
        for name, g, w in zip(("A", "A_x", "A_xx"), (got.A, got.A_x, got.A_xx), want):
            if w is not None and g != w:
                raise AssertionError(f"{family} {p} k={k}: series {name}={g}, closed form {w}")
    return got


@dataclass(frozen=True)
class FiniteMoments:
    mean: Fraction  # of the occurrence count
    variance: Fraction
    normalizer: int  # d for proportions of blue subtrees/roots, k for positions
    prop_mean: Fraction
    prop_variance: Fraction


def finite_moments(family: Family, k: int, **p) -> FiniteMoments:
    """Exact mean and variance from the marked coefficients (``A_x / A`` and
    ``A_xx / A + mean - mean^2``), plus the proportion version."""
    c = marked_gf_coeffs(family, k, check=False, **p)
    if c.A == 0:
        raise DomainError(f"no objects of size {k} for {family} {p}")
    mean = Fraction(c.A_x, c.A)
    var = Fraction(c.A_xx, c.A) + mean - mean * mean
    norm = p["d"] if family in ("B", "G") else k
    return FiniteMoments(mean, var, norm, mean / norm, var / (norm * norm))
