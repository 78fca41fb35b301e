"""Exact arithmetic kernel: sparse multivariate polynomials over the
rationals, and truncated Laurent series in a formal parameter ``h``.

Coefficients are ``fractions.Fraction`` throughout; nothing in this module
ever rounds.  A polynomial is a sparse map from exponent vectors to nonzero
coefficients, tied to an explicit ring (an ordered tuple of variable names).
Mixing polynomials from different rings is a hard error rather than a silent
union of variables; the only exception is the variable-free ring SCALARS,
whose elements are plain constants and coerce into any ring.

``HbarSeries`` is a Laurent series in ``h`` with polynomial coefficients.
A series is either exact (a finite Laurent polynomial, ``trunc is None``) or
carries a truncation order N, meaning coefficients of h^k for k > N are
unknown and have been dropped.  Products propagate truncation soundly: the
coefficient of h^k in a product only depends on input coefficients that are
actually known.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Union

Scalar = Union[int, Fraction]


class RingError(ValueError):
    """Raised on cross-ring operations or unknown variables."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"exact arithmetic requires int or Fraction, got {type(value).__name__}")


@dataclass(frozen=True)
class PolyRing:
    """An ordered list of variable names; fixes the exponent-vector layout."""

    variables: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise RingError(f"duplicate variable names in {self.variables}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise RingError(f"unknown variable {name!r} in ring {self.variables}") from None

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, value: Scalar) -> "MultiPoly":
        c = _as_fraction(value)
        if c == 0:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "MultiPoly":
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return MultiPoly(self, {tuple(exp): Fraction(1)})

    def gens(self) -> tuple["MultiPoly", ...]:
        return tuple(self.var(name) for name in self.variables)


#: The variable-free ring; its elements are constants.
SCALARS = PolyRing(())


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Instances are immutable after construction: no method mutates ``self``,
    so values are safe to share between threads.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple[int, ...], Scalar]):
        clean: dict[tuple[int, ...], Fraction] = {}
        n = ring.nvars
        for exp, coeff in terms.items():
            if len(exp) != n:
                raise RingError(f"exponent vector {exp} does not match ring {ring.variables}")
            c = _as_fraction(coeff)
            if c != 0:
                clean[tuple(exp)] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- inspection ---------------------------------------------------------

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Total degree; the zero polynomial has degree -1 by convention."""
        if not self._terms:
            return -1
        return max(sum(exp) for exp in self._terms)

    def coefficient(self, exp: tuple[int, ...]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial, as a Fraction."""
        if self.total_degree() > 0:
            raise ValueError(f"polynomial is not constant: {self}")
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    # -- ring coercion ------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ring == self.ring:
                return other
            if other.ring == SCALARS:
                return self.ring.const(other.constant_value())
            if self.ring == SCALARS:
                raise _Promote(other)
            raise RingError(
                f"cannot mix rings {self.ring.variables} and {other.ring.variables}"
            )
        return self.ring.const(other)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except _Promote as p:
            return p.poly + self.constant_value()
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s == 0:
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return MultiPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {exp: -c for exp, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -_as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except _Promote as p:
            return p.poly * self.constant_value()
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exp, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(exp, None)
                else:
                    out[exp] = s
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar):
        c = _as_fraction(scalar)
        return MultiPoly(self.ring, {exp: v / c for exp, v in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                if other.ring == SCALARS or self.ring == SCALARS:
                    try:
                        return self.constant_value() == other.constant_value()
                    except ValueError:
                        return False
                return False
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.total_degree() <= 0 and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    # -- calculus and structure --------------------------------------------

    def diff(self, var: str) -> "MultiPoly":
        """Formal partial derivative with respect to a declared variable."""
        i = self.ring.index(var)
        out: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self._terms.items():
            if exp[i] == 0:
                continue
            new = list(exp)
            new[i] -= 1
            out[tuple(new)] = c * exp[i]
        return MultiPoly(self.ring, out)

    def homogeneous_part(self, d: int) -> "MultiPoly":
        """Sum of terms of total degree exactly d."""
        if d < 0:
            raise ValueError("degree must be nonnegative")
        return MultiPoly(
            self.ring, {exp: c for exp, c in self._terms.items() if sum(exp) == d}
        )

    def homogeneous_parts(self) -> dict[int, "MultiPoly"]:
        parts: dict[int, dict] = {}
        for exp, c in self._terms.items():
            parts.setdefault(sum(exp), {})[exp] = c
        return {d: MultiPoly(self.ring, t) for d, t in sorted(parts.items())}

    def substitute(
        self,
        images: Mapping[str, Union["MultiPoly", Scalar]],
        ring: PolyRing | None = None,
    ) -> "MultiPoly":
        """Substitute polynomials for variables.

        With ``ring`` given, every variable of ``self`` must have an image in
        that ring.  Without it, unmapped variables stay themselves.
        """
        target = ring if ring is not None else self.ring
        imgs: list[MultiPoly] = []
        for name in self.ring.variables:
            if name in images:
                img = images[name]
                imgs.append(img if isinstance(img, MultiPoly) else target.const(img))
            elif ring is None:
                imgs.append(target.var(name))
            else:
                raise RingError(f"no image given for variable {name!r}")
        for img in imgs:
            if img.ring != target:
                raise RingError("substitution images must live in the target ring")
        result = target.zero()
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in powers:
                powers[key] = imgs[i] ** e
            return powers[key]

        for exp, c in self._terms.items():
            term = target.const(c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at an exact rational point (all variables required)."""
        values = [_as_fraction(point[name]) for name in self.ring.variables]
        total = Fraction(0)
        for exp, c in self._terms.items():
            v = c
            for x, e in zip(values, exp):
                if e:
                    v *= x**e
            total += v
        return total

    # -- rendering ----------------------------------------------------------

    def text(self) -> str:
        """Canonical rendering, graded-lexicographic, bit-exact across runs."""
        if not self._terms:
            return "0"
        keys = sorted(self._terms, key=lambda e: (sum(e), e), reverse=True)
        pieces: list[str] = []
        for exp in keys:
            c = self._terms[exp]
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.variables, exp)
                if e
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"MultiPoly({self.text()!r})"


class _Promote(Exception):
    """Internal: signals that the scalar-ring operand should be promoted."""

    def __init__(self, poly: MultiPoly):
        self.poly = poly


def _min_known(coeffs: dict, trunc: int | None) -> int:
    """Lowest exponent that could carry a nonzero coefficient."""
    if coeffs:
        return min(coeffs)
    return 0 if trunc is None else trunc + 1


class HbarSeries:
    """Truncated Laurent series in ``h`` with MultiPoly coefficients.

    ``trunc is None`` means the series is exact (all omitted coefficients are
    genuinely zero).  Otherwise coefficients of h^k with k > trunc are
    unknown.  Instances are immutable.
    """

    __slots__ = ("ring", "coeffs", "trunc")

    def __init__(
        self,
        ring: PolyRing,
        coeffs: Mapping[int, Union[MultiPoly, Scalar]],
        trunc: int | None = None,
    ):
        clean: dict[int, MultiPoly] = {}
        for k, c in coeffs.items():
            poly = c if isinstance(c, MultiPoly) else ring.const(c)
            if poly.ring != ring:
                if poly.ring == SCALARS:
                    poly = ring.const(poly.constant_value())
                else:
                    raise RingError("series coefficient in the wrong ring")
            if trunc is not None and k > trunc:
                continue
            if not poly.is_zero():
                clean[k] = poly
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("HbarSeries is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def monomial(coeff: Scalar, exp: int, ring: PolyRing = SCALARS) -> "HbarSeries":
        return HbarSeries(ring, {exp: coeff})

    @staticmethod
    def one(ring: PolyRing = SCALARS) -> "HbarSeries":
        return HbarSeries(ring, {0: 1})

    @staticmethod
    def zero(ring: PolyRing = SCALARS) -> "HbarSeries":
        return HbarSeries(ring, {})

    @staticmethod
    def from_poly(poly: MultiPoly) -> "HbarSeries":
        return HbarSeries(poly.ring, {0: poly})

    # -- inspection -----------------------------------------------------------

    @property
    def min_order(self) -> int:
        return _min_known(self.coeffs, self.trunc)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> MultiPoly:
        if self.trunc is not None and k > self.trunc:
            raise ValueError(f"coefficient of h^{k} lies beyond truncation order {self.trunc}")
        return self.coeffs.get(k, self.ring.zero())

    def __eq__(self, other):
        if not isinstance(other, HbarSeries):
            return NotImplemented
        return self.coeffs == other.coeffs and self.trunc == other.trunc

    def __hash__(self):
        return hash((self.trunc, frozenset(self.coeffs)))

    def eq_to_order(self, other: "HbarSeries", order: int) -> bool:
        """Coefficient-wise equality for all exponents <= order."""
        lo = min(self.min_order, other.min_order)
        for k in range(lo, order + 1):
            if self.coefficient(k) != other.coefficient(k):
                return False
        return True

    # -- arithmetic -----------------------------------------------------------

    def _join_ring(self, other: "HbarSeries") -> PolyRing:
        if self.ring == other.ring:
            return self.ring
        if self.ring == SCALARS:
            return other.ring
        if other.ring == SCALARS:
            return self.ring
        raise RingError("cannot mix series over different rings")

    def __add__(self, other):
        if not isinstance(other, HbarSeries):
            other = HbarSeries(SCALARS, {0: other})
        ring = self._join_ring(other)
        trunc = _min_trunc(self.trunc, other.trunc)
        out: dict[int, MultiPoly] = {}
        for k in set(self.coeffs) | set(other.coeffs):
            c = self.coeffs.get(k, 0) + other.coeffs.get(k, 0)
            out[k] = c
        return HbarSeries(ring, out, trunc)

    __radd__ = __add__

    def __neg__(self):
        return HbarSeries(self.ring, {k: -c for k, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        if not isinstance(other, HbarSeries):
            other = HbarSeries(SCALARS, {0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, MultiPoly)):
            poly = other if isinstance(other, MultiPoly) else None
            out = {}
            for k, c in self.coeffs.items():
                out[k] = c * (poly if poly is not None else other)
            ring = self.ring
            if poly is not None and poly.ring != SCALARS and ring == SCALARS:
                ring = poly.ring
            return HbarSeries(ring, out, self.trunc)
        if not isinstance(other, HbarSeries):
            return NotImplemented
        ring = self._join_ring(other)
        for side in (self, other):
            if side.trunc is None and side.is_zero():
                return HbarSeries.zero(ring)
        na = math_inf if self.trunc is None else self.trunc
        nb = math_inf if other.trunc is None else other.trunc
        bound = min(na + _min_known(other.coeffs, other.trunc),
                    nb + _min_known(self.coeffs, self.trunc))
        trunc = None if bound is math_inf or bound == math_inf else int(bound)
        out: dict[int, MultiPoly] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                if trunc is not None and k > trunc:
                    continue
                prev = out.get(k)
                out[k] = c1 * c2 if prev is None else prev + c1 * c2
        return HbarSeries(ring, out, trunc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("series powers must be nonnegative integers")
        result = HbarSeries.one(self.ring)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, k: int) -> "HbarSeries":
        """Multiply by h^k."""
        trunc = None if self.trunc is None else self.trunc + k
        return HbarSeries(self.ring, {e + k: c for e, c in self.coeffs.items()}, trunc)

    def truncate(self, order: int) -> "HbarSeries":
        if self.trunc is not None and self.trunc < order:
            raise ValueError(f"series only known to order {self.trunc}, cannot claim {order}")
        return HbarSeries(self.ring, {k: c for k, c in self.coeffs.items() if k <= order}, order)

    def inverse(self, order: int | None = None) -> "HbarSeries":
        """Inverse of a series whose lowest coefficient is an invertible constant.

        The result is truncated; for an exact input, ``order`` must be given.
        """
        if self.is_zero():
            raise ZeroDivisionError("cannot invert the zero series")
        m = self.min_order
        lead = self.coeffs[m]
        if lead.total_degree() > 0:
            raise ValueError("series inverse requires a constant leading coefficient")
        c0 = lead.constant_value()
        if order is None:
            if self.trunc is None:
                raise ValueError("order required to invert an exact series")
            order = self.trunc - m
        # Invert u = sum u_j h^j with u_0 = c0 != 0, where self = h^m * u.
        u = {k - m: c.constant_value() for k, c in self.coeffs.items()}
        inv: dict[int, Fraction] = {0: 1 / c0}
        for k in range(1, order + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                if j in u:
                    acc += u[j] * inv.get(k - j, Fraction(0))
            inv[k] = -acc / c0
        out = HbarSeries(self.ring, {k: self.ring.const(v) for k, v in inv.items()}, order)
        return out.shift(-m)

    def divide(self, other: "HbarSeries", order: int | None = None) -> "HbarSeries":
        return self * other.inverse(order)

    def eval_at(self, hvalue: Scalar) -> Fraction:
        """Exact evaluation of a finite Laurent polynomial at a rational h."""
        if self.trunc is not None:
            raise ValueError("only exact (untruncated) series can be evaluated")
        x = _as_fraction(hvalue)
        total = Fraction(0)
        for k, c in self.coeffs.items():
            total += c.constant_value() * x**k
        return total

    # -- rendering -------------------------------------------------------------

    def text(self, var: str = "h") -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            negative = False
            if c.total_degree() <= 0:
                value = c.constant_value()
                negative = value < 0
                coeff_txt = str(abs(value))
            else:
                coeff_txt = f"({c.text()})"
            if k == 0:
                body = coeff_txt
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if coeff_txt == "1" else f"{coeff_txt}*{power}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __str__(self):
        return self.text()

    def __repr__(self):
        tail = "" if self.trunc is None else f" + O(h^{self.trunc + 1})"
        return f"HbarSeries({self.text()}{tail})"


math_inf = float("inf")


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def exp_hbar(a: Scalar, order: int) -> HbarSeries:
    """Taylor series of exp(a*h) through h^order; the avatar of q^c = e^(c*h)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    c = _as_fraction(a)
    coeffs: dict[int, Fraction] = {0: Fraction(1)}
    term = Fraction(1)
    for k in range(1, order + 1):
        term = term * c / k
        coeffs[k] = term
    return HbarSeries(SCALARS, coeffs, order)
