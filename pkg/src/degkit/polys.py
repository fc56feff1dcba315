"""Exact multivariate polynomials and rational functions over Q.

A polynomial is a dict mapping exponent tuples to nonzero Fractions; the
number of variables is fixed per value.  Variable names live in the layers
above (rational maps, truncated algebras) and only matter for rendering.
No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction


def _key(exp):
    # graded ordering: total degree first, then reverse-lex, so term output
    # and pivot choices are deterministic
    return (sum(exp), exp)


class Poly:
    """Polynomial in ``nvars`` variables with Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = int(nvars)
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != self.nvars:
                    raise ValueError("exponent arity mismatch")
                if any(e < 0 for e in exp):
                    raise ValueError("negative exponent")
                c = Fraction(c)
                if c:
                    clean[exp] = clean.get(exp, Fraction(0)) + c
                    if not clean[exp]:
                        del clean[exp]
        self.terms = clean

    # ------------------------------------------------------------ builders
    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, nvars, c):
        c = Fraction(c)
        return cls(nvars, {tuple([0] * nvars): c} if c else None)

    @classmethod
    def one(cls, nvars):
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars, i, power=1):
        exp = [0] * nvars
        exp[i] = int(power)
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exp, c=1):
        return cls(len(exp), {tuple(exp): Fraction(c)})

    # ---------------------------------------------------------- predicates
    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(sum(e) == 0 for e in self.terms)

    def const_coeff(self):
        return self.terms.get(tuple([0] * self.nvars), Fraction(0))

    def total_degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # ---------------------------------------------------------- arithmetic
    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            out = Poly.__new__(Poly)
            out.nvars = self.nvars
            out.terms = {e: co * c for e, co in self.terms.items()} if c else {}
            return out
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, Fraction(0)) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative power")
        out = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -------------------------------------------------------- manipulation
    def truncate(self, order):
        """Drop all terms of total degree >= order."""
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) < order})

    def substitute(self, values):
        """Substitute values[i] (Poly or Fraction, common arity) for variable i.

        Returns a Poly in the arity of the values.
        """
        arity = None
        vals = []
        for v in values:
            if isinstance(v, Poly):
                arity = v.nvars
            vals.append(v)
        if arity is None:
            raise ValueError("need at least one Poly value to fix arity")
        vals = [v if isinstance(v, Poly) else Poly.const(arity, v) for v in vals]
        if len(vals) != self.nvars:
            raise ValueError("substitution arity mismatch")
        out = Poly.zero(arity)
        for e, c in self.terms.items():
            term = Poly.const(arity, c)
            for i, p in enumerate(e):
                if p:
                    term = term * (vals[i] ** p)
            out = out + term
        return out

    def extend(self, nvars, offset=0):
        """View in a larger variable list, original variable i at offset+i."""
        if offset + self.nvars > nvars:
            raise ValueError("extend: does not fit")
        terms = {}
        for e, c in self.terms.items():
            exp = [0] * nvars
            for i, p in enumerate(e):
                exp[offset + i] = p
            terms[tuple(exp)] = c
        return Poly(nvars, terms)

    def monomial_content(self):
        """Largest monomial dividing every term (zero poly: None)."""
        if not self.terms:
            return None
        exps = list(self.terms)
        return tuple(min(e[i] for e in exps) for i in range(self.nvars))

    def divide_monomial(self, mono):
        terms = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, mono))
            if any(x < 0 for x in q):
                raise ValueError("monomial does not divide")
            terms[q] = c
        return Poly(self.nvars, terms)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial")
        e = max(self.terms, key=_key)
        return e, self.terms[e]

    # ----------------------------------------------------------- rendering
    def render(self, names):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_key, reverse=True):
            c = self.terms[e]
            factors = []
            for i, p in enumerate(e):
                if p == 1:
                    factors.append(names[i])
                elif p > 1:
                    factors.append("%s^%d" % (names[i], p))
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append("%s*%s" % (c, body))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return "Poly(%d, %s)" % (
            self.nvars,
            self.render(["x%d" % i for i in range(self.nvars)]),
        )


class RatFunc:
    """Reduced fraction of two polynomials; denominators never vanish.

    Reduction removes the common monomial factor and rational content and
    normalizes the denominator's leading coefficient to one.  Full
    multivariate gcd is not attempted; for the chart formulas handled here
    denominators stay monomial, so this normal form is canonical in practice
    and equality checks always use cross multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = Poly.one(num.nvars)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.nvars != den.nvars:
            raise ValueError("variable count mismatch")
        if num.is_zero():
            den = Poly.one(num.nvars)
        else:
            gn = num.monomial_content()
            gd = den.monomial_content()
            g = tuple(min(a, b) for a, b in zip(gn, gd))
            if any(g):
                num = num.divide_monomial(g)
                den = den.divide_monomial(g)
        _, lead = den.leading()
        if lead != 1:
            inv = Fraction(1) / lead
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @classmethod
    def const(cls, nvars, c):
        return cls(Poly.const(nvars, c))

    @property
    def nvars(self):
        return self.num.nvars

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            inv = RatFunc(self.den, self.num)
            return inv ** (-k)
        return RatFunc(self.num**k, self.den**k)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        return RatFunc.const(self.nvars, other)

    def same(self, other):
        """Equality as rational functions (cross multiplication; exact)."""
        other = self._coerce(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __eq__(self, other):
        if not isinstance(other, (RatFunc, Poly, int, Fraction)):
            return NotImplemented
        return self.same(other)

    def __hash__(self):
        raise TypeError("RatFunc is unhashable; compare with .same()")

    def substitute(self, values):
        """Substitute RatFunc values for the variables; exact."""
        arity = None
        vals = []
        for v in values:
            if isinstance(v, RatFunc):
                arity = v.nvars
            elif isinstance(v, Poly):
                arity = v.nvars
            vals.append(v)
        if arity is None:
            raise ValueError("need at least one RatFunc/Poly value")
        vals = [
            v
            if isinstance(v, RatFunc)
            else (RatFunc(v) if isinstance(v, Poly) else RatFunc.const(arity, v))
            for v in vals
        ]
        if len(vals) != self.nvars:
            raise ValueError("substitution arity mismatch")
        num = RatFunc.const(arity, 0)
        for e, c in self.num.terms.items():
            t = RatFunc.const(arity, c)
            for i, p in enumerate(e):
                if p:
                    t = t * vals[i] ** p
            num = num + t
        den = RatFunc.const(arity, 0)
        for e, c in self.den.terms.items():
            t = RatFunc.const(arity, c)
            for i, p in enumerate(e):
                if p:
                    t = t * vals[i] ** p
            den = den + t
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes after substitution")
        return num / den

    def render(self, names):
        if self.den.is_const() and self.den.const_coeff() == 1:
            return self.num.render(names)
        return "(%s)/(%s)" % (self.num.render(names), self.den.render(names))

    def __repr__(self):
        return self.render(["x%d" % i for i in range(self.nvars)])
