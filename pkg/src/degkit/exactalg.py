"""Truncated commutative algebras over Q and the two-branch node ring.

A :class:`TruncatedAlgebra` is a finitely presented Q-algebra in which every
monomial of total degree >= ``order`` is declared zero, so the algebra is a
finite-dimensional Q-vector space and all ideal and kernel computations are
exact linear algebra.  The first generator is reserved for the smoothing
parameter ``s``; the trivial smoothing is obtained by adding ``s`` itself as
a relation.

A :class:`NodeRing` attaches two branch variables z1, z2 to such an algebra,
subject to the rewrite z1*z2 = s.  Its elements are kept in the unique
normal form

    a0 + sum_i a_i z1^i + sum_i b_i z2^i,   a_i, b_i in the algebra,

and the exposed tail window has length ``order`` (pure powers of index >=
``order`` are unobservable).  Internally the tails run ``order`` +
algebra.order slots deep and the top slots are reduced modulo the matching
power of (s); this is exactly the quotient by the ideal generated by the
pure powers z1^K, z2^K at the internal window K, which keeps multiplication
associative while every exposed slot still carries an exact algebra element.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .linalg import Subspace
from .polys import Poly


def _frac_str(c):
    c = Fraction(c)
    return "%d/%d" % (c.numerator, c.denominator)


def _frac_parse(text):
    if isinstance(text, str):
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    return Fraction(text)


class TruncatedAlgebra:
    """Finite-dimensional truncation of a presented Q-algebra.

    gens:      generator names; gens[0] is the smoothing parameter s
    relations: Poly values in len(gens) variables (or {exp: coeff} dicts)
    order:     truncation order N; monomials of total degree >= N vanish
    local:     marks the algebra as local with maximal ideal (gens)
    """

    def __init__(self, gens, relations=(), order=8, local=True):
        gens = tuple(gens)
        if not gens:
            raise ValueError("need at least one generator (the parameter s)")
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        order = int(order)
        if order < 1:
            raise ValueError("order must be positive")
        self.gens = gens
        self.order = order
        self.local = bool(local)
        rels = []
        for r in relations:
            if isinstance(r, Poly):
                if r.nvars != len(gens):
                    raise ValueError("relation arity mismatch")
                rels.append(r)
            else:
                rels.append(Poly(len(gens), r))
        self.relations = tuple(rels)

        self._monomials = self._all_monomials()
        self._mono_index = {m: i for i, m in enumerate(self._monomials)}
        self._rel_space = self._relation_span()
        pivot_set = set(self._rel_space.pivots)
        self.basis = tuple(
            m for i, m in enumerate(self._monomials) if i not in pivot_set
        )
        self._basis_index = {m: i for i, m in enumerate(self.basis)}
        self.dim = len(self.basis)
        if self.dim == 0:
            raise ValueError("the relations collapse the algebra to zero")
        self._mul_table = {}
        self._mpowers = None

    # ------------------------------------------------------------ internals
    def _all_monomials(self):
        n = len(self.gens)
        out = []
        for total in range(self.order):
            for exp in itertools.product(range(total + 1), repeat=n):
                if sum(exp) == total:
                    out.append(exp)
        return out

    def _relation_span(self):
        vectors = []
        for rel in self.relations:
            for mono in self._monomials:
                prod = rel * Poly.monomial(mono)
                vec = self._poly_to_fullvec(prod)
                if any(vec):
                    vectors.append(vec)
        return Subspace(vectors, len(self._monomials))

    def _poly_to_fullvec(self, poly):
        vec = [Fraction(0)] * len(self._monomials)
        for exp, c in poly.terms.items():
            idx = self._mono_index.get(exp)
            if idx is not None:
                vec[idx] += c
        return vec

    def _fullvec_to_coeffs(self, vec):
        red = self._rel_space.reduce(vec)
        return tuple(red[self._mono_index[m]] for m in self.basis)

    # ----------------------------------------------------------- public api
    def element(self, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != self.dim:
            raise ValueError("coefficient vector length mismatch")
        return AlgebraElement(self, coeffs)

    def zero(self):
        return AlgebraElement(self, tuple([Fraction(0)] * self.dim))

    def one(self):
        return self.from_poly(Poly.one(len(self.gens)))

    def const(self, c):
        return self.from_poly(Poly.const(len(self.gens), c))

    def gen(self, i):
        return self.from_poly(Poly.var(len(self.gens), i))

    @property
    def s(self):
        """Class of the smoothing parameter."""
        return self.gen(0)

    def from_poly(self, poly):
        if poly.nvars != len(self.gens):
            raise ValueError("arity mismatch")
        return AlgebraElement(self, self._fullvec_to_coeffs(self._poly_to_fullvec(poly)))

    def monomial_element(self, exp):
        return self.from_poly(Poly.monomial(exp))

    def basis_element(self, i):
        vec = [Fraction(0)] * self.dim
        vec[i] = Fraction(1)
        return AlgebraElement(self, tuple(vec))

    def _basis_product(self, i, j):
        key = (i, j) if i <= j else (j, i)
        got = self._mul_table.get(key)
        if got is None:
            exp = tuple(a + b for a, b in zip(self.basis[key[0]], self.basis[key[1]]))
            if sum(exp) >= self.order:
                got = tuple([Fraction(0)] * self.dim)
            else:
                got = self._fullvec_to_coeffs(
                    self._poly_to_fullvec(Poly.monomial(exp))
                )
            self._mul_table[key] = got
        return got

    def maximal_ideal_power(self, k):
        """Span of m^k as a subspace (m generated by all generators)."""
        if self._mpowers is None:
            self._mpowers = {}
        got = self._mpowers.get(k)
        if got is None:
            if k <= 0:
                vecs = [self.basis_element(i).coeffs for i in range(self.dim)]
            else:
                vecs = [
                    self.monomial_element(m).coeffs
                    for m in self._monomials
                    if sum(m) >= k
                ]
            got = Subspace(vecs, self.dim)
            self._mpowers[k] = got
        return got

    def valuation(self, elem):
        """m-adic valuation; the zero element reports the truncation order."""
        if elem.is_zero():
            return self.order
        v = 0
        while v + 1 <= self.order and self.maximal_ideal_power(v + 1).contains(
            elem.coeffs
        ):
            v += 1
        return v

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedAlgebra)
            and self.gens == other.gens
            and self.order == other.order
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.gens, self.order, len(self.relations)))

    def __repr__(self):
        return "TruncatedAlgebra(gens=%r, order=%d, dim=%d)" % (
            self.gens,
            self.order,
            self.dim,
        )

    # ----------------------------------------------------------------- json
    def to_json(self):
        return {
            "generators": list(self.gens),
            "relations": [
                sorted(
                    [[list(e), _frac_str(c)] for e, c in r.terms.items()],
                    key=lambda t: t[0],
                )
                for r in self.relations
            ],
            "order": self.order,
            "local": self.local,
        }

    @classmethod
    def from_json(cls, data):
        rels = [
            Poly(
                len(data["generators"]),
                {tuple(e): _frac_parse(c) for e, c in r},
            )
            for r in data["relations"]
        ]
        return cls(
            data["generators"], rels, data["order"], data.get("local", True)
        )


class AlgebraElement:
    """Element of a truncated algebra as a vector over the cached basis."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = tuple(coeffs)

    def _check(self, other):
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return AlgebraElement(
            self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return AlgebraElement(self.algebra, tuple(a * c for a in self.coeffs))
        other = self._coerce(other)
        self._check(other)
        dim = self.algebra.dim
        acc = [Fraction(0)] * dim
        for i, ci in enumerate(self.coeffs):
            if not ci:
                continue
            for j, cj in enumerate(other.coeffs):
                if not cj:
                    continue
                prod = self.algebra._basis_product(i, j)
                f = ci * cj
                for k, pk in enumerate(prod):
                    if pk:
                        acc[k] += f * pk
        return AlgebraElement(self.algebra, tuple(acc))

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        out = self.algebra.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            return other
        return self.algebra.const(other)

    def is_zero(self):
        return not any(self.coeffs)

    def constant_term(self):
        idx = self.algebra._basis_index.get(tuple([0] * len(self.algebra.gens)))
        if idx is None:
            return Fraction(0)
        return self.coeffs[idx]

    def is_unit(self):
        # all generators are nilpotent at truncation, so a unit is exactly an
        # element with nonzero rational constant term
        return self.constant_term() != 0

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("element is not a unit")
        c = self.constant_term()
        y = self * (Fraction(1) / c) - self.algebra.one()
        out = self.algebra.one()
        power = self.algebra.one()
        for _ in range(self.algebra.order + 1):
            power = power * (-y)
            if power.is_zero():
                break
            out = out + power
        return out * (Fraction(1) / c)

    def residue(self):
        """Image in the residue field A/m = Q (local algebras)."""
        return self.constant_term()

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.algebra == other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def as_poly(self):
        return Poly(
            len(self.algebra.gens),
            {m: c for m, c in zip(self.algebra.basis, self.coeffs) if c},
        )

    def render(self):
        return self.as_poly().render(self.algebra.gens)

    def __repr__(self):
        return self.render()

    def to_json(self):
        return [_frac_str(c) for c in self.coeffs]


def element_from_json(algebra, data):
    return algebra.element([_frac_parse(c) for c in data])


class AlgebraIdeal:
    """Ideal with its vector-space span cached at construction."""

    def __init__(self, algebra, generators):
        self.algebra = algebra
        gens = []
        for g in generators:
            if not isinstance(g, AlgebraElement):
                raise TypeError("ideal generators must be algebra elements")
            if g.algebra != algebra:
                raise ValueError("generator from a different algebra")
            gens.append(g)
        self.generators = tuple(gens)
        vectors = []
        for g in gens:
            for i in range(algebra.dim):
                vectors.append((g * algebra.basis_element(i)).coeffs)
        self.span = Subspace(vectors, algebra.dim)

    def contains(self, elem):
        if elem.algebra != self.algebra:
            raise ValueError("element from a different algebra")
        return self.span.contains(elem.coeffs)

    def is_zero(self):
        return self.span.dim == 0

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraIdeal)
            and self.algebra == other.algebra
            and self.span == other.span
        )

    def __hash__(self):
        return hash(self.span)

    def __add__(self, other):
        if other.algebra != self.algebra:
            raise ValueError("ideals of different algebras")
        return AlgebraIdeal(self.algebra, self.generators + other.generators)

    def push(self, hom):
        """Extension ideal h(I) . A' in the hom's target."""
        return AlgebraIdeal(hom.target, [hom.apply(g) for g in self.generators])

    def quotient_algebra(self):
        """The algebra A/I with the quotient map, as a fresh presentation."""
        A = self.algebra
        rels = list(A.relations) + [g.as_poly() for g in self.generators]
        Q = TruncatedAlgebra(A.gens, rels, A.order, A.local)
        hom = AlgebraHom(A, Q, [Q.gen(i) for i in range(len(A.gens))])
        return Q, hom


def ideal_membership(ideal, elem):
    """Exact membership test against the cached span."""
    return ideal.contains(elem)


class AlgebraHom:
    """Algebra map determined by generator images; checked at construction.

    The images must kill every relation and every monomial at the truncation
    degree of the source, so the map is a well-defined map of truncated
    algebras.  Whether the smoothing parameter of the source lands on the
    smoothing parameter of the target is recorded in ``maps_smoothing``.
    """

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        images = tuple(images)
        if len(images) != len(source.gens):
            raise ValueError("need one image per source generator")
        for im in images:
            if not isinstance(im, AlgebraElement) or im.algebra != target:
                raise ValueError("images must be elements of the target")
        self.images = images
        for rel in source.relations:
            if not self._eval_poly(rel).is_zero():
                raise ValueError("images violate a source relation: %s" % (rel,))
        n = len(source.gens)
        for exp in itertools.product(range(source.order + 1), repeat=n):
            if sum(exp) == source.order:
                if not self._eval_monomial(exp).is_zero():
                    raise ValueError(
                        "images do not respect the source truncation order"
                    )
        self._basis_images = None
        self.maps_smoothing = self.apply(source.s) == target.s

    def _eval_monomial(self, exp):
        out = self.target.one()
        for i, p in enumerate(exp):
            if p:
                out = out * self.images[i] ** p
        return out

    def _eval_poly(self, poly):
        out = self.target.zero()
        for exp, c in poly.terms.items():
            out = out + self._eval_monomial(exp) * c
        return out

    def apply(self, elem):
        if isinstance(elem, NodeSeries):
            raise TypeError("use hom_apply for node series")
        if elem.algebra != self.source:
            raise ValueError("element from a different algebra")
        if self._basis_images is None:
            self._basis_images = [
                self._eval_monomial(m) for m in self.source.basis
            ]
        out = self.target.zero()
        for c, im in zip(elem.coeffs, self._basis_images):
            if c:
                out = out + im * c
        return out

    @classmethod
    def identity(cls, algebra):
        return cls(
            algebra, algebra, [algebra.gen(i) for i in range(len(algebra.gens))]
        )

    def __repr__(self):
        pairs = ", ".join(
            "%s->%s" % (g, im.render()) for g, im in zip(self.source.gens, self.images)
        )
        return "AlgebraHom(%s)" % pairs


def adjoin_nilpotent(algebra, name="d", power=2):
    """Tensor with Q[d]/(d^power); returns (extension, inclusion hom)."""
    gens = algebra.gens + (name,)
    n = len(gens)
    rels = [r.extend(n) for r in algebra.relations]
    rels.append(Poly.var(n, n - 1, power))
    ext = TruncatedAlgebra(gens, rels, algebra.order, algebra.local)
    inc = AlgebraHom(algebra, ext, [ext.gen(i) for i in range(n - 1)])
    return ext, inc


# ---------------------------------------------------------------------------
# the node ring
# ---------------------------------------------------------------------------


class NodeRing:
    """Two-branch ring over a truncated algebra with z1*z2 = s."""

    def __init__(self, algebra, order=8):
        order = int(order)
        if order < 2:
            raise ValueError("series order must be at least 2")
        self.algebra = algebra
        self.order = order
        self.internal = order + algebra.order
        # slot k of the internal window is reduced modulo s^(internal-k)*A;
        # exposed slots (k < order) satisfy internal-k >= algebra.order and
        # need no reduction
        self._slot_spaces = {}
        for k in range(1, self.internal):
            e = self.internal - k
            if e < algebra.order:
                s_pow = algebra.s**e
                vecs = [
                    (s_pow * algebra.basis_element(i)).coeffs
                    for i in range(algebra.dim)
                ]
                self._slot_spaces[k] = Subspace(vecs, algebra.dim)

    def _slot_reduce(self, k, elem):
        space = self._slot_spaces.get(k)
        if space is None:
            return elem
        return self.algebra.element(space.reduce(elem.coeffs))

    def series(self, const, z1_tail=(), z2_tail=()):
        """Build a normal form; user tails may not reach the exposed order."""
        tails = []
        for tail in (z1_tail, z2_tail):
            tail = list(tail)
            if len(tail) > self.order - 1:
                raise ValueError(
                    "tail of length %d overflows the series order %d"
                    % (len(tail) + 1, self.order)
                )
            tails.append(tail)
        return self._series_internal(const, tails[0], tails[1])

    def _series_internal(self, const, z1_tail, z2_tail):
        K = self.internal - 1
        a = list(z1_tail)[:K] + [self.algebra.zero()] * (K - len(z1_tail))
        b = list(z2_tail)[:K] + [self.algebra.zero()] * (K - len(z2_tail))
        a = [self._slot_reduce(i + 1, x) for i, x in enumerate(a)]
        b = [self._slot_reduce(i + 1, x) for i, x in enumerate(b)]
        return NodeSeries(self, const, tuple(a), tuple(b))

    def zero(self):
        return self.series(self.algebra.zero())

    def one(self):
        return self.series(self.algebra.one())

    def const(self, elem):
        if isinstance(elem, (int, Fraction)):
            elem = self.algebra.const(elem)
        return self.series(elem)

    def z1(self, power=1, coeff=None):
        return self.branch_power(1, power, coeff)

    def z2(self, power=1, coeff=None):
        return self.branch_power(2, power, coeff)

    def branch_power(self, branch, power, coeff=None):
        power = int(power)
        if power < 0:
            raise ValueError("negative branch power")
        coeff = coeff if coeff is not None else self.algebra.one()
        if isinstance(coeff, (int, Fraction)):
            coeff = self.algebra.const(coeff)
        if power == 0:
            return self.series(coeff)
        if power >= self.internal:
            return self.zero()
        tail = [self.algebra.zero()] * power
        tail[power - 1] = coeff
        if branch == 1:
            return self._series_internal(self.algebra.zero(), tail, [])
        return self._series_internal(self.algebra.zero(), [], tail)

    def normal_form(self, expr):
        """Normal form of a polynomial in z1, z2 with algebra coefficients.

        ``expr`` maps exponent pairs (i, j) to algebra elements (or rational
        constants).  Monomials of total z-degree above the exposed order are
        rejected; every mixed monomial is rewritten through z1*z2 = s.
        """
        for (i, j) in expr:
            if i + j > self.order:
                raise ValueError(
                    "monomial z1^%d z2^%d overflows the series order %d"
                    % (i, j, self.order)
                )
        return self._normal_form_unchecked(expr)

    def _normal_form_unchecked(self, expr):
        const = self.algebra.zero()
        K = self.internal - 1
        a = [self.algebra.zero()] * K
        b = [self.algebra.zero()] * K
        for (i, j), coeff in expr.items():
            if isinstance(coeff, (int, Fraction)):
                coeff = self.algebra.const(coeff)
            m = min(i, j)
            c = coeff * self.algebra.s**m if m else coeff
            k = abs(i - j)
            if k == 0:
                const = const + c
            elif k <= K:
                if i > j:
                    a[k - 1] = a[k - 1] + c
                else:
                    b[k - 1] = b[k - 1] + c
        return self._series_internal(const, a, b)

    def __eq__(self, other):
        return (
            isinstance(other, NodeRing)
            and self.algebra == other.algebra
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.order, self.algebra))

    def __repr__(self):
        return "NodeRing(%r, order=%d)" % (self.algebra, self.order)


class NodeSeries:
    """Normal form a0 + sum a_i z1^i + sum b_i z2^i over a node ring."""

    __slots__ = ("ring", "a0", "a", "b")

    def __init__(self, ring, a0, a, b):
        self.ring = ring
        self.a0 = a0
        self.a = a
        self.b = b

    # exposed tails (indices 1 .. order-1)
    def z1_tail(self):
        return self.a[: self.ring.order - 1]

    def z2_tail(self):
        return self.b[: self.ring.order - 1]

    def z1_coeff(self, i):
        if i == 0:
            return self.a0
        return self.a[i - 1] if i - 1 < len(self.a) else self.ring.algebra.zero()

    def z2_coeff(self, i):
        if i == 0:
            return self.a0
        return self.b[i - 1] if i - 1 < len(self.b) else self.ring.algebra.zero()

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("series over different node rings")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return NodeSeries(
            self.ring,
            self.a0 + other.a0,
            tuple(x + y for x, y in zip(self.a, other.a)),
            tuple(x + y for x, y in zip(self.b, other.b)),
        )

    __radd__ = __add__

    def __neg__(self):
        return NodeSeries(
            self.ring, -self.a0, tuple(-x for x in self.a), tuple(-x for x in self.b)
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def _coerce(self, other):
        if isinstance(other, NodeSeries):
            return other
        if isinstance(other, AlgebraElement):
            return self.ring.const(other)
        return self.ring.const(self.ring.algebra.const(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return NodeSeries(
                self.ring,
                self.a0 * c,
                tuple(x * c for x in self.a),
                tuple(x * c for x in self.b),
            )
        if isinstance(other, AlgebraElement):
            other = self.ring.const(other)
        self._check(other)
        ring = self.ring
        alg = ring.algebra
        K = ring.internal - 1
        s_pows = [alg.one()]
        for _ in range(min(alg.order, K)):
            s_pows.append(s_pows[-1] * alg.s)

        def A(x, i):
            return x.a0 if i == 0 else x.a[i - 1]

        def B(x, i):
            return x.a0 if i == 0 else x.b[i - 1]

        x, y = self, other
        const = x.a0 * y.a0
        for i in range(1, min(len(s_pows), K + 1)):
            if s_pows[i].is_zero():
                break
            term = A(x, i) * B(y, i) + B(x, i) * A(y, i)
            const = const + term * s_pows[i]
        a_out = []
        b_out = []
        for k in range(1, K + 1):
            ck = alg.zero()
            dk = alg.zero()
            for i in range(0, k + 1):
                ck = ck + A(x, i) * A(y, k - i)
                dk = dk + B(x, i) * B(y, k - i)
            for i in range(1, len(s_pows)):
                if s_pows[i].is_zero():
                    break
                if k + i <= K:
                    ck = ck + (A(x, k + i) * B(y, i) + B(x, i) * A(y, k + i)) * s_pows[i]
                    dk = dk + (B(x, k + i) * A(y, i) + A(x, i) * B(y, k + i)) * s_pows[i]
            a_out.append(ck)
            b_out.append(dk)
        return ring._series_internal(const, a_out, b_out)

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, branch):
        """Multiply by z1 (branch 1) or z2 (branch 2); a structured shift,
        much cheaper than a general product."""
        ring = self.ring
        alg = ring.algebra
        K = ring.internal - 1
        if branch == 1:
            const = alg.s * self.b[0] if K >= 1 else alg.zero()
            a = [self.a0] + [self.a[i] for i in range(K - 1)]
            b = [
                alg.s * self.b[j + 1] if j + 1 < K else alg.zero()
                for j in range(K)
            ]
        else:
            const = alg.s * self.a[0] if K >= 1 else alg.zero()
            b = [self.a0] + [self.b[i] for i in range(K - 1)]
            a = [
                alg.s * self.a[j + 1] if j + 1 < K else alg.zero()
                for j in range(K)
            ]
        return ring._series_internal(const, a, b)

    def is_zero(self):
        return (
            self.a0.is_zero()
            and all(x.is_zero() for x in self.a)
            and all(x.is_zero() for x in self.b)
        )

    def is_unit(self):
        return self.a0.is_unit()

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("series is not a unit (constant term)")
        c = self.a0
        c_inv = c.inverse()
        y = self * c_inv - self.ring.one()
        out = self.ring.one()
        power = self.ring.one()
        cap = self.ring.internal + 2 * self.ring.algebra.order + 2
        for _ in range(cap):
            power = power * (-y)
            if power.is_zero():
                break
            out = out + power
        else:
            raise ArithmeticError("inversion did not terminate")
        return out * c_inv

    def __eq__(self, other):
        return (
            isinstance(other, NodeSeries)
            and self.ring == other.ring
            and self.a0 == other.a0
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.a0, self.a, self.b))

    def render(self):
        parts = []
        if not self.a0.is_zero():
            parts.append("(%s)" % self.a0.render())
        for i, x in enumerate(self.z1_tail(), start=1):
            if not x.is_zero():
                parts.append("(%s)*z1^%d" % (x.render(), i))
        for i, x in enumerate(self.z2_tail(), start=1):
            if not x.is_zero():
                parts.append("(%s)*z2^%d" % (x.render(), i))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return self.render()

    def to_json(self):
        return {
            "a0": self.a0.to_json(),
            "z1_tail": [x.to_json() for x in self.z1_tail()],
            "z2_tail": [x.to_json() for x in self.z2_tail()],
            "order": self.ring.order,
        }


def series_from_json(ring, data):
    alg = ring.algebra
    return ring.series(
        element_from_json(alg, data["a0"]),
        [element_from_json(alg, x) for x in data["z1_tail"]],
        [element_from_json(alg, x) for x in data["z2_tail"]],
    )


# module-level operation names mirroring the package surface


def normal_form(ring, expr):
    return ring.normal_form(expr)


def normal_form_stepwise(ring, expr, leftmost=True):
    """Normal form by one-step rewrites z1*z2 -> s, in either sweep order.

    Independent of :func:`normal_form`; used to cross-check uniqueness.
    """
    work = {}
    for (i, j), coeff in expr.items():
        if i + j > ring.order:
            raise ValueError("monomial overflows the series order")
        if isinstance(coeff, (int, Fraction)):
            coeff = ring.algebra.const(coeff)
        key = (i, j)
        work[key] = work.get(key, ring.algebra.zero()) + coeff
    while True:
        mixed = sorted(
            [k for k in work if k[0] > 0 and k[1] > 0], reverse=not leftmost
        )
        if not mixed:
            break
        i, j = mixed[0]
        coeff = work.pop((i, j))
        key = (i - 1, j - 1)
        add = coeff * ring.algebra.s
        work[key] = work.get(key, ring.algebra.zero()) + add
    return ring._normal_form_unchecked(work)


def series_mul(x, y):
    return x * y


def series_invert(x):
    return x.inverse()


def hom_apply(hom, value, target_ring=None):
    """Push an element or node series through an algebra map.

    For a node series the map is applied coefficientwise and the result is
    re-normalized in the target node ring (same exposed order by default).
    """
    if isinstance(value, AlgebraElement):
        return hom.apply(value)
    ring = value.ring
    if target_ring is None:
        target_ring = NodeRing(hom.target, ring.order)
    elif target_ring.algebra != hom.target:
        raise ValueError("target ring does not sit over the hom target")
    K = target_ring.internal - 1
    return target_ring._series_internal(
        hom.apply(value.a0),
        [hom.apply(x) for x in value.a[:K]],
        [hom.apply(x) for x in value.b[:K]],
    )
