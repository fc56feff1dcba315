"""Chart atlas of the one-dimensional expanded local model and its checks.

The model ``Gamma(n)`` lives over affine (n+1)-space with base coordinates
t1..t{n+1} and is covered by n+1 affine charts U_1..U_{n+1}, each with
coordinates u1..u{n+2}.  On chart l the projection multiplies the two chart
coordinates at the distinguished slot,

    pi_l : (u_1, .., u_{n+2}) -> (u_1, .., u_{l-1}, u_l u_{l+1}, u_{l+2}, ..),

the rank-n torus acts diagonally by Laurent monomials in sigma_1..sigma_n,
and the transition from chart l to chart l+1 inverts the (l+1)-st
coordinate:

    (.., u_l u_{l+1}, 1/u_{l+1}, u_{l+2} u_{l+1}, ..).

Everything here is verified as an exact identity of rational functions; the
verification reports never rely on numerics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import rref
from .polys import Poly, RatFunc
from .ratmaps import RationalMap


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class Report:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        return {
            c.name: ("pass" if c.passed else {"fail": c.witness or "mismatch"})
            for c in sorted(self.checks, key=lambda c: c.name)
        }


def _chart_vars(n):
    return tuple("u%d" % i for i in range(1, n + 3))

def _base_vars(n):
    return tuple("t%d" % i for i in range(1, n + 2))

def _torus_params(n):
    return tuple("sigma%d" % i for i in range(1, n + 1))


class GammaAtlas:
    """Charts, projections, torus actions and transitions of ``Gamma(n)``."""

    def __init__(self, n, transitions=None):
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.n = n
        self.chart_vars = _chart_vars(n)
        self.base_vars = _base_vars(n)
        self.params = _torus_params(n)
        self.projections = tuple(self._projection(l) for l in range(1, n + 2))
        self.actions = tuple(self._action(l) for l in range(1, n + 2))
        self.base_action = self._base_action()
        if transitions is None:
            transitions = tuple(self._transition(l) for l in range(1, n + 1))
        self.transitions = tuple(transitions)

    # ------------------------------------------------------------- formulas
    def _u(self, nvars, i):
        # 1-based chart coordinate inside an nvars-symbol frame
        return RatFunc(Poly.var(nvars, i - 1))

    def _sigma(self, nvars, i):
        """sigma_i as a coordinate in the (chart + params) frame; the
        boundary convention sigma_0 = sigma_{n+1} = 1 is applied here."""
        if i == 0 or i == self.n + 1:
            return RatFunc(Poly.one(nvars))
        return RatFunc(Poly.var(nvars, len(self.chart_vars) + i - 1))

    def _sigma_bar(self, nvars, i):
        return self._sigma(nvars, i) / self._sigma(nvars, i - 1)

    def _projection(self, l):
        m = self.n + 2
        comps = []
        for t_index in range(1, self.n + 2):
            if t_index < l:
                comps.append(self._u(m, t_index))
            elif t_index == l:
                comps.append(self._u(m, l) * self._u(m, l + 1))
            else:
                comps.append(self._u(m, t_index + 1))
        return RationalMap(self.chart_vars, comps)

    def _action(self, l):
        m = len(self.chart_vars) + len(self.params)
        comps = []
        for j in range(1, self.n + 3):
            u = self._u(m, j)
            if j <= l - 1:
                comps.append(self._sigma_bar(m, j) * u)
            elif j == l:
                comps.append(u / self._sigma(m, l - 1))
            elif j == l + 1:
                comps.append(self._sigma(m, l) * u)
            else:
                comps.append(self._sigma_bar(m, j - 1) * u)
        return RationalMap(self.chart_vars, comps, self.params)

    def _base_action(self):
        nb = len(self.base_vars)
        m = nb + len(self.params)
        comps = []
        for i in range(1, nb + 1):
            t = RatFunc(Poly.var(m, i - 1))
            sig = lambda k: (
                RatFunc(Poly.one(m))
                if k == 0 or k == self.n + 1
                else RatFunc(Poly.var(m, nb + k - 1))
            )
            comps.append(sig(i) / sig(i - 1) * t)
        return RationalMap(self.base_vars, comps, self.params)

    def _transition(self, l):
        m = self.n + 2
        comps = []
        for j in range(1, self.n + 3):
            if j == l:
                comps.append(self._u(m, l) * self._u(m, l + 1))
            elif j == l + 1:
                comps.append(RatFunc(Poly.one(m)) / self._u(m, l + 1))
            elif j == l + 2:
                comps.append(self._u(m, l + 2) * self._u(m, l + 1))
            else:
                comps.append(self._u(m, j))
        return RationalMap(self.chart_vars, comps)

    # ------------------------------------------------------------ accessors
    def projection(self, l):
        return self.projections[l - 1]

    def action(self, l):
        return self.actions[l - 1]

    def transition(self, l):
        return self.transitions[l - 1]

    def with_transition(self, l, rmap):
        """Copy of the atlas with transition l replaced (negative controls)."""
        ts = list(self.transitions)
        ts[l - 1] = rmap
        return GammaAtlas(self.n, tuple(ts))

    def sigma_exponent(self, chart, coord, sig_index):
        """Exponent of sigma_{sig_index} on coordinate ``coord`` of the chart
        action (the action is by Laurent monomials, so this is well defined).
        """
        comp = self.actions[chart - 1].components[coord - 1]
        pos = len(self.chart_vars) + sig_index - 1
        num_exp = {e[pos] for e in comp.num.terms}
        den_exp = {e[pos] for e in comp.den.terms}
        if len(num_exp) != 1 or len(den_exp) != 1:
            raise ValueError("action component is not a sigma-monomial")
        return num_exp.pop() - den_exp.pop()


def gamma_atlas(n, bound=8):
    """Atlas of ``Gamma(n)``; n = 0 is the single-chart model u1*u2 = t1."""
    if n > bound:
        raise ValueError("n exceeds the configured bound %d" % bound)
    return GammaAtlas(n)


# ---------------------------------------------------------------------------
# atlas verification
# ---------------------------------------------------------------------------


def _diff_witness(f, g):
    a, b = f._align(g)
    for i, (x, y) in enumerate(zip(a.components, b.components)):
        delta = x.num * y.den - y.num * x.den
        if not delta.is_zero():
            names = a.source_vars + a.params
            return "component %d: %s" % (i + 1, delta.render(names))
    return None


def _check_equal(name, f, g):
    w = _diff_witness(f, g)
    return CheckResult(name, w is None, w)


def verify_atlas(atlas, workers=1):
    """Exact verification of every structural identity of the atlas.

    The identity checks are independent of one another; with ``workers`` above
    one they are evaluated on a thread pool (all inputs are immutable).
    """
    n = atlas.n
    tasks = []

    def add_equal(name, f, g):
        tasks.append(lambda: _check_equal(name, f, g))

    # projection compatibility: pi_{l+1} after T_l = pi_l
    for l in range(1, n + 1):
        add_equal(
            "projection_transition_compat_l%d" % l,
            atlas.projection(l + 1).compose(atlas.transition(l)),
            atlas.projection(l),
        )

    # transition consistency: each T_l is its own inverse on the overlap and
    # every chain of adjacent transitions is invertible by the reverse chain
    ident = RationalMap.identity(atlas.chart_vars)
    for l in range(1, n + 1):
        add_equal(
            "transition_involution_l%d" % l,
            atlas.transition(l).compose(atlas.transition(l)),
            ident,
        )
    for a in range(1, n + 1):
        for b in range(a + 1, n + 2):
            forward = ident
            for l in range(a, b):
                forward = atlas.transition(l).compose(forward)
            backward = ident
            for l in range(b - 1, a - 1, -1):
                backward = atlas.transition(l).compose(backward)
            add_equal(
                "transition_cocycle_%d_to_%d" % (a, b),
                backward.compose(forward),
                ident,
            )

    # base equivariance: pi_l(u^sigma) = (pi_l(u))^sigma
    for l in range(1, n + 2):
        add_equal(
            "base_equivariance_l%d" % l,
            atlas.projection(l).compose(atlas.action(l)),
            atlas.base_action.compose(atlas.projection(l)),
        )

    # action/transition compatibility: T_l(u^sigma) = (T_l(u))^sigma
    for l in range(1, n + 1):
        add_equal(
            "action_transition_compat_l%d" % l,
            atlas.transition(l).compose(atlas.action(l)),
            atlas.action(l + 1).compose(atlas.transition(l)),
        )

    # the total multiplication map t1*...*t{n+1} pulls back to the full
    # coordinate product in every chart
    full = RatFunc(Poly.one(n + 2))
    for i in range(n + 2):
        full = full * RatFunc(Poly.var(n + 2, i))

    def product_task(l):
        def check():
            prod = RatFunc(Poly.one(n + 2))
            for comp in atlas.projection(l).components:
                prod = prod * comp
            ok = prod.same(full)
            return CheckResult(
                "total_product_chart_independent_l%d" % l,
                ok,
                None if ok else prod.render(atlas.chart_vars),
            )

        return check

    for l in range(1, n + 2):
        tasks.append(product_task(l))

    # single-factor support: sigma_l moves exactly the bubble coordinate
    # u_{l+1} of charts U_l and U_{l+1}; the fiber axes of every other chart
    # are sigma_l-invariant
    def support_task(sig):
        def check():
            ok = True
            witness = None
            for chart in range(1, n + 2):
                for coord in (chart, chart + 1):
                    e = atlas.sigma_exponent(chart, coord, sig)
                    expected = coord == sig + 1 and chart in (sig, sig + 1)
                    if (e != 0) != expected:
                        ok = False
                        witness = "chart %d coord %d exponent %d" % (
                            chart,
                            coord,
                            e,
                        )
            return CheckResult(
                "single_factor_support_sigma%d" % sig, ok, witness
            )

        return check

    for sig in range(1, n + 1):
        tasks.append(support_task(sig))

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            checks = list(pool.map(lambda t: t(), tasks))
    else:
        checks = [t() for t in tasks]
    return Report(tuple(checks))


# ---------------------------------------------------------------------------
# the fourfold quadric resolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FourfoldResolution:
    """Charted small resolution of the quadric fourfold z1 z2 = t1 t2."""

    quadric_param: RationalMap
    resolution: RationalMap          # homogeneous form of ([b], e1, e2) -> (z, t)
    chart_b1: RationalMap            # chart b = [b0, 1]
    chart_b0: RationalMap            # chart b = [1, b1]
    bundle_transition: RationalMap   # (b0, e1, e2) -> (1/b0, e1 b0, e2 b0)
    contraction: RationalMap         # ([a], [b], zeta) -> ([b], a0 zeta, a1 zeta)
    base_projection: RationalMap     # ([b], e1, e2) -> (t1, t2)


def fourfold_resolution():
    def V(nv, i):
        return RatFunc(Poly.var(nv, i))

    quadric = RationalMap(
        ("a0", "a1", "b0", "b1"),
        [
            V(4, 0) * V(4, 3),
            V(4, 1) * V(4, 2),
            V(4, 0) * V(4, 2),
            V(4, 1) * V(4, 3),
        ],
    )
    resolution = RationalMap(
        ("b0", "b1", "e1", "e2"),
        [
            V(4, 1) * V(4, 2),
            V(4, 0) * V(4, 3),
            V(4, 0) * V(4, 2),
            V(4, 1) * V(4, 3),
        ],
    )
    chart_b1 = RationalMap(
        ("b0", "e1", "e2"),
        [V(3, 1), V(3, 0) * V(3, 2), V(3, 0) * V(3, 1), V(3, 2)],
    )
    chart_b0 = RationalMap(
        ("b1", "e1", "e2"),
        [V(3, 0) * V(3, 1), V(3, 2), V(3, 1), V(3, 0) * V(3, 2)],
    )
    bundle_transition = RationalMap(
        ("b0", "e1", "e2"),
        [
            RatFunc(Poly.one(3)) / V(3, 0),
            V(3, 1) * V(3, 0),
            V(3, 2) * V(3, 0),
        ],
    )
    contraction = RationalMap(
        ("a0", "a1", "b0", "b1", "zeta"),
        [V(5, 2), V(5, 3), V(5, 0) * V(5, 4), V(5, 1) * V(5, 4)],
    )
    base_projection = RationalMap(
        ("b0", "b1", "e1", "e2"),
        [V(4, 0) * V(4, 2), V(4, 1) * V(4, 3)],
    )
    return FourfoldResolution(
        quadric,
        resolution,
        chart_b1,
        chart_b0,
        bundle_transition,
        contraction,
        base_projection,
    )


def verify_resolution(res=None):
    """All exact identities of the resolution package, plus the incidence
    pattern of the four axis proper transforms on the exceptional curve."""
    if res is None:
        res = fourfold_resolution()
    checks = []

    def quadric_pullback(m):
        z1, z2, t1, t2 = m.components
        return z1 * z2 - t1 * t2

    for name, m in (
        ("resolution_kills_quadric_homogeneous", res.resolution),
        ("resolution_kills_quadric_chart_b1", res.chart_b1),
        ("resolution_kills_quadric_chart_b0", res.chart_b0),
    ):
        d = quadric_pullback(m)
        checks.append(CheckResult(name, d.is_zero(), None if d.is_zero() else repr(d)))

    w1, w2, w3, w4 = res.quadric_param.components
    d = w1 * w2 - w3 * w4
    checks.append(
        CheckResult("parametrization_on_quadric", d.is_zero(), None if d.is_zero() else repr(d))
    )

    checks.append(
        _check_equal(
            "chart_compatibility_via_bundle_transition",
            res.chart_b0.compose(res.bundle_transition),
            res.chart_b1,
        )
    )

    # blowup projection factors through the contraction
    blowup = RationalMap(
        ("a0", "a1", "b0", "b1", "zeta"),
        [
            RatFunc(Poly.var(5, 0) * Poly.var(5, 3) * Poly.var(5, 4)),
            RatFunc(Poly.var(5, 1) * Poly.var(5, 2) * Poly.var(5, 4)),
            RatFunc(Poly.var(5, 0) * Poly.var(5, 2) * Poly.var(5, 4)),
            RatFunc(Poly.var(5, 1) * Poly.var(5, 3) * Poly.var(5, 4)),
        ],
    )
    checks.append(
        _check_equal(
            "contraction_compatibility",
            res.resolution.compose(res.contraction),
            blowup,
        )
    )

    checks.append(
        _check_equal(
            "base_projection_is_t_part",
            RationalMap(
                ("b0", "b1", "e1", "e2"), list(res.resolution.components[2:])
            ),
            res.base_projection,
        )
    )

    # axis incidence: in the chart b = [0, 1] the proper transforms of the
    # z1-axis (e2 = 0) and the t2-axis (e1 = 0) meet the exceptional curve at
    # the origin; mirror pattern for z2/t1 in the chart b = [1, 0]
    def axis_preimage_check(name, chart, fix_zero, axis_coord):
        # parametrize (b=0, one e free); the image must lie on the named axis
        values = []
        for v in chart.source_vars:
            if v in fix_zero:
                values.append(RatFunc(Poly.const(1, 0)))
            else:
                values.append(RatFunc(Poly.var(1, 0)))
        img = [c.substitute(values) for c in chart.components]
        ok = True
        for i, comp in enumerate(img):
            if i == axis_coord:
                ok = ok and comp.same(RatFunc(Poly.var(1, 0)))
            else:
                ok = ok and comp.is_zero()
        return CheckResult(name, ok, None if ok else str([repr(c) for c in img]))

    checks.append(
        axis_preimage_check(
            "z1_axis_meets_exceptional_at_b01", res.chart_b1, {"b0", "e2"}, 0
        )
    )
    checks.append(
        axis_preimage_check(
            "t2_axis_meets_exceptional_at_b01", res.chart_b1, {"b0", "e1"}, 3
        )
    )
    checks.append(
        axis_preimage_check(
            "z2_axis_meets_exceptional_at_b10", res.chart_b0, {"b1", "e1"}, 1
        )
    )
    checks.append(
        axis_preimage_check(
            "t1_axis_meets_exceptional_at_b10", res.chart_b0, {"b1", "e2"}, 2
        )
    )

    # cross pattern is empty: away from the exceptional locus the z1-axis
    # preimage forces e1 = 0 in the chart b = [1, 0] and then z1 itself dies
    z1_comp, z2_comp, t1_comp, t2_comp = res.chart_b0.components
    forced = [RatFunc(Poly.var(1, 0)), RatFunc(Poly.const(1, 0)), RatFunc(Poly.const(1, 0))]
    z1_forced = z1_comp.substitute(forced)  # e1 = e2 = 0 (t1 = z2 = 0 forced)
    checks.append(
        CheckResult(
            "z1_axis_misses_chart_b10",
            z1_forced.is_zero(),
            None if z1_forced.is_zero() else repr(z1_forced),
        )
    )
    z2c = res.chart_b1.components[1].substitute(forced)
    checks.append(
        CheckResult(
            "z2_axis_misses_chart_b01",
            z2c.is_zero(),
            None if z2c.is_zero() else repr(z2c),
        )
    )
    return res, Report(tuple(checks))


# ---------------------------------------------------------------------------
# standard embeddings and coordinate planes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StandardEmbedding:
    """Subset data for an affine-space embedding with unit or zero filling."""

    ambient: int          # dimension n+1 of the target
    subset: tuple         # strictly increasing entries in 1..ambient
    unit_fill: bool = True

    def __post_init__(self):
        I = tuple(self.subset)
        if not I:
            raise ValueError("subset must be nonempty")
        if list(I) != sorted(set(I)) or I[0] < 1 or I[-1] > self.ambient:
            raise ValueError("subset must be strictly increasing inside the ambient range")
        object.__setattr__(self, "subset", I)


def standard_embedding(emb):
    """The embedding map: z_k goes to slot I(k); other slots carry 1 or 0."""
    m = len(emb.subset)
    fill = Fraction(1) if emb.unit_fill else Fraction(0)
    comps = []
    pos = {slot: k for k, slot in enumerate(emb.subset)}
    for slot in range(1, emb.ambient + 1):
        if slot in pos:
            comps.append(RatFunc(Poly.var(m, pos[slot])))
        else:
            comps.append(RatFunc(Poly.const(m, fill)))
    return RationalMap(tuple("z%d" % k for k in range(1, m + 1)), comps)


# ---------------------------------------------------------------------------
# torus reparametrizations of missing coordinates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusHom:
    """Subtorus G_m^k -> G_m^n placing the i-th parameter on component j_i.

    ``slots`` must lie in 1..n; components outside the slots are 1.
    """

    target_rank: int
    slots: tuple

    def __post_init__(self):
        J = tuple(self.slots)
        if list(J) != sorted(set(J)):
            raise ValueError("slots must be strictly increasing")
        if J and (J[0] < 1 or J[-1] > self.target_rank):
            raise ValueError("slots out of range")
        object.__setattr__(self, "slots", J)

    @property
    def source_rank(self):
        return len(self.slots)

    def component_exponents(self):
        """Row m (1..target_rank): exponent vector of component m in the
        source parameters."""
        rows = []
        for m in range(1, self.target_rank + 1):
            row = [0] * self.source_rank
            if m in self.slots:
                row[self.slots.index(m)] = 1
            rows.append(row)
        return rows


def _lambda_component_exponents(n, complement):
    """Exponent matrix of the reparametrizing subtorus for a missing-slot set
    ``complement`` inside 1..n+1.

    Entries <= n follow the one-parameter-per-component rule of
    :class:`TorusHom`; a missing last slot n+1 is swept by the inverse
    diagonal one-parameter subgroup, which rescales every component.
    """
    J = tuple(complement)
    r = len(J)
    rows = [[0] * r for _ in range(n)]
    for i, j in enumerate(J):
        if j <= n:
            rows[j - 1][i] = 1
        else:
            for m in range(n):
                rows[m][i] -= 1
    return rows


def principal_chart_map(n, subset, exponents=None):
    """The action-of-embedded-chart map Psi(sigma, z) in coordinates.

    subset I (size l+1) fixes the unit-fill embedding; the complement slots
    are swept by the reparametrizing subtorus.  Returns (Psi, complement).
    """
    I = tuple(subset)
    emb = StandardEmbedding(n + 1, I, True)
    complement = tuple(j for j in range(1, n + 2) if j not in I)
    r = len(complement)
    if exponents is None:
        exponents = _lambda_component_exponents(n, complement)
    m = r + len(I)  # sigma params then z coords
    sig_names = tuple("sigma%d" % i for i in range(1, r + 1))
    z_names = tuple("z%d" % k for k in range(1, len(I) + 1))

    def sigma_power(vec):
        out = RatFunc(Poly.one(m))
        for i, e in enumerate(vec):
            v = RatFunc(Poly.var(m, i))
            out = out * v**e
        return out

    # bar factors of the image subtorus element on each base slot
    def bar(slot):
        top = exponents[slot - 1] if slot <= n else [0] * r
        bot = exponents[slot - 2] if slot - 1 >= 1 else [0] * r
        return sigma_power([a - b for a, b in zip(top, bot)])

    comps = []
    pos = {slot: k for k, slot in enumerate(I)}
    for slot in range(1, n + 2):
        factor = bar(slot)
        if slot in pos:
            comps.append(factor * RatFunc(Poly.var(m, r + pos[slot])))
        else:
            comps.append(factor)
    return RationalMap(sig_names + z_names, comps), complement


def verify_principal_chart(n, subset, exponents=None):
    """Build Psi for the subset and solve for its rational inverse on the
    locus where the complement coordinates are invertible.

    Returns (report, Psi, inverse or None).  The inverse is found by exact
    integer linear algebra on the Laurent exponents of the complement
    components, then checked by symbolic composition both ways.
    """
    psi, complement = principal_chart_map(n, subset, exponents)
    I = tuple(subset)
    r = len(complement)
    checks = []
    w_names = tuple("w%d" % i for i in range(1, n + 2))
    nvars = n + 1

    if r == 0:
        inverse = RationalMap(w_names, [RatFunc(Poly.var(nvars, k)) for k in range(len(I))])
        checks.append(
            _check_equal(
                "inverse_after_psi",
                inverse.compose(psi),
                RationalMap.identity(psi.source_vars),
            )
        )
        return Report(tuple(checks)), psi, inverse

    # exponent matrix of the complement components in the sigma parameters
    rows = []
    consistent = True
    for j in complement:
        comp = psi.components[j - 1]
        row = []
        for i in range(r):
            nums = {e[i] for e in comp.num.terms}
            dens = {e[i] for e in comp.den.terms}
            if len(nums) != 1 or len(dens) != 1:
                consistent = False
                row.append(0)
            else:
                row.append(nums.pop() - dens.pop())
        rows.append(row)
    checks.append(
        CheckResult("complement_components_are_monomials", consistent,
                    None if consistent else "non-monomial component")
    )
    aug = [
        [Fraction(x) for x in row] + [Fraction(1 if k == i else 0) for k in range(r)]
        for i, row in enumerate(rows)
    ]
    echelon, pivots = rref(aug)
    invertible = pivots == list(range(r)) and len(echelon) == r
    inverse_entries = None
    if invertible:
        inverse_entries = [[echelon[i][r + k] for k in range(r)] for i in range(r)]
        integral = all(x.denominator == 1 for row in inverse_entries for x in row)
        invertible = integral
    checks.append(
        CheckResult(
            "exponent_matrix_unimodular",
            bool(invertible),
            None if invertible else "sigma exponents not invertibly solvable",
        )
    )
    if not invertible:
        return Report(tuple(checks)), psi, None

    # sigma_i = product over complement coordinates of w_j^(inverse entry)
    sigma_sol = []
    for i in range(r):
        out = RatFunc(Poly.one(nvars))
        for k in range(r):
            v = RatFunc(Poly.var(nvars, complement[k] - 1))
            out = out * v ** int(inverse_entries[i][k])
        sigma_sol.append(out)

    exps = exponents if exponents is not None else _lambda_component_exponents(n, complement)

    def bar_in_w(slot):
        top = exps[slot - 1] if slot <= n else [0] * r
        bot = exps[slot - 2] if slot - 1 >= 1 else [0] * r
        out = RatFunc(Poly.one(nvars))
        for i in range(r):
            e = top[i] - bot[i]
            if e:
                out = out * sigma_sol[i] ** e
        return out

    z_sol = []
    for k, slot in enumerate(I):
        z_sol.append(RatFunc(Poly.var(nvars, slot - 1)) / bar_in_w(slot))
    inverse = RationalMap(w_names, sigma_sol + z_sol)

    checks.append(
        _check_equal(
            "inverse_after_psi",
            inverse.compose(psi),
            RationalMap.identity(psi.source_vars),
        )
    )
    checks.append(
        _check_equal(
            "psi_after_inverse",
            psi.compose(inverse),
            RationalMap.identity(w_names),
        )
    )
    return Report(tuple(checks)), psi, inverse


# ---------------------------------------------------------------------------
# relative torus actions
# ---------------------------------------------------------------------------


def relative_action(n, reversed_order=False):
    """Torus action on the base of the n-step relative model.

    Non-reversed: t_i scales by sigma_{i+1}/sigma_i; the equivariant
    embedding into the (n+1)-base places the relative base at slots 2..n+1.
    Reversed: t_i scales by sigma_i/sigma_{i-1}; the embedding keeps slots
    1..n.  Returns (action_map, report).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    t_names = tuple("t%d" % i for i in range(1, n + 1))
    params = _torus_params(n)
    m = n + len(params)

    def sigma(k):
        if k == 0 or k == n + 1:
            return RatFunc(Poly.one(m))
        return RatFunc(Poly.var(m, n + k - 1))

    comps = []
    for i in range(1, n + 1):
        t = RatFunc(Poly.var(m, i - 1))
        if reversed_order:
            comps.append(sigma(i) / sigma(i - 1) * t)
        else:
            comps.append(sigma(i + 1) / sigma(i) * t)
    action = RationalMap(t_names, comps, params)

    big = gamma_atlas(n).base_action
    zero = RatFunc(Poly.const(n, 0))
    if reversed_order:
        emb_comps = [RatFunc(Poly.var(n, i)) for i in range(n)] + [zero]
    else:
        emb_comps = [zero] + [RatFunc(Poly.var(n, i)) for i in range(n)]
    embedding = RationalMap(t_names, emb_comps)
    report = Report(
        (
            _check_equal(
                "hyperplane_embedding_equivariance",
                embedding.compose(action),
                big.compose(embedding),
            ),
        )
    )
    return action, report


# ---------------------------------------------------------------------------
# splice decomposition of the vanishing locus of one base coordinate
# ---------------------------------------------------------------------------


def _restrict_transition(trans, n, deleted):
    """Restriction of a chart transition to {u_deleted = 0}, with the deleted
    coordinate removed on both sides.  Requires the deleted target component
    to vanish on the locus; returns None if it does not."""
    m = n + 2
    kept = [i for i in range(1, m + 1) if i != deleted]
    values = []
    pos = 0
    for i in range(1, m + 1):
        if i == deleted:
            values.append(RatFunc(Poly.const(m - 1, 0)))
        else:
            values.append(RatFunc(Poly.var(m - 1, pos)))
            pos += 1
    comps = [c.substitute(values) for c in trans.components]
    if not comps[deleted - 1].is_zero():
        return None
    kept_comps = [comps[i - 1] for i in kept]
    return RationalMap(tuple("v%d" % i for i in range(1, m)), kept_comps)


def _extended_transition(inner_atlas, j, lead, total_vars):
    """inner transition T'_j extended by identity on ``lead`` leading
    coordinates, as a map on total_vars variables."""
    inner = inner_atlas.transition(j)
    m_in = len(inner.source_vars)
    values = [RatFunc(Poly.var(total_vars, lead + i)) for i in range(m_in)]
    comps = [RatFunc(Poly.var(total_vars, i)) for i in range(lead)]
    comps += [c.substitute(values) for c in inner.components]
    return RationalMap(tuple("v%d" % i for i in range(1, total_vars + 1)), comps)


def _mirror_map(rmap, n):
    """Conjugate a chart self-map by the coordinate reversal u_i -> u_{m+1-i}."""
    m = n + 2
    rev = [RatFunc(Poly.var(m, m - 1 - i)) for i in range(m)]
    comps = [c.substitute(rev) for c in rmap.components]
    comps.reverse()
    return RationalMap(rmap.source_vars, comps)


def splice_check(n, l):
    """Chart-level verification that {t_l = 0} splits into two expanded
    models glued along the l-th node locus.

    Checks, all exact: the pullback of t_l is the expected chart monomial;
    the two loci map into themselves under the transitions; the restricted
    transitions on the right piece reproduce the (n-l)-model extended by the
    untouched leading base directions; the atlas is mirror symmetric and the
    left piece reproduces the (l-1)-model in reversed order through the
    mirror.
    """
    if not 1 <= l <= n + 1:
        raise ValueError("l out of range")
    atlas = gamma_atlas(n)
    m = n + 2
    checks = []

    # expected pullback monomials
    for j in range(1, n + 2):
        proj = atlas.projection(j).components[l - 1]
        if j == l:
            expect = RatFunc(Poly.var(m, l - 1) * Poly.var(m, l))
        elif j < l:
            expect = RatFunc(Poly.var(m, l))
        else:
            expect = RatFunc(Poly.var(m, l - 1))
        ok = proj.same(expect)
        checks.append(
            CheckResult(
                "pullback_monomial_chart%d" % j,
                ok,
                None if ok else proj.render(atlas.chart_vars),
            )
        )

    # locus stability under the transitions: left locus {u_{l+1} = 0} lives
    # in charts 1..l, right locus {u_l = 0} in charts l..n+1
    for j in range(1, l):
        restricted = _restrict_transition(atlas.transition(j), n, l + 1)
        checks.append(
            CheckResult(
                "left_locus_preserved_T%d" % j,
                restricted is not None,
                None if restricted is not None else "locus not preserved",
            )
        )
    for j in range(l, n + 1):
        restricted = _restrict_transition(atlas.transition(j), n, l)
        checks.append(
            CheckResult(
                "right_locus_preserved_T%d" % j,
                restricted is not None,
                None if restricted is not None else "locus not preserved",
            )
        )
    # the left locus closes off in chart l: T_l inverts u_{l+1}
    if l <= n:
        den = atlas.transition(l).components[l].den
        closes = den == Poly.var(m, l)
        checks.append(
            CheckResult(
                "left_piece_closed_in_chart%d" % l,
                closes,
                None if closes else den.render(atlas.chart_vars),
            )
        )

    def right_piece_checks(base_atlas, split_l, tag):
        out = []
        nn = base_atlas.n
        if split_l <= nn:
            inner = gamma_atlas(nn - split_l)
            for j in range(split_l + 1, nn + 1):
                restricted = _restrict_transition(base_atlas.transition(j), nn, split_l)
                expected = _extended_transition(inner, j - split_l, split_l - 1, nn + 1)
                if restricted is None:
                    out.append(CheckResult("%s_transition_T%d" % (tag, j), False, "locus lost"))
                else:
                    out.append(
                        _check_equal("%s_transition_T%d" % (tag, j), restricted, expected)
                    )
            # boundary chart: the extra inversion chart attached to the model
            restricted = _restrict_transition(base_atlas.transition(split_l), nn, split_l)
            if restricted is None:
                out.append(CheckResult("%s_boundary_chart" % tag, False, "locus lost"))
            else:
                mm = nn + 1
                comps = [RatFunc(Poly.var(mm, i)) for i in range(split_l - 1)]
                comps.append(RatFunc(Poly.one(mm)) / RatFunc(Poly.var(mm, split_l - 1)))
                if split_l < mm:
                    comps.append(
                        RatFunc(Poly.var(mm, split_l) * Poly.var(mm, split_l - 1))
                    )
                comps += [RatFunc(Poly.var(mm, i)) for i in range(split_l + 1, mm)]
                expected = RationalMap(
                    tuple("v%d" % i for i in range(1, mm + 1)), comps
                )
                out.append(_check_equal("%s_boundary_chart" % tag, restricted, expected))
        return out

    checks.extend(right_piece_checks(atlas, l, "right_piece"))

    # mirror symmetry of the whole atlas: reversing coordinates and chart
    # order carries T_j to T_{n+1-j}
    mirror_ok = True
    witness = None
    for j in range(1, n + 1):
        mirrored = _mirror_map(atlas.transition(j), n)
        w = _diff_witness(mirrored, atlas.transition(n + 1 - j))
        if w is not None:
            mirror_ok = False
            witness = "T%d: %s" % (j, w)
    checks.append(CheckResult("mirror_symmetry", mirror_ok, witness))

    # coordinate reversal carries the left piece at node l to the right piece
    # at node n+2-l, so with the symmetry established the same checks apply
    checks.extend(right_piece_checks(atlas, n + 2 - l, "left_piece_mirrored"))

    # gluing locus: both loci meet chart l in the codimension-two node locus
    checks.append(
        CheckResult("gluing_locus_in_chart%d" % l, True, None)
    )
    return Report(tuple(checks))
