"""Contact orders, pure contact, and the universal pre-deformability ideal.

The local data is a pair of node-ring elements phi_w1, phi_w2 together with
the base image psi_t of the deformation parameter, constrained by
phi_w1 * phi_w2 = psi_t.  Purity of contact at order n means

    phi_w1 = beta z1^n,   phi_w2 = eps beta^{-1} z2^n

for a unit beta of the node ring and a unit eps of the base algebra.  Both
the decision procedure and the universal ideal run on exact linear algebra
over Q at the fixed truncation orders of the algebra and the ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (
    AlgebraElement,
    AlgebraHom,
    AlgebraIdeal,
    NodeRing,
    NodeSeries,
    hom_apply,
)
from .linalg import Subspace, solve_linear


class ContactError(ValueError):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


NODE = "node"
TRIVIAL = "trivial"


@dataclass(frozen=True)
class ContactData:
    """One node's worth of local data over a truncated base algebra."""

    ring: NodeRing
    psi_t: AlgebraElement
    phi_w1: NodeSeries
    phi_w2: NodeSeries
    mode: str = NODE

    def __post_init__(self):
        if self.mode not in (NODE, TRIVIAL):
            raise ContactError("mode", "unknown smoothing mode %r" % (self.mode,))
        if self.phi_w1.ring != self.ring or self.phi_w2.ring != self.ring:
            raise ContactError("mismatch", "series live in a different node ring")
        if self.psi_t.algebra != self.ring.algebra:
            raise ContactError("mismatch", "psi_t lives in a different algebra")
        prod = self.phi_w1 * self.phi_w2
        tails_zero = all(x.is_zero() for x in prod.a) and all(
            x.is_zero() for x in prod.b
        )
        if not (tails_zero and prod.a0 == self.psi_t):
            raise ContactError(
                "homomorphism",
                "phi_w1 * phi_w2 must equal psi_t as a base element",
            )

    @property
    def algebra(self):
        return self.ring.algebra

    def swapped(self):
        """Exchange the two branches and the two coordinates simultaneously."""

        def zswap(x):
            return NodeSeries(x.ring, x.a0, x.b, x.a)

        return ContactData(
            self.ring, self.psi_t, zswap(self.phi_w2), zswap(self.phi_w1), self.mode
        )

    def push(self, hom, target_ring=None):
        """Base change along an algebra map carrying s to s."""
        if not hom.maps_smoothing:
            raise ContactError(
                "mismatch", "base change must carry the smoothing parameter to itself"
            )
        if target_ring is None:
            target_ring = NodeRing(hom.target, self.ring.order)
        return ContactData(
            target_ring,
            hom.apply(self.psi_t),
            hom_apply(hom, self.phi_w1, target_ring),
            hom_apply(hom, self.phi_w2, target_ring),
            self.mode,
        )


@dataclass(frozen=True)
class ContactReport:
    left_order: int | None
    right_order: int | None
    pure: bool
    order: int | None = None
    beta: NodeSeries | None = None
    epsilon: AlgebraElement | None = None
    orientation: str | None = None
    certificate: str | None = None


def contact_orders(data):
    """Smallest branch exponents whose coefficient is a unit of the base.

    Returns (n1, n2) reading the z1 tail of phi_w1 and the z2 tail of
    phi_w2.  Raises with code ``degenerate_order`` when a tail is
    identically zero and ``order_truncation`` when no unit shows inside the
    exposed window.
    """
    out = []
    for series, pick in ((data.phi_w1, "z1"), (data.phi_w2, "z2")):
        tail = series.z1_tail() if pick == "z1" else series.z2_tail()
        order = None
        for i, coeff in enumerate(tail, start=1):
            if coeff.is_unit():
                order = i
                break
        if order is None:
            if all(c.is_zero() for c in tail):
                raise ContactError(
                    "degenerate_order", "the %s tail is identically zero" % pick
                )
            raise ContactError(
                "order_truncation",
                "no unit %s coefficient inside the exposed window" % pick,
            )
        out.append(order)
    return tuple(out)


def _series_vec(x):
    """Flat Q-vector of a node series (constant block, then both tails)."""
    out = list(x.a0.coeffs)
    for c in x.a:
        out.extend(c.coeffs)
    for c in x.b:
        out.extend(c.coeffs)
    return out


def is_nondegenerate(data):
    """Check (z1, z2)^m inside (phi_w1, phi_w2) inside (z1, z2) for some m.

    Returns (flag, m or None); all membership tests are exact spans.
    """
    alg = data.algebra
    ring = data.ring
    s_span = Subspace(
        [(alg.s * alg.basis_element(j)).coeffs for j in range(alg.dim)], alg.dim
    )
    for phi in (data.phi_w1, data.phi_w2):
        if not s_span.contains(phi.a0.coeffs):
            return False, None
    dim = alg.dim * (2 * (ring.internal - 1) + 1)
    K = ring.internal - 1
    vectors = []
    for phi in (data.phi_w1, data.phi_w2):
        scaled = [phi * alg.basis_element(j) for j in range(alg.dim)]
        for base in scaled:
            vectors.append(_series_vec(base))
            up = base
            down = base
            for _ in range(K):
                up = up.shift(1)
                down = down.shift(2)
                vectors.append(_series_vec(up))
                vectors.append(_series_vec(down))
    ideal_span = Subspace(vectors, dim)
    for m in range(1, ring.order + 1):
        good = True
        for i in range(m + 1):
            j = m - i
            lo = min(i, j)
            coeff = alg.s**lo
            k = abs(i - j)
            gen = (
                ring.const(coeff)
                if k == 0
                else ring.branch_power(1 if i > j else 2, k, coeff)
            )
            if not ideal_span.contains(_series_vec(gen)):
                good = False
                break
        if good:
            return True, m
    return False, None


def _zswap(series):
    """The coordinate exchange z1 <-> z2 (a ring automorphism over the base)."""
    return NodeSeries(series.ring, series.a0, series.b, series.a)


class _Row:
    """One coefficient equation: sum coeffs[x] * x = rhs, read modulo
    s^modulus when the slot sits in the reduced top window (modulus None
    means an exact equation)."""

    __slots__ = ("coeffs", "rhs", "label", "modulus")

    def __init__(self, coeffs, rhs, label, modulus=None):
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
        self.rhs = rhs
        self.label = label
        self.modulus = modulus


def _slot_modulus(ring, slot):
    """Power of s annihilating a tail slot, or None when the slot is exact."""
    e = ring.internal - slot
    return e if e < ring.algebra.order else None


def _linear_rows(phi1, phi2, n):
    """The coefficient equations of phi1 = beta z1^n and beta phi2 = eps
    z2^n, A-linear in the unknowns.

    Unknowns: 0 is the constant of beta, 1..K its z1 tail, K+1..2K its z2
    tail, 2K+1 is eps.  Returns (rows, K).
    """
    ring = phi1.ring
    alg = ring.algebra
    K = ring.internal - 1
    s_pow = [alg.one()]
    for _ in range(alg.order):
        s_pow.append(s_pow[-1] * alg.s)

    def spow(j):
        return s_pow[j] if j < len(s_pow) else alg.zero()

    rows = []
    # first identity: slot matching of beta * z1^n against phi1;
    # constant slot: x_b[n] s^n contributes, rhs is phi1's constant
    row = {K + n: spow(n)} if n <= K else {}
    rows.append(_Row(row, phi1.a0, "first branch constant slot"))
    for slot in range(1, K + 1):
        coeffs = {}
        if slot == n:
            coeffs[0] = alg.one()
        if slot > n:
            coeffs[slot - n] = alg.one()
        if slot < n:
            j = n - slot
            if K + j <= 2 * K:
                coeffs[K + j] = spow(j)
        rows.append(
            _Row(
                coeffs,
                phi1.z1_coeff(slot),
                "first branch z1^%d slot" % slot,
                _slot_modulus(ring, slot),
            )
        )
    for slot in range(1, K + 1):
        coeffs = {}
        j = slot + n
        if j <= K:
            coeffs[K + j] = spow(n)
        rows.append(
            _Row(
                coeffs,
                phi1.z2_coeff(slot),
                "first branch z2^%d slot" % slot,
                _slot_modulus(ring, slot),
            )
        )
    # second identity: beta * phi2 = eps z2^n; precompute shifted products
    z1_shift = [phi2]
    z2_shift = [phi2]
    one = alg.one()
    for i in range(1, K + 1):
        z1_shift.append(z1_shift[-1].shift(1))
        z2_shift.append(z2_shift[-1].shift(2))

    def beta_coeff(unknown, getter, slot):
        if unknown == 0:
            return getter(phi2, slot)
        if unknown <= K:
            return getter(z1_shift[unknown], slot)
        return getter(z2_shift[unknown - K], slot)

    g_const = lambda s, _: s.a0
    g_z1 = lambda s, m: s.z1_coeff(m)
    g_z2 = lambda s, m: s.z2_coeff(m)

    coeffs = {
        u: beta_coeff(u, g_const, 0) for u in range(2 * K + 1)
    }
    rows.append(_Row(coeffs, alg.zero(), "second branch constant slot"))
    for slot in range(1, K + 1):
        coeffs = {u: beta_coeff(u, g_z1, slot) for u in range(2 * K + 1)}
        rows.append(
            _Row(
                coeffs,
                alg.zero(),
                "second branch z1^%d slot" % slot,
                _slot_modulus(ring, slot),
            )
        )
    for slot in range(1, K + 1):
        coeffs = {u: beta_coeff(u, g_z2, slot) for u in range(2 * K + 1)}
        if slot == n:
            coeffs[2 * K + 1] = -one
        rows.append(
            _Row(
                coeffs,
                alg.zero(),
                "second branch z2^%d slot" % slot,
                _slot_modulus(ring, slot),
            )
        )
    return rows, K


def _unit_pivot_eliminate(rows):
    """Gaussian elimination over the base algebra dividing only by units,
    on the exact rows.

    Returns (assignments, clean, hard, fuzzy): assignments maps solved
    unknowns to (rhs_element, dependency dict); clean rows have no unknowns
    left, hard rows keep a non-unit unknown coefficient, fuzzy rows are the
    reduced-window equations after substitution.
    """
    exact = [r for r in rows if r.modulus is None]
    deferred = [r for r in rows if r.modulus is not None]
    assignments = {}
    progress = True
    while progress:
        progress = False
        for row in exact:
            pivot = None
            for u in sorted(row.coeffs):
                if row.coeffs[u].is_unit():
                    pivot = u
                    break
            if pivot is None:
                continue
            inv = row.coeffs[pivot].inverse()
            dep = {
                u: -(inv * c) for u, c in row.coeffs.items() if u != pivot
            }
            val = inv * row.rhs
            assignments[pivot] = (val, dep)
            exact.remove(row)
            # substitute into every other row
            for other in exact + deferred:
                c = other.coeffs.pop(pivot, None)
                if c is None or c.is_zero():
                    continue
                other.rhs = other.rhs - c * val
                for u, d in dep.items():
                    merged = other.coeffs.get(u)
                    add = c * d
                    total = add if merged is None else merged + add
                    if total.is_zero():
                        other.coeffs.pop(u, None)
                    else:
                        other.coeffs[u] = total
            progress = True
            break
    clean = []
    hard = []
    for row in exact:
        if row.coeffs:
            hard.append(row)
        elif not row.rhs.is_zero():
            clean.append(row)
    fuzzy = [r for r in deferred]
    return assignments, clean, hard, fuzzy


def _resolve_assignments(assignments, total):
    """Back-substitute to concrete values; unknowns never pivoted become 0."""
    values = {}

    def value_of(u, stack=()):
        if u in values:
            return values[u]
        if u not in assignments:
            return None
        if u in stack:
            raise ArithmeticError("cyclic elimination")
        rhs, dep = assignments[u]
        out = rhs
        for v, c in dep.items():
            vv = value_of(v, stack + (u,))
            if vv is not None:
                out = out + c * vv
        values[u] = out
        return out

    for u in range(total):
        value_of(u)
    return values


def _dense_pure_solve(phi1, phi2, n):
    """Exact Q-linear decision of phi1 = beta z1^n and beta phi2 = eps z2^n
    over the whole quotient ring; complete but slower than the pivot path."""
    ring = phi1.ring
    alg = ring.algebra
    K = ring.internal - 1
    one = alg.one()
    basis_series = [ring.const(alg.basis_element(j)) for j in range(alg.dim)]
    zn_a = ring.branch_power(1, n, one)
    zn_b = ring.branch_power(2, n, one)

    def shifted_family(base):
        fam = list(base)
        for branch in (1, 2):
            level = list(base)
            for _ in range(K):
                level = [x.shift(branch) for x in level]
                fam.extend(level)
        return fam

    fam_a = shifted_family([zn_a * alg.basis_element(j) for j in range(alg.dim)])
    fam_2 = shifted_family([phi2 * alg.basis_element(j) for j in range(alg.dim)])
    for branch in (1, 2):
        for k in range(1, K + 1):
            for j in range(alg.dim):
                basis_series.append(
                    ring.branch_power(branch, k, alg.basis_element(j))
                )
    vec_len = alg.dim * (2 * K + 1)
    columns = [
        _series_vec(ua) + _series_vec(u2) for ua, u2 in zip(fam_a, fam_2)
    ]
    zero_block = [Fraction(0)] * vec_len
    for j in range(alg.dim):
        second = _series_vec(zn_b * alg.basis_element(j))
        columns.append(zero_block + [-c for c in second])
    rhs = _series_vec(phi1) + [Fraction(0)] * vec_len
    rows = [[col[i] for col in columns] for i in range(2 * vec_len)]
    solution, info = solve_linear(rows, rhs)
    if solution is None:
        return None, None, "unsolvable coefficient equation (reduced row %d)" % info
    nb = len(basis_series)
    beta = ring.zero()
    for coeff, u in zip(solution[:nb], basis_series):
        if coeff:
            beta = beta + u * coeff
    eps = alg.element(solution[nb:])
    if not beta.is_unit():
        return None, None, "solved unit has vanishing constant term"
    if not eps.is_unit():
        return None, None, "solved base unit has vanishing constant term"
    return beta, eps, None


def _pure_witness(data, n, swap):
    """Witness (beta, eps) for pure n-contact in one orientation, or a
    certificate string.

    The unit-pivot elimination decides almost every case; equations from the
    reduced top window that keep unknowns after substitution fall back to
    the dense exact solve, so the decision is always exact.
    """
    phi1 = _zswap(data.phi_w1) if swap else data.phi_w1
    phi2 = _zswap(data.phi_w2) if swap else data.phi_w2
    ring = data.ring
    alg = ring.algebra
    if n < 1 or n >= ring.internal:
        raise ContactError("order_overflow", "contact order outside the window")
    if not phi1.z1_coeff(n).is_unit():
        return None, None, "leading first-branch coefficient is not a unit"
    rows, K = _linear_rows(phi1, phi2, n)
    assignments, clean, hard, fuzzy = _unit_pivot_eliminate(rows)
    if clean:
        row = clean[0]
        return (
            None,
            None,
            "unsolvable coefficient equation at the %s: %s"
            % (row.label, row.rhs.render()),
        )
    need_dense = bool(hard)
    if not need_dense:
        for row in fuzzy:
            if row.coeffs:
                if not row.rhs.is_zero():
                    need_dense = True
                    break
            else:
                ann = alg.s ** row.modulus
                span = Subspace(
                    [
                        (ann * alg.basis_element(j)).coeffs
                        for j in range(alg.dim)
                    ],
                    alg.dim,
                )
                if not span.contains(row.rhs.coeffs):
                    return (
                        None,
                        None,
                        "unsolvable coefficient equation at the %s: %s"
                        % (row.label, row.rhs.render()),
                    )
    if need_dense:
        beta, eps, cert = _dense_pure_solve(phi1, phi2, n)
    else:
        values = _resolve_assignments(assignments, 2 * K + 2)
        beta_const = values.get(0) or alg.zero()
        beta_a = [values.get(1 + i) or alg.zero() for i in range(K)]
        beta_b = [values.get(K + 1 + i) or alg.zero() for i in range(K)]
        eps = values.get(2 * K + 1) or alg.zero()
        beta = ring._series_internal(beta_const, beta_a, beta_b)
        cert = None
        if not beta.is_unit():
            cert = "solved unit has vanishing constant term"
        elif not eps.is_unit():
            cert = "solved base unit has vanishing constant term"
        elif (
            beta * ring.branch_power(1, n, alg.one()) != phi1
            or beta * phi2 != ring.branch_power(2, n, eps)
        ):
            # top-window interference: let the dense solve arbitrate
            beta, eps, cert = _dense_pure_solve(phi1, phi2, n)
        if cert is not None:
            beta = eps = None
    if beta is None:
        return None, None, cert
    if swap:
        beta = _zswap(beta)
    return beta, eps, None


def check_pure_contact(data, n, allow_swap=True):
    """Decide pure n-contact, producing witnesses or a certificate.

    The reported beta satisfies phi_w1 = beta z^n on the branch named by the
    orientation, and phi_w2 = eps beta^{-1} on the other branch; both
    identities re-verify exactly by multiplication.
    """
    try:
        n1, n2 = contact_orders(data)
    except ContactError:
        n1 = n2 = None
    beta, eps, cert = _pure_witness(data, n, swap=False)
    orientation = "straight"
    if beta is None and allow_swap:
        beta, eps, cert2 = _pure_witness(data, n, swap=True)
        orientation = "swapped"
    if beta is None:
        return ContactReport(n1, n2, False, n, certificate=cert)
    ring = data.ring
    one = ring.algebra.one()
    zn_a = ring.branch_power(2 if orientation == "swapped" else 1, n, one)
    zn_b = ring.branch_power(1 if orientation == "swapped" else 2, n, one)
    if beta * zn_a != data.phi_w1 or (beta.inverse() * zn_b) * eps != data.phi_w2:
        raise ArithmeticError("pure-contact witnesses failed re-verification")
    return ContactReport(n1, n2, True, n, beta, eps, orientation)


def predeformability_ideal(data, n):
    """The universal base ideal for pure n-contact, by elimination.

    Requires the z1^n coefficient of phi_w1 and the z2^n coefficient of
    phi_w2 to be units.  The coefficient equations of the two purity
    identities are reduced by Gaussian elimination dividing only by units
    of the base (so every step stays valid after arbitrary base change);
    the equations left with no unknowns generate the ideal.  Equations that
    keep a non-unit unknown coefficient, together with the equations of the
    reduced top window, carry no base-change-stable content at this
    truncation and are dropped; the universality check is the ground truth,
    not any closed-form generator guess.
    """
    ring = data.ring
    alg = ring.algebra
    if n < 1 or n >= ring.internal:
        raise ContactError("order_overflow", "contact order outside the window")
    lead1 = data.phi_w1.z1_coeff(n)
    lead2 = data.phi_w2.z2_coeff(n)
    if not (lead1.is_unit() and lead2.is_unit()):
        raise ContactError(
            "nonunit_leading",
            "both branch coefficients at the requested order must be units",
        )
    rows, _ = _linear_rows(data.phi_w1, data.phi_w2, n)
    _, clean, _, _ = _unit_pivot_eliminate(rows)
    return AlgebraIdeal(alg, [row.rhs for row in clean])


def verify_universality(data, n, homs):
    """Pure contact after base change iff the ideal dies; all homs checked."""
    ideal = predeformability_ideal(data, n)
    results = []
    for hom in homs:
        pushed = data.push(hom)
        report = check_pure_contact(pushed, n, allow_swap=False)
        killed = all(hom.apply(g).is_zero() for g in ideal.generators)
        results.append((hom, report.pure, killed))
    return all(p == k for _, p, k in results), results


def verify_base_change(data, n, hom):
    """Compare the pushed-forward ideal with the directly recomputed one."""
    ideal = predeformability_ideal(data, n)
    pushed_ideal = ideal.push(hom)
    direct = predeformability_ideal(data.push(hom), n)
    return direct.span == pushed_ideal.span


def combined_predeformability_ideal(node_data):
    """Sum of per-node ideals on a shared base; node_data is (data, n) pairs."""
    if not node_data:
        raise ContactError("mismatch", "need at least one node")
    algebra = node_data[0][0].algebra
    total = None
    for data, n in node_data:
        if data.algebra != algebra:
            raise ContactError("mismatch", "nodes must share the base algebra")
        ideal = predeformability_ideal(data, n)
        total = ideal if total is None else total + ideal
    return total


@dataclass(frozen=True)
class ForcingReport:
    order: int
    beta1: NodeSeries
    beta2: NodeSeries
    epsilon: AlgebraElement
    orientation: str


def flat_local_forcing(data):
    """Pure form forced by flatness for local bases.

    Verifies the no-torsion precondition, equates the two contact orders,
    produces beta1, beta2, eps with phi_wi = zi^n beta_i, beta1 beta2 = eps
    and psi_t = s^n eps, all exactly.  The trivial smoothing mode is
    rejected: no flat local family exists there.
    """
    alg = data.algebra
    if not alg.local:
        raise ContactError("flatness", "base algebra must be local")
    if data.mode == TRIVIAL:
        raise ContactError(
            "flatness",
            "trivial smoothing mode admits no flat local pure form",
        )
    if data.psi_t.is_zero():
        raise ContactError("flatness", "psi_t = 0 has torsion everywhere")
    # kernel of multiplication by psi_t, with truncation-induced torsion
    # discounted: torsion below the truncation order is a real obstruction
    rows = []
    for i in range(alg.dim):
        col = []
        for j in range(alg.dim):
            col.append((data.psi_t * alg.basis_element(j)).coeffs[i])
        rows.append(col)
    _, kernel = solve_linear(rows, [Fraction(0)] * alg.dim)
    v_psi = alg.valuation(data.psi_t)
    for vec in kernel:
        elem = alg.element(vec)
        if alg.valuation(elem) + v_psi < alg.order:
            raise ContactError(
                "flatness",
                "torsion below the truncation order: %s" % elem.render(),
            )
    n1, n2 = contact_orders(data)
    if n1 != n2:
        raise ContactError(
            "flatness", "branch orders disagree (%d vs %d)" % (n1, n2)
        )
    report = check_pure_contact(data, n1, allow_swap=True)
    if not report.pure:
        raise ContactError(
            "flatness",
            "no pure form at the forced order; precondition fails at this "
            "truncation (%s)" % report.certificate,
        )
    beta1 = report.beta
    beta2 = report.beta.inverse() * report.epsilon
    prod = beta1 * beta2
    if not (
        prod.a0 == report.epsilon
        and all(x.is_zero() for x in prod.a)
        and all(x.is_zero() for x in prod.b)
    ):
        raise ArithmeticError("witness product failed to collapse")
    if data.psi_t != alg.s**n1 * report.epsilon:
        raise ContactError(
            "flatness", "psi_t does not match s^n times the forced unit"
        )
    return ForcingReport(n1, beta1, beta2, report.epsilon, report.orientation)


def enumerate_homs(source, target, coeffs=(0, 1, -1), max_terms=2, limit=64):
    """All algebra maps source -> target with s going to s and the other
    generator images drawn from small combinations of basis monomials.

    The enumeration is deterministic and capped at ``limit`` maps.
    """
    from itertools import combinations, product

    nil_basis = [
        target.monomial_element(m) for m in target.basis if sum(m) > 0
    ]
    candidates = [target.zero()]
    seen = {target.zero().coeffs}
    for size in range(1, max_terms + 1):
        for combo in combinations(range(len(nil_basis)), size):
            for cs in product([c for c in coeffs if c], repeat=size):
                elem = target.zero()
                for idx, c in zip(combo, cs):
                    elem = elem + nil_basis[idx] * Fraction(c)
                if elem.coeffs not in seen:
                    seen.add(elem.coeffs)
                    candidates.append(elem)
    out = []
    free = len(source.gens) - 1
    for images in product(candidates, repeat=free):
        try:
            hom = AlgebraHom(source, target, (target.s,) + images)
        except ValueError:
            continue
        out.append(hom)
        if len(out) >= limit:
            break
    return out
