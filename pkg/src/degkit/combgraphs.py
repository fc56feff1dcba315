"""Split maps into expanded targets, admissible graphs, gluing and degrees.

A :class:`SplitMap` is the combinatorial shadow of a map into a chain of
n+2 components: per component group a list of connected pieces carrying
(genus, degree, marked points), and per interface an ordered list of node
instances (weight, left piece, right piece).  The matching of contact
multisets across each interface is structural in this encoding, which is
exactly the pre-deformability constraint.

An :class:`AdmissibleGraph` carries the topological type of one relative
half: vertices weighted by genus and by a class vector in a declared free
abelian group with two integral functionals (degree against the
polarization and intersection with the distinguished divisor), ordered legs
and ordered weighted roots.  Triples glue, reorder, and carry a finite
symmetry group computed by brute force.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class SplitMapError(ValueError):
    pass


class GraphError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TopType:
    """Total degree, arithmetic genus, and number of marked points."""

    degree: int
    genus: int
    marks: int

    def norm(self):
        return self.degree + 2 * self.genus - 2 + self.marks


def max_length_bound(t):
    """Upper bound for the expansion length of any stable split map of this
    type: the norm itself."""
    n = t.norm()
    if n < 1:
        raise SplitMapError("norm must be positive, got %d" % n)
    return n


@dataclass(frozen=True, order=True)
class Piece:
    """Connected domain piece: genus, polarization degree, marked points."""

    genus: int
    degree: int
    marks: int

    def __post_init__(self):
        if self.genus < 0 or self.degree < 0 or self.marks < 0:
            raise SplitMapError("piece data must be nonnegative")


class SplitMap:
    """groups: n+2 tuples of pieces; nodes[i]: interface i+1 instances
    (weight, left piece index in group i, right piece index in group i+1)."""

    def __init__(self, groups, nodes):
        groups = tuple(tuple(g) for g in groups)
        nodes = tuple(tuple(tuple(x) for x in iface) for iface in nodes)
        if len(groups) < 2 or len(nodes) != len(groups) - 1:
            raise SplitMapError("need n+2 groups and n+1 interfaces")
        self.groups = groups
        self.nodes = nodes
        self.n = len(groups) - 2
        total = 0
        for g in groups:
            for p in g:
                if not isinstance(p, Piece):
                    raise SplitMapError("groups must contain pieces")
            total += len(g)
        if total == 0:
            raise SplitMapError("the map must have at least one piece")
        for i, iface in enumerate(nodes):
            for mu, a, b in iface:
                if mu < 1:
                    raise SplitMapError("node weights are positive")
                if not (0 <= a < len(groups[i]) and 0 <= b < len(groups[i + 1])):
                    raise SplitMapError("node attachment out of range")
        if not self._connected():
            raise SplitMapError("the piece/node incidence graph is disconnected")
        self._canonical = None

    # ------------------------------------------------------------ structure
    def _piece_ids(self):
        return [(i, p) for i, g in enumerate(self.groups) for p in range(len(g))]

    def _connected(self):
        ids = self._piece_ids()
        if not ids:
            return False
        index = {pid: k for k, pid in enumerate(ids)}
        parent = list(range(len(ids)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for i, iface in enumerate(self.nodes):
            for _, a, b in iface:
                union(index[(i, a)], index[(i + 1, b)])
        roots = {find(k) for k in range(len(ids))}
        return len(roots) == 1

    def left_contacts(self, i, p):
        """Weights of interface i-1 nodes on piece p of group i (1-based i)."""
        if i == 1:
            return ()
        return tuple(
            sorted(mu for mu, _, b in self.nodes[i - 2] if b == p)
        )

    def right_contacts(self, i, p):
        if i == self.n + 2:
            return ()
        return tuple(sorted(mu for mu, a, _ in self.nodes[i - 1] if a == p))

    def interface_weights(self, i):
        """Sorted weight multiset of interface i (1-based, 1..n+1)."""
        return tuple(sorted(mu for mu, _, _ in self.nodes[i - 1]))

    def piece_contact_count(self, i, p):
        return len(self.left_contacts(i, p)) + len(self.right_contacts(i, p))

    def total_type(self):
        degree = sum(p.degree for g in self.groups for p in g)
        marks = sum(p.marks for g in self.groups for p in g)
        pieces = sum(len(g) for g in self.groups)
        node_count = sum(len(iface) for iface in self.nodes)
        genus = sum(p.genus for g in self.groups for p in g) + node_count - pieces + 1
        return TopType(degree, genus, marks)

    # -------------------------------------------------------------- weights
    def weight(self, i):
        """Group weight: sum over pieces of degree + 2 genus - 2 + marks +
        attached nodes; the empty group weighs zero."""
        if not 1 <= i <= self.n + 2:
            raise SplitMapError("group index out of range")
        out = 0
        for p, piece in enumerate(self.groups[i - 1]):
            out += (
                piece.degree
                + 2 * piece.genus
                - 2
                + piece.marks
                + self.piece_contact_count(i, p)
            )
        return out

    def weights(self):
        return tuple(self.weight(i) for i in range(1, self.n + 3))

    def is_trivial_piece(self, i, p):
        piece = self.groups[i - 1][p]
        left = self.left_contacts(i, p)
        right = self.right_contacts(i, p)
        return (
            piece.degree == 0
            and piece.genus == 0
            and piece.marks == 0
            and len(left) == 1
            and len(right) == 1
            and left == right
        )

    def is_stable(self):
        """Positive weight on every middle group, and no end piece breaking
        the three-special-point rule for contracted pieces."""
        for i in range(2, self.n + 2):
            if self.weight(i) <= 0:
                return False
        for i in (1, self.n + 2):
            for p, piece in enumerate(self.groups[i - 1]):
                if piece.degree == 0:
                    special = piece.marks + self.piece_contact_count(i, p)
                    if piece.genus == 0 and special < 3:
                        return False
                    if piece.genus == 1 and special < 1:
                        return False
        return True

    def stability_oracle(self):
        """Independent route: a map is unstable exactly when some middle
        group carries nothing but trivial pieces (the empty group counts)."""
        for i in range(2, self.n + 2):
            group = self.groups[i - 1]
            if all(self.is_trivial_piece(i, p) for p in range(len(group))):
                return False
        return True

    def verify_norm_identity(self):
        return self.total_type().norm() == sum(self.weights())

    def ample_weights(self):
        if not self.is_stable():
            raise SplitMapError("ample weights require a stable map")
        w = self.weights()
        sums = []
        acc = 0
        for i in range(self.n + 1):
            acc += w[i]
            sums.append(acc)
        for a, b in zip(sums, sums[1:]):
            if not a < b:
                raise SplitMapError("ample weight sequence failed to increase")
        return tuple(sums)

    # -------------------------------------------------- canonical form, aut
    def canonical_key(self):
        """Deterministic encoding, minimized over relabelings of identical
        pieces inside each group."""
        if self._canonical is not None:
            return self._canonical
        best = None
        for perms in self._data_preserving_relabelings():
            enc = self._encode(perms)
            if best is None or enc < best:
                best = enc
        self._canonical = best
        return best

    def _encode(self, perms):
        group_enc = []
        for i, g in enumerate(self.groups):
            inv = perms[i]
            arranged = [None] * len(g)
            for old, new in enumerate(inv):
                arranged[new] = g[old]
            group_enc.append(tuple((p.genus, p.degree, p.marks) for p in arranged))
        node_enc = []
        for i, iface in enumerate(self.nodes):
            node_enc.append(
                tuple(sorted((mu, perms[i][a], perms[i + 1][b]) for mu, a, b in iface))
            )
        return (tuple(group_enc), tuple(node_enc))

    def _data_preserving_relabelings(self, limit=20000):
        """All tuples of per-group relabelings that keep the sorted piece
        order and permute only identical pieces."""
        per_group = []
        for g in self.groups:
            order = sorted(range(len(g)), key=lambda p: g[p])
            blocks = []
            start = 0
            while start < len(order):
                stop = start
                while stop < len(order) and g[order[stop]] == g[order[start]]:
                    stop += 1
                blocks.append(order[start:stop])
                start = stop
            options = []
            for assignment in itertools.product(
                *[itertools.permutations(range(len(b))) for b in blocks]
            ):
                relabel = [None] * len(g)
                pos = 0
                for block, perm in zip(blocks, assignment):
                    base = pos
                    for slot, member in enumerate(perm):
                        relabel[block[member]] = base + slot
                    pos += len(block)
                options.append(tuple(relabel))
            per_group.append(options)
        count = 1
        for opts in per_group:
            count *= len(opts)
            if count > limit:
                raise SplitMapError("too many relabelings to canonicalize")
        return itertools.product(*per_group)

    def _equal_data_permutations(self, limit=20000):
        """Per-group permutations moving pieces only inside equal-data
        classes, identity included."""
        per_group = []
        for g in self.groups:
            classes = {}
            for p, piece in enumerate(g):
                classes.setdefault(
                    (piece.genus, piece.degree, piece.marks), []
                ).append(p)
            pools = []
            for members in classes.values():
                pools.append(
                    [
                        dict(zip(members, perm))
                        for perm in itertools.permutations(members)
                    ]
                )
            options = []
            for combo in itertools.product(*pools):
                mapping = {}
                for d in combo:
                    mapping.update(d)
                options.append(tuple(mapping[p] for p in range(len(g))))
            per_group.append(options)
        count = 1
        for opts in per_group:
            count *= len(opts)
            if count > limit:
                raise SplitMapError("too many relabelings to search")
        return itertools.product(*per_group)

    def automorphisms(self):
        """Per-group permutations of identical pieces preserving every
        interface as a multiset of weighted attachments."""
        out = []
        for perms in self._equal_data_permutations():
            ok = True
            for i, iface in enumerate(self.nodes):
                orig = sorted((mu, a, b) for mu, a, b in iface)
                mapped = sorted(
                    (mu, perms[i][a], perms[i + 1][b]) for mu, a, b in iface
                )
                if orig != mapped:
                    ok = False
                    break
            if ok:
                out.append(perms)
        return out

    def automorphism_interface_image(self, l):
        """Subgroup of permutations of the interface-l node instances induced
        by automorphisms (instances with equal data are interchangeable)."""
        iface = self.nodes[l - 1]
        r = len(iface)
        perms_set = set()
        for auto in self.automorphisms():
            mapped = [
                (mu, auto[l - 1][a], auto[l][b]) for mu, a, b in iface
            ]
            # all bijections i -> j with iface[j] == mapped[i]
            slots = {}
            for j, data in enumerate(iface):
                slots.setdefault(data, []).append(j)
            choices = []
            feasible = True
            for i in range(r):
                targets = slots.get(mapped[i])
                if not targets:
                    feasible = False
                    break
                choices.append(targets)
            if not feasible:
                continue
            for assign in itertools.product(*choices):
                if len(set(assign)) == r:
                    perms_set.add(tuple(assign))
        return sorted(perms_set)

    def __eq__(self, other):
        return (
            isinstance(other, SplitMap)
            and self.groups == other.groups
            and self.nodes == other.nodes
        )

    def __hash__(self):
        return hash((self.groups, self.nodes))

    def __repr__(self):
        return "SplitMap(n=%d, groups=%s, nodes=%s)" % (
            self.n,
            [[(p.genus, p.degree, p.marks) for p in g] for g in self.groups],
            [list(iface) for iface in self.nodes],
        )

    def to_json(self):
        return {
            "groups": [
                [{"g": p.genus, "d": p.degree, "marks": p.marks} for p in g]
                for g in self.groups
            ],
            "nodes": [
                [{"weight": mu, "left": a, "right": b} for mu, a, b in iface]
                for iface in self.nodes
            ],
        }


def split_map_from_json(data):
    groups = [
        [Piece(p["g"], p["d"], p["marks"]) for p in g] for g in data["groups"]
    ]
    nodes = [
        [(x["weight"], x["left"], x["right"]) for x in iface]
        for iface in data["nodes"]
    ]
    return SplitMap(groups, nodes)


def weight(split_map, i):
    return split_map.weight(i)


def is_stable(split_map):
    return split_map.is_stable()


def verify_norm_identity(split_map):
    return split_map.verify_norm_identity()


def ample_weights(split_map):
    return split_map.ample_weights()


# ---------------------------------------------------------------------------
# decomposition into relative halves and re-gluing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelSplit:
    """Relative half of a split map.

    Groups are ordered with the boundary group first (the distinguished end
    carrying the roots), so the first side comes out of a decomposition with
    its groups reversed.  Roots are ordered node instances (weight, piece
    index in the boundary group).
    """

    groups: tuple
    nodes: tuple   # internal interfaces, aligned with the stored group order
    roots: tuple   # (weight, piece index in groups[0])

    def root_weights(self):
        return tuple(mu for mu, _ in self.roots)


def decompose(split_map, l):
    """Split at interface l into the two relative halves and the interface
    weight multiset; the first half is reversed so its boundary group leads.
    """
    if not 1 <= l <= split_map.n + 1:
        raise SplitMapError("interface index out of range")
    iface = split_map.nodes[l - 1]
    left_groups = split_map.groups[:l]
    right_groups = split_map.groups[l:]
    left_nodes = split_map.nodes[: l - 1]
    right_nodes = split_map.nodes[l:]
    # reverse the first side; its internal interfaces swap orientation
    rev_groups = tuple(reversed(left_groups))
    rev_nodes = tuple(
        tuple((mu, b, a) for mu, a, b in iface2) for iface2 in reversed(left_nodes)
    )
    side1 = RelSplit(rev_groups, rev_nodes, tuple((mu, a) for mu, a, _ in iface))
    side2 = RelSplit(
        tuple(right_groups),
        tuple(right_nodes),
        tuple((mu, b) for mu, _, b in iface),
    )
    sigma = tuple(sorted(mu for mu, _, _ in iface))
    return side1, side2, sigma


def glue_halves(side1, side2):
    """Inverse of :func:`decompose`: re-glue two relative halves along their
    roots, matched by position."""
    if len(side1.roots) != len(side2.roots):
        raise SplitMapError("halves carry different numbers of roots")
    for (mu1, _), (mu2, _) in zip(side1.roots, side2.roots):
        if mu1 != mu2:
            raise SplitMapError("root weights do not match")
    left_groups = tuple(reversed(side1.groups))
    left_nodes = tuple(
        tuple((mu, b, a) for mu, a, b in iface) for iface in reversed(side1.nodes)
    )
    iface = tuple(
        (mu1, a, b) for (mu1, a), (_, b) in zip(side1.roots, side2.roots)
    )
    groups = left_groups + side2.groups
    nodes = left_nodes + (iface,) + side2.nodes
    return SplitMap(groups, nodes)


def specialization_sum_check(coarse, fine, assignment):
    """Weight sums along a degeneration pattern.

    ``assignment`` maps each fine group index (1-based) to a coarse group
    index, monotone and onto; the coarse weight of each group must equal the
    sum of the fine weights over its preimage.
    """
    assignment = tuple(assignment)
    if len(assignment) != fine.n + 2:
        raise SplitMapError("assignment must cover every fine group")
    if list(assignment) != sorted(assignment):
        raise SplitMapError("assignment must be monotone")
    if set(assignment) != set(range(1, coarse.n + 3)):
        raise SplitMapError("assignment must be onto the coarse groups")
    for j in range(1, coarse.n + 3):
        total = sum(
            fine.weight(i + 1) for i, tgt in enumerate(assignment) if tgt == j
        )
        if total != coarse.weight(j):
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration of split maps of a fixed topological type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationCaps:
    """Declared search caps; the enumeration is exhaustive within them.

    The default budget for the total number of nodes is norm + 1, which is
    exactly enough for the longest chains the stability bound allows; a
    weight cap of ``None`` means the total degree (at least one).
    """

    pieces_per_group: int = 2
    nodes_per_interface: int = 2
    max_weight: int | None = 2
    max_total_nodes: int | None = None

    def weight_cap(self, t):
        if self.max_weight is not None:
            return self.max_weight
        return max(t.degree, 1)

    def node_budget(self, t):
        if self.max_total_nodes is not None:
            return self.max_total_nodes
        return max(t.norm() + 1, 0)


def _end_piece_ok(piece, contacts, marks):
    if piece.degree == 0:
        special = marks + contacts
        if piece.genus == 0 and special < 3:
            return False
        if piece.genus == 1 and special < 1:
            return False
    return True


def enumerate_split_maps(t, caps=EnumerationCaps(), stable_only=False, max_norm=6):
    """All split maps of total type ``t`` up to piece relabeling, for every
    expansion length up to the norm bound.

    Generation conventions (documented choices, exhaustive within them):
    fiber pieces -- middle pieces of degree zero touch both neighboring
    interfaces with equal total weight; positive-degree middle pieces have
    positive weight (sufficiently ample polarization); end groups are
    nonempty for positive expansion length and end pieces obey the
    three-special-point rule.  Piece counts, interface sizes, node weights
    and the total node budget are bounded by the declared caps.
    """
    if t.norm() > max_norm:
        raise SplitMapError("norm above the configured bound %d" % max_norm)
    results = []
    seen = set()
    top_n = max(0, t.norm())
    for n in range(0, top_n + 1):
        for sm in _enumerate_for_n(t, n, caps, stable_only):
            if stable_only and not sm.is_stable():
                continue
            key = (sm.n, sm.canonical_key())
            if key not in seen:
                seen.add(key)
                results.append(sm)
    return results


def enumerate_stable_types(t, caps=EnumerationCaps(), max_norm=6):
    return enumerate_split_maps(t, caps, stable_only=True, max_norm=max_norm)


def _enumerate_for_n(t, n, caps, stable_only=False):
    """Mark-free skeletons first, then marks distributed over piece orbits;
    the interface structure never depends on the marked points."""
    groups_count = n + 2
    wcap = caps.weight_cap(t)
    min_pieces = [1] * groups_count if n >= 1 else [0] * groups_count
    for counts in itertools.product(
        *[
            range(min_pieces[i], caps.pieces_per_group + 1)
            for i in range(groups_count)
        ]
    ):
        if sum(counts) == 0:
            continue
        for group_data in _group_data_options(t, counts, n, caps, stable_only):
            pieces = [tuple(Piece(g, d, 0) for g, d in gd) for gd in group_data]
            loops = t.genus - sum(p.genus for g in pieces for p in g)
            node_total = sum(counts) - 1 + loops
            if node_total < 0 or (n >= 1 and node_total < n + 1):
                continue
            if node_total > caps.node_budget(t):
                continue
            if n == 0 and node_total > 0 and (not pieces[0] or not pieces[1]):
                continue
            for skeleton in _assemble(
                n, pieces, node_total, caps, wcap, stable_only, t.marks
            ):
                yield from _distribute_marks(skeleton, t.marks)


def _mark_need(sm, i, p):
    """Least number of marked points the generation rules force on a piece."""
    piece = sm.groups[i - 1][p]
    contacts = sm.piece_contact_count(i, p)
    if i in (1, sm.n + 2):
        if piece.degree == 0:
            if piece.genus == 0:
                return max(0, 3 - contacts)
            if piece.genus == 1:
                return max(0, 1 - contacts)
        return 0
    if piece.degree > 0:
        w0 = piece.degree + 2 * piece.genus - 2 + contacts
        return max(0, 1 - w0)
    return 0


def _distribute_marks(skeleton, k):
    """All placements of k marked points on a mark-free skeleton, one
    representative per orbit of the skeleton's automorphisms."""
    ids = [(i, p) for i, g in enumerate(skeleton.groups) for p in range(len(g))]
    needs = [_mark_need(skeleton, i + 1, p) for i, p in ids]
    shortfall = k - sum(needs)
    if shortfall < 0:
        return
    index = {pid: j for j, pid in enumerate(ids)}
    parent = list(range(len(ids)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for auto in skeleton.automorphisms():
        for i, p in ids:
            j, jj = index[(i, p)], index[(i, auto[i][p])]
            rj, rjj = find(j), find(jj)
            if rj != rjj:
                parent[rj] = rjj
    orbit_members = {}
    for j in range(len(ids)):
        orbit_members.setdefault(find(j), []).append(j)
    orbits = sorted(orbit_members.values())

    def orbit_extras(size, budget):
        # non-increasing tuples of the given length summing to at most budget
        def rec(left, cap, total):
            if left == 0:
                yield ()
                return
            for v in range(min(cap, total), -1, -1):
                for rest in rec(left - 1, v, total - v):
                    yield (v,) + rest

        yield from rec(size, budget, budget)

    def assign(oidx, budget, extras):
        if oidx == len(orbits):
            if budget == 0:
                marks = list(needs)
                for members, vals in zip(orbits, extras):
                    for j, v in zip(members, vals):
                        marks[j] += v
                groups = []
                for i, g in enumerate(skeleton.groups):
                    groups.append(
                        tuple(
                            Piece(pc.genus, pc.degree, marks[index[(i, p)]])
                            for p, pc in enumerate(g)
                        )
                    )
                yield SplitMap(groups, skeleton.nodes)
            return
        for vals in orbit_extras(len(orbits[oidx]), budget):
            yield from assign(oidx + 1, budget - sum(vals), extras + [vals])

    yield from assign(0, shortfall, [])


_PIECE_CACHE = {}


def _piece_tuples(count, deg_budget, gen_budget):
    """Sorted tuples of (g, d) of the given length within budgets."""
    key = (count, deg_budget, gen_budget)
    got = _PIECE_CACHE.get(key)
    if got is None:
        options = [
            (g, d)
            for g in range(gen_budget + 1)
            for d in range(deg_budget + 1)
        ]
        got = tuple(
            combo
            for combo in itertools.combinations_with_replacement(options, count)
            if sum(c[1] for c in combo) <= deg_budget
            and sum(c[0] for c in combo) <= gen_budget
        )
        _PIECE_CACHE[key] = got
    return got


def _group_data_options(t, counts, n, caps, stable_only):
    """Distribute degree and genus over the groups' pieces (marks come
    later).

    In stable mode two necessary weight bounds prune early: a middle group's
    contact-and-mark-free weight cannot fall below 1 - 2 * node cap - marks,
    and the two end weights must leave room for every middle group to weigh
    at least one (marks only push the end weights up).
    """
    groups_count = len(counts)
    norm = t.norm()
    middle_floor = 1 - 2 * caps.nodes_per_interface - t.marks

    def base_of(combo):
        return sum(d + 2 * g - 2 for g, d in combo)

    def rec(i, deg_left, gen_left, end_base):
        if i == groups_count:
            if deg_left == 0:
                yield []
            return
        for combo in _piece_tuples(counts[i], deg_left, gen_left):
            if stable_only and n >= 1:
                base = base_of(combo)
                if 1 <= i <= groups_count - 2 and base < middle_floor:
                    continue
                if i == groups_count - 1 and end_base + base > norm - n - 2:
                    continue
            d = sum(c[1] for c in combo)
            g = sum(c[0] for c in combo)
            nxt = end_base + base_of(combo) if i == 0 else end_base
            for rest in rec(i + 1, deg_left - d, gen_left - g, nxt):
                yield [combo] + rest

    yield from rec(0, t.degree, t.genus, 0)


_PROFILE_CACHE = {}


def _profile_options(size, wcap, right_count, sum_exact=None):
    """Sorted tuples of (weight, right piece) of the given size; with
    ``sum_exact`` the weights must add up to it."""
    key = (size, wcap, right_count, sum_exact)
    got = _PROFILE_CACHE.get(key)
    if got is not None:
        return got
    out = []
    if size == 0:
        if sum_exact in (None, 0):
            out.append(())
    elif right_count > 0:
        slots = [(mu, b) for mu in range(1, wcap + 1) for b in range(right_count)]

        def rec(start, left, total):
            if left == 0:
                if sum_exact is None or total == sum_exact:
                    yield ()
                return
            for idx in range(start, len(slots)):
                mu, b = slots[idx]
                if sum_exact is not None and total + mu > sum_exact:
                    continue
                for rest in rec(idx, left - 1, total + mu):
                    yield ((mu, b),) + rest

        out.extend(rec(0, size, 0))
    got = tuple(out)
    _PROFILE_CACHE[key] = got
    return got


_INTERFACE_CACHE = {}


def _interface_options(left_spec, q, wcap, right_spec, needs_left):
    """All admissible interfaces with exactly q nodes, fully filtered.

    left_spec, per left piece, one of
      ("fiber", class_id, required_weight_sum)  -- middle degree-zero piece,
      ("mid", class_id, weight_allowance)       -- middle positive piece,
      ("free", class_id)                        -- end piece;
    right_spec, per right piece: (class_id, fiber_flag).

    Profiles are generated sorted inside each class of interchangeable left
    pieces and filtered so interchangeable right pieces receive sorted
    profiles; a middle positive piece must end with positive weight
    (``weight_allowance`` counts everything but its contacts here), and
    with ``needs_left`` every fiber piece on the right needs a contact.
    Returns a tuple of (interface tuple, refined right class labels).
    """
    key = (tuple(left_spec), q, wcap, tuple(right_spec), needs_left)
    got = _INTERFACE_CACHE.get(key)
    if got is not None:
        return got
    right_count = len(right_spec)
    by_class = {}
    for p, spec in enumerate(left_spec):
        by_class.setdefault(spec[1], []).append(p)
    piece_order = [p for c in sorted(by_class) for p in by_class[c]]
    results = []

    def gen(pos, budget, prev_profile, out):
        if pos == len(piece_order):
            if budget == 0:
                results.append(tuple(sorted(out)))
            return
        p = piece_order[pos]
        spec = left_spec[p]
        first_in_class = (
            pos == 0 or left_spec[piece_order[pos - 1]][1] != spec[1]
        )
        req = spec[2] if spec[0] == "fiber" else None
        min_size = 1 if spec[0] == "fiber" else 0
        if spec[0] == "mid":
            min_size = max(min_size, 1 - spec[2])
        for size in range(min_size, budget + 1):
            for prof in _profile_options(size, wcap, right_count, req):
                if not first_in_class and (len(prof), prof) > prev_profile:
                    continue
                gen(
                    pos + 1,
                    budget - size,
                    (len(prof), prof),
                    out + [(mu, p, b) for mu, b in prof],
                )

    gen(0, q, (10**9, ()), [])
    right_classes = [spec[0] for spec in right_spec]
    filtered = []
    for iface in results:
        if needs_left:
            right_counts = [0] * right_count
            for _, _, b in iface:
                right_counts[b] += 1
            if any(
                fiber and right_counts[p2] == 0
                for p2, (_, fiber) in enumerate(right_spec)
            ):
                continue
        if not _right_canonical_classes(iface, right_classes):
            continue
        profiles = tuple(
            tuple(sorted(mu for mu, _, b in iface if b == p2))
            for p2 in range(right_count)
        )
        filtered.append((iface, tuple(_refine_classes(right_classes, profiles))))
    got = tuple(filtered)
    _INTERFACE_CACHE[key] = got
    return got


def _right_canonical_classes(iface, right_classes):
    """Left profiles of interchangeable right pieces must appear sorted."""
    profiles = {}
    for mu, _, b in iface:
        profiles.setdefault(b, []).append(mu)
    keyed = [
        tuple(sorted(profiles.get(p, []))) for p in range(len(right_classes))
    ]
    by_class = {}
    for p, c in enumerate(right_classes):
        by_class.setdefault(c, []).append(p)
    for members in by_class.values():
        vals = [(len(keyed[p]), keyed[p]) for p in members]
        if vals != sorted(vals, reverse=True):
            return False
    return True


def _refine_classes(classes, profiles):
    mapping = {}
    out = []
    for c, prof in zip(classes, profiles):
        key = (c, prof)
        if key not in mapping:
            mapping[key] = len(mapping)
        out.append(mapping[key])
    return out


_COUNTVEC_CACHE = {}
_CLASS_CACHE = {}


def _data_classes(group):
    got = _CLASS_CACHE.get(group)
    if got is None:
        mapping = {}
        out = []
        for p in group:
            key = (p.genus, p.degree, p.marks)
            if key not in mapping:
                mapping[key] = len(mapping)
            out.append(mapping[key])
        got = tuple(out)
        _CLASS_CACHE[group] = got
    return got


def _count_vector_options(ifaces, node_total, cap, count_low, middle_bases):
    """Surviving interface node-count vectors; with ``middle_bases`` given,
    every middle group must end with positive weight."""
    key = (ifaces, node_total, cap, count_low, middle_bases)
    got = _COUNTVEC_CACHE.get(key)
    if got is not None:
        return got
    out = []

    def rec(i, left):
        if i == ifaces:
            if left == 0:
                yield ()
            return
        rest_min = sum(count_low[i + 1 :])
        for v in range(count_low[i], min(cap, left - rest_min) + 1):
            for tail in rec(i + 1, left - v):
                yield (v,) + tail

    for q in rec(0, node_total):
        if middle_bases is not None:
            ok = True
            for j, base in enumerate(middle_bases):
                if base + q[j] + q[j + 1] < 1:
                    ok = False
                    break
            if not ok:
                continue
        out.append(q)
    got = tuple(out)
    _COUNTVEC_CACHE[key] = got
    return got


def _assemble(n, pieces, node_total, caps, wcap, stable_only, mark_budget):
    """Interface enumeration on a mark-free skeleton: choose the node count
    of every interface first (group weights depend only on those counts, so
    the stability cut happens before any attachment is drawn), then fill in
    attachments left to right in per-class canonical order; the weight rule
    for positive middle pieces is relaxed by the pending mark budget."""
    ifaces = n + 1
    min_per_iface = 0 if n == 0 else 1
    min_fiber = [
        sum(1 for p in g if p.degree == 0) if 1 <= i <= n else 0
        for i, g in enumerate(pieces)
    ]
    # interface i (0-based) must cover the fiber pieces of group i+1 on the
    # left and of group i (1-based middle) on the right
    count_low = []
    for i in range(ifaces):
        low = min_per_iface
        low = max(low, min_fiber[i + 1] if i + 1 <= n else 0)
        if 1 <= i <= n:
            low = max(low, min_fiber[i])
        count_low.append(low)
    count_low = tuple(count_low)
    if sum(count_low) > node_total or node_total > ifaces * caps.nodes_per_interface:
        return
    middle_bases = None
    if stable_only:
        middle_bases = tuple(
            sum(p.degree + 2 * p.genus - 2 for p in pieces[i]) + mark_budget
            for i in range(1, n + 1)
        )
    q_options = _count_vector_options(
        ifaces, node_total, caps.nodes_per_interface, count_low, middle_bases
    )
    if not q_options:
        return
    group_classes = [_data_classes(g) for g in pieces]

    def rec(i, chosen, q, classes):
        if i > ifaces:
            try:
                yield SplitMap(pieces, chosen)
            except SplitMapError:
                pass
            return
        left_group = pieces[i - 1]
        right_group = pieces[i]
        prev = chosen[-1] if chosen else None
        left_spec = []
        for p, piece in enumerate(left_group):
            cid = classes[p]
            if i == 1:
                left_spec.append(("free", cid))
            elif piece.degree == 0:
                s = sum(mu for mu, _, b in prev if b == p)
                if s == 0:
                    return
                left_spec.append(("fiber", cid, s))
            else:
                lcount = sum(1 for _, _, b in prev if b == p)
                allowance = (
                    piece.degree + 2 * piece.genus - 2 + lcount + mark_budget
                )
                left_spec.append(("mid", cid, allowance))
        right_spec = tuple(
            (group_classes[i][p2], piece2.degree == 0)
            for p2, piece2 in enumerate(right_group)
        )
        for iface, refined in _interface_options(
            tuple(left_spec), q[i - 1], wcap, right_spec, i <= n
        ):
            yield from rec(i + 1, chosen + [iface], q, list(refined))

    seen = set()
    for q in q_options:
        for sm in rec(1, [], q, list(group_classes[0])):
            key = sm.canonical_key()
            if key not in seen:
                seen.add(key)
                yield sm


# ---------------------------------------------------------------------------
# admissible graphs, triples, gluing, and the symmetry degree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassGroup:
    """Free abelian group with the two integral functionals."""

    rank: int
    deg_h: tuple
    deg_d: tuple

    def __post_init__(self):
        if len(self.deg_h) != self.rank or len(self.deg_d) != self.rank:
            raise GraphError("functional length must match the rank")
        object.__setattr__(self, "deg_h", tuple(int(x) for x in self.deg_h))
        object.__setattr__(self, "deg_d", tuple(int(x) for x in self.deg_d))

    def pair_h(self, vec):
        return sum(a * b for a, b in zip(self.deg_h, vec))

    def pair_d(self, vec):
        return sum(a * b for a, b in zip(self.deg_d, vec))


NUMERIC_GROUP = ClassGroup(2, (1, 0), (0, 1))


@dataclass(frozen=True)
class AdmissibleGraph:
    """Edge-free weighted graph: ordered legs, ordered weighted roots."""

    group: ClassGroup
    genera: tuple
    classes: tuple
    legs: tuple    # leg j attached to vertex legs[j]
    roots: tuple   # root j is (vertex, weight)

    def __post_init__(self):
        nv = len(self.genera)
        if len(self.classes) != nv:
            raise GraphError("need one class vector per vertex")
        object.__setattr__(self, "genera", tuple(int(g) for g in self.genera))
        if any(g < 0 for g in self.genera):
            raise GraphError("genera must be nonnegative")
        object.__setattr__(
            self, "classes", tuple(tuple(int(x) for x in c) for c in self.classes)
        )
        for c in self.classes:
            if len(c) != self.group.rank:
                raise GraphError("class vector has wrong rank")
        object.__setattr__(self, "legs", tuple(int(v) for v in self.legs))
        object.__setattr__(
            self, "roots", tuple((int(v), int(w)) for v, w in self.roots)
        )
        for v in self.legs:
            if not 0 <= v < nv:
                raise GraphError("leg attached out of range")
        for v, w in self.roots:
            if not 0 <= v < nv:
                raise GraphError("root attached out of range")
            if w < 1:
                raise GraphError("root weights are positive")
        if nv == 0 and (self.legs or self.roots):
            raise GraphError("the empty graph carries no legs or roots")
        if nv > 1:
            rooted = {v for v, _ in self.roots}
            if rooted != set(range(nv)):
                raise GraphError(
                    "relative connectivity: every vertex needs a root"
                )

    @property
    def num_vertices(self):
        return len(self.genera)

    @property
    def num_roots(self):
        return len(self.roots)

    @property
    def num_legs(self):
        return len(self.legs)

    def root_weights(self):
        return tuple(w for _, w in self.roots)

    def deg_h(self, v):
        return self.group.pair_h(self.classes[v])

    def deg_d(self, v):
        return self.group.pair_d(self.classes[v])

    def contact_defects(self):
        """Per vertex: divisor degree of the class minus total root weight."""
        out = []
        for v in range(self.num_vertices):
            mu = sum(w for vv, w in self.roots if vv == v)
            out.append(self.deg_d(v) - mu)
        return tuple(out)

    def satisfies_contact(self):
        return all(x == 0 for x in self.contact_defects())

    def reorder(self, sigma):
        """Roots permuted so the j-th root of the result is the
        sigma^{-1}(j)-th root of this graph."""
        r = self.num_roots
        inv = [None] * r
        for i, image in enumerate(sigma):
            inv[image] = i
        return AdmissibleGraph(
            self.group,
            self.genera,
            self.classes,
            self.legs,
            tuple(self.roots[inv[j]] for j in range(r)),
        )

    def numeric_shadow(self):
        """Projection to the standard rank-two group by the two functionals."""
        return AdmissibleGraph(
            NUMERIC_GROUP,
            self.genera,
            tuple((self.deg_h(v), self.deg_d(v)) for v in range(self.num_vertices)),
            self.legs,
            self.roots,
        )

    def isomorphic(self, other):
        """Order-preserving isomorphism on legs and roots, preserving both
        vertex weight functions.  The leg and root attachments force the
        vertex bijection, so the search is deterministic."""
        if (
            self.group != other.group
            or self.num_vertices != other.num_vertices
            or self.num_legs != other.num_legs
            or self.num_roots != other.num_roots
        ):
            return False
        if self.root_weights() != other.root_weights():
            return False
        nv = self.num_vertices
        forced = {}
        for j in range(self.num_legs):
            a, b = self.legs[j], other.legs[j]
            if forced.setdefault(a, b) != b:
                return False
        for j in range(self.num_roots):
            a, b = self.roots[j][0], other.roots[j][0]
            if forced.setdefault(a, b) != b:
                return False
        if len(set(forced.values())) != len(forced):
            return False
        for a, b in forced.items():
            if self.genera[a] != other.genera[b] or self.classes[a] != other.classes[b]:
                return False
        rest_a = [v for v in range(nv) if v not in forced]
        rest_b = [v for v in range(nv) if v not in set(forced.values())]
        left = sorted((self.genera[v], self.classes[v]) for v in rest_a)
        right = sorted((other.genera[v], other.classes[v]) for v in rest_b)
        return left == right

    def to_json(self):
        vertices = []
        for v in range(self.num_vertices):
            vertices.append(
                {
                    "g": self.genera[v],
                    "b": list(self.classes[v]),
                    "roots": [
                        {"weight": w} for vv, w in self.roots if vv == v
                    ],
                    "legs": sum(1 for x in self.legs if x == v),
                }
            )
        root_order = []
        local_seen = {}
        for v, w in self.roots:
            k = local_seen.get(v, 0)
            local_seen[v] = k + 1
            root_order.append([v, k])
        return {
            "vertices": vertices,
            "root_order": root_order,
            "leg_order": list(self.legs),
            "deg_H": list(self.group.deg_h),
            "deg_D": list(self.group.deg_d),
        }


def graph_from_json(data):
    group = ClassGroup(
        len(data["deg_H"]), tuple(data["deg_H"]), tuple(data["deg_D"])
    )
    genera = tuple(v["g"] for v in data["vertices"])
    classes = tuple(tuple(v["b"]) for v in data["vertices"])
    legs = tuple(data["leg_order"])
    roots = []
    for v, k in data["root_order"]:
        roots.append((v, data["vertices"][v]["roots"][k]["weight"]))
    return AdmissibleGraph(group, genera, classes, legs, tuple(roots))


@dataclass(frozen=True)
class AdmissibleTriple:
    """Two admissible graphs with matched roots and a leg distribution."""

    first: AdmissibleGraph
    second: AdmissibleGraph
    first_legs: tuple  # subset of 1..k picking the first graph's legs

    def __post_init__(self):
        if self.first.num_roots != self.second.num_roots:
            raise GraphError("root counts differ")
        if self.first.root_weights() != self.second.root_weights():
            raise GraphError("root weights must match pairwise")
        k1, k2 = self.first.num_legs, self.second.num_legs
        I = tuple(int(x) for x in self.first_legs)
        object.__setattr__(self, "first_legs", I)
        if len(I) != k1 or list(I) != sorted(set(I)):
            raise GraphError("leg subset must be strictly increasing of size k1")
        if I and (I[0] < 1 or I[-1] > k1 + k2):
            raise GraphError("leg subset out of range")
        if not self._glued_connected():
            raise GraphError("gluing the roots must give a connected graph")

    @property
    def num_roots(self):
        return self.first.num_roots

    def _glued_connected(self):
        n1 = self.first.num_vertices
        total = n1 + self.second.num_vertices
        parent = list(range(total))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(self.num_roots):
            a = self.first.roots[i][0]
            b = n1 + self.second.roots[i][0]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in range(total)}) == 1

    def reorder(self, sigma):
        return AdmissibleTriple(
            self.first.reorder(sigma), self.second.reorder(sigma), self.first_legs
        )

    def isomorphic(self, other):
        return (
            self.first_legs == other.first_legs
            and self.first.isomorphic(other.first)
            and self.second.isomorphic(other.second)
        )

    def numeric_shadow(self):
        return AdmissibleTriple(
            self.first.numeric_shadow(),
            self.second.numeric_shadow(),
            self.first_legs,
        )

    def normalized_legs(self):
        """Same triple with the first graph's legs moved to the front; the
        per-side leg orders, which are what isomorphism preserves, do not
        change."""
        k1 = self.first.num_legs
        return AdmissibleTriple(
            self.first, self.second, tuple(range(1, k1 + 1))
        )


@dataclass(frozen=True)
class GluedGraph:
    vertices: tuple        # (side, index, genus, class)
    edges: tuple           # (first vertex, second vertex, weight)
    legs: tuple            # ordered; glued-vertex index per leg

    def betti(self):
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b, _ in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        comps = len({find(v) for v in range(len(self.vertices))})
        return len(self.edges) - len(self.vertices) + comps

    def to_dot(self):
        lines = ["graph glued {"]
        for i, (side, idx, g, _) in enumerate(self.vertices):
            lines.append(
                '  v%d [label="side%d.%d g=%d"];' % (i, side, idx, g)
            )
        for a, b, w in self.edges:
            lines.append('  v%d -- v%d [label="%d"];' % (a, b, w))
        for j, v in enumerate(self.legs, start=1):
            lines.append("  leg%d [shape=point];" % j)
            lines.append('  v%d -- leg%d [style=dashed, label="p%d"];' % (v, j, j))
        lines.append("}")
        return "\n".join(lines)


def glue(triple):
    """Glued graph with its genus, degree and topological type."""
    g1, g2 = triple.first, triple.second
    n1 = g1.num_vertices
    vertices = tuple(
        (1, v, g1.genera[v], g1.classes[v]) for v in range(n1)
    ) + tuple((2, v, g2.genera[v], g2.classes[v]) for v in range(g2.num_vertices))
    edges = tuple(
        (g1.roots[i][0], n1 + g2.roots[i][0], g1.roots[i][1])
        for i in range(triple.num_roots)
    )
    k1, k2 = g1.num_legs, g2.num_legs
    k = k1 + k2
    in_first = set(triple.first_legs)
    legs = []
    i1 = i2 = 0
    for pos in range(1, k + 1):
        if pos in in_first:
            legs.append(g1.legs[i1])
            i1 += 1
        else:
            legs.append(n1 + g2.legs[i2])
            i2 += 1
    glued = GluedGraph(vertices, edges, tuple(legs))
    r = triple.num_roots
    total_vertices = len(vertices)
    genus = r + 1 - total_vertices + sum(v[2] for v in vertices)
    degree = sum(g1.deg_h(v) for v in range(n1)) + sum(
        g2.deg_h(v) for v in range(g2.num_vertices)
    )
    return glued, genus, degree, TopType(degree, genus, k)


def eq_group(triple, bound=8):
    """Brute-force symmetry group inside S_r, with a subgroup sanity check."""
    r = triple.num_roots
    if r > bound:
        raise GraphError("root count above the brute-force bound %d" % bound)
    if r == 0:
        return [()]
    elements = []
    for sigma in itertools.permutations(range(r)):
        if triple.isomorphic(triple.reorder(sigma)):
            elements.append(sigma)
    elems = set(elements)
    for a in elements:
        inv = tuple(a.index(i) for i in range(r))
        if inv not in elems:
            raise GraphError("symmetry set is not closed under inverses")
        for b in elements:
            comp = tuple(a[b[i]] for i in range(r))
            if comp not in elems:
                raise GraphError("symmetry set is not closed under composition")
    return elements


def phi_degree(triple, bound=8):
    return len(eq_group(triple, bound))


def triples_equivalent(t1, t2, bound=8):
    """Whether some root reordering carries one triple onto the other."""
    r = t1.num_roots
    if r != t2.num_roots:
        return False
    if r > bound:
        raise GraphError("root count above the brute-force bound %d" % bound)
    if r == 0:
        return t1.isomorphic(t2)
    return any(
        t1.isomorphic(t2.reorder(sigma))
        for sigma in itertools.permutations(range(r))
    )


@dataclass(frozen=True)
class TripleAlphabet:
    """Finite alphabet for exhausting small admissible triples."""

    max_roots: int = 4
    weights: tuple = (1, 2)
    genera: tuple = (0, 1)
    extra_degrees: tuple = (0,)     # polarization degree added on each vertex
    max_vertices: int = 2
    max_legs_per_side: int = 0


def _alphabet_graphs(alpha, weight_vector):
    """All admissible graphs over the numeric group whose ordered root
    weights equal ``weight_vector``; vertex divisor degrees match the total
    root weight (so the contact constraint holds by construction)."""
    r = len(weight_vector)
    out = []
    seen = set()
    nv_options = range(1, alpha.max_vertices + 1) if r else [0, 1]
    for nv in nv_options:
        if nv == 0:
            if r == 0:
                out.append(AdmissibleGraph(NUMERIC_GROUP, (), (), (), ()))
            continue
        if r == 0 and nv > 1:
            continue
        assignments = (
            itertools.product(range(nv), repeat=r) if r else [()]
        )
        for assign in assignments:
            if nv > 1 and set(assign) != set(range(nv)):
                continue
            for genera in itertools.product(alpha.genera, repeat=nv):
                for extras in itertools.product(alpha.extra_degrees, repeat=nv):
                    for nlegs in range(alpha.max_legs_per_side + 1):
                        for legs in itertools.product(range(nv), repeat=nlegs):
                            mu_at = [0] * nv
                            for v, w in zip(assign, weight_vector):
                                mu_at[v] += w
                            classes = tuple(
                                (extras[v], mu_at[v]) for v in range(nv)
                            )
                            roots = tuple(
                                (assign[i], weight_vector[i]) for i in range(r)
                            )
                            graph = AdmissibleGraph(
                                NUMERIC_GROUP, genera, classes, legs, roots
                            )
                            key = _graph_canonical_key(graph)
                            if key not in seen:
                                seen.add(key)
                                out.append(graph)
    return out


def _graph_canonical_key(graph):
    """Encoding minimized over vertex relabelings (small graphs only)."""
    nv = graph.num_vertices
    best = None
    for perm in itertools.permutations(range(nv)):
        enc = (
            tuple(
                (graph.genera[p], graph.classes[p])
                for p in sorted(range(nv), key=lambda v: perm[v])
            ),
            tuple(perm[v] for v in graph.legs),
            tuple((perm[v], w) for v, w in graph.roots),
        )
        if best is None or enc < best:
            best = enc
    return best


def _triple_canonical_key(triple):
    r = triple.num_roots
    best = None
    perms = itertools.permutations(range(r)) if r else [()]
    for sigma in perms:
        enc = (
            _graph_canonical_key(triple.first.reorder(sigma)),
            _graph_canonical_key(triple.second.reorder(sigma)),
            triple.first_legs,
        )
        if best is None or enc < best:
            best = enc
    return best


def enumerate_triples(alpha=TripleAlphabet()):
    """All admissible triples over the alphabet, one per equivalence class
    of simultaneous root reorderings."""
    out = []
    seen = set()
    for r in range(0, alpha.max_roots + 1):
        weight_vectors = sorted(
            set(
                tuple(sorted(ws))
                for ws in itertools.product(alpha.weights, repeat=r)
            )
        )
        for wv in weight_vectors:
            sides = _alphabet_graphs(alpha, wv)
            for g1 in sides:
                for g2 in sides:
                    k1, k2 = g1.num_legs, g2.num_legs
                    for first_legs in itertools.combinations(
                        range(1, k1 + k2 + 1), k1
                    ):
                        try:
                            triple = AdmissibleTriple(g1, g2, first_legs)
                        except GraphError:
                            continue
                        key = _triple_canonical_key(triple)
                        if key not in seen:
                            seen.add(key)
                            out.append(triple)
    return out


# ---------------------------------------------------------------------------
# from split maps to graphs: labelled types and the gluing-degree count
# ---------------------------------------------------------------------------


def _half_components(half):
    """Connected components of a relative half: (piece set, genus, degree,
    marks count)."""
    ids = [(i, p) for i, g in enumerate(half.groups) for p in range(len(g))]
    index = {pid: k for k, pid in enumerate(ids)}
    parent = list(range(len(ids)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, iface in enumerate(half.nodes):
        for _, a, b in iface:
            ra, rb = find(index[(i, a)]), find(index[(i + 1, b)])
            if ra != rb:
                parent[ra] = rb
    comp_of = {}
    for pid in ids:
        comp_of[pid] = find(index[pid])
    order = []
    for pid in ids:
        root = comp_of[pid]
        if root not in order:
            order.append(root)
    return comp_of, order


def half_to_graph(half):
    """Admissible-graph shadow of a relative half over the numeric group.

    Vertices are the connected components; each carries (total degree,
    total root weight) as its class vector, the component's arithmetic genus,
    the component's marked points as consecutively ordered legs, and the
    half's roots in their stored order.
    """
    comp_of, order = _half_components(half)
    pos = {root: i for i, root in enumerate(order)}
    nv = len(order)
    genera = [0] * nv
    degrees = [0] * nv
    piece_count = [0] * nv
    node_count = [0] * nv
    marks = [0] * nv
    for i, g in enumerate(half.groups):
        for p, piece in enumerate(g):
            v = pos[comp_of[(i, p)]]
            genera[v] += piece.genus
            degrees[v] += piece.degree
            marks[v] += piece.marks
            piece_count[v] += 1
    for i, iface in enumerate(half.nodes):
        for _, a, b in iface:
            node_count[pos[comp_of[(i, a)]]] += 1
    vertex_genus = tuple(
        genera[v] + node_count[v] - piece_count[v] + 1 for v in range(nv)
    )
    roots = tuple((pos[comp_of[(0, p)]], mu) for mu, p in half.roots)
    root_weight = [0] * nv
    for v, w in roots:
        root_weight[v] += w
    classes = tuple((degrees[v], root_weight[v]) for v in range(nv))
    legs = []
    for v in range(nv):
        legs.extend([v] * marks[v])
    return AdmissibleGraph(NUMERIC_GROUP, vertex_genus, classes, tuple(legs), roots)


def realize_split_map(triple):
    """A minimal split map (no expansion) whose decomposition at the single
    interface has the labelled type of the triple: one piece per vertex."""
    g1, g2 = triple.first.numeric_shadow(), triple.second.numeric_shadow()
    group1 = [
        Piece(
            g1.genera[v],
            g1.deg_h(v),
            sum(1 for x in g1.legs if x == v),
        )
        for v in range(g1.num_vertices)
    ]
    group2 = [
        Piece(
            g2.genera[v],
            g2.deg_h(v),
            sum(1 for x in g2.legs if x == v),
        )
        for v in range(g2.num_vertices)
    ]
    iface = [
        (g1.roots[i][1], g1.roots[i][0], g2.roots[i][0])
        for i in range(triple.num_roots)
    ]
    return SplitMap([group1, group2], [iface])


def _ordered_triple(side1, side2, ordering):
    """Labelled type of a decomposition under an ordering of the interface
    instances (ordering[j] = which instance becomes root j)."""
    r1 = tuple(side1.roots[i] for i in ordering)
    r2 = tuple(side2.roots[i] for i in ordering)
    h1 = RelSplit(side1.groups, side1.nodes, r1)
    h2 = RelSplit(side2.groups, side2.nodes, r2)
    gr1 = half_to_graph(h1)
    gr2 = half_to_graph(h2)
    k1 = gr1.num_legs
    return AdmissibleTriple(gr1, gr2, tuple(range(1, k1 + 1)))


def fiber_count(triple, split_map, l, bound=8):
    """Number of ways the split map realizes the triple at interface l, up to
    the automorphisms of the map.

    Orderings of the interface instances whose labelled type matches the
    triple are counted modulo the instance permutations induced by the
    map's automorphisms; with Eq computed independently by brute force this
    reproduces the degree of the gluing morphism:
    fiber_count * |induced automorphism image| = |Eq|.
    """
    side1, side2, sigma = decompose(split_map, l)
    r = len(sigma)
    if r != triple.num_roots:
        raise GraphError("interface size does not match the triple")
    if r > bound:
        raise GraphError("root count above the brute-force bound %d" % bound)
    if r == 0:
        return 1
    target = triple.numeric_shadow().normalized_legs()
    matching = []
    for ordering in itertools.permutations(range(r)):
        try:
            cand = _ordered_triple(side1, side2, ordering)
        except GraphError:
            continue
        if cand.isomorphic(target):
            matching.append(ordering)
    if not matching:
        return 0
    image = split_map.automorphism_interface_image(l)
    remaining = set(matching)
    orbits = 0
    while remaining:
        seed = remaining.pop()
        orbits += 1
        for pi in image:
            moved = tuple(pi[seed[j]] for j in range(r))
            remaining.discard(moved)
    return orbits
