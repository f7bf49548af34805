"""Finite covers, groupoids, refinements and pull-backs.

All groupoids here are finite and fully validated at construction:
unit laws, associativity on every composable triple and the inverse laws are
checked exhaustively, so later algebra can trust the structure maps.

The composition convention is diagrammatic: a * b is defined when
tgt(a) == src(b).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    BaseMismatch,
    BaseNotCech,
    IndexOutOfRange,
    InvalidCover,
    NotAGroupoid,
    NotARefinement,
    NotGenSurjSubmersion,
)


@dataclass(frozen=True)
class Cover:
    """Indexed family of subsets of {0, .., base_size-1} covering every point."""

    base_size: int
    sets: tuple[tuple[int, ...], ...]

    def overlap(self, *indices: int) -> tuple[int, ...]:
        pts = set(range(self.base_size))
        for i in indices:
            pts &= set(self.sets[i])
        return tuple(sorted(pts))

    @property
    def n_sets(self) -> int:
        return len(self.sets)


def cover(base_size: int, sets) -> Cover:
    if base_size < 0:
        raise InvalidCover(f"base size must be nonnegative, got {base_size}")
    norm = []
    for i, s in enumerate(sets):
        pts = [int(x) for x in s]
        if len(set(pts)) != len(pts):
            raise InvalidCover(f"set {i} contains duplicate points")
        for x in pts:
            if not 0 <= x < base_size:
                raise InvalidCover(f"set {i} contains point {x} outside the base")
        norm.append(tuple(sorted(pts)))
    covered = set().union(*norm) if norm else set()
    for x in range(base_size):
        if x not in covered:
            raise InvalidCover(f"point {x} is not covered")
    return Cover(base_size=base_size, sets=tuple(norm))


def singleton_cover(base_size: int) -> Cover:
    return cover(base_size, [[x] for x in range(base_size)])


class FiniteGroupoid:
    """Groupoid on finite object and arrow sets with explicit structure maps."""

    def __init__(self, objects, arrows, src, tgt, unit, prod, inv, _validate=True):
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.unit = tuple(unit)
        self.prod = dict(prod)
        self.inv = tuple(inv)
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        self.arrow_index = {a: i for i, a in enumerate(self.arrows)}
        if _validate:
            self._validate()

    def _validate(self) -> None:
        n_obj, n_arr = len(self.objects), len(self.arrows)
        if len(self.obj_index) != n_obj:
            raise NotAGroupoid("duplicate object labels")
        if len(self.arrow_index) != n_arr:
            raise NotAGroupoid("duplicate arrow labels")
        if len(self.src) != n_arr or len(self.tgt) != n_arr or len(self.inv) != n_arr:
            raise NotAGroupoid("structure map length mismatch")
        if len(self.unit) != n_obj:
            raise NotAGroupoid("unit map length mismatch")
        for a in range(n_arr):
            if not (0 <= self.src[a] < n_obj and 0 <= self.tgt[a] < n_obj):
                raise NotAGroupoid(f"arrow {a} has src/tgt out of range")
            if not 0 <= self.inv[a] < n_arr:
                raise NotAGroupoid(f"arrow {a} has inverse out of range")
        for o in range(n_obj):
            u = self.unit[o]
            if not 0 <= u < n_arr:
                raise NotAGroupoid(f"unit of object {o} out of range")
            if self.src[u] != o or self.tgt[u] != o:
                raise NotAGroupoid(f"unit of object {o} is not a loop at it")
        composable = {(a, b) for a in range(n_arr) for b in range(n_arr)
                      if self.tgt[a] == self.src[b]}
        if set(self.prod) != composable:
            missing = composable - set(self.prod)
            extra = set(self.prod) - composable
            witness = (sorted(missing) + sorted(extra))[0]
            raise NotAGroupoid(f"product defined on the wrong pairs, e.g. {witness}")
        for (a, b), c in self.prod.items():
            if not 0 <= c < n_arr:
                raise NotAGroupoid(f"product of ({a}, {b}) out of range")
            if self.src[c] != self.src[a] or self.tgt[c] != self.tgt[b]:
                raise NotAGroupoid(f"product of ({a}, {b}) has wrong endpoints")
        for a in range(n_arr):
            if self.prod[(self.unit[self.src[a]], a)] != a:
                raise NotAGroupoid(f"left unit law fails at arrow {a}")
            if self.prod[(a, self.unit[self.tgt[a]])] != a:
                raise NotAGroupoid(f"right unit law fails at arrow {a}")
        for (a, b), ab in self.prod.items():
            for c in range(n_arr):
                if self.src[c] == self.tgt[b]:
                    if self.prod[(ab, c)] != self.prod[(a, self.prod[(b, c)])]:
                        raise NotAGroupoid(f"associativity fails at ({a}, {b}, {c})")
        for a in range(n_arr):
            ai = self.inv[a]
            if self.src[ai] != self.tgt[a] or self.tgt[ai] != self.src[a]:
                raise NotAGroupoid(f"inverse of arrow {a} has wrong endpoints")
            if self.prod[(a, ai)] != self.unit[self.src[a]]:
                raise NotAGroupoid(f"right inverse law fails at arrow {a}")
            if self.prod[(ai, a)] != self.unit[self.tgt[a]]:
                raise NotAGroupoid(f"left inverse law fails at arrow {a}")

    @classmethod
    def from_product(cls, objects, arrows, src, tgt, prod) -> "FiniteGroupoid":
        """Derive units and inverses from the product table, then validate."""
        objects = tuple(objects)
        arrows = tuple(arrows)
        src = tuple(src)
        tgt = tuple(tgt)
        prod = dict(prod)
        n_arr = len(arrows)
        unit = []
        for o in range(len(objects)):
            loops = [a for a in range(n_arr) if src[a] == o and tgt[a] == o]
            neutral = [u for u in loops
                       if all(prod.get((u, b)) == b for b in range(n_arr) if src[b] == o)
                       and all(prod.get((a, u)) == a for a in range(n_arr) if tgt[a] == o)]
            if len(neutral) != 1:
                raise NotAGroupoid(f"object {o} has {len(neutral)} neutral loops, expected 1")
            unit.append(neutral[0])
        inv = []
        for a in range(n_arr):
            cands = [b for b in range(n_arr)
                     if prod.get((a, b)) == unit[src[a]] and prod.get((b, a)) == unit[tgt[a]]]
            if len(cands) != 1:
                raise NotAGroupoid(f"arrow {a} has {len(cands)} two-sided inverses, expected 1")
            inv.append(cands[0])
        return cls(objects, arrows, src, tgt, unit, prod, inv)

    def compose(self, a: int, b: int) -> int:
        key = (a, b)
        if key not in self.prod:
            raise IndexOutOfRange(f"arrows {a} and {b} are not composable")
        return self.prod[key]

    def composable_pairs(self):
        return self.prod.keys()

    def is_unit_arrow(self, a: int) -> bool:
        return self.unit[self.src[a]] == a

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (self.objects == other.objects and self.arrows == other.arrows
                and self.src == other.src and self.tgt == other.tgt
                and self.unit == other.unit and self.prod == other.prod
                and self.inv == other.inv)

    def __repr__(self) -> str:
        return f"FiniteGroupoid({len(self.objects)} objects, {len(self.arrows)} arrows)"


def trivial_groupoid(n: int) -> FiniteGroupoid:
    """The groupoid n =|= n with only unit arrows."""
    rng = tuple(range(n))
    return FiniteGroupoid(rng, rng, rng, rng, rng, {(a, a): a for a in rng}, rng)


def pair_groupoid(n: int) -> FiniteGroupoid:
    objects = tuple(range(n))
    arrows = tuple(itertools.product(range(n), range(n)))
    idx = {a: k for k, a in enumerate(arrows)}
    src = tuple(a[0] for a in arrows)
    tgt = tuple(a[1] for a in arrows)
    unit = tuple(idx[(o, o)] for o in objects)
    prod = {}
    for k, (i, j) in enumerate(arrows):
        for l, (j2, m) in enumerate(arrows):
            if j == j2:
                prod[(k, l)] = idx[(i, m)]
    inv = tuple(idx[(j, i)] for (i, j) in arrows)
    return FiniteGroupoid(objects, arrows, src, tgt, unit, prod, inv)


def cech_groupoid(c: Cover) -> FiniteGroupoid:
    """Objects are pairs (i, x) with x in U_i, arrows are triples (i, j, x)."""
    if not isinstance(c, Cover):
        raise InvalidCover("expected a Cover")
    objects = [(i, x) for i in range(c.n_sets) for x in c.sets[i]]
    arrows = [(i, j, x) for i in range(c.n_sets) for j in range(c.n_sets)
              for x in c.overlap(i, j)]
    oidx = {o: k for k, o in enumerate(objects)}
    aidx = {a: k for k, a in enumerate(arrows)}
    src = [oidx[(i, x)] for (i, j, x) in arrows]
    tgt = [oidx[(j, x)] for (i, j, x) in arrows]
    unit = [aidx[(i, i, x)] for (i, x) in objects]
    prod = {}
    for k, (i, j, x) in enumerate(arrows):
        for l, (j2, m, y) in enumerate(arrows):
            if j == j2 and x == y:
                prod[(k, l)] = aidx[(i, m, x)]
    inv = [aidx[(j, i, x)] for (i, j, x) in arrows]
    return FiniteGroupoid(objects, arrows, src, tgt, unit, prod, inv)


def cover_from_cech(gpd: FiniteGroupoid) -> Cover:
    """Recover the cover of a groupoid built by cech_groupoid, or fail."""
    try:
        sets: dict[int, set[int]] = {}
        for o in gpd.objects:
            i, x = o
            sets.setdefault(int(i), set()).add(int(x))
        n_sets = max(sets) + 1 if sets else 0
        base = max((x for s in sets.values() for x in s), default=-1) + 1
        c = cover(base, [sorted(sets.get(i, ())) for i in range(n_sets)])
    except (TypeError, ValueError, InvalidCover) as exc:
        raise BaseNotCech(f"objects do not form a cover: {exc}") from exc
    if cech_groupoid(c) != gpd:
        raise BaseNotCech("groupoid structure does not match its cover")
    return c


@dataclass(frozen=True)
class Refinement:
    fine: Cover
    coarse: Cover
    sigma: tuple[int, ...]


def validate_refinement(fine: Cover, sigma, coarse: Cover) -> Refinement:
    sig = tuple(int(v) for v in sigma)
    if len(sig) != fine.n_sets:
        raise NotARefinement(-1, -1)
    if fine.base_size != coarse.base_size:
        raise NotARefinement(-1, -1)
    for j, target in enumerate(sig):
        if not 0 <= target < coarse.n_sets:
            raise NotARefinement(j, -1)
        coarse_pts = set(coarse.sets[target])
        for x in fine.sets[j]:
            if x not in coarse_pts:
                raise NotARefinement(j, x)
    return Refinement(fine=fine, coarse=coarse, sigma=sig)


@dataclass
class GroupoidMorphism:
    source: FiniteGroupoid
    target: FiniteGroupoid
    obj_map: tuple[int, ...]
    arrow_map: tuple[int, ...]

    def validate(self) -> "GroupoidMorphism":
        s, t = self.source, self.target
        if len(self.obj_map) != len(s.objects) or len(self.arrow_map) != len(s.arrows):
            raise NotAGroupoid("morphism map length mismatch")
        for a in range(len(s.arrows)):
            fa = self.arrow_map[a]
            if t.src[fa] != self.obj_map[s.src[a]] or t.tgt[fa] != self.obj_map[s.tgt[a]]:
                raise NotAGroupoid(f"morphism breaks src/tgt at arrow {a}")
        for o in range(len(s.objects)):
            if self.arrow_map[s.unit[o]] != t.unit[self.obj_map[o]]:
                raise NotAGroupoid(f"morphism breaks unit at object {o}")
        for (a, b), c in s.prod.items():
            if t.prod[(self.arrow_map[a], self.arrow_map[b])] != self.arrow_map[c]:
                raise NotAGroupoid(f"morphism breaks product at ({a}, {b})")
        return self

    def is_bijective(self) -> bool:
        return (len(set(self.obj_map)) == len(self.target.objects)
                and len(set(self.arrow_map)) == len(self.target.arrows)
                and len(self.source.objects) == len(self.target.objects)
                and len(self.source.arrows) == len(self.target.arrows))

    def inverse(self) -> "GroupoidMorphism":
        if not self.is_bijective():
            raise NotAGroupoid("cannot invert a non-bijective morphism")
        obj_inv = [0] * len(self.obj_map)
        for o, fo in enumerate(self.obj_map):
            obj_inv[fo] = o
        arr_inv = [0] * len(self.arrow_map)
        for a, fa in enumerate(self.arrow_map):
            arr_inv[fa] = a
        return GroupoidMorphism(self.target, self.source, tuple(obj_inv),
                                tuple(arr_inv)).validate()


def morphism_by_labels(source: FiniteGroupoid, target: FiniteGroupoid,
                       obj_fn, arrow_fn) -> GroupoidMorphism:
    """Build and validate a morphism from label-level functions."""
    obj_map = tuple(target.obj_index[obj_fn(o)] for o in source.objects)
    arrow_map = tuple(target.arrow_index[arrow_fn(a)] for a in source.arrows)
    return GroupoidMorphism(source, target, obj_map, arrow_map).validate()


def is_gen_surj_subm(p, g: FiniteGroupoid) -> bool:
    """True when every object of g is the target of an arrow sourced in im(p)."""
    image = set(p)
    reached = {g.tgt[a] for a in range(len(g.arrows)) if g.src[a] in image}
    return reached == set(range(len(g.objects)))


def pullback_groupoid(g: FiniteGroupoid, m_labels, p) -> FiniteGroupoid:
    """Pull g back along p; arrows are triples (m, gamma, m') over new objects."""
    m_labels = tuple(m_labels)
    p = tuple(int(v) for v in p)
    if len(p) != len(m_labels):
        raise NotGenSurjSubmersion("p must assign one object of g per new object")
    for v in p:
        if not 0 <= v < len(g.objects):
            raise NotGenSurjSubmersion(f"p value {v} out of range")
    if not is_gen_surj_subm(p, g):
        raise NotGenSurjSubmersion("p is not a generalized surjective submersion for g")
    arrows = []
    for mi in range(len(m_labels)):
        for a in range(len(g.arrows)):
            if g.src[a] != p[mi]:
                continue
            for ni in range(len(m_labels)):
                if g.tgt[a] == p[ni]:
                    arrows.append((mi, a, ni))
    labels = [(m_labels[mi], g.arrows[a], m_labels[ni]) for (mi, a, ni) in arrows]
    aidx = {t: k for k, t in enumerate(arrows)}
    src = [mi for (mi, a, ni) in arrows]
    tgt = [ni for (mi, a, ni) in arrows]
    unit = [aidx[(mi, g.unit[p[mi]], mi)] for mi in range(len(m_labels))]
    prod = {}
    for k, (mi, a, ni) in enumerate(arrows):
        for l, (ni2, b, zi) in enumerate(arrows):
            if ni == ni2:
                prod[(k, l)] = aidx[(mi, g.prod[(a, b)], zi)]
    inv = [aidx[(ni, g.inv[a], mi)] for (mi, a, ni) in arrows]
    return FiniteGroupoid(m_labels, labels, src, tgt, unit, prod, inv)


@dataclass(frozen=True)
class CommonRefinement:
    cover: Cover
    pairs: tuple[tuple[int, int], ...]
    tau: dict = field(compare=False)
    ref_u: Refinement = field(compare=False)
    ref_v: Refinement = field(compare=False)


def common_refinement(cov_u: Cover, cov_v: Cover, m_size: int, p, p2) -> CommonRefinement:
    """Cover refining both cov_u and cov_v through a common witness set.

    p and p2 send each witness to a point of the disjoint unions of cov_u and
    cov_v respectively, as (set index, point) pairs; both must sit over the
    same base point.
    """
    p = [tuple(v) for v in p]
    p2 = [tuple(v) for v in p2]
    if len(p) != m_size or len(p2) != m_size:
        raise BaseMismatch("witness maps must cover the whole witness set")
    for m in range(m_size):
        (i, x), (j, y) = p[m], p2[m]
        if not (0 <= i < cov_u.n_sets and x in cov_u.sets[i]):
            raise BaseMismatch(f"p({m}) = ({i}, {x}) is not a point of the first union")
        if not (0 <= j < cov_v.n_sets and y in cov_v.sets[j]):
            raise BaseMismatch(f"p2({m}) = ({j}, {y}) is not a point of the second union")
        if x != y:
            raise BaseMismatch(f"witness {m} sits over base points {x} != {y}")
    buckets: dict[tuple[int, int], dict[int, int]] = {}
    for m in range(m_size):
        (i, x), (j, _) = p[m], p2[m]
        slot = buckets.setdefault((i, j), {})
        if x not in slot:
            slot[x] = m
    pairs = tuple(sorted(buckets))
    sets = [tuple(sorted(buckets[ij])) for ij in pairs]
    w = cover(cov_u.base_size, sets)
    tau = {(k, x): buckets[pairs[k]][x] for k in range(len(pairs)) for x in w.sets[k]}
    ref_u = validate_refinement(w, [i for (i, j) in pairs], cov_u)
    ref_v = validate_refinement(w, [j for (i, j) in pairs], cov_v)
    return CommonRefinement(cover=w, pairs=pairs, tau=tau, ref_u=ref_u, ref_v=ref_v)
