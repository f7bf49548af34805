"""Finite groups as Cayley tables, with brute-force isomorphism search.

Elements are the indices 0..order-1 and index 0 is always the identity.
Every constructor validates the full set of group axioms, so anything that
holds a FiniteGroup can rely on them without re-checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import IndexOutOfRange, NotAGroup, NotAHom


@dataclass(frozen=True)
class Witnessed:
    """Boolean result carrying the first counterexample when false."""

    ok: bool
    reason: str | None = None
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    name: str
    inverse: tuple[int, ...] = field(compare=False)

    def mul(self, a: int, b: int) -> int:
        if not (0 <= a < self.order and 0 <= b < self.order):
            raise IndexOutOfRange(f"mul({a}, {b}) in group {self.name} of order {self.order}")
        return self.table[a][b]

    def inv(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise IndexOutOfRange(f"inv({a}) in group {self.name} of order {self.order}")
        return self.inverse[a]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != 0:
            x = self.table[x][a]
            n += 1
        return n

    def conjugation(self, g: int) -> tuple[int, ...]:
        """The map x -> g*x*g^-1 as an index array."""
        gi = self.inverse[g]
        return tuple(self.table[self.table[g][x]][gi] for x in self.elements())

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def group_from_table(order: int, table, name: str) -> FiniteGroup:
    """Validate a Cayley table and wrap it; element 0 must be the identity."""
    if order <= 0:
        raise NotAGroup(f"order must be positive, got {order}")
    rows = tuple(tuple(int(v) for v in row) for row in table)
    if len(rows) != order or any(len(row) != order for row in rows):
        raise NotAGroup(f"table is not {order}x{order}")
    for row in rows:
        for v in row:
            if not 0 <= v < order:
                raise NotAGroup(f"entry {v} out of range 0..{order - 1}")
    for a in range(order):
        if rows[0][a] != a:
            raise NotAGroup(f"identity axiom fails: table[0][{a}] = {rows[0][a]} != {a}")
        if rows[a][0] != a:
            raise NotAGroup(f"identity axiom fails: table[{a}][0] = {rows[a][0]} != {a}")
    for a in range(order):
        if len(set(rows[a])) != order:
            raise NotAGroup(f"row {a} is not a permutation")
    for b in range(order):
        if len({rows[a][b] for a in range(order)}) != order:
            raise NotAGroup(f"column {b} is not a permutation")
    for a in range(order):
        for b in range(order):
            ab = rows[a][b]
            for c in range(order):
                if rows[ab][c] != rows[a][rows[b][c]]:
                    raise NotAGroup(f"associativity fails at ({a}, {b}, {c})")
    inverse = [-1] * order
    for a in range(order):
        for b in range(order):
            if rows[a][b] == 0 and rows[b][a] == 0:
                inverse[a] = b
                break
        if inverse[a] < 0:
            raise NotAGroup(f"element {a} has no two-sided inverse")
    return FiniteGroup(order=order, table=rows, name=name, inverse=tuple(inverse))


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.map)) == self.source.order


def check_hom(f, G: FiniteGroup, H: FiniteGroup) -> Witnessed:
    """Check f(ab) = f(a)f(b) for all a, b and f(0) = 0, with a witness pair."""
    fm = tuple(int(v) for v in f)
    if len(fm) != G.order:
        raise IndexOutOfRange(f"map has length {len(fm)}, expected {G.order}")
    for v in fm:
        if not 0 <= v < H.order:
            raise IndexOutOfRange(f"map value {v} out of range for target of order {H.order}")
    if fm[0] != 0:
        return Witnessed(False, "identity not preserved", (0,))
    for a in range(G.order):
        for b in range(G.order):
            if fm[G.table[a][b]] != H.table[fm[a]][fm[b]]:
                return Witnessed(False, "multiplicativity fails", (a, b))
    return Witnessed(True)


def group_hom(G: FiniteGroup, H: FiniteGroup, f) -> GroupHom:
    res = check_hom(f, G, H)
    if not res:
        raise NotAHom(f"{res.reason} at {res.witness}")
    return GroupHom(G, H, tuple(int(v) for v in f))


def generating_sequence(G: FiniteGroup) -> list[int]:
    """Greedy generating set: add the least element not yet generated."""
    closure = {0}
    gens: list[int] = []
    while len(closure) < G.order:
        g = min(a for a in G.elements() if a not in closure)
        gens.append(g)
        closure.add(g)
        changed = True
        while changed:
            changed = False
            current = list(closure)
            for a in current:
                for b in current:
                    c = G.table[a][b]
                    if c not in closure:
                        closure.add(c)
                        changed = True
    return gens


def _extend_map(G: FiniteGroup, K: FiniteGroup, image: list[int], known: list[int]) -> bool:
    """Close a partial map under products; False on conflict or collision."""
    used = set()
    for a in known:
        if image[a] in used:
            return False
        used.add(image[a])
    i = 0
    while i < len(known):
        a = known[i]
        for b in list(known):
            for x, y in ((G.table[a][b], K.table[image[a]][image[b]]),
                         (G.table[b][a], K.table[image[b]][image[a]])):
                if image[x] == -1:
                    if y in used:
                        return False
                    image[x] = y
                    used.add(y)
                    known.append(x)
                elif image[x] != y:
                    return False
        i += 1
    return True


def enumerate_isomorphisms(G: FiniteGroup, K: FiniteGroup) -> list[GroupHom]:
    """All bijective homs G -> K, sorted lexicographically by map array.

    The search extends partial maps generator by generator, pruning on
    element orders, instead of scanning all |G|! bijections.
    """
    if G.order != K.order:
        return []
    gens = generating_sequence(G)
    orders_K: dict[int, list[int]] = {}
    for a in K.elements():
        orders_K.setdefault(K.element_order(a), []).append(a)

    found: list[tuple[int, ...]] = []

    def search(image: list[int], known: list[int], idx: int) -> None:
        if idx == len(gens):
            if len(known) == G.order:
                found.append(tuple(image))
            return
        g = gens[idx]
        if image[g] != -1:
            search(image, known, idx + 1)
            return
        for cand in orders_K.get(G.element_order(g), []):
            trial = list(image)
            trial_known = list(known)
            trial[g] = cand
            trial_known.append(g)
            if _extend_map(G, K, trial, trial_known):
                search(trial, trial_known, idx + 1)

    start = [-1] * G.order
    start[0] = 0
    search(start, [0], 0)
    found.sort()
    return [GroupHom(G, K, m) for m in found]


@dataclass(frozen=True)
class AutGroup:
    """All automorphisms of a group, with their composition Cayley table."""

    base: FiniteGroup
    elements: tuple[GroupHom, ...]
    group: FiniteGroup

    @property
    def table(self) -> tuple[tuple[int, ...], ...]:
        return self.group.table

    @property
    def order(self) -> int:
        return self.group.order

    def index_of(self, m) -> int:
        key = tuple(m)
        for i, e in enumerate(self.elements):
            if e.map == key:
                return i
        raise IndexOutOfRange(f"map {key} is not an automorphism of {self.base.name}")


def automorphism_group(G: FiniteGroup) -> AutGroup:
    """Aut(G) in canonical order; composition is (a*b)(x) = a(b(x))."""
    autos = enumerate_isomorphisms(G, G)
    index = {h.map: i for i, h in enumerate(autos)}
    n = len(autos)
    table = [[0] * n for _ in range(n)]
    for i, a in enumerate(autos):
        for j, b in enumerate(autos):
            comp = tuple(a.map[b.map[x]] for x in G.elements())
            table[i][j] = index[comp]
    group = group_from_table(n, table, f"Aut({G.name})")
    return AutGroup(base=G, elements=tuple(autos), group=group)


# --- standard construction helpers used by fixtures and the CLI docs ---

def trivial_group(name: str = "1") -> FiniteGroup:
    return group_from_table(1, [[0]], name)


def cyclic_group(n: int, name: str | None = None) -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return group_from_table(n, table, name or f"Z{n}")


def symmetric_group(n: int, name: str | None = None) -> FiniteGroup:
    """S_n on lexicographically ordered permutation tuples; identity first."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    table = [[0] * size for _ in range(size)]
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i][j] = index[tuple(p[q[x]] for x in range(n))]
    return group_from_table(size, table, name or f"S{n}")
