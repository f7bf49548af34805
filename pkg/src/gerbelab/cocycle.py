"""Crossed-module valued 1-cocycles, coboundaries and degree-1 cohomology.

A cocycle is a pair of tables: lam assigns an H value to every point of every
double overlap U_ij, gg assigns a G value to every point of every triple
overlap U_ijk, subject to

    rho(gg_ijk) * lam_ik == lam_ij * lam_jk          on U_ijk,
    gg_ijk * gg_ikl == act(lam_ij)(gg_jkl) * gg_ijl  on U_ijkl,
    gg_iij == e,

over all ordered index tuples, repeated indices included.  A coboundary is an
arbitrary pair of tables (r on the U_i, v on the U_ij); it relates c to c' when
transforming c by it reproduces c' exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from ._program import CocycleProgram, build_program
from .cech import CommonRefinement, Cover, Refinement
from .errors import (
    CocycleRelation1,
    CocycleRelation2,
    DomainMismatch,
    NormalizationViolation,
    SearchSpaceTooLarge,
)
from .xmod import CrossedModule

MAX_SEARCH_DEFAULT = 1 << 24


@lru_cache(maxsize=256)
def program_for(cm: CrossedModule, cov: Cover) -> CocycleProgram:
    return build_program(cm, cov)


@dataclass(frozen=True)
class Cocycle:
    cm: CrossedModule
    cover: Cover
    lam: tuple[int, ...]
    gg: tuple[int, ...]

    def lam_at(self, i: int, j: int, x: int) -> int:
        prog = program_for(self.cm, self.cover)
        return self.lam[prog.lam_slots.index((i, j, x))]

    def g_at(self, i: int, j: int, k: int, x: int) -> int:
        prog = program_for(self.cm, self.cover)
        return self.gg[prog.gg_slots.index((i, j, k, x))]

    def flat(self) -> tuple[int, ...]:
        return self.lam + self.gg


@dataclass(frozen=True)
class Coboundary:
    cm: CrossedModule
    cover: Cover
    r: tuple[int, ...]
    v: tuple[int, ...]

    def r_at(self, i: int, x: int) -> int:
        prog = program_for(self.cm, self.cover)
        return self.r[prog.r_slots.index((i, x))]

    def v_at(self, i: int, j: int, x: int) -> int:
        prog = program_for(self.cm, self.cover)
        return self.v[prog.lam_slots.index((i, j, x))]


def _flatten(prog: CocycleProgram, table, slots, card: int, what: str) -> tuple[int, ...]:
    if isinstance(table, dict):
        extra = set(table) - set(slots)
        if extra:
            raise DomainMismatch(f"{what} table has entries outside its domain: {sorted(extra)!r}")
        flat = tuple(int(table.get(s, 0)) for s in slots)
    else:
        flat = tuple(int(v) for v in table)
        if len(flat) != len(slots):
            raise DomainMismatch(f"{what} table has {len(flat)} entries, expected {len(slots)}")
    for val in flat:
        if not 0 <= val < card:
            raise DomainMismatch(f"{what} value {val} out of range 0..{card - 1}")
    return flat


def validate_cocycle(cm: CrossedModule, cov: Cover, lam, gg) -> Cocycle:
    """Check the three cocycle relations; report the first broken instance.

    lam and gg may be dicts keyed by (i, j, x) and (i, j, k, x); omitted keys
    mean the identity.
    """
    prog = program_for(cm, cov)
    lam_flat = _flatten(prog, lam, prog.lam_slots, cm.H.order, "lam")
    gg_flat = _flatten(prog, gg, prog.gg_slots, cm.G.order, "g")
    lam_of = dict(zip(prog.lam_slots, lam_flat))
    gg_of = dict(zip(prog.gg_slots, gg_flat))
    H, G = cm.H, cm.G
    rho = cm.rho.map
    n = cov.n_sets
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for x in cov.overlap(i, j, k):
                    lhs = H.table[rho[gg_of[(i, j, k, x)]]][lam_of[(i, k, x)]]
                    rhs = H.table[lam_of[(i, j, x)]][lam_of[(j, k, x)]]
                    if lhs != rhs:
                        raise CocycleRelation1(i, j, k, x)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    for x in cov.overlap(i, j, k, l):
                        lhs = G.table[gg_of[(i, j, k, x)]][gg_of[(i, k, l, x)]]
                        rhs = G.table[cm.act[lam_of[(i, j, x)]][gg_of[(j, k, l, x)]]][
                            gg_of[(i, j, l, x)]]
                        if lhs != rhs:
                            raise CocycleRelation2(i, j, k, l, x)
    for i in range(n):
        for j in range(n):
            for x in cov.overlap(i, j):
                if gg_of[(i, i, j, x)] != 0:
                    raise NormalizationViolation(i, j, x)
    return Cocycle(cm=cm, cover=cov, lam=lam_flat, gg=gg_flat)


def trivial_cocycle(cm: CrossedModule, cov: Cover) -> Cocycle:
    prog = program_for(cm, cov)
    return Cocycle(cm=cm, cover=cov, lam=(0,) * prog.n_lam, gg=(0,) * prog.n_gg)


def coboundary(cm: CrossedModule, cov: Cover, r, v) -> Coboundary:
    """A coboundary is shape-only: any pair of tables of the right extent."""
    prog = program_for(cm, cov)
    r_flat = _flatten(prog, r, prog.r_slots, cm.H.order, "r")
    v_flat = _flatten(prog, v, prog.lam_slots, cm.G.order, "v")
    return Coboundary(cm=cm, cover=cov, r=r_flat, v=v_flat)


def identity_coboundary(cm: CrossedModule, cov: Cover) -> Coboundary:
    prog = program_for(cm, cov)
    return Coboundary(cm=cm, cover=cov, r=(0,) * prog.n_r, v=(0,) * prog.n_lam)


def _same_domain(a, b) -> None:
    if a.cm != b.cm or a.cover != b.cover:
        raise DomainMismatch("operands live over different crossed modules or covers")


def apply_coboundary(c: Cocycle, cb: Coboundary) -> Cocycle:
    """Transform c by (r, v); the result is validated before returning."""
    _same_domain(c, cb)
    prog = program_for(c.cm, c.cover)
    flat = kernels.apply_tables(prog, c.flat(), cb.r, cb.v)
    return validate_cocycle(c.cm, c.cover, flat[:prog.n_lam], flat[prog.n_lam:])


def coboundary_relates(c: Cocycle, c2: Cocycle, cb: Coboundary) -> bool:
    _same_domain(c, c2)
    _same_domain(c, cb)
    prog = program_for(c.cm, c.cover)
    return kernels.apply_tables(prog, c.flat(), cb.r, cb.v) == c2.flat()


def _check_bound(size: int, max_size: int | None) -> None:
    bound = MAX_SEARCH_DEFAULT if max_size is None else max_size
    if size > bound:
        raise SearchSpaceTooLarge(size, bound)


def enumerate_cocycles(cm: CrossedModule, cov: Cover,
                       max_size: int | None = None) -> list[Cocycle]:
    """Every valid cocycle, in lexicographic order of the flat (lam, gg) table."""
    prog = program_for(cm, cov)
    _check_bound(prog.cocycle_space, max_size)
    tables = kernels.enumerate_tables(prog)
    return [Cocycle(cm=cm, cover=cov, lam=t[:prog.n_lam], gg=t[prog.n_lam:])
            for t in tables]


def relating_coboundaries(c: Cocycle, c2: Cocycle, limit: int | None = None,
                          max_size: int | None = None) -> list[Coboundary]:
    """All coboundaries carrying c to c2, by exhaustive scan."""
    _same_domain(c, c2)
    prog = program_for(c.cm, c.cover)
    _check_bound(prog.coboundary_space, max_size)
    pairs = kernels.relating_coboundaries(prog, c.flat(), c2.flat(), limit)
    return [Coboundary(cm=c.cm, cover=c.cover, r=r, v=v) for r, v in pairs]


def h1_classes(cm: CrossedModule, cov: Cover,
               max_size: int | None = None) -> list[tuple[Cocycle, int]]:
    """Partition of all cocycles under the coboundary relation.

    Each class is reported as (lexicographically least member, class size),
    sorted by representative.  The relation is symmetrized by the orbit
    computation, so the partition is a genuine equivalence even though a
    single coboundary is directed.
    """
    prog = program_for(cm, cov)
    _check_bound(prog.cocycle_space, max_size)
    _check_bound(prog.coboundary_space, max_size)
    cocycles = enumerate_cocycles(cm, cov, max_size)
    tables = [c.flat() for c in cocycles]
    labels = kernels.orbit_labels(prog, tables)
    sizes: dict[int, int] = {}
    for root in labels:
        sizes[root] = sizes.get(root, 0) + 1
    return [(cocycles[root], sizes[root]) for root in sorted(sizes)]


def pullback_cocycle(ref: Refinement, c: Cocycle) -> Cocycle:
    """Reindex c along a refinement; the result is a cocycle on the fine cover."""
    if c.cover != ref.coarse:
        raise DomainMismatch("cocycle does not live on the coarse cover of the refinement")
    sig = ref.sigma
    prog = program_for(c.cm, c.cover)
    lam_of = dict(zip(prog.lam_slots, c.lam))
    gg_of = dict(zip(prog.gg_slots, c.gg))
    fine_prog = program_for(c.cm, ref.fine)
    lam = tuple(lam_of[(sig[i], sig[j], x)] for (i, j, x) in fine_prog.lam_slots)
    gg = tuple(gg_of[(sig[i], sig[j], sig[k], x)] for (i, j, k, x) in fine_prog.gg_slots)
    return validate_cocycle(c.cm, ref.fine, lam, gg)


def same_class_after_refinement(c1: Cocycle, c2: Cocycle, common: CommonRefinement,
                                max_size: int | None = None) -> Coboundary | None:
    """A coboundary relating the two pullbacks to the common refinement, if any."""
    if c1.cm != c2.cm:
        raise DomainMismatch("cocycles value in different crossed modules")
    if c1.cover != common.ref_u.coarse or c2.cover != common.ref_v.coarse:
        raise DomainMismatch("cocycles do not live on the two refined covers")
    p1 = pullback_cocycle(common.ref_u, c1)
    p2 = pullback_cocycle(common.ref_v, c2)
    found = relating_coboundaries(p1, p2, limit=1, max_size=max_size)
    return found[0] if found else None
