"""Crossed modules of finite groups and the associated strict 2-group arrows.

A crossed module is a pair of groups G, H with a hom rho: G -> H and a left
H-action on G by automorphisms, subject to the two Peiffer identities.  The
action is stored as a full |H| x |G| lookup table so that downstream formula
evaluation is a plain table read.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    IndexOutOfRange,
    NotAnAction,
    NotComposable,
    Peiffer1Violation,
    Peiffer2Violation,
)
from .fingroup import FiniteGroup, GroupHom, automorphism_group, check_hom, group_hom


@dataclass(frozen=True)
class CrossedModule:
    G: FiniteGroup
    H: FiniteGroup
    rho: GroupHom
    act: tuple[tuple[int, ...], ...]

    @property
    def name(self) -> str:
        return f"{self.G.name}->{self.H.name}"

    def apply(self, h: int, g: int) -> int:
        if not (0 <= h < self.H.order and 0 <= g < self.G.order):
            raise IndexOutOfRange(f"act({h}, {g}) in {self.name}")
        return self.act[h][g]


def act(cm: CrossedModule, h: int, g: int) -> int:
    return cm.apply(h, g)


def validate_crossed_module(G: FiniteGroup, H: FiniteGroup, rho, act_table) -> CrossedModule:
    """Check hom, action and both Peiffer identities; first failure wins."""
    rho_hom = rho if isinstance(rho, GroupHom) else group_hom(G, H, rho)
    if rho_hom.source != G or rho_hom.target != H:
        raise NotAnAction("rho does not connect the two given groups")
    tbl = tuple(tuple(int(v) for v in row) for row in act_table)
    if len(tbl) != H.order or any(len(row) != G.order for row in tbl):
        raise NotAnAction(f"action table is not {H.order}x{G.order}")
    for h, row in enumerate(tbl):
        res = check_hom(row, G, G)
        if not res:
            raise NotAnAction(f"act[{h}] is not a homomorphism ({res.reason} at {res.witness})")
        if len(set(row)) != G.order:
            raise NotAnAction(f"act[{h}] is not bijective")
    for g in G.elements():
        if tbl[0][g] != g:
            raise NotAnAction(f"act[0][{g}] = {tbl[0][g]}, identity must act trivially")
    for h1 in H.elements():
        for h2 in H.elements():
            h12 = H.table[h1][h2]
            for g in G.elements():
                if tbl[h12][g] != tbl[h1][tbl[h2][g]]:
                    raise NotAnAction(f"left-action law fails at (h1={h1}, h2={h2}, g={g})")
    rm = rho_hom.map
    for h in H.elements():
        hi = H.inverse[h]
        for g in G.elements():
            if rm[tbl[h][g]] != H.table[H.table[h][rm[g]]][hi]:
                raise Peiffer1Violation(h, g)
    for g in G.elements():
        gi = G.inverse[g]
        for g2 in G.elements():
            if tbl[rm[g]][g2] != G.table[G.table[g][g2]][gi]:
                raise Peiffer2Violation(g, g2)
    return CrossedModule(G=G, H=H, rho=rho_hom, act=tbl)


def inner_xmod(G: FiniteGroup) -> CrossedModule:
    """The crossed module G -> Aut(G): rho is conjugation, the action tautological."""
    A = automorphism_group(G)
    rho = [A.index_of(G.conjugation(g)) for g in G.elements()]
    act_table = [phi.map for phi in A.elements]
    return validate_crossed_module(G, A.group, rho, act_table)


@dataclass(frozen=True)
class TwoGroupArrow:
    h1: int
    g: int
    h2: int


def two_group_arrow(cm: CrossedModule, h1: int, g: int, h2: int) -> TwoGroupArrow:
    if cm.H.table[cm.rho.map[g]][h2] != h1:
        raise NotComposable(f"arrow constraint h1 = rho(g)*h2 fails at ({h1}, {g}, {h2})")
    return TwoGroupArrow(h1, g, h2)


def two_group_vcomp(cm: CrossedModule, a: TwoGroupArrow, b: TwoGroupArrow) -> TwoGroupArrow:
    if a.h2 != b.h1:
        raise NotComposable(f"vertical composition needs {a.h2} == {b.h1}")
    return two_group_arrow(cm, a.h1, cm.G.table[a.g][b.g], b.h2)


def two_group_hcomp(cm: CrossedModule, a: TwoGroupArrow, b: TwoGroupArrow) -> TwoGroupArrow:
    g = cm.G.table[a.g][cm.act[a.h2][b.g]]
    return two_group_arrow(cm, cm.H.table[a.h1][b.h1], g, cm.H.table[a.h2][b.h2])
