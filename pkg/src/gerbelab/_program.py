"""Flattened index form of a cocycle problem, shared by both search backends.

A table pair (lam, gg) is stored as one flat integer vector: first the values
of lam on the double-overlap slots, then the values of gg on the triple-overlap
slots, both slot lists sorted lexicographically.  The relation rows below
reference slot positions only, so the inner search loops never touch labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cech import Cover
from .xmod import CrossedModule


@dataclass(frozen=True, eq=False)
class CocycleProgram:
    h_order: int
    g_order: int
    n_lam: int
    n_gg: int
    n_r: int
    lam_slots: tuple[tuple[int, int, int], ...]
    gg_slots: tuple[tuple[int, int, int, int], ...]
    r_slots: tuple[tuple[int, int], ...]
    h_mul: np.ndarray
    h_inv: np.ndarray
    g_mul: np.ndarray
    g_inv: np.ndarray
    rho: np.ndarray
    act: np.ndarray
    rel1: np.ndarray      # rows (lam_ij, lam_jk, lam_ik, gg_ijk)
    rel2: np.ndarray      # rows (gg_ijk, gg_ikl, lam_ij, gg_jkl, gg_ijl)
    norm: np.ndarray      # gg slots that must hold the identity
    lam_r_i: np.ndarray
    lam_r_j: np.ndarray
    gg_v_jk: np.ndarray
    gg_v_ij: np.ndarray
    gg_v_ik: np.ndarray
    gg_r_i: np.ndarray
    gg_lam_ij: np.ndarray

    @property
    def n_slots(self) -> int:
        return self.n_lam + self.n_gg

    @property
    def cocycle_space(self) -> int:
        return self.h_order ** self.n_lam * self.g_order ** self.n_gg

    @property
    def coboundary_space(self) -> int:
        return self.h_order ** self.n_r * self.g_order ** self.n_lam


def _arr(rows, width) -> np.ndarray:
    if not rows:
        return np.zeros((0, width), dtype=np.int32) if width > 1 else np.zeros(0, dtype=np.int32)
    return np.asarray(rows, dtype=np.int32)


def build_program(cm: CrossedModule, cov: Cover) -> CocycleProgram:
    n = cov.n_sets
    lam_slots = [(i, j, x) for i in range(n) for j in range(n) for x in cov.overlap(i, j)]
    gg_slots = [(i, j, k, x) for i in range(n) for j in range(n) for k in range(n)
                for x in cov.overlap(i, j, k)]
    r_slots = [(i, x) for i in range(n) for x in cov.sets[i]]
    lam_idx = {s: p for p, s in enumerate(lam_slots)}
    gg_idx = {s: p for p, s in enumerate(gg_slots)}
    r_idx = {s: p for p, s in enumerate(r_slots)}

    rel1 = []
    for (i, j, k, x) in gg_slots:
        rel1.append((lam_idx[(i, j, x)], lam_idx[(j, k, x)],
                     lam_idx[(i, k, x)], gg_idx[(i, j, k, x)]))
    rel2 = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    for x in cov.overlap(i, j, k, l):
                        rel2.append((gg_idx[(i, j, k, x)], gg_idx[(i, k, l, x)],
                                     lam_idx[(i, j, x)], gg_idx[(j, k, l, x)],
                                     gg_idx[(i, j, l, x)]))
    norm = [gg_idx[(i, i, j, x)]
            for i in range(n) for j in range(n) for x in cov.overlap(i, j)]

    return CocycleProgram(
        h_order=cm.H.order,
        g_order=cm.G.order,
        n_lam=len(lam_slots),
        n_gg=len(gg_slots),
        n_r=len(r_slots),
        lam_slots=tuple(lam_slots),
        gg_slots=tuple(gg_slots),
        r_slots=tuple(r_slots),
        h_mul=np.asarray(cm.H.table, dtype=np.int32).reshape(-1),
        h_inv=np.asarray(cm.H.inverse, dtype=np.int32),
        g_mul=np.asarray(cm.G.table, dtype=np.int32).reshape(-1),
        g_inv=np.asarray(cm.G.inverse, dtype=np.int32),
        rho=np.asarray(cm.rho.map, dtype=np.int32),
        act=np.asarray(cm.act, dtype=np.int32).reshape(-1),
        rel1=_arr(rel1, 4),
        rel2=_arr(rel2, 5),
        norm=np.asarray(norm, dtype=np.int32) if norm else np.zeros(0, dtype=np.int32),
        lam_r_i=np.asarray([r_idx[(i, x)] for (i, j, x) in lam_slots], dtype=np.int32),
        lam_r_j=np.asarray([r_idx[(j, x)] for (i, j, x) in lam_slots], dtype=np.int32),
        gg_v_jk=np.asarray([lam_idx[(j, k, x)] for (i, j, k, x) in gg_slots], dtype=np.int32),
        gg_v_ij=np.asarray([lam_idx[(i, j, x)] for (i, j, k, x) in gg_slots], dtype=np.int32),
        gg_v_ik=np.asarray([lam_idx[(i, k, x)] for (i, j, k, x) in gg_slots], dtype=np.int32),
        gg_r_i=np.asarray([r_idx[(i, x)] for (i, j, k, x) in gg_slots], dtype=np.int32),
        gg_lam_ij=np.asarray([lam_idx[(i, j, x)] for (i, j, k, x) in gg_slots], dtype=np.int32),
    )
