"""Pure-Python search loops; reference implementation for the compiled core.

The compiled module mirrors these functions exactly.  Keep the two in sync:
the backend parity tests compare their outputs table for table.
"""

from __future__ import annotations

from bisect import bisect_left

from ._program import CocycleProgram


def _schedule(prog: CocycleProgram):
    """Constraint rows grouped by the last assigned slot with >1 value."""
    n_lam, n_gg = prog.n_lam, prog.n_gg
    h_card = prog.h_order
    g_card = prog.g_order
    per_pos: list[list[tuple[int, int]]] = [[] for _ in range(n_lam + n_gg)]
    pre: list[tuple[int, int]] = []

    def place(kind: int, row: int, lam_positions, gg_positions) -> None:
        pos = -1
        if h_card > 1:
            for s in lam_positions:
                pos = max(pos, s)
        if g_card > 1:
            for t in gg_positions:
                pos = max(pos, n_lam + t)
        if pos < 0:
            pre.append((kind, row))
        else:
            per_pos[pos].append((kind, row))

    rel1 = prog.rel1.tolist()
    rel2 = prog.rel2.tolist()
    norm = prog.norm.tolist()
    for r, (a, b, c, d) in enumerate(rel1):
        place(0, r, (a, b, c), (d,))
    for r, (d1, d2, a, d3, d4) in enumerate(rel2):
        place(1, r, (a,), (d1, d2, d3, d4))
    for r, d in enumerate(norm):
        place(2, r, (), (d,))
    return per_pos, pre, rel1, rel2, norm


def _check(kind: int, row, vals, n_lam, h_mul, g_mul, rho, act, h_order, g_order) -> bool:
    if kind == 0:
        a, b, c, d = row
        return (h_mul[rho[vals[n_lam + d]] * h_order + vals[c]]
                == h_mul[vals[a] * h_order + vals[b]])
    if kind == 1:
        d1, d2, a, d3, d4 = row
        lhs = g_mul[vals[n_lam + d1] * g_order + vals[n_lam + d2]]
        rhs = g_mul[act[vals[a] * g_order + vals[n_lam + d3]] * g_order + vals[n_lam + d4]]
        return lhs == rhs
    return vals[n_lam + row] == 0


def enumerate_tables(prog: CocycleProgram) -> list[tuple[int, ...]]:
    """All flat (lam, gg) vectors satisfying the relations, in lex order."""
    n_lam, n_gg = prog.n_lam, prog.n_gg
    n = n_lam + n_gg
    h_order, g_order = prog.h_order, prog.g_order
    h_mul = prog.h_mul.tolist()
    g_mul = prog.g_mul.tolist()
    rho = prog.rho.tolist()
    act = prog.act.tolist()
    per_pos, pre, rel1, rel2, norm = _schedule(prog)
    rows = (rel1, rel2, norm)

    vals = [0] * n
    for kind, r in pre:
        if not _check(kind, rows[kind][r], vals, n_lam, h_mul, g_mul, rho, act,
                      h_order, g_order):
            return []
    cards = [h_order] * n_lam + [g_order] * n_gg
    found: list[tuple[int, ...]] = []
    if n == 0:
        return [()]

    def ok_at(pos: int) -> bool:
        for kind, r in per_pos[pos]:
            if not _check(kind, rows[kind][r], vals, n_lam, h_mul, g_mul, rho, act,
                          h_order, g_order):
                return False
        return True

    pos = 0
    vals[0] = -1
    while pos >= 0:
        vals[pos] += 1
        if vals[pos] >= cards[pos]:
            vals[pos] = 0
            pos -= 1
            continue
        if not ok_at(pos):
            continue
        if pos == n - 1:
            found.append(tuple(vals))
            continue
        pos += 1
        vals[pos] = -1
    return found


def apply_tables(prog: CocycleProgram, table, r, v) -> tuple[int, ...]:
    """Transform one flat cocycle vector by the coboundary pair (r, v)."""
    n_lam, n_gg = prog.n_lam, prog.n_gg
    h_order, g_order = prog.h_order, prog.g_order
    h_mul, h_inv = prog.h_mul.tolist(), prog.h_inv.tolist()
    g_mul, g_inv = prog.g_mul.tolist(), prog.g_inv.tolist()
    rho, act = prog.rho.tolist(), prog.act.tolist()
    lam_r_i, lam_r_j = prog.lam_r_i.tolist(), prog.lam_r_j.tolist()
    gg_v_jk, gg_v_ij = prog.gg_v_jk.tolist(), prog.gg_v_ij.tolist()
    gg_v_ik, gg_r_i = prog.gg_v_ik.tolist(), prog.gg_r_i.tolist()
    gg_lam_ij = prog.gg_lam_ij.tolist()

    out = [0] * (n_lam + n_gg)
    for s in range(n_lam):
        t = h_mul[rho[v[s]] * h_order + r[lam_r_i[s]]]
        t = h_mul[t * h_order + table[s]]
        out[s] = h_mul[t * h_order + h_inv[r[lam_r_j[s]]]]
    for t_ in range(n_gg):
        lam2 = out[gg_lam_ij[t_]]
        val = act[lam2 * g_order + v[gg_v_jk[t_]]]
        val = g_mul[val * g_order + v[gg_v_ij[t_]]]
        val = g_mul[val * g_order + act[r[gg_r_i[t_]] * g_order + table[n_lam + t_]]]
        out[n_lam + t_] = g_mul[val * g_order + g_inv[v[gg_v_ik[t_]]]]
    return tuple(out)


def _coboundaries(prog: CocycleProgram):
    n_r, n_v = prog.n_r, prog.n_lam
    h_order, g_order = prog.h_order, prog.g_order
    r = [0] * n_r
    v = [0] * n_v
    while True:
        yield tuple(r), tuple(v)
        pos = n_r + n_v - 1
        while pos >= 0:
            if pos >= n_r:
                v[pos - n_r] += 1
                if v[pos - n_r] < g_order:
                    break
                v[pos - n_r] = 0
            else:
                r[pos] += 1
                if r[pos] < h_order:
                    break
                r[pos] = 0
            pos -= 1
        if pos < 0:
            return


def orbit_labels(prog: CocycleProgram, tables: list[tuple[int, ...]]) -> list[int]:
    """Smallest index reachable from each table under all coboundaries."""
    index = {t: i for i, t in enumerate(tables)}
    parent = list(range(len(tables)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri == rj:
            return
        if ri > rj:
            ri, rj = rj, ri
        parent[rj] = ri

    for r, v in _coboundaries(prog):
        for i, t in enumerate(tables):
            image = apply_tables(prog, t, r, v)
            j = index.get(image)
            if j is not None:
                union(i, j)
    return [find(i) for i in range(len(tables))]


def relating_coboundaries(prog: CocycleProgram, t1, t2, limit=None):
    """Coboundary pairs (r, v) carrying t1 to t2, in odometer order."""
    t1 = tuple(t1)
    t2 = tuple(t2)
    out = []
    for r, v in _coboundaries(prog):
        if apply_tables(prog, t1, r, v) == t2:
            out.append((r, v))
            if limit is not None and len(out) >= limit:
                return out
    return out


def locate(tables: list[tuple[int, ...]], row: tuple[int, ...]) -> int:
    """Index of row in a lex-sorted table list, or -1."""
    i = bisect_left(tables, row)
    if i < len(tables) and tables[i] == row:
        return i
    return -1
