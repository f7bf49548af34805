# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled search loops; mirrors _kernels_py function for function."""

import numpy as np


def _schedule_arrays(prog):
    # positions of constraint checks, grouped by last assigned wide slot
    n_lam = prog.n_lam
    n = n_lam + prog.n_gg
    h_card = prog.h_order
    g_card = prog.g_order
    per_pos = [[] for _ in range(n)]
    pre = []

    def place(kind, row, lam_positions, gg_positions):
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

    for r, (a, b, c, d) in enumerate(prog.rel1.tolist()):
        place(0, r, (a, b, c), (d,))
    for r, (d1, d2, a, d3, d4) in enumerate(prog.rel2.tolist()):
        place(1, r, (a,), (d1, d2, d3, d4))
    for r, d in enumerate(prog.norm.tolist()):
        place(2, r, (), (d,))

    counts = [len(per_pos[p]) for p in range(n)]
    start = np.zeros(n + 1, dtype=np.int32)
    for p in range(n):
        start[p + 1] = start[p] + counts[p]
    kinds = np.zeros(int(start[n]), dtype=np.int32)
    rows = np.zeros(int(start[n]), dtype=np.int32)
    k = 0
    for p in range(n):
        for kind, row in per_pos[p]:
            kinds[k] = kind
            rows[k] = row
            k += 1
    return start, kinds, rows, pre


cdef inline bint _check_c(int kind, int row, int* vals, int n_lam,
                          const int[::1] h_mul, const int[::1] g_mul,
                          const int[::1] rho, const int[::1] act,
                          int h_order, int g_order,
                          const int[:, ::1] rel1, const int[:, ::1] rel2,
                          const int[::1] norm) noexcept:
    cdef int a, b, c, d, d1, d2, d3, d4, lhs, rhs
    if kind == 0:
        a = rel1[row, 0]; b = rel1[row, 1]; c = rel1[row, 2]; d = rel1[row, 3]
        return (h_mul[rho[vals[n_lam + d]] * h_order + vals[c]]
                == h_mul[vals[a] * h_order + vals[b]])
    if kind == 1:
        d1 = rel2[row, 0]; d2 = rel2[row, 1]; a = rel2[row, 2]
        d3 = rel2[row, 3]; d4 = rel2[row, 4]
        lhs = g_mul[vals[n_lam + d1] * g_order + vals[n_lam + d2]]
        rhs = g_mul[act[vals[a] * g_order + vals[n_lam + d3]] * g_order
                    + vals[n_lam + d4]]
        return lhs == rhs
    return vals[n_lam + norm[row]] == 0


def enumerate_tables(prog):
    """All flat (lam, gg) vectors satisfying the relations, in lex order."""
    cdef int n_lam = prog.n_lam
    cdef int n_gg = prog.n_gg
    cdef int n = n_lam + n_gg
    cdef int h_order = prog.h_order
    cdef int g_order = prog.g_order
    cdef const int[::1] h_mul = prog.h_mul
    cdef const int[::1] g_mul = prog.g_mul
    cdef const int[::1] rho = prog.rho
    cdef const int[::1] act = prog.act
    cdef const int[:, ::1] rel1 = prog.rel1
    cdef const int[:, ::1] rel2 = prog.rel2
    cdef const int[::1] norm = prog.norm

    start_np, kinds_np, rows_np, pre = _schedule_arrays(prog)
    cdef const int[::1] start = start_np
    cdef const int[::1] kinds = kinds_np
    cdef const int[::1] rows = rows_np

    vals_np = np.zeros(max(n, 1), dtype=np.int32)
    cdef int[::1] vals_view = vals_np
    cdef int* vals = &vals_view[0]

    for kind, r in pre:
        if not _check_c(kind, r, vals, n_lam, h_mul, g_mul, rho, act,
                        h_order, g_order, rel1, rel2, norm):
            return []
    if n == 0:
        return [()]

    cards_np = np.asarray([h_order] * n_lam + [g_order] * n_gg, dtype=np.int32)
    cdef const int[::1] cards = cards_np

    found = []
    cdef int pos = 0
    cdef int k
    cdef bint ok
    vals[0] = -1
    while pos >= 0:
        vals[pos] += 1
        if vals[pos] >= cards[pos]:
            vals[pos] = 0
            pos -= 1
            continue
        ok = True
        for k in range(start[pos], start[pos + 1]):
            if not _check_c(kinds[k], rows[k], vals, n_lam, h_mul, g_mul, rho, act,
                            h_order, g_order, rel1, rel2, norm):
                ok = False
                break
        if not ok:
            continue
        if pos == n - 1:
            found.append(tuple([vals[i] for i in range(n)]))
            continue
        pos += 1
        vals[pos] = -1
    return found


cdef inline void _apply_c(int n_lam, int n_gg, int h_order, int g_order,
                          const int[::1] h_mul, const int[::1] h_inv,
                          const int[::1] g_mul, const int[::1] g_inv,
                          const int[::1] rho, const int[::1] act,
                          const int[::1] lam_r_i, const int[::1] lam_r_j,
                          const int[::1] gg_v_jk, const int[::1] gg_v_ij,
                          const int[::1] gg_v_ik, const int[::1] gg_r_i,
                          const int[::1] gg_lam_ij,
                          const int* table, const int* r, const int* v,
                          int* out) noexcept:
    cdef int s, t_, tmp, lam2, val
    for s in range(n_lam):
        tmp = h_mul[rho[v[s]] * h_order + r[lam_r_i[s]]]
        tmp = h_mul[tmp * h_order + table[s]]
        out[s] = h_mul[tmp * h_order + h_inv[r[lam_r_j[s]]]]
    for t_ in range(n_gg):
        lam2 = out[gg_lam_ij[t_]]
        val = act[lam2 * g_order + v[gg_v_jk[t_]]]
        val = g_mul[val * g_order + v[gg_v_ij[t_]]]
        val = g_mul[val * g_order + act[r[gg_r_i[t_]] * g_order + table[n_lam + t_]]]
        out[n_lam + t_] = g_mul[val * g_order + g_inv[v[gg_v_ik[t_]]]]


def apply_tables(prog, table, r, v):
    """Transform one flat cocycle vector by the coboundary pair (r, v)."""
    cdef int n_lam = prog.n_lam
    cdef int n_gg = prog.n_gg
    cdef int n = n_lam + n_gg
    t_np = np.asarray(table, dtype=np.int32).reshape(max(n, 1))[:n].copy() \
        if n else np.zeros(1, dtype=np.int32)
    r_np = np.asarray(list(r) + [0], dtype=np.int32)
    v_np = np.asarray(list(v) + [0], dtype=np.int32)
    out_np = np.zeros(max(n, 1), dtype=np.int32)
    cdef int[::1] t_view = t_np
    cdef int[::1] r_view = r_np
    cdef int[::1] v_view = v_np
    cdef int[::1] out_view = out_np
    _apply_c(n_lam, n_gg, prog.h_order, prog.g_order,
             prog.h_mul, prog.h_inv, prog.g_mul, prog.g_inv, prog.rho, prog.act,
             prog.lam_r_i, prog.lam_r_j, prog.gg_v_jk, prog.gg_v_ij,
             prog.gg_v_ik, prog.gg_r_i, prog.gg_lam_ij,
             &t_view[0], &r_view[0], &v_view[0], &out_view[0])
    return tuple(int(out_view[i]) for i in range(n))


cdef inline bint _next_cb(int* r, int* v, int n_r, int n_v,
                          int h_order, int g_order) noexcept:
    cdef int pos = n_r + n_v - 1
    while pos >= 0:
        if pos >= n_r:
            v[pos - n_r] += 1
            if v[pos - n_r] < g_order:
                return True
            v[pos - n_r] = 0
        else:
            r[pos] += 1
            if r[pos] < h_order:
                return True
            r[pos] = 0
        pos -= 1
    return False


cdef int _locate_c(const int[:, ::1] tables, const int* row, int n) noexcept:
    cdef int lo = 0
    cdef int hi = tables.shape[0]
    cdef int mid, i, cmp
    while lo < hi:
        mid = (lo + hi) // 2
        cmp = 0
        for i in range(n):
            if tables[mid, i] < row[i]:
                cmp = -1
                break
            if tables[mid, i] > row[i]:
                cmp = 1
                break
        if cmp < 0:
            lo = mid + 1
        else:
            hi = mid
    if lo < tables.shape[0]:
        cmp = 0
        for i in range(n):
            if tables[lo, i] != row[i]:
                cmp = 1
                break
        if cmp == 0:
            return lo
    return -1


cdef int _find_root(int* parent, int i) noexcept:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def orbit_labels(prog, tables):
    """Smallest index reachable from each table under all coboundaries."""
    cdef int n_lam = prog.n_lam
    cdef int n_gg = prog.n_gg
    cdef int n = n_lam + n_gg
    cdef int n_r = prog.n_r
    cdef int h_order = prog.h_order
    cdef int g_order = prog.g_order
    n_c = len(tables)
    if n_c == 0:
        return []
    tab_np = np.asarray(tables, dtype=np.int32).reshape(n_c, n) \
        if n else np.zeros((n_c, 0), dtype=np.int32)
    cdef const int[:, ::1] tab = tab_np
    r_np = np.zeros(max(n_r, 1), dtype=np.int32)
    v_np = np.zeros(max(n_lam, 1), dtype=np.int32)
    out_np = np.zeros(max(n, 1), dtype=np.int32)
    row_np = np.zeros(max(n, 1), dtype=np.int32)
    parent_np = np.arange(n_c, dtype=np.int32)
    cdef int[::1] r = r_np
    cdef int[::1] v = v_np
    cdef int[::1] out = out_np
    cdef int[::1] row = row_np
    cdef int[::1] parent = parent_np
    cdef const int[::1] h_mul = prog.h_mul
    cdef const int[::1] h_inv = prog.h_inv
    cdef const int[::1] g_mul = prog.g_mul
    cdef const int[::1] g_inv = prog.g_inv
    cdef const int[::1] rho = prog.rho
    cdef const int[::1] act = prog.act
    cdef const int[::1] lam_r_i = prog.lam_r_i
    cdef const int[::1] lam_r_j = prog.lam_r_j
    cdef const int[::1] gg_v_jk = prog.gg_v_jk
    cdef const int[::1] gg_v_ij = prog.gg_v_ij
    cdef const int[::1] gg_v_ik = prog.gg_v_ik
    cdef const int[::1] gg_r_i = prog.gg_r_i
    cdef const int[::1] gg_lam_ij = prog.gg_lam_ij

    cdef int i, j, k, ri, rj
    cdef bint more = True
    while more:
        for i in range(n_c):
            for k in range(n):
                row[k] = tab[i, k]
            _apply_c(n_lam, n_gg, h_order, g_order, h_mul, h_inv, g_mul, g_inv,
                     rho, act, lam_r_i, lam_r_j, gg_v_jk, gg_v_ij, gg_v_ik,
                     gg_r_i, gg_lam_ij, &row[0], &r[0], &v[0], &out[0])
            j = _locate_c(tab, &out[0], n)
            if j >= 0:
                ri = _find_root(&parent[0], i)
                rj = _find_root(&parent[0], j)
                if ri != rj:
                    if ri > rj:
                        ri, rj = rj, ri
                    parent[rj] = ri
        more = _next_cb(&r[0], &v[0], n_r, n_lam, h_order, g_order)
    return [int(_find_root(&parent[0], i)) for i in range(n_c)]


def relating_coboundaries(prog, t1, t2, limit=None):
    """Coboundary pairs (r, v) carrying t1 to t2, in odometer order."""
    cdef int n_lam = prog.n_lam
    cdef int n_gg = prog.n_gg
    cdef int n = n_lam + n_gg
    cdef int n_r = prog.n_r
    cdef int h_order = prog.h_order
    cdef int g_order = prog.g_order
    t1_np = np.asarray(list(t1) + [0], dtype=np.int32)
    t2_np = np.asarray(list(t2) + [0], dtype=np.int32)
    r_np = np.zeros(max(n_r, 1), dtype=np.int32)
    v_np = np.zeros(max(n_lam, 1), dtype=np.int32)
    out_np = np.zeros(max(n, 1), dtype=np.int32)
    cdef const int[::1] t1v = t1_np
    cdef const int[::1] t2v = t2_np
    cdef int[::1] r = r_np
    cdef int[::1] v = v_np
    cdef int[::1] out = out_np
    cdef const int[::1] h_mul = prog.h_mul
    cdef const int[::1] h_inv = prog.h_inv
    cdef const int[::1] g_mul = prog.g_mul
    cdef const int[::1] g_inv = prog.g_inv
    cdef const int[::1] rho = prog.rho
    cdef const int[::1] act = prog.act
    cdef const int[::1] lam_r_i = prog.lam_r_i
    cdef const int[::1] lam_r_j = prog.lam_r_j
    cdef const int[::1] gg_v_jk = prog.gg_v_jk
    cdef const int[::1] gg_v_ij = prog.gg_v_ij
    cdef const int[::1] gg_v_ik = prog.gg_v_ik
    cdef const int[::1] gg_r_i = prog.gg_r_i
    cdef const int[::1] gg_lam_ij = prog.gg_lam_ij

    cdef int k
    cdef bint match, more = True
    out_list = []
    cap = -1 if limit is None else int(limit)
    while more:
        _apply_c(n_lam, n_gg, h_order, g_order, h_mul, h_inv, g_mul, g_inv,
                 rho, act, lam_r_i, lam_r_j, gg_v_jk, gg_v_ij, gg_v_ik,
                 gg_r_i, gg_lam_ij, &t1v[0], &r[0], &v[0], &out[0])
        match = True
        for k in range(n):
            if out[k] != t2v[k]:
                match = False
                break
        if match:
            out_list.append((tuple(int(r[k]) for k in range(n_r)),
                             tuple(int(v[k]) for k in range(n_lam))))
            if cap >= 0 and len(out_list) >= cap:
                return out_list
        more = _next_cb(&r[0], &v[0], n_r, n_lam, h_order, g_order)
    return out_list
