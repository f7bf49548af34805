"""Independent brute-force oracles.

Everything here recomputes results from first principles with its own loops,
deliberately avoiding the library's validators, slot layouts and search
kernels, so the main code paths can be checked against a second opinion.
"""

from __future__ import annotations

import itertools


def naive_is_group(order, table) -> bool:
    if len(table) != order or any(len(row) != order for row in table):
        return False
    for row in table:
        for v in row:
            if not 0 <= v < order:
                return False
    for a in range(order):
        if table[0][a] != a or table[a][0] != a:
            return False
    for a in range(order):
        if sorted(table[a]) != list(range(order)):
            return False
        if sorted(table[b][a] for b in range(order)) != list(range(order)):
            return False
    for a in range(order):
        for b in range(order):
            for c in range(order):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    return False
    for a in range(order):
        if not any(table[a][b] == 0 and table[b][a] == 0 for b in range(order)):
            return False
    return True


def overlap(cov, *indices):
    pts = set(range(cov.base_size))
    for i in indices:
        pts &= set(cov.sets[i])
    return sorted(pts)


def _domains(cm, cov):
    n = cov.n_sets
    lam_keys = [(i, j, x) for i in range(n) for j in range(n) for x in overlap(cov, i, j)]
    gg_keys = [(i, j, k, x) for i in range(n) for j in range(n) for k in range(n)
               for x in overlap(cov, i, j, k)]
    r_keys = [(i, x) for i in range(n) for x in cov.sets[i]]
    return lam_keys, gg_keys, r_keys


def naive_is_cocycle(cm, cov, lam, gg) -> bool:
    H, G = cm.H, cm.G
    rho = cm.rho.map
    n = cov.n_sets
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for x in overlap(cov, i, j, k):
                    lhs = H.table[rho[gg[(i, j, k, x)]]][lam[(i, k, x)]]
                    if lhs != H.table[lam[(i, j, x)]][lam[(j, k, x)]]:
                        return False
                for l in range(n):
                    for x in overlap(cov, i, j, k, l):
                        lhs = G.table[gg[(i, j, k, x)]][gg[(i, k, l, x)]]
                        rhs = G.table[cm.act[lam[(i, j, x)]][gg[(j, k, l, x)]]][gg[(i, j, l, x)]]
                        if lhs != rhs:
                            return False
    for i in range(n):
        for j in range(n):
            for x in overlap(cov, i, j):
                if gg[(i, i, j, x)] != 0:
                    return False
    return True


def naive_cocycles(cm, cov):
    """Scan every candidate table pair; the definitive census."""
    lam_keys, gg_keys, _ = _domains(cm, cov)
    found = []
    for lam_vals in itertools.product(range(cm.H.order), repeat=len(lam_keys)):
        lam = dict(zip(lam_keys, lam_vals))
        for gg_vals in itertools.product(range(cm.G.order), repeat=len(gg_keys)):
            gg = dict(zip(gg_keys, gg_vals))
            if naive_is_cocycle(cm, cov, lam, gg):
                found.append((lam_vals, gg_vals))
    return found


def naive_apply(cm, cov, lam, gg, r, v):
    H, G = cm.H, cm.G
    rho = cm.rho.map
    lam2 = {}
    for (i, j, x) in lam:
        t = H.table[rho[v[(i, j, x)]]][r[(i, x)]]
        t = H.table[t][lam[(i, j, x)]]
        lam2[(i, j, x)] = H.table[t][H.inverse[r[(j, x)]]]
    gg2 = {}
    for (i, j, k, x) in gg:
        val = cm.act[lam2[(i, j, x)]][v[(j, k, x)]]
        val = G.table[val][v[(i, j, x)]]
        val = G.table[val][cm.act[r[(i, x)]][gg[(i, j, k, x)]]]
        gg2[(i, j, k, x)] = G.table[val][G.inverse[v[(i, k, x)]]]
    return lam2, gg2


def naive_coboundaries(cm, cov):
    lam_keys, _, r_keys = _domains(cm, cov)
    for r_vals in itertools.product(range(cm.H.order), repeat=len(r_keys)):
        for v_vals in itertools.product(range(cm.G.order), repeat=len(lam_keys)):
            yield dict(zip(r_keys, r_vals)), dict(zip(lam_keys, v_vals))


def naive_class_count(cm, cov) -> int:
    """Partition the census by the symmetrized coboundary relation."""
    lam_keys, gg_keys, _ = _domains(cm, cov)
    cocycles = naive_cocycles(cm, cov)
    index = {c: i for i, c in enumerate(cocycles)}
    parent = list(range(len(cocycles)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for r, v in naive_coboundaries(cm, cov):
        for c_idx, (lam_vals, gg_vals) in enumerate(cocycles):
            lam = dict(zip(lam_keys, lam_vals))
            gg = dict(zip(gg_keys, gg_vals))
            lam2, gg2 = naive_apply(cm, cov, lam, gg, r, v)
            image = (tuple(lam2[k] for k in lam_keys), tuple(gg2[k] for k in gg_keys))
            j = index.get(image)
            if j is not None:
                a, b = find(c_idx), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    return len({find(i) for i in range(len(cocycles))})


def naive_groupoid_axioms(gpd) -> bool:
    """Re-check unit, associativity and inverse laws with plain loops."""
    n = len(gpd.arrows)
    for a in range(n):
        u_s, u_t = gpd.unit[gpd.src[a]], gpd.unit[gpd.tgt[a]]
        if gpd.prod[(u_s, a)] != a or gpd.prod[(a, u_t)] != a:
            return False
    for a in range(n):
        for b in range(n):
            if gpd.tgt[a] != gpd.src[b]:
                continue
            ab = gpd.prod[(a, b)]
            for c in range(n):
                if gpd.tgt[b] == gpd.src[c]:
                    if gpd.prod[(ab, c)] != gpd.prod[(a, gpd.prod[(b, c)])]:
                        return False
    for a in range(n):
        ai = gpd.inv[a]
        if gpd.prod[(a, ai)] != gpd.unit[gpd.src[a]]:
            return False
        if gpd.prod[(ai, a)] != gpd.unit[gpd.tgt[a]]:
            return False
    return True


def _fiber_bijections(groups):
    """All products of per-fiber bijections, as tuples of dicts."""
    per_fiber = []
    for src_elems, dst_elems in groups:
        if len(src_elems) != len(dst_elems):
            return
        per_fiber.append([dict(zip(src_elems, perm))
                          for perm in itertools.permutations(dst_elems)])
    yield from itertools.product(*per_fiber)


def naive_ext_isos(ext1, ext2):
    """Every isomorphism between two extensions of the same Čech groupoid.

    Candidates are all src/tgt-fiber-preserving bijections on arrows paired
    with all fiber-preserving bijections on bundle elements; each candidate is
    checked against the morphism laws directly.
    """
    base = ext1.base
    if ext2.base != base:
        return []
    arrow_groups = []
    for a in range(len(base.arrows)):
        pre1 = [r for r in range(len(ext1.R.arrows)) if ext1.phi[r] == a]
        pre2 = [r for r in range(len(ext2.R.arrows)) if ext2.phi[r] == a]
        arrow_groups.append((pre1, pre2))
    bundle_groups = []
    for m in range(len(base.objects)):
        f1 = [p for p in range(len(ext1.bundle.total)) if ext1.bundle.proj[p] == m]
        f2 = [p for p in range(len(ext2.bundle.total)) if ext2.bundle.proj[p] == m]
        bundle_groups.append((f1, f2))
    found = []
    H = ext1.cm.H
    G = ext1.cm.G
    for arrow_parts in _fiber_bijections(arrow_groups):
        fr = {}
        for part in arrow_parts:
            fr.update(part)
        if any(fr[ext1.R.prod[(a, b)]] != ext2.R.prod[(fr[a], fr[b])]
               for (a, b) in ext1.R.prod):
            continue
        for bundle_parts in _fiber_bijections(bundle_groups):
            fp = {}
            for part in bundle_parts:
                fp.update(part)
            ok = True
            for (a, p) in ext1.bundle.gact:
                for h in H.elements():
                    lhs = fp[ext1.bundle.gact[(a, ext1.bundle.hact[p][h])]]
                    rhs = ext2.bundle.gact[(fr[a], ext2.bundle.hact[fp[p]][h])]
                    if lhs != rhs:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                for p in range(len(ext1.bundle.total)):
                    for g in G.elements():
                        if ext2.chi[fp[p]].iso[g] != fr[ext1.chi[p].iso[g]]:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                found.append((dict(fr), dict(fp)))
    return found
