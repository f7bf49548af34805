"""Groupoid extensions with coefficients in a crossed module.

An extension of a base groupoid consists of a groupoid R surjecting onto the
base over the same objects (with kernel fibers isomorphic to G), a principal
H-bundle P over R, and a map chi from P into the band of the kernel satisfying

    p . rho(g) == chi(p)(g) * p          for all p in P, g in G.

Adapted extensions over a Čech groupoid carry the fixed carriers
G x ⊔U_ij and ⊔U_i x H; they are in bijection with cocycles, and their
isomorphisms are in bijection with relating coboundaries.  Both directions of
both bijections are implemented below, together with the adaptation algorithm
that rewrites an arbitrary extension of a Čech groupoid onto those carriers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .cech import FiniteGroupoid, GroupoidMorphism, cech_groupoid, cover_from_cech
from .cocycle import Cocycle, Coboundary, coboundary_relates, validate_cocycle
from .errors import (
    BundleAxiomViolation,
    ChiNotEquivariant,
    ChiRhoViolation,
    KernelFiberMismatch,
    NotAdapted,
    NotAGroupoid,
    NotASection,
    NotRelating,
    NotSurjective,
    ValidationError,
)
from .fingroup import FiniteGroup, Witnessed, enumerate_isomorphisms, group_from_table
from .xmod import CrossedModule, two_group_arrow


@dataclass(eq=True)
class PrincipalBundle:
    H: FiniteGroup
    total: tuple
    proj: tuple[int, ...]
    hact: tuple[tuple[int, ...], ...]
    gact: dict

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.total)}

    def fiber(self, m: int) -> list[int]:
        return [p for p in range(len(self.total)) if self.proj[p] == m]


def validate_principal_bundle(H: FiniteGroup, gpd: FiniteGroupoid, total, proj,
                              hact, gact) -> PrincipalBundle:
    total = tuple(total)
    proj = tuple(int(v) for v in proj)
    hact = tuple(tuple(int(v) for v in row) for row in hact)
    gact = dict(gact)
    n_p = len(total)
    if len(set(total)) != n_p:
        raise BundleAxiomViolation("duplicate bundle element labels")
    if len(proj) != n_p or any(not 0 <= m < len(gpd.objects) for m in proj):
        raise BundleAxiomViolation("projection out of range")
    if len(hact) != n_p or any(len(row) != H.order for row in hact):
        raise BundleAxiomViolation(f"H-action table is not {n_p}x{H.order}")
    for p in range(n_p):
        if hact[p][0] != p:
            raise BundleAxiomViolation(f"identity of H moves element {p}")
        for h1 in H.elements():
            if proj[hact[p][h1]] != proj[p]:
                raise BundleAxiomViolation(f"H-action moves element {p} across fibers")
            for h2 in H.elements():
                if hact[hact[p][h1]][h2] != hact[p][H.table[h1][h2]]:
                    raise BundleAxiomViolation(f"right action law fails at ({p}, {h1}, {h2})")
    for m in range(len(gpd.objects)):
        fiber = [p for p in range(n_p) if proj[p] == m]
        if not fiber:
            raise BundleAxiomViolation(f"empty fiber over object {m}")
        base = fiber[0]
        orbit = {hact[base][h] for h in H.elements()}
        if len(orbit) != H.order or orbit != set(fiber):
            raise BundleAxiomViolation(f"fiber over object {m} is not free transitive")
    admissible = {(a, p) for a in range(len(gpd.arrows)) for p in range(n_p)
                  if gpd.tgt[a] == proj[p]}
    if set(gact) != admissible:
        raise BundleAxiomViolation("groupoid action defined on the wrong pairs")
    for (a, p), q in gact.items():
        if not 0 <= q < n_p:
            raise BundleAxiomViolation(f"groupoid action value out of range at ({a}, {p})")
        if proj[q] != gpd.src[a]:
            raise BundleAxiomViolation(f"groupoid action breaks projection at ({a}, {p})")
    for p in range(n_p):
        if gact[(gpd.unit[proj[p]], p)] != p:
            raise BundleAxiomViolation(f"unit arrow moves element {p}")
    for (b, p), bp in gact.items():
        for a in range(len(gpd.arrows)):
            if gpd.tgt[a] == gpd.src[b]:
                if gact[(a, bp)] != gact[(gpd.prod[(a, b)], p)]:
                    raise BundleAxiomViolation(f"action composition fails at ({a}, {b}, {p})")
    for (a, p), ap in gact.items():
        for h in H.elements():
            if hact[ap][h] != gact[(a, hact[p][h])]:
                raise BundleAxiomViolation(f"actions do not commute at ({a}, {p}, {h})")
    return PrincipalBundle(H=H, total=total, proj=proj, hact=hact, gact=gact)


@dataclass(frozen=True, order=True)
class BandElement:
    m: int
    iso: tuple[int, ...]


@dataclass(eq=True)
class GHExtension:
    cm: CrossedModule
    base: FiniteGroupoid
    R: FiniteGroupoid
    phi: tuple[int, ...]
    bundle: PrincipalBundle
    chi: tuple[BandElement, ...]

    def kernel_arrows(self) -> list[int]:
        return [r for r in range(len(self.R.arrows))
                if self.base.is_unit_arrow(self.phi[r])]

    def kernel_fiber(self, m: int) -> list[int]:
        return [r for r in self.kernel_arrows() if self.R.src[r] == m]


def kernel_fiber_group(ext: GHExtension, m: int) -> tuple[FiniteGroup, list[int]]:
    """The kernel fiber over object m as a group; identity listed first."""
    fiber = ext.kernel_fiber(m)
    unit = ext.R.unit[m]
    elems = [unit] + sorted(r for r in fiber if r != unit)
    pos = {r: i for i, r in enumerate(elems)}
    try:
        table = [[pos[ext.R.prod[(a, b)]] for b in elems] for a in elems]
        return group_from_table(len(elems), table, f"K@{m}"), elems
    except (KeyError, ValidationError) as exc:
        raise KernelFiberMismatch(ext.R.objects[m]) from exc


def validate_gh_extension(cm: CrossedModule, base: FiniteGroupoid, R: FiniteGroupoid,
                          phi, bundle_parts, chi) -> GHExtension:
    """Assemble and check every law of an extension; first failure wins."""
    if R.objects != base.objects:
        raise NotAGroupoid("extension groupoid and base have different objects")
    phi = tuple(int(v) for v in phi)
    GroupoidMorphism(R, base, tuple(range(len(R.objects))), phi).validate()
    if set(phi) != set(range(len(base.arrows))):
        raise NotSurjective("projection to the base misses an arrow")
    if isinstance(bundle_parts, PrincipalBundle):
        bundle = validate_principal_bundle(cm.H, R, bundle_parts.total, bundle_parts.proj,
                                           bundle_parts.hact, bundle_parts.gact)
    else:
        bundle = validate_principal_bundle(cm.H, R, *bundle_parts)
    ext = GHExtension(cm=cm, base=base, R=R, phi=phi, bundle=bundle, chi=tuple(chi))
    G = cm.G
    fiber_groups = {}
    for m in range(len(R.objects)):
        K, elems = kernel_fiber_group(ext, m)
        if not enumerate_isomorphisms(G, K):
            raise KernelFiberMismatch(R.objects[m])
        fiber_groups[m] = (K, elems)
    if len(ext.chi) != len(bundle.total):
        raise ChiNotEquivariant("chi length mismatch")
    for p, b in enumerate(ext.chi):
        m = bundle.proj[p]
        if b.m != m:
            raise ChiNotEquivariant(f"chi({p}) lives over object {b.m}, bundle says {m}")
        if len(b.iso) != G.order:
            raise ChiNotEquivariant(f"chi({p}) is not defined on all of G")
        K, elems = fiber_groups[m]
        fiber_set = set(elems)
        if any(r not in fiber_set for r in b.iso):
            raise ChiNotEquivariant(f"chi({p}) leaves the kernel fiber")
        if len(set(b.iso)) != G.order or len(elems) != G.order:
            raise ChiNotEquivariant(f"chi({p}) is not bijective onto the kernel fiber")
        for g1 in G.elements():
            for g2 in G.elements():
                if ext.R.prod[(b.iso[g1], b.iso[g2])] != b.iso[G.table[g1][g2]]:
                    raise ChiNotEquivariant(f"chi({p}) is not a homomorphism at ({g1}, {g2})")
    for p in range(len(bundle.total)):
        for h in cm.H.elements():
            ph = bundle.hact[p][h]
            for g in G.elements():
                if ext.chi[ph].iso[g] != ext.chi[p].iso[cm.act[h][g]]:
                    raise ChiNotEquivariant(f"chi breaks H-equivariance at ({p}, {h}, {g})")
    for (a, p), ap in bundle.gact.items():
        ai = R.inv[a]
        for g in G.elements():
            conj = R.prod[(R.prod[(a, ext.chi[p].iso[g])], ai)]
            if ext.chi[ap].iso[g] != conj:
                raise ChiNotEquivariant(f"chi breaks groupoid equivariance at ({a}, {p})")
    rho = cm.rho.map
    for p in range(len(bundle.total)):
        for g in G.elements():
            if bundle.hact[p][rho[g]] != bundle.gact[(ext.chi[p].iso[g], p)]:
                raise ChiRhoViolation(f"p.rho(g) != chi(p)(g)*p at ({p}, {g})")
    return ext


@dataclass
class Band:
    """Band of an extension: all isomorphisms from G onto the kernel fibers."""

    ext: GHExtension
    fibers: tuple[tuple[BandElement, ...], ...]

    def aut_act(self, b: BandElement, phi_map) -> BandElement:
        return BandElement(m=b.m, iso=tuple(b.iso[phi_map[g]]
                                            for g in range(len(b.iso))))

    def groupoid_act(self, a: int, b: BandElement) -> BandElement:
        R = self.ext.R
        if R.tgt[a] != b.m:
            raise NotAGroupoid(f"arrow {a} cannot act on a band element over {b.m}")
        ai = R.inv[a]
        return BandElement(m=R.src[a],
                           iso=tuple(R.prod[(R.prod[(a, k)], ai)] for k in b.iso))


def band_of(ext: GHExtension) -> Band:
    fibers = []
    for m in range(len(ext.R.objects)):
        K, elems = kernel_fiber_group(ext, m)
        isos = enumerate_isomorphisms(ext.cm.G, K)
        members = sorted(BandElement(m=m, iso=tuple(elems[h.map[g]]
                                                    for g in ext.cm.G.elements()))
                         for h in isos)
        fibers.append(tuple(members))
    return Band(ext=ext, fibers=tuple(fibers))


def extension_from_cocycle(c: Cocycle) -> GHExtension:
    """The adapted extension with carriers G x ⊔U_ij and ⊔U_i x H."""
    cm, cov = c.cm, c.cover
    G, H = cm.G, cm.H
    rho = cm.rho.map
    base = cech_groupoid(cov)
    lam = {(i, j, x): c.lam_at(i, j, x)
           for (i, j, x) in ((i, j, x) for i in range(cov.n_sets)
                             for j in range(cov.n_sets) for x in cov.overlap(i, j))}
    gg = {(i, j, k, x): c.g_at(i, j, k, x)
          for i in range(cov.n_sets) for j in range(cov.n_sets)
          for k in range(cov.n_sets) for x in cov.overlap(i, j, k)}

    arrows = sorted((g, i, j, x) for (i, j, x) in lam for g in G.elements())
    aidx = {a: k for k, a in enumerate(arrows)}
    src = [base.obj_index[(i, x)] for (g, i, j, x) in arrows]
    tgt = [base.obj_index[(j, x)] for (g, i, j, x) in arrows]
    unit = [aidx[(0, i, i, x)] for (i, x) in base.objects]
    prod = {}
    for k, (g, i, j, x) in enumerate(arrows):
        for l, (g2, j2, k2, y) in enumerate(arrows):
            if j == j2 and x == y:
                g3 = G.table[G.table[g][cm.act[lam[(i, j, x)]][g2]]][gg[(i, j, k2, x)]]
                prod[(k, l)] = aidx[(g3, i, k2, x)]
    inv = []
    for (g, i, j, x) in arrows:
        gi = cm.act[H.inverse[lam[(i, j, x)]]][G.table[G.inverse[g]][G.inverse[gg[(i, j, i, x)]]]]
        inv.append(aidx[(gi, j, i, x)])
    R = FiniteGroupoid(base.objects, arrows, src, tgt, unit, prod, inv)
    phi = [base.arrow_index[(i, j, x)] for (g, i, j, x) in arrows]

    total = sorted((i, x, h) for (i, x) in base.objects for h in H.elements())
    pidx = {p: k for k, p in enumerate(total)}
    proj = [base.obj_index[(i, x)] for (i, x, h) in total]
    hact = [[pidx[(i, x, H.table[h][h2])] for h2 in H.elements()] for (i, x, h) in total]
    gact = {}
    for k, (g, i, j, x) in enumerate(arrows):
        for p, (j2, y, h) in enumerate(total):
            if j == j2 and x == y:
                gact[(k, p)] = pidx[(i, x, H.table[H.table[rho[g]][lam[(i, j, x)]]][h])]
    chi = [BandElement(m=base.obj_index[(i, x)],
                       iso=tuple(aidx[(cm.act[h][g], i, i, x)] for g in G.elements()))
           for (i, x, h) in total]
    return validate_gh_extension(cm, base, R, phi, (total, proj, hact, gact), chi)


def is_adapted(ext: GHExtension) -> bool:
    """Carrier-strict test for the adapted shape over a Čech base."""
    cov = cover_from_cech(ext.base)
    cm = ext.cm
    G, H = cm.G, cm.H
    base = ext.base
    overlaps = [(i, j, x) for i in range(cov.n_sets) for j in range(cov.n_sets)
                for x in cov.overlap(i, j)]
    expected_r = sorted((g, i, j, x) for (i, j, x) in overlaps for g in G.elements())
    if list(ext.R.arrows) != expected_r:
        return False
    for k, (g, i, j, x) in enumerate(ext.R.arrows):
        if ext.phi[k] != base.arrow_index[(i, j, x)]:
            return False
    expected_p = sorted((i, x, h) for (i, x) in base.objects for h in H.elements())
    if list(ext.bundle.total) != expected_p:
        return False
    pidx = ext.bundle.index
    for p, (i, x, h) in enumerate(ext.bundle.total):
        if ext.bundle.proj[p] != base.obj_index[(i, x)]:
            return False
        for h2 in H.elements():
            if ext.bundle.hact[p][h2] != pidx[(i, x, H.table[h][h2])]:
                return False
        want = tuple(ext.R.arrow_index[(cm.act[h][g], i, i, x)] for g in G.elements())
        if ext.chi[p].iso != want:
            return False
    aidx = ext.R.arrow_index
    for (i, j, x) in overlaps:
        for g in G.elements():
            for g2 in G.elements():
                lhs = ext.R.prod[(aidx[(g, i, i, x)], aidx[(g2, i, j, x)])]
                if lhs != aidx[(G.table[g][g2], i, j, x)]:
                    return False
    return True


def cocycle_from_adapted(ext: GHExtension) -> Cocycle:
    """Read the cocycle tables off an adapted extension's product and action."""
    if not is_adapted(ext):
        raise NotAdapted("extension does not carry the adapted shape")
    cov = cover_from_cech(ext.base)
    aidx = ext.R.arrow_index
    pidx = ext.bundle.index
    lam = {}
    gg = {}
    for i in range(cov.n_sets):
        for j in range(cov.n_sets):
            for x in cov.overlap(i, j):
                moved = ext.bundle.gact[(aidx[(0, i, j, x)], pidx[(j, x, 0)])]
                lam[(i, j, x)] = ext.bundle.total[moved][2]
            for k in range(cov.n_sets):
                for x in cov.overlap(i, j, k):
                    out = ext.R.prod[(aidx[(0, i, j, x)], aidx[(0, j, k, x)])]
                    gg[(i, j, k, x)] = ext.R.arrows[out][0]
    return validate_cocycle(ext.cm, cov, lam, gg)


@dataclass
class ExtIso:
    phi_r: GroupoidMorphism
    phi_p: tuple[int, ...]


def check_ext_iso(iso: ExtIso, ext1: GHExtension, ext2: GHExtension) -> Witnessed:
    """All laws of an extension isomorphism over the identity, with witness."""
    if ext1.base != ext2.base:
        return Witnessed(False, "extensions live over different bases")
    if iso.phi_r.source != ext1.R or iso.phi_r.target != ext2.R:
        return Witnessed(False, "groupoid map does not connect the two extensions")
    if iso.phi_r.obj_map != tuple(range(len(ext1.R.objects))):
        return Witnessed(False, "groupoid map is not over the identity")
    try:
        iso.phi_r.validate()
    except NotAGroupoid as exc:
        return Witnessed(False, f"groupoid map invalid: {exc}")
    if not iso.phi_r.is_bijective():
        return Witnessed(False, "groupoid map is not bijective")
    b1, b2 = ext1.bundle, ext2.bundle
    if len(iso.phi_p) != len(b1.total) or len(set(iso.phi_p)) != len(b2.total):
        return Witnessed(False, "bundle map is not a bijection")
    for p in range(len(b1.total)):
        if b2.proj[iso.phi_p[p]] != b1.proj[p]:
            return Witnessed(False, "bundle map moves fibers", (p,))
    for (a, p), ap in b1.gact.items():
        fa = iso.phi_r.arrow_map[a]
        for h in ext1.cm.H.elements():
            lhs = iso.phi_p[b1.gact[(a, b1.hact[p][h])]]
            rhs = b2.gact[(fa, b2.hact[iso.phi_p[p]][h])]
            if lhs != rhs:
                return Witnessed(False, "bundle morphism law fails", (a, p, h))
    for p in range(len(b1.total)):
        for g in ext1.cm.G.elements():
            if ext2.chi[iso.phi_p[p]].iso[g] != iso.phi_r.arrow_map[ext1.chi[p].iso[g]]:
                return Witnessed(False, "band diagram does not commute", (p, g))
    return Witnessed(True)


def validate_ext_iso(iso: ExtIso, ext1: GHExtension, ext2: GHExtension) -> ExtIso:
    res = check_ext_iso(iso, ext1, ext2)
    if not res:
        raise ValidationError(f"not an extension isomorphism: {res.reason} {res.witness or ''}")
    return iso


def iso_from_coboundary(cb: Coboundary, ext1: GHExtension, ext2: GHExtension) -> ExtIso:
    """The isomorphism (r_i(g) v_ij^{-1}, x_ij) / (x_i, r_i h) built from (r, v)."""
    c1 = cocycle_from_adapted(ext1)
    c2 = cocycle_from_adapted(ext2)
    if not coboundary_relates(c1, c2, cb):
        raise NotRelating("coboundary does not relate the two extensions' cocycles")
    cm = ext1.cm
    G, H = cm.G, cm.H
    arrow_map = []
    for (g, i, j, x) in ext1.R.arrows:
        r_i = cb.r_at(i, x)
        v_ij = cb.v_at(i, j, x)
        g2 = G.table[cm.act[r_i][g]][G.inverse[v_ij]]
        arrow_map.append(ext2.R.arrow_index[(g2, i, j, x)])
    phi_r = GroupoidMorphism(ext1.R, ext2.R, tuple(range(len(ext1.R.objects))),
                             tuple(arrow_map)).validate()
    pidx2 = ext2.bundle.index
    phi_p = tuple(pidx2[(i, x, H.table[cb.r_at(i, x)][h])]
                  for (i, x, h) in ext1.bundle.total)
    return validate_ext_iso(ExtIso(phi_r=phi_r, phi_p=phi_p), ext1, ext2)


def coboundary_from_iso(iso: ExtIso, ext1: GHExtension, ext2: GHExtension) -> Coboundary:
    """Read (r, v) off the isomorphism's values on the canonical sections."""
    c1 = cocycle_from_adapted(ext1)
    c2 = cocycle_from_adapted(ext2)
    validate_ext_iso(iso, ext1, ext2)
    cm = ext1.cm
    r = {}
    for p, (i, x, h) in enumerate(ext1.bundle.total):
        if h == 0:
            r[(i, x)] = ext2.bundle.total[iso.phi_p[p]][2]
    v = {}
    for k, (g, i, j, x) in enumerate(ext1.R.arrows):
        if g == 0:
            v[(i, j, x)] = cm.G.inverse[ext2.R.arrows[iso.phi_r.arrow_map[k]][0]]
    from .cocycle import coboundary as make_coboundary
    cb = make_coboundary(cm, c1.cover, r, v)
    if not coboundary_relates(c1, c2, cb):
        raise NotRelating("extracted coboundary does not relate the two cocycles")
    return cb


def adapt(ext: GHExtension) -> tuple[GHExtension, ExtIso]:
    """Rewrite an extension of a Čech groupoid onto the adapted carriers.

    Sections are chosen by least index per fiber; the returned isomorphism
    maps the adapted extension onto the original one.
    """
    cov = cover_from_cech(ext.base)
    cm = ext.cm
    G, H = cm.G, cm.H
    R, bundle = ext.R, ext.bundle
    base = ext.base

    sigma = {}
    for m in range(len(base.objects)):
        sigma[m] = min(p for p in range(len(bundle.total)) if bundle.proj[p] == m)
    tau = {}
    for (i, x) in base.objects:
        m = base.obj_index[(i, x)]
        hat = ext.chi[sigma[m]]
        for g in G.elements():
            tau[(g, i, i, x)] = hat.iso[g]
    for k, (i, j, x) in enumerate(base.arrows):
        if i == j:
            continue
        a = base.arrow_index[(i, j, x)]
        s1 = min(r for r in range(len(R.arrows)) if ext.phi[r] == a)
        for g in G.elements():
            tau[(g, i, j, x)] = R.prod[(tau[(g, i, i, x)], s1)]
    arrows2 = sorted(tau)
    if len(set(tau.values())) != len(R.arrows):
        raise NotAGroupoid("kernel trivialization is not bijective")
    tau_inv = {r: lab for lab, r in tau.items()}
    aidx2 = {a: k for k, a in enumerate(arrows2)}
    src2 = [base.obj_index[(i, x)] for (g, i, j, x) in arrows2]
    tgt2 = [base.obj_index[(j, x)] for (g, i, j, x) in arrows2]
    unit2 = [aidx2[(0, i, i, x)] for (i, x) in base.objects]
    prod2 = {}
    inv2 = [aidx2[tau_inv[R.inv[tau[lab]]]] for lab in arrows2]
    for k, la in enumerate(arrows2):
        for l, lb in enumerate(arrows2):
            if la[2] == lb[1] and la[3] == lb[3]:
                prod2[(k, l)] = aidx2[tau_inv[R.prod[(tau[la], tau[lb])]]]
    R2 = FiniteGroupoid(base.objects, arrows2, src2, tgt2, unit2, prod2, inv2)
    phi2 = [base.arrow_index[(i, j, x)] for (g, i, j, x) in arrows2]

    psi = {}
    for (i, x) in base.objects:
        m = base.obj_index[(i, x)]
        for h in H.elements():
            psi[(i, x, h)] = bundle.hact[sigma[m]][h]
    total2 = sorted(psi)
    if len(set(psi.values())) != len(bundle.total):
        raise NotAGroupoid("bundle trivialization is not bijective")
    psi_inv = {p: lab for lab, p in psi.items()}
    pidx2 = {p: k for k, p in enumerate(total2)}
    proj2 = [base.obj_index[(i, x)] for (i, x, h) in total2]
    hact2 = [[pidx2[(i, x, H.table[h][h2])] for h2 in H.elements()]
             for (i, x, h) in total2]
    gact2 = {}
    for k, (g, i, j, x) in enumerate(arrows2):
        for p, (j2, y, h) in enumerate(total2):
            if j == j2 and x == y:
                moved = bundle.gact[(tau[(g, i, j, x)], psi[(j, x, h)])]
                gact2[(k, p)] = pidx2[psi_inv[moved]]
    chi2 = [BandElement(m=base.obj_index[(i, x)],
                        iso=tuple(aidx2[(cm.act[h][g], i, i, x)] for g in G.elements()))
            for (i, x, h) in total2]
    ext2 = validate_gh_extension(cm, base, R2, phi2, (total2, proj2, hact2, gact2), chi2)
    if not is_adapted(ext2):
        raise NotAdapted("transported structure failed the adapted-shape check")
    phi_r = GroupoidMorphism(R2, R, tuple(range(len(base.objects))),
                             tuple(tau[lab] for lab in arrows2)).validate()
    phi_p = tuple(psi[lab] for lab in total2)
    iso = validate_ext_iso(ExtIso(phi_r=phi_r, phi_p=phi_p), ext2, ext)
    return ext2, iso


def relabel_carriers(ext: GHExtension, r_labels, p_labels) -> GHExtension:
    """Same extension with fresh carrier labels for R-arrows and P-elements."""
    r_labels = tuple(r_labels)
    p_labels = tuple(p_labels)
    order_r = sorted(range(len(r_labels)), key=lambda k: _sort_key(r_labels[k]))
    order_p = sorted(range(len(p_labels)), key=lambda k: _sort_key(p_labels[k]))
    new_of_old_r = {old: new for new, old in enumerate(order_r)}
    new_of_old_p = {old: new for new, old in enumerate(order_p)}
    R = ext.R
    arrows = [r_labels[old] for old in order_r]
    src = [R.src[old] for old in order_r]
    tgt = [R.tgt[old] for old in order_r]
    unit = [new_of_old_r[u] for u in R.unit]
    prod = {(new_of_old_r[a], new_of_old_r[b]): new_of_old_r[c]
            for (a, b), c in R.prod.items()}
    inv = [new_of_old_r[R.inv[old]] for old in order_r]
    R2 = FiniteGroupoid(R.objects, arrows, src, tgt, unit, prod, inv)
    phi2 = [ext.phi[old] for old in order_r]
    b = ext.bundle
    total2 = [p_labels[old] for old in order_p]
    proj2 = [b.proj[old] for old in order_p]
    hact2 = [[new_of_old_p[b.hact[old][h]] for h in range(ext.cm.H.order)]
             for old in order_p]
    gact2 = {(new_of_old_r[a], new_of_old_p[p]): new_of_old_p[q]
             for (a, p), q in b.gact.items()}
    chi2 = [BandElement(m=ext.chi[old].m,
                        iso=tuple(new_of_old_r[r] for r in ext.chi[old].iso))
            for old in order_p]
    return validate_gh_extension(ext.cm, ext.base, R2, phi2,
                                 (total2, proj2, hact2, gact2), chi2)


def _sort_key(label):
    if isinstance(label, tuple):
        return (1, tuple(_sort_key(v) for v in label))
    if isinstance(label, int):
        return (0, label)
    return (2, repr(label))


def relabel_base(ext: GHExtension, base_iso: GroupoidMorphism) -> GHExtension:
    """Re-express the extension over an isomorphic copy of its base groupoid."""
    if base_iso.source != ext.base or not base_iso.is_bijective():
        raise NotAGroupoid("base relabeling must be an isomorphism from the current base")
    new_base = base_iso.target
    obj_perm = base_iso.obj_map
    R = ext.R
    R2 = FiniteGroupoid(new_base.objects, R.arrows,
                        [obj_perm[s] for s in R.src], [obj_perm[t] for t in R.tgt],
                        _permute_units(R.unit, obj_perm), R.prod, R.inv)
    phi2 = [base_iso.arrow_map[a] for a in ext.phi]
    b = ext.bundle
    proj2 = [obj_perm[m] for m in b.proj]
    chi2 = [BandElement(m=obj_perm[c.m], iso=c.iso) for c in ext.chi]
    return validate_gh_extension(ext.cm, new_base, R2, phi2,
                                 (b.total, proj2, b.hact, b.gact), chi2)


def _permute_units(unit, obj_perm):
    out = [0] * len(unit)
    for o, u in enumerate(unit):
        out[obj_perm[o]] = u
    return out


def two_group_cocycle(ext: GHExtension, sigma) -> dict:
    """The 2-group valued data of the extension along a bundle section.

    sigma lists one P-element per object.  Pairs of R-arrows with the same
    projection map to arrow triples of the crossed module's 2-group.
    """
    sigma = tuple(int(v) for v in sigma)
    bundle = ext.bundle
    if len(sigma) != len(ext.R.objects):
        raise NotASection("section must pick one bundle element per object")
    for m, p in enumerate(sigma):
        if bundle.proj[p] != m:
            raise NotASection(f"section value over object {m} sits in the wrong fiber")
    H = ext.cm.H
    shift = {}
    for m in range(len(ext.R.objects)):
        shift[m] = {bundle.hact[sigma[m]][h]: h for h in H.elements()}
    psi = {}
    R = ext.R
    for a in range(len(R.arrows)):
        moved = bundle.gact[(a, sigma[R.tgt[a]])]
        psi[a] = shift[R.src[a]][moved]
    inv_band = {}
    for m in range(len(R.objects)):
        b = ext.chi[sigma[m]]
        inv_band[m] = {arrow: g for g, arrow in enumerate(b.iso)}
    out = {}
    for a in range(len(R.arrows)):
        for b_ in range(len(R.arrows)):
            if ext.phi[a] == ext.phi[b_]:
                k = R.prod[(a, R.inv[b_])]
                g = inv_band[R.src[a]][k]
                out[(a, b_)] = two_group_arrow(ext.cm, psi[a], g, psi[b_])
    return out
