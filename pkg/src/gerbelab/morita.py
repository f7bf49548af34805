"""Extensions over a fixed base groupoid, Morita witnesses, and base change.

An extension over a base B =|= B0 is carried by a map q from its object set
onto B0; its groupoid of definition is the pull-back B[q].  Two such
extensions are Morita equivalent when a span of surjective maps exists whose
two pull-backs are isomorphic extensions.  Over a trivial base N =|= N the
classification through adapted extensions gives a decision procedure; over
general bases only witness verification is offered.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cech import (
    FiniteGroupoid,
    GroupoidMorphism,
    cech_groupoid,
    common_refinement,
    morphism_by_labels,
    pullback_groupoid,
    singleton_cover,
    trivial_groupoid,
)
from .cocycle import Cocycle, enumerate_cocycles, program_for, same_class_after_refinement
from .errors import (
    BaseNotTrivialGroupoid,
    DomainMismatch,
    MiddleMismatch,
    NotGenSurjSubmersion,
    NotSurjective,
    ShapeMismatch,
)
from .extension import (
    BandElement,
    ExtIso,
    GHExtension,
    adapt,
    check_ext_iso,
    cocycle_from_adapted,
    relabel_base,
    validate_ext_iso,
    validate_gh_extension,
)
from .fingroup import Witnessed
from . import kernels


@dataclass(eq=True)
class ExtOverBase:
    base: FiniteGroupoid
    q: tuple[int, ...]
    ext: GHExtension

    @property
    def carrier(self) -> tuple:
        return self.ext.base.objects


def ext_over_base(base: FiniteGroupoid, q, ext: GHExtension) -> ExtOverBase:
    q = tuple(int(v) for v in q)
    carrier = ext.base.objects
    if len(q) != len(carrier):
        raise ShapeMismatch("q must assign one base object per carrier point")
    if set(q) != set(range(len(base.objects))):
        raise NotSurjective("q is not surjective onto the base objects")
    if ext.base != pullback_groupoid(base, carrier, q):
        raise ShapeMismatch("extension's groupoid is not the pull-back of the base along q")
    return ExtOverBase(base=base, q=q, ext=ext)


def over_point_base(ext: GHExtension) -> ExtOverBase:
    """View an extension of a Čech groupoid as an extension over N =|= N."""
    from .cech import cover_from_cech
    cov = cover_from_cech(ext.base)
    base = trivial_groupoid(cov.base_size)
    q = tuple(x for (i, x) in ext.base.objects)
    target = pullback_groupoid(base, ext.base.objects, q)
    iso = morphism_by_labels(ext.base, target,
                             lambda o: o,
                             lambda a: ((a[0], a[2]), a[2], (a[1], a[2])))
    return ext_over_base(base, q, relabel_base(ext, iso))


def pullback_extension(e: ExtOverBase, m2_labels, p) -> ExtOverBase:
    """Pull an extension back along p and re-base it onto B[q o p]."""
    m2_labels = tuple(m2_labels)
    p = tuple(int(v) for v in p)
    if len(p) != len(m2_labels):
        raise ShapeMismatch("p must assign one carrier point per new point")
    carrier = e.ext.base.objects
    for v in p:
        if not 0 <= v < len(carrier):
            raise ShapeMismatch(f"p value {v} out of range")
    q2 = tuple(e.q[v] for v in p)
    if set(q2) != set(range(len(e.base.objects))):
        raise NotGenSurjSubmersion("q o p is not surjective onto the base objects")
    new_base = pullback_groupoid(e.base, m2_labels, q2)
    R = e.ext.R
    R2 = pullback_groupoid(R, m2_labels, p)
    base_arrow_mid = {k: e.ext.base.arrows[e.ext.phi[k]][1] for k in range(len(R.arrows))}
    phi2 = []
    for (m2, r_label, n2) in R2.arrows:
        r = R.arrow_index[r_label]
        phi2.append(new_base.arrow_index[(m2, base_arrow_mid[r], n2)])
    b = e.ext.bundle
    total2 = []
    for x in range(len(b.total)):
        for n in range(len(m2_labels)):
            if b.proj[x] == p[n]:
                total2.append((b.total[x], m2_labels[n]))
    pidx2 = {lab: k for k, lab in enumerate(total2)}
    old_p = {lab: b.index[lab[0]] for lab in total2}
    n2_of = {lab: lab[1] for lab in total2}
    m2_index = {lab: k for k, lab in enumerate(m2_labels)}
    proj2 = [m2_index[n2_of[lab]] for lab in total2]
    H = e.ext.cm.H
    hact2 = [[pidx2[(b.total[b.hact[old_p[lab]][h]], lab[1])] for h in H.elements()]
             for lab in total2]
    gact2 = {}
    for k, (m2, r_label, n2) in enumerate(R2.arrows):
        r = R.arrow_index[r_label]
        for pk, lab in enumerate(total2):
            if lab[1] == n2 and b.proj[old_p[lab]] == R.tgt[r]:
                moved = b.gact[(r, old_p[lab])]
                gact2[(k, pk)] = pidx2[(b.total[moved], m2)]
    chi2 = []
    for lab in total2:
        x = old_p[lab]
        n2 = lab[1]
        iso = tuple(R2.arrow_index[(n2, R.arrows[e.ext.chi[x].iso[g]], n2)]
                    for g in e.ext.cm.G.elements())
        chi2.append(BandElement(m=m2_index[n2], iso=iso))
    ext2 = validate_gh_extension(e.ext.cm, new_base, R2, phi2,
                                 (total2, proj2, hact2, gact2), chi2)
    return ext_over_base(e.base, q2, ext2)


@dataclass(eq=True)
class MoritaWitness:
    e1: ExtOverBase
    e2: ExtOverBase
    m2_labels: tuple
    p: tuple[int, ...]
    p2: tuple[int, ...]
    iso: ExtIso


def validate_morita_witness(w: MoritaWitness) -> Witnessed:
    """Check the commuting legs, their surjectivity and the pulled-back iso."""
    if w.e1.base != w.e2.base:
        return Witnessed(False, "witness connects extensions over different bases")
    for m in range(len(w.m2_labels)):
        if w.e1.q[w.p[m]] != w.e2.q[w.p2[m]]:
            return Witnessed(False, "legs do not commute over the base", (m,))
    if set(w.p) != set(range(len(w.e1.carrier))):
        return Witnessed(False, "first leg is not surjective")
    if set(w.p2) != set(range(len(w.e2.carrier))):
        return Witnessed(False, "second leg is not surjective")
    pb1 = pullback_extension(w.e1, w.m2_labels, w.p)
    pb2 = pullback_extension(w.e2, w.m2_labels, w.p2)
    if pb1.ext.base != pb2.ext.base:
        return Witnessed(False, "pulled-back base groupoids differ")
    res = check_ext_iso(w.iso, pb1.ext, pb2.ext)
    if not res:
        return Witnessed(False, f"pulled-back isomorphism fails: {res.reason}", res.witness)
    return Witnessed(True)


def iso_witness(e1: ExtOverBase, e2: ExtOverBase, iso: ExtIso) -> MoritaWitness:
    """The witness carried by an isomorphism over the identity of the carrier."""
    if e1.carrier != e2.carrier:
        raise ShapeMismatch("isomorphic extensions must share their carrier")
    validate_ext_iso(iso, e1.ext, e2.ext)
    m2 = e1.carrier
    ident = tuple(range(len(m2)))
    pb1 = pullback_extension(e1, m2, ident)
    pb2 = pullback_extension(e2, m2, ident)
    arrow_map = []
    for (m, r_label, n) in pb1.ext.R.arrows:
        r = e1.ext.R.arrow_index[r_label]
        fr = e2.ext.R.arrows[iso.phi_r.arrow_map[r]]
        arrow_map.append(pb2.ext.R.arrow_index[(m, fr, n)])
    phi_r = GroupoidMorphism(pb1.ext.R, pb2.ext.R,
                             tuple(range(len(m2))), tuple(arrow_map)).validate()
    phi_p = []
    for (x_label, n_label) in pb1.ext.bundle.total:
        x = e1.ext.bundle.index[x_label]
        fx = e2.ext.bundle.total[iso.phi_p[x]]
        phi_p.append(pb2.ext.bundle.index[(fx, n_label)])
    lifted = validate_ext_iso(ExtIso(phi_r=phi_r, phi_p=tuple(phi_p)), pb1.ext, pb2.ext)
    w = MoritaWitness(e1=e1, e2=e2, m2_labels=m2, p=ident, p2=ident, iso=lifted)
    res = validate_morita_witness(w)
    if not res:
        raise ShapeMismatch(f"isomorphism witness failed validation: {res.reason}")
    return w


def pullback_witness(e: ExtOverBase, m2_labels, p) -> MoritaWitness:
    """The witness between an extension and its pull-back along p."""
    pb = pullback_extension(e, m2_labels, p)
    ident = tuple(range(len(m2_labels)))
    left = pullback_extension(e, m2_labels, p)
    right = pullback_extension(pb, m2_labels, ident)
    arrow_map = []
    for (m, r_label, n) in left.ext.R.arrows:
        nested = (m2_labels[left.ext.R.src[left.ext.R.arrow_index[(m, r_label, n)]]],
                  r_label,
                  m2_labels[left.ext.R.tgt[left.ext.R.arrow_index[(m, r_label, n)]]])
        arrow_map.append(right.ext.R.arrow_index[(m, nested, n)])
    phi_r = GroupoidMorphism(left.ext.R, right.ext.R,
                             tuple(range(len(m2_labels))), tuple(arrow_map)).validate()
    phi_p = []
    for (x_label, n_label) in left.ext.bundle.total:
        phi_p.append(right.ext.bundle.index[((x_label, n_label), n_label)])
    lifted = validate_ext_iso(ExtIso(phi_r=phi_r, phi_p=tuple(phi_p)),
                              left.ext, right.ext)
    w = MoritaWitness(e1=e, e2=pb, m2_labels=tuple(m2_labels), p=tuple(p), p2=ident,
                      iso=lifted)
    res = validate_morita_witness(w)
    if not res:
        raise ShapeMismatch(f"pull-back witness failed validation: {res.reason}")
    return w


def _transport_iso(iso: ExtIso, src_of: dict, pe_from: ExtOverBase, pe_mid_from: ExtOverBase,
                   pe_to: ExtOverBase, pe_mid_to: ExtOverBase) -> ExtIso:
    """Push an iso between pulled-back extensions through a further pull-back.

    src_of maps each new carrier index to the old carrier index it refines.
    """
    R_from, R_to = pe_from.ext.R, pe_to.ext.R
    R_mid_from, R_mid_to = pe_mid_from.ext.R, pe_mid_to.ext.R
    arrow_map = []
    for (u, r_label, u2) in R_from.arrows:
        a = R_from.arrow_index[(u, r_label, u2)]
        mid_src = pe_mid_from.carrier[src_of[R_from.src[a]]]
        mid_tgt = pe_mid_from.carrier[src_of[R_from.tgt[a]]]
        mid_arrow = R_mid_from.arrow_index[(mid_src, r_label, mid_tgt)]
        image_label = R_mid_to.arrows[iso.phi_r.arrow_map[mid_arrow]][1]
        arrow_map.append(R_to.arrow_index[(u, image_label, u2)])
    phi_r = GroupoidMorphism(R_from, R_to, tuple(range(len(R_from.objects))),
                             tuple(arrow_map)).validate()
    phi_p = []
    b_from, b_to = pe_from.ext.bundle, pe_to.ext.bundle
    b_mid_from, b_mid_to = pe_mid_from.ext.bundle, pe_mid_to.ext.bundle
    for k, (x_label, u_label) in enumerate(b_from.total):
        u = b_from.proj[k]
        mid_lab = (x_label, pe_mid_from.carrier[src_of[u]])
        image = b_mid_to.total[iso.phi_p[b_mid_from.index[mid_lab]]]
        phi_p.append(b_to.index[(image[0], u_label)])
    return validate_ext_iso(ExtIso(phi_r=phi_r, phi_p=tuple(phi_p)),
                            pe_from.ext, pe_to.ext)


def compose_morita(w1: MoritaWitness, w2: MoritaWitness) -> MoritaWitness:
    """Witness from w1.e1 to w2.e2 over the fibered product of the two middles."""
    if w1.e2 != w2.e1:
        raise MiddleMismatch("witnesses do not share their middle extension")
    pairs = [(a, b) for a in range(len(w1.m2_labels)) for b in range(len(w2.m2_labels))
             if w1.p2[a] == w2.p[b]]
    labels = tuple((w1.m2_labels[a], w2.m2_labels[b]) for (a, b) in pairs)
    leg1 = tuple(w1.p[a] for (a, b) in pairs)
    leg2 = tuple(w2.p2[b] for (a, b) in pairs)
    pe1 = pullback_extension(w1.e1, labels, leg1)
    pe3 = pullback_extension(w2.e2, labels, leg2)
    mid = tuple(w1.p2[a] for (a, b) in pairs)
    pe_mid = pullback_extension(w1.e2, labels, mid)
    pb1_mid = pullback_extension(w1.e1, w1.m2_labels, w1.p)
    pb2_mid = pullback_extension(w1.e2, w1.m2_labels, w1.p2)
    src1 = {k: pairs[k][0] for k in range(len(pairs))}
    iso1 = _transport_iso(w1.iso, src1, pe1, pb1_mid, pe_mid, pb2_mid)
    pb2b_mid = pullback_extension(w2.e1, w2.m2_labels, w2.p)
    pb3_mid = pullback_extension(w2.e2, w2.m2_labels, w2.p2)
    src2 = {k: pairs[k][1] for k in range(len(pairs))}
    iso2 = _transport_iso(w2.iso, src2, pe_mid, pb2b_mid, pe3, pb3_mid)
    phi_r = GroupoidMorphism(pe1.ext.R, pe3.ext.R,
                             tuple(range(len(labels))),
                             tuple(iso2.phi_r.arrow_map[a] for a in iso1.phi_r.arrow_map)
                             ).validate()
    phi_p = tuple(iso2.phi_p[x] for x in iso1.phi_p)
    iso = validate_ext_iso(ExtIso(phi_r=phi_r, phi_p=phi_p), pe1.ext, pe3.ext)
    w = MoritaWitness(e1=w1.e1, e2=w2.e2, m2_labels=labels, p=leg1, p2=leg2, iso=iso)
    res = validate_morita_witness(w)
    if not res:
        raise MiddleMismatch(f"composite witness failed validation: {res.reason}")
    return w


def generalized_pullback_witness(e: ExtOverBase, m1_labels, tau) -> MoritaWitness:
    """Witness between the pull-back of e along tau and e itself.

    tau need not be surjective; it suffices that q o tau hits every base
    object.  The witness carrier pairs each new point with an arrow sourced
    at its tau-image, the second leg being that arrow's target.
    """
    pb = pullback_extension(e, m1_labels, tau)
    R = e.ext.R
    tau = tuple(int(v) for v in tau)
    t_labels = []
    legs1 = []
    legs2 = []
    for mi in range(len(m1_labels)):
        for r in range(len(R.arrows)):
            if R.src[r] == tau[mi]:
                t_labels.append((m1_labels[mi], R.arrows[r]))
                legs1.append(mi)
                legs2.append(R.tgt[r])
    t_labels = tuple(t_labels)
    pe1 = pullback_extension(pb, t_labels, tuple(legs1))
    pe2 = pullback_extension(e, t_labels, tuple(legs2))
    conn = {}
    for k, (m1_label, r_label) in enumerate(t_labels):
        conn[k] = R.arrow_index[r_label]
    arrow_map = []
    for (t1, nested, t2) in pe1.ext.R.arrows:
        a = pe1.ext.R.arrow_index[(t1, nested, t2)]
        k1, k2 = pe1.ext.R.src[a], pe1.ext.R.tgt[a]
        rho = R.arrow_index[nested[1]]
        r1, r2 = conn[k1], conn[k2]
        moved = R.prod[(R.prod[(R.inv[r1], rho)], r2)]
        arrow_map.append(pe2.ext.R.arrow_index[(t1, R.arrows[moved], t2)])
    phi_r = GroupoidMorphism(pe1.ext.R, pe2.ext.R,
                             tuple(range(len(t_labels))), tuple(arrow_map)).validate()
    b = e.ext.bundle
    phi_p = []
    for ((x_label, m1_label), t_label) in pe1.ext.bundle.total:
        k = pe1.ext.bundle.proj[pe1.ext.bundle.index[((x_label, m1_label), t_label)]]
        r = conn[k]
        moved = b.gact[(R.inv[r], b.index[x_label])]
        phi_p.append(pe2.ext.bundle.index[(b.total[moved], t_label)])
    iso = validate_ext_iso(ExtIso(phi_r=phi_r, phi_p=tuple(phi_p)),
                           pe1.ext, pe2.ext)
    w = MoritaWitness(e1=pb, e2=e, m2_labels=t_labels, p=tuple(legs1), p2=tuple(legs2),
                      iso=iso)
    res = validate_morita_witness(w)
    if not res:
        raise NotGenSurjSubmersion(f"generalized pull-back witness failed: {res.reason}")
    return w


def _require_trivial_base(e: ExtOverBase) -> int:
    n = len(e.base.objects)
    if e.base != trivial_groupoid(n):
        raise BaseNotTrivialGroupoid("operation requires the trivial base groupoid")
    return n


def as_cech_extension(e: ExtOverBase, cov) -> GHExtension:
    """Rewrite an extension over N =|= N whose carrier is ⊔(cover sets) onto
    the Čech groupoid of that cover."""
    _require_trivial_base(e)
    expected = [(i, x) for i in range(cov.n_sets) for x in cov.sets[i]]
    if list(e.carrier) != expected:
        raise ShapeMismatch("carrier is not the disjoint union of the cover's sets")
    if any(e.q[k] != x for k, (i, x) in enumerate(expected)):
        raise ShapeMismatch("q is not the point projection of the cover")
    target = cech_groupoid(cov)
    iso = morphism_by_labels(e.ext.base, target,
                             lambda o: o,
                             lambda a: (a[0][0], a[2][0], a[1]))
    return relabel_base(e.ext, iso)


def as_cover_extension(e: ExtOverBase):
    """Re-express any extension over N =|= N over a cover of N by singletons
    indexed by the carrier; returns (cover, extension over its Čech groupoid)."""
    from .cech import cover as make_cover
    n = _require_trivial_base(e)
    cov = make_cover(n, [[e.q[m]] for m in range(len(e.carrier))])
    target = cech_groupoid(cov)
    oidx = e.ext.base.obj_index

    def obj_fn(o):
        return (oidx[o], e.q[oidx[o]])

    def arrow_fn(a):
        return (oidx[a[0]], oidx[a[2]], a[1])

    iso = morphism_by_labels(e.ext.base, target, obj_fn, arrow_fn)
    return cov, relabel_base(e.ext, iso)


def canonical_cover_cocycle(e: ExtOverBase) -> Cocycle:
    """Adapted cocycle of e pulled back along sections over the singleton cover."""
    n = _require_trivial_base(e)
    w = singleton_cover(n)
    labels = tuple((k, k) for k in range(n))
    sigma = tuple(min(m for m in range(len(e.carrier)) if e.q[m] == k) for k in range(n))
    pb = pullback_extension(e, labels, sigma)
    adapted, _ = adapt(as_cech_extension(pb, w))
    return cocycle_from_adapted(adapted)


def gerbe_class(e: ExtOverBase, max_size: int | None = None) -> Cocycle:
    """Least representative of the canonical-cover cocycle's coboundary orbit."""
    c = canonical_cover_cocycle(e)
    all_c = enumerate_cocycles(c.cm, c.cover, max_size)
    tables = [x.flat() for x in all_c]
    prog = program_for(c.cm, c.cover)
    labels = kernels.orbit_labels(prog, tables)
    me = tables.index(c.flat())
    return all_c[labels[me]]


def extensions_morita_equivalent(e1: ExtOverBase, e2: ExtOverBase,
                                 max_size: int | None = None) -> bool:
    """Decide equivalence over N =|= N by comparing classes on a common refinement."""
    n = _require_trivial_base(e1)
    if e1.base != e2.base:
        raise DomainMismatch("extensions live over different bases")
    if e1.ext.cm != e2.ext.cm:
        raise DomainMismatch("extensions value in different crossed modules")
    c1 = canonical_cover_cocycle(e1)
    c2 = canonical_cover_cocycle(e2)
    w = c1.cover
    points = tuple((k, x) for k in range(w.n_sets) for x in w.sets[k])
    common = common_refinement(w, w, len(points), points, points)
    return same_class_after_refinement(c1, c2, common, max_size) is not None


@dataclass(eq=True)
class BaseMorita:
    B: FiniteGroupoid
    B2: FiniteGroupoid
    t_labels: tuple
    f: tuple[int, ...]
    g: tuple[int, ...]
    phi: GroupoidMorphism


def base_morita(B: FiniteGroupoid, B2: FiniteGroupoid, t_labels, f, g,
                phi: GroupoidMorphism | None = None) -> BaseMorita:
    """Validate an equivalence of base groupoids carried by the span (f, g).

    For trivial groupoids the arrow component of the middle isomorphism is
    forced, so phi may be omitted and is then built (or rejected) here.
    """
    t_labels = tuple(t_labels)
    f = tuple(int(v) for v in f)
    g = tuple(int(v) for v in g)
    if len(f) != len(t_labels) or len(g) != len(t_labels):
        raise ShapeMismatch("legs must assign one object per middle point")
    if set(f) != set(range(len(B.objects))):
        raise NotSurjective("first leg is not surjective")
    if set(g) != set(range(len(B2.objects))):
        raise NotSurjective("second leg is not surjective")
    bf = pullback_groupoid(B, t_labels, f)
    bg = pullback_groupoid(B2, t_labels, g)
    if phi is None:
        if B != trivial_groupoid(len(B.objects)) or B2 != trivial_groupoid(len(B2.objects)):
            raise ShapeMismatch("phi may be omitted only over trivial base groupoids")
        arrow_map = []
        for (t1, b, t2) in bf.arrows:
            i1, i2 = bf.obj_index[t1], bf.obj_index[t2]
            if g[i1] != g[i2]:
                raise ShapeMismatch(f"legs induce different identifications at ({t1}, {t2})")
            arrow_map.append(bg.arrow_index[(t1, g[i1], t2)])
        phi = GroupoidMorphism(bf, bg, tuple(range(len(t_labels))),
                               tuple(arrow_map)).validate()
    else:
        if phi.source != bf or phi.target != bg:
            raise ShapeMismatch("phi does not connect the two pulled-back groupoids")
        phi.validate()
    if not phi.is_bijective():
        raise ShapeMismatch("phi is not bijective")
    return BaseMorita(B=B, B2=B2, t_labels=t_labels, f=f, g=g, phi=phi)


def reverse_base_morita(bm: BaseMorita) -> BaseMorita:
    return base_morita(bm.B2, bm.B, bm.t_labels, bm.g, bm.f, bm.phi.inverse())


def compose_base_morita(bm1: BaseMorita, bm2: BaseMorita) -> BaseMorita:
    """Equivalence from bm1.B to bm2.B2 through the fibered product of middles."""
    if bm1.B2 != bm2.B:
        raise MiddleMismatch("base equivalences do not share their middle groupoid")
    pairs = [(a, b) for a in range(len(bm1.t_labels)) for b in range(len(bm2.t_labels))
             if bm1.g[a] == bm2.f[b]]
    labels = tuple((bm1.t_labels[a], bm2.t_labels[b]) for (a, b) in pairs)
    f = tuple(bm1.f[a] for (a, b) in pairs)
    g = tuple(bm2.g[b] for (a, b) in pairs)
    bf = pullback_groupoid(bm1.B, labels, f)
    bg = pullback_groupoid(bm2.B2, labels, g)
    bf1 = bm1.phi.source
    bg1 = bm1.phi.target
    bf2 = bm2.phi.source
    bg2 = bm2.phi.target
    arrow_map = []
    for (u1, b, u2) in bf.arrows:
        (t1a, t1b), (t2a, t2b) = u1, u2
        mid1 = bf1.arrow_index[(t1a, b, t2a)]
        b2 = bg1.arrows[bm1.phi.arrow_map[mid1]][1]
        mid2 = bf2.arrow_index[(t1b, b2, t2b)]
        b3 = bg2.arrows[bm2.phi.arrow_map[mid2]][1]
        arrow_map.append(bg.arrow_index[(u1, b3, u2)])
    phi = GroupoidMorphism(bf, bg, tuple(range(len(labels))), tuple(arrow_map)).validate()
    return base_morita(bm1.B, bm2.B2, labels, f, g, phi)


def transport(bm: BaseMorita, e: ExtOverBase) -> ExtOverBase:
    """Carry an extension over B to one over B2 through a base equivalence."""
    if e.base != bm.B:
        raise ShapeMismatch("extension does not live over the equivalence's first base")
    carrier = e.carrier
    pairs = [(m, t) for m in range(len(carrier)) for t in range(len(bm.t_labels))
             if e.q[m] == bm.f[t]]
    labels = tuple((carrier[m], bm.t_labels[t]) for (m, t) in pairs)
    alpha = tuple(m for (m, t) in pairs)
    beta = tuple(t for (m, t) in pairs)
    pb = pullback_extension(e, labels, alpha)
    q2 = tuple(bm.g[t] for (m, t) in pairs)
    new_base = pullback_groupoid(bm.B2, labels, q2)
    bf = bm.phi.source
    bg = bm.phi.target
    arrow_map = []
    for (u1, b, u2) in pb.ext.base.arrows:
        t1 = bm.t_labels[beta[pb.ext.base.obj_index[u1]]]
        t2 = bm.t_labels[beta[pb.ext.base.obj_index[u2]]]
        mid = bf.arrow_index[(t1, b, t2)]
        b2 = bg.arrows[bm.phi.arrow_map[mid]][1]
        arrow_map.append(new_base.arrow_index[(u1, b2, u2)])
    base_iso = GroupoidMorphism(pb.ext.base, new_base,
                                tuple(range(len(labels))), tuple(arrow_map)).validate()
    return ext_over_base(bm.B2, q2, relabel_base(pb.ext, base_iso))
