import pytest

from gerbelab import (
    act,
    inner_xmod,
    two_group_arrow,
    two_group_hcomp,
    two_group_vcomp,
    validate_crossed_module,
)
from gerbelab.errors import (
    IndexOutOfRange,
    NotAnAction,
    NotComposable,
    Peiffer2Violation,
)


def test_trivial_source_valid(z1, z2, z3, s3):
    for h in (z2, z3, s3):
        cm = validate_crossed_module(z1, h, [0], [[0]] * h.order)
        assert cm.H is h


def test_abelian_source_trivial_target_valid(z1, z2):
    cm = validate_crossed_module(z2, z1, [0, 0], [[0, 1]])
    assert cm.G is z2


def test_s3_to_trivial_rejected(z1, s3):
    with pytest.raises(Peiffer2Violation):
        validate_crossed_module(s3, z1, [0] * 6, [list(range(6))])


def test_non_action_rejected(z1, z2):
    with pytest.raises(NotAnAction):
        validate_crossed_module(z2, z1, [0, 0], [[1, 0]])


def test_inner_xmod_small(z2, z3, s3):
    cm2 = inner_xmod(z2)
    assert cm2.H.order == 1
    cm3 = inner_xmod(z3)
    assert cm3.H.order == 2
    assert set(cm3.rho.map) == {0}
    cm6 = inner_xmod(s3)
    assert cm6.H.order == 6
    assert cm6.rho.is_bijective()


def test_inner_xmod_z4(z4):
    cm = inner_xmod(z4)
    assert cm.H.order == 2
    assert set(cm.rho.map) == {0}


def test_act_lookup_and_peiffer2_oracle(s3):
    cm = inner_xmod(s3)
    for g in s3.elements():
        assert act(cm, 0, g) == g
        for g2 in s3.elements():
            conj = s3.mul(s3.mul(g, g2), s3.inv(g))
            assert act(cm, cm.rho.map[g], g2) == conj
    with pytest.raises(IndexOutOfRange):
        act(cm, cm.H.order, 0)


def test_image_rho_normal_and_kernel_central(z1, z2, z3, s3, h_z2, g_z2):
    fixtures = [h_z2, g_z2, inner_xmod(z3), inner_xmod(s3)]
    for cm in fixtures:
        G, H = cm.G, cm.H
        image = {cm.rho.map[g] for g in G.elements()}
        for h in H.elements():
            for im in image:
                assert H.mul(H.mul(h, im), H.inv(h)) in image
        kernel = [g for g in G.elements() if cm.rho.map[g] == 0]
        for g in kernel:
            for g2 in G.elements():
                assert G.mul(g, g2) == G.mul(g2, g)


def test_two_group_arrow_constraint(g_z2, z3):
    a = two_group_arrow(g_z2, 0, 1, 0)
    assert a.g == 1
    cm = inner_xmod(z3)
    with pytest.raises(NotComposable):
        two_group_arrow(cm, 1, 0, 0)


def test_vcomp_identity_arrows(h_z2):
    for h in h_z2.H.elements():
        a = two_group_arrow(h_z2, h, 0, h)
        assert two_group_vcomp(h_z2, a, a) == a


def test_vcomp_requires_matching_boundary(h_z2):
    a = two_group_arrow(h_z2, 0, 0, 0)
    b = two_group_arrow(h_z2, 1, 0, 1)
    with pytest.raises(NotComposable):
        two_group_vcomp(h_z2, a, b)


def test_hcomp_trivial_action(g_z2):
    a = two_group_arrow(g_z2, 0, 1, 0)
    b = two_group_arrow(g_z2, 0, 1, 0)
    assert two_group_hcomp(g_z2, a, b).g == 0


def _all_arrows(cm):
    out = []
    for g in cm.G.elements():
        for h2 in cm.H.elements():
            h1 = cm.H.mul(cm.rho.map[g], h2)
            out.append(two_group_arrow(cm, h1, g, h2))
    return out


def test_interchange_law_exhaustive(h_z2, g_z2):
    for cm in (h_z2, g_z2):
        arrows = _all_arrows(cm)
        for a in arrows:
            for b in arrows:
                if a.h2 != b.h1:
                    continue
                for c in arrows:
                    for d in arrows:
                        if c.h2 != d.h1:
                            continue
                        lhs = two_group_hcomp(cm, two_group_vcomp(cm, a, b),
                                              two_group_vcomp(cm, c, d))
                        rhs = two_group_vcomp(cm, two_group_hcomp(cm, a, c),
                                              two_group_hcomp(cm, b, d))
                        assert lhs == rhs


def test_outputs_satisfy_constraint(h_z2, g_z2):
    for cm in (h_z2, g_z2):
        arrows = _all_arrows(cm)
        for a in arrows:
            for b in arrows:
                out = two_group_hcomp(cm, a, b)
                assert cm.H.mul(cm.rho.map[out.g], out.h2) == out.h1
