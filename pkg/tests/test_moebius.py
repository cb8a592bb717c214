from dataclasses import replace
from fractions import Fraction

import pytest

from mumford_trop.moebius import (
    INF,
    Disc,
    DomainError,
    MoebiusMap,
    PeriodMatrix,
    PoleInDiscError,
    image_of_complement,
    image_of_disc,
    is_normalized,
    log_q,
    moebius_apply,
    normalize,
    reduced_words,
    u_log_abs,
    u_log_abs_truncated,
    verify_good_domain,
    word_count,
)
from mumford_trop.valued_field import PuiseuxNumber, log_abs, parse_puiseux as P

INVERT = MoebiusMap(0, 1, 1, 0)


def test_apply_identity_and_inversion():
    assert moebius_apply(MoebiusMap.identity(), P("t")) == P("t")
    assert moebius_apply(INVERT, P("t^2")) == P("t^-2")
    assert moebius_apply(INVERT, INF) == P("0")
    assert moebius_apply(INVERT, P("0")) is INF


def test_image_of_disc_identity():
    D = Disc(P("t^2"), -3)
    assert image_of_disc(MoebiusMap.identity(), D).same_as(D)


def test_image_of_disc_inversion_near_one():
    D = Disc(P("1"), -2)
    img = image_of_disc(INVERT, D)
    assert img.same_as(Disc(P("1"), -2))
    # sample boundary points land on the boundary of the image
    for c in (1, 2, -1, 3, Fraction(1, 2)):
        z = P("1") + PuiseuxNumber.monomial(2, c)
        assert log_abs(moebius_apply(INVERT, z) - img.center) == -2


def test_image_of_disc_scaling():
    img = image_of_disc(MoebiusMap(P("t"), 0, 0, 1), Disc(P("1"), 0))
    assert img.same_as(Disc(P("t"), -1))


def test_image_of_disc_rejects_pole_inside():
    with pytest.raises(PoleInDiscError, match="pole in disc"):
        image_of_disc(INVERT, Disc(P("0"), -1))


def test_image_of_complement_inversion():
    img = image_of_complement(INVERT, Disc(P("0"), -1))
    assert img.same_as(Disc(P("0"), 1))


@pytest.mark.parametrize("i", [1, 2])
def test_generators_map_complement_onto_partner(S_se1, i):
    img = image_of_complement(S_se1.gen(i), S_se1.disc(f"B{i}"))
    assert img.same_as(S_se1.disc(f"C{i}"))


@pytest.mark.parametrize("name", ["S_se1", "S_ce1", "S_cp1"])
def test_reference_instances_are_good(name, request):
    rep = verify_good_domain(request.getfixturevalue(name))
    assert rep.ok, rep.failures()


def test_enlarged_disc_breaks_disjointness(S_se1):
    bad = replace(S_se1, B1=Disc(P("t^4"), -3))
    rep = verify_good_domain(bad)
    assert not rep["disjoint B1 B2"]


def test_identity_generator_breaks_mapping(S_se1):
    rep = verify_good_domain(replace(S_se1, gen1=MoebiusMap.identity()))
    assert not rep.ok
    assert any(name.startswith("gamma1") for name, _, _ in rep.failures())


def test_normalize_keeps_ordered_datum(S_se1):
    N = normalize(S_se1)
    assert is_normalized(N)
    assert log_q(N) == log_q(S_se1)


def test_normalize_undoes_generator_inversion(S_se1):
    N = normalize(S_se1.invert_generator(1))
    assert log_abs(N.b(1)) < log_abs(N.c(1))
    assert log_q(N) == log_q(S_se1)


def test_normalize_connecting_edge(S_ce1):
    N = normalize(S_ce1)
    b1, c1, b2, c2 = (log_abs(x) for x in (N.b(1), N.c(1), N.b(2), N.c(2)))
    assert b1 < c1 < b2 < c2


def test_u_closed_form_values(S_se1):
    assert u_log_abs(S_se1, 1, P("1 + t")) == 0
    assert u_log_abs(S_se1, 1, P("t^4 + t^5")) == -3
    assert u_log_abs(S_se1, 2, P("t^3 + t^5")) == -5


def test_u_closed_form_rejects_open_disc(S_se1):
    # 1 is the center of C2
    with pytest.raises(DomainError, match="outside fundamental domain hypothesis"):
        u_log_abs(S_se1, 1, P("1"))


def test_u_truncated_single_word(S_se1):
    z, a = P("1 + t"), P("-1")
    g1a = moebius_apply(S_se1.gen(1), a)
    assert u_log_abs_truncated(S_se1, 1, z, a, 0) == log_abs(z - a) - log_abs(z - g1a)


def test_u_truncated_stabilizes_on_boundary_of_c2(S_se1):
    vals = [u_log_abs_truncated(S_se1, 1, P("1 + t"), P("-1"), L) for L in range(5)]
    assert vals == [0] * 5


def test_reduced_word_counts():
    assert list(reduced_words(0)) == [()]
    assert word_count(1) == 5 == len(list(reduced_words(1)))
    assert word_count(3) == 53 == len(list(reduced_words(3)))
    for w in reduced_words(3):
        assert all(w[k][0] != w[k + 1][0] or w[k][1] == w[k + 1][1] for k in range(len(w) - 1))


def test_period_matrices(S_se1, S_ce1, S_cp1):
    assert log_q(S_se1).logq == ((-4, -1), (-1, -6))
    assert log_q(S_ce1).logq == ((-3, 0), (0, -4))
    assert log_q(S_cp1).logq == ((-6, 0), (0, -4))


def test_period_matrix_validation():
    with pytest.raises(ValueError):
        PeriodMatrix(((-4, -1), (-2, -6)))
    with pytest.raises(ValueError):
        PeriodMatrix(((4, 0), (0, -6)))


def test_automorphy(S_se1, S_ce1):
    for S in (S_se1, S_ce1):
        Q = log_q(S)
        for j in (1, 2):
            B = S.disc(f"B{j}")
            for c in (1, -1, 2):
                z = B.center + PuiseuxNumber.monomial(-B.log_radius, c)
                w = moebius_apply(S.gen(j), z)
                for i in (1, 2):
                    assert u_log_abs(S, i, z) - u_log_abs(S, i, w) == Q[i, j]
