import numpy as np
import pytest

from pherm import (
    ModelError,
    build_model,
    c0_constant,
    c0_prime,
    closed_form_constants,
    hat,
    holonomy_commutant_dim,
    invariants,
    kappa,
    companion_tensor,
    model_curvature,
    primitive_part,
    ricci_contraction,
    scalar_curvature,
    scalar_product,
    space_form,
)

from oracles import su11_oracle

# frozen hand values for the signature (1,1) bracket computation
SU11_COMPONENT = -0.5
SU11_NORM2 = 0.125
SU11_SCALAR = -1.0
SU11_C0 = 0.5
SU11_KAPPA = -0.5


def test_su11_hand_oracle_self_consistent():
    comp, n2, s, c0, kp = su11_oracle()
    assert comp == pytest.approx(SU11_COMPONENT, abs=1e-12)
    assert n2 == pytest.approx(SU11_NORM2, abs=1e-12)
    assert s == pytest.approx(SU11_SCALAR, abs=1e-12)
    assert c0 == pytest.approx(SU11_C0, abs=1e-12)
    assert kp == pytest.approx(SU11_KAPPA, abs=1e-12)


def test_engine_reproduces_su11_oracle():
    m = build_model("su_pq", (1, 1))
    rw = model_curvature(m)
    assert rw.entries[0, 1, 0, 1] == pytest.approx(SU11_COMPONENT, abs=1e-10)
    assert scalar_product(rw, rw) == pytest.approx(SU11_NORM2, abs=1e-10)
    assert scalar_curvature(rw) == pytest.approx(SU11_SCALAR, abs=1e-10)
    assert c0_prime(rw) == pytest.approx(SU11_C0, abs=1e-10)
    assert kappa(rw) == pytest.approx(SU11_KAPPA, abs=1e-10)


@pytest.mark.parametrize(
    "family,params,d,dim",
    [
        ("su_pq", (2, 1), 2, 8),
        ("su_pq", (2, 2), 4, 15),
        ("sp_p_R", (2,), 3, 10),
        ("so_p_2", (3,), 3, 10),
        ("so_star_2p", (3,), 3, 15),
    ],
)
def test_model_dimensions(family, params, d, dim):
    m = build_model(family, params)
    assert m.d == d
    assert m.dim == dim
    # Killing form definiteness on the two parts
    li = np.arange(m.l_dim)
    pi = np.arange(m.l_dim, m.dim)
    assert np.linalg.eigvalsh(m.killing[np.ix_(li, li)]).max() < 0
    assert np.linalg.eigvalsh(m.killing[np.ix_(pi, pi)]).min() > 0
    # ad of the normalized center element squares to -Id on p
    ads = np.einsum("ijk->ikj", m.structure)
    ad_xi = np.einsum("i,iab->ab", m.xi_star, ads)[np.ix_(pi, pi)]
    assert np.max(np.abs(ad_xi @ ad_xi + np.eye(2 * d))) < 1e-9


def test_param_validation():
    for family, params in [
        ("su_pq", (0, 1)),
        ("sp_p_R", (0,)),
        ("so_p_2", (2,)),
        ("so_star_2p", (2,)),
        ("heisenberg", (0,)),
        ("su_pq", (2,)),
        ("mystery", (1,)),
    ]:
        with pytest.raises(ValueError):
            build_model(family, params)


def test_heisenberg_flat():
    m = build_model("heisenberg", (3,))
    assert m.flat
    rw = model_curvature(m)
    assert np.max(np.abs(rw.entries)) == 0.0
    assert kappa(rw) == 0.0
    with pytest.raises(ValueError):
        c0_prime(rw)


@pytest.mark.parametrize(
    "family,params",
    [
        ("su_pq", (2, 1)),
        ("su_pq", (2, 2)),
        ("sp_p_R", (2,)),
        ("so_p_2", (3,)),
        ("so_star_2p", (4,)),
    ],
)
def test_model_curvature_structure(family, params):
    m = build_model(family, params)
    rw = model_curvature(m)  # the constructor verifies the declared tags
    assert rw.tags == frozenset({"pair_symmetric", "bianchi_closed", "j_plus"})
    assert scalar_curvature(rw) < 0
    rep = invariants(rw)
    assert rep.pseudo_einstein


@pytest.mark.parametrize(
    "family,params",
    [
        ("su_pq", (2, 1)),
        ("su_pq", (3, 1)),
        ("sp_p_R", (2,)),
        ("so_p_2", (3,)),
        ("so_star_2p", (4,)),
    ],
)
def test_constants_against_closed_form(family, params):
    m = build_model(family, params)
    rw = model_curvature(m)
    ref_c0, ref_kappa = closed_form_constants(family, params)
    assert c0_prime(rw) == pytest.approx(ref_c0, rel=1e-10)
    assert kappa(rw) == pytest.approx(ref_kappa, rel=1e-10)
    # positivity of the rigidity margin, except on the complex-hyperbolic
    # boundary family where it vanishes identically
    if not (family == "su_pq" and min(params) == 1):
        assert c0_prime(rw) + kappa(rw) > 1e-3


def test_su_d1_rigidity_margin_vanishes():
    # the complex-hyperbolic family sits exactly on the boundary
    for d in (2, 3):
        rw = model_curvature(build_model("su_pq", (d, 1)))
        assert c0_prime(rw) + kappa(rw) == pytest.approx(0.0, abs=1e-10)


def test_su_d1_is_space_form():
    for d in (2, 3):
        m = build_model("su_pq", (d, 1))
        rw = model_curvature(m)
        rep = invariants(rw)
        assert rep.cm_norm2 < 1e-18
        sf = space_form(d, rep.scalar, rw.space)
        assert np.max(np.abs(rw.entries - sf.entries)) < 1e-9


def test_scale_covariance():
    lam = 2.0
    base = model_curvature(build_model("su_pq", (2, 1)))
    scaled = model_curvature(build_model("su_pq", (2, 1), metric_scale=lam))
    assert c0_prime(scaled) == pytest.approx(c0_prime(base) / lam, rel=1e-10)
    assert kappa(scaled) == pytest.approx(kappa(base) / lam, rel=1e-10)
    ratio = c0_prime(base) / kappa(base)
    assert c0_prime(scaled) / kappa(scaled) == pytest.approx(ratio, rel=1e-10)


@pytest.mark.parametrize(
    "family,params",
    [("su_pq", (2, 1)), ("sp_p_R", (2,)), ("so_p_2", (3,)), ("so_star_2p", (3,))],
)
def test_holonomy_commutant_is_id_and_j(family, params):
    rw = model_curvature(build_model(family, params))
    assert holonomy_commutant_dim(rw) == 2


def test_companion_tensor_properties():
    for family, params in (("su_pq", (2, 2)), ("so_p_2", (3,))):
        m = build_model(family, params)
        rw = model_curvature(m)
        d = m.d
        s = scalar_curvature(rw)
        Q = companion_tensor(rw)
        assert c0_constant(rw) > 0
        rw0 = primitive_part(rw)
        assert abs(scalar_product(Q, rw0)) < 1e-9
        cq = ricci_contraction(Q).entries
        assert np.max(np.abs(cq - np.trace(cq) / (2 * d) * np.eye(2 * d))) < 1e-9
        # trace of the primitive curvature operator
        assert hat(rw0).trace == pytest.approx((d - 1) / (2 * d) * s, rel=1e-10)


def test_companion_tensor_space_form_degenerates():
    rw = space_form(2, -6.0)
    assert c0_constant(rw) == pytest.approx(0.0, abs=1e-12)
    Q = companion_tensor(rw)
    assert np.max(np.abs(Q.entries)) < 1e-12
    with pytest.raises(ValueError):
        c0_constant(space_form(2, 0.0))


def test_center_uniqueness_guard():
    # su(1,1) x su(1,1) style failures are not constructible through the
    # public families; instead check the guard by the error type exposure
    m = build_model("su_pq", (1, 1))
    assert m.xi_star.shape == (m.dim,)
    assert isinstance(ModelError("x"), ValueError)


def test_largest_supported_instance():
    # d = 10: the quadratic form lives on a 209-dimensional tensor space
    m = build_model("so_star_2p", (5,))
    assert m.d == 10
    rw = model_curvature(m)
    ref_c0, ref_kappa = closed_form_constants("so_star_2p", (5,))
    assert c0_prime(rw) == pytest.approx(ref_c0, rel=1e-10)
    assert kappa(rw) == pytest.approx(ref_kappa, rel=1e-10)


def test_nonpositive_sectional_sampling():
    from pherm import sample_curvatures

    rw = model_curvature(build_model("su_pq", (2, 1)))
    ranges = sample_curvatures(rw, n=200, seed=3)
    assert ranges["sectional"][1] <= 1e-10
    assert ranges["complex_sectional"][1] <= 1e-10
