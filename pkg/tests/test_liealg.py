import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullcurve import liealg
from nullcurve.errors import LogBranchFailure, NotInRealForm, WrongDimension
from nullcurve.liealg import bracket, frob, split

seeds = st.integers(0, 2 ** 32 - 1)


def test_real_form_invariants(group, rng):
    r = liealg.check_real_form(group, rng)
    for key in ("involution", "antilinear", "homomorphism", "basis_fixed", "symmetry", "Ad_invariance"):
        assert r[key] < 1e-10, key
    assert r["ad_invariance"] < 1e-10
    assert r["rank"] == group.dim
    assert r["min_singular"] > 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_dimensions(n):
    assert liealg.sl_compact(n).dim == n * n - 1
    assert liealg.sl_split(n).dim == n * n - 1
    assert liealg.gl_unitary(n).dim == n * n
    assert liealg.gl_real(n).dim == n * n
    assert liealg.abelian(n).dim == n


def test_split_of_real_element_and_imaginary_element(group, rng):
    Y = group.random_h(rng)
    th, al = split(group, Y)
    assert frob(th - Y) < 1e-14 and frob(al) < 1e-14
    th, al = split(group, 1j * Y)
    assert frob(th) < 1e-14 and frob(al + Y) < 1e-14


def test_split_nilpotent_su2():
    G = liealg.sl_compact(2)
    th, al = split(G, np.array([[0, 1], [0, 0]], dtype=complex))
    assert np.allclose(th, 0.5 * np.array([[0, 1], [-1, 0]]), atol=1e-15)
    assert np.allclose(al, 0.5j * np.array([[0, 1], [1, 0]]), atol=1e-15)


@given(seeds)
def test_split_reconstructs(seed):
    G = liealg.sl_split(3)
    X = G.random_g(np.random.default_rng(seed))
    th, al = split(G, X)
    assert frob(th - 1j * al - X) < 1e-12
    assert G.real_form_residual(th) < 1e-12 and G.real_form_residual(al) < 1e-12


def test_form_eval_su2():
    G = liealg.sl_compact(2, -2.0)
    a = np.diag([0.5j, -0.5j])
    assert abs(liealg.form_eval(G, a, a) - 1.0) < 1e-15


@given(seeds)
def test_form_symmetry(seed):
    rng = np.random.default_rng(seed)
    G = liealg.gl_unitary(3)
    a, b = G.random_h(rng), G.random_h(rng)
    assert abs(liealg.form_eval(G, a, b) - liealg.form_eval(G, b, a)) < 1e-12


def test_formC_on_nilpotent_vanishes():
    G = liealg.sl_compact(2)
    A = np.array([[0, 1], [0, 0]], dtype=complex)
    assert liealg.formC_eval(G, A, A) == 0


def test_form_rejects_non_real_argument():
    G = liealg.sl_compact(2)
    a = np.diag([0.5j, -0.5j])
    with pytest.raises(NotInRealForm):
        liealg.form_eval(G, 1j * a, a)


def test_killing_sl2_brute_force(rng):
    G = liealg.sl_compact(2)
    for _ in range(100):
        X, Y = G.random_g(rng), G.random_g(rng)
        assert abs(liealg.killing_form(G, X, Y) - 4 * np.trace(X @ Y)) < 1e-10


def test_killing_symmetric(rng):
    G = liealg.sl_split(3)
    a, b = G.random_h(rng), G.random_h(rng)
    assert abs(liealg.killing_form(G, a, b) - liealg.killing_form(G, b, a)) < 1e-10


def test_su2_form_is_minus_half_killing(rng):
    G = liealg.sl_compact(2, -2.0)
    for _ in range(10):
        a, b = G.random_h(rng), G.random_h(rng)
        assert abs(liealg.form_eval(G, a, b) + 0.5 * liealg.killing_form(G, a, b)) < 1e-12


@pytest.mark.parametrize("make", [lambda: liealg.sl_compact(2), lambda: liealg.sl_split(2)])
def test_orientation_reference(make):
    G = make()
    E1, E2 = liealg.reference_pair(G)
    assert liealg.orientation_sign(G, E1, E2, bracket(E1, E2)) == 1
    assert liealg.orientation_sign(G, E2, E1, bracket(E1, E2)) == -1
    assert liealg.orientation_sign(G, E1, E2, E1) == 0


def test_orientation_ad_invariant(rng):
    G = liealg.sl_compact(2)
    for _ in range(20):
        u, v, w = (G.random_h(rng) for _ in range(3))
        h = liealg.matrix_exp(G.random_h(rng))
        s = liealg.orientation_sign(G, u, v, w)
        assert s == liealg.orientation_sign(G, *(liealg.Ad(h, x) for x in (u, v, w)))


def test_orientation_needs_dimension_three():
    G = liealg.gl_unitary(2)
    E = G.h_basis
    with pytest.raises(WrongDimension):
        liealg.orientation_sign(G, E[0], E[1], E[2])


def test_exp_examples():
    assert np.allclose(liealg.matrix_exp(np.zeros((2, 2))), np.eye(2))
    assert np.allclose(liealg.matrix_exp(np.diag([1.0, -1.0])), np.diag([np.e, 1 / np.e]))


@given(seeds)
def test_log_exp_round_trip(seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    X *= 0.49 / np.linalg.norm(X, 2)
    assert frob(liealg.matrix_log(liealg.matrix_exp(X)) - X) < 1e-12


def test_log_branch_failure():
    with pytest.raises(LogBranchFailure):
        liealg.matrix_log(np.diag([-1.0, 1.0]))
    with pytest.raises(LogBranchFailure):
        liealg.matrix_log(np.diag([1.0, -2.0]), hermitian=True)


def test_hermitian_sqrt(rng):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    P = A @ A.conj().T + np.eye(3)
    S = liealg.matrix_sqrt(P, hermitian=True)
    assert frob(S @ S - P) < 1e-12 and frob(S - S.conj().T) < 1e-12


def test_expm_derivative_matches_difference(rng):
    X, E = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
    h = 1e-6
    fd = (liealg.matrix_exp(X + h * E) - liealg.matrix_exp(X - h * E)) / (2 * h)
    assert frob(liealg.expm_derivative(X, E) - fd) < 1e-8


def test_orthonormal_basis_signature():
    for G, neg in ((liealg.sl_compact(2), 0), (liealg.sl_split(2), 1), (liealg.gl_real(2, 1.0), 1)):
        basis, signs = G.orthonormal_basis()
        gm = np.array([[liealg.form_eval(G, a, b) for b in basis] for a in basis])
        assert np.allclose(gm, np.diag(signs), atol=1e-12)
        assert np.sum(signs < 0) == neg


def test_coords_round_trip(group, rng):
    a = group.random_h(rng)
    assert frob(group.from_coords(group.coords(a)) - a) < 1e-12


def test_bad_group_arguments():
    with pytest.raises(ValueError):
        liealg.RealFormGroup(2, "so", "antihermitian", np.eye(2)[None], trace_coeff=1.0)
    with pytest.raises(ValueError):
        liealg.RealFormGroup(2, "sl", "antihermitian", np.eye(2)[None])
