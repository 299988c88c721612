import numpy as np
import pytest

from mftk import opalg
from mftk.errors import DimensionMismatchError, NonHermitianError, NotPositiveSemidefiniteError


def random_hermitian(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2


def test_dagger_and_hermitize():
    m = np.array([[1, 2j], [3, 4]], dtype=complex)
    np.testing.assert_allclose(opalg.dagger(m), m.conj().T)
    h = opalg.hermitize(m)
    assert opalg.is_hermitian(h)
    np.testing.assert_allclose(h, (m + m.conj().T) / 2)


def test_is_hermitian_tolerance():
    m = np.eye(2, dtype=complex)
    assert opalg.is_hermitian(m)
    m = m.copy()
    m[0, 1] = 1e-12
    assert opalg.is_hermitian(m)  # below 1e-10
    m[0, 1] = 1e-8
    assert not opalg.is_hermitian(m)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        opalg.as_matrix(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        opalg.as_matrix(np.array([[np.inf, 0], [0, 1]]))


def test_freeze_is_read_only():
    m = opalg.freeze(np.eye(2))
    with pytest.raises(ValueError):
        m[0, 0] = 5.0


def test_tensor_matches_kron():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_allclose(opalg.tensor(a, b), np.kron(a, b))


def test_partial_trace_of_product():
    rng = np.random.default_rng(4)
    for d1, d2 in [(2, 2), (2, 3), (3, 4)]:
        a = random_hermitian(d1, rng)
        b = random_hermitian(d2, rng)
        joint = opalg.tensor(a, b)
        np.testing.assert_allclose(
            opalg.partial_trace(joint, d1, d2, keep="first"), a * np.trace(b), atol=1e-12
        )
        np.testing.assert_allclose(
            opalg.partial_trace(joint, d1, d2, keep="second"), b * np.trace(a), atol=1e-12
        )


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(5)
    m = random_hermitian(6, rng)
    for keep in ("first", "second"):
        reduced = opalg.partial_trace(m, 2, 3, keep=keep)
        np.testing.assert_allclose(np.trace(reduced), np.trace(m), atol=1e-12)


def test_partial_trace_shape_errors():
    with pytest.raises(DimensionMismatchError):
        opalg.partial_trace(np.eye(5), 2, 3, keep="first")
    with pytest.raises(ValueError):
        opalg.partial_trace(np.eye(6), 2, 3, keep="both")


def test_eigensystem_matches_numpy():
    rng = np.random.default_rng(6)
    h = random_hermitian(4, rng)
    w, v = opalg.hermitian_eigensystem(h)
    np.testing.assert_allclose((v * w) @ v.conj().T, h, atol=1e-12)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
    assert np.all(np.diff(w) >= 0)


def test_eigensystem_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        opalg.hermitian_eigensystem(np.array([[0, 1], [0, 0]], dtype=complex))


def test_min_eigenvalue():
    h = np.diag([3.0, -0.25, 1.0]).astype(complex)
    assert opalg.min_eigenvalue(h) == pytest.approx(-0.25)


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(7)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = g @ g.conj().T
    root = opalg.psd_sqrt(h)
    np.testing.assert_allclose(root @ root, h, atol=1e-10)


def test_psd_sqrt_clamps_round_off_but_rejects_real_negativity():
    # A tiny negative eigenvalue is round-off; a real one is an error.
    assert opalg.psd_sqrt(np.diag([1.0, -1e-9]).astype(complex))[1, 1] == 0
    with pytest.raises(NotPositiveSemidefiniteError):
        opalg.psd_sqrt(np.diag([1.0, -1e-6]).astype(complex))


def test_psd_clip_projects_and_is_idempotent():
    h = np.diag([2.0, -0.5]).astype(complex)
    clipped = opalg.psd_clip(h)
    np.testing.assert_allclose(clipped, np.diag([2.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(opalg.psd_clip(clipped), clipped, atol=1e-12)


def test_hermitian_basis_orthonormal():
    for dim in (1, 2, 3, 4):
        basis = opalg.hermitian_basis(dim)
        assert len(basis.elements) == dim * dim
        for i, a in enumerate(basis.elements):
            assert opalg.is_hermitian(a)
            for j, b in enumerate(basis.elements):
                expected = 1.0 if i == j else 0.0
                assert np.trace(a @ b).real == pytest.approx(expected, abs=1e-12)


def test_hermitian_basis_round_trip():
    rng = np.random.default_rng(8)
    for dim in (2, 3):
        basis = opalg.hermitian_basis(dim)
        h = random_hermitian(dim, rng)
        coords = basis.coords(h)
        assert coords.dtype == float
        np.testing.assert_allclose(basis.matrix(coords), h, atol=1e-12)
