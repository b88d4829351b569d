import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsitucker.errors import DimensionError, InputError
from hsitucker.tensor import (
    fold,
    frobenius_norm,
    kron,
    matricize,
    mode_product,
    multilinear_project,
)

from conftest import rank1_tensor


def brute_matricize(x, n):
    """Unfold by walking every index, following the slice-side-by-side layout."""
    i1, i2, i3 = x.shape
    if n == 1:
        out = np.zeros((i1, i2 * i3))
        for a in range(i1):
            for b in range(i2):
                for c in range(i3):
                    out[a, b + i2 * c] = x[a, b, c]
    elif n == 2:
        out = np.zeros((i2, i1 * i3))
        for a in range(i1):
            for b in range(i2):
                for c in range(i3):
                    out[b, a + i1 * c] = x[a, b, c]
    else:
        out = np.zeros((i3, i1 * i2))
        for a in range(i1):
            for b in range(i2):
                for c in range(i3):
                    out[c, a + i1 * b] = x[a, b, c]
    return out


def brute_mode_product(x, u, n):
    """Direct summation over the contracted index."""
    shape = list(x.shape)
    shape[n - 1] = u.shape[0]
    out = np.zeros(shape)
    for idx in np.ndindex(*shape):
        total = 0.0
        for k in range(x.shape[n - 1]):
            src = list(idx)
            src[n - 1] = k
            total += u[idx[n - 1], k] * x[tuple(src)]
        out[idx] = total
    return out


def block_kron(a, b):
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i * b.shape[0] : (i + 1) * b.shape[0], j * b.shape[1] : (j + 1) * b.shape[1]] = a[i, j] * b
    return out


dims_st = st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5))


class TestMatricize:
    def test_index_tensor_mode1(self, index_tensor):
        expected = np.array([[1, 3, 5, 7], [2, 4, 6, 8]], dtype=float)
        assert np.array_equal(brute_matricize(index_tensor, 1), expected)
        assert np.array_equal(matricize(index_tensor, 1), expected)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_brute_force(self, rng, n):
        x = rng.standard_normal((3, 4, 5))
        assert np.array_equal(matricize(x, n), brute_matricize(x, n))

    def test_duplicated_slices(self, rng):
        b = rng.standard_normal((3, 4))
        x = np.stack([b, b], axis=2)
        assert np.array_equal(matricize(x, 1), np.hstack([b, b]))
        assert np.array_equal(matricize(x, 1), kron(np.ones((1, 2)), b))

    def test_scalar_tensor(self):
        x = np.full((1, 1, 1), 7.0)
        for n in (1, 2, 3):
            assert np.array_equal(matricize(x, n), [[7.0]])

    def test_bad_mode(self, rng):
        with pytest.raises(DimensionError):
            matricize(rng.standard_normal((2, 2, 2)), 4)

    def test_rejects_nan(self):
        x = np.zeros((2, 2, 2))
        x[0, 0, 0] = np.nan
        with pytest.raises(InputError):
            matricize(x, 1)


class TestFold:
    def test_index_tensor(self, index_tensor):
        m = np.array([[1, 3, 5, 7], [2, 4, 6, 8]], dtype=float)
        assert np.array_equal(fold(m, 1, (2, 2, 2)), index_tensor)

    def test_scalar(self):
        assert fold([[3.0]], 2, (1, 1, 1)).shape == (1, 1, 1)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_round_trip_3x4x5(self, rng, n):
        x = rng.standard_normal((3, 4, 5))
        assert np.array_equal(fold(matricize(x, n), n, x.shape), x)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            fold(np.zeros((2, 3)), 1, (2, 2, 2))

    @settings(max_examples=50, deadline=None)
    @given(dims=dims_st, seed=st.integers(0, 2**32 - 1))
    def test_round_trip_property(self, dims, seed):
        x = np.random.default_rng(seed).standard_normal(dims)
        for n in (1, 2, 3):
            assert np.array_equal(fold(matricize(x, n), n, dims), x)


class TestModeProduct:
    def test_identity(self, rng):
        x = rng.standard_normal((2, 3, 4))
        for n in (1, 2, 3):
            assert np.allclose(mode_product(x, np.eye(x.shape[n - 1]), n), x, rtol=0, atol=1e-15)

    def test_sum_of_slices(self, index_tensor):
        out = mode_product(index_tensor, [[1.0, 1.0]], 3)
        assert out.shape == (2, 2, 1)
        assert np.array_equal(out[:, :, 0], [[6.0, 10.0], [8.0, 12.0]])
        assert np.array_equal(out, brute_mode_product(index_tensor, np.array([[1.0, 1.0]]), 3))

    def test_zero_matrix(self, rng):
        x = rng.standard_normal((2, 3, 4))
        assert not np.any(mode_product(x, np.zeros((5, 3)), 2))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_direct_summation_and_unfolding(self, rng, n):
        x = rng.standard_normal((3, 4, 5))
        u = rng.standard_normal((2, x.shape[n - 1]))
        out = mode_product(x, u, n)
        dims = list(x.shape)
        dims[n - 1] = 2
        assert np.allclose(out, brute_mode_product(x, u, n), atol=1e-12)
        assert np.allclose(out, fold(u @ matricize(x, n), n, dims), atol=1e-12)

    def test_mismatch_names_mode(self, rng):
        with pytest.raises(DimensionError) as err:
            mode_product(rng.standard_normal((2, 3, 4)), np.ones((2, 2)), 3)
        assert err.value.mode == 3
        assert "mode-3" in str(err.value)

    @settings(max_examples=30, deadline=None)
    @given(dims=dims_st, n=st.integers(1, 3), seed=st.integers(0, 2**32 - 1), data=st.data())
    def test_orthonormal_projection_never_grows_norm(self, dims, n, seed, data):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(dims)
        r = data.draw(st.integers(1, dims[n - 1]))
        u = np.linalg.qr(rng.standard_normal((dims[n - 1], r)))[0]
        norm = frobenius_norm(x)
        assert frobenius_norm(mode_product(x, u.T, n)) <= norm + 1e-12 * norm


class TestMultilinear:
    def test_identity_both_ways(self, rng):
        x = rng.standard_normal((2, 3, 4))
        eye = [np.eye(d) for d in x.shape]
        assert np.allclose(multilinear_project(x, eye, transposed=True), x, atol=1e-15)
        assert np.allclose(multilinear_project(x, eye, transposed=False), x, atol=1e-15)

    def test_full_rank_orthonormal_round_trip(self, rng):
        x = rng.standard_normal((3, 4, 5))
        qs = [np.linalg.qr(rng.standard_normal((d, d)))[0] for d in x.shape]
        back = multilinear_project(multilinear_project(x, qs, transposed=True), qs)
        assert np.linalg.norm(back - x) / np.linalg.norm(x) < 1e-10

    def test_rank1_core(self, rng):
        a, b, c = (v / np.linalg.norm(v) for v in (rng.standard_normal(d) for d in (3, 4, 5)))
        x = rank1_tensor(a, b, c)
        core = multilinear_project(x, [a[:, None], b[:, None], c[:, None]], transposed=True)
        # direct contraction oracle: sum_ijk x_ijk a_i b_j c_k
        direct = sum(x[i, j, k] * a[i] * b[j] * c[k] for i in range(3) for j in range(4) for k in range(5))
        assert core.shape == (1, 1, 1)
        assert core[0, 0, 0] == pytest.approx(direct, abs=1e-12)
        assert core[0, 0, 0] == pytest.approx(1.0, abs=1e-12)

    def test_mismatch(self, rng):
        with pytest.raises(DimensionError):
            multilinear_project(rng.standard_normal((2, 3, 4)), [np.eye(2), np.eye(2), np.eye(4)], transposed=True)


class TestNormAndKron:
    def test_ones(self):
        assert frobenius_norm(np.ones((2, 3, 4))) == pytest.approx(np.sqrt(24), rel=1e-15)

    def test_zero(self):
        assert frobenius_norm(np.zeros((2, 2, 2))) == 0.0

    def test_index_tensor(self, index_tensor):
        assert sum(k * k for k in range(1, 9)) == 204
        assert frobenius_norm(index_tensor) == pytest.approx(np.sqrt(204), rel=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_norm_equals_unfolding_norm(self, rng, n):
        x = rng.standard_normal((3, 4, 5))
        assert frobenius_norm(x) ** 2 == pytest.approx(np.linalg.norm(matricize(x, n)) ** 2, rel=1e-12)

    def test_kron_scalar(self, rng):
        b = rng.standard_normal((3, 2))
        assert np.array_equal(kron([[1.0]], b), b)

    def test_kron_duplicates(self, rng):
        b = rng.standard_normal((3, 2))
        assert np.array_equal(kron([[1.0, 1.0]], b), np.hstack([b, b]))

    def test_kron_matches_block_oracle(self, rng):
        a, b = rng.standard_normal((2, 3)), rng.standard_normal((4, 2))
        assert np.array_equal(kron(a, b), block_kron(a, b))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), shape=st.tuples(*[st.integers(1, 3)] * 8))
    def test_mixed_product_identity(self, seed, shape):
        # (A⊗B)(C⊗D)(E⊗F) = (ACE)⊗(BDF), both sides computed independently
        rng = np.random.default_rng(seed)
        p, q, r, s, t, u, v, w = shape
        A, C, E = rng.standard_normal((p, q)), rng.standard_normal((q, r)), rng.standard_normal((r, s))
        B, D, F = rng.standard_normal((t, u)), rng.standard_normal((u, v)), rng.standard_normal((v, w))
        lhs = block_kron(A, B) @ block_kron(C, D) @ block_kron(E, F)
        rhs = kron(A @ C @ E, B @ D @ F)
        assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(np.linalg.norm(rhs), 1.0)

    def test_duplicated_slice_model(self, rng):
        b = rng.standard_normal((4, 3))
        x = np.stack([b] * 5, axis=2)
        ones = np.ones((1, 5))
        assert np.array_equal(matricize(x, 1), kron(ones, b))
        assert np.array_equal(matricize(x, 2), kron(ones, b.T))
