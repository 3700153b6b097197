"""Dense solve and the small matrix helpers."""

import numpy as np
import numpy.testing as npt
import pytest

from fivecast.errors import DomainError, ShapeError, SingularError
from fivecast.linalg import dot, matmul, matvec, solve, transpose


def textbook_solve(a, b):
    """Row-reduction oracle written independently of the module under test.

    Scales each pivot row to a unit pivot before eliminating the whole
    column (above and below), i.e. Gauss-Jordan rather than the forward
    elimination + back substitution the module uses.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    aug = np.hstack([a, b[:, None]])
    for k in range(n):
        p = k + int(np.argmax(np.abs(aug[k:, k])))
        aug[[k, p]] = aug[[p, k]]
        aug[k] = aug[k] / aug[k, k]
        for i in range(n):
            if i != k:
                aug[i] = aug[i] - aug[i, k] * aug[k]
    return aug[:, n]


class TestSolve:
    def test_identity(self):
        b = np.array([3.0, -1.0, 2.5])
        npt.assert_array_equal(solve(np.eye(3), b), b)

    def test_diagonal(self):
        a = np.diag([2.0, 4.0, 8.0])
        npt.assert_allclose(solve(a, np.array([2.0, 2.0, 2.0])), [1.0, 0.5, 0.25])

    def test_requires_pivoting(self):
        # zero in the (0, 0) position forces a row exchange
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        npt.assert_allclose(solve(a, np.array([5.0, 7.0])), [7.0, 5.0])

    def test_two_by_two_by_hand(self):
        a = np.array([[2.0, 1.0], [1.0, 3.0]])
        # x = (1, 2): b = (4, 7)
        npt.assert_allclose(solve(a, np.array([4.0, 7.0])), [1.0, 2.0], atol=1e-14)

    def test_matches_row_reduction_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.standard_normal((8, 8)) + 8.0 * np.eye(8)
            b = rng.standard_normal(8)
            npt.assert_allclose(solve(a, b), textbook_solve(a, b), rtol=1e-8)

    def test_matches_library_solver(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            a = rng.standard_normal((6, 6)) + 6.0 * np.eye(6)
            b = rng.standard_normal(6)
            npt.assert_allclose(solve(a, b), np.linalg.solve(a, b), rtol=1e-8)

    def test_residual_small(self):
        rng = np.random.default_rng(8)
        for n in (2, 5, 11, 30):
            a = rng.standard_normal((n, n))
            a += n * np.eye(n)  # diagonally dominant, well conditioned
            b = rng.standard_normal(n)
            x = solve(a, b)
            npt.assert_allclose(a @ x, b, atol=1e-9)

    def test_recovers_known_solution(self):
        # orthogonal basis times a modest diagonal keeps the condition number low
        rng = np.random.default_rng(5)
        for _ in range(10):
            q, _ = np.linalg.qr(rng.standard_normal((7, 7)))
            a = q @ np.diag(rng.uniform(0.5, 50.0, size=7)) @ q.T
            x = rng.standard_normal(7)
            npt.assert_allclose(solve(a, a @ x), x, rtol=1e-7, atol=1e-10)

    def test_singular_matrix(self):
        a = np.array([[1.0, 2.0], [2.0, 4.0]])
        with pytest.raises(SingularError, match="column"):
            solve(a, np.array([1.0, 2.0]))

    def test_zero_matrix(self):
        with pytest.raises(SingularError, match="column 0"):
            solve(np.zeros((3, 3)), np.ones(3))

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            solve(np.ones((2, 3)), np.ones(2))
        with pytest.raises(ShapeError):
            solve(np.ones((2, 2)), np.ones(3))
        with pytest.raises(ShapeError):
            solve(np.ones(4), np.ones(2))
        with pytest.raises(ShapeError):
            solve(np.ones((0, 0)), np.ones(0))

    def test_nonfinite_entries(self):
        with pytest.raises(DomainError):
            solve(np.array([[np.nan, 0.0], [0.0, 1.0]]), np.ones(2))
        with pytest.raises(DomainError):
            solve(np.eye(2), np.array([1.0, np.inf]))

    def test_inputs_not_mutated(self):
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        b = np.array([5.0, 7.0])
        solve(a, b)
        npt.assert_array_equal(a, [[0.0, 1.0], [1.0, 0.0]])
        npt.assert_array_equal(b, [5.0, 7.0])


class TestHelpers:
    def test_matvec(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        npt.assert_array_equal(matvec(a, np.array([1.0, 1.0])), [3.0, 7.0])

    def test_matvec_shape(self):
        with pytest.raises(ShapeError):
            matvec(np.ones((2, 3)), np.ones(2))

    def test_matmul(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[0.0, 1.0], [1.0, 0.0]])
        npt.assert_array_equal(matmul(a, b), [[2.0, 1.0], [4.0, 3.0]])

    def test_matmul_shape(self):
        with pytest.raises(ShapeError):
            matmul(np.ones((2, 3)), np.ones((2, 3)))

    def test_transpose(self):
        a = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        npt.assert_array_equal(transpose(a), [[1.0, 4.0], [2.0, 5.0], [3.0, 6.0]])

    def test_transpose_of_product(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((3, 4))
        b = rng.standard_normal((4, 2))
        npt.assert_allclose(
            transpose(matmul(a, b)), matmul(transpose(b), transpose(a))
        )

    def test_dot(self):
        assert dot(np.array([1.0, 2.0]), np.array([3.0, 4.0])) == 11.0
        assert isinstance(dot(np.ones(2), np.ones(2)), float)

    def test_dot_shape(self):
        with pytest.raises(ShapeError):
            dot(np.ones(2), np.ones(3))
