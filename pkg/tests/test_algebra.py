import numpy as np
import pytest

from bminimal.algebra import (
    SubalgebraBasis,
    build_block,
    build_diagonal,
    build_pauli_diagonal,
    change_of_basis,
    compress,
    contains_identity,
    in_trace_orthocomplement,
    orthonormalize,
    verify_closed,
)
from bminimal.errors import EmptySpan, InvalidPattern, SpanMismatch
from oracles import rand_hermitian

IV = 1 / np.sqrt(2)


def rotated_basis_3():
    """The 45-degree rotated orthonormal basis of the diagonal 3x3 algebra."""
    return orthonormalize(
        [np.diag([1.0, 0, 0]), np.diag([0, IV, -IV]), np.diag([0, IV, IV])]
    )


class TestBuilders:
    def test_diagonal_elements(self):
        basis = build_diagonal(3)
        assert basis.dim == 3
        for i in range(3):
            expected = np.zeros((3, 3))
            expected[i, i] = 1.0
            assert np.array_equal(basis.elements[i].real, expected)

    def test_diagonal_n1(self):
        assert np.array_equal(build_diagonal(1).elements[0].real, [[1.0]])

    def test_block_example(self):
        basis = build_block([(2, "diagonal"), (2, "full")])
        assert basis.dim == 6
        for i in range(4):
            expected = np.zeros((4, 4))
            expected[i, i] = 1.0
            assert np.allclose(basis.elements[i].real, expected, atol=0)
        sym = np.zeros((4, 4), dtype=complex)
        sym[2, 3] = sym[3, 2] = IV
        anti = np.zeros((4, 4), dtype=complex)
        anti[2, 3] = -1j * IV
        anti[3, 2] = 1j * IV
        assert np.allclose(basis.elements[4], sym, atol=1e-15)
        assert np.allclose(basis.elements[5], anti, atol=1e-15)

    def test_block_all_diagonal_matches_diagonal(self):
        assert np.array_equal(
            build_block([(3, "diagonal")]).elements, build_diagonal(3).elements
        )

    def test_block_full_spans_everything(self):
        basis = build_block([(3, "full")])
        assert basis.dim == 9  # n + 2 * n(n-1)/2 = n^2

    def test_block_bad_pattern(self):
        with pytest.raises(InvalidPattern):
            build_block([(2, "diagonal")], n=3)
        with pytest.raises(InvalidPattern):
            build_block([(0, "full")])
        with pytest.raises(InvalidPattern):
            build_block([(2, "banded")])

    def test_pauli_q2_elements(self):
        basis = build_pauli_diagonal(2)
        diags = [np.real(np.diag(e)) for e in basis.elements]
        assert np.allclose(diags[0], [0.5, 0.5, 0.5, 0.5])
        assert np.allclose(diags[1], [0.5, 0.5, -0.5, -0.5])
        assert np.allclose(diags[2], [0.5, -0.5, 0.5, -0.5])
        assert np.allclose(diags[3], [0.5, -0.5, -0.5, 0.5])

    def test_pauli_q1(self):
        basis = build_pauli_diagonal(1)
        assert np.allclose(basis.elements[0].real, np.eye(2) / np.sqrt(2))
        assert np.allclose(basis.elements[1].real, np.diag([1.0, -1.0]) / np.sqrt(2))

    def test_pauli_spans_diagonal(self):
        # invertible change of basis exists, so the spans coincide
        c = change_of_basis(build_diagonal(4), build_pauli_diagonal(2))
        assert np.linalg.matrix_rank(c) == 4

    def test_builders_closed_and_orthonormal(self):
        for basis in (
            build_diagonal(4),
            build_block([(2, "diagonal"), (2, "full")]),
            build_block([(1, "diagonal"), (3, "full")]),
            build_pauli_diagonal(2),
            build_pauli_diagonal(3),
        ):
            assert verify_closed(basis, 1e-10)
            gram = np.real(np.einsum("aij,bji->ab", basis.elements, basis.elements))
            assert np.linalg.norm(gram - np.eye(basis.dim)) <= 1e-10


class TestOrthonormalize:
    def test_normalizes_orthogonal_pair(self):
        basis = orthonormalize([np.eye(2), np.diag([1.0, -1.0])])
        assert np.allclose(basis.elements[0].real, np.eye(2) / np.sqrt(2))
        assert np.allclose(basis.elements[1].real, np.diag([1.0, -1.0]) / np.sqrt(2))

    def test_gram_schmidt_by_hand(self):
        # diag(1,0) stays; diag(1,1) minus its diag(1,0)-component leaves diag(0,1)
        basis = orthonormalize([np.diag([1.0, 0.0]), np.diag([1.0, 1.0])])
        assert basis.dim == 2
        assert np.allclose(basis.elements[0].real, np.diag([1.0, 0.0]))
        assert np.allclose(basis.elements[1].real, np.diag([0.0, 1.0]))

    def test_drops_dependent(self):
        basis = orthonormalize([np.eye(2), 2.0 * np.eye(2)])
        assert basis.dim == 1
        assert np.allclose(basis.elements[0].real, np.eye(2) / np.sqrt(2))

    def test_empty_span(self):
        with pytest.raises(EmptySpan):
            orthonormalize([np.zeros((2, 2))])
        with pytest.raises(EmptySpan):
            orthonormalize([])


class TestVerifyClosed:
    def test_diagonal_closed(self):
        assert verify_closed(build_diagonal(3), 1e-10)

    def test_generated_by_involution(self):
        # X^2 = I lands back in span{I, X}
        basis = orthonormalize([np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]])])
        assert verify_closed(basis, 1e-10)

    def test_single_projection(self):
        e1 = np.zeros((3, 3))
        e1[0, 0] = 1.0
        assert verify_closed(orthonormalize([e1]), 1e-10)

    def test_detects_not_closed(self):
        # span{I, (e1 e2* + e2 e1*)/sqrt(2)} in M_3: the square of the swap
        # part is a rank-two projection outside the span
        sym = np.zeros((3, 3))
        sym[0, 1] = sym[1, 0] = 1.0
        basis = orthonormalize([np.eye(3), sym])
        assert not verify_closed(basis, 1e-10)


class TestCompress:
    def test_rank_one_projection(self):
        rho = np.zeros((3, 3))
        rho[0, 0] = 1.0
        assert np.allclose(compress(rho, build_diagonal(3)), [1.0, 0.0, 0.0], atol=0)

    def test_half_projection(self):
        p = 0.5 * np.array([[1, 1, 0], [1, 1, 0], [0, 0, 0.0]])
        assert np.allclose(compress(p, build_diagonal(3)), [0.5, 0.5, 0.0], atol=0)

    def test_uniform_state_pauli(self):
        rho = np.full((4, 4), 0.25)
        assert np.allclose(
            compress(rho, build_pauli_diagonal(2)), [0.5, 0.0, 0.0, 0.0], atol=1e-15
        )

    def test_linearity(self):
        rng = np.random.default_rng(30)
        basis = build_pauli_diagonal(2)
        a, b = rand_hermitian(rng, 4), rand_hermitian(rng, 4)
        alpha, beta = rng.standard_normal(2)
        lhs = compress(alpha * a + beta * b, basis)
        rhs = alpha * compress(a, basis) + beta * compress(b, basis)
        assert np.linalg.norm(lhs - rhs) <= 1e-10

    def test_nonexpansive(self):
        rng = np.random.default_rng(31)
        basis = build_block([(2, "diagonal"), (2, "full")])
        for _ in range(10):
            rho = rand_hermitian(rng, 4)
            assert np.linalg.norm(compress(rho, basis)) <= np.linalg.norm(rho) + 1e-12

    def test_rejects_non_hermitian(self):
        # the antisymmetric basis element picks up an imaginary trace
        nilpotent = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError, match="imaginary"):
            compress(nilpotent, build_block([(2, "full")]))


class TestChangeOfBasis:
    def test_rotation_45_degrees(self):
        c = change_of_basis(build_diagonal(3), rotated_basis_3())
        expected = np.array([[1, 0, 0], [0, IV, -IV], [0, IV, IV]])
        assert np.allclose(c, expected, atol=1e-12)

    def test_walsh_for_pauli(self):
        c = change_of_basis(build_diagonal(4), build_pauli_diagonal(2))
        walsh = 0.5 * np.array(
            [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]
        )
        assert np.allclose(c, walsh, atol=1e-15)

    def test_identity_on_same_basis(self):
        basis = build_diagonal(3)
        assert np.allclose(change_of_basis(basis, basis), np.eye(3), atol=0)

    def test_orthogonal_and_inverse_pair(self):
        e = build_diagonal(4)
        b = build_pauli_diagonal(2)
        c_eb = change_of_basis(e, b)
        c_be = change_of_basis(b, e)
        assert np.linalg.norm(c_eb @ c_eb.T - np.eye(4)) <= 1e-10
        assert np.linalg.norm(c_eb @ c_be - np.eye(4)) <= 1e-10

    def test_transforms_coordinates(self):
        rng = np.random.default_rng(32)
        e = build_diagonal(4)
        b = build_pauli_diagonal(2)
        c = change_of_basis(e, b)
        for _ in range(5):
            rho = rand_hermitian(rng, 4)
            assert np.linalg.norm(compress(rho, b) - c @ compress(rho, e)) <= 1e-10

    def test_span_mismatch(self):
        e1 = np.zeros((2, 2))
        e1[0, 0] = 1.0
        with pytest.raises(SpanMismatch):
            change_of_basis(orthonormalize([e1]), orthonormalize([np.eye(2)]))
        with pytest.raises(SpanMismatch):
            change_of_basis(build_diagonal(2), build_pauli_diagonal(2))


class TestTraceOrthocomplement:
    def test_zero_diagonal(self):
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert in_trace_orthocomplement(x, build_diagonal(2), 1e-10)

    def test_identity_fails_for_unital(self):
        assert not in_trace_orthocomplement(np.eye(2), build_pauli_diagonal(1), 1e-10)

    def test_swap_three(self):
        x = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0.0]])
        assert in_trace_orthocomplement(x, build_diagonal(3), 1e-10)


class TestUnit:
    def test_unital_builders(self):
        for basis in (build_diagonal(3), build_pauli_diagonal(2),
                      build_block([(2, "diagonal"), (2, "full")])):
            assert contains_identity(basis)

    def test_non_unital(self):
        e1 = np.zeros((3, 3))
        e1[0, 0] = 1.0
        assert not contains_identity(orthonormalize([e1]))


class TestValidation:
    def test_rejects_non_orthonormal_stack(self):
        bad = np.stack([np.eye(2), np.eye(2)]).astype(complex)
        with pytest.raises(ValueError, match="orthonormal"):
            SubalgebraBasis(elements=bad)
