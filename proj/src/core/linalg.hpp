#pragma once

#include <vector>

#include "core/cmatrix.hpp"

namespace alcc {

// B[i][l] = nodes[i]^l for l in [0, cols).
CMatrix vandermonde_matrix(const std::vector<cplx>& nodes, std::size_t cols);

// Least-squares solve of A x = b via Householder QR with column pivoting.
// A is rows x cols with rows >= cols; b carries one right-hand side per
// column. Raises errc::singular_system when the pivoted R collapses.
CMatrix qr_least_squares(const CMatrix& a, const CMatrix& b);

// Solves sum_l coeff[l] * nodes[i]^l = rhs[i] for the coefficient rows.
// rhs rows index the nodes; extra rows beyond cols make it least squares.
CMatrix solve_vandermonde(const std::vector<cplx>& nodes, const CMatrix& rhs, std::size_t cols);

inline CMatrix solve_vandermonde(const std::vector<cplx>& nodes, const CMatrix& rhs) {
    return solve_vandermonde(nodes, rhs, nodes.size());
}

// Singular values by one-sided Jacobi, descending. Convergence to machine
// precision; intended for the small matrices this library builds.
std::vector<double> singular_values(const CMatrix& a);

// Ratio of extreme singular values of the square Vandermonde matrix on the
// given nodes. Infinity when the smallest singular value underflows to zero.
double condition_number(const std::vector<cplx>& nodes);

double condition_number_matrix(const CMatrix& a);

// log(det(A)) for Hermitian positive definite A via Cholesky.
double cholesky_logdet(const CMatrix& a);

// Lower-triangular factor L with L L^H = A.
CMatrix cholesky_lower(const CMatrix& a);

// X with L X = B for lower-triangular L.
CMatrix forward_substitute(const CMatrix& l, const CMatrix& b);

// X with A X = B for Hermitian positive definite A.
CMatrix solve_hermitian_pd(const CMatrix& a, const CMatrix& b);

} // namespace alcc
