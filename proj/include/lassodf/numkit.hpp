#pragma once

#include <Eigen/Dense>
#include <utility>

#include "lassodf/errors.hpp"

namespace lassodf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace numkit {

// Solves G x = rhs for symmetric positive definite G via Cholesky.
// Throws NotPositiveDefinite when a pivot falls below 1e-14 * max diagonal.
Vector cholesky_solve(const Matrix& G, const Vector& rhs);
Matrix cholesky_solve(const Matrix& G, const Matrix& rhs);

// Least squares argmin ||y - X b||_2 via Householder QR; requires n >= p and
// full column rank (triangular diagonal > 1e-10 * ||X||).
Vector qr_least_squares(const Matrix& X, const Vector& y);

struct EigResult {
    Vector values;   // descending
    Matrix vectors;  // columns match values
};

// Symmetric eigendecomposition; the input is symmetrized as (S + S^T)/2 first.
EigResult sym_eig(const Matrix& S);

// trace(M^{-1} N) for invertible M.
double trace_of_solve(const Matrix& M, const Matrix& N);

}  // namespace numkit
}  // namespace lassodf
