#pragma once

#include <Eigen/Dense>

#include "islkit/errors.hpp"

namespace islkit::matfun {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

// Hermiticity acceptance threshold shared by every consumer of eig_hermitian.
inline constexpr double kHermTol = 1e-10;
// Eigenvalues in [-kEigClampTol, 0) are treated as roundoff and clamped to 0;
// anything more negative is a genuine positivity violation.
inline constexpr double kEigClampTol = 1e-10;
// Spectral support threshold for ln-on-support and the Sylvester solve.
inline constexpr double kSupportTol = 1e-12;

struct HermitianEig {
    Eigen::VectorXd eigenvalues; // ascending
    Matrix eigenvectors;         // unitary, columns; deterministic phase
};

// Eigendecomposition of a Hermitian matrix. Eigenvalues ascend; each
// eigenvector's phase is fixed so its first nonzero component is real and
// positive, making repeated runs bit-stable.
HermitianEig eig_hermitian(const Matrix& a);

// Principal square root of a PSD Hermitian matrix.
Matrix mat_sqrt_psd(const Matrix& a);

// Spectral logarithm restricted to the support: eigenvalues <= tol contribute
// zero instead of -inf, so pure states have vanishing log-norm.
Matrix mat_ln_on_support(const Matrix& a, double tol = kSupportTol);

// Schatten-1 norm (sum of singular values).
double trace_norm(const Matrix& a);

// Hilbert-Schmidt (Frobenius) norm.
double hs_norm(const Matrix& a);

struct SylvesterResult {
    Matrix x;            // Hermitian solution of sqrt_rho*X + X*sqrt_rho = drho
    bool kernel_warning; // some (i,j) had s_i + s_j <= tol with |drho_ij| > tol
};

// Derivative of the matrix square root: solves the Sylvester identity in the
// eigenbasis of sqrt_rho, X_ij = drho_ij / (s_i + s_j); kernel blocks are
// zeroed and flagged rather than treated as errors.
SylvesterResult dsqrt_dt(const Matrix& sqrt_rho, const Matrix& drho,
                         double tol = kSupportTol);

} // namespace islkit::matfun
