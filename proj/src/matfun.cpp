#include "islkit/matfun.hpp"

#include <cmath>
#include <limits>

namespace islkit::matfun {

namespace {

double herm_residual(const Matrix& a) { return (a - a.adjoint()).norm(); }

// Deterministic eigenvector phases: rotate each column so its first component
// with magnitude above threshold is real and positive.
void fix_phases(Matrix& v) {
    const double threshold = 1e-12;
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            const Complex z = v(r, c);
            if (std::abs(z) > threshold) {
                v.col(c) *= std::conj(z) / std::abs(z);
                break;
            }
        }
    }
}

} // namespace

HermitianEig eig_hermitian(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw errors::dimension_mismatch(static_cast<int>(a.rows()),
                                         static_cast<int>(a.cols()));
    }
    const double res = herm_residual(a);
    if (res > kHermTol) {
        throw errors::not_hermitian(res);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw errors::internal_consistency("eigensolver failed to converge");
    }
    HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
    fix_phases(out.eigenvectors);
    return out;
}

Matrix mat_sqrt_psd(const Matrix& a) {
    HermitianEig e = eig_hermitian(a);
    Eigen::VectorXd vals = e.eigenvalues;
    // Eigenvalues at the solver's noise floor are structural zeros; taking
    // their square root would otherwise turn O(eps) noise into O(sqrt(eps)).
    const double noise_floor =
        64.0 * std::numeric_limits<double>::epsilon() *
        std::max(vals.size() > 0 ? vals(vals.size() - 1) : 0.0, 0.0);
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < -kEigClampTol) {
            throw errors::not_psd(vals(i));
        }
        vals(i) = vals(i) > noise_floor ? std::sqrt(vals(i)) : 0.0;
    }
    return e.eigenvectors * vals.asDiagonal() * e.eigenvectors.adjoint();
}

Matrix mat_ln_on_support(const Matrix& a, double tol) {
    HermitianEig e = eig_hermitian(a);
    Eigen::VectorXd vals = e.eigenvalues;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < -kEigClampTol) {
            throw errors::not_psd(vals(i));
        }
        vals(i) = vals(i) > tol ? std::log(vals(i)) : 0.0;
    }
    return e.eigenvectors * vals.asDiagonal() * e.eigenvectors.adjoint();
}

double trace_norm(const Matrix& a) {
    // Sum of singular values via the Hermitian PSD product a^dag a; reuses the
    // self-adjoint path instead of a general SVD.
    Matrix gram = a.adjoint() * a;
    gram = (gram + gram.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        sum += std::sqrt(std::max(solver.eigenvalues()(i), 0.0));
    }
    return sum;
}

double hs_norm(const Matrix& a) { return a.norm(); }

SylvesterResult dsqrt_dt(const Matrix& sqrt_rho, const Matrix& drho, double tol) {
    if (sqrt_rho.rows() != drho.rows() || sqrt_rho.cols() != drho.cols()) {
        throw errors::dimension_mismatch(static_cast<int>(sqrt_rho.rows()),
                                         static_cast<int>(drho.rows()));
    }
    HermitianEig e = eig_hermitian(sqrt_rho);
    const Eigen::VectorXd& s = e.eigenvalues;
    Matrix d = e.eigenvectors.adjoint() * drho * e.eigenvectors;
    bool warning = false;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.cols(); ++j) {
            const double denom = s(i) + s(j);
            if (denom > tol) {
                d(i, j) /= denom;
            } else {
                if (std::abs(d(i, j)) > tol) {
                    warning = true;
                }
                d(i, j) = Complex(0.0, 0.0);
            }
        }
    }
    Matrix x = e.eigenvectors * d * e.eigenvectors.adjoint();
    x = (x + x.adjoint()) / 2.0;
    return SylvesterResult{std::move(x), warning};
}

} // namespace islkit::matfun
