#include "islkit/liouville.hpp"

#include <cmath>

namespace islkit {

using matfun::Complex;
using matfun::Matrix;

Eigen::VectorXcd vec(const Matrix& x) {
    const int d = static_cast<int>(x.rows());
    if (x.cols() != d) {
        throw errors::dimension_mismatch(d, static_cast<int>(x.cols()));
    }
    Eigen::VectorXcd v(d * d);
    for (int j = 0; j < d; ++j) {
        v.segment(j * d, d) = x.col(j);
    }
    return v;
}

Matrix devec(const Eigen::VectorXcd& v, int dim) {
    if (dim <= 0 || v.size() != static_cast<Eigen::Index>(dim) * dim) {
        throw errors::dimension_mismatch(dim * dim, static_cast<int>(v.size()));
    }
    Matrix x(dim, dim);
    for (int j = 0; j < dim; ++j) {
        x.col(j) = v.segment(j * dim, dim);
    }
    return x;
}

VectorizedState vectorize(const DensityMatrix& rho) {
    VectorizedState out;
    out.dim = rho.dim();
    out.vector = vec(rho.matrix());
    out.norm = out.vector.norm();
    return out;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// L = -i (I (x) H - H^T (x) I)
//     + sum_k r_k [ conj(A) (x) A - (I (x) A^dag A + (A^dag A)^T (x) I)/2 ]
Matrix lindblad_superoperator(const Matrix& h, const std::vector<Generator::Jump>& jumps,
                              double t, int d) {
    const Matrix id = Matrix::Identity(d, d);
    Matrix l = Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& j : jumps) {
        const double r = j.rate(t);
        const Matrix ada = j.op.adjoint() * j.op;
        l += r * (kron(j.op.conjugate(), j.op) -
                  (kron(id, ada) + kron(ada.transpose(), id)) / 2.0);
    }
    return l;
}

} // namespace

Matrix superoperator_matrix(const Generator& g, double t) {
    const int d = g.dim();
    switch (g.kind) {
    case Generator::Kind::Unitary:
        return lindblad_superoperator(g.hamiltonian, {}, t, d);
    case Generator::Kind::Dephasing: {
        Matrix z(2, 2);
        z << 1.0, 0.0, 0.0, -1.0;
        std::vector<Generator::Jump> jumps;
        // (gamma/2)(Z rho Z - rho) is the Lindblad term with jump Z at rate gamma/2.
        jumps.push_back({z, RateFunction::constant(g.gamma(t) / 2.0)});
        const Matrix h = (g.omega0 / 2.0) * z;
        return lindblad_superoperator(h, jumps, t, 2);
    }
    case Generator::Kind::Dissipative: {
        Matrix sm = Matrix::Zero(2, 2);
        sm(1, 0) = 1.0;
        std::vector<Generator::Jump> jumps;
        jumps.push_back({sm, RateFunction::constant(g.gamma(t) / 2.0)});
        return lindblad_superoperator(Matrix::Zero(2, 2), jumps, t, 2);
    }
    case Generator::Kind::CustomLindblad:
        return lindblad_superoperator(g.hamiltonian, g.jumps, t, d);
    }
    throw errors::internal_consistency("unhandled generator kind");
}

double liouvillian_fluctuation(const Generator& g, double t, const DensityMatrix& rho) {
    if (rho.dim() != g.dim()) {
        throw errors::dimension_mismatch(g.dim(), rho.dim());
    }
    const VectorizedState v = vectorize(rho);
    const double n2 = v.norm * v.norm;
    if (n2 <= 1e-14) {
        throw errors::degenerate_state(n2);
    }
    const Matrix l = superoperator_matrix(g, t);
    const Eigen::VectorXcd lv = l * v.vector;
    const Complex expect = v.vector.dot(lv) / n2; // (r|L|r)/(r|r)
    const double second = lv.squaredNorm() / n2;  // (r|L^dag L|r)/(r|r)
    double var = second - std::norm(expect);
    if (var < -1e-12) {
        throw errors::internal_consistency("negative generator variance");
    }
    return std::sqrt(std::max(var, 0.0));
}

double superop_norm(const Generator& g, double t) {
    const Matrix l = superoperator_matrix(g, t);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(l.adjoint() * l);
    if (solver.info() != Eigen::Success) {
        throw errors::internal_consistency("eigensolver failed on L^dag L");
    }
    return std::sqrt(std::max(solver.eigenvalues().maxCoeff(), 0.0));
}

double liouville_angle(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw errors::dimension_mismatch(rho.dim(), sigma.dim());
    }
    const double nr = std::sqrt(rho.purity());
    const double ns = std::sqrt(sigma.purity());
    if (nr <= 1e-14 || ns <= 1e-14) {
        throw errors::degenerate_state(std::min(nr, ns) * std::min(nr, ns));
    }
    const double overlap = (rho.matrix().adjoint() * sigma.matrix()).trace().real();
    double cosang = overlap / (nr * ns);
    cosang = std::clamp(cosang, -1.0, 1.0);
    return std::acos(cosang);
}

} // namespace islkit
