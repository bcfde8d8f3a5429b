#include "islkit/measures.hpp"

#include <cmath>

namespace islkit {

double von_neumann_entropy(const DensityMatrix& rho) {
    matfun::HermitianEig e = matfun::eig_hermitian(rho.matrix());
    double s = 0.0;
    for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
        const double p = e.eigenvalues(i);
        if (p > matfun::kSupportTol) {
            s -= p * std::log(p);
        }
    }
    return std::max(s, 0.0);
}

double m_tr(const DensityMatrix& rho) {
    return matfun::trace_norm(decompose(rho).im.cast<matfun::Complex>());
}

double m_r(const DensityMatrix& rho) {
    const double diff = von_neumann_entropy(decompose(rho).re) - von_neumann_entropy(rho);
    // Nonnegative in exact arithmetic; absorb eigensolver roundoff only.
    if (diff < 0.0 && diff > -1e-10) {
        return 0.0;
    }
    return diff;
}

double m_g(const DensityMatrix& rho) {
    matfun::Matrix t = rho.matrix().transpose();
    const double rf = root_fidelity(rho, DensityMatrix::validate(t));
    return (1.0 - rf) / 2.0;
}

double imaginarity_angle(const DensityMatrix& rho) {
    const double g = std::clamp(m_g(rho), 0.0, 0.5);
    return std::acos(std::sqrt(1.0 - g));
}

double measure(MeasureKind kind, const DensityMatrix& rho) {
    switch (kind) {
    case MeasureKind::TraceDistance:
        return m_tr(rho);
    case MeasureKind::RelativeEntropy:
        return m_r(rho);
    case MeasureKind::Geometric:
        return m_g(rho);
    }
    throw errors::internal_consistency("unhandled measure kind");
}

const char* measure_name(MeasureKind kind) {
    switch (kind) {
    case MeasureKind::TraceDistance:
        return "tr";
    case MeasureKind::RelativeEntropy:
        return "rel";
    case MeasureKind::Geometric:
        return "geom";
    }
    return "?";
}

} // namespace islkit
