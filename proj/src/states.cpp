#include "islkit/states.hpp"

#include <cmath>
#include <fstream>

namespace islkit {

using matfun::Matrix;

DensityMatrix DensityMatrix::validate(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw errors::dimension_mismatch(static_cast<int>(m.rows()),
                                         static_cast<int>(m.cols()));
    }
    const double herm_res = (m - m.adjoint()).norm();
    if (herm_res > matfun::kHermTol) {
        throw errors::not_hermitian(herm_res);
    }
    const double trace_res = std::abs(m.trace().real() - 1.0) + std::abs(m.trace().imag());
    if (trace_res > 1e-10) {
        throw errors::trace_not_one(trace_res);
    }
    Matrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -matfun::kEigClampTol) {
        throw errors::not_psd(min_eig);
    }
    return DensityMatrix(std::move(h));
}

RealImDecomposition decompose(const DensityMatrix& rho) {
    const Matrix& m = rho.matrix();
    matfun::RealMatrix re = m.real();
    matfun::RealMatrix im = m.imag();
    // The stored matrix is exactly Hermitian, so re is symmetric and im
    // antisymmetric up to roundoff; symmetrize to make the contract exact.
    re = ((re + re.transpose()) / 2.0).eval();
    im = ((im - im.transpose()) / 2.0).eval();
    return RealImDecomposition{DensityMatrix::validate(re.cast<matfun::Complex>()), im};
}

DensityMatrix theta_state(double theta) {
    if (theta < 0.0 || theta > M_PI) {
        throw errors::bad_input("theta outside [0, pi]");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Matrix m(2, 2);
    m << matfun::Complex(c * c, 0.0), matfun::Complex(0.0, -c * s),
        matfun::Complex(0.0, c * s), matfun::Complex(s * s, 0.0);
    return DensityMatrix::validate(m);
}

DensityMatrix mis_state() { return theta_state(M_PI / 2.0); }

double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw errors::dimension_mismatch(rho.dim(), sigma.dim());
    }
    Matrix sq = matfun::mat_sqrt_psd(rho.matrix());
    Matrix inner = sq * sigma.matrix() * sq;
    inner = (inner + inner.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(inner);
    const Eigen::VectorXd& vals = solver.eigenvalues();
    // Same noise-floor rule as mat_sqrt_psd: eigenvalues at the solver's
    // noise level are structural zeros, and sqrt would amplify them.
    const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                               std::max(vals(vals.size() - 1), 0.0);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        sum += vals(i) > noise_floor ? std::sqrt(vals(i)) : 0.0;
    }
    if (sum > 1.0 + 1e-10 || sum < -1e-10) {
        throw errors::internal_consistency("root fidelity " + std::to_string(sum) +
                                           " outside [0, 1]");
    }
    return std::clamp(sum, 0.0, 1.0);
}

double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return std::acos(root_fidelity(rho, sigma));
}

namespace {

matfun::RealMatrix real_matrix_from_json(const nlohmann::json& j, int dim,
                                         const char* key) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw errors::bad_input(std::string(key) + " must be a " + std::to_string(dim) +
                                "-row matrix");
    }
    matfun::RealMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const auto& row = j.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            throw errors::bad_input(std::string(key) + " row " + std::to_string(r) +
                                    " must have " + std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) {
            if (!row.at(c).is_number()) {
                throw errors::bad_input(std::string(key) + " entries must be numbers");
            }
            m(r, c) = row.at(c).get<double>();
        }
    }
    return m;
}

} // namespace

DensityMatrix state_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw errors::bad_input("state must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "dim" && key != "re" && key != "im") {
            throw errors::bad_input("unknown state key '" + key + "'");
        }
    }
    if (!j.contains("dim") || !j.contains("re") || !j.contains("im")) {
        throw errors::bad_input("state requires keys dim, re, im");
    }
    if (!j.at("dim").is_number_integer() || j.at("dim").get<int>() < 1) {
        throw errors::bad_input("dim must be a positive integer");
    }
    const int dim = j.at("dim").get<int>();
    matfun::RealMatrix re = real_matrix_from_json(j.at("re"), dim, "re");
    matfun::RealMatrix im = real_matrix_from_json(j.at("im"), dim, "im");
    Matrix m = re.cast<matfun::Complex>() +
               matfun::Complex(0.0, 1.0) * im.cast<matfun::Complex>();
    return DensityMatrix::validate(m);
}

nlohmann::json state_to_json(const DensityMatrix& rho) {
    const int dim = rho.dim();
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (int r = 0; r < dim; ++r) {
        nlohmann::json re_row = nlohmann::json::array();
        nlohmann::json im_row = nlohmann::json::array();
        for (int c = 0; c < dim; ++c) {
            re_row.push_back(rho.matrix()(r, c).real());
            im_row.push_back(rho.matrix()(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return nlohmann::json{{"dim", dim}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw errors::bad_input("cannot open state file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw errors::bad_input("state file " + path + " is not valid JSON: " + e.what());
    }
    return state_from_json(j);
}

void save_state(const DensityMatrix& rho, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw errors::bad_input("cannot write state file " + path);
    }
    out << state_to_json(rho).dump(2) << "\n";
}

} // namespace islkit
