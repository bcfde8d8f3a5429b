#pragma once

#include <string>

#include <json.hpp>

#include "islkit/matfun.hpp"

namespace islkit {

// A validated density matrix: Hermitian (within 1e-10), unit trace (within
// 1e-10), eigenvalues >= -1e-10. The stored matrix is the Hermitian part of
// the input, so downstream spectral code sees an exactly Hermitian operand.
class DensityMatrix {
public:
    static DensityMatrix validate(const matfun::Matrix& m);

    const matfun::Matrix& matrix() const noexcept { return m_; }
    int dim() const noexcept { return static_cast<int>(m_.rows()); }

    // tr(rho^2); equals the squared Frobenius norm for Hermitian rho.
    double purity() const { return m_.squaredNorm(); }

private:
    explicit DensityMatrix(matfun::Matrix m) : m_(std::move(m)) {}
    matfun::Matrix m_;
};

// rho = re + i*im with re symmetric PSD unit-trace and im real antisymmetric.
struct RealImDecomposition {
    DensityMatrix re;
    matfun::RealMatrix im;
};

RealImDecomposition decompose(const DensityMatrix& rho);

// |psi(theta)> = cos(theta/2)|0> + i sin(theta/2)|1>, theta in [0, pi].
DensityMatrix theta_state(double theta);

// The maximally imaginary qubit state (|0> + i|1>)/sqrt(2).
DensityMatrix mis_state();

// sqrt of the Uhlmann fidelity, tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0,1].
double root_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Bures angle arccos(sqrt F) in [0, pi/2].
double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma);

// JSON state format: {"dim": d, "re": [[...]], "im": [[...]]} with row-major
// real matrices; shape mismatches and unknown keys are rejected.
DensityMatrix state_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const DensityMatrix& rho);
DensityMatrix load_state(const std::string& path);
void save_state(const DensityMatrix& rho, const std::string& path);

} // namespace islkit
