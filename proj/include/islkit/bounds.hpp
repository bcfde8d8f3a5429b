#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "islkit/dynamics.hpp"
#include "islkit/measures.hpp"

namespace islkit {

enum class Theorem { T1, T2, T3, T4, Cor1, StochApprox };

const char* theorem_name(Theorem t);

// One evaluated lower bound on one trajectory. t_isl = |delta_I| / lambda
// when lambda > 0 and 0 when delta_I = 0. diagnostics carries named
// intermediate quantities plus flags: "valid" (t_isl <= t_actual + 1e-6,
// evaluated, never enforced), "vacuous" (delta_I and denominator both zero),
// "kernel_warnings", "singular_start".
struct BoundReport {
    Theorem theorem = Theorem::T1;
    double delta_I = 0.0;
    double lambda = 0.0;
    double t_isl = 0.0;
    double t_actual = 0.0;
    std::map<std::string, double> diagnostics;

    nlohmann::json to_json() const;
};

// Relative-entropy bound: |M_r(rho_T) - M_r(rho_0)| over
// RMS||L(rho)|| * RMS||ln rho|| + RMS||L(Re rho)|| * RMS||ln Re rho||.
// Requires a generator-backed trajectory.
BoundReport isl_relative_entropy(const Trajectory& traj);

// Trace-measure bound: (M_tr(rho_T) - M_tr(rho_0), signed) over the plain
// time average of (1/2) ||drho/dt - (drho/dt)^T||_1.
BoundReport isl_trace(const Trajectory& traj);

// Geometric bound: change of the imaginarity angle over the time average of
// sqrt(tr (d sqrt(rho)/dt)^2). Pure initial states switch the first quadrature
// panel to a closed-form head rule (the integrand has a t^{-1/2} singularity).
BoundReport isl_geometric(const Trajectory& traj);

// Liouville-fluctuation bound: same numerator as isl_geometric over the time
// average of the generator fluctuation. Requires a generator.
BoundReport isl_liouville(const Trajectory& traj);

// Static variant: |angle change| / ||L|| with no trajectory; the generator
// must be time-independent. t_actual (when known) enables the validity flag.
BoundReport isl_liouville_static(const DensityMatrix& rho0, const DensityMatrix& rhoT,
                                 const Generator& g,
                                 std::optional<double> t_actual = std::nullopt);

// Stochastic-approximate transformation bound: arccos(sqrt f) / lambda_g.
// Diagnostics include the minimal reachable geometric imaginarity at rho_0.
BoundReport stochastic_approx_bound(const Trajectory& traj, double f);

struct TEpsilonResult {
    bool reached = false;
    double t = 0.0;
};

// First time the measure drops to eps, refined by bisection to 1e-8 between
// bracketing grid points; t = 0 when the initial value is already <= eps.
TEpsilonResult t_epsilon(const Generator& g, const DensityMatrix& rho0, MeasureKind kind,
                         double eps, double t_max, double dt);

} // namespace islkit
