#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "islkit/states.hpp"

namespace islkit {

// Default integrator step in dimensionless time.
inline constexpr double kDefaultDt = 1e-3;

// A decay/dephasing rate gamma(t): either a constant or a tabulated function
// with linear interpolation, clamped to the endpoints outside the table.
class RateFunction {
public:
    static RateFunction constant(double gamma);
    static RateFunction tabulated(std::vector<double> times, std::vector<double> values,
                                  bool allow_negative = false);

    double operator()(double t) const;
    // Exact integral over [0, t] (piecewise-linear tables integrate exactly).
    double integral(double t) const;

    bool is_constant() const noexcept { return times_.empty(); }
    double constant_value() const noexcept { return constant_; }

private:
    RateFunction() = default;
    double constant_ = 0.0;
    std::vector<double> times_;
    std::vector<double> values_;
};

// Generator of the dynamics: unitary, qubit dephasing, qubit dissipative
// decay, or a general Lindblad form with jump operators and rates.
struct Generator {
    enum class Kind { Unitary, Dephasing, Dissipative, CustomLindblad };

    struct Jump {
        matfun::Matrix op;
        RateFunction rate;
    };

    Kind kind = Kind::Unitary;
    matfun::Matrix hamiltonian; // Unitary / CustomLindblad
    RateFunction gamma = RateFunction::constant(0.0); // Dephasing / Dissipative
    double omega0 = 0.0;        // Dephasing level splitting
    std::vector<Jump> jumps;    // CustomLindblad

    static Generator unitary(const matfun::Matrix& h);
    static Generator dephasing(RateFunction gamma, double omega0 = 0.0);
    static Generator dissipative(RateFunction gamma);
    static Generator custom(const matfun::Matrix& h, std::vector<Jump> jumps);

    int dim() const;
    // True when every rate is constant and the Hamiltonian is static, so the
    // superoperator does not depend on t.
    bool time_independent() const;
};

// drho/dt at time t; Hermitian and traceless to numerical precision.
matfun::Matrix apply_generator(const Generator& g, double t, const DensityMatrix& rho);

// Generator action on an arbitrary matrix (no state validation, no
// re-symmetrization). Integrator stage values and superoperator consistency
// checks need the action off the density-matrix manifold.
matfun::Matrix apply_generator_raw(const Generator& g, double t, const matfun::Matrix& x);

// Sampled trajectory {(t_k, rho_k)}. Either a generator is attached (then
// derivatives come from apply_generator) or explicit per-sample derivatives
// are stored (state-path constructions with no Lindblad realization).
struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::optional<Generator> generator;
    std::vector<matfun::Matrix> derivatives; // empty when generator-backed

    struct DriftLog {
        double max_trace_drift = 0.0;   // |tr-1| before renormalization
        double max_herm_drift = 0.0;    // ||rho-rho^dag|| before resymmetrization
        double cumulative_correction = 0.0;
    };
    DriftLog drift;

    double horizon() const { return times.back(); }
    std::size_t size() const { return times.size(); }
    matfun::Matrix derivative_at(std::size_t k) const;
    bool pure_start(double tol = 1e-9) const { return states.front().purity() >= 1.0 - tol; }
};

// Fixed-step classical RK4. The grid is uniform with step T/n, n = ceil(T/dt),
// so t = T is always included and the effective step never exceeds dt. Each
// stored state is re-symmetrized and trace-renormalized with the correction
// magnitudes logged; positivity violations beyond 1e-6 abort with StepTooLarge.
Trajectory propagate(const Generator& g, const DensityMatrix& rho0, double T, double dt);

// Closed-form solutions of the two named qubit models and the x-rotation.
DensityMatrix dephasing_analytic(double theta, const RateFunction& gamma, double omega0,
                                 double t);
DensityMatrix dissipative_analytic(double theta, const RateFunction& gamma, double t);
DensityMatrix x_rotation_analytic(double omega, double t); // from |0><0|

// Trajectories sampled from the closed forms on the same grid convention as
// propagate, with the generator attached for derivative evaluation.
Trajectory sample_dephasing(double theta, const RateFunction& gamma, double omega0,
                            double T, double dt);
Trajectory sample_dissipative(double theta, const RateFunction& gamma, double T, double dt);
Trajectory sample_x_rotation(double omega, double T, double dt);

// Linear interpolation of the imaginary part toward zero at fixed real part:
// rho(t) = Re rho0 + i (1 - t/T) Im rho0. Carries explicit derivatives.
Trajectory geodesic_dephasing(const DensityMatrix& rho0, double T, double dt);

// CSV emission: unit comment line, then header t,re_00,im_00,... row-major,
// every value in scientific notation with 17 significant digits, \n endings.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::string& unit_comment);

} // namespace islkit
