#include "islkit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "islkit/liouville.hpp"

namespace islkit {

using matfun::Matrix;

namespace {

constexpr double kValidityTol = 1e-6;
constexpr double kVacuousTol = 1e-12;

void require_samples(const Trajectory& traj) {
    if (traj.size() < 3) {
        throw errors::bad_input("bound evaluation needs at least 3 trajectory samples");
    }
}

const Generator& require_generator(const Trajectory& traj, const std::string& op) {
    if (!traj.generator) {
        throw errors::missing_generator(op);
    }
    return *traj.generator;
}

// Composite trapezoid of sampled values over the trajectory grid. When
// singular_head is set the first panel is replaced by the u = sqrt(t)
// substitution panel 2*(t1-t0)*f(t1), exact for an f ~ t^{-1/2} integrand.
double integrate(const std::vector<double>& times, const std::vector<double>& values,
                 bool singular_head = false) {
    double total = 0.0;
    std::size_t start = 0;
    if (singular_head && times.size() >= 2) {
        total += 2.0 * (times[1] - times[0]) * values[1];
        start = 1;
    }
    for (std::size_t k = start; k + 1 < times.size(); ++k) {
        total += (times[k + 1] - times[k]) * (values[k] + values[k + 1]) / 2.0;
    }
    return total;
}

double time_average(const std::vector<double>& times, const std::vector<double>& values,
                    bool singular_head = false) {
    return integrate(times, values, singular_head) / (times.back() - times.front());
}

double rms_average(const std::vector<double>& times, std::vector<double> values) {
    for (double& v : values) {
        v *= v;
    }
    return std::sqrt(std::max(time_average(times, values), 0.0));
}

// Shared tail: divide, or classify the zero-denominator case.
void finalize(BoundReport& report) {
    const double abs_delta = std::abs(report.delta_I);
    if (report.lambda > 0.0) {
        report.t_isl = abs_delta / report.lambda;
        report.diagnostics["vacuous"] = 0.0;
    } else if (abs_delta <= kVacuousTol) {
        report.t_isl = 0.0;
        report.diagnostics["vacuous"] = 1.0;
    } else {
        throw errors::degenerate_bound("zero average speed with nonzero imaginarity change");
    }
    if (std::isfinite(report.t_actual)) {
        report.diagnostics["valid"] =
            report.t_isl <= report.t_actual + kValidityTol ? 1.0 : 0.0;
    }
}

// Geometric-speed integrand samples sqrt(tr (d sqrt(rho)/dt)^2) along the
// trajectory; shared by the angle bound and the stochastic bound.
double geometric_speed_average(const Trajectory& traj,
                               std::map<std::string, double>& diagnostics) {
    const std::size_t n = traj.size();
    std::vector<double> values(n);
    std::size_t kernel_warnings = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Matrix sqrt_rho = matfun::mat_sqrt_psd(traj.states[k].matrix());
        const matfun::SylvesterResult s =
            matfun::dsqrt_dt(sqrt_rho, traj.derivative_at(k));
        if (s.kernel_warning) {
            ++kernel_warnings;
        }
        values[k] = matfun::hs_norm(s.x);
    }
    const bool singular = traj.pure_start();
    diagnostics["kernel_warnings"] = static_cast<double>(kernel_warnings);
    diagnostics["singular_start"] = singular ? 1.0 : 0.0;
    diagnostics["integrand_first"] = values.front();
    diagnostics["integrand_last"] = values.back();
    return time_average(traj.times, values, singular);
}

} // namespace

const char* theorem_name(Theorem t) {
    switch (t) {
    case Theorem::T1:
        return "T1";
    case Theorem::T2:
        return "T2";
    case Theorem::T3:
        return "T3";
    case Theorem::T4:
        return "T4";
    case Theorem::Cor1:
        return "Cor1";
    case Theorem::StochApprox:
        return "StochApprox";
    }
    return "?";
}

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j{{"theorem", theorem_name(theorem)},
                     {"delta_I", delta_I},
                     {"lambda", lambda},
                     {"t_isl", t_isl},
                     {"diagnostics", diagnostics}};
    // An absent horizon is carried as NaN internally; serialize it as an
    // explicit null so consumers never see a NaN-typed number.
    if (std::isfinite(t_actual)) {
        j["t_actual"] = t_actual;
    } else {
        j["t_actual"] = nullptr;
    }
    return j;
}

BoundReport isl_relative_entropy(const Trajectory& traj) {
    require_samples(traj);
    const Generator& g = require_generator(traj, "the relative-entropy bound");

    const std::size_t n = traj.size();
    std::vector<double> drho_norm(n);
    std::vector<double> ln_norm(n);
    std::vector<double> drho_re_norm(n);
    std::vector<double> ln_re_norm(n);
    for (std::size_t k = 0; k < n; ++k) {
        const DensityMatrix& rho = traj.states[k];
        drho_norm[k] = matfun::hs_norm(traj.derivative_at(k));
        ln_norm[k] = matfun::hs_norm(matfun::mat_ln_on_support(rho.matrix()));
        const DensityMatrix re = decompose(rho).re;
        drho_re_norm[k] = matfun::hs_norm(apply_generator(g, traj.times[k], re));
        ln_re_norm[k] = matfun::hs_norm(matfun::mat_ln_on_support(re.matrix()));
    }
    const double lambda_T = rms_average(traj.times, drho_norm);
    const double lambda_T_re = rms_average(traj.times, drho_re_norm);
    const double rms_ln = rms_average(traj.times, ln_norm);
    const double rms_ln_re = rms_average(traj.times, ln_re_norm);

    BoundReport report;
    report.theorem = Theorem::T1;
    report.delta_I = std::abs(m_r(traj.states.back()) - m_r(traj.states.front()));
    report.lambda = lambda_T * rms_ln + lambda_T_re * rms_ln_re;
    report.t_actual = traj.horizon();
    report.diagnostics["lambda_T"] = lambda_T;
    report.diagnostics["lambda_T_re"] = lambda_T_re;
    report.diagnostics["rms_ln_rho"] = rms_ln;
    report.diagnostics["rms_ln_rho_re"] = rms_ln_re;
    finalize(report);
    return report;
}

BoundReport isl_trace(const Trajectory& traj) {
    require_samples(traj);
    const std::size_t n = traj.size();
    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Matrix d = traj.derivative_at(k);
        values[k] = 0.5 * matfun::trace_norm(d - d.transpose());
    }
    BoundReport report;
    report.theorem = Theorem::T2;
    report.delta_I = m_tr(traj.states.back()) - m_tr(traj.states.front());
    report.lambda = time_average(traj.times, values);
    report.t_actual = traj.horizon();
    report.diagnostics["integrand_first"] = values.front();
    report.diagnostics["integrand_last"] = values.back();
    finalize(report);
    return report;
}

BoundReport isl_geometric(const Trajectory& traj) {
    require_samples(traj);
    BoundReport report;
    report.theorem = Theorem::T3;
    report.delta_I = std::abs(imaginarity_angle(traj.states.back()) -
                              imaginarity_angle(traj.states.front()));
    report.lambda = geometric_speed_average(traj, report.diagnostics);
    report.t_actual = traj.horizon();
    finalize(report);
    return report;
}

BoundReport isl_liouville(const Trajectory& traj) {
    require_samples(traj);
    const Generator& g = require_generator(traj, "the generator-fluctuation bound");
    const std::size_t n = traj.size();
    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = liouvillian_fluctuation(g, traj.times[k], traj.states[k]);
    }
    BoundReport report;
    report.theorem = Theorem::T4;
    report.delta_I = std::abs(imaginarity_angle(traj.states.back()) -
                              imaginarity_angle(traj.states.front()));
    report.lambda = time_average(traj.times, values);
    report.t_actual = traj.horizon();
    report.diagnostics["integrand_first"] = values.front();
    report.diagnostics["integrand_last"] = values.back();
    finalize(report);
    return report;
}

BoundReport isl_liouville_static(const DensityMatrix& rho0, const DensityMatrix& rhoT,
                                 const Generator& g, std::optional<double> t_actual) {
    if (!g.time_independent()) {
        throw errors::time_dependent_generator();
    }
    BoundReport report;
    report.theorem = Theorem::Cor1;
    report.delta_I = std::abs(imaginarity_angle(rhoT) - imaginarity_angle(rho0));
    report.lambda = superop_norm(g, 0.0);
    report.t_actual =
        t_actual ? *t_actual : std::numeric_limits<double>::quiet_NaN();
    report.diagnostics["superop_norm"] = report.lambda;
    finalize(report);
    return report;
}

BoundReport stochastic_approx_bound(const Trajectory& traj, double f) {
    if (!(f >= 0.0 && f <= 1.0)) {
        throw errors::invalid_fidelity(f);
    }
    require_samples(traj);

    BoundReport report;
    report.theorem = Theorem::StochApprox;
    report.delta_I = std::acos(std::clamp(std::sqrt(f), 0.0, 1.0));
    report.lambda = geometric_speed_average(traj, report.diagnostics);
    report.t_actual = traj.horizon();

    const DensityMatrix& rho0 = traj.states.front();
    const double mg0 = m_g(rho0);
    const double residual_angle = std::max(
        std::asin(std::clamp(std::sqrt(mg0), 0.0, 1.0)) - report.delta_I, 0.0);
    const double sin_res = std::sin(residual_angle);
    report.diagnostics["min_mg_reachable"] = sin_res * sin_res;

    // The elapsed-time comparison is meaningful only when the trajectory
    // actually left the fidelity-f ball around rho_0.
    const double rf = root_fidelity(rho0, traj.states.back());
    report.diagnostics["endpoint_fidelity"] = rf * rf;
    const bool left_ball = rf * rf <= f + 1e-12;

    const double t_actual = report.t_actual;
    report.t_actual = std::numeric_limits<double>::quiet_NaN();
    finalize(report);
    report.t_actual = t_actual;
    if (left_ball) {
        report.diagnostics["valid"] =
            report.t_isl <= report.t_actual + kValidityTol ? 1.0 : 0.0;
    }
    return report;
}

namespace {

DensityMatrix rk4_step(const Generator& g, double t, const DensityMatrix& rho, double h) {
    const Matrix& m = rho.matrix();
    const Matrix k1 = apply_generator_raw(g, t, m);
    const Matrix k2 = apply_generator_raw(g, t + h / 2.0, m + (h / 2.0) * k1);
    const Matrix k3 = apply_generator_raw(g, t + h / 2.0, m + (h / 2.0) * k2);
    const Matrix k4 = apply_generator_raw(g, t + h, m + h * k3);
    Matrix next = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next = ((next + next.adjoint()) / 2.0).eval();
    next /= next.trace().real();
    return DensityMatrix::validate(next);
}

} // namespace

TEpsilonResult t_epsilon(const Generator& g, const DensityMatrix& rho0, MeasureKind kind,
                         double eps, double t_max, double dt) {
    if (!(eps > 0.0)) {
        throw errors::bad_input("threshold epsilon must be positive");
    }
    if (measure(kind, rho0) <= eps) {
        return {true, 0.0};
    }
    const Trajectory traj = propagate(g, rho0, t_max, dt);
    std::size_t hit = traj.size();
    for (std::size_t k = 1; k < traj.size(); ++k) {
        if (measure(kind, traj.states[k]) <= eps) {
            hit = k;
            break;
        }
    }
    if (hit == traj.size()) {
        return {false, t_max};
    }

    // Refine the bracketing panel by bisection; each probe is one short RK4
    // step from the left bracket, so its local error stays O(dt^5).
    double lo = traj.times[hit - 1];
    double hi = traj.times[hit];
    DensityMatrix rho_lo = traj.states[hit - 1];
    while (hi - lo > 1e-8) {
        const double mid = (lo + hi) / 2.0;
        const DensityMatrix rho_mid = rk4_step(g, lo, rho_lo, mid - lo);
        if (measure(kind, rho_mid) <= eps) {
            hi = mid;
        } else {
            lo = mid;
            rho_lo = rho_mid;
        }
    }
    return {true, hi};
}

} // namespace islkit
