#include "islkit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace islkit {

using matfun::Complex;
using matfun::Matrix;

// ---------------------------------------------------------------------------
// RateFunction

RateFunction RateFunction::constant(double gamma) {
    RateFunction r;
    r.constant_ = gamma;
    return r;
}

RateFunction RateFunction::tabulated(std::vector<double> times, std::vector<double> values,
                                     bool allow_negative) {
    if (times.empty() || times.size() != values.size()) {
        throw errors::bad_input("rate table requires matching nonempty time/value lists");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) {
            throw errors::bad_input("rate table times must be strictly increasing");
        }
    }
    if (!allow_negative) {
        for (double v : values) {
            if (v < 0.0) {
                throw errors::bad_input(
                    "negative rate entries require the allow_negative flag");
            }
        }
    }
    RateFunction r;
    r.times_ = std::move(times);
    r.values_ = std::move(values);
    return r;
}

double RateFunction::operator()(double t) const {
    if (is_constant()) {
        return constant_;
    }
    if (t <= times_.front()) {
        return values_.front();
    }
    if (t >= times_.back()) {
        return values_.back();
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

double RateFunction::integral(double t) const {
    if (is_constant()) {
        return constant_ * t;
    }
    // Piecewise-linear rate integrates exactly by trapezoids; the clamped
    // regions outside the table are constant.
    auto segment = [this](double a, double b) {
        return (b - a) * ((*this)(a) + (*this)(b)) / 2.0;
    };
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const double upper = std::abs(t) * sign; // == t
    double lo = 0.0;
    double hi = upper;
    if (hi < lo) {
        std::swap(lo, hi);
    }
    double total = 0.0;
    double cursor = lo;
    for (std::size_t i = 0; i < times_.size() && cursor < hi; ++i) {
        if (times_[i] <= cursor) {
            continue;
        }
        const double next = std::min(times_[i], hi);
        total += segment(cursor, next);
        cursor = next;
    }
    if (cursor < hi) {
        total += segment(cursor, hi);
    }
    return t < 0.0 ? -total : total;
}

// ---------------------------------------------------------------------------
// Generator

namespace {

Matrix pauli_z() {
    Matrix z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    return z;
}

// Ladder convention used by the dissipative model: sigma_plus = |0><1|,
// sigma_minus = |1><0|; the fixed point is |1><1|.
Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

void require_hermitian(const Matrix& h) {
    const double res = (h - h.adjoint()).norm();
    if (res > matfun::kHermTol) {
        throw errors::not_hermitian(res);
    }
}

} // namespace

Generator Generator::unitary(const Matrix& h) {
    require_hermitian(h);
    Generator g;
    g.kind = Kind::Unitary;
    g.hamiltonian = h;
    return g;
}

Generator Generator::dephasing(RateFunction gamma, double omega0) {
    Generator g;
    g.kind = Kind::Dephasing;
    g.gamma = std::move(gamma);
    g.omega0 = omega0;
    return g;
}

Generator Generator::dissipative(RateFunction gamma) {
    Generator g;
    g.kind = Kind::Dissipative;
    g.gamma = std::move(gamma);
    return g;
}

Generator Generator::custom(const Matrix& h, std::vector<Jump> jumps) {
    require_hermitian(h);
    for (const auto& j : jumps) {
        if (j.op.rows() != h.rows() || j.op.cols() != h.cols()) {
            throw errors::dimension_mismatch(static_cast<int>(h.rows()),
                                             static_cast<int>(j.op.rows()));
        }
    }
    Generator g;
    g.kind = Kind::CustomLindblad;
    g.hamiltonian = h;
    g.jumps = std::move(jumps);
    return g;
}

int Generator::dim() const {
    switch (kind) {
    case Kind::Unitary:
    case Kind::CustomLindblad:
        return static_cast<int>(hamiltonian.rows());
    case Kind::Dephasing:
    case Kind::Dissipative:
        return 2;
    }
    return 0;
}

bool Generator::time_independent() const {
    switch (kind) {
    case Kind::Unitary:
        return true;
    case Kind::Dephasing:
    case Kind::Dissipative:
        return gamma.is_constant();
    case Kind::CustomLindblad:
        for (const auto& j : jumps) {
            if (!j.rate.is_constant()) {
                return false;
            }
        }
        return true;
    }
    return false;
}

namespace {

Matrix commutator_term(const Matrix& h, const Matrix& rho) {
    return Complex(0.0, -1.0) * (h * rho - rho * h);
}

Matrix lindblad_term(const Matrix& op, double rate, const Matrix& rho) {
    Matrix opd = op.adjoint();
    Matrix anti = opd * op * rho + rho * opd * op;
    return rate * (op * rho * opd - anti / 2.0);
}

// Raw generator action on an arbitrary matrix (RK4 stage values are not
// density matrices, so this cannot take a validated state).
Matrix generator_action(const Generator& g, double t, const Matrix& rho) {
    if (rho.rows() != g.dim()) {
        throw errors::dimension_mismatch(g.dim(), static_cast<int>(rho.rows()));
    }
    switch (g.kind) {
    case Generator::Kind::Unitary:
        return commutator_term(g.hamiltonian, rho);
    case Generator::Kind::Dephasing: {
        const Matrix z = pauli_z();
        Matrix out = (g.gamma(t) / 2.0) * (z * rho * z - rho);
        if (g.omega0 != 0.0) {
            out += commutator_term((g.omega0 / 2.0) * z, rho);
        }
        return out;
    }
    case Generator::Kind::Dissipative: {
        const Matrix sm = sigma_minus();
        // (gamma/2) (sm rho sp - {sp sm, rho}/2)
        return lindblad_term(sm, g.gamma(t) / 2.0, rho);
    }
    case Generator::Kind::CustomLindblad: {
        Matrix out = commutator_term(g.hamiltonian, rho);
        for (const auto& j : g.jumps) {
            out += lindblad_term(j.op, j.rate(t), rho);
        }
        return out;
    }
    }
    throw errors::internal_consistency("unhandled generator kind");
}

} // namespace

Matrix apply_generator_raw(const Generator& g, double t, const Matrix& x) {
    return generator_action(g, t, x);
}

Matrix apply_generator(const Generator& g, double t, const DensityMatrix& rho) {
    Matrix d = generator_action(g, t, rho.matrix());
    return (d + d.adjoint()) / 2.0;
}

// ---------------------------------------------------------------------------
// Trajectory

Matrix Trajectory::derivative_at(std::size_t k) const {
    if (k >= times.size()) {
        throw errors::bad_input("derivative index out of range");
    }
    if (generator) {
        return apply_generator(*generator, times[k], states[k]);
    }
    if (k < derivatives.size()) {
        return derivatives[k];
    }
    throw errors::missing_generator("derivative evaluation");
}

namespace {

std::size_t grid_steps(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0) || dt > T * (1.0 + 1e-12)) {
        throw errors::bad_input("require T > 0 and 0 < dt <= T");
    }
    return static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
}

std::vector<double> uniform_grid(double T, std::size_t n) {
    std::vector<double> times(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        times[k] = T * static_cast<double>(k) / static_cast<double>(n);
    }
    times.back() = T;
    return times;
}

} // namespace

Trajectory propagate(const Generator& g, const DensityMatrix& rho0, double T, double dt) {
    const std::size_t n = grid_steps(T, dt);
    const double h = T / static_cast<double>(n);
    std::vector<double> times = uniform_grid(T, n);

    Trajectory traj;
    traj.times = std::move(times);
    traj.states.reserve(n + 1);
    traj.states.push_back(rho0);
    traj.generator = g;

    Matrix rho = rho0.matrix();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = traj.times[k];
        const Matrix k1 = generator_action(g, t, rho);
        const Matrix k2 = generator_action(g, t + h / 2.0, rho + (h / 2.0) * k1);
        const Matrix k3 = generator_action(g, t + h / 2.0, rho + (h / 2.0) * k2);
        const Matrix k4 = generator_action(g, t + h, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        // Log drift before correcting it, then re-symmetrize and renormalize.
        const double herm_drift = (rho - rho.adjoint()).norm();
        const double trace_drift = std::abs(rho.trace().real() - 1.0) +
                                   std::abs(rho.trace().imag());
        traj.drift.max_herm_drift = std::max(traj.drift.max_herm_drift, herm_drift);
        traj.drift.max_trace_drift = std::max(traj.drift.max_trace_drift, trace_drift);
        rho = ((rho + rho.adjoint()) / 2.0).eval();
        rho /= rho.trace().real();

        Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
        const double min_eig = solver.eigenvalues().minCoeff();
        double correction = herm_drift + trace_drift;
        if (min_eig < -1e-6) {
            throw errors::step_too_large(traj.times[k + 1], -min_eig);
        }
        if (min_eig < 0.0) {
            // Clamp roundoff-scale negative population and renormalize.
            Eigen::VectorXd vals = solver.eigenvalues().cwiseMax(0.0);
            rho = solver.eigenvectors() * vals.asDiagonal() *
                  solver.eigenvectors().adjoint();
            rho /= rho.trace().real();
            correction += -min_eig;
        }
        traj.drift.cumulative_correction += correction;
        if (traj.drift.cumulative_correction > 1e-6) {
            throw errors::step_too_large(traj.times[k + 1],
                                         traj.drift.cumulative_correction);
        }
        traj.states.push_back(DensityMatrix::validate(rho));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Closed-form models

DensityMatrix dephasing_analytic(double theta, const RateFunction& gamma, double omega0,
                                 double t) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Complex off = Complex(0.0, -1.0) * c * s *
                        std::exp(Complex(-gamma.integral(t), -omega0 * t));
    Matrix m(2, 2);
    m << Complex(c * c, 0.0), off, std::conj(off), Complex(s * s, 0.0);
    return DensityMatrix::validate(m);
}

DensityMatrix dissipative_analytic(double theta, const RateFunction& gamma, double t) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const double G = gamma.integral(t);
    const double p = std::exp(-G / 2.0) * c * c;
    const Complex off = Complex(0.0, -1.0) * std::exp(-G / 4.0) * s * c;
    Matrix m(2, 2);
    m << Complex(p, 0.0), off, std::conj(off), Complex(1.0 - p, 0.0);
    return DensityMatrix::validate(m);
}

DensityMatrix x_rotation_analytic(double omega, double t) {
    // exp(-i w t sigma_x)|0> = cos(wt)|0> - i sin(wt)|1>
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    Matrix m(2, 2);
    m << Complex(c * c, 0.0), Complex(0.0, 1.0) * c * s, Complex(0.0, -1.0) * c * s,
        Complex(s * s, 0.0);
    return DensityMatrix::validate(m);
}

namespace {

template <typename StateFn>
Trajectory sample_closed_form(const Generator& g, double T, double dt, StateFn&& state_at) {
    const std::size_t n = grid_steps(T, dt);
    Trajectory traj;
    traj.times = uniform_grid(T, n);
    traj.states.reserve(n + 1);
    for (double t : traj.times) {
        traj.states.push_back(state_at(t));
    }
    traj.generator = g;
    return traj;
}

} // namespace

Trajectory sample_dephasing(double theta, const RateFunction& gamma, double omega0,
                            double T, double dt) {
    return sample_closed_form(Generator::dephasing(gamma, omega0), T, dt,
                              [&](double t) {
                                  return dephasing_analytic(theta, gamma, omega0, t);
                              });
}

Trajectory sample_dissipative(double theta, const RateFunction& gamma, double T, double dt) {
    return sample_closed_form(Generator::dissipative(gamma), T, dt, [&](double t) {
        return dissipative_analytic(theta, gamma, t);
    });
}

Trajectory sample_x_rotation(double omega, double T, double dt) {
    Matrix h(2, 2);
    h << 0.0, omega, omega, 0.0;
    return sample_closed_form(Generator::unitary(h), T, dt,
                              [&](double t) { return x_rotation_analytic(omega, t); });
}

Trajectory geodesic_dephasing(const DensityMatrix& rho0, double T, double dt) {
    const std::size_t n = grid_steps(T, dt);
    RealImDecomposition dec = decompose(rho0);
    const Matrix re = dec.re.matrix();
    const Matrix im = dec.im.cast<Complex>();
    const Matrix deriv = Complex(0.0, -1.0 / T) * im;

    Trajectory traj;
    traj.times = uniform_grid(T, n);
    traj.states.reserve(n + 1);
    traj.derivatives.assign(n + 1, deriv);
    for (double t : traj.times) {
        // Convex combination of rho0 and Re rho0, hence a valid state.
        Matrix m = re + Complex(0.0, 1.0 - t / T) * im;
        traj.states.push_back(DensityMatrix::validate(m));
    }
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::string& unit_comment) {
    const int d = traj.states.front().dim();
    out << "# " << unit_comment << "\n";
    out << "t";
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            out << ",re_" << r << c << ",im_" << r << c;
        }
    }
    out << "\n";
    char buf[32];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.16e", v);
        out << buf;
    };
    for (std::size_t k = 0; k < traj.size(); ++k) {
        emit(traj.times[k]);
        const Matrix& m = traj.states[k].matrix();
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                out << ",";
                emit(m(r, c).real());
                out << ",";
                emit(m(r, c).imag());
            }
        }
        out << "\n";
    }
}

} // namespace islkit
