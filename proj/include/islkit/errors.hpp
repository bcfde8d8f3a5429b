#pragma once

#include <stdexcept>
#include <string>

namespace islkit {

// All library failures carry a stable machine-readable name alongside the
// human-readable message; the CLI maps names onto exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

namespace errors {

inline Error not_hermitian(double residual) {
    return Error("NotHermitian",
                 "matrix deviates from its adjoint by " + std::to_string(residual));
}

inline Error trace_not_one(double residual) {
    return Error("TraceNotOne", "trace deviates from 1 by " + std::to_string(residual));
}

inline Error not_psd(double min_eigenvalue) {
    return Error("NotPSD", "smallest eigenvalue " + std::to_string(min_eigenvalue));
}

inline Error dimension_mismatch(int a, int b) {
    return Error("DimensionMismatch",
                 "dimensions " + std::to_string(a) + " and " + std::to_string(b));
}

inline Error degenerate_state(double purity) {
    return Error("DegenerateState", "purity " + std::to_string(purity) + " too small");
}

inline Error degenerate_bound(const std::string& detail) {
    return Error("DegenerateBound", detail);
}

inline Error step_too_large(double t, double violation) {
    return Error("StepTooLarge", "positivity violated by " + std::to_string(violation) +
                                     " at t = " + std::to_string(t) +
                                     "; reduce the step size");
}

inline Error time_dependent_generator() {
    return Error("TimeDependentGenerator",
                 "operation requires a time-independent generator");
}

inline Error invalid_fidelity(double f) {
    return Error("InvalidFidelity",
                 "fidelity target " + std::to_string(f) + " outside [0, 1]");
}

inline Error missing_generator(const std::string& op) {
    return Error("MissingGenerator", op + " requires a trajectory with a generator");
}

inline Error bad_input(const std::string& detail) {
    return Error("BadInput", detail);
}

inline Error config_error(const std::string& detail) {
    return Error("ConfigError", detail);
}

inline Error internal_consistency(const std::string& detail) {
    return Error("InternalConsistency", detail);
}

} // namespace errors
} // namespace islkit
