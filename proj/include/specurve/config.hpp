#ifndef SPECURVE_CONFIG_HPP
#define SPECURVE_CONFIG_HPP

#include <stdexcept>
#include <string>

namespace specurve {

/// Numerical knobs shared by every module.  All tolerances are strictly
/// positive; working_digits is the decimal precision used by the
/// extended-precision paths (moment systems, contour integrals).
struct PrecisionConfig {
    int working_digits = 120;
    double root_tol = 1e-12;
    double quad_rel_tol = 1e-10;
    double ode_tol = 1e-9;

    void validate() const {
        if (working_digits < 16)
            throw std::invalid_argument("PrecisionConfig: working_digits must be >= 16");
        if (root_tol <= 0 || quad_rel_tol <= 0 || ode_tol <= 0)
            throw std::invalid_argument("PrecisionConfig: tolerances must be positive");
    }
};

inline PrecisionConfig default_config() { return PrecisionConfig{}; }

/// Fast double-precision profile used by the curve/trajectory side.
inline PrecisionConfig double_config() {
    PrecisionConfig c;
    c.working_digits = 16;
    c.root_tol = 1e-11;
    c.quad_rel_tol = 1e-10;
    c.ode_tol = 1e-9;
    return c;
}

struct ConvergenceError : std::runtime_error {
    double best_residual;
    ConvergenceError(const std::string& what, double res)
        : std::runtime_error(what), best_residual(res) {}
};

struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace specurve

#endif
