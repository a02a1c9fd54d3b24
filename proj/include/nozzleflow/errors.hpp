#pragma once

#include <stdexcept>
#include <string>

namespace nozzleflow {

// Base type for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Physical admissibility of input data failed (positivity, monotonicity,
// jump-sign sets, geometry degeneracy). CLI maps this to exit code 2.
class validation_error : public error {
public:
    using error::error;
};

// Numeric parameter out of range (tolerances, grid sizes, mollification
// width vs. regularity scale). Also exit code 2.
class parameter_error : public error {
public:
    using error::error;
};

// A closure inversion was asked for a state outside the subsonic branch
// (momentum at or beyond sonic, negative stagnation energy).
class branch_error : public error {
public:
    using error::error;
};

// Coordinate or Euler-Lagrange transform lost injectivity.
class transform_error : public error {
public:
    using error::error;
};

// Level-set extraction could not locate a single crossing per column.
class extraction_error : public error {
public:
    using error::error;
};

// One-sided trace extrapolation had too little clean data next to the band.
class trace_error : public error {
public:
    using error::error;
};

// Iteration diagnostics attached to a convergence failure.
struct convergence_info {
    int iterations = 0;
    double residual = 0.0;       // scaled max-norm at the last iterate
    double best_residual = 0.0;  // best scaled residual seen
    double margin = 0.0;         // sonic margin of the last iterate
    int cut_activations = 0;     // nodes with the gradient cut-off active
};

// Picard iteration failed to reach tolerance (divergence or stagnation).
// CLI maps this to exit code 3.
class convergence_error : public error {
public:
    convergence_error(const std::string& msg, convergence_info info)
        : error(msg), info_(info) {}
    const convergence_info& info() const { return info_; }

private:
    convergence_info info_;
};

// Domain-extension change refused to decay: the truncation error dominates
// whatever tolerance was requested.
class truncation_error : public error {
public:
    using error::error;
};

// A should-not-happen condition; indicates a bug, not bad input.
class internal_error : public error {
public:
    using error::error;
};

inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw validation_error(msg);
}

inline void ensure_param(bool cond, const std::string& msg) {
    if (!cond) throw parameter_error(msg);
}

}  // namespace nozzleflow
