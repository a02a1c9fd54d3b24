#pragma once

#include <memory>
#include <utility>

#include "nozzleflow/closure.hpp"
#include "nozzleflow/geometry.hpp"

namespace nozzleflow {

struct SolverOptions {
    // scaled nonlinear residual target (max norm over interior nodes)
    double tol = 1e-10;
    int max_iterations = 400;
    // residual plateau length declaring stagnation
    int stagnation_window = 50;
    // gradient cut-off width
    double eps_cut = 0.05;
    // initial Picard damping; adapted by the residual ratio
    double damping = 1.0;
    double min_damping = 1.0 / 64.0;
    // residual growth factor past the starting residual declaring divergence
    double divergence_factor = 1e3;
    int n1 = 257, n2 = 65;
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;
    // min over nodes of 1 - |grad psi| / q_hat: positive iff strictly
    // subsonic (energy margin 1 - q^2/(2B) for incompressible runs)
    double margin = 0.0;
    // interior nodes with an active gradient cut at the accepted iterate
    int cut_activations = 0;
    bool converged = false;
    std::vector<double> residual_history;
    std::vector<double> damping_history;
};

// A converged stream-function field on a truncated flattened grid, carrying
// the closure so primitive quantities can be reconstructed later.
struct FlowField {
    Geometry geom;
    Grid grid;
    // psi(i, j) at (y1(i), y2(j))
    Eigen::MatrixXd psi;
    double m = 0.0;
    double eps_cut = 0.0;
    double residual_norm = 0.0;
    std::shared_ptr<const StreamClosure> closure;
    std::shared_ptr<const IncClosure> inc;

    bool incompressible() const { return inc != nullptr; }
};

// Solve the flattened quasilinear problem on [-2L, 2L] x [0, 1] with wall
// values (0, m) and end data m*y2, by damped Picard iteration on frozen
// coefficients. `init` optionally seeds the iteration (warm start);
// boundary rows of the seed are overwritten with the Dirichlet data.
// Throws convergence_error (carrying the iteration record) on stagnation,
// divergence, or iteration exhaustion.
std::pair<FlowField, SolveReport> solve_bounded(
    const Geometry& geom, std::shared_ptr<const StreamClosure> closure,
    double m, double L, const SolverOptions& opts = {},
    const Eigen::MatrixXd* init = nullptr);

std::pair<FlowField, SolveReport> solve_bounded_inc(
    const Geometry& geom, std::shared_ptr<const IncClosure> closure, double m,
    double L, const SolverOptions& opts = {},
    const Eigen::MatrixXd* init = nullptr);

struct DomainOptions {
    // max-norm tolerance between successive window restrictions
    double domain_tol = 1e-8;
    int max_doublings = 3;
    SolverOptions solver;
};

struct DomainStudy {
    // field restricted to the innermost window [-2*L0, 2*L0]
    FlowField field;
    std::vector<double> lengths;
    // successive restriction differences (max norm), one per doubling
    std::vector<double> window_diffs;
    // last observed ratio of successive differences
    double decay_rate = 0.0;
};

// Domain-doubling study standing in for the infinite nozzle: solves at L0,
// 2*L0, 4*L0, ... with the horizontal spacing held fixed (node-nested
// windows; n1 must be odd) until the innermost-window restriction settles
// below domain_tol. Throws truncation_error when the differences fail to
// decay across the allowed doublings.
DomainStudy extend_domain(const Geometry& geom,
                          std::shared_ptr<const StreamClosure> closure,
                          double m, double L0, const DomainOptions& opts = {});

DomainStudy extend_domain_inc(const Geometry& geom,
                              std::shared_ptr<const IncClosure> closure,
                              double m, double L0,
                              const DomainOptions& opts = {});

struct MonotonicityReport {
    // min over interior nodes of the discrete physical d(psi)/dx2
    double min_dpsi = 0.0;
    int i = 0, j = 0;  // node attaining the min
    int violations = 0;
    bool pass = false;
};

MonotonicityReport monotonicity_check(const FlowField& field);

// Physical gradient (d/dx1, d/dx2) of psi at a node: central differences in
// the interior, second-order one-sided at the boundary, chain rule through
// the flattening.
Eigen::Vector2d nodal_gradient(const FlowField& field, int i, int j);

// Min over all nodes of 1 - |grad psi| / q_hat(psi) for compressible fields,
// of 1 - q^2 / (2 B(psi)) for incompressible ones.
double sonic_margin(const FlowField& field);

}  // namespace nozzleflow
