#pragma once

#include <Eigen/Dense>
#include <functional>

#include "nozzleflow/numerics.hpp"

namespace nozzleflow {

// One nozzle wall as a graph x2 = w(x1), with first and second derivatives.
struct Wall {
    std::function<double(double)> w, dw, ddw;
};

// An infinite nozzle bounded by two non-intersecting walls. Upstream the
// walls approach heights (0, 1) (the normalization fixing the inlet strip);
// downstream they approach (a, b).
struct Geometry {
    Wall lower, upper;
    double a = 0.0, b = 1.0;  // downstream asymptotic heights

    double width(double x1) const { return upper.w(x1) - lower.w(x1); }
};

// Straight nozzle: walls exactly at heights 0 and 1.
Geometry make_straight();

// Smooth transition from upstream (0, 1) to downstream (a, b) with a tanh
// blend of horizontal scale `scale`.
Geometry make_tanh(double a, double b, double scale);

// Walls through sampled points (shape-preserving cubic through the samples,
// endpoint-slope continuation outside). Samples should already be flat near
// the ends of their range.
Geometry make_table(const Eigen::VectorXd& x1, const Eigen::VectorXd& w1,
                    const Eigen::VectorXd& w2);

// Throws validation_error if the width degenerates on [-2L, 2L] or the walls
// are not flat to `tail_tol` at the truncation ends.
void validate_geometry(const Geometry& geom, double L, double tail_tol = 1e-8);

// Map between physical coordinates x = (x1, x2) and flattened coordinates
// y = (y1, y2) in which the nozzle is the strip [0, 1] in y2.
Eigen::Vector2d flatten(const Geometry& geom, const Eigen::Vector2d& x);
Eigen::Vector2d unflatten(const Geometry& geom, const Eigen::Vector2d& y);

// Jacobian dy/dx of the flattening at a physical point; its determinant is
// 1 / width(x1).
Eigen::Matrix2d jacobian_flatten(const Geometry& geom,
                                 const Eigen::Vector2d& x);

// Metric data of the flattening at a flattened point, as used by the solver:
//   d/dx1 = d/dy1 + alpha * d/dy2,   d/dx2 = beta * d/dy2,
// plus the y-derivatives of alpha needed for second-order chain rules.
struct FlattenDerivs {
    double alpha = 0.0;     // dy2/dx1
    double beta = 1.0;      // dy2/dx2 = 1 / width
    double alpha_y1 = 0.0;  // d(alpha)/dy1 at fixed y2
    double alpha_y2 = 0.0;  // d(alpha)/dy2
};
FlattenDerivs flatten_derivs(const Geometry& geom, double y1, double y2);

// Uniform tensor grid on the flattened truncated domain [-2L, 2L] x [0, 1].
struct Grid {
    int n1 = 0, n2 = 0;
    double L = 0.0;
    double h1 = 0.0, h2 = 0.0;
    Eigen::VectorXd y1, y2;

    bool interior(int i, int j) const {
        return i > 0 && i < n1 - 1 && j > 0 && j < n2 - 1;
    }
};

// Truncate the infinite nozzle at |x1| = 2L and grid the flattened strip.
Grid truncate(const Geometry& geom, double L, int n1, int n2);

}  // namespace nozzleflow
