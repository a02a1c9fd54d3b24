#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

using Scalar1D = std::function<double(double)>;

// ---------------------------------------------------------------- quadrature

// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
double integrate_gl(const Scalar1D& f, double a, double b, int panels = 8);

// Same with the 8-point rule per panel (used where an order-8 rule is part
// of the numerical contract).
double integrate_gl8(const Scalar1D& f, double a, double b, int panels = 8);

// Composite Gauss-Legendre over a strictly increasing edge sequence.
double integrate_edges(const Scalar1D& f, const std::vector<double>& edges);

// Panel edges on [a, b] graded toward both endpoints; power >= 1 controls
// clustering (1 = uniform). Useful for integrands with endpoint
// inverse-square-root behavior.
std::vector<double> graded_edges(double a, double b, int panels, double power);

// ---------------------------------------------------------------- root finds

// Brent's method on a sign-changing bracket [a, b].
double brent(const Scalar1D& f, double a, double b, double tol_rel,
             double tol_abs = 0.0, int max_iter = 200);

// Safeguarded Newton on [lo, hi]; falls back to bisection whenever the Newton
// step leaves the bracket or stalls. `f` must be monotone-free-form but
// bracketed: f(lo) and f(hi) must have opposite signs.
double newton_bracketed(const Scalar1D& f, const Scalar1D& df, double lo,
                        double hi, double x0, double tol_abs,
                        int max_iter = 100);

// Maximum of a scalar function over [a, b]: dense scan plus golden-section
// refinement around the best sample. Returns {argmax, max}.
std::pair<double, double> scan_max(const Scalar1D& f, double a, double b,
                                   int samples = 2049);

// ------------------------------------------------------- cubic interpolation

// Shape-preserving piecewise cubic (Fritsch-Carlson slopes). Monotone data
// yields a monotone interpolant; evaluation outside the sample range
// continues linearly with the endpoint slope.
class Pchip {
public:
    Pchip() = default;
    Pchip(Eigen::VectorXd x, Eigen::VectorXd y);
    // Hermite variant with caller-supplied knot slopes (no shape filter);
    // used where the slopes carry their own accuracy order.
    Pchip(Eigen::VectorXd x, Eigen::VectorXd y, Eigen::VectorXd d);

    double operator()(double x) const;
    double deriv(double x) const;
    // Second derivative of the local cubic piece; discontinuous at knots
    // (right-piece convention).
    double deriv2(double x) const;

    // Inverse evaluation; requires strictly monotone values.
    double invert(double y) const;

    double x_min() const { return x_(0); }
    double x_max() const { return x_(x_.size() - 1); }
    const Eigen::VectorXd& knots() const { return x_; }
    const Eigen::VectorXd& values() const { return y_; }
    double deriv_begin() const { return d_(0); }
    double deriv_end() const { return d_(d_.size() - 1); }
    bool valid() const { return x_.size() >= 2; }

private:
    int find_interval(double x) const;
    Eigen::VectorXd x_, y_, d_;
    bool increasing_ = false, decreasing_ = false;
};

// Sample a function on [a, b] (n uniform points) and fit a Pchip through it.
Pchip pchip_sample(const Scalar1D& f, double a, double b, int n);

// Antiderivative table of f on [a, b] anchored at F(a) = f0: cumulative
// Gauss-Legendre between n uniform sample points, returned as a Pchip.
Pchip cumulative_integral(const Scalar1D& f, double a, double b, int n,
                          double f0 = 0.0, int panels_per_cell = 2);

}  // namespace nozzleflow
