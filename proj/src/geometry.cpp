#include "nozzleflow/geometry.hpp"

#include <cmath>
#include <memory>

namespace nozzleflow {

Geometry make_straight() {
    Geometry g;
    g.lower = {[](double) { return 0.0; }, [](double) { return 0.0; },
               [](double) { return 0.0; }};
    g.upper = {[](double) { return 1.0; }, [](double) { return 0.0; },
               [](double) { return 0.0; }};
    g.a = 0.0;
    g.b = 1.0;
    return g;
}

Geometry make_tanh(double a, double b, double scale) {
    ensure(b > a, "tanh geometry: downstream heights must satisfy b > a");
    ensure(scale > 0.0, "tanh geometry: scale must be positive");
    // sigma ramps from 0 upstream to 1 downstream
    auto sigma = [scale](double x) { return 0.5 * (1.0 + std::tanh(x / scale)); };
    auto dsigma = [scale](double x) {
        const double c = std::cosh(x / scale);
        return 0.5 / (scale * c * c);
    };
    auto ddsigma = [scale](double x) {
        const double t = std::tanh(x / scale);
        const double c = std::cosh(x / scale);
        return -t / (scale * scale * c * c);
    };
    Geometry g;
    g.lower = {[=](double x) { return a * sigma(x); },
               [=](double x) { return a * dsigma(x); },
               [=](double x) { return a * ddsigma(x); }};
    g.upper = {[=](double x) { return 1.0 + (b - 1.0) * sigma(x); },
               [=](double x) { return (b - 1.0) * dsigma(x); },
               [=](double x) { return (b - 1.0) * ddsigma(x); }};
    g.a = a;
    g.b = b;
    return g;
}

Geometry make_table(const Eigen::VectorXd& x1, const Eigen::VectorXd& w1,
                    const Eigen::VectorXd& w2) {
    ensure(x1.size() >= 4, "table geometry: need at least 4 samples");
    for (Eigen::Index i = 0; i < x1.size(); ++i) {
        ensure(w2(i) > w1(i), "table geometry: walls cross in the samples");
    }
    auto lo = std::make_shared<Pchip>(x1, w1);
    auto hi = std::make_shared<Pchip>(x1, w2);
    Geometry g;
    g.lower = {[lo](double x) { return (*lo)(x); },
               [lo](double x) { return lo->deriv(x); },
               [lo](double x) { return lo->deriv2(x); }};
    g.upper = {[hi](double x) { return (*hi)(x); },
               [hi](double x) { return hi->deriv(x); },
               [hi](double x) { return hi->deriv2(x); }};
    g.a = w1(x1.size() - 1);
    g.b = w2(x1.size() - 1);
    return g;
}

void validate_geometry(const Geometry& geom, double L, double tail_tol) {
    ensure_param(L > 0.0, "geometry: truncation half-length must be positive");
    const int n = 257;
    for (int k = 0; k < n; ++k) {
        const double x = -2.0 * L + 4.0 * L * k / (n - 1);
        ensure(geom.width(x) > 0.0, "geometry: walls cross inside the domain");
    }
    for (double x : {-2.0 * L, 2.0 * L}) {
        ensure(std::abs(geom.lower.dw(x)) <= tail_tol &&
                   std::abs(geom.upper.dw(x)) <= tail_tol,
               "geometry: walls are not flat at the truncation ends; "
               "increase L or flatten the wall tables");
    }
}

Eigen::Vector2d flatten(const Geometry& geom, const Eigen::Vector2d& x) {
    const double w1 = geom.lower.w(x(0));
    const double d = geom.width(x(0));
    ensure(d > 0.0, "flatten: degenerate width");
    return {x(0), (x(1) - w1) / d};
}

Eigen::Vector2d unflatten(const Geometry& geom, const Eigen::Vector2d& y) {
    const double w1 = geom.lower.w(y(0));
    return {y(0), w1 + y(1) * geom.width(y(0))};
}

Eigen::Matrix2d jacobian_flatten(const Geometry& geom,
                                 const Eigen::Vector2d& x) {
    const double w1 = geom.lower.w(x(0));
    const double dw1 = geom.lower.dw(x(0));
    const double d = geom.width(x(0));
    const double dd = geom.upper.dw(x(0)) - dw1;
    ensure(d > 0.0, "jacobian_flatten: degenerate width");
    const double y2 = (x(1) - w1) / d;
    Eigen::Matrix2d J;
    J << 1.0, 0.0, -(dw1 + y2 * dd) / d, 1.0 / d;
    return J;
}

FlattenDerivs flatten_derivs(const Geometry& geom, double y1, double y2) {
    const double dw1 = geom.lower.dw(y1);
    const double ddw1 = geom.lower.ddw(y1);
    const double d = geom.width(y1);
    const double dd = geom.upper.dw(y1) - dw1;
    const double ddd = geom.upper.ddw(y1) - ddw1;
    ensure(d > 0.0, "flatten_derivs: degenerate width");
    FlattenDerivs fd;
    fd.alpha = -(dw1 + y2 * dd) / d;
    fd.beta = 1.0 / d;
    fd.alpha_y1 = -(ddw1 + y2 * ddd) / d + (dw1 + y2 * dd) * dd / (d * d);
    fd.alpha_y2 = -dd / d;
    return fd;
}

Grid truncate(const Geometry& geom, double L, int n1, int n2) {
    ensure_param(n1 >= 5 && n2 >= 5, "truncate: grid too small");
    validate_geometry(geom, L);
    Grid g;
    g.n1 = n1;
    g.n2 = n2;
    g.L = L;
    g.h1 = 4.0 * L / (n1 - 1);
    g.h2 = 1.0 / (n2 - 1);
    g.y1.resize(n1);
    g.y2.resize(n2);
    for (int i = 0; i < n1; ++i) g.y1(i) = -2.0 * L + i * g.h1;
    for (int j = 0; j < n2; ++j) g.y2(j) = static_cast<double>(j) / (n2 - 1);
    return g;
}

}  // namespace nozzleflow
