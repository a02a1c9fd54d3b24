#include "nozzleflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nozzleflow {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1], positive half; mirror for the rest.
constexpr int kGlHalf = 8;
constexpr double kGlNode[kGlHalf] = {
    0.09501250983763744019, 0.28160355077925891323,
    0.45801677765722738634, 0.61787624440264374845,
    0.75540440835500303390, 0.86563120238783174388,
    0.94457502307323257608, 0.98940093499164993260,
};
constexpr double kGlWeight[kGlHalf] = {
    0.18945061045506849629, 0.18260341504492358887,
    0.16915651939500253819, 0.14959598881657673208,
    0.12462897125553387205, 0.09515851168249278481,
    0.06225352393864789286, 0.02715245941175409485,
};

double gl16(const Scalar1D& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    double acc = 0.0;
    for (int k = 0; k < kGlHalf; ++k) {
        acc += kGlWeight[k] *
               (f(mid - rad * kGlNode[k]) + f(mid + rad * kGlNode[k]));
    }
    return acc * rad;
}

// 8-point Gauss-Legendre rule, positive half.
constexpr int kGl8Half = 4;
constexpr double kGl8Node[kGl8Half] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168,
};
constexpr double kGl8Weight[kGl8Half] = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915,
};

double gl8(const Scalar1D& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    double acc = 0.0;
    for (int k = 0; k < kGl8Half; ++k) {
        acc += kGl8Weight[k] *
               (f(mid - rad * kGl8Node[k]) + f(mid + rad * kGl8Node[k]));
    }
    return acc * rad;
}

}  // namespace

double integrate_gl(const Scalar1D& f, double a, double b, int panels) {
    ensure_param(panels >= 1, "integrate_gl: panels must be >= 1");
    if (a == b) return 0.0;
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        acc += gl16(f, a + k * h, a + (k + 1) * h);
    }
    return acc;
}

double integrate_gl8(const Scalar1D& f, double a, double b, int panels) {
    ensure_param(panels >= 1, "integrate_gl8: panels must be >= 1");
    if (a == b) return 0.0;
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        acc += gl8(f, a + k * h, a + (k + 1) * h);
    }
    return acc;
}

double integrate_edges(const Scalar1D& f, const std::vector<double>& edges) {
    ensure_param(edges.size() >= 2, "integrate_edges: need at least two edges");
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        ensure_param(edges[k + 1] >= edges[k],
                     "integrate_edges: edges must be nondecreasing");
        if (edges[k + 1] > edges[k]) acc += gl16(f, edges[k], edges[k + 1]);
    }
    return acc;
}

std::vector<double> graded_edges(double a, double b, int panels, double power) {
    ensure_param(panels >= 2 && power >= 1.0, "graded_edges: bad parameters");
    std::vector<double> edges(panels + 1);
    for (int k = 0; k <= panels; ++k) {
        const double t = static_cast<double>(k) / panels;
        // symmetric grading: clusters toward both 0 and 1 for power > 1
        const double tp = std::pow(t, power);
        const double up = std::pow(1.0 - t, power);
        edges[k] = a + (b - a) * (tp / (tp + up));
    }
    edges.front() = a;
    edges.back() = b;
    return edges;
}

double brent(const Scalar1D& f, double a, double b, double tol_rel,
             double tol_abs, int max_iter) {
    double fa = f(a), fb = f(b);
    ensure_param(fa * fb <= 0.0, "brent: endpoints do not bracket a root");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol =
            2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
            0.5 * (tol_rel * std::abs(b) + tol_abs);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol || fb == 0.0) return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q),
                                   std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (xm > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw convergence_error("brent: no convergence", {max_iter, std::abs(fb)});
}

double newton_bracketed(const Scalar1D& f, const Scalar1D& df, double lo,
                        double hi, double x0, double tol_abs, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    ensure_param(flo * fhi <= 0.0, "newton_bracketed: no sign change");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    // keep lo as the negative end
    if (flo > 0.0) std::swap(lo, hi);
    double x = std::clamp(x0, std::min(lo, hi), std::max(lo, hi));
    for (int it = 0; it < max_iter; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) lo = x; else hi = x;
        const double dfx = df(x);
        double step = (dfx != 0.0) ? -fx / dfx : 0.0;
        double xn = x + step;
        const double lo_ = std::min(lo, hi), hi_ = std::max(lo, hi);
        if (!(xn > lo_ && xn < hi_) || step == 0.0) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= tol_abs) return xn;
        x = xn;
    }
    return x;
}

std::pair<double, double> scan_max(const Scalar1D& f, double a, double b,
                                   int samples) {
    ensure_param(samples >= 3, "scan_max: need at least 3 samples");
    double best_x = a, best = f(a);
    for (int k = 1; k < samples; ++k) {
        const double x = a + (b - a) * k / (samples - 1);
        const double v = f(x);
        if (v > best) { best = v; best_x = x; }
    }
    // golden refinement around the best sample
    const double h = (b - a) / (samples - 1);
    double lo = std::max(a, best_x - h), hi = std::min(b, best_x + h);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && (hi - lo) > 1e-14 * (1.0 + std::abs(best_x));
         ++it) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo); f2 = f(x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo); f1 = f(x1);
        }
    }
    const double xm = 0.5 * (lo + hi);
    const double fm = f(xm);
    if (fm > best) { best = fm; best_x = xm; }
    return {best_x, best};
}

Pchip::Pchip(Eigen::VectorXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
    const auto n = x_.size();
    ensure_param(n >= 2 && y_.size() == n, "Pchip: need matching samples");
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        ensure_param(x_(i + 1) > x_(i), "Pchip: knots must increase");
    }
    d_.resize(n);
    if (n == 2) {
        d_(0) = d_(1) = (y_(1) - y_(0)) / (x_(1) - x_(0));
    } else {
        Eigen::VectorXd h(n - 1), del(n - 1);
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            h(i) = x_(i + 1) - x_(i);
            del(i) = (y_(i + 1) - y_(i)) / h(i);
        }
        for (Eigen::Index i = 1; i + 1 < n; ++i) {
            if (del(i - 1) * del(i) <= 0.0) {
                d_(i) = 0.0;
            } else {
                const double w1 = 2.0 * h(i) + h(i - 1);
                const double w2 = h(i) + 2.0 * h(i - 1);
                d_(i) = (w1 + w2) / (w1 / del(i - 1) + w2 / del(i));
            }
        }
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (d * d0 <= 0.0) d = 0.0;
            else if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0))
                d = 3.0 * d0;
            return d;
        };
        d_(0) = end_slope(h(0), h(1), del(0), del(1));
        d_(n - 1) = end_slope(h(n - 2), h(n - 3), del(n - 2), del(n - 3));
    }
    increasing_ = true;
    decreasing_ = true;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (y_(i + 1) <= y_(i)) increasing_ = false;
        if (y_(i + 1) >= y_(i)) decreasing_ = false;
    }
}

Pchip::Pchip(Eigen::VectorXd x, Eigen::VectorXd y, Eigen::VectorXd d)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
    const auto n = x_.size();
    ensure_param(n >= 2 && y_.size() == n && d_.size() == n,
                 "Pchip: need matching samples");
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        ensure_param(x_(i + 1) > x_(i), "Pchip: knots must increase");
    }
    increasing_ = true;
    decreasing_ = true;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (y_(i + 1) <= y_(i)) increasing_ = false;
        if (y_(i + 1) >= y_(i)) decreasing_ = false;
    }
}

int Pchip::find_interval(double x) const {
    const auto n = x_.size();
    if (x <= x_(0)) return 0;
    if (x >= x_(n - 1)) return static_cast<int>(n) - 2;
    int lo = 0, hi = static_cast<int>(n) - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (x_(mid) <= x ? lo : hi) = mid;
    }
    return lo;
}

double Pchip::operator()(double x) const {
    if (x < x_(0)) return y_(0) + d_(0) * (x - x_(0));
    const auto n = x_.size();
    if (x > x_(n - 1)) return y_(n - 1) + d_(n - 1) * (x - x_(n - 1));
    const int i = find_interval(x);
    const double h = x_(i + 1) - x_(i);
    const double t = (x - x_(i)) / h;
    const double t2 = t * t, t3 = t2 * t;
    return y_(i) * (2.0 * t3 - 3.0 * t2 + 1.0) +
           h * d_(i) * (t3 - 2.0 * t2 + t) + y_(i + 1) * (-2.0 * t3 + 3.0 * t2) +
           h * d_(i + 1) * (t3 - t2);
}

double Pchip::deriv(double x) const {
    if (x < x_(0)) return d_(0);
    const auto n = x_.size();
    if (x > x_(n - 1)) return d_(n - 1);
    const int i = find_interval(x);
    const double h = x_(i + 1) - x_(i);
    const double t = (x - x_(i)) / h;
    const double t2 = t * t;
    return (y_(i) * (6.0 * t2 - 6.0 * t) + h * d_(i) * (3.0 * t2 - 4.0 * t + 1.0) +
            y_(i + 1) * (-6.0 * t2 + 6.0 * t) + h * d_(i + 1) * (3.0 * t2 - 2.0 * t)) /
           h;
}

double Pchip::deriv2(double x) const {
    const auto n = x_.size();
    if (x < x_(0) || x > x_(n - 1)) return 0.0;
    const int i = find_interval(x);
    const double h = x_(i + 1) - x_(i);
    const double t = (x - x_(i)) / h;
    return (y_(i) * (12.0 * t - 6.0) + h * d_(i) * (6.0 * t - 4.0) +
            y_(i + 1) * (-12.0 * t + 6.0) + h * d_(i + 1) * (6.0 * t - 2.0)) /
           (h * h);
}

double Pchip::invert(double y) const {
    ensure_param(increasing_ || decreasing_,
                 "Pchip::invert: values are not strictly monotone");
    const auto n = x_.size();
    const double ylo = increasing_ ? y_(0) : y_(n - 1);
    const double yhi = increasing_ ? y_(n - 1) : y_(0);
    if (y <= ylo) return increasing_ ? x_(0) : x_(n - 1);
    if (y >= yhi) return increasing_ ? x_(n - 1) : x_(0);
    // bracket by knot values, then Newton with bisection fallback
    int lo = 0, hi = static_cast<int>(n) - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        const bool below = increasing_ ? (y_(mid) <= y) : (y_(mid) >= y);
        (below ? lo : hi) = mid;
    }
    double a = x_(lo), b = x_(lo + 1);
    double x = 0.5 * (a + b);
    for (int it = 0; it < 100; ++it) {
        const double fx = (*this)(x) - y;
        if (fx == 0.0) return x;
        const bool left = increasing_ ? (fx < 0.0) : (fx > 0.0);
        (left ? a : b) = x;
        const double dfx = deriv(x);
        double xn = (dfx != 0.0) ? x - fx / dfx : 0.5 * (a + b);
        if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
        if (std::abs(xn - x) <= 1e-15 * (std::abs(x) + 1.0)) return xn;
        x = xn;
    }
    return x;
}

Pchip pchip_sample(const Scalar1D& f, double a, double b, int n) {
    ensure_param(n >= 2 && b > a, "pchip_sample: bad range");
    Eigen::VectorXd x(n), y(n);
    for (int k = 0; k < n; ++k) {
        x(k) = a + (b - a) * k / (n - 1);
        y(k) = f(x(k));
    }
    return Pchip(std::move(x), std::move(y));
}

Pchip cumulative_integral(const Scalar1D& f, double a, double b, int n,
                          double f0, int panels_per_cell) {
    ensure_param(n >= 2 && b > a, "cumulative_integral: bad range");
    Eigen::VectorXd x(n), y(n), d(n);
    x(0) = a;
    y(0) = f0;
    for (int k = 1; k < n; ++k) {
        x(k) = a + (b - a) * k / (n - 1);
        y(k) = y(k - 1) + integrate_gl(f, x(k - 1), x(k), panels_per_cell);
    }
    // the antiderivative's exact slope is f itself; endpoints are nudged
    // inward so piecewise integrands contribute their one-sided limits
    const double nudge = 1e-9 * (b - a) / (n - 1);
    d(0) = f(a + nudge);
    d(n - 1) = f(b - nudge);
    for (int k = 1; k < n - 1; ++k) d(k) = f(x(k));
    return Pchip(std::move(x), std::move(y), std::move(d));
}

}  // namespace nozzleflow
