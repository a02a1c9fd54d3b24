#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "nozzleflow/inlet.hpp"

namespace nozzleflow {

namespace {

// Standard bump kernel scaled to support (-eps, eps), unit mass.
class BumpKernel {
public:
    explicit BumpKernel(double eps) : eps_(eps) {
        ensure_param(eps > 0.0, "mollifier width must be positive");
        const double Z = integrate_gl(
            [](double t) { return std::exp(-1.0 / (1.0 - t * t)); }, -1.0,
            1.0, 32);
        norm_ = 1.0 / (Z * eps);
        // normalized cumulative distribution for the plateau function
        Eigen::VectorXd x(1025), y(1025);
        x(0) = -eps;
        y(0) = 0.0;
        for (int k = 1; k < 1025; ++k) {
            x(k) = -eps + 2.0 * eps * k / 1024.0;
            y(k) = y(k - 1) +
                   integrate_gl([this](double t) { return density(t); },
                                x(k - 1), x(k), 2);
        }
        y /= y(1024);
        cdf_ = Pchip(std::move(x), std::move(y));
    }

    double eps() const { return eps_; }

    double density(double t) const {
        const double r2 = (t / eps_) * (t / eps_);
        if (r2 >= 1.0) return 0.0;
        return norm_ * std::exp(-1.0 / (1.0 - r2));
    }

    double cdf(double t) const {
        if (t <= -eps_) return 0.0;
        if (t >= eps_) return 1.0;
        return cdf_(t);
    }

private:
    double eps_, norm_ = 0.0;
    Pchip cdf_;
};

struct MollifierState {
    InletProfile base;
    BumpKernel kernel;
    double eps0;

    MollifierState(InletProfile p, double eps)
        : base(std::move(p)), kernel(eps), eps0(base.eps0) {}

    // indicator of [eps0, 1-eps0] convolved with the kernel
    double chi(double x) const {
        return kernel.cdf(x - eps0) - kernel.cdf(x - (1.0 - eps0));
    }

    // wall-respecting mollification of g (natural-side evaluation of the
    // base profile)
    double apply(const Scalar1D& g, double x) const {
        const double eps = kernel.eps();
        std::vector<double> edges;
        edges.reserve(20);
        const int base_panels = 16;
        for (int k = 0; k <= base_panels; ++k) {
            edges.push_back(-eps + 2.0 * eps * k / base_panels);
        }
        if (base.x_d) {
            const double ts = x - *base.x_d;
            if (ts > -eps && ts < eps) {
                edges.push_back(ts);
                std::sort(edges.begin(), edges.end());
            }
        }
        double conv = 0.0;
        for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
            conv += integrate_gl8(
                [&](double t) {
                    const double y = x - t;
                    if (y < 0.0 || y > 1.0) return 0.0;
                    const double c = chi(y);
                    return (c == 0.0) ? 0.0 : c * g(y) * kernel.density(t);
                },
                edges[k], edges[k + 1], 1);
        }
        return (1.0 - chi(x)) * g(x) + conv;
    }
};

}  // namespace

InletProfile mollify(const InletProfile& profile, double eps) {
    ensure_param(eps > 0.0 && eps < profile.eps0,
                 "mollify: width must satisfy 0 < eps < eps0");
    const bool inc = profile.incompressible();
    auto st = std::make_shared<MollifierState>(profile, eps);

    InletProfile out;
    out.gamma = profile.gamma;
    out.eps0 = profile.eps0;
    out.phi = profile.phi;

    if (inc) {
        // preserve the momentum-content function u^2 G exactly
        Scalar1D kfun = [st](double x) {
            const double u = st->base.u1(x);
            return u * u * st->base.G(x);
        };
        Scalar1D gfun = [st](double x) { return st->base.G(x); };
        auto Gm = [st, gfun](double x) { return st->apply(gfun, x); };
        out.G_left = out.G_right = Gm;
        out.u1_left = out.u1_right = [st, kfun, gfun](double x) {
            const double kk = st->apply(kfun, x);
            const double gg = st->apply(gfun, x);
            return std::sqrt(kk / gg);
        };
        return out;
    }

    // preserve the Mach-content function u^2 S^(-1/gamma) exactly
    const double ig = 1.0 / profile.gamma;
    Scalar1D kfun = [st, ig](double x) {
        const double u = st->base.u1(x);
        return u * u * std::pow(st->base.S(x), -ig);
    };
    Scalar1D sfun = [st](double x) { return st->base.S(x); };
    out.S_left = out.S_right = [st, sfun](double x) {
        return st->apply(sfun, x);
    };
    out.u1_left = out.u1_right = [st, kfun, sfun, ig](double x) {
        const double kk = st->apply(kfun, x);
        const double ss = st->apply(sfun, x);
        return std::sqrt(kk) * std::pow(ss, 0.5 * ig);
    };
    return out;
}

}  // namespace nozzleflow
