#include "nozzleflow/inlet.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace nozzleflow {

namespace {

constexpr int kScanSamples = 2049;

double eval_side(const Scalar1D& left, const Scalar1D& right,
                 const std::optional<double>& x_d, double x, int side) {
    if (!x_d) return left(x);
    if (x < *x_d || (x == *x_d && side < 0)) return left(x);
    if (x > *x_d || side > 0 || side == 0) return right(x);
    return right(x);
}

// one-sided 3-point derivative pointing into the interval
double fd_one_sided(const Scalar1D& f, double x, double h) {
    return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
}

double fd_central(const Scalar1D& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

double InletProfile::u1(double x) const { return u1_side(x, 0); }
double InletProfile::S(double x) const { return S_side(x, 0); }
double InletProfile::G(double x) const { return G_side(x, 0); }

double InletProfile::u1_side(double x, int side) const {
    return eval_side(u1_left, u1_right, x_d, x, side);
}

double InletProfile::S_side(double x, int side) const {
    ensure_param(static_cast<bool>(S_left), "profile has no entropy data");
    return eval_side(S_left, S_right, x_d, x, side);
}

double InletProfile::G_side(double x, int side) const {
    ensure_param(static_cast<bool>(G_left), "profile has no density data");
    return eval_side(G_left, G_right, x_d, x, side);
}

double InletProfile::k(double x) const { return k_side(x, 0); }

double InletProfile::k_side(double x, int side) const {
    const double u = u1_side(x, side);
    return u * u * std::pow(S_side(x, side), -1.0 / gamma);
}

std::vector<std::pair<double, double>> InletProfile::smooth_pieces() const {
    if (x_d) return {{0.0, *x_d}, {*x_d, 1.0}};
    return {{0.0, 1.0}};
}

InletProfile constant_profile(double u0, double S0, double gamma) {
    InletProfile p;
    p.gamma = gamma;
    p.u1_left = p.u1_right = [u0](double) { return u0; };
    p.S_left = p.S_right = [S0](double) { return S0; };
    return p;
}

namespace {
Scalar1D horner(std::vector<double> c) {
    ensure_param(!c.empty(), "polynomial profile: empty coefficients");
    return [c = std::move(c)](double x) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    };
}
}  // namespace

InletProfile polynomial_profile(std::vector<double> cu, std::vector<double> cS,
                                double gamma) {
    InletProfile p;
    p.gamma = gamma;
    p.u1_left = p.u1_right = horner(std::move(cu));
    p.S_left = p.S_right = horner(std::move(cS));
    return p;
}

InletProfile two_state_profile(double uL, double SL, double uR, double SR,
                               double x_d, double gamma) {
    ensure(x_d > 0.0 && x_d < 1.0, "two-state profile: jump must be interior");
    InletProfile p;
    p.gamma = gamma;
    p.x_d = x_d;
    p.u1_left = [uL](double) { return uL; };
    p.u1_right = [uR](double) { return uR; };
    p.S_left = [SL](double) { return SL; };
    p.S_right = [SR](double) { return SR; };
    p.eps0 = 0.5 * std::min(x_d, 1.0 - x_d);
    return p;
}

InletProfile table_profile(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& S, double gamma) {
    auto ut = std::make_shared<Pchip>(x, u);
    auto st = std::make_shared<Pchip>(x, S);
    InletProfile p;
    p.gamma = gamma;
    p.u1_left = p.u1_right = [ut](double xx) { return (*ut)(xx); };
    p.S_left = p.S_right = [st](double xx) { return (*st)(xx); };
    return p;
}

InletProfile constant_profile_inc(double u0, double G0) {
    InletProfile p;
    p.u1_left = p.u1_right = [u0](double) { return u0; };
    p.G_left = p.G_right = [G0](double) { return G0; };
    return p;
}

InletProfile polynomial_profile_inc(std::vector<double> cu,
                                    std::vector<double> cG) {
    InletProfile p;
    p.u1_left = p.u1_right = horner(std::move(cu));
    p.G_left = p.G_right = horner(std::move(cG));
    return p;
}

InletProfile two_state_profile_inc(double uL, double GL, double uR, double GR,
                                   double x_d) {
    ensure(x_d > 0.0 && x_d < 1.0, "two-state profile: jump must be interior");
    InletProfile p;
    p.x_d = x_d;
    p.u1_left = [uL](double) { return uL; };
    p.u1_right = [uR](double) { return uR; };
    p.G_left = [GL](double) { return GL; };
    p.G_right = [GR](double) { return GR; };
    p.eps0 = 0.5 * std::min(x_d, 1.0 - x_d);
    return p;
}

InletProfile compressible_member(const InletProfile& inc_profile,
                                 double gamma) {
    ensure_param(inc_profile.incompressible(),
                 "compressible_member: expected an incompressible profile");
    ensure_param(gamma > 1.0, "compressible_member: gamma must exceed 1");
    InletProfile p = inc_profile;
    p.gamma = gamma;
    const double c = gamma / (gamma - 1.0);
    auto to_S = [c, gamma](const Scalar1D& G) -> Scalar1D {
        return [c, gamma, G](double x) { return c * std::pow(G(x), -gamma); };
    };
    p.S_left = to_S(inc_profile.G_left);
    p.S_right = to_S(inc_profile.G_right);
    return p;
}

namespace {

// infimum of f over the profile's smooth pieces, one-sided jump limits
// included
double piecewise_min(const InletProfile& p,
                     const std::function<double(double, int)>& f) {
    double best = std::numeric_limits<double>::infinity();
    for (auto [lo, hi] : p.smooth_pieces()) {
        for (int k = 0; k < kScanSamples; ++k) {
            const double x = lo + (hi - lo) * k / (kScanSamples - 1);
            const int side = (k == 0) ? +1 : (k == kScanSamples - 1 ? -1 : 0);
            best = std::min(best, f(x, side));
        }
    }
    return best;
}

double piecewise_max(const InletProfile& p,
                     const std::function<double(double, int)>& f) {
    return -piecewise_min(
        p, [&](double x, int side) { return -f(x, side); });
}

struct JumpSet {
    double d_k_inf, d_k_sup;  // derivative range of k on the tested side
    double d_s_inf, d_s_sup;  // derivative range of S (or G)
    double jump_k, jump_s;    // right minus left limits at x_d
};

JumpSet jump_data(const InletProfile& p, bool left_side, bool use_G) {
    const double xd = *p.x_d;
    const double lo = left_side ? xd - p.eps0 : xd;
    const double hi = left_side ? xd : xd + p.eps0;
    const double pad = 1e-6 * p.eps0;
    auto kfun = [&](double x) { return p.k_side(x, left_side ? -1 : +1); };
    auto sfun = [&](double x) {
        return use_G ? p.G_side(x, left_side ? -1 : +1)
                     : p.S_side(x, left_side ? -1 : +1);
    };
    JumpSet js{};
    js.d_k_inf = js.d_s_inf = std::numeric_limits<double>::infinity();
    js.d_k_sup = js.d_s_sup = -std::numeric_limits<double>::infinity();
    const int n = 129;
    const double h = 1e-7;
    for (int i = 0; i < n; ++i) {
        const double x = lo + pad + (hi - lo - 2.0 * pad) * i / (n - 1);
        const double dk = fd_central(kfun, x, h);
        const double ds = fd_central(sfun, x, h);
        js.d_k_inf = std::min(js.d_k_inf, dk);
        js.d_k_sup = std::max(js.d_k_sup, dk);
        js.d_s_inf = std::min(js.d_s_inf, ds);
        js.d_s_sup = std::max(js.d_s_sup, ds);
    }
    js.jump_k = p.k_side(xd, +1) - p.k_side(xd, -1);
    js.jump_s = use_G ? p.G_side(xd, +1) - p.G_side(xd, -1)
                      : p.S_side(xd, +1) - p.S_side(xd, -1);
    return js;
}

double inc_k(const InletProfile& p, double x, int side) {
    // incompressible analogue of the Mach-content function: rho * u^2
    const double u = p.u1_side(x, side);
    return p.G_side(x, side) * u * u;
}

}  // namespace

ValidationReport validate_inlet(const InletProfile& profile) {
    ValidationReport rep;
    const bool inc = profile.incompressible();
    auto add = [&rep](std::string id, bool pass, std::string detail) {
        rep.checks.push_back({std::move(id), pass, std::move(detail)});
        rep.pass = rep.pass && rep.checks.back().pass;
    };

    if (!inc) {
        ensure_param(profile.gamma > 1.0, "inlet: gamma must exceed 1");
    }

    // positivity of velocity and of the thermodynamic profile
    const double u_min =
        piecewise_min(profile, [&](double x, int s) {
            return profile.u1_side(x, s);
        });
    const double t_min = piecewise_min(profile, [&](double x, int s) {
        return inc ? profile.G_side(x, s) : profile.S_side(x, s);
    });
    add("inlet.positivity", u_min > 0.0 && t_min > 0.0,
        "min u1 = " + fmt(u_min) + ", min " + (inc ? "G" : "S") + " = " +
            fmt(t_min));
    if (!rep.pass) return rep;  // later checks assume positive data

    // edge monotonicity of the Mach-content function: nonincreasing off the
    // lower wall, nondecreasing into the upper wall
    auto kf = [&](double x, int side) {
        return inc ? inc_k(profile, x, side) : profile.k_side(x, side);
    };
    const double kscale =
        std::max(1.0, piecewise_max(profile, kf));
    const double slack = 1e-6 * kscale;
    const double h_edge = 1e-6;
    const double dk0 =
        fd_one_sided([&](double x) { return kf(x, +1); }, 0.0, h_edge);
    const double dk1 = -fd_one_sided(
        [&](double x) { return kf(1.0 - x, -1); }, 0.0, h_edge);
    add("inlet.edge-monotonicity", dk0 <= slack && dk1 >= -slack,
        "k'(0) = " + fmt(dk0) + ", k'(1) = " + fmt(dk1));

    // jump admissibility: the sign set must hold in one orientation
    if (profile.has_jump()) {
        const double xd = *profile.x_d;
        const bool interior = profile.eps0 > 0.0 &&
                              xd >= 2.0 * profile.eps0 &&
                              xd <= 1.0 - 2.0 * profile.eps0;
        add("inlet.jump-placement", interior,
            "x_d = " + fmt(xd) + ", eps0 = " + fmt(profile.eps0));
        if (interior) {
            const JumpSet L = jump_data(profile, true, inc);
            const JumpSet R = jump_data(profile, false, inc);
            // The thermodynamic orientation flips between the S and G
            // formulations (an entropy rise is a density drop). Work with
            // T = S, or T = -G, so both cases read the same way; flipping
            // the sign swaps sup and inf.
            const double TL_inf = inc ? -L.d_s_sup : L.d_s_inf;
            const double TL_sup = inc ? -L.d_s_inf : L.d_s_sup;
            const double TR_inf = inc ? -R.d_s_sup : R.d_s_inf;
            const double TR_sup = inc ? -R.d_s_inf : R.d_s_sup;
            const double jump_T = (inc ? -1.0 : 1.0) * L.jump_s;
            const double tolk = slack, tols = 1e-6 * std::max(1.0, t_min);
            const bool up = L.d_k_inf >= -tolk && TL_inf >= -tols &&
                            L.jump_k >= -tolk && jump_T >= -tols &&
                            (L.jump_k > tolk || jump_T > tols ||
                             L.d_k_sup > tolk || TL_sup > tols);
            const bool down = R.d_k_sup <= tolk && TR_sup <= tols &&
                              L.jump_k <= tolk && jump_T <= tols &&
                              (L.jump_k < -tolk || jump_T < -tols ||
                               R.d_k_inf < -tolk || TR_inf < -tols);
            add("inlet.jump-signs", up || down,
                "[k] = " + fmt(L.jump_k) + ", [" + (inc ? "G" : "S") +
                    "] = " + fmt(L.jump_s));
        }
    }
    return rep;
}

void require_valid_inlet(const InletProfile& profile) {
    const ValidationReport rep = validate_inlet(profile);
    if (rep.pass) return;
    for (const auto& c : rep.checks) {
        if (!c.pass) {
            throw validation_error("inlet data rejected: condition " + c.id +
                                   " failed (" + c.detail + ")");
        }
    }
    throw internal_error("validate_inlet: inconsistent report");
}

double inlet_integral(const InletProfile& profile) {
    ensure_param(!profile.incompressible(),
                 "inlet_integral: compressible profiles only");
    const double ig = 1.0 / profile.gamma;
    double acc = 0.0;
    for (auto [lo, hi] : profile.smooth_pieces()) {
        acc += integrate_gl(
            [&](double x) {
                return profile.u1(x) * std::pow(profile.S(x), -ig);
            },
            lo, hi, 16);
    }
    return acc;
}

double inlet_pressure(const InletProfile& profile, double m) {
    ensure_param(m > 0.0, "inlet_pressure: mass flux must be positive");
    if (profile.incompressible()) return 1.0;  // upstream normalization
    const double g = profile.gamma;
    const double I = inlet_integral(profile);
    return (g - 1.0) / g * std::pow(m / I, g);
}

double bernoulli_at(const InletProfile& profile, double m, double x,
                    int side) {
    const double u = profile.u1_side(x, side);
    if (profile.incompressible()) {
        double B = 0.5 * u * u + 1.0 / profile.G_side(x, side);
        if (profile.phi) B -= profile.phi(psi_minus(profile, m)(x));
        return B;
    }
    const double g = profile.gamma;
    const double I = inlet_integral(profile);
    const double head = std::pow(m / I, g - 1.0);
    double B = 0.5 * u * u +
               std::pow(profile.S_side(x, side), 1.0 / g) * head;
    if (profile.phi) B -= profile.phi(psi_minus(profile, m)(x));
    return B;
}

Scalar1D bernoulli_profile(const InletProfile& profile, double m) {
    if (!profile.incompressible()) {
        ensure(m > m_hat(profile),
               "inlet data rejected: condition inlet.subsonic failed "
               "(mass flux at or below the sonic threshold)");
    }
    // capture the expensive pieces once
    if (profile.incompressible()) {
        auto psim = std::make_shared<PsiMinus>(psi_minus(profile, m));
        return [profile, psim](double x) {
            const double u = profile.u1(x);
            double B = 0.5 * u * u + 1.0 / profile.G(x);
            if (profile.phi) B -= profile.phi((*psim)(x));
            return B;
        };
    }
    const double g = profile.gamma;
    const double head = std::pow(m / inlet_integral(profile), g - 1.0);
    std::shared_ptr<PsiMinus> psim;
    if (profile.phi) psim = std::make_shared<PsiMinus>(psi_minus(profile, m));
    return [profile, head, g, psim](double x) {
        const double u = profile.u1(x);
        double B = 0.5 * u * u + std::pow(profile.S(x), 1.0 / g) * head;
        if (psim) B -= profile.phi((*psim)(x));
        return B;
    };
}

double m_hat(const InletProfile& profile) {
    ensure_param(!profile.incompressible(),
                 "m_hat: the flux threshold is a compressible quantity");
    const double g = profile.gamma;
    const double kmax = piecewise_max(
        profile, [&](double x, int s) { return profile.k_side(x, s); });
    const double I = inlet_integral(profile);
    return std::pow(g - 1.0, -1.0 / (g - 1.0)) *
           std::pow(kmax, 1.0 / (g - 1.0)) * I;
}

double inlet_density(const InletProfile& profile, double m, double x,
                     int side) {
    if (profile.incompressible()) return profile.G_side(x, side);
    const double g = profile.gamma;
    const double p = inlet_pressure(profile, m);
    return std::pow(g * p / ((g - 1.0) * profile.S_side(x, side)), 1.0 / g);
}

double inlet_mach_max(const InletProfile& profile, double m) {
    ensure_param(!profile.incompressible(),
                 "inlet_mach_max: compressible profiles only");
    const double g = profile.gamma;
    const double p = inlet_pressure(profile, m);
    double mmax = 0.0;
    for (auto [lo, hi] : profile.smooth_pieces()) {
        for (int k = 0; k < kScanSamples; ++k) {
            const double x = lo + (hi - lo) * k / (kScanSamples - 1);
            const int side = (k == 0) ? +1 : (k == kScanSamples - 1 ? -1 : 0);
            const double S = profile.S_side(x, side);
            const double rho = std::pow(g * p / ((g - 1.0) * S), 1.0 / g);
            const double c2 = (g - 1.0) * std::pow(rho, g - 1.0) * S;
            mmax = std::max(mmax, profile.u1_side(x, side) / std::sqrt(c2));
        }
    }
    return mmax;
}

double PsiMinus::operator()(double x2) const {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (x2 <= ranges_[i].second || i + 1 == pieces_.size()) {
            return pieces_[i](x2);
        }
    }
    throw internal_error("PsiMinus: empty interpolant");
}

double PsiMinus::invert(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= m_) return 1.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double hi_val = pieces_[i](ranges_[i].second);
        if (s <= hi_val || i + 1 == pieces_.size()) {
            return pieces_[i].invert(s);
        }
    }
    throw internal_error("PsiMinus: empty interpolant");
}

PsiMinus psi_minus(const InletProfile& profile, double m) {
    ensure_param(m > 0.0, "psi_minus: mass flux must be positive");
    PsiMinus out;
    out.m_ = m;
    double acc = 0.0;
    const bool inc = profile.incompressible();
    for (auto [lo, hi] : profile.smooth_pieces()) {
        Scalar1D flux;
        if (inc) {
            flux = [&profile](double x) {
                return profile.G(x) * profile.u1(x);
            };
        } else {
            const double g = profile.gamma;
            const double p = inlet_pressure(profile, m);
            flux = [&profile, g, p](double x) {
                const double rho =
                    std::pow(g * p / ((g - 1.0) * profile.S(x)), 1.0 / g);
                return rho * profile.u1(x);
            };
        }
        // natural side convention keeps each piece's callable smooth: the
        // closed midpoints quadrature never lands exactly on x_d
        out.pieces_.push_back(cumulative_integral(flux, lo, hi, 2049, acc, 2));
        out.ranges_.emplace_back(lo, hi);
        acc = out.pieces_.back()(hi);
        if (profile.x_d && hi == *profile.x_d) out.m_d_ = acc;
    }
    return out;
}

}  // namespace nozzleflow
