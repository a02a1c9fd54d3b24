#include "nozzleflow/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Far-field ingredients shared by the pressure bounds, the width functional,
// and the outlet profiles; computed once per (profile, m).
struct FarField {
    InletProfile profile;
    double gamma = 1.4, m = 0.0, p_minus = 0.0;
    double c_rho = 0.0;   // (g/(g-1))^(1/g), density prefactor
    double c_enth = 0.0;  // (g/(g-1))^((g-1)/g), enthalpy prefactor
    // extrema of B S^(-1/g) over the inlet label, one-sided limits included
    double bs_min = 0.0, bs_max = 0.0;
    // label of the slowest outlet streamline (quadrature grading center)
    double y_slow = 0.0;
    double p_lower = 0.0, p_upper = 0.0;
    Scalar1D bern;
};

double bs_value(const FarField& ff, double y, int side) {
    const double B =
        side == 0 ? ff.bern(y) : bernoulli_at(ff.profile, ff.m, y, side);
    return B * std::pow(ff.profile.S_side(y, side), -1.0 / ff.gamma);
}

FarField prepare(const InletProfile& profile, double m) {
    ensure_param(!profile.incompressible(),
                 "outlet far-field states are a compressible-model "
                 "computation; the incompressible family fixes its outlet "
                 "data directly from (u1, G)");
    FarField ff;
    ff.profile = profile;
    ff.gamma = profile.gamma;
    ff.m = m;
    ff.bern = bernoulli_profile(profile, m);  // rejects m at or below m_hat
    ff.p_minus = inlet_pressure(profile, m);
    const double g = ff.gamma;
    ff.c_rho = std::pow(g / (g - 1.0), 1.0 / g);
    ff.c_enth = std::pow(g / (g - 1.0), (g - 1.0) / g);

    bool first = true;
    for (const auto& pc : profile.smooth_pieces()) {
        const double lo = pc.first, hi = pc.second;
        auto fv = [&ff](double y) { return bs_value(ff, y, 0); };
        const auto mx = scan_max(fv, lo, hi);
        const auto mn = scan_max([&fv](double y) { return -fv(y); }, lo, hi);
        double piece_min = -mn.second, piece_min_arg = mn.first;
        double piece_max = mx.second;
        // one-sided endpoint limits; the scan sees natural sides only
        const double at_lo = bs_value(ff, lo, +1);
        const double at_hi = bs_value(ff, hi, -1);
        if (at_lo < piece_min) piece_min = at_lo, piece_min_arg = lo;
        if (at_hi < piece_min) piece_min = at_hi, piece_min_arg = hi;
        piece_max = std::max({piece_max, at_lo, at_hi});
        if (first || piece_min < ff.bs_min) {
            ff.bs_min = piece_min;
            ff.y_slow = piece_min_arg;
        }
        ff.bs_max = first ? piece_max : std::max(ff.bs_max, piece_max);
        first = false;
    }
    // positive exit speed below the upper bound, subsonic exit above the
    // lower bound; both reduce to the inlet extrema of B S^(-1/g)
    ff.p_upper = std::pow(ff.bs_min / ff.c_enth, g / (g - 1.0));
    ff.p_lower =
        std::pow(2.0 / (g + 1.0) * ff.bs_max / ff.c_enth, g / (g - 1.0));
    return ff;
}

// Squared outlet speed of the streamline from label y at back pressure p,
// passed in as p_pow = p^((g-1)/g).
double exit_speed2(const FarField& ff, double p_pow, double y, int side) {
    const double B =
        side == 0 ? ff.bern(y) : bernoulli_at(ff.profile, ff.m, y, side);
    const double S = ff.profile.S_side(y, side);
    return 2.0 * B - 2.0 * ff.c_enth * p_pow * std::pow(S, 1.0 / ff.gamma);
}

// Predicted outlet width at back pressure p. The width integrand is
// rho_- u_1- / (rho~_+ u~_1+); the density ratio collapses to
// (p_- / p)^(1/g) independent of the label. Panels are graded toward the
// slowest streamline, where the integrand blows up as p -> p_upper.
double j_total(const FarField& ff, double p) {
    const double g = ff.gamma;
    const double p_pow = std::pow(p, (g - 1.0) / g);
    const double dens_ratio = std::pow(ff.p_minus / p, 1.0 / g);

    std::vector<std::pair<double, double>> segs;
    for (const auto& pc : ff.profile.smooth_pieces()) {
        if (ff.y_slow > pc.first + 1e-12 && ff.y_slow < pc.second - 1e-12) {
            segs.emplace_back(pc.first, ff.y_slow);
            segs.emplace_back(ff.y_slow, pc.second);
        } else {
            segs.emplace_back(pc.first, pc.second);
        }
    }
    auto f = [&](double y) {
        const double s2 = std::max(exit_speed2(ff, p_pow, y, 0), 1e-280);
        return dens_ratio * ff.profile.u1(y) / std::sqrt(s2);
    };
    double prev = 0.0;
    for (int panels = 16; panels <= 1024; panels *= 2) {
        double J = 0.0;
        for (const auto& sg : segs)
            J += integrate_edges(f,
                                 graded_edges(sg.first, sg.second, panels, 3.0));
        if (panels > 16) {
            if (std::abs(J - prev) <= 1e-10 * std::max(1.0, std::abs(J)))
                return J;
            // divergent-width detection: candidates hugging the upper
            // pressure bound need a sign, not ten digits
            if (J > 1e3 && prev > 1e3) return std::max(J, prev);
        }
        prev = J;
    }
    return prev;
}

}  // namespace

std::pair<double, double> outlet_pressure_bounds(const InletProfile& profile,
                                                 double m) {
    const FarField ff = prepare(profile, m);
    return {ff.p_lower, ff.p_upper};
}

double J_eval(double p_plus_candidate, const InletProfile& profile, double m) {
    const FarField ff = prepare(profile, m);
    ensure_param(
        p_plus_candidate > ff.p_lower && p_plus_candidate < ff.p_upper,
        "outlet pressure candidate " + num(p_plus_candidate) +
            " outside the admissible interval (" + num(ff.p_lower) + ", " +
            num(ff.p_upper) + ")");
    return j_total(ff, p_plus_candidate);
}

AsymptoticState outlet_state(const InletProfile& profile, double m,
                             const Geometry& geom) {
    auto ff = std::make_shared<const FarField>(prepare(profile, m));
    const double width = geom.b - geom.a;
    ensure_param(width > 0.0, "outlet width b - a must be positive");

    const double delta = 1e-9 * (ff->p_upper - ff->p_lower);
    const double lo = ff->p_lower + delta, hi = ff->p_upper - delta;
    const double j_lo = j_total(*ff, lo), j_hi = j_total(*ff, hi);
    ensure_param(j_lo < width,
                 "outlet bracket failed at the fast end: predicted width "
                 "J(p_lower) = " +
                     num(j_lo) + " >= b - a = " + num(width) +
                     "; the existence inequality J(p_lower) < b - a does not "
                     "hold at this mass flux (raise m or widen the outlet)");
    ensure_param(j_hi > width,
                 "outlet bracket failed at the slow end: predicted width "
                 "J(p_upper) = " +
                     num(j_hi) + " <= b - a = " + num(width) +
                     "; the existence inequality J(p_upper) > b - a does not "
                     "hold at this mass flux (raise m)");

    const double p_plus =
        brent([&](double p) { return j_total(*ff, p) - width; }, lo, hi, 1e-12);

    AsymptoticState st;
    st.gamma = ff->gamma;
    st.m = m;
    st.p_minus = ff->p_minus;
    st.p_plus = p_plus;
    st.p_lower = ff->p_lower;
    st.p_upper = ff->p_upper;
    st.width_residual = j_total(*ff, p_plus) - width;

    const double g = ff->gamma;
    const double p_pow = std::pow(p_plus, (g - 1.0) / g);
    const double rho_coef = ff->c_rho * std::pow(p_plus, 1.0 / g);
    const double dens_ratio = std::pow(ff->p_minus / p_plus, 1.0 / g);

    st.u1_plus = [ff, p_pow](double y) {
        return std::sqrt(std::max(exit_speed2(*ff, p_pow, y, 0), 0.0));
    };
    st.rho_plus = [ff, rho_coef](double y) {
        return rho_coef * std::pow(ff->profile.S(y), -1.0 / ff->gamma);
    };

    // terminal-position map: cumulative width per smooth piece, side-pinned
    // at the piece ends so a data jump lands as an exact kink
    auto cum = std::make_shared<std::vector<Pchip>>();
    double anchor = geom.a;
    for (const auto& pc : ff->profile.smooth_pieces()) {
        const double plo = pc.first, phi = pc.second;
        auto f = [ff, p_pow, dens_ratio, plo, phi](double y) {
            int side = 0;
            if (y <= plo)
                side = +1;
            else if (y >= phi)
                side = -1;
            const double u = ff->profile.u1_side(y, side);
            const double s2 =
                std::max(exit_speed2(*ff, p_pow, y, side), 1e-280);
            return dens_ratio * u / std::sqrt(s2);
        };
        cum->push_back(cumulative_integral(f, plo, phi, 1025, anchor, 2));
        const auto& v = cum->back().values();
        anchor = v(v.size() - 1);
    }
    st.x2_of_y = [cum](double y) {
        const Pchip* piece = &cum->back();
        for (const auto& c : *cum)
            if (y <= c.x_max()) {
                piece = &c;
                break;
            }
        return (*piece)(y);
    };
    st.y_of_x2 = [cum](double x2) {
        const auto& vlast = cum->back().values();
        const double top = vlast(vlast.size() - 1);
        const double xc =
            std::min(std::max(x2, cum->front().values()(0)), top);
        for (const auto& c : *cum) {
            const auto& v = c.values();
            if (xc <= v(v.size() - 1)) return c.invert(xc);
        }
        return cum->back().x_max();
    };
    return st;
}

double critical_pressure(const InletProfile& profile, double m) {
    ensure_param(!profile.incompressible(),
                 "the critical pressure is a compressible-model quantity");
    ensure_param(m > 0.0, "critical pressure needs a positive mass flux");
    const double g = profile.gamma;
    double kmax = 0.0;
    for (const auto& pc : profile.smooth_pieces()) {
        const auto mx = scan_max(
            [&profile](double y) { return profile.k(y); }, pc.first,
            pc.second);
        kmax = std::max({kmax, mx.second, profile.k_side(pc.first, +1),
                         profile.k_side(pc.second, -1)});
    }
    const double p_minus = inlet_pressure(profile, m);
    const double tail = kmax + 2.0 * std::pow(g / (g - 1.0), (g - 1.0) / g) *
                                   std::pow(p_minus, (g - 1.0) / g);
    return g / (2.0 * (g - 1.0)) *
           std::pow((g + 1.0) / 2.0, g / (g - 1.0)) *
           std::pow(tail, g / (g - 1.0));
}

double sonic_pressure(const InletProfile& profile, double m, double y,
                      int side) {
    ensure_param(!profile.incompressible(),
                 "the sonic pressure is a compressible-model quantity");
    const double g = profile.gamma;
    const double B = bernoulli_at(profile, m, y, side);
    const double S = profile.S_side(y, side);
    return (g - 1.0) / g * std::pow(2.0 / (g + 1.0), g / (g - 1.0)) *
           std::pow(std::pow(S, -1.0 / g) * B, g / (g - 1.0));
}

}  // namespace nozzleflow
