#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>

#include "doctest.h"
#include "nozzleflow/asymptotics.hpp"
#include "nozzleflow/errors.hpp"
#include "nozzleflow/fields.hpp"
#include "nozzleflow/solver.hpp"

using namespace nozzleflow;

namespace {

// Smooth non-constant data passing the edge-monotonicity conditions:
// u dips mid-channel, S rises gently toward the upper wall.
InletProfile smooth_profile() {
    return polynomial_profile({1.0, -0.2, 0.2}, {1.0, 0.1}, 1.4);
}

}  // namespace

TEST_CASE("width functional equals one for the symmetric channel") {
    const InletProfile pr = constant_profile(1.0, 1.0, 1.4);
    const double m = 3.0 * m_hat(pr);
    const double p_minus = inlet_pressure(pr, m);
    CHECK(J_eval(p_minus, pr, m) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("width functional increases in the back pressure") {
    const InletProfile pr = smooth_profile();
    require_valid_inlet(pr);
    const double m = 3.0 * m_hat(pr);
    const auto [plo, phi] = outlet_pressure_bounds(pr, m);
    double prev = -1.0;
    for (int i = 1; i <= 10; ++i) {
        const double p = plo + (phi - plo) * i / 11.0;
        const double J = J_eval(p, pr, m);
        CHECK(J > prev);
        prev = J;
    }
}

TEST_CASE("candidates outside the admissible interval are rejected") {
    const InletProfile pr = constant_profile(1.0, 1.0, 1.4);
    const double m = 2.0 * m_hat(pr);
    const auto [plo, phi] = outlet_pressure_bounds(pr, m);
    CHECK(plo < phi);
    CHECK_THROWS_AS((void)J_eval(0.5 * plo, pr, m), parameter_error);
    CHECK_THROWS_AS((void)J_eval(1.5 * phi, pr, m), parameter_error);
}

TEST_CASE("width functional diverges at the upper pressure bound") {
    // constant data chokes every streamline at once (flat minimum of the
    // Mach-content function), the strongest divergence mechanism
    const InletProfile pr = constant_profile(1.0, 1.0, 1.4);
    const double m = 3.0 * m_hat(pr);
    const auto [plo, phi] = outlet_pressure_bounds(pr, m);
    const double p = phi - 1e-10 * (phi - plo);
    CHECK(J_eval(p, pr, m) > 1e3);
}

TEST_CASE("straight symmetric outlet state reproduces the inlet") {
    const InletProfile pr = constant_profile(1.0, 1.0, 1.4);
    const double m = 3.0 * m_hat(pr);
    const Geometry geom = make_straight();
    const AsymptoticState st = outlet_state(pr, m, geom);
    CHECK(st.p_plus == doctest::Approx(st.p_minus).epsilon(1e-12));
    CHECK(st.p_lower < st.p_plus);
    CHECK(st.p_plus < st.p_upper);
    CHECK(std::abs(st.width_residual) < 1e-10);
    for (double y : {0.0, 0.17, 0.5, 0.81, 1.0}) {
        CHECK(st.x2_of_y(y) == doctest::Approx(y).epsilon(1e-10));
        CHECK(st.u1_plus(y) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(st.rho_plus(y) ==
              doctest::Approx(inlet_density(pr, m, y)).epsilon(1e-12));
        CHECK(std::abs(st.y_of_x2(st.x2_of_y(y)) - y) < 1e-10);
    }
}

TEST_CASE("expanding outlet matches the one-dimensional oracle") {
    const double g = 1.4, u0 = 1.0, S0 = 1.0;
    const InletProfile pr = constant_profile(u0, S0, g);
    const double m = 3.0 * m_hat(pr);
    const Geometry geom = make_tanh(-0.5, 1.5, 0.3);  // outlet width 2
    const AsymptoticState st = outlet_state(pr, m, geom);

    // independent algebra: uniform outlet state under the same (B, S) with
    // rho(p) u(p) * (b - a) = m
    const double B = 0.5 * u0 * u0 + std::pow(m / u0, g - 1.0);
    const double cr = std::pow(g / (g - 1.0), 1.0 / g);
    const double ce = std::pow(g / (g - 1.0), (g - 1.0) / g);
    auto flux = [&](double p) {
        const double rho = cr * std::pow(p, 1.0 / g);
        const double q2 = 2.0 * B - 2.0 * ce * std::pow(p, (g - 1.0) / g);
        return rho * std::sqrt(std::max(q2, 0.0)) * 2.0 - m;
    };
    const double p_oracle =
        brent(flux, st.p_lower * (1.0 + 1e-9), st.p_upper * (1.0 - 1e-9),
              1e-14);
    CHECK(st.p_plus == doctest::Approx(p_oracle).epsilon(1e-10));
    CHECK(st.p_plus > st.p_minus);  // diffuser recompression
}

TEST_CASE("two-state data produces a continuous map with a kink") {
    const double g = 1.4, xd = 0.5;
    const InletProfile pr = two_state_profile(1.0, 1.0, 1.2, 1.0, xd, g);
    require_valid_inlet(pr);
    const double m = 3.0 * m_hat(pr);
    const Geometry geom = make_tanh(-0.2, 1.4, 0.3);
    const AsymptoticState st = outlet_state(pr, m, geom);

    const double below = st.x2_of_y(xd - 1e-12);
    const double above = st.x2_of_y(xd + 1e-12);
    CHECK(std::abs(above - below) < 1e-9);

    // one-sided slopes equal the one-sided width integrands
    const double h = 1e-5;
    const double slope_left = (st.x2_of_y(xd) - st.x2_of_y(xd - h)) / h;
    const double slope_right = (st.x2_of_y(xd + h) - st.x2_of_y(xd)) / h;
    auto integrand = [&](int side) {
        const double u = pr.u1_side(xd, side);
        const double S = pr.S_side(xd, side);
        const double B = bernoulli_at(pr, m, xd, side);
        const double ce = std::pow(g / (g - 1.0), (g - 1.0) / g);
        const double q2 = 2.0 * B - 2.0 * ce *
                                        std::pow(st.p_plus, (g - 1.0) / g) *
                                        std::pow(S, 1.0 / g);
        const double ratio = std::pow(st.p_minus / st.p_plus, 1.0 / g);
        return ratio * u / std::sqrt(q2);
    };
    CHECK(slope_left == doctest::Approx(integrand(-1)).epsilon(1e-4));
    CHECK(slope_right == doctest::Approx(integrand(+1)).epsilon(1e-4));
    CHECK(std::abs(slope_left - slope_right) > 1e-3);  // genuine kink
}

TEST_CASE("terminal map conserves streamline mass") {
    const InletProfile pr = smooth_profile();
    const double m = 3.0 * m_hat(pr);
    const Geometry geom = make_tanh(-0.2, 1.3, 0.3);
    const AsymptoticState st = outlet_state(pr, m, geom);
    const PsiMinus psim = psi_minus(pr, m);

    CHECK(st.x2_of_y(0.0) == doctest::Approx(geom.a).epsilon(1e-14));
    CHECK(std::abs(st.x2_of_y(1.0) - geom.b) < 1e-9);

    // strictly increasing map
    double prev = st.x2_of_y(0.0);
    for (int i = 1; i <= 100; ++i) {
        const double cur = st.x2_of_y(i / 100.0);
        CHECK(cur > prev);
        prev = cur;
    }

    // stream flux up to label y equals outlet mass flux up to x2(y)
    auto outlet_flux = [&](double x2) {
        const double y = st.y_of_x2(x2);
        return st.rho_plus(y) * st.u1_plus(y);
    };
    for (int i = 1; i < 50; ++i) {
        const double y = i / 50.0;
        const double lhs = psim(y);
        const double rhs =
            integrate_gl(outlet_flux, geom.a, st.x2_of_y(y), 32);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
}

TEST_CASE("critical pressure matches the frozen sonic oracle") {
    const InletProfile pr = constant_profile(1.0, 1.0, 2.0);
    CHECK(critical_pressure(pr, 1.0) ==
          doctest::Approx(20.25).epsilon(1e-13));
    CHECK(sonic_pressure(pr, 1.0, 0.3) ==
          doctest::Approx(0.5).epsilon(1e-13));

    // sharp sonic condition: at p = sonic_pressure the state the closed
    // forms produce is exactly sonic (q^2 = c^2)
    const double g = 1.4;
    const InletProfile pr2 = constant_profile(1.3, 0.9, g);
    const double m = 2.5 * m_hat(pr2);
    const double pb = sonic_pressure(pr2, m, 0.4);
    const double S = 0.9, B = bernoulli_at(pr2, m, 0.4, 0);
    const double rho = std::pow(g * pb / ((g - 1.0) * S), 1.0 / g);
    const double c2 = g * pb / rho;
    const double q2 = 2.0 * (B - g * pb / ((g - 1.0) * rho));
    CHECK(q2 == doctest::Approx(c2).epsilon(1e-11));

    // monotone in the Mach content of the data
    const InletProfile fast = constant_profile(1.2, 1.0, 2.0);
    CHECK(critical_pressure(fast, 1.0) > critical_pressure(pr, 1.0));
}

TEST_CASE("far-field profiles match the truncated solve downstream") {
    const Geometry geom = make_tanh(0.005, 0.985, 0.3);
    const InletProfile pr = constant_profile(1.0, 1.0, 1.4);
    const double m = 16.0 * m_hat(pr);
    auto clo = std::make_shared<const StreamClosure>(build_closure(pr, m));

    DomainOptions dopts;
    dopts.solver.n1 = 129;
    dopts.solver.n2 = 49;
    const DomainStudy study = extend_domain(geom, clo, m, 2.0, dopts);
    const PrimitiveField prim = reconstruct(study.field);
    const AsymptoticState st = outlet_state(pr, m, geom);

    const Grid& gr = study.field.grid;
    const int i = gr.n1 - 1;
    double err_u = 0.0, err_p = 0.0;
    for (int j = 0; j < gr.n2; ++j) {
        const double x2 =
            unflatten(geom, Eigen::Vector2d(gr.y1(i), gr.y2(j)))(1);
        const double u_ref = st.u1_plus(st.y_of_x2(x2));
        err_u = std::max(err_u, std::abs(prim.u1(i, j) - u_ref));
        err_p = std::max(err_p, std::abs(prim.p(i, j) - st.p_plus));
    }
    CHECK(err_u < 1e-3);
    CHECK(err_p < 1e-3);

    // vertical velocity decays monotonically into both far ends
    auto vmax = [&](int ii) {
        double t = 0.0;
        for (int j = 0; j < gr.n2; ++j)
            t = std::max(t, std::abs(prim.u2(ii, j)));
        return t;
    };
    for (int k = 0; k < 5; ++k) {
        CHECK(vmax(gr.n1 - 1 - k) <= vmax(gr.n1 - 6 - k) + 1e-12);
        CHECK(vmax(k) <= vmax(k + 5) + 1e-12);
    }
}
