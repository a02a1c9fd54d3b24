#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "nozzleflow/fields.hpp"

using namespace nozzleflow;

TEST_CASE("uniform flow reconstructs with zero vertical velocity") {
    const InletProfile prof = constant_profile(1.0, 1.0, 1.4);
    const double m = 2.0 * m_hat(prof);
    auto clo = std::make_shared<StreamClosure>(build_closure(prof, m));
    SolverOptions opts;
    opts.n1 = 65;
    opts.n2 = 33;
    auto [field, rep] = solve_bounded(make_straight(), clo, m, 1.0, opts);
    const PrimitiveField prim = reconstruct(field);
    CHECK(prim.u2.cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(station_flux(field, 10) - m) < 1e-12);
}
