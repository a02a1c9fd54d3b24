#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "nozzleflow/fields.hpp"
#include "nozzleflow/solver.hpp"

using namespace nozzleflow;

TEST_CASE("uniform flow is the exact discrete solution") {
    const InletProfile prof = constant_profile(1.0, 1.0, 1.4);
    const double m = 2.0 * m_hat(prof);
    auto clo = std::make_shared<StreamClosure>(build_closure(prof, m));
    SolverOptions opts;
    opts.n1 = 65;
    opts.n2 = 33;
    auto [field, rep] = solve_bounded(make_straight(), clo, m, 1.0, opts);
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    CHECK(rep.residual < 1e-12);
    for (int j = 0; j < field.grid.n2; ++j) {
        CHECK(field.psi(32, j) == m * field.grid.y2(j));
    }
}
