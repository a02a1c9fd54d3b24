#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nozzleflow/closure.hpp"

using namespace nozzleflow;

TEST_CASE("constant-data closure reproduces the inlet state") {
    const InletProfile prof = constant_profile(1.0, 1.0, 2.0);
    const double m = 2.0 * m_hat(prof);
    const StreamClosure clo = build_closure(prof, m);
    CHECK(std::abs(clo.S(0.5 * m) - 1.0) < 1e-12);
}
