#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nozzleflow/numerics.hpp"

using namespace nozzleflow;

TEST_CASE("gauss-legendre integrates smooth functions to near machine") {
    const double v = integrate_gl([](double x) { return std::sin(x); }, 0.0,
                                  1.0, 4);
    CHECK(std::abs(v - (1.0 - std::cos(1.0))) < 1e-15);
}
