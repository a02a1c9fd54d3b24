#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nozzleflow/geometry.hpp"

using namespace nozzleflow;

TEST_CASE("straight geometry has unit width") {
    const Geometry geom = make_straight();
    CHECK(geom.width(0.3) == 1.0);
}
